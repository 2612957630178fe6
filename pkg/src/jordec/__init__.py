"""Jordan derivations of block upper triangular matrix algebras over exact rationals."""

from .algebra import (AlgebraElement, Bimodule, BlockPartition, block_pair_bimodule,
                      canonical_basis, check_bimodule_axioms, compress_corner,
                      corner_scalar_bimodule, diagonal_basis, direct_sum, idempotents,
                      load_custom, natural_bimodule, pq_split, regular_bimodule)
from .decompose import correction_element, decompose, verify_proof_steps
from .errors import (AxiomViolation, InputError, JordecError, NotJordan, NotSplittable,
                     TheoremViolation)
from .maps import (LinearMap, ProjectionOracle, apply, constraint_matrix, dims_report,
                   inner_derivation, is_kind, project_decompose_oracle, sample_map,
                   sample_maps, space_basis, vanishes_on_diagonal)

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement", "Bimodule", "BlockPartition", "block_pair_bimodule", "canonical_basis",
    "check_bimodule_axioms", "compress_corner", "corner_scalar_bimodule", "diagonal_basis",
    "direct_sum", "idempotents", "load_custom", "natural_bimodule", "pq_split",
    "regular_bimodule", "correction_element", "decompose", "verify_proof_steps",
    "AxiomViolation", "InputError", "JordecError", "NotJordan", "NotSplittable",
    "TheoremViolation", "LinearMap", "ProjectionOracle", "apply", "constraint_matrix",
    "dims_report", "inner_derivation", "is_kind", "project_decompose_oracle", "sample_map",
    "sample_maps", "space_basis", "vanishes_on_diagonal",
]
