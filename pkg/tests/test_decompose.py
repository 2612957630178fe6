import pytest

from jordec.algebra import (BlockPartition, block_pair_bimodule, corner_scalar_bimodule,
                            direct_sum, natural_bimodule, regular_bimodule)
from jordec.decompose import correction_element, decompose, verify_proof_steps
from jordec.errors import NotJordan, NotSplittable
from jordec.maps import (LinearMap, ProjectionOracle, inner_derivation, is_kind, sample_map,
                         sample_maps, space_basis, vanishes_on_diagonal)

P11 = BlockPartition((1, 1))
P111 = BlockPartition((1, 1, 1))


def worked_map():
    # basis order (E00, E01, E11): D(E00) = 1, D(E01) = 5, D(E11) = -1
    return LinearMap(corner_scalar_bimodule(P11), ((1,), (5,), (-1,)))


def test_correction_element_examples():
    m = natural_bimodule(P11)
    assert not any(correction_element(LinearMap.zero(m)))
    # f(P) = P M P already: no correction needed
    f = LinearMap(m, ((1, 0, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0)))
    assert not any(correction_element(f))
    # P.1.Q - Q.1.P = 0 - 1*1*1
    assert correction_element(worked_map()) == (-1,)
    with pytest.raises(NotSplittable):
        correction_element(LinearMap.zero(natural_bimodule(BlockPartition((2,)))))


def test_worked_example_trace():
    f = worked_map()
    pair, trace = decompose(f)
    assert [lvl.B for lvl in trace.levels] == [(-1,)]
    assert [lvl.sub_dim for lvl in trace.levels] == [0]
    assert pair.d.images == ((1,), (0,), (-1,))
    assert pair.alpha.images == ((0,), (5,), (0,))
    # d = I_B with B = -1
    assert pair.d == inner_derivation(f.bimodule, (-1,))


def test_zero_map():
    m = natural_bimodule(BlockPartition((2, 1, 1)))
    pair, trace = decompose(LinearMap.zero(m))
    assert pair.d.is_zero() and pair.alpha.is_zero()
    assert len(trace.levels) == 2
    assert all(not any(lvl.B) for lvl in trace.levels)


def test_inner_derivation_decomposes_trivially():
    m = regular_bimodule(BlockPartition((2, 1)))
    f = inner_derivation(m, tuple(range(1, m.dim + 1)))
    pair, _ = decompose(f)
    assert pair.d == f and pair.alpha.is_zero()


def test_base_case():
    m = natural_bimodule(BlockPartition((2,)))
    f = sample_map(space_basis("jordan", m), 4)
    pair, trace = decompose(f)
    assert pair.d == f and pair.alpha.is_zero() and trace.levels == ()


def test_not_jordan_rejected():
    f = worked_map()
    bad = LinearMap(f.bimodule, ((1,), (5,), (1,)))
    with pytest.raises(NotJordan):
        decompose(bad)
    with pytest.raises(NotJordan):
        verify_proof_steps(bad)


DEEP = [
    block_pair_bimodule(P111, 2, 1),          # gamma lives one level down
    block_pair_bimodule(P111, 1, 0),
    direct_sum(natural_bimodule(P111), block_pair_bimodule(P111, 2, 1)),
    block_pair_bimodule(BlockPartition((2, 1, 1)), 2, 1),
    corner_scalar_bimodule(P11),
    natural_bimodule(BlockPartition((1, 2))),
    regular_bimodule(BlockPartition((2, 2))),
]


@pytest.mark.parametrize("m", DEEP, ids=lambda m: f"{m.partition}-{m.label}")
def test_decompose_properties(m):
    jordan = space_basis("jordan", m)
    oracle = ProjectionOracle(m)
    for f in sample_maps(jordan, seed=21, count=8):
        pair, trace = decompose(f)
        assert pair.d + pair.alpha == f
        assert is_kind(pair.d, "derivation") and is_kind(pair.alpha, "antiderivation")
        assert vanishes_on_diagonal(pair.alpha)
        expected = oracle.decompose(f)
        assert pair.d == expected.d and pair.alpha == expected.alpha
        assert len(trace.levels) == m.partition.k - 1
        # idempotence on the two components
        again, _ = decompose(pair.d)
        assert again.d == pair.d and again.alpha.is_zero()
        again, _ = decompose(pair.alpha)
        assert again.d.is_zero() and again.alpha == pair.alpha


def test_deep_gamma_is_nonzero():
    m = block_pair_bimodule(P111, 2, 1)
    f = sample_map(space_basis("antiderivation_diag0", m), 2)
    assert not f.is_zero()
    pair, trace = decompose(f)
    assert pair.alpha == f
    assert [lvl.sub_dim for lvl in trace.levels] == [1, 0]


@pytest.mark.parametrize("m", DEEP[:4], ids=lambda m: f"{m.partition}-{m.label}")
def test_uniqueness_rigidity(m):
    d_space = space_basis("derivation", m)
    beta_space = space_basis("antiderivation_diag0", m)
    f = sample_maps(space_basis("jordan", m), 5, 1)[0]
    pair, _ = decompose(f)
    for beta in beta_space.maps:
        shifted_d, shifted_a = pair.d - beta, pair.alpha + beta
        assert not (is_kind(shifted_d, "derivation") and is_kind(shifted_a, "antiderivation"))
    assert d_space.dim + beta_space.dim == space_basis("jordan", m).dim


@pytest.mark.parametrize("m", DEEP + [natural_bimodule(BlockPartition((2, 2)))],
                         ids=lambda m: f"{m.partition}-{m.label}")
def test_proof_steps_pass(m):
    if m.partition.k < 2:
        pytest.skip("needs two blocks")
    for f in sample_maps(space_basis("jordan", m), 8, 2):
        report = verify_proof_steps(f, samples=8)
        assert report.ok, report.as_dict()
        assert all(s.checks > 0 for s in report.steps.values())


def test_proof_steps_on_derivation():
    m = regular_bimodule(P111)
    d = sample_map(space_basis("derivation", m), 1)
    assert verify_proof_steps(d).ok


def test_step_report_detects_tampering(monkeypatch):
    # Sabotage the correction element: step identities relying on it must fail.
    import sys
    dec = sys.modules["jordec.decompose"]
    monkeypatch.setattr(dec, "correction_element", lambda f: (0,))
    report = dec.verify_proof_steps(worked_map(), samples=2)
    assert not report.ok
    assert not report.steps["step1"].passed
