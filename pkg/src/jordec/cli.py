"""Command-line front end.

Exit codes: 0 success, 2 bad input, 3 direct-sum failure, 4 predicate
failure (including non-Jordan input), 5 theorem falsification, 6 bimodule
axiom failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .algebra import (BUILTIN, Bimodule, BlockPartition, builtin_bimodule, canonical_basis,
                      check_bimodule_axioms, load_custom, bimodule_from_json)
from .decompose import decompose, verify_proof_steps
from .errors import AxiomViolation, InputError, JordecError, NotJordan, NotSplittable, TheoremViolation
from .exact_linalg import format_rational
from .maps import (KINDS, LinearMap, ProjectionOracle, dims_report, is_kind, sample_maps,
                   space_basis)
from .serialize import dumps, vector_to_json

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DIRECT_SUM = 3
EXIT_PREDICATE = 4
EXIT_THEOREM = 5
EXIT_AXIOM = 6


# ---------------------------------------------------------------------------
# Map files
# ---------------------------------------------------------------------------

def map_to_json(f: LinearMap, bimodule_spec) -> dict:
    return {"partition": list(f.partition.parts),
            "bimodule": bimodule_spec,
            "images": [vector_to_json(v) for v in f.images]}


def resolve_bimodule(spec, p: BlockPartition, base: Path = Path(".")) -> Bimodule:
    """Turn a map file's ``bimodule`` field into a Bimodule."""
    if isinstance(spec, str):
        return builtin_bimodule(spec, p)
    if isinstance(spec, dict) and isinstance(spec.get("custom"), str):
        path = Path(spec["custom"])
        if not path.is_absolute():
            path = base / path
        return load_custom(path, p)
    raise InputError(f"bad bimodule spec {spec!r}")


def map_from_json(data: dict, base: Path = Path(".")):
    """Returns ``(LinearMap, bimodule_spec)``."""
    try:
        p = BlockPartition(tuple(data["partition"]))
        spec = data["bimodule"]
        images = data["images"]
    except (KeyError, TypeError) as exc:
        raise InputError("map JSON needs 'partition', 'bimodule' and 'images'") from exc
    m = resolve_bimodule(spec, p, base)
    return LinearMap(m, tuple(tuple(v) for v in images)), spec


def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_maps(path) -> list:
    """Maps in a single-map file or a sample file (``{"maps": [...]}``)."""
    data = _read_json(path)
    base = Path(path).parent
    entries = data["maps"] if isinstance(data, dict) and "maps" in data else [data]
    return [map_from_json(entry, base) for entry in entries]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _bimodule_from_args(args, p: BlockPartition):
    """``(Bimodule, spec)`` from --bimodule / --custom-bimodule."""
    if args.custom_bimodule:
        return load_custom(args.custom_bimodule, p), {"custom": args.custom_bimodule}
    return builtin_bimodule(args.bimodule, p), args.bimodule


def _emit(args, payload: dict, text: str) -> None:
    out = dumps(payload) if args.format == "json" else text
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def cmd_dims(args) -> int:
    p = BlockPartition.parse(args.partition)
    m, spec = _bimodule_from_args(args, p)
    spaces = None
    if args.modulus is None:
        spaces = {k: space_basis(k, m) for k in ("jordan", "derivation", "antiderivation_diag0")}
    report = dims_report(m, modulus=args.modulus, spaces=spaces)
    payload = {"partition": list(p.parts), "bimodule": spec, "dims": report.as_dict()}
    if args.basis and spaces is not None:
        payload["basis"] = {k: [map_to_json(f, spec)["images"] for f in s.maps]
                            for k, s in spaces.items()}
    text = (f"partition={p} bimodule={m.label} dim_M={m.dim}\n"
            f"jordan={report.jordan} der={report.derivation} "
            f"antider0={report.antiderivation_diag0} "
            f"direct_sum={'true' if report.direct_sum_ok else 'false'}\n")
    _emit(args, payload, text)
    return EXIT_OK if report.direct_sum_ok else EXIT_DIRECT_SUM


def cmd_decompose(args) -> int:
    (f, spec), *rest = load_maps(args.map)
    if rest:
        raise InputError("decompose takes a file holding a single map")
    try:
        pair, trace = decompose(f)
    except NotJordan as exc:
        print(f"not a Jordan derivation: identity fails at {exc.witness}", file=sys.stderr)
        return EXIT_PREDICATE
    failures = pair.invariant_failures(f)
    oracle = ProjectionOracle(f.bimodule).decompose(f)
    oracle_ok = oracle.d == pair.d and oracle.alpha == pair.alpha
    checks = {"invariants": {"passed": not failures, "failures": failures},
              "oracle_equivalence": {"passed": oracle_ok}}
    if f.partition.k >= 2:
        steps = verify_proof_steps(f, samples=args.samples, seed=args.seed)
        checks["steps"] = steps.as_dict()
        steps_ok = steps.ok
    else:
        steps_ok = True
    if failures or not oracle_ok or not steps_ok:
        print("theorem check failed: " + json.dumps(checks, sort_keys=True), file=sys.stderr)
        return EXIT_THEOREM
    payload = {"d": map_to_json(pair.d, spec), "alpha": map_to_json(pair.alpha, spec),
               "trace": [{"partition": list(level.partition.parts),
                          "B": vector_to_json(level.B), "sub_dim": level.sub_dim}
                         for level in trace.levels],
               "checks": checks}
    pairs = canonical_basis(f.partition).pairs
    lines = [f"{'basis':>10}  {'d':<30}  alpha"]
    for pr, dv, av in zip(pairs, pair.d.images, pair.alpha.images):
        lines.append(f"{'E' + str(pr):>10}  {' '.join(map(format_rational, dv)):<30}  "
                     f"{' '.join(map(format_rational, av))}")
    for level in trace.levels:
        lines.append(f"level ({level.partition}): B = [{' '.join(map(format_rational, level.B))}]"
                     f" sub_dim = {level.sub_dim}")
    _emit(args, payload, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_sample(args) -> int:
    p = BlockPartition.parse(args.partition)
    m, spec = _bimodule_from_args(args, p)
    if args.count < 0:
        raise InputError("--count must be non-negative")
    space = space_basis(args.kind, m)
    maps = sample_maps(space, seed=args.seed, count=args.count)
    for f in maps:
        if not is_kind(f, args.kind):   # nullspace membership makes this impossible
            raise TheoremViolation("sample", f"sampled map is not a {args.kind}")
    payload = {"kind": args.kind, "seed": args.seed, "space_dim": space.dim,
               "maps": [map_to_json(f, spec) for f in maps]}
    text = "\n".join(" | ".join(" ".join(map(format_rational, v)) for v in f.images)
                     for f in maps) + "\n"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    status = EXIT_OK
    results = []
    for index, (f, _) in enumerate(load_maps(args.map)):
        check = is_kind(f, args.kind)
        results.append({"index": index, "kind": args.kind, "passed": check.ok,
                        "witness": [list(x) for x in check.witness] if check.witness else None})
        if not check:
            status = EXIT_PREDICATE
    text = "".join(f"map {r['index']}: {args.kind} "
                   f"{'ok' if r['passed'] else 'FAILS at ' + str(r['witness'])}\n" for r in results)
    _emit(args, {"results": results}, text)
    return status


def cmd_axioms(args) -> int:
    p = BlockPartition.parse(args.partition)
    if args.custom_bimodule:
        m = bimodule_from_json(_read_json(args.custom_bimodule), p,
                               label=f"custom:{Path(args.custom_bimodule).name}")
    else:
        m = builtin_bimodule(args.bimodule, p)
    report = check_bimodule_axioms(m)
    violations = [{"axiom": v.axiom, "pair": [list(x) if isinstance(x, tuple) else x for x in v.pair]}
                  for v in report.failures]
    text = (f"{m.label}: all axioms hold\n" if report.ok else
            "".join(v.describe() + "\n" for v in report.failures))
    _emit(args, {"bimodule": m.label, "passed": report.ok, "violations": violations}, text)
    return EXIT_OK if report.ok else EXIT_AXIOM


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jordec",
        description="Jordan derivations of block upper triangular matrix algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, bimodule=True):
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--out", help="write output here instead of stdout")
        if bimodule:
            sp.add_argument("--partition", required=True, help="comma separated block sizes, e.g. 2,1,1")
            sp.add_argument("--bimodule", choices=sorted(BUILTIN), default="natural")
            sp.add_argument("--custom-bimodule", metavar="PATH",
                            help="bimodule JSON file (overrides --bimodule)")

    sp = sub.add_parser("dims", help="dimensions of Jordan, Der and Antider_0")
    common(sp)
    sp.add_argument("--modulus", type=int, help="compute over F_p (odd prime p)")
    sp.add_argument("--basis", action="store_true", help="include the space bases")
    sp.set_defaults(func=cmd_dims)

    sp = sub.add_parser("decompose", help="split a Jordan derivation as d + alpha")
    common(sp, bimodule=False)
    sp.add_argument("--map", required=True, metavar="PATH")
    sp.add_argument("--seed", type=int, default=0, help="seed for the step diagnostics")
    sp.add_argument("--samples", type=int, default=32, help="sampled triples for the step diagnostics")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("sample", help="seeded random members of a space")
    common(sp)
    sp.add_argument("--kind", choices=KINDS, default="jordan")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=1)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("verify", help="check maps against a kind's identity")
    common(sp, bimodule=False)
    sp.add_argument("--map", required=True, metavar="PATH")
    sp.add_argument("--kind", choices=KINDS, required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("axioms", help="check the bimodule axioms")
    common(sp)
    sp.set_defaults(func=cmd_axioms)
    return parser


def thread_cap() -> int:
    """Value of JORDEC_THREADS (default 1).  All work currently runs on one thread."""
    raw = os.environ.get("JORDEC_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"JORDEC_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise InputError(f"JORDEC_THREADS must be a positive integer, got {raw!r}")
    return value


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        thread_cap()
        return args.func(args)
    except AxiomViolation as exc:
        print(f"axiom failure: {exc}", file=sys.stderr)
        return EXIT_AXIOM
    except NotJordan as exc:
        print(f"not a Jordan derivation: {exc}", file=sys.stderr)
        return EXIT_PREDICATE
    except TheoremViolation as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return EXIT_THEOREM
    except (InputError, NotSplittable) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except JordecError as exc:  # pragma: no cover - every subclass is handled above
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
