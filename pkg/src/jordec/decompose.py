"""Recursive splitting of a Jordan derivation into derivation + antiderivation.

With P = F_1 and Q = I - P, one level of the recursion:

1. corrects D by the inner derivation I_B, B = P D(P) Q - Q D(P) P, giving
   Delta = D - I_B with P Delta(P) Q = Q Delta(P) P = 0;
2. compresses Delta to the corner map QTQ -> QMQ, which lives over the
   algebra of the remaining blocks, and splits that recursively into
   (g, gamma);
3. assembles, per basis element X,

       delta(X) = P Delta(PXP) P + P Delta(PXQ) Q + g(QXQ)
       alpha(X) = Q Delta(PXQ) P + gamma(QXQ)

   and returns d = delta + I_B together with alpha.

A single block is the base case: every Jordan derivation of a full matrix
algebra is a derivation, which is checked rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebra import (AlgebraElement, BlockPartition, canonical_basis, commutator,
                      compress_corner, corner_element, multiply,
                      peirce_parts, pq_split, shift_index)
from .errors import JordecError, NotJordan, TheoremViolation
from .exact_linalg import ZERO
from .maps import (DecompositionPair, LinearMap, apply, inner_derivation, is_kind,
                   restrict_corner_map, vanishes_on_diagonal)
from .rng import XorShift64Star


@dataclass(frozen=True)
class TraceLevel:
    partition: BlockPartition
    B: tuple
    sub_dim: int


@dataclass(frozen=True)
class DecompositionTrace:
    levels: tuple


def _sub(u, v):
    return tuple(x - y for x, y in zip(u, v))


def _add(u, v):
    return tuple(x + y for x, y in zip(u, v))


def _sandwich(m, left: AlgebraElement, v, right: AlgebraElement) -> tuple:
    """left . v . right"""
    return m.left_apply(left, m.right_apply(right, v))


def correction_element(f: LinearMap) -> tuple:
    """B = P f(P) Q - Q f(P) P."""
    big_p, big_q, _ = pq_split(f.partition)
    m = f.bimodule
    f_p = apply(f, big_p)
    return _sub(_sandwich(m, big_p, f_p, big_q), _sandwich(m, big_q, f_p, big_p))


def decompose(f: LinearMap) -> tuple:
    """Split a Jordan derivation as ``d + alpha``.

    Returns ``(DecompositionPair, DecompositionTrace)``.  Raises
    :class:`NotJordan` for invalid input and :class:`TheoremViolation`,
    labelled with the failing step, if any intermediate identity breaks.
    """
    check = is_kind(f, "jordan")
    if not check:
        raise NotJordan(f"map is not a Jordan derivation; identity fails at {check.witness}",
                        check.witness)
    levels: list = []
    pair = _decompose(f, levels)
    failures = pair.invariant_failures(f)
    if failures:
        raise TheoremViolation("assembly", "; ".join(failures))
    return pair, DecompositionTrace(tuple(levels))


def _decompose(f: LinearMap, levels: list) -> DecompositionPair:
    p = f.partition
    m = f.bimodule
    if p.k == 1:
        check = is_kind(f, "derivation")
        if not check:
            raise TheoremViolation("base case", "Jordan map on a full matrix algebra "
                                   "is not a derivation", check.witness)
        return DecompositionPair(f, LinearMap.zero(m))

    big_p, big_q, _ = pq_split(p)
    b = correction_element(f)
    inner = inner_derivation(m, b)
    delta = f - inner
    delta_p = apply(delta, big_p)
    if any(_sandwich(m, big_p, delta_p, big_q)) or any(_sandwich(m, big_q, delta_p, big_p)):
        raise TheoremViolation("correction", "P Delta(P) Q or Q Delta(P) P is nonzero")

    cc = compress_corner(m)
    levels.append(TraceLevel(p, b, cc.sub_bimodule.dim))
    corner_map = restrict_corner_map(delta, cc)
    check = is_kind(corner_map, "jordan")
    if not check:
        raise TheoremViolation("step 4", "corner restriction is not a Jordan derivation",
                               check.witness)
    sub = _decompose(corner_map, levels)

    lp, rp = m.left_matrix(big_p), m.right_matrix(big_p)
    lq, rq = m.left_matrix(big_q), m.right_matrix(big_q)
    tail_pos = {a: t for t, a in enumerate(shift_index(p))}
    n1 = p.parts[0]
    zero = (ZERO,) * m.dim
    d_imgs, a_imgs = [], []
    for a, (i, j) in enumerate(canonical_basis(p).pairs):
        v = delta.images[a]
        if j < n1:
            d_imgs.append(lp @ (rp @ v))
            a_imgs.append(zero)
        elif i < n1:
            d_imgs.append(lp @ (rq @ v))
            a_imgs.append(lq @ (rp @ v))
        else:
            t = tail_pos[a]
            d_imgs.append(cc.embed @ sub.d.images[t])
            a_imgs.append(cc.embed @ sub.alpha.images[t])
    small_delta = LinearMap(m, tuple(d_imgs))
    alpha = LinearMap(m, tuple(a_imgs))
    if small_delta + alpha != delta:
        raise TheoremViolation("step 1", "Delta is not the sum of its Peirce pieces")
    return DecompositionPair(small_delta + inner, alpha)


# ---------------------------------------------------------------------------
# Step diagnostics
# ---------------------------------------------------------------------------

@dataclass
class StepResult:
    passed: bool = True
    checks: int = 0
    witness: Optional[str] = None

    def record(self, ok: bool, witness) -> None:
        self.checks += 1
        if not ok and self.passed:
            self.passed = False
            self.witness = str(witness)


@dataclass
class StepReport:
    steps: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(s.passed for s in self.steps.values())

    def as_dict(self) -> dict:
        return {name: {"passed": s.passed, "checks": s.checks, "witness": s.witness}
                for name, s in self.steps.items()}


STEPS = ("step1", "step2", "step3", "step4", "step5", "step6")


def _random_element(p: BlockPartition, rng: XorShift64Star) -> AlgebraElement:
    size = len(canonical_basis(p))
    return AlgebraElement.from_coords(p, [rng.randint(-9, 9) for _ in range(size)])


def verify_proof_steps(f: LinearMap, samples: int = 32, seed: int = 0) -> StepReport:
    """Evaluate every intermediate identity of one recursion level exactly.

    X, Y, Z range over all basis elements (restricted to the Peirce pieces
    where an identity can be nonzero) plus ``samples`` seeded random
    triples with entries in [-9, 9].
    """
    check = is_kind(f, "jordan")
    if not check:
        raise NotJordan(f"map is not a Jordan derivation; identity fails at {check.witness}",
                        check.witness)
    p = f.partition
    m = f.bimodule
    big_p, big_q, _ = pq_split(p)
    report = StepReport({name: StepResult() for name in STEPS})
    r1, r2, r3, r4, r5, r6 = (report.steps[s] for s in STEPS)

    delta = f - inner_derivation(m, correction_element(f))

    def dl(x):
        return apply(delta, x)

    def sand(a, v, b):
        return _sandwich(m, a, v, b)

    left, right = m.left_apply, m.right_apply

    basis = canonical_basis(p)
    units = [AlgebraElement.unit(p, i, j) for i, j in basis.pairs]
    rng = XorShift64Star(seed)
    triples = [tuple(_random_element(p, rng) for _ in range(3)) for _ in range(samples)]
    pieces = [peirce_parts(x) for x in units]
    n1 = p.parts[0]
    ptp = [x for x, (i, j) in zip(units, basis.pairs) if j < n1]
    ptq = [x for x, (i, j) in zip(units, basis.pairs) if i < n1 <= j]
    qtq = [x for x, (i, j) in zip(units, basis.pairs) if i >= n1]
    sampled = [peirce_parts(x) for x, _, _ in triples]
    sampled_y = [peirce_parts(y) for _, y, _ in triples]
    sampled_z = [peirce_parts(z) for _, _, z in triples]

    # Step 1: Peirce decomposition of Delta.
    for x, (xpp, xpq, xqq) in zip(units + [t[0] for t in triples], pieces + sampled):
        dq, dp, dpq = dl(xqq), dl(xpp), dl(xpq)
        for label, v in (("P D(QXQ) P", sand(big_p, dq, big_p)),
                         ("P D(QXQ) Q", sand(big_p, dq, big_q)),
                         ("Q D(QXQ) P", sand(big_q, dq, big_p)),
                         ("P D(PXQ) P", sand(big_p, dpq, big_p)),
                         ("Q D(PXQ) Q", sand(big_q, dpq, big_q))):
            r1.record(not any(v), (label, x.coords))
        r1.record(dp == sand(big_p, dp, big_p), ("D(PXP) = P D(PXP) P", x.coords))
        whole = _add(_add(sand(big_p, dp, big_p), sand(big_p, dpq, big_q)),
                     _add(sand(big_q, dpq, big_p), sand(big_q, dq, big_q)))
        r1.record(dl(x) == whole, ("four-term split", x.coords))

    # Steps 2, 3 and 5 on pairs.
    pairs_pp = [(x, y) for x in ptp for y in ptp] + [(s[0], t[0]) for s, t in zip(sampled, sampled_y)]
    for x, y in pairs_pp:
        lhs = sand(big_p, dl(multiply(x, y)), big_p)
        rhs = _add(left(x, sand(big_p, dl(y), big_p)), right(y, sand(big_p, dl(x), big_p)))
        r2.record(lhs == rhs, ("P D(PXP PYP) P", x.coords, y.coords))

    pairs_3a = [(x, y) for x in ptp for y in ptq] + [(s[0], t[1]) for s, t in zip(sampled, sampled_y)]
    for x, y in pairs_3a:
        lhs = sand(big_p, dl(multiply(x, y)), big_q)
        rhs = _add(left(x, sand(big_p, dl(y), big_q)), right(y, sand(big_p, dl(x), big_p)))
        r3.record(lhs == rhs, ("P D(PXP PYQ) Q", x.coords, y.coords))
    pairs_3b = [(x, y) for x in ptq for y in qtq] + [(s[1], t[2]) for s, t in zip(sampled, sampled_y)]
    for x, y in pairs_3b:
        lhs = sand(big_p, dl(multiply(x, y)), big_q)
        rhs = _add(left(x, sand(big_q, dl(y), big_q)), right(y, sand(big_p, dl(x), big_q)))
        r3.record(lhs == rhs, ("P D(PXQ QYQ) Q", x.coords, y.coords))

    pairs_5 = [(x, y) for x in ptq for y in ptq] + [(s[1], t[1]) for s, t in zip(sampled, sampled_y)]
    for x, y in pairs_5:
        r5.record(not any(left(x, right(big_p, dl(y)))), ("PXQ D(PYQ) P", x.coords, y.coords))
        r5.record(not any(right(y, left(big_q, dl(x)))), ("Q D(PXQ) PYQ", x.coords, y.coords))

    # Step 4: the corner map splits as g + gamma, and gamma is annihilated by PTQ.
    cc = compress_corner(m)
    corner_map = restrict_corner_map(delta, cc)
    try:
        sub, _ = decompose(corner_map)
    except JordecError as exc:
        r4.record(False, ("corner decomposition", str(exc)))
        sub = None
    if sub is not None:
        g, gamma = sub.d, sub.alpha
        r4.record(g + gamma == corner_map, "G = g + gamma")
        r4.record(bool(is_kind(g, "derivation")), "g is a derivation")
        r4.record(bool(is_kind(gamma, "antiderivation")), "gamma is an antiderivation")
        r4.record(vanishes_on_diagonal(gamma), "gamma vanishes on the tail diagonal")
        shift = shift_index(p)
        for t, a in enumerate(shift):
            r4.record(cc.embed @ corner_map.images[t] == sand(big_q, delta.images[a], big_q),
                      ("G(QXQ) = Q D(QXQ) Q", basis.pairs[a]))

        def gamma_of(y: AlgebraElement) -> tuple:
            return cc.embed @ apply(gamma, corner_element(y))

        pairs_4 = [(x, y) for x in ptq for y in qtq] + [(s[1], t[2]) for s, t in zip(sampled, sampled_y)]
        for x, y in pairs_4:
            r4.record(not any(left(x, gamma_of(y))), ("PXQ gamma(QYQ)", x.coords, y.coords))
        triples_4 = [(x, y, z) for x in ptq for y in qtq for z in qtq]
        triples_4 += [(s[1], t[2], u[2]) for s, t, u in zip(sampled, sampled_y, sampled_z)]
        for x, y, z in triples_4:
            r4.record(not any(left(x, gamma_of(commutator(y, z)))),
                      ("PXQ gamma([QYQ,QZQ])", x.coords, y.coords, z.coords))

        # Step 6: the assembled pieces.
        n_imgs, a_imgs = [], []
        tail_pos = {a: t for t, a in enumerate(shift)}
        zero = (ZERO,) * m.dim
        for a, (i, j) in enumerate(basis.pairs):
            v = delta.images[a]
            if j < n1:
                n_imgs.append(sand(big_p, v, big_p))
                a_imgs.append(zero)
            elif i < n1:
                n_imgs.append(sand(big_p, v, big_q))
                a_imgs.append(sand(big_q, v, big_p))
            else:
                n_imgs.append(cc.embed @ g.images[tail_pos[a]])
                a_imgs.append(cc.embed @ gamma.images[tail_pos[a]])
        small_delta, alpha = LinearMap(m, tuple(n_imgs)), LinearMap(m, tuple(a_imgs))
        r6.record(bool(is_kind(small_delta, "derivation")), "delta is a derivation")
        r6.record(bool(is_kind(alpha, "antiderivation")), "alpha is an antiderivation")
        r6.record(vanishes_on_diagonal(alpha), "alpha vanishes on the diagonal")
        r6.record(small_delta + alpha == delta, "Delta = delta + alpha")
    return report
