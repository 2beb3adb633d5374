"""Length functions, growth profiles and fusion-support triples.

A length assigns a nonnegative number to every irreducible label; blocks are
grouped into integer buckets ``n <= l < n + 1``.  Word lengths (breadth-first
through fusion with a conjugation-closed generating set) are exact integers;
Lie duals use the Weyl-invariant Euclidean norm on highest weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .fusion import (
    BudgetError,
    CompactLieDual,
    FamilyError,
    FusionRing,
    Label,
    enumerate_irreps,
)


@dataclass
class LengthSpec:
    """A length function restricted to a finite ball of labels."""

    ring: FusionRing
    radius: int
    values: Dict[Label, float]
    generating_set: Optional[tuple] = None

    def length(self, a: Label) -> float:
        try:
            return self.values[a]
        except KeyError:
            raise FamilyError("label %r is outside the tabulated ball" % (a,))

    def bucket(self, a: Label) -> int:
        return int(math.floor(self.length(a)))

    def labels(self) -> List[Label]:
        return list(self.values)

    def bucket_labels(self, n: int) -> List[Label]:
        return [a for a in self.values if self.bucket(a) == n]


def word_length_table(
    ring: FusionRing,
    generating_set: Optional[Sequence[Label]] = None,
    radius: int = 6,
    budget: int = 200_000,
) -> LengthSpec:
    """Word lengths w.r.t. a conjugation-closed generating set.

    With the default generating set this delegates to the ring's
    breadth-first enumeration.  A custom set must be closed under
    conjugation and not contain the unit.
    """
    if isinstance(ring, CompactLieDual):
        raise FamilyError(
            "Lie duals have no word length; use weight_length_table"
        )
    if generating_set is None:
        values = enumerate_irreps(ring, radius, budget)
        return LengthSpec(ring, radius, {k: float(v) for k, v in values.items()})
    gens = list(generating_set)
    if any(g == ring.unit for g in gens):
        raise FamilyError("generating set must not contain the unit")
    for g in gens:
        if ring.conjugate(g) not in gens:
            raise FamilyError(
                "generating set is not closed under conjugation: missing %r"
                % (ring.conjugate(g),)
            )
    values: Dict[Label, float] = {ring.unit: 0.0}
    frontier = [ring.unit]
    for depth in range(1, radius + 1):
        new = []
        for a in frontier:
            for d in gens:
                for c, _ in ring.fuse(a, d):
                    if c not in values:
                        values[c] = float(depth)
                        new.append(c)
                        if len(values) > budget:
                            raise BudgetError(
                                "length table exceeded budget of %d labels" % budget
                            )
        frontier = new
    return LengthSpec(ring, radius, values, tuple(gens))


def weight_length_table(
    ring: CompactLieDual, radius: int, budget: int = 200_000
) -> LengthSpec:
    """Euclidean-norm lengths on the dominant cone of a Lie dual."""
    if not isinstance(ring, CompactLieDual):
        raise FamilyError("weight_length_table needs a Lie dual")
    return LengthSpec(ring, radius, enumerate_irreps(ring, radius, budget))


def length_table(ring: FusionRing, radius: int, budget: int = 200_000) -> LengthSpec:
    """Family-appropriate default length (word length or weight norm)."""
    if isinstance(ring, CompactLieDual):
        return weight_length_table(ring, radius, budget)
    return word_length_table(ring, radius=radius, budget=budget)


def validate_length(spec: LengthSpec, tol: float = 1e-12) -> List[str]:
    """Check the length axioms on the tabulated ball.

    Returns a list of human-readable violations (empty = all good):
    nonnegativity, vanishing at the unit, conjugation invariance, and
    subadditivity ``l(c) <= l(a) + l(b)`` for constituents inside the ball.
    """
    ring, vals = spec.ring, spec.values
    bad = []
    if vals.get(ring.unit, 0.0) > tol:
        bad.append("unit has nonzero length %r" % vals[ring.unit])
    for a, la in vals.items():
        if la < -tol:
            bad.append("negative length at %r" % (a,))
        abar = ring.conjugate(a)
        if abar in vals and abs(vals[abar] - la) > tol:
            bad.append("conjugation changes length at %r" % (a,))
    if ring.has_fusion:
        for a, la in vals.items():
            for b, lb in vals.items():
                for c, _ in ring.fuse(a, b):
                    lc = vals.get(c)
                    if lc is not None and lc > la + lb + tol:
                        bad.append(
                            "subadditivity fails: l(%r)=%g > %g + %g"
                            % (c, lc, la, lb)
                        )
    return bad


@dataclass
class GrowthProfile:
    """Per-bucket growth data: h[n] = sum of squared quantum dimensions."""

    radius: int
    h: List[Fraction]
    count: List[int]
    max_dim: List[Fraction]

    def rows(self):
        for n in range(self.radius + 1):
            yield n, self.h[n], self.count[n], self.max_dim[n]


def growth_profile(spec: LengthSpec) -> GrowthProfile:
    R = spec.radius
    h = [Fraction(0) for _ in range(R + 1)]
    count = [0] * (R + 1)
    max_dim = [Fraction(0) for _ in range(R + 1)]
    for a in spec.values:
        n = spec.bucket(a)
        if n > R:
            continue
        m = spec.ring.qdim(a)
        h[n] += m * m
        count[n] += 1
        if m > max_dim[n]:
            max_dim[n] = m
    return GrowthProfile(R, h, count, max_dim)


@dataclass
class GrowthClass:
    """Outcome of the growth ratio test."""

    kind: str  # "polynomial" | "exponential" | "indeterminate"
    degree: Optional[float] = None  # log-log slope for polynomial profiles
    ratio: Optional[float] = None  # limiting bucket ratio for exponential ones

    def __str__(self):
        if self.kind == "polynomial":
            return "Polynomial(degree=%.3g)" % self.degree
        if self.kind == "exponential":
            return "Exponential(ratio=%.6g)" % self.ratio
        return "Indeterminate"


def _fit_slope(xs, ys) -> float:
    xbar, ybar = sum(xs) / len(xs), sum(ys) / len(ys)
    return sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / sum(
        (x - xbar) ** 2 for x in xs
    )


def classify_growth(profile: GrowthProfile, theta: float = 0.05) -> GrowthClass:
    """Heuristic polynomial/exponential call from bucket ratios.

    Works on the cumulative profile ``H[n] = h[0] + ... + h[n]`` (monotone,
    which smooths shell-counting noise).  Let ``t_n = H[n+1] / H[n]`` over
    the upper half of the window and ``rho`` its geometric mean; ``rho <=
    1 + theta`` reads polynomial outright.  Otherwise the linear trend of
    the scale-adjusted increments ``c_n = n * log(t_n)`` decides: for
    ``H ~ n^d`` the ``c_n`` stay near the constant ``d`` (trend about zero),
    while ``H ~ rho^n`` gives ``c_n ~ n * log(rho)`` (trend ``log(rho)``).
    A trend below ``0.35 * log(rho)`` reads polynomial, above ``0.7 *
    log(rho)`` exponential with bucket ratio ``rho``, anything between is
    left undecided.  Polynomial degrees come from a log-log fit of ``H``
    minus one.  Requires a window of radius at least 12.
    """
    R = profile.radius
    if R < 12:
        raise FamilyError("growth window too small: need radius >= 12, got %d" % R)
    lo = R // 2
    if all(x == 0 for x in profile.h[1:]):
        return GrowthClass("polynomial", degree=0.0)
    cum = []
    total = Fraction(0)
    for x in profile.h:
        total += x
        cum.append(total)
    ns = list(range(lo, R))
    ratios = [float(cum[n + 1] / cum[n]) for n in ns]
    rho = math.exp(sum(math.log(r) for r in ratios) / len(ratios))

    def poly_degree() -> float:
        xs = [math.log(n) for n in range(lo, R + 1)]
        ys = [math.log(float(cum[n])) for n in range(lo, R + 1)]
        return _fit_slope(xs, ys) - 1.0

    if rho <= 1 + theta:
        return GrowthClass("polynomial", degree=poly_degree())
    cs = [n * math.log(t) for n, t in zip(ns, ratios)]
    trend = _fit_slope(ns, cs)
    if trend <= 0.35 * math.log(rho):
        return GrowthClass("polynomial", degree=poly_degree())
    if trend >= 0.7 * math.log(rho):
        return GrowthClass("exponential", ratio=rho)
    return GrowthClass("indeterminate")


@dataclass
class TripleSet:
    """Bucket triples (k, l, n) supporting the fusion coproduct in a ball."""

    radius: int
    triples: frozenset

    def __contains__(self, t):
        return t in self.triples

    def violations(self) -> List[str]:
        """Permutation stability and near-triangle bound failures."""
        bad = []
        for k, l, n in self.triples:
            for perm in ((k, n, l), (l, k, n), (l, n, k), (n, k, l), (n, l, k)):
                if perm not in self.triples:
                    bad.append(
                        "permutation %r of %r missing" % (perm, (k, l, n))
                    )
            if not (abs(k - l) - 2 <= n <= k + l + 2):
                bad.append("triple %r outside widened triangle bounds" % ((k, l, n),))
        return bad

    def exact_triangle(self) -> bool:
        """Whether membership is exactly |k - l| <= n <= k + l (+ stored parity)."""
        return all(abs(k - l) <= n <= k + l for k, l, n in self.triples)


def triple_set(spec: LengthSpec) -> TripleSet:
    """All bucket triples (k, l, n) with a constituent in bucket n of a
    product of blocks in buckets k and l, restricted to the tabulated ball."""
    ring = spec.ring
    R = spec.radius
    if isinstance(ring, CompactLieDual) and not ring.has_fusion:
        raise FamilyError(
            "triple set needs fusion rules (unavailable for rank >= 2 Lie duals)"
        )
    buckets: Dict[Label, int] = {a: spec.bucket(a) for a in spec.values}
    triples = set()
    items = list(buckets.items())
    for b, k in items:
        for a, l in items:
            kl = {(c, m) for c, m in ring.fuse(b, a)}
            for c, _ in kl:
                n = buckets.get(c)
                if n is None:
                    # constituent fell outside the ball; only keep fully
                    # interior data
                    continue
                triples.add((k, l, n))
    return TripleSet(R, frozenset(triples))


@dataclass
class DominationReport:
    """Comparison of two lengths on a common ball: l0 >= eps * l."""

    measured_epsilon: float
    proof_epsilon: float
    witness: Label


def dominate_epsilon(
    spec0: LengthSpec, spec: LengthSpec, tol: float = 1e-12
) -> DominationReport:
    """Largest eps with ``l0 >= eps * l`` on the common ball.

    ``spec0`` is typically a word length; the proof-side bound is ``1 / C``
    with ``C`` the largest ``l`` value on labels where ``l0 <= 1``.
    Raises ``FamilyError`` when ``l0`` vanishes on a label of positive ``l``
    (no domination possible).
    """
    common = [a for a in spec0.values if a in spec.values]
    if not common:
        raise FamilyError("length tables share no labels")
    measured = math.inf
    witness = spec0.ring.unit
    C = 0.0
    for a in common:
        l0, l = spec0.values[a], spec.values[a]
        if l > tol:
            if l0 <= tol:
                raise FamilyError(
                    "first length vanishes at %r where second is positive" % (a,)
                )
            if l0 / l < measured:
                measured = l0 / l
                witness = a
        if l0 <= 1 + tol and l > C:
            C = l
    proof = 1.0 / C if C > 0 else math.inf
    return DominationReport(measured, proof, witness)
