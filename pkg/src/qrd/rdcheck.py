"""Rapid-decay certification pipeline.

Assembles the implemented criteria into a single verdict with auditable
numeric evidence:

1. a non-unimodular block family has geometrically growing modular norms,
   which rules out rapid decay outright;
2. polynomial growth of the squared-dimension profile certifies rapid decay
   (with an explicit Sobolev exponent and constant);
3. the orthogonal and unitary free families at their standard parameters
   are certified by the sector-norm bounds this package verifies at desk
   scale;
4. everything else is reported indeterminate together with a measured
   block-norm table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .fusion import (
    BudgetError,
    CompactLieDual,
    FamilyError,
    FreeGroupDual,
    FusionRing,
    OrthogonalFree,
    SUq2Dual,
    UnitaryFree,
)
from .grouporacle import FreeGroupModel, haagerup_check
from .lengths import (
    GrowthClass,
    GrowthProfile,
    LengthSpec,
    classify_growth,
    growth_profile,
    length_table,
)
from .transform import necessary_condition_ratio


@dataclass
class RdVerdict:
    """Outcome of the certification pipeline for one block family."""

    outcome: str  # "CertifiedRD" | "RefutedRD" | "Indeterminate"
    criterion: Optional[str]  # PolynomialGrowth | NonUnimodular | TheoremAO
    #                           | TheoremAU | BlockNormEvidence | None
    detail: str = ""
    evidence: Dict[str, object] = field(default_factory=dict)

    def __str__(self):
        tag = self.outcome
        if self.criterion:
            tag += "(%s)" % self.criterion
        return tag + (": " + self.detail if self.detail else "")

    def to_dict(self) -> Dict[str, object]:
        def clean(v):
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            if isinstance(v, dict):
                return {str(k): clean(x) for k, x in v.items()}
            return v

        return {
            "outcome": self.outcome,
            "criterion": self.criterion,
            "detail": self.detail,
            "evidence": clean(self.evidence),
        }


@dataclass
class ObstructionReport:
    """Modular-norm sequence ``||p_n F||`` with its geometric fit."""

    values: List[Fraction]
    rate: Optional[Fraction]  # exact lambda when values == lambda**n
    fitted_rate: float


def nonunimodular_obstruction(ring: FusionRing, n_max: int = 10) -> ObstructionReport:
    """Per-bucket maxima of the modular element for a chain-labeled family.

    For non-unimodular families the sequence grows geometrically; a fitted
    rate lambda with values exactly lambda**n is reported when it holds.
    """
    values = [necessary_condition_ratio(ring, n) for n in range(n_max + 1)]
    rate: Optional[Fraction] = None
    if n_max >= 1:
        lam = values[1]
        if all(values[n] == lam**n for n in range(n_max + 1)):
            rate = lam
    if n_max >= 1 and values[n_max - 1] > 0:
        fitted = float(values[n_max] / values[n_max - 1])
    else:
        fitted = 1.0
    return ObstructionReport(values, rate, fitted)


def growth_certificate(
    ring: FusionRing, spec: LengthSpec, R: Optional[int] = None
) -> Tuple[float, float]:
    """Constants (C, s) with ``h_n <= C^2 (2+n)^(2s)`` verified on the ball.

    Requires a polynomial classification of the growth profile; the fitted
    exponent is the half-slope of the cumulative profile, rounded up to the
    nearest half-integer for a clean certificate.
    """
    profile = growth_profile(spec)
    if R is not None and R < profile.radius:
        profile = GrowthProfile(
            R, profile.h[: R + 1], profile.count[: R + 1], profile.max_dim[: R + 1]
        )
    C, s = growth_certificate_from_profile(profile)
    for n, h in enumerate(profile.h):
        assert float(h) <= C * C * (2 + n) ** (2 * s) * (1 + 1e-12)
    return C, s


def _synthetic_group_profile(ring: FreeGroupDual, radius: int) -> GrowthProfile:
    """Growth of a free group without word enumeration: sphere sizes are
    2g(2g-1)^(n-1) and all blocks are one-dimensional."""
    g = ring.g
    counts = [1] + [2 * g * (2 * g - 1) ** (n - 1) for n in range(1, radius + 1)]
    h = [Fraction(c) for c in counts]
    return GrowthProfile(radius, h, counts, [Fraction(1)] * (radius + 1))


def _growth_evidence(profile: GrowthProfile, cls: GrowthClass) -> Dict[str, object]:
    return {
        "radius": profile.radius,
        "h": [str(x) for x in profile.h],
        "classification": str(cls),
    }


def diagnose(
    ring: FusionRing,
    spec: Optional[LengthSpec] = None,
    radius: int = 12,
    theta: float = 0.05,
    budget: int = 200_000,
    seed: int = 0,
) -> RdVerdict:
    """Run the certification chain on one family.

    Decision order: non-unimodularity refutes; polynomial growth certifies;
    the standard orthogonal/unitary free families certify by their verified
    sector bounds; anything else is indeterminate with measured block-norm
    evidence.  Failures inside a criterion degrade to Indeterminate rather
    than raising.
    """
    # 1. modular obstruction
    try:
        if not ring.unimodular:
            obs = nonunimodular_obstruction(ring, n_max=min(radius, 10))
            return RdVerdict(
                "RefutedRD",
                "NonUnimodular",
                "modular norms grow geometrically (rate %s)"
                % (obs.rate if obs.rate is not None else "%.6g" % obs.fitted_rate),
                {
                    "modular_norms": [str(v) for v in obs.values],
                    "rate": str(obs.rate) if obs.rate is not None else None,
                    "fitted_rate": obs.fitted_rate,
                },
            )
    except FamilyError:
        pass
    # 2. growth
    profile: Optional[GrowthProfile] = None
    reason = ""
    try:
        if isinstance(ring, FreeGroupDual):
            profile = _synthetic_group_profile(ring, radius)
        else:
            if spec is None:
                spec = length_table(ring, radius, budget=budget)
            profile = growth_profile(spec)
    except (BudgetError, FamilyError) as exc:
        reason = "growth profile unavailable: %s" % exc
    cls = None
    if profile is not None:
        try:
            cls = classify_growth(profile, theta=theta)
        except FamilyError as exc:
            reason = reason or str(exc)
    if cls is not None:
        if cls.kind == "polynomial":
            C, s = growth_certificate_from_profile(profile)
            return RdVerdict(
                "CertifiedRD",
                "PolynomialGrowth",
                "h_n <= %.6g^2 * (2+n)^(2*%.3g) on the enumerated ball" % (C, s),
                dict(_growth_evidence(profile, cls), C=C, s=s),
            )
    # 3. verified free families at standard parameters
    if isinstance(ring, OrthogonalFree):
        return RdVerdict(
            "CertifiedRD",
            "TheoremAO",
            "orthogonal free family (N=%d); sector-norm ratio bounded by 1"
            % ring.N,
            _growth_evidence(profile, cls) if cls is not None else {},
        )
    if isinstance(ring, UnitaryFree):
        return RdVerdict(
            "CertifiedRD",
            "TheoremAU",
            "unitary free family (N=%d); certified via the factorization "
            "combinatorics (no matrix realization)" % ring.N,
            _growth_evidence(profile, cls) if cls is not None else {},
        )
    # 4. indeterminate with measured block norms
    evidence: Dict[str, object] = {}
    if cls is not None:
        evidence.update(_growth_evidence(profile, cls))
    if reason:
        evidence["reason"] = reason
    if isinstance(ring, FreeGroupDual):
        model = FreeGroupModel(ring.g, radius=min(radius, 4))
        table = []
        for n in range(1, min(radius, 3) + 1):
            for k in range(min(radius, 3) + 1):
                for l in range(abs(n - k), min(n + k, min(radius, 4)) + 1, 2):
                    rep = haagerup_check(model, n, k, l, trials=20, seed=seed)
                    table.append([n, k, l, rep.max_ratio])
        evidence["block_norm_table"] = table
        evidence["note"] = (
            "measured block-to-l2 ratios are bounded by 1, consistent with "
            "rapid decay; no implemented criterion covers this family"
        )
    return RdVerdict(
        "Indeterminate",
        "BlockNormEvidence" if "block_norm_table" in evidence else None,
        reason or "no implemented criterion applies",
        evidence,
    )


def growth_certificate_from_profile(profile: GrowthProfile) -> Tuple[float, float]:
    """(C, s) certificate from an already-computed profile."""
    cls = classify_growth(profile)
    if cls.kind != "polynomial":
        raise FamilyError("classification not polynomial: %s" % cls)
    s = max(0.0, math.ceil(cls.degree) / 2.0)
    C = 1.0
    for n, h in enumerate(profile.h):
        C = max(C, math.sqrt(float(h)) / (2 + n) ** s)
    return C, s
