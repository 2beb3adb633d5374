"""Certification pipeline verdicts and their supporting evidence."""

import json
from fractions import Fraction

import pytest

from qrd.fusion import (
    CompactLieDual,
    FamilyError,
    FreeGroupDual,
    OrthogonalFree,
    SUq2Dual,
    UnitaryFree,
    su2_root_data,
    su3_root_data,
)
from qrd.lengths import length_table, weight_length_table
from qrd.rdcheck import (
    RdVerdict,
    diagnose,
    growth_certificate,
    growth_certificate_from_profile,
    nonunimodular_obstruction,
)
from qrd.lengths import growth_profile


def test_obstruction_suq2_half():
    obs = nonunimodular_obstruction(SUq2Dual(Fraction(1, 2)), n_max=10)
    assert obs.rate == 2
    assert obs.values[10] == 2 ** 10
    assert obs.fitted_rate == pytest.approx(2.0)


def test_obstruction_suq2_three_quarters():
    obs = nonunimodular_obstruction(SUq2Dual(Fraction(3, 4)), n_max=6)
    assert obs.rate == Fraction(4, 3)


def test_obstruction_flat_for_unimodular():
    obs = nonunimodular_obstruction(OrthogonalFree(3), n_max=6)
    assert obs.rate == 1
    assert all(v == 1 for v in obs.values)


def test_growth_certificate_su2():
    ring = CompactLieDual(su2_root_data())
    spec = weight_length_table(ring, radius=20)
    C, s = growth_certificate(ring, spec, R=20)
    prof = growth_profile(spec)
    for n, h in enumerate(prof.h):
        assert float(h) <= C * C * (2 + n) ** (2 * s) * (1 + 1e-12)


def test_growth_certificate_rejects_exponential():
    ring = OrthogonalFree(3)
    spec = length_table(ring, radius=14)
    with pytest.raises(FamilyError, match="not polynomial"):
        growth_certificate_from_profile(growth_profile(spec))


def test_diagnose_refutes_nonunimodular():
    verdict = diagnose(SUq2Dual(Fraction(1, 2)))
    assert verdict.outcome == "RefutedRD"
    assert verdict.criterion == "NonUnimodular"
    assert verdict.evidence["rate"] == "2"
    assert verdict.evidence["modular_norms"][3] == "8"


def test_diagnose_certifies_polynomial_growth():
    verdict = diagnose(CompactLieDual(su2_root_data()), radius=16)
    assert verdict.outcome == "CertifiedRD"
    assert verdict.criterion == "PolynomialGrowth"
    assert verdict.evidence["C"] >= 1.0
    assert verdict.evidence["s"] >= 0.5


def test_diagnose_certifies_su3():
    verdict = diagnose(CompactLieDual(su3_root_data()), radius=16)
    assert verdict.outcome == "CertifiedRD"
    assert verdict.criterion == "PolynomialGrowth"


def test_diagnose_orthogonal_free_theorem():
    verdict = diagnose(OrthogonalFree(3), radius=14)
    assert verdict.outcome == "CertifiedRD"
    assert verdict.criterion == "TheoremAO"
    assert verdict.evidence["classification"].startswith("Exponential")


def test_diagnose_unitary_free_theorem():
    verdict = diagnose(UnitaryFree(3), radius=12)
    assert verdict.outcome == "CertifiedRD"
    assert verdict.criterion == "TheoremAU"


def test_diagnose_free_group_block_norm_evidence():
    verdict = diagnose(FreeGroupDual(2), radius=12)
    assert verdict.outcome == "Indeterminate"
    assert verdict.criterion == "BlockNormEvidence"
    table = verdict.evidence["block_norm_table"]
    assert table and all(row[3] <= 1 + 1e-12 for row in table)


def test_diagnose_small_radius_degrades_gracefully():
    verdict = diagnose(OrthogonalFree(3), radius=8)
    # too small a window for growth classification, but the family is still
    # certified by the sector-norm criterion
    assert verdict.outcome == "CertifiedRD"
    assert verdict.criterion == "TheoremAO"


def test_verdict_serialization_round_trips():
    verdict = diagnose(SUq2Dual(Fraction(1, 2)))
    d = verdict.to_dict()
    json.loads(json.dumps(d))  # JSON-safe
    assert d["outcome"] == "RefutedRD"
    assert str(verdict).startswith("RefutedRD(NonUnimodular)")


def test_verdict_str_without_criterion():
    v = RdVerdict("Indeterminate", None, "nothing applies")
    assert str(v) == "Indeterminate: nothing applies"
