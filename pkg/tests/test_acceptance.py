"""End-to-end acceptance checks at pinned tolerances and budgets.

Each test pins one externally stated guarantee: tolerance, grid size, seed
policy, and (where stated) a wall-clock budget.  Budgets are asserted on the
measured elapsed time of the relevant computation alone.
"""

import itertools
import math
import os
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from qrd.fusion import (
    CompactLieDual,
    FreeGroupDual,
    OrthogonalFree,
    SUq2Dual,
    UnitaryFree,
    au_compose,
    au_factorization,
    su2_root_data,
    su3_root_data,
)
from qrd.grouporacle import FreeGroupModel, haagerup_check, measured_rd_constant
from qrd.lengths import (
    classify_growth,
    growth_profile,
    length_table,
    triple_set,
    weight_length_table,
)
from qrd.rdcheck import diagnose, growth_certificate
from qrd.reporting import strip_timestamp
from qrd.tlrep import TLRealization
from qrd.transform import (
    banach_submult_check,
    derivation_norm_check,
    laff_inequality_check,
    necessary_condition_ratio,
    norm_convol_check,
    tech_ao_grid,
)


@pytest.fixture(scope="module")
def tl8():
    return TLRealization(3, n_max=8)


# -- 1. closed-form block dimensions -----------------------------------------
def test_block_dimensions_closed_form():
    start = time.monotonic()
    for N in (3, 4, 5, 6):
        ring = OrthogonalFree(N)
        r = (N + math.sqrt(N * N - 4)) / 2
        s = 1 / (r * r)
        for n in range(21):
            closed = r**n * (1 - s ** (n + 1)) / (1 - s)
            exact = ring.classical_dim(n)
            assert abs(closed - exact) / exact <= 1e-9, (N, n)
    assert time.monotonic() - start < 1.0


# -- 2. projector validity ----------------------------------------------------
def test_projectors_idempotent_selfadjoint_with_exact_trace():
    start = time.monotonic()
    tl = TLRealization(3, n_max=5)
    for n in range(1, 6):
        P = tl.jw_projector(n)
        assert np.max(np.abs(P @ P - P)) <= 1e-10, n
        assert np.max(np.abs(P - P.T)) <= 1e-10, n
        assert abs(np.trace(P) - tl.dim(n)) <= 1e-8, n
    assert time.monotonic() - start < 30.0


# -- 3. morphism-norm closed form ---------------------------------------------
def test_morphism_norm_formula_matches_measurement(tl8):
    start = time.monotonic()
    for p in range(0, 5):
        for p2 in range(0, 5):
            for l in tl8.sector_labels(p, p2):
                measured = tl8.morphism_norm_measured(p, p2, l)
                formula = float(tl8.morphism_norm_formula(p, p2, l))
                assert abs(measured - formula) <= 1e-6, (p, p2, l)
    assert time.monotonic() - start < 120.0


# -- 4. sector-compressed norm ratios -----------------------------------------
def test_sector_norm_ratios_bounded_by_one(tl8):
    start = time.monotonic()
    results = tech_ao_grid(tl8, max_total=8, restarts=64, sweeps=20, seed=0)
    elapsed = time.monotonic() - start
    for r in results:
        assert r.max_ratio <= 1.0 + 1e-6, (r.k, r.l, r.n, r.max_ratio)
    witness = {(r.k, r.l, r.n): r for r in results}[(1, 0, 1)]
    assert abs(witness.max_ratio - 1.0) <= 1e-8
    assert elapsed < 600.0, "grid took %.1fs" % elapsed


# -- 5. convolution norm identity ---------------------------------------------
def test_convolution_norm_identity_all_triples(tl8):
    for k in range(9):
        for n in range(9 - k):
            for l in tl8.sector_labels(k, n):
                err = norm_convol_check(tl8, k, n, l, trials=50, seed=0)
                assert err <= 1e-8, (k, n, l, err)


# -- 6. fusion-support triangles ----------------------------------------------
def test_triple_sets_across_families():
    families = {
        "group": FreeGroupDual(2),
        "orthogonal": OrthogonalFree(3),
        "unitary": UnitaryFree(3),
        "deformed": SUq2Dual(Fraction(1, 2)),
        "lie": CompactLieDual(su2_root_data()),
    }
    for name, ring in families.items():
        spec = length_table(ring, radius=6)
        tri = triple_set(spec)
        assert tri.violations() == [], name
        if name in ("group", "orthogonal", "unitary"):
            assert tri.exact_triangle(), name


# -- 7. group block-norm bound -------------------------------------------------
def test_group_block_norm_bound_and_indicator_value():
    model = FreeGroupModel(2, radius=4)
    for n in range(1, 5):
        for k in range(0, 5):
            for l in range(abs(n - k), min(n + k, 4) + 1, 2):
                rep = haagerup_check(model, n, k, l, trials=200, seed=0)
                assert rep.max_ratio <= 1.0 + 1e-12, (n, k, l, rep.max_ratio)
    ind = haagerup_check(model, 1, 1, 2, trials=0, seed=0)
    assert ind.witness_is_indicator
    assert abs(ind.max_ratio - math.sqrt(3) / 2) <= 1e-12


# -- 8. modular obstruction ----------------------------------------------------
def test_modular_norms_and_refutation():
    ring = SUq2Dual(Fraction(1, 2))
    for n in range(11):
        assert necessary_condition_ratio(ring, n) == Fraction(2) ** n
    verdict = diagnose(ring)
    assert verdict.outcome == "RefutedRD"
    assert verdict.criterion == "NonUnimodular"


# -- 9. growth classification --------------------------------------------------
def test_growth_classification_three_regimes():
    su2 = CompactLieDual(su2_root_data())
    spec2 = weight_length_table(su2, radius=16)
    cls2 = classify_growth(growth_profile(spec2))
    assert cls2.kind == "polynomial"
    for n, h, _, _ in growth_profile(spec2).rows():
        assert float(h) <= (2 + n) ** 2 * (1 + 1e-12), (n, h)

    su3 = CompactLieDual(su3_root_data())
    spec3 = weight_length_table(su3, radius=20)
    cls3 = classify_growth(growth_profile(spec3))
    assert cls3.kind == "polynomial"
    C, s = growth_certificate(su3, spec3, R=20)
    for n, h, _, _ in growth_profile(spec3).rows():
        assert float(h) <= C * C * (2 + n) ** (2 * s) * (1 + 1e-12), (n, h)

    ao = OrthogonalFree(3)
    spec_ao = length_table(ao, radius=14)
    cls_ao = classify_growth(growth_profile(spec_ao))
    assert cls_ao.kind == "exponential"
    assert abs(cls_ao.ratio - 6.854) / 6.854 <= 0.01


# -- 10. weighted inequality grids ----------------------------------------------
def _positive_kernel(rng, words):
    out = {
        w: Fraction(int(v))
        for w, v in zip(words, rng.integers(0, 5, size=len(words)))
        if v
    }
    return out or {words[0]: Fraction(1)}


def _signed_kernel(rng, words):
    out = {
        w: Fraction(int(v))
        for w, v in zip(words, rng.integers(-4, 5, size=len(words)))
        if v
    }
    return out or {words[0]: Fraction(1)}


def test_weighted_inequalities_on_seed_grids():
    start = time.monotonic()
    model = FreeGroupModel(2, radius=4)
    ball = model.ball(2)
    for seed in range(100):
        rng = np.random.default_rng(seed)
        for m in (2, 3):
            kernels = [_positive_kernel(rng, ball) for _ in range(m)]
            for s in (0, 1, 2):
                for t in (0, 1, 2):
                    rep = laff_inequality_check(model, kernels, s, t)
                    assert rep.ok, (seed, m, s, t, rep)
    consts = {t: measured_rd_constant(model, t, seed=0) for t in (1, 2)}
    for seed in range(100):
        rng = np.random.default_rng(1000 + seed)
        a = _signed_kernel(rng, ball)
        b = _signed_kernel(rng, ball)
        for t in (1, 2):
            rep = banach_submult_check(model, a, b, t, C=consts[t])
            assert rep.ok, (seed, t, rep)
    for seed in range(100):
        rng = np.random.default_rng(2000 + seed)
        a = _positive_kernel(rng, ball)
        for order in (1, 2):
            rep = derivation_norm_check(model, a, order)
            assert rep.ok, (seed, order, rep)
    assert time.monotonic() - start < 120.0


# -- 11. factorization bijection -------------------------------------------------
def _au_words(n):
    if n == 0:
        return [""]
    return ["".join(w) for w in itertools.product("Uu", repeat=n)]


def test_unitary_factorization_bijection_exhaustive():
    au = UnitaryFree(3)
    for k in range(5):
        for n in range(5):
            for beta in _au_words(k):
                for alpha in _au_words(n):
                    seen = set()
                    for gamma, mult in au.fuse(beta, alpha):
                        assert mult == 1
                        assert gamma not in seen
                        seen.add(gamma)
                        fac = au_factorization(au, alpha, beta, gamma)
                        assert au_compose(au, *fac) == (alpha, beta, gamma)


# -- 12. deterministic reporting --------------------------------------------------
def test_verify_reports_byte_identical(tmp_path):
    outs = [str(tmp_path / "run1"), str(tmp_path / "run2")]
    for out in outs:
        proc = subprocess.run(
            [sys.executable, "-m", "qrd.cli", "verify", "--seed", "0",
             "--out", out],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stdout + proc.stderr
    a = strip_timestamp(os.path.join(outs[0], "verify.csv"))
    b = strip_timestamp(os.path.join(outs[1], "verify.csv"))
    assert a == b
    assert any("schema-version" in line for line in a)
