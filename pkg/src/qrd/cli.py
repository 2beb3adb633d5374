"""Batch command-line front end.

Commands
--------
families   list built-in families and their default configuration
growth     growth profile and classification, emitted as CSV
rd-check   certification verdict, emitted as JSON
blocks     block-norm grid (sector ratios or group block bounds), CSV
verify     full invariant suite with a pass/fail table; exit 0 iff all pass

Configuration is a YAML file (``--config``); individual flags override it.
All randomized checks take the seed explicitly so reports are reproducible
byte-for-byte apart from the isolated timestamp header.
"""

from __future__ import annotations

import argparse
import itertools
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np
import yaml

from . import reporting
from .fusion import (
    BUILTIN_ROOT_DATA,
    FamilyError,
    FreeGroupDual,
    OrthogonalFree,
    UnitaryFree,
    au_compose,
    au_factorization,
    make_ring,
)
from .grouporacle import FreeGroupModel, haagerup_check
from .lengths import (
    classify_growth,
    growth_profile,
    length_table,
    triple_set,
    validate_length,
)
from .rdcheck import diagnose
from .tlrep import TLRealization
from .transform import (
    banach_submult_check,
    derivation_norm_check,
    laff_inequality_check,
    norm_convol_check,
    tech_ao_grid,
)

_DEFAULTS: Dict[str, Dict] = {
    "free_group_dual": {"g": 2},
    "orthogonal_free": {"N": 3},
    "suq2_dual": {"q": "1/2"},
    "unitary_free": {"N": 3},
    "compact_lie_dual": {"group": "su2"},
}


@dataclass
class RunConfig:
    """Resolved configuration for one command invocation."""

    family: str = "orthogonal_free"
    params: Dict = field(default_factory=dict)
    radius: int = 6
    budget: int = 6  # max k+n for sector grids
    enum_budget: int = 200_000
    tolerance: float = 1e-6
    seed: int = 0
    restarts: int = 8
    sweeps: int = 20
    out: str = "reports"

    def validate(self) -> None:
        if self.radius <= 0 or self.budget <= 0 or self.enum_budget <= 0:
            raise FamilyError("radius and budgets must be positive")
        if self.seed is None:
            raise FamilyError("a seed is mandatory for randomized checks")
        if self.family not in _DEFAULTS:
            raise FamilyError(
                "unknown family %r (have: %s)" % (self.family, sorted(_DEFAULTS))
            )

    def ring(self):
        params = dict(_DEFAULTS[self.family])
        params.update(self.params)
        return make_ring(self.family, **params)


def load_config(path: Optional[str], overrides: Dict) -> RunConfig:
    data: Dict = {}
    if path:
        with open(path, encoding="utf-8") as fh:
            loaded = yaml.safe_load(fh) or {}
        if not isinstance(loaded, dict):
            raise FamilyError("config must be a mapping")
        data.update(loaded)
    for key, value in overrides.items():
        if value is not None:
            data[key] = value
    cfg = RunConfig(
        family=str(data.get("family", RunConfig.family)),
        params=dict(data.get("params", {})),
        radius=int(data.get("radius", RunConfig.radius)),
        budget=int(data.get("budget", RunConfig.budget)),
        enum_budget=int(data.get("enum_budget", RunConfig.enum_budget)),
        tolerance=float(data.get("tolerance", RunConfig.tolerance)),
        seed=int(data.get("seed", RunConfig.seed)),
        restarts=int(data.get("restarts", RunConfig.restarts)),
        sweeps=int(data.get("sweeps", RunConfig.sweeps)),
        out=str(data.get("out", RunConfig.out)),
    )
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------
def cmd_families(cfg: RunConfig) -> int:
    rows = []
    for name in sorted(_DEFAULTS):
        defaults = dict(_DEFAULTS[name])
        if name == "compact_lie_dual":
            defaults["group"] = "|".join(sorted(BUILTIN_ROOT_DATA))
        rows.append(
            [
                name,
                ";".join("%s=%s" % kv for kv in sorted(defaults.items())),
                cfg.radius,
                cfg.budget,
                cfg.seed,
            ]
        )
    reporting.ensure_outdir(cfg.out)
    path = os.path.join(cfg.out, "families.csv")
    reporting.write_csv(
        path, ["family", "default_params", "default_radius", "default_budget", "default_seed"], rows
    )
    for row in rows:
        print("%-18s %s" % (row[0], row[1]))
    return 0


def cmd_growth(cfg: RunConfig) -> int:
    ring = cfg.ring()
    spec = length_table(ring, cfg.radius, budget=cfg.enum_budget)
    profile = growth_profile(spec)
    try:
        cls = str(classify_growth(profile))
    except FamilyError as exc:
        cls = "Indeterminate (%s)" % exc
    rows = [[n, h, c, md, cls] for n, h, c, md in profile.rows()]
    reporting.ensure_outdir(cfg.out)
    path = os.path.join(cfg.out, "growth.csv")
    reporting.write_csv(
        path, ["bucket", "h_n", "label_count", "max_qdim", "classification"], rows
    )
    print("growth profile written to %s; classification: %s" % (path, cls))
    return 0


def cmd_rd_check(cfg: RunConfig) -> int:
    ring = cfg.ring()
    verdict = diagnose(
        ring, radius=cfg.radius, budget=cfg.enum_budget, seed=cfg.seed
    )
    payload = dict(verdict.to_dict())
    payload["config"] = {
        "family": cfg.family,
        "params": {str(k): str(v) for k, v in cfg.params.items()},
        "radius": cfg.radius,
        "seed": cfg.seed,
    }
    reporting.ensure_outdir(cfg.out)
    path = os.path.join(cfg.out, "rd_check.json")
    reporting.write_json(path, payload)
    print("verdict: %s (written to %s)" % (verdict, path))
    return 0


def cmd_blocks(cfg: RunConfig) -> int:
    rows: List[List] = []
    header: List[str]
    if cfg.family == "orthogonal_free":
        ring = cfg.ring()
        tl = TLRealization(ring.N, n_max=cfg.budget)
        results = tech_ao_grid(
            tl, cfg.budget, restarts=cfg.restarts, sweeps=cfg.sweeps, seed=cfg.seed
        )
        header = ["k", "l", "n", "max_ratio", "bound", "ok", "restarts", "seed"]
        for r in results:
            rows.append(
                [r.k, r.l, r.n, r.max_ratio, 1.0 + cfg.tolerance,
                 r.max_ratio <= 1.0 + cfg.tolerance, r.restarts, cfg.seed]
            )
    elif cfg.family == "free_group_dual":
        ring = cfg.ring()
        model = FreeGroupModel(ring.g, radius=min(cfg.radius, 4))
        header = ["n", "k", "l", "max_ratio", "bound", "ok", "trials", "seed"]
        R = min(cfg.radius, 4)
        for n in range(1, R + 1):
            for k in range(R + 1):
                for l in range(abs(n - k), min(n + k, R) + 1, 2):
                    rep = haagerup_check(model, n, k, l, trials=50, seed=cfg.seed)
                    rows.append(
                        [n, k, l, rep.max_ratio, 1.0 + 1e-12,
                         rep.max_ratio <= 1.0 + 1e-12, rep.trials, cfg.seed]
                    )
    else:
        print(
            "blocks: no matrix realization for family %r" % cfg.family,
            file=sys.stderr,
        )
        return 2
    reporting.ensure_outdir(cfg.out)
    path = os.path.join(cfg.out, "blocks.csv")
    reporting.write_csv(path, header, rows)
    bad = sum(1 for row in rows if row[5] is False)
    print("block grid written to %s (%d rows, %d violations)" % (path, len(rows), bad))
    return 0 if bad == 0 else 1


def _verify_rows(cfg: RunConfig) -> List[List]:
    """The invariant suite: (check, measured, bound, ok) rows."""
    rows: List[List] = []

    def add(name: str, measured, bound, ok: bool) -> None:
        rows.append([name, measured, bound, bool(ok)])

    # fusion dimensions against the closed form
    for N in (3, 4, 5, 6):
        ring = OrthogonalFree(N)
        r = (N + math.sqrt(N * N - 4)) / 2
        s = 1 / (r * r)
        worst = max(
            abs(ring.classical_dim(n) - r**n * (1 - s ** (n + 1)) / (1 - s))
            / ring.classical_dim(n)
            for n in range(21)
        )
        add("dimension closed form N=%d, n<=20" % N, worst, 1e-9, worst <= 1e-9)

    # length axioms and triple sets across families
    for family, params in sorted(_DEFAULTS.items()):
        ring = make_ring(family, **params)
        spec = length_table(ring, 6, budget=cfg.enum_budget)
        bad = validate_length(spec)
        add("length axioms %s" % family, len(bad), 0, len(bad) == 0)
        tri = triple_set(spec)
        viol = tri.violations()
        add("triple-set stability %s" % family, len(viol), 0, len(viol) == 0)
        if family in ("free_group_dual", "orthogonal_free", "unitary_free"):
            add(
                "exact triangle bound %s" % family,
                0 if tri.exact_triangle() else 1,
                0,
                tri.exact_triangle(),
            )

    # projector validity and the morphism-norm closed form
    tl = TLRealization(3, n_max=max(4, min(cfg.budget, 6)))
    worst = 0.0
    for n in range(1, 6):
        P = tl.jw_projector(n)
        worst = max(
            worst,
            float(np.max(np.abs(P @ P - P))),
            float(np.max(np.abs(P - P.T))),
            abs(float(np.trace(P)) - tl.dim(n)),
        )
    add("projector idempotent/self-adjoint/trace n<=5", worst, 1e-8, worst <= 1e-8)
    worst = 0.0
    for p in range(1, 3):
        for p2 in range(1, 3):
            for l in range(abs(p - p2), p + p2 + 1, 2):
                got = tl.morphism_norm_measured(p, p2, l)
                want = float(tl.morphism_norm_formula(p, p2, l))
                worst = max(worst, abs(got - want))
    add("morphism norm closed form p,p'<=2", worst, 1e-6, worst <= 1e-6)

    # sector-norm bound and the convolution norm identity
    grid = tech_ao_grid(tl, min(cfg.budget, 4), restarts=cfg.restarts,
                        sweeps=cfg.sweeps, seed=cfg.seed)
    worst = max(r.max_ratio for r in grid)
    add("sector norm ratio k+n<=%d" % min(cfg.budget, 4), worst,
        1.0 + cfg.tolerance, worst <= 1.0 + cfg.tolerance)
    worst = 0.0
    for k in range(3):
        for n in range(3):
            for l in tl.sector_labels(k, n):
                worst = max(worst, norm_convol_check(tl, k, n, l, trials=10,
                                                     seed=cfg.seed))
    add("convolution norm identity k,n<=2", worst, 1e-8, worst <= 1e-8)

    # exact group oracle
    model = FreeGroupModel(2, radius=4)
    rep = haagerup_check(model, 1, 1, 2, trials=50, seed=cfg.seed)
    add("group block bound (1,1,2)", rep.max_ratio, 1.0 + 1e-12,
        rep.max_ratio <= 1.0 + 1e-12)
    ind = math.sqrt(3) / 2
    got = haagerup_check(model, 1, 1, 2, trials=0, seed=cfg.seed).max_ratio
    add("sphere-1 indicator ratio", got, ind, abs(got - ind) <= 1e-12)
    rng = np.random.default_rng(cfg.seed)
    kern = {
        w: Fraction(int(rng.integers(0, 5))) for w in model.sphere(1)
    }
    kern = {w: c for w, c in kern.items() if c != 0} or {model.sphere(1)[0]: Fraction(1)}
    lrep = laff_inequality_check(model, [kern, kern], s=1, t=1)
    add("positive-product bound m=2", lrep.lhs, lrep.rhs, lrep.ok)
    brep = banach_submult_check(model, kern, kern, t=1, seed=cfg.seed)
    add("weighted submultiplicativity t=1", brep.lhs, brep.rhs, brep.ok)
    drep = derivation_norm_check(model, kern, order=1)
    add("length-commutator bound order 1", drep.lhs, drep.rhs, drep.ok)

    # unitary-family factorization bijection
    au = UnitaryFree(3)
    ok = True
    count = 0
    for k in range(4):
        for n in range(4):
            for beta in _au_words(k):
                for alpha in _au_words(n):
                    seen = set()
                    for gamma, _mult in au.fuse(beta, alpha):
                        fac = au_factorization(au, alpha, beta, gamma)
                        back = au_compose(au, *fac)
                        ok = ok and back == (alpha, beta, gamma)
                        ok = ok and gamma not in seen
                        seen.add(gamma)
                        count += 1
    add("factorization bijection k,n<=3 (%d cases)" % count, 0 if ok else 1, 0, ok)
    return rows


def _au_words(n: int) -> List[str]:
    if n == 0:
        return [""]
    return ["".join(w) for w in itertools.product("Uu", repeat=n)]


def cmd_verify(cfg: RunConfig) -> int:
    rows = _verify_rows(cfg)
    reporting.ensure_outdir(cfg.out)
    path = os.path.join(cfg.out, "verify.csv")
    reporting.write_csv(path, ["check", "measured", "bound", "ok"], rows)
    width = max(len(str(r[0])) for r in rows)
    failures = 0
    for name, measured, bound, ok in rows:
        print("%-*s  %s" % (width, name, "PASS" if ok else "FAIL"))
        failures += 0 if ok else 1
    print("verify: %d/%d checks passed (%s)" % (len(rows) - failures, len(rows), path))
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrd",
        description="Fusion-ring growth, block norms and rapid-decay checks.",
    )
    parser.add_argument("command", choices=["families", "growth", "rd-check", "blocks", "verify"])
    parser.add_argument("--config", help="YAML config file")
    parser.add_argument("--family", help="family name (overrides config)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--seed", type=int, help="random seed")
    parser.add_argument("--radius", type=int, help="enumeration radius")
    parser.add_argument("--budget", type=int, help="max k+n for sector grids")
    parser.add_argument("--tolerance", type=float, help="bound tolerance")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        "family": args.family,
        "out": args.out,
        "seed": args.seed,
        "radius": args.radius,
        "budget": args.budget,
        "tolerance": args.tolerance,
    }
    try:
        cfg = load_config(args.config, overrides)
    except (OSError, FamilyError, yaml.YAMLError, ValueError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    dispatch = {
        "families": cmd_families,
        "growth": cmd_growth,
        "rd-check": cmd_rd_check,
        "blocks": cmd_blocks,
        "verify": cmd_verify,
    }
    try:
        return dispatch[args.command](cfg)
    except FamilyError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
