"""Exact convolution oracle on free groups.

Words are reduced tuples of nonzero integers (negative = inverse generator);
kernels are finitely supported rational-valued functions.  Everything
combinatorial is exact; operator norms use dense singular value
decompositions of the (modest) truncated matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .fusion import FamilyError, FreeGroupDual

Word = Tuple[int, ...]
Kernel = Dict[Word, Fraction]


def word_inv(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


class FreeGroupModel:
    """Ball/sphere enumeration and block convolution matrices for F_g."""

    def __init__(self, g: int, radius: int):
        self.ring = FreeGroupDual(g)
        self.g = g
        self.radius = radius
        spheres: List[List[Word]] = [[()]]
        for n in range(1, radius + 1):
            prev = spheres[-1]
            level = []
            for w in prev:
                for x in range(-g, g + 1):
                    if x == 0 or (w and w[-1] == -x):
                        continue
                    level.append(w + (x,))
            spheres.append(level)
        self.spheres = spheres
        self._index = [
            {w: i for i, w in enumerate(level)} for level in spheres
        ]

    def sphere(self, n: int) -> List[Word]:
        if not 0 <= n <= self.radius:
            raise FamilyError("sphere %d outside enumerated radius %d" % (n, self.radius))
        return self.spheres[n]

    def ball(self, R: Optional[int] = None) -> List[Word]:
        R = self.radius if R is None else R
        out: List[Word] = []
        for n in range(R + 1):
            out.extend(self.sphere(n))
        return out

    def multiply(self, a: Word, b: Word) -> Word:
        return self.ring.multiply(a, b)

    # -- kernels -----------------------------------------------------------
    def check_kernel(self, a: Kernel, sphere: Optional[int] = None) -> None:
        for w in a:
            self.ring.check_label(w)
            if sphere is not None and len(w) != sphere:
                raise FamilyError(
                    "kernel not supported on sphere %d: %r" % (sphere, w)
                )

    def convolve(self, a: Kernel, b: Kernel) -> Kernel:
        """Exact convolution (a * b)(w) = sum_u a(u) b(u^-1 w)."""
        out: Kernel = {}
        for u, x in a.items():
            for v, y in b.items():
                w = self.multiply(u, v)
                out[w] = out.get(w, Fraction(0)) + x * y
        return {w: c for w, c in out.items() if c != 0}

    def l2_norm(self, a: Kernel) -> float:
        return float(sum(c * c for c in a.values())) ** 0.5

    def sobolev_norm(self, a: Kernel, s: float) -> float:
        """Weighted norm ||(1 + length)^s a||_2."""
        return float(
            sum(
                float(c * c) * (1 + len(w)) ** (2 * s)
                for w, c in a.items()
            )
        ) ** 0.5

    def weight_kernel(self, a: Kernel, t: int) -> Kernel:
        """Apply (1 + length)^t pointwise (exact for integer t >= 0)."""
        if t < 0 or int(t) != t:
            raise FamilyError("weight exponent must be a nonnegative integer")
        return {w: c * Fraction((1 + len(w)) ** int(t)) for w, c in a.items()}

    def length_weight_kernel(self, a: Kernel, k: int) -> Kernel:
        """Apply length^k pointwise."""
        return {w: c * Fraction(len(w) ** k) for w, c in a.items() if len(w) > 0 or k == 0}

    # -- matrices ----------------------------------------------------------
    def block_conv_matrix(self, a: Kernel, n: int, k: int, l: int) -> np.ndarray:
        """Matrix of x -> a * x from sphere k to sphere l, for a on sphere n.

        Entry at (w_l, w_k) is ``a(w_l w_k^-1)`` when that word has length n
        and zero otherwise.
        """
        self.check_kernel(a, sphere=n)
        rows, cols = self.sphere(l), self.sphere(k)
        out = np.zeros((len(rows), len(cols)))
        for j, wk in enumerate(cols):
            wk_inv = word_inv(wk)
            for i, wl in enumerate(rows):
                w = self.multiply(wl, wk_inv)
                if len(w) == n:
                    out[i, j] = float(a.get(w, Fraction(0)))
        return out

    def conv_operator_matrix(self, a: Kernel, R: Optional[int] = None) -> np.ndarray:
        """Dense matrix of left convolution by ``a`` on the ball of radius R."""
        ball = self.ball(R)
        index = {w: i for i, w in enumerate(ball)}
        out = np.zeros((len(ball), len(ball)))
        for u, c in a.items():
            fc = float(c)
            for j, w in enumerate(ball):
                uw = self.multiply(u, w)
                i = index.get(uw)
                if i is not None:
                    out[i, j] = fc
        return out

    def derivation_matrix(self, a: Kernel, order: int = 1, R: Optional[int] = None) -> np.ndarray:
        """Iterated commutator of the length operator with convolution by a.

        Entry at (w', w) is ``a(w' w^-1) * (length(w') - length(w))^order``.
        """
        ball = self.ball(R)
        index = {w: i for i, w in enumerate(ball)}
        out = np.zeros((len(ball), len(ball)))
        for u, c in a.items():
            fc = float(c)
            for j, w in enumerate(ball):
                uw = self.multiply(u, w)
                i = index.get(uw)
                if i is not None:
                    out[i, j] = fc * float(len(uw) - len(w)) ** order
        return out


@dataclass
class HaagerupReport:
    """Measured block-norm-to-l2 ratios for kernels on one sphere."""

    n: int
    k: int
    l: int
    trials: int
    max_ratio: float
    witness_is_indicator: bool


def _admissible(n: int, k: int, l: int) -> bool:
    return (n + k + l) % 2 == 0 and abs(n - k) <= l <= n + k


def haagerup_check(
    model: FreeGroupModel,
    n: int,
    k: int,
    l: int,
    trials: int = 50,
    seed: int = 0,
) -> HaagerupReport:
    """Ratio ||block|| / ||a||_2 over random kernels on sphere n (plus the
    sphere indicator).  For free groups the ratio never exceeds 1."""
    rng = np.random.default_rng(seed)
    sphere = model.sphere(n)
    best = -np.inf
    best_indicator = False
    kernels: List[Tuple[Kernel, bool]] = [
        ({w: Fraction(1) for w in sphere}, True)
    ]
    for _ in range(trials):
        vals = rng.integers(-100, 101, size=len(sphere))
        kern = {
            w: Fraction(int(v)) for w, v in zip(sphere, vals) if v != 0
        }
        if kern:
            kernels.append((kern, False))
    for kern, is_ind in kernels:
        mat = model.block_conv_matrix(kern, n, k, l)
        denom = model.l2_norm(kern)
        ratio = float(np.linalg.norm(mat, 2)) / denom
        if ratio > best:
            best, best_indicator = ratio, is_ind
    return HaagerupReport(n, k, l, trials, best, best_indicator)


def measured_rd_constant(
    model: FreeGroupModel,
    t: float,
    trials: int = 20,
    seed: int = 0,
    support_radius: Optional[int] = None,
) -> float:
    """Largest observed ||conv(a)|| / ||a||_{2,t} on the truncated ball.

    A desk-scale stand-in for the rapid-decay constant at exponent ``t``:
    a lower bound on the true constant, measured over sphere indicators and
    random kernels supported in the ball.
    """
    rng = np.random.default_rng(seed)
    sup = model.radius // 2 if support_radius is None else support_radius
    ball = model.ball(sup)
    kernels: List[Kernel] = [
        {w: Fraction(1) for w in model.sphere(n)} for n in range(sup + 1)
    ]
    for _ in range(trials):
        vals = rng.integers(-100, 101, size=len(ball))
        kern = {w: Fraction(int(v)) for w, v in zip(ball, vals) if v != 0}
        if kern:
            kernels.append(kern)
    best = 0.0
    for kern in kernels:
        mat = model.conv_operator_matrix(kern)
        ratio = float(np.linalg.norm(mat, 2)) / model.sobolev_norm(kern, t)
        best = max(best, ratio)
    return best
