"""Fusion rings for several families of discrete quantum groups.

Each ring knows its irreducible labels, fusion rules (tensor product
decomposition), conjugation, quantum dimensions and the eigenvalue list of the
modular element on each block.  All combinatorial quantities are exact:
integers or `fractions.Fraction`.

Families
--------
``FreeGroupDual(g)``
    Dual of the free group on ``g`` generators; labels are reduced words.
``OrthogonalFree(N)``
    Free orthogonal quantum group with trivial parameter matrix; labels are
    nonnegative integers with a Chebyshev-like fusion chain.
``SUq2Dual(q)``
    q-deformation of SU(2) at rational ``0 < q < 1``; same fusion chain as
    ``OrthogonalFree`` but non-trivial modular element.
``UnitaryFree(N)``
    Free unitary quantum group with trivial parameter matrix; labels are words
    over a generator and its conjugate.
``CompactLieDual(root_data)``
    Dual of a compact simply connected Lie group described by root data.
    Dimension / length / growth queries only; no fusion rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

Label = object  # family-specific hashable label type


class FamilyError(ValueError):
    """A label does not belong to the ring, or the query is unsupported."""


class BudgetError(RuntimeError):
    """An enumeration exceeded its configured budget."""


def _is_reduced(word: Tuple[int, ...]) -> bool:
    return all(word[i] != -word[i + 1] for i in range(len(word) - 1))


class FusionRing:
    """Base interface shared by all families."""

    name = "abstract"

    @property
    def unit(self) -> Label:
        raise NotImplementedError

    def check_label(self, a: Label) -> None:
        raise NotImplementedError

    def fuse(self, a: Label, b: Label) -> List[Tuple[Label, int]]:
        """Decomposition of ``a (x) b`` as ``[(label, multiplicity), ...]``."""
        raise NotImplementedError

    def conjugate(self, a: Label) -> Label:
        raise NotImplementedError

    def qdim(self, a: Label) -> Fraction:
        """Quantum dimension (trace of the modular element on the block)."""
        raise NotImplementedError

    def classical_dim(self, a: Label) -> int:
        """Matrix size of the block carrying ``a``."""
        raise NotImplementedError

    def modular_eigenvalues(self, a: Label) -> List[Fraction]:
        """Eigenvalues of the positive modular element on the block of ``a``."""
        raise NotImplementedError

    @property
    def unimodular(self) -> bool:
        return True

    @property
    def generators(self) -> List[Label]:
        """Default conjugation-closed generating set used for word lengths."""
        raise NotImplementedError

    @property
    def has_fusion(self) -> bool:
        return True

    # -- helpers -----------------------------------------------------------
    def fusion_dims_consistent(self, a: Label, b: Label) -> bool:
        """dim(a) * dim(b) == sum of constituent dims (sanity check)."""
        total = sum(mult * self.qdim(c) for c, mult in self.fuse(a, b))
        return total == self.qdim(a) * self.qdim(b)


class FreeGroupDual(FusionRing):
    """Group ring of the free group on ``g`` generators.

    Labels are reduced words: tuples of nonzero integers in ``+-{1..g}``
    where a negative entry is the inverse generator.
    """

    name = "free_group_dual"

    def __init__(self, g: int):
        if g < 1:
            raise FamilyError("free group rank must be >= 1, got %r" % (g,))
        self.g = g

    @property
    def unit(self) -> Tuple[int, ...]:
        return ()

    def check_label(self, a: Label) -> None:
        if not isinstance(a, tuple) or not all(
            isinstance(x, int) and x != 0 and abs(x) <= self.g for x in a
        ):
            raise FamilyError("not a word on %d generators: %r" % (self.g, a))
        if not _is_reduced(a):
            raise FamilyError("word is not reduced: %r" % (a,))

    def multiply(self, a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
        self.check_label(a)
        self.check_label(b)
        i = 0
        while i < min(len(a), len(b)) and a[len(a) - 1 - i] == -b[i]:
            i += 1
        return a[: len(a) - i] + b[i:]

    def fuse(self, a, b):
        return [(self.multiply(a, b), 1)]

    def conjugate(self, a):
        self.check_label(a)
        return tuple(-x for x in reversed(a))

    def qdim(self, a) -> Fraction:
        self.check_label(a)
        return Fraction(1)

    def classical_dim(self, a) -> int:
        self.check_label(a)
        return 1

    def modular_eigenvalues(self, a):
        self.check_label(a)
        return [Fraction(1)]

    @property
    def generators(self):
        return [(i,) for i in range(1, self.g + 1)] + [
            (-i,) for i in range(1, self.g + 1)
        ]


class _ChebyshevChain(FusionRing):
    """Shared fusion chain: labels n >= 0, a1 (x) an = a(n-1) (+) a(n+1)."""

    @property
    def unit(self) -> int:
        return 0

    def check_label(self, a) -> None:
        if not isinstance(a, int) or isinstance(a, bool) or a < 0:
            raise FamilyError("label must be a nonnegative integer, got %r" % (a,))

    def fuse(self, a: int, b: int):
        self.check_label(a)
        self.check_label(b)
        return [(n, 1) for n in range(abs(a - b), a + b + 1, 2)]

    def conjugate(self, a: int) -> int:
        self.check_label(a)
        return a


class OrthogonalFree(_ChebyshevChain):
    """Free orthogonal quantum group with identity parameter matrix.

    Quantum dimensions follow ``m(1) * m(n) = m(n-1) + m(n+1)`` with
    ``m(0) = 1`` and ``m(1) = N`` (the generator block is N x N and the ring
    is unimodular, so quantum and classical dimensions agree).
    """

    name = "orthogonal_free"

    def __init__(self, N: int):
        if N < 3:
            raise FamilyError("orthogonal free family needs N >= 3, got %r" % (N,))
        self.N = N
        self._dims: List[int] = [1, N]

    def _dim(self, n: int) -> int:
        while len(self._dims) <= n:
            self._dims.append(self.N * self._dims[-1] - self._dims[-2])
        return self._dims[n]

    def qdim(self, a: int) -> Fraction:
        self.check_label(a)
        return Fraction(self._dim(a))

    def classical_dim(self, a: int) -> int:
        self.check_label(a)
        return self._dim(a)

    def modular_eigenvalues(self, a: int):
        self.check_label(a)
        return [Fraction(1)] * self._dim(a)

    @property
    def generators(self):
        return [1]


class SUq2Dual(_ChebyshevChain):
    """Dual of the q-deformed SU(2) at rational ``0 < q < 1``.

    The block of label ``n`` has classical dimension ``n + 1`` and modular
    eigenvalues ``q^-n, q^-n+2, ..., q^n``; the quantum dimension is their
    (exact, rational) sum, the q-integer ``[n+1]``.
    """

    name = "suq2_dual"

    def __init__(self, q):
        q = Fraction(q)
        if not (0 < q < 1):
            raise FamilyError("deformation parameter must satisfy 0 < q < 1, got %r" % (q,))
        self.q = q

    def modular_eigenvalues(self, a: int):
        self.check_label(a)
        return sorted(self.q ** (a - 2 * j) for j in range(a + 1))

    def qdim(self, a: int) -> Fraction:
        self.check_label(a)
        return sum(self.modular_eigenvalues(a), Fraction(0))

    def classical_dim(self, a: int) -> int:
        self.check_label(a)
        return a + 1

    @property
    def unimodular(self) -> bool:
        return False

    @property
    def generators(self):
        return [1]


_AU_CONJ = str.maketrans("Uu", "uU")


class UnitaryFree(FusionRing):
    """Free unitary quantum group with identity parameter matrix.

    Labels are words over ``U`` (the fundamental generator) and ``u`` (its
    conjugate); the empty word is the unit.  Tensor products concatenate,
    plus one extra constituent for every chain of middle cancellations
    between a letter and an adjacent conjugate letter.
    """

    name = "unitary_free"

    def __init__(self, N: int):
        if N < 3:
            raise FamilyError("unitary free family needs N >= 3, got %r" % (N,))
        self.N = N
        self._dims: Dict[str, int] = {"": 1, "U": N, "u": N}

    @property
    def unit(self) -> str:
        return ""

    def check_label(self, a) -> None:
        if not isinstance(a, str) or any(c not in "Uu" for c in a):
            raise FamilyError("label must be a word over 'U'/'u', got %r" % (a,))

    def conjugate(self, a: str) -> str:
        self.check_label(a)
        return a.translate(_AU_CONJ)[::-1]

    def fuse(self, a: str, b: str):
        self.check_label(a)
        self.check_label(b)
        out = []
        # cancellation depth j: last j letters of a annihilate first j of b,
        # allowed while the touching letters are conjugate to each other
        j = 0
        while True:
            out.append((a[: len(a) - j] + b[j:], 1))
            if (
                j < min(len(a), len(b))
                and a[len(a) - 1 - j] == b[j].translate(_AU_CONJ)
            ):
                j += 1
            else:
                break
        return out

    def _dim(self, w: str) -> int:
        known = self._dims
        if w in known:
            return known[w]
        # peel the first letter: N * dim(rest), minus dim(tail) when the
        # first two letters are mutually conjugate
        stack = [w]
        while stack:
            v = stack[-1]
            if v in known:
                stack.pop()
                continue
            rest, tail = v[1:], v[2:]
            if rest in known and (v[0] == v[1] or tail in known):
                d = self.N * known[rest]
                if v[0] != v[1]:
                    d -= known[tail]
                known[v] = d
                stack.pop()
            else:
                if rest not in known:
                    stack.append(rest)
                if v[0] != v[1] and tail not in known:
                    stack.append(tail)
        return known[w]

    def qdim(self, a: str) -> Fraction:
        self.check_label(a)
        return Fraction(self._dim(a))

    def classical_dim(self, a: str) -> int:
        self.check_label(a)
        return self._dim(a)

    def modular_eigenvalues(self, a: str):
        self.check_label(a)
        return [Fraction(1)] * self._dim(a)

    @property
    def generators(self):
        return ["U", "u"]


def au_factorization(ring: UnitaryFree, alpha: str, beta: str, gamma: str):
    """Factor a constituent ``gamma`` of ``beta (x) alpha``.

    Returns the unique triple ``(tau, alpha1, beta1)`` with
    ``alpha = tau + alpha1``, ``beta = beta1 + conjugate(tau)`` and
    ``gamma = beta1 + alpha1``.  Raises ``FamilyError`` when ``gamma`` is not
    a constituent.
    """
    for w in (alpha, beta, gamma):
        ring.check_label(w)
    n, k, l = len(alpha), len(beta), len(gamma)
    if (n + k - l) % 2 or not (abs(n - k) <= l <= n + k):
        raise FamilyError(
            "no factorization: lengths (%d, %d, %d) are inadmissible" % (n, k, l)
        )
    q = (n + k - l) // 2
    tau, alpha1 = alpha[:q], alpha[q:]
    beta1 = beta[: k - q]
    if beta[k - q :] != ring.conjugate(tau) or gamma != beta1 + alpha1:
        raise FamilyError(
            "%r is not a constituent of %r (x) %r at cancellation depth %d"
            % (gamma, beta, alpha, q)
        )
    return tau, alpha1, beta1


def au_compose(ring: UnitaryFree, tau: str, alpha1: str, beta1: str):
    """Inverse of :func:`au_factorization`: build ``(alpha, beta, gamma)``."""
    for w in (tau, alpha1, beta1):
        ring.check_label(w)
    return tau + alpha1, beta1 + ring.conjugate(tau), beta1 + alpha1


@dataclass(frozen=True)
class RootData:
    """Root data of a compact simply connected Lie group.

    Weights live in fundamental-weight coordinates.  ``gram`` is the matrix of
    a Weyl-invariant inner product on the weight space, with exact rational
    entries; ``positive_roots`` and ``rho`` (half the sum of positive roots)
    are given in the same coordinates.
    """

    name: str
    rank: int
    positive_roots: Tuple[Tuple[int, ...], ...]
    rho: Tuple[int, ...]
    gram: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        r = self.rank
        if len(self.rho) != r or any(len(row) != r for row in self.gram):
            raise FamilyError("root data dimensions are inconsistent")
        for i in range(r):
            for j in range(r):
                if self.gram[i][j] != self.gram[j][i]:
                    raise FamilyError("inner product matrix must be symmetric")
        # positive definiteness via leading principal minors
        for k in range(1, r + 1):
            if _minor_det(self.gram, k) <= 0:
                raise FamilyError("inner product matrix must be positive definite")
        twice_rho = tuple(2 * x for x in self.rho)
        total = tuple(
            sum(root[i] for root in self.positive_roots) for i in range(r)
        )
        if total != twice_rho:
            raise FamilyError("rho must be half the sum of the positive roots")

    def inner(self, v: Sequence, w: Sequence) -> Fraction:
        return sum(
            Fraction(v[i]) * self.gram[i][j] * Fraction(w[j])
            for i in range(self.rank)
            for j in range(self.rank)
        )


def _minor_det(gram, k: int) -> Fraction:
    rows = [list(row[:k]) for row in gram[:k]]
    det = Fraction(1)
    for col in range(k):
        pivot = next((r for r in range(col, k) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, k):
            factor = rows[r][col] / rows[col][col]
            for c in range(col, k):
                rows[r][c] -= factor * rows[col][c]
    return det


def su2_root_data() -> RootData:
    # normalized so that the fundamental weight has norm 1: the label-n block
    # then sits at length exactly n
    return RootData(
        name="su2",
        rank=1,
        positive_roots=((2,),),
        rho=(1,),
        gram=((Fraction(1),),),
    )


def su3_root_data() -> RootData:
    return RootData(
        name="su3",
        rank=2,
        positive_roots=((2, -1), (-1, 2), (1, 1)),
        rho=(1, 1),
        gram=(
            (Fraction(2, 3), Fraction(1, 3)),
            (Fraction(1, 3), Fraction(2, 3)),
        ),
    )


BUILTIN_ROOT_DATA = {"su2": su2_root_data, "su3": su3_root_data}


def weyl_dimension(rd: RootData, weight: Sequence[int]) -> int:
    """Dimension of the irreducible with the given dominant highest weight."""
    if len(weight) != rd.rank or any(int(x) != x or x < 0 for x in weight):
        raise FamilyError("not a dominant weight for %s: %r" % (rd.name, weight))
    shifted = tuple(int(x) + r for x, r in zip(weight, rd.rho))
    dim = Fraction(1)
    for root in rd.positive_roots:
        dim *= rd.inner(shifted, root) / rd.inner(rd.rho, root)
    if dim.denominator != 1 or dim <= 0:
        raise FamilyError("weight formula did not produce a positive integer")
    return int(dim)


class CompactLieDual(FusionRing):
    """Dual of a compact simply connected Lie group, given by root data.

    Supports dimensions, the Weyl-invariant Euclidean length on weights and
    growth queries.  Fusion rules are implemented only for rank one (the
    classical Clebsch-Gordan chain); higher rank has no fusion support.
    """

    name = "compact_lie_dual"

    def __init__(self, root_data: RootData):
        self.root_data = root_data

    @property
    def unit(self):
        return (0,) * self.root_data.rank

    def check_label(self, a) -> None:
        rd = self.root_data
        if (
            not isinstance(a, tuple)
            or len(a) != rd.rank
            or any(not isinstance(x, int) or x < 0 for x in a)
        ):
            raise FamilyError("not a dominant weight for %s: %r" % (rd.name, a))

    @property
    def has_fusion(self) -> bool:
        return self.root_data.rank == 1

    def fuse(self, a, b):
        self.check_label(a)
        self.check_label(b)
        if self.root_data.rank != 1:
            raise FamilyError(
                "fusion rules are not available for %s (rank %d); only "
                "dimension/length/growth queries are supported"
                % (self.root_data.name, self.root_data.rank)
            )
        return [((n,), 1) for n in range(abs(a[0] - b[0]), a[0] + b[0] + 1, 2)]

    def conjugate(self, a):
        self.check_label(a)
        if self.root_data.rank == 1:
            return a
        # conjugation permutes dominant weights leaving dim and length fixed;
        # for the built-in su3 data it reverses the coordinates
        if self.root_data.name == "su3":
            return tuple(reversed(a))
        raise FamilyError("conjugation table unknown for %s" % self.root_data.name)

    def qdim(self, a) -> Fraction:
        return Fraction(weyl_dimension(self.root_data, a))

    def classical_dim(self, a) -> int:
        return weyl_dimension(self.root_data, a)

    def modular_eigenvalues(self, a):
        return [Fraction(1)] * self.classical_dim(a)

    def length_squared(self, a) -> Fraction:
        self.check_label(a)
        return self.root_data.inner(a, a)

    @property
    def generators(self):
        raise FamilyError(
            "no distinguished generating set: use the weight-norm length"
        )


def enumerate_irreps(
    ring: FusionRing, radius: int, budget: int = 200_000
) -> Dict[Label, float]:
    """All labels at (word or weight-norm) length <= radius, with lengths.

    Finitely generated families are enumerated breadth-first through fusion
    with the default generating set; Lie duals by scanning the dominant cone.
    Raises ``BudgetError`` when more than ``budget`` labels would be produced.
    """
    if radius < 0:
        raise FamilyError("radius must be nonnegative")
    if isinstance(ring, CompactLieDual):
        return _enumerate_cone(ring, radius, budget)
    lengths: Dict[Label, float] = {ring.unit: 0}
    frontier = [ring.unit]
    for depth in range(1, radius + 1):
        new = []
        for a in frontier:
            for d in ring.generators:
                for c, _ in ring.fuse(a, d):
                    if c not in lengths:
                        lengths[c] = depth
                        new.append(c)
                        if len(lengths) > budget:
                            raise BudgetError(
                                "enumeration exceeded budget of %d labels" % budget
                            )
        frontier = new
    return lengths


def _enumerate_cone(ring: CompactLieDual, radius: int, budget: int):
    # scan the whole bucket range: every label with floor(length) <= radius,
    # i.e. length < radius + 1, so that all buckets 0..radius are complete
    rd = ring.root_data
    bound = radius + 1
    # in the dominant cone with a nonnegative inner product matrix,
    # |lambda|^2 >= c_i^2 * gram[i][i] bounds each coordinate
    caps = []
    for i in range(rd.rank):
        cap = 0
        while Fraction(cap + 1) ** 2 * rd.gram[i][i] < bound * bound:
            cap += 1
        caps.append(cap)
    lengths: Dict[Label, float] = {}
    coords = [0] * rd.rank

    def scan(i: int):
        if i == rd.rank:
            lam = tuple(coords)
            lsq = rd.inner(lam, lam)
            if lsq < bound * bound:
                if len(lengths) >= budget:
                    raise BudgetError(
                        "enumeration exceeded budget of %d labels" % budget
                    )
                lengths[lam] = float(lsq) ** 0.5
            return
        for c in range(caps[i] + 1):
            coords[i] = c
            scan(i + 1)
        coords[i] = 0

    scan(0)
    return lengths


def make_ring(family: str, **params) -> FusionRing:
    """Build a ring from a family name and parameters (CLI/config entry)."""
    if family == "free_group_dual":
        return FreeGroupDual(int(params["g"]))
    if family == "orthogonal_free":
        return OrthogonalFree(int(params["N"]))
    if family == "suq2_dual":
        return SUq2Dual(Fraction(str(params["q"])))
    if family == "unitary_free":
        return UnitaryFree(int(params["N"]))
    if family == "compact_lie_dual":
        group = str(params.get("group", "su2"))
        if group not in BUILTIN_ROOT_DATA:
            raise FamilyError("unknown group %r (have: %s)" % (group, sorted(BUILTIN_ROOT_DATA)))
        return CompactLieDual(BUILTIN_ROOT_DATA[group]())
    raise FamilyError("unknown family %r" % (family,))
