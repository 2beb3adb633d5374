"""Dense matrix realization of the free orthogonal representation category.

Strand spaces are tensor powers of C^N with the duality vector
``t = sum_i e_i (x) e_i`` (norm^2 = N).  The label-n block is the image of
the n-strand Jones-Wenzl projector ``P_n``; reduced coordinates come from
isometries ``V_n : C^{m_n} -> (C^N)^{(x) n}`` whose columns orthonormally
span that image.  Higher objects are built from three-index sector tensors,
so nothing larger than an ambient ``N^n x m_n`` matrix is ever materialized.

All matrices are real float64.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .fusion import FamilyError, OrthogonalFree

_MAGIC = "qrd-jw-cache-v1"


def _rev_perm(N: int, q: int) -> np.ndarray:
    """Permutation of flat indices of (C^N)^(x)q reversing the strand order."""
    idx = np.arange(N**q)
    out = np.zeros_like(idx)
    for pos in range(q):
        digit = (idx // N ** (q - 1 - pos)) % N
        out += digit * N**pos
    return out


class TLRealization:
    """Jones-Wenzl cache and sector calculus for one value of N.

    ``tol`` controls the eigenvalue threshold used to certify projector
    spectra and intertwiner scalars.
    """

    def __init__(self, N: int, n_max: int = 8, tol: float = 1e-8,
                 dense_cap: int = 2200):
        if N < 3:
            raise FamilyError("strand dimension must be >= 3, got %r" % (N,))
        self.N = N
        self.n_max = n_max
        self.tol = tol
        self.dense_cap = dense_cap  # largest ambient dim for dense projectors
        self.ring = OrthogonalFree(N)
        self._V: Dict[int, np.ndarray] = {
            0: np.ones((1, 1)),
            1: np.eye(N),
        }
        self._P: Dict[int, np.ndarray] = {}
        self._sector: Dict[Tuple[int, int, int], Tuple[np.ndarray, float]] = {}

    def dim(self, n: int) -> int:
        return int(self.ring.qdim(n))

    # -- Jones-Wenzl projectors and reduced isometries ---------------------
    def jw_projector(self, n: int) -> np.ndarray:
        """Dense n-strand Jones-Wenzl projector (Wenzl recursion)."""
        if n < 1:
            raise FamilyError("projector index must be >= 1")
        if self.N**n > self.dense_cap:
            raise FamilyError(
                "ambient dimension %d exceeds the dense cap %d"
                % (self.N**n, self.dense_cap)
            )
        if n in self._P:
            return self._P[n]
        N = self.N
        t = np.eye(N).reshape(-1)  # duality vector in (C^N)^(x)2
        tt = np.outer(t, t)
        P = np.eye(N)
        for m in range(1, n):
            Pm1 = np.kron(P, np.eye(N))
            E = np.kron(np.eye(N ** (m - 1)), tt)
            coeff = self.dim(m - 1) / self.dim(m)
            P = Pm1 - coeff * (Pm1 @ E @ Pm1)
            self._P.setdefault(m + 1, P)
        self._P[n] = P
        return P

    def isometry(self, n: int) -> np.ndarray:
        """Orthonormal column span of the image of P_n, shape (N^n, m_n).

        Built level by level: the reduced form of ``P_{n+1}`` inside
        ``image(P_n (x) 1)`` is eigendecomposed (its spectrum must be 0/1
        within tolerance) and the eigenvalue-one columns are lifted.
        """
        if not 0 <= n <= self.n_max:
            raise FamilyError("strand count %d outside cache range 0..%d" % (n, self.n_max))
        if n in self._V:
            return self._V[n]
        N = self.N
        top = max(self._V)
        for m in range(top, n):
            Vm = self._V[m]
            mm, mnext = self.dim(m), self.dim(m + 1)
            # reduced matrix of 1^(m-1) (x) tt^T inside image(P_m (x) 1),
            # with rows indexed (reduced label, extra strand)
            V3 = Vm.reshape(N ** (m - 1), N, mm)
            B = np.ascontiguousarray(V3.transpose(2, 1, 0)).reshape(
                mm * N, N ** (m - 1)
            )
            R = np.eye(mm * N) - (self.dim(m - 1) / mm) * (B @ B.T)
            evals, evecs = np.linalg.eigh(R)
            if not np.all((np.abs(evals) < self.tol) | (np.abs(evals - 1) < self.tol)):
                raise FamilyError(
                    "reduced projector spectrum is not 0/1 at level %d" % (m + 1)
                )
            cols = evecs[:, evals > 0.5]
            if cols.shape[1] != mnext:
                raise FamilyError(
                    "projector rank %d at level %d does not match the fusion "
                    "dimension %d" % (cols.shape[1], m + 1, mnext)
                )
            lifted = np.tensordot(
                Vm, cols.reshape(mm, N, mnext), axes=([1], [0])
            )  # (N^m, N, mnext)
            self._V[m + 1] = lifted.reshape(N ** (m + 1), mnext)
        return self._V[n]

    def split(self, n: int, q: int, inner: str) -> np.ndarray:
        """V_n as a 3-tensor with ``q`` strands split off on one side.

        ``inner='right'`` gives shape (N^(n-q), N^q, m_n), ``inner='left'``
        gives (N^q, N^(n-q), m_n).
        """
        if not 0 <= q <= n:
            raise FamilyError("cannot split %d strands off a %d-strand space" % (q, n))
        V = self.isometry(n)
        N = self.N
        if inner == "right":
            return V.reshape(N ** (n - q), N**q, self.dim(n))
        if inner == "left":
            return V.reshape(N**q, N ** (n - q), self.dim(n))
        raise FamilyError("inner side must be 'left' or 'right'")

    # -- sector tensors ----------------------------------------------------
    @staticmethod
    def admissible(k: int, n: int, l: int) -> bool:
        return (k + n - l) % 2 == 0 and abs(k - n) <= l <= k + n

    def sector_tensor(self, k: int, n: int, l: int) -> Tuple[np.ndarray, float]:
        """Unnormalized intertwiner ``C^{m_l} -> H_k (x) H_n`` as a tensor.

        Returns ``(S, c)`` where ``S`` has shape (m_k, m_n, m_l) and the
        flattened matrix satisfies ``S^T S = c * identity`` (certified within
        tolerance; the scalar is forced because the target sector is simple).
        The intertwiner is the composition of nested duality-vector
        insertions with the top-sector inclusion of ``H_l``.
        """
        if not self.admissible(k, n, l):
            raise FamilyError("inadmissible sector triple (k, n, l) = %r" % ((k, n, l),))
        key = (k, n, l)
        if key in self._sector:
            return self._sector[key]
        N = self.N
        q = (k + n - l) // 2
        Ck = self.split(k, q, "right")  # (N^(k-q), N^q, m_k)
        Cn = self.split(n, q, "left")  # (N^q, N^(n-q), m_n)
        CnR = Cn[_rev_perm(N, q)]  # pair inner strands through nested t's
        Vl3 = self.isometry(l).reshape(N ** (k - q), N ** (n - q), self.dim(l))
        # contract the shared outer-left strands, then the inner/outer-right
        T1 = np.tensordot(Ck, Vl3, axes=([0], [0]))  # (x, m_k, u, m_l)
        S = np.tensordot(T1, CnR, axes=([0, 2], [0, 1]))  # (m_k, m_l, m_n)
        S = np.ascontiguousarray(S.transpose(0, 2, 1))  # (m_k, m_n, m_l)
        flat = S.reshape(-1, self.dim(l))
        gram = flat.T @ flat
        c = float(np.trace(gram)) / self.dim(l)
        if c <= self.tol:
            raise FamilyError("vanishing intertwiner for triple %r" % (key,))
        if np.max(np.abs(gram - c * np.eye(self.dim(l)))) > self.tol * max(c, 1.0):
            raise FamilyError(
                "intertwiner gram matrix is not scalar for triple %r" % (key,)
            )
        self._sector[key] = (S, c)
        return S, c

    def sector_isometry(self, k: int, n: int, l: int) -> np.ndarray:
        """Isometric intertwiner, shape (m_k * m_n, m_l)."""
        S, c = self.sector_tensor(k, n, l)
        return S.reshape(-1, self.dim(l)) / np.sqrt(c)

    def isotypic_projector(self, k: int, n: int, l: int) -> np.ndarray:
        """Projector onto the label-l isotypic block of H_k (x) H_n."""
        W = self.sector_isometry(k, n, l)
        return W @ W.T

    def sector_labels(self, k: int, n: int) -> List[int]:
        return list(range(abs(k - n), k + n + 1, 2))

    def embed_t(self, k: int, n: int, q: int) -> np.ndarray:
        """Reduced matrix of ``q`` nested duality insertions.

        Maps ``H_{k-q} (x) H_{n-q}`` into ``H_k (x) H_n`` by inserting the
        nested vector ``t^{(q)}`` between the factors and projecting; shape
        (m_k * m_n, m_{k-q} * m_{n-q}).  ``q = 0`` gives the identity.
        """
        if not 0 <= q <= min(k, n):
            raise FamilyError("cannot insert %d nested pairs into (%d, %d)" % (q, k, n))
        N = self.N
        Ck = self.split(k, q, "right")
        CnR = self.split(n, q, "left")[_rev_perm(N, q)]
        Vkq = self.isometry(k - q)
        Vnq = self.isometry(n - q)
        A = np.tensordot(Ck, Vkq, axes=([0], [0]))  # (x, m_k, m_{k-q})
        B = np.tensordot(CnR, Vnq, axes=([1], [0]))  # (x, m_n, m_{n-q})
        E = np.einsum("xkc,xvd->kvcd", A, B, optimize=True)
        return E.reshape(self.dim(k) * self.dim(n), -1)

    # -- reference values --------------------------------------------------
    def morphism_norm_formula(self, p: int, p2: int, l: int) -> Fraction:
        """Squared norm of one duality insertion on the label-l sector.

        Closed form ``(m_{p+1}/m_p) * (1 - m_{p-q} m_{p2-q-1} /
        (m_{p+1} m_{p2}))`` with ``q = (p + p2 - l)/2`` and ``m_{-1} = 0``.
        """
        if not self.admissible(p, p2, l):
            raise FamilyError("inadmissible triple (p, p2, l) = %r" % ((p, p2, l),))
        q = (p + p2 - l) // 2

        def m(j: int) -> Fraction:
            return Fraction(0) if j < 0 else self.ring.qdim(j)

        return (m(p + 1) / m(p)) * (1 - m(p - q) * m(p2 - q - 1) / (m(p + 1) * m(p2)))

    def morphism_norm_measured(self, p: int, p2: int, l: int) -> float:
        """Measured squared norm of the insertion restricted to sector l."""
        T = self.embed_t(p + 1, p2 + 1, 1)
        W = self.sector_isometry(p, p2, l)
        return float(np.linalg.norm(T @ W, 2)) ** 2

    # -- norms -------------------------------------------------------------
    @staticmethod
    def hs_norm(x: np.ndarray, modular_eigs=None) -> float:
        """Twisted Hilbert-Schmidt norm ``sqrt(Tr(F x* x))``.

        ``modular_eigs`` lists the diagonal of the positive modular element
        F (defaults to all ones, the plain Frobenius norm).
        """
        if modular_eigs is None:
            return float(np.linalg.norm(x))
        w = np.asarray([float(e) for e in modular_eigs])
        if w.shape[0] != x.shape[1] or np.any(w <= 0):
            raise FamilyError("modular weight list does not match the block")
        return float(np.sqrt(np.sum(w * np.sum(np.abs(x) ** 2, axis=0))))

    # -- persistence -------------------------------------------------------
    def save(self, path: str) -> None:
        """Binary dump of the cached isometries (self-describing header)."""
        levels = sorted(self._V)
        header = {
            "magic": _MAGIC,
            "N": self.N,
            "n_max": self.n_max,
            "tol": self.tol,
            "dtype": "float64",
            "layout": "row-major little-endian",
            "levels": levels,
        }
        with open(path, "wb") as fh:
            fh.write((json.dumps(header, sort_keys=True) + "\n").encode())
            for n in levels:
                arr = np.ascontiguousarray(self._V[n], dtype="<f8")
                np.save(fh, arr)

    @classmethod
    def load(cls, path: str) -> "TLRealization":
        with open(path, "rb") as fh:
            header = json.loads(fh.readline().decode())
            if header.get("magic") != _MAGIC:
                raise FamilyError("not a Jones-Wenzl cache file: %r" % (path,))
            out = cls(header["N"], n_max=header["n_max"], tol=header["tol"])
            for n in header["levels"]:
                out._V[n] = np.load(fh)
        return out
