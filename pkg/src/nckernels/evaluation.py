"""Matrix substitution and joint-nilpotency detection.

Substituting an N-tuple of n x n matrices Z into a word w gives the
ordered product Z^w (identity for the empty word).  Kernels evaluate as

    K(Z, Z') = sum over keys of  K_{w,wp} (x) Z^w @ (Z'*)^(transpose(wp)),

where Z'* is the tuple of conjugate-transposed matrices; factors evaluate
as ``H(Z) = sum H_w (x) Z^w``.  Word products are memoized per evaluation
call, keyed by word prefix, so repeated prefixes across coefficient keys
cost one multiplication each.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kernels import HereditaryKernel, NCPolynomial
from .numerics import as_complex_matrix
from .serialize import matrix_from_json, matrix_to_json
from .words import Word, check_letters, transpose


@dataclass
class MatrixTuple:
    """An N-tuple of square complex matrices of common size n."""

    N: int
    n: int
    mats: list = field(default_factory=list)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("arity N must be at least 1")
        if self.n < 1:
            raise ValueError("matrix size n must be at least 1")
        if len(self.mats) != self.N:
            raise ValueError(f"expected {self.N} matrices, got {len(self.mats)}")
        normalized = []
        for k, mat in enumerate(self.mats):
            arr = as_complex_matrix(mat)
            if arr.shape != (self.n, self.n):
                raise ValueError(
                    f"matrix {k + 1} has shape {arr.shape}, expected ({self.n}, {self.n})"
                )
            normalized.append(arr)
        self.mats = normalized

    def adjoint(self) -> "MatrixTuple":
        """The tuple of conjugate-transposed matrices."""
        return MatrixTuple(N=self.N, n=self.n, mats=[m.conj().T for m in self.mats])


@dataclass(frozen=True)
class NilpotencyReport:
    """``rank`` is the smallest r with all length-r products zero, if any."""

    is_nilpotent: bool
    rank: int | None = None


class _ProductCache:
    """Memoizes word products by prefix for a single evaluation call."""

    def __init__(self, mats):
        n = mats[0].shape[0]
        self._mats = mats
        self._memo = {(): np.eye(n, dtype=complex)}

    def product(self, w: Word) -> np.ndarray:
        got = self._memo.get(w)
        if got is None:
            got = self.product(w[:-1]) @ self._mats[w[-1] - 1]
            self._memo[w] = got
        return got


def eval_word(Z: MatrixTuple, w: Word) -> np.ndarray:
    """The ordered product of the tuple's matrices along w; identity for ()."""
    check_letters(w, Z.N)
    out = np.eye(Z.n, dtype=complex)
    for a in w:
        out = out @ Z.mats[a - 1]
    return out


def eval_poly(H: NCPolynomial, Z: MatrixTuple) -> np.ndarray:
    """``sum H_w (x) Z^w`` as a (p n) x (q n) matrix."""
    if H.N != Z.N:
        raise ValueError(f"arity mismatch: polynomial N={H.N}, tuple N={Z.N}")
    cache = _ProductCache(Z.mats)
    n = Z.n
    acc = np.zeros((H.p, n, H.q, n), dtype=complex)
    for w, c in H.coeffs.items():
        zw = cache.product(w)
        acc += c[:, None, :, None] * zw[None, :, None, :]
    return acc.reshape(H.p * n, H.q * n)


def _eval_kernel_cached(K, zcache, scache, n):
    acc = np.zeros((K.p, n, K.p, n), dtype=complex)
    for (w, wp), c in K.coeffs.items():
        prod = zcache.product(w) @ scache.product(transpose(wp))
        acc += c[:, None, :, None] * prod[None, :, None, :]
    return acc.reshape(K.p * n, K.p * n)


def eval_kernel(K: HereditaryKernel, Z: MatrixTuple, Zp: MatrixTuple | None = None) -> np.ndarray:
    """``sum K_{w,wp} (x) Z^w @ (Zp*)^(transpose(wp))``, a (p n) x (p n) matrix.

    ``Zp`` defaults to ``Z`` (the diagonal evaluation).
    """
    if Zp is None:
        Zp = Z
    if K.N != Z.N or K.N != Zp.N:
        raise ValueError(f"arity mismatch: kernel N={K.N}, tuples N={Z.N}, N={Zp.N}")
    if Z.n != Zp.n:
        raise ValueError(f"size mismatch: {Z.n} vs {Zp.n}")
    zcache = _ProductCache(Z.mats)
    scache = _ProductCache(Zp.adjoint().mats)
    return _eval_kernel_cached(K, zcache, scache, Z.n)


def block_eval_matrix(K: HereditaryKernel, points: list[MatrixTuple]) -> np.ndarray:
    """The Hermitian block matrix of kernel evaluations over sample points.

    Block (j, k) is ``eval_kernel(K, points[j], points[k])``; the whole
    matrix is PSD exactly when K acts as a positive kernel on the points.
    Requires a Hermitian K and points of common arity and size.
    """
    if not points:
        raise ValueError("at least one sample point is required")
    n = points[0].n
    for Z in points:
        if Z.N != K.N:
            raise ValueError(f"arity mismatch: kernel N={K.N}, tuple N={Z.N}")
        if Z.n != n:
            raise ValueError(f"mixed sizes: {Z.n} vs {n}")
    zcaches = [_ProductCache(Z.mats) for Z in points]
    scaches = [_ProductCache(Z.adjoint().mats) for Z in points]
    d = K.p * n
    ell = len(points)
    out = np.zeros((ell * d, ell * d), dtype=complex)
    for j in range(ell):
        for k in range(ell):
            out[j * d : (j + 1) * d, k * d : (k + 1) * d] = _eval_kernel_cached(
                K, zcaches[j], scaches[k], n
            )
    return out


def joint_nilpotency_rank(Z: MatrixTuple, sv_tol: float = 1e-10) -> NilpotencyReport:
    """Joint nilpotency via the reachable-subspace chain.

    V_0 is the full space and V_{k+1} the span of the images Z_j V_k; the
    tuple is jointly nilpotent iff V_n vanishes, and the rank is the first
    k with V_k = 0 (equivalently, all products of length k vanish).  Rank
    deficiency is judged by singular values relative to the largest
    spectral norm among the input matrices.
    """
    scale = max((float(np.linalg.norm(m, 2)) for m in Z.mats), default=0.0)
    basis = np.eye(Z.n, dtype=complex)
    for step in range(1, Z.n + 1):
        stacked = np.hstack([m @ basis for m in Z.mats])
        u, s, _ = np.linalg.svd(stacked, full_matrices=False)
        keep = s > sv_tol * scale
        basis = u[:, keep]
        if basis.shape[1] == 0:
            return NilpotencyReport(is_nilpotent=True, rank=step)
    return NilpotencyReport(is_nilpotent=False, rank=None)


def tuple_to_json(Z: MatrixTuple) -> dict:
    return {"N": Z.N, "n": Z.n, "mats": [matrix_to_json(m) for m in Z.mats]}


def tuple_from_json(data: dict) -> MatrixTuple:
    return MatrixTuple(
        N=int(data["N"]),
        n=int(data["n"]),
        mats=[matrix_from_json(m) for m in data["mats"]],
    )
