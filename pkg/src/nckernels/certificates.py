"""Word-indexed Gram matrices and sums-of-squares positivity certificates.

A Hermitian hereditary kernel with degree window m is a positive kernel
exactly when its Gram matrix over the canonical word index of lengths
0..m is PSD; no semidefinite programming is needed because the hereditary
indexing makes the Gram matrix unique.  Factoring a PSD Gram matrix as
``L @ L*`` and slicing L by word blocks yields a polynomial factor H with
``K_{w,wp} = H_w @ H_wp*`` and inner dimension at most p times the number
of index words; the factor is unique only up to right multiplication by
an isometry.

Positivity of the full kernel is decided on the window 0..m alone: for a
polynomial kernel every coefficient outside the window vanishes, so the
Gram matrix over any larger window is the finite block padded by zeros.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import HereditaryKernel, NCPolynomial, hermitian_defect
from .numerics import NotHermitianError, hermitian_min_eig, inf_norm, psd_factor
from .words import Word, enumerate_words, word_positions


@dataclass
class GramMatrix:
    """Hermitian block matrix (K_{w_i, w_j}) over the canonical word index."""

    word_index: list[Word]
    matrix: np.ndarray
    p: int


@dataclass
class PositivityCertificate:
    """Outcome of a kernel positivity query.

    When the verdict is ``PositiveKernel`` the factor, its inner dimension
    and the reconstruction residual are present; they are None otherwise.
    The raw minimum Gram eigenvalue is always reported.
    """

    verdict: str
    min_gram_eigenvalue: float
    word_index: list[Word]
    factor: NCPolynomial | None = None
    inner_dimension: int | None = None
    residual: float | None = None


def gram_matrix(K: HereditaryKernel, herm_tol: float = 1e-9) -> GramMatrix:
    """Assemble the Gram matrix of a Hermitian kernel over lengths 0..m."""
    defect = hermitian_defect(K)
    if defect > herm_tol:
        raise NotHermitianError(
            f"kernel is not Hermitian: coefficient defect {defect:.3e} > {herm_tol:.1e}"
        )
    index = enumerate_words(K.N, K.m)
    pos = {w: i for i, w in enumerate(index)}
    p = K.p
    G = np.zeros((len(index) * p, len(index) * p), dtype=complex)
    for (w, wp), c in K.coeffs.items():
        i, j = pos[w], pos[wp]
        G[i * p : (i + 1) * p, j * p : (j + 1) * p] = c
    return GramMatrix(word_index=index, matrix=G, p=p)


def kernel_from_gram(matrix, N: int, m: int, p: int = 1) -> HereditaryKernel:
    """Inverse of gram_matrix: read coefficient blocks off a block matrix.

    Exactly-zero blocks are left out of the support.
    """
    index = enumerate_words(N, m)
    matrix = np.asarray(matrix, dtype=complex)
    side = len(index) * p
    if matrix.shape != (side, side):
        raise ValueError(f"matrix shape {matrix.shape} does not match window (({side}, {side}))")
    coeffs = {}
    for i, w in enumerate(index):
        for j, wp in enumerate(index):
            block = matrix[i * p : (i + 1) * p, j * p : (j + 1) * p]
            if inf_norm(block) > 0:
                coeffs[(w, wp)] = block
    return HereditaryKernel(N=N, p=p, m=m, coeffs=coeffs)


def _factor_from_gram(G: GramMatrix, K: HereditaryKernel, tol: float) -> NCPolynomial:
    L, rank = psd_factor(G.matrix, tol)
    p = K.p
    coeffs = {}
    if rank > 0:
        for i, w in enumerate(G.word_index):
            block = L[i * p : (i + 1) * p, :]
            if inf_norm(block) > 0:
                coeffs[w] = block
    return NCPolynomial(N=K.N, p=p, q=rank, coeffs=coeffs)


def factor_kernel(K: HereditaryKernel, tol: float = 1e-9) -> NCPolynomial:
    """Sums-of-squares factor of a positive kernel.

    The Gram matrix is PSD-factored as ``L @ L*`` and L is sliced into
    word blocks: ``H_w`` is the block row of L at w's index position.
    Raises NotPsdError when the Gram matrix has an eigenvalue below -tol.
    """
    return _factor_from_gram(gram_matrix(K), K, tol)


def residual(K: HereditaryKernel, H: NCPolynomial) -> float:
    """Max-norm reconstruction error over the union of supports."""
    if K.N != H.N:
        raise ValueError(f"arity mismatch: kernel N={K.N}, factor N={H.N}")
    if K.p != H.p:
        raise ValueError(f"dimension mismatch: kernel p={K.p}, factor p={H.p}")
    keys = set(K.coeffs)
    keys |= {(w, wp) for w in H.coeffs for wp in H.coeffs}
    worst = 0.0
    for w, wp in keys:
        diff = K.coeff(w, wp) - H.coeff(w) @ H.coeff(wp).conj().T
        worst = max(worst, inf_norm(diff))
    return worst


def check_nc_positivity(K: HereditaryKernel, tol: float = 1e-9) -> PositivityCertificate:
    """Certify kernel positivity by the minimum Gram eigenvalue.

    Verdict is ``PositiveKernel`` iff the minimum eigenvalue is at least
    -tol; in that case the sums-of-squares factor is attached together
    with its inner dimension and reconstruction residual.
    """
    G = gram_matrix(K)
    report = hermitian_min_eig(G.matrix, tol)
    if not report.is_psd:
        return PositivityCertificate(
            verdict="NotPositive",
            min_gram_eigenvalue=report.min_eigenvalue,
            word_index=G.word_index,
        )
    H = _factor_from_gram(G, K, tol)
    return PositivityCertificate(
        verdict="PositiveKernel",
        min_gram_eigenvalue=report.min_eigenvalue,
        word_index=G.word_index,
        factor=H,
        inner_dimension=H.q,
        residual=residual(K, H),
    )
