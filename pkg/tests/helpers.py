"""Shared random generators and brute-force oracles for the test suite."""

from __future__ import annotations

import numpy as np

from nckernels import (
    HereditaryKernel,
    MatrixTuple,
    NCPolynomial,
    NilpotencyReport,
    enumerate_words,
    inf_norm,
    kernel_from_factor,
    kernel_from_gram,
    word_count,
)


def random_complex(rng, *shape, scale=1.0):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_factor(rng, N, m, p, q, max_support=4) -> NCPolynomial:
    """Random polynomial factor supported on a few words of length <= m."""
    pool = enumerate_words(N, m)
    count = int(rng.integers(1, min(max_support, len(pool)) + 1))
    picks = rng.choice(len(pool), size=count, replace=False)
    coeffs = {pool[i]: random_complex(rng, p, q) for i in sorted(picks)}
    return NCPolynomial(N=N, p=p, q=q, coeffs=coeffs)


def random_positive_kernel(rng, N, m, p, qmax=3) -> HereditaryKernel:
    q = int(rng.integers(1, qmax + 1))
    return kernel_from_factor(random_factor(rng, N, m, p, q))


def random_psd_gram_kernel(rng, N, m, p) -> HereditaryKernel:
    """Kernel whose Gram matrix is a dense random PSD matrix."""
    d = word_count(N, m) * p
    a = random_complex(rng, d, d)
    gram = a @ a.conj().T / d
    return kernel_from_gram((gram + gram.conj().T) / 2, N, m, p)


def deflated_indefinite_kernel(rng, N, m, p, floor=0.1):
    """Kernel built from a PSD Gram matrix with its bottom eigenvalue
    pushed down to a value <= -floor.  Returns (kernel, negative value)."""
    d = word_count(N, m) * p
    a = random_complex(rng, d, d)
    gram = a @ a.conj().T / d
    vals, vecs = np.linalg.eigh((gram + gram.conj().T) / 2)
    vals[0] = -(floor * (1.0 + rng.uniform()))
    gram = vecs @ np.diag(vals) @ vecs.conj().T
    gram = (gram + gram.conj().T) / 2
    return kernel_from_gram(gram, N, m, p), float(vals[0])


def random_nilpotent_tuple(rng, N, n) -> MatrixTuple:
    """Strictly upper triangular, hence jointly nilpotent."""
    return MatrixTuple(
        N=N, n=n, mats=[np.triu(random_complex(rng, n, n), 1) for _ in range(N)]
    )


def random_dense_tuple(rng, N, n) -> MatrixTuple:
    return MatrixTuple(N=N, n=n, mats=[random_complex(rng, n, n) for _ in range(N)])


def brute_force_nilpotency(Z: MatrixTuple, tol=1e-12) -> NilpotencyReport:
    """Oracle for joint nilpotency: multiply out every word product.

    The rank, if any, is the smallest r <= n + 1 with all length-r
    products vanishing; longer products then vanish automatically.
    """
    scale = max(max(1.0, inf_norm(m)) for m in Z.mats)
    products = [np.eye(Z.n, dtype=complex)]
    for r in range(1, Z.n + 2):
        products = [prod @ m for prod in products for m in Z.mats]
        if all(inf_norm(prod) <= tol * scale**r for prod in products):
            return NilpotencyReport(is_nilpotent=True, rank=r)
    return NilpotencyReport(is_nilpotent=False, rank=None)
