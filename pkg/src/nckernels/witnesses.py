"""Constructive witnesses for kernel positivity and its failure.

Three families of test objects live here:

* jointly nilpotent tensor tuples built from a cyclic rotation of tensor
  slots, with prescribed nilpotency rank and scalar scaling along each
  generator;
* weighted shift tuples acting on the word window of length <= m, in the
  orthonormalized basis where each shift step carries weight sqrt(s), so
  evaluations stay honest Euclidean operators for standard eigensolvers;
* the abelianization bridge that collapses a hereditary kernel evaluated
  on scaled tensor tuples into a commutative polynomial kernel, whose
  coefficients can be recovered from point samples by exact discrete
  Fourier sums over roots-of-unity grids.

The counterexample demo packages the standard 1 - z z' example: positive
on every single matrix of norm below 1, yet not a positive kernel.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .certificates import gram_matrix
from .evaluation import MatrixTuple, _ProductCache, block_eval_matrix, eval_kernel
from .kernels import HereditaryKernel, parse_kernel
from .numerics import (
    PsdReport,
    SizeCapError,
    as_complex_matrix,
    hermitian_min_eig,
    inf_norm,
    kron,
)
from .words import (
    MultiDegree,
    Word,
    abelianize,
    enumerate_multidegrees,
    enumerate_words,
    transpose,
    word_positions,
)

# Hard cap on the side of tensor-product constructions, (N+1)**m <= this.
TENSOR_SIZE_CAP = 4096

DEFAULT_S_GRID = (1.0, 10.0, 100.0, 1000.0, 10000.0)


@dataclass
class CommutativePolyKernel:
    """Polynomial kernel in N commuting variables and their conjugates.

    ``coeffs`` maps multidegree pairs (t, tp) to square blocks of side
    ``block_dim``: the coefficient of ``lam^t * conj(lam')^tp``.
    """

    N: int
    m: int
    block_dim: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        normalized = {}
        for (t, tp), c in self.coeffs.items():
            t = tuple(int(a) for a in t)
            tp = tuple(int(a) for a in tp)
            if len(t) != self.N or len(tp) != self.N:
                raise ValueError(f"multidegree pair ({t}, {tp}) does not match N={self.N}")
            if sum(t) > self.m or sum(tp) > self.m:
                raise ValueError(f"multidegree pair ({t}, {tp}) exceeds degree {self.m}")
            arr = as_complex_matrix(c)
            if arr.shape != (self.block_dim, self.block_dim):
                raise ValueError(
                    f"block for ({t}, {tp}) has shape {arr.shape}, "
                    f"expected ({self.block_dim}, {self.block_dim})"
                )
            normalized[(t, tp)] = arr
        self.coeffs = normalized

    def coeff(self, t: MultiDegree, tp: MultiDegree) -> np.ndarray:
        got = self.coeffs.get((tuple(t), tuple(tp)))
        if got is None:
            return np.zeros((self.block_dim, self.block_dim), dtype=complex)
        return got


def cyclic_shift_matrix(N: int, m: int) -> np.ndarray:
    """Permutation of (N+1)^m rotating tensor slots one step to the right.

    On product basis vectors: e_{i1} (x) ... (x) e_{im} maps to
    e_{im} (x) e_{i1} (x) ... (x) e_{i(m-1)}.  Identity for m = 1.
    """
    if m < 1:
        raise ValueError("tensor order m must be at least 1")
    base = N + 1
    n = base**m
    if n > TENSOR_SIZE_CAP:
        raise SizeCapError(f"tensor construction of side {n} exceeds cap {TENSOR_SIZE_CAP}")
    S = np.zeros((n, n), dtype=complex)
    for idx in range(n):
        digits = []
        rem = idx
        for _ in range(m):
            digits.append(rem % base)
            rem //= base
        digits.reverse()  # most significant slot first
        rotated = [digits[-1]] + digits[:-1]
        new = 0
        for d in rotated:
            new = new * base + d
        S[new, idx] = 1.0
    return S


def nilpotent_tensor_tuple(N: int, m: int, lam=None) -> MatrixTuple:
    """Jointly nilpotent tuple of side (N+1)^m with rank exactly m + 1.

    Generator k acts as: rotate tensor slots, then send basis vector e_1
    of the first slot to e_{k+1} (annihilating the rest), scaled by
    lam[k-1].  Any product of m + 1 generators vanishes because the first
    slot gets hit twice, while a product of length <= m maps the all-e_1
    basis vector to a nonzero basis vector; so the rank is exactly m + 1
    whenever every scaling is nonzero.
    """
    if lam is None:
        lam = [1.0] * N
    lam = [complex(v) for v in lam]
    if len(lam) != N:
        raise ValueError(f"expected {N} scaling factors, got {len(lam)}")
    S = cyclic_shift_matrix(N, m)
    base = N + 1
    rest = np.eye(base ** (m - 1), dtype=complex)
    mats = []
    for k in range(1, N + 1):
        E = np.zeros((base, base), dtype=complex)
        E[k, 0] = 1.0
        mats.append(lam[k - 1] * (np.kron(E, rest) @ S))
    return MatrixTuple(N=N, n=base**m, mats=mats)


def abelianized_coefficients(K: HereditaryKernel, Z: MatrixTuple) -> CommutativePolyKernel:
    """Collapse kernel coefficients by multidegree after substituting Z.

    Block (t, tp) sums ``K_{w,wp} (x) Z^w (Z*)^(transpose(wp))`` over all
    keys whose words abelianize to t and tp.  Evaluating the result at
    scalar points (lam, lam') reproduces the kernel evaluated on the
    tuples scaled generator-wise by lam and lam'.
    """
    if K.N != Z.N:
        raise ValueError(f"arity mismatch: kernel N={K.N}, tuple N={Z.N}")
    zcache = _ProductCache(Z.mats)
    scache = _ProductCache(Z.adjoint().mats)
    block_dim = K.p * Z.n
    coeffs: dict = {}
    for (w, wp), c in K.coeffs.items():
        key = (abelianize(w, K.N), abelianize(wp, K.N))
        block = kron(c, zcache.product(w) @ scache.product(transpose(wp)))
        if key in coeffs:
            coeffs[key] = coeffs[key] + block
        else:
            coeffs[key] = block
    return CommutativePolyKernel(N=K.N, m=K.m, block_dim=block_dim, coeffs=coeffs)


def eval_commutative_kernel(P: CommutativePolyKernel, lam, lamp) -> np.ndarray:
    """``sum P_{t,tp} lam^t conj(lamp)^tp`` as a block_dim square matrix."""
    lam = np.asarray(lam, dtype=complex)
    lamp = np.asarray(lamp, dtype=complex)
    acc = np.zeros((P.block_dim, P.block_dim), dtype=complex)
    for (t, tp), c in P.coeffs.items():
        weight = np.prod(lam**np.array(t)) * np.prod(np.conj(lamp) ** np.array(tp))
        acc = acc + c * weight
    return acc


def torus_extract(sampler, N: int, m: int, block_dim: int) -> CommutativePolyKernel:
    """Recover polynomial-kernel coefficients from torus point samples.

    ``sampler(lam, lamp)`` must evaluate a polynomial kernel of bidegree
    at most m in each variable pair.  Coefficients are discrete Fourier
    sums over the grid of (m+1)-st roots of unity in each of the 2N torus
    variables; for such polynomials the quadrature is exact up to
    round-off.
    """
    degs = enumerate_multidegrees(N, m)
    roots = np.exp(2j * np.pi * np.arange(m + 1) / (m + 1))
    grid = [tuple(roots[i] for i in idx) for idx in itertools.product(range(m + 1), repeat=N)]
    G = len(grid)
    samples = np.empty((G, G, block_dim, block_dim), dtype=complex)
    for a, lam in enumerate(grid):
        for b, lamp in enumerate(grid):
            val = np.asarray(sampler(lam, lamp), dtype=complex)
            samples[a, b] = val.reshape(block_dim, block_dim)
    # weight tables: conj(lam)^t on the left grid, lamp^tp on the right
    conj_w = np.array(
        [[np.prod([np.conj(lam[i]) ** t[i] for i in range(N)]) for t in degs] for lam in grid]
    )
    plain_w = np.array(
        [[np.prod([lamp[i] ** tp[i] for i in range(N)]) for tp in degs] for lamp in grid]
    )
    coeffs = {}
    for ti, t in enumerate(degs):
        for tj, tp in enumerate(degs):
            block = np.einsum("a,b,abij->ij", conj_w[:, ti], plain_w[:, tj], samples)
            coeffs[(t, tp)] = block / (G * G)
    return CommutativePolyKernel(N=N, m=m, block_dim=block_dim, coeffs=coeffs)


def commutative_gram_check(P: CommutativePolyKernel, tol: float = 1e-9) -> PsdReport:
    """Assemble the multidegree-indexed block matrix of P and eigen-test it.

    The index runs over all multidegrees of total <= m in graded-lex
    order; P must be Hermitian-symmetric (block (tp, t) equal to the
    adjoint of block (t, tp)).
    """
    degs = enumerate_multidegrees(P.N, P.m)
    pos = {t: i for i, t in enumerate(degs)}
    bd = P.block_dim
    M = np.zeros((len(degs) * bd, len(degs) * bd), dtype=complex)
    for (t, tp), c in P.coeffs.items():
        i, j = pos[t], pos[tp]
        M[i * bd : (i + 1) * bd, j * bd : (j + 1) * bd] = c
    return hermitian_min_eig(M, tol)


def shift_tuple(N: int, m: int, s: float) -> MatrixTuple:
    """Adjoints of the weighted backward shifts on the word window <= m.

    In the orthonormalized word basis, the backward shift along generator
    j deletes a leading j with weight sqrt(s) and kills words not starting
    with j; the returned matrices are the adjoints (forward shifts), which
    append j on the left with weight sqrt(s).  The tuple is jointly
    nilpotent of rank m + 1: shifting m + 1 times leaves the window.
    """
    if s <= 0:
        raise ValueError("weight s must be positive")
    if m < 0:
        raise ValueError("window m must be non-negative")
    index = enumerate_words(N, m)
    pos = word_positions(N, m)
    d = len(index)
    rt = float(np.sqrt(s))
    mats = []
    for j in range(1, N + 1):
        Sj = np.zeros((d, d), dtype=complex)
        for v in index:
            if len(v) < m:
                Sj[pos[(j,) + v], pos[v]] = rt
        mats.append(Sj)
    return MatrixTuple(N=N, n=d, mats=mats)


@dataclass(frozen=True)
class ShiftWitnessReport:
    """Per-weight minimum eigenvalues of the kernel evaluated on shifts."""

    verdict: str  # "WitnessFound" | "NoWitnessInGrid"
    s_grid: tuple[float, ...]
    min_eigenvalues: tuple[float, ...]
    witness_s: float | None = None


def shift_witness_test(
    K: HereditaryKernel, s_grid=DEFAULT_S_GRID, tol: float = 1e-9
) -> ShiftWitnessReport:
    """Search the weight grid for a shift tuple witnessing non-positivity.

    For each s the kernel is evaluated diagonally on the shift tuple of
    its own degree window; a minimum eigenvalue below -tol at any s is a
    concrete matrix witness that the kernel is not positive.  A non-PSD
    Gram matrix forces such a witness for all sufficiently large s, but
    no explicit threshold is claimed: per-s data is reported.
    """
    s_grid = tuple(float(s) for s in s_grid)
    mins = []
    for s in s_grid:
        S = shift_tuple(K.N, K.m, s)
        report = hermitian_min_eig(eval_kernel(K, S, S), tol)
        mins.append(report.min_eigenvalue)
    mins_t = tuple(mins)
    found = [i for i, lo in enumerate(mins_t) if lo < -tol]
    if found:
        best = min(found, key=lambda i: mins_t[i])
        return ShiftWitnessReport("WitnessFound", s_grid, mins_t, s_grid[best])
    return ShiftWitnessReport("NoWitnessInGrid", s_grid, mins_t, None)


def shift_identity_check(K: HereditaryKernel, s: float, h: dict) -> tuple[complex, complex]:
    """Two routes to the same shift-evaluation quadratic form.

    ``h`` maps words of length <= m to vectors of dimension p (absent
    words count as zero).  The left side evaluates the kernel on the
    shift tuple and pairs it against the window vector with weights
    s^(-|word|/2) compensating the orthonormalized basis; the right side
    is the combinatorial triple sum over a common suffix g with weight
    s^(-|g|), pairing coefficients against suffix-extended vectors.
    Inner products are linear in the first argument.
    """
    if s <= 0:
        raise ValueError("weight s must be positive")
    m = K.m
    p = K.p
    index = enumerate_words(K.N, m)
    pos = {w: i for i, w in enumerate(index)}
    vecs = {}
    for w, v in h.items():
        w = tuple(int(a) for a in w)
        if len(w) > m:
            raise ValueError(f"word {w} exceeds the window m={m}")
        arr = np.asarray(v, dtype=complex).reshape(-1)
        if arr.shape != (p,):
            raise ValueError(f"vector for {w} has dimension {arr.shape[0]}, expected {p}")
        vecs[w] = arr

    def vec(w: Word) -> np.ndarray:
        return vecs.get(w, np.zeros(p, dtype=complex))

    d = len(index)
    x = np.zeros(p * d, dtype=complex)
    for w, v in vecs.items():
        unit = np.zeros(d, dtype=complex)
        unit[pos[w]] = 1.0
        x += float(s) ** (-len(w) / 2.0) * np.kron(v, unit)
    S = shift_tuple(K.N, m, s)
    lhs = complex(np.vdot(x, eval_kernel(K, S, S) @ x))

    rhs = 0j
    for (w, wp), c in K.coeffs.items():
        reach = m - max(len(w), len(wp))
        if reach < 0:
            continue
        for g in enumerate_words(K.N, reach):
            rhs += complex(np.vdot(vec(w + g), c @ vec(wp + g))) * float(s) ** (-len(g))
    return lhs, rhs


@dataclass(frozen=True)
class CounterexampleReport:
    """The three facts of the convergent-case counterexample, with data."""

    samples: int
    radius: float
    gram_eigenvalues: tuple[float, float]
    gram_confirmed: bool
    diag_min_eigenvalues: tuple[float, ...]
    diagonal_confirmed: bool
    pair_min_eigenvalue: float
    pair_confirmed: bool
    all_confirmed: bool


def counterexample_demo(
    samples: int = 100, radius: float = 0.5, seed: int = 0
) -> CounterexampleReport:
    """Demonstrate that diagonal positivity does not imply kernel positivity.

    For the kernel 1 - z1*z1': (a) its Gram matrix has eigenvalues 1 and
    -1; (b) its diagonal evaluation at any single matrix of norm below
    ``radius`` < 1 is PSD with minimum eigenvalue at least 1 - radius^2;
    (c) the two-point block matrix at {0, radius} is indefinite.  Random
    sample matrices cycle through sizes 1..4.
    """
    if not 0 < radius < 1:
        raise ValueError("radius must lie strictly between 0 and 1")
    if samples < 1:
        raise ValueError("at least one sample is required")
    rng = np.random.default_rng(seed)
    K = parse_kernel("1 - z1*z1'", N=1)

    evals = np.linalg.eigvalsh(gram_matrix(K).matrix)
    gram_eigs = (float(evals[0]), float(evals[1]))
    gram_confirmed = abs(gram_eigs[0] + 1.0) <= 1e-12 and abs(gram_eigs[1] - 1.0) <= 1e-12

    diag_mins = []
    for i in range(samples):
        n = (i % 4) + 1
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        top = float(np.linalg.norm(g, 2))
        scale = radius * rng.uniform(0.0, 1.0) / top if top > 0 else 0.0
        Z = MatrixTuple(N=1, n=n, mats=[g * scale])
        diag_mins.append(hermitian_min_eig(eval_kernel(K, Z, Z)).min_eigenvalue)
    diag_floor = 1.0 - radius * radius - 1e-9
    diagonal_confirmed = all(lo >= diag_floor for lo in diag_mins)

    origin = MatrixTuple(N=1, n=1, mats=[np.zeros((1, 1))])
    shifted = MatrixTuple(N=1, n=1, mats=[np.array([[radius]])])
    pair_min = hermitian_min_eig(block_eval_matrix(K, [origin, shifted])).min_eigenvalue
    pair_confirmed = pair_min < -1e-9

    return CounterexampleReport(
        samples=samples,
        radius=radius,
        gram_eigenvalues=gram_eigs,
        gram_confirmed=gram_confirmed,
        diag_min_eigenvalues=tuple(diag_mins),
        diagonal_confirmed=diagonal_confirmed,
        pair_min_eigenvalue=pair_min,
        pair_confirmed=pair_confirmed,
        all_confirmed=gram_confirmed and diagonal_confirmed and pair_confirmed,
    )
