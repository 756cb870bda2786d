"""Dense complex-matrix primitives shared by every other module.

Matrices are numpy arrays with dtype complex128.  The norm written
``inf_norm`` is the entrywise max-modulus norm; all coefficient and
residual comparisons in this package are made in that norm.

Tolerance conventions:

* positivity verdicts compare the raw minimum eigenvalue against ``-tol``
  (absolute), and the raw eigenvalue is always reported so callers can
  re-judge against their own scale;
* the Hermitian-input gate allows an asymmetry of ``tol * max(1, inf_norm(M))``
  so that round-off asymmetry of large-scale products does not reject
  honest Hermitian matrices; the measured asymmetry is reported;
* eigenvalue clipping in the PSD factorization uses the relative cut
  ``tol * inf_norm(M)``, which controls the factor rank at the PSD boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ComplexMatrix = np.ndarray

DEFAULT_TOL = 1e-9

# Refuse Kronecker products beyond this many entries.
KRON_ENTRY_CAP = 100_000_000


class NumericsError(ValueError):
    """Base class for numerical contract violations."""


class NotSquareError(NumericsError):
    pass


class NotHermitianError(NumericsError):
    pass


class NotPsdError(NumericsError):
    pass


class SizeCapError(NumericsError):
    """A construction would exceed its configured dimension cap."""


@dataclass(frozen=True)
class PsdReport:
    """Outcome of a positive-semidefiniteness test.

    ``is_psd`` holds exactly when ``min_eigenvalue >= -tolerance``.
    ``asymmetry`` is ``inf_norm(M - M*)`` of the matrix as given, before
    symmetrization.
    """

    min_eigenvalue: float
    is_psd: bool
    tolerance: float
    asymmetry: float = 0.0


def inf_norm(a: ComplexMatrix) -> float:
    """Entrywise max-modulus norm; 0 for empty arrays."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def as_complex_matrix(a) -> ComplexMatrix:
    """Coerce to a 2-D complex128 array, rejecting NaN/Inf entries."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError("matrix contains non-finite entries")
    return arr


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product with an entry-count cap.

    Block (i, j) of the result equals ``a[i, j] * b``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    entries = a.shape[0] * b.shape[0] * a.shape[1] * b.shape[1]
    if entries > KRON_ENTRY_CAP:
        raise SizeCapError(
            f"kron result would have {entries} entries (cap {KRON_ENTRY_CAP})"
        )
    return np.kron(a, b)


def _square_hermitian_part(m: ComplexMatrix, tol: float):
    """Validate squareness and near-Hermitian-ness; return (sym part, asymmetry)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquareError(f"matrix of shape {m.shape} is not square")
    asym = inf_norm(m - m.conj().T)
    gate = tol * max(1.0, inf_norm(m))
    if asym > gate:
        raise NotHermitianError(
            f"asymmetry {asym:.3e} exceeds tolerance gate {gate:.3e}"
        )
    return (m + m.conj().T) / 2.0, asym


def hermitian_min_eig(m: ComplexMatrix, tol: float = DEFAULT_TOL) -> PsdReport:
    """Smallest eigenvalue of the Hermitian part of ``m``.

    ``m`` must be square and Hermitian up to the scaled gate described in
    the module docstring; it is symmetrized before eigensolving.
    """
    sym, asym = _square_hermitian_part(m, tol)
    lo = float(np.linalg.eigvalsh(sym)[0])
    return PsdReport(min_eigenvalue=lo, is_psd=lo >= -tol, tolerance=tol, asymmetry=asym)


def psd_factor(m: ComplexMatrix, tol: float = DEFAULT_TOL):
    """Factor a PSD matrix as ``m ~= L @ L*`` with minimal column count.

    Eigenvalues below ``-tol`` raise NotPsdError; eigenvalues up to the
    relative cut ``tol * inf_norm(m)`` are clipped to zero, so the returned
    ``rank`` (the number of columns of ``L``) counts only eigenvalues
    clearly above the noise floor.  Columns are ordered by decreasing
    eigenvalue.
    """
    sym, _ = _square_hermitian_part(m, tol)
    vals, vecs = np.linalg.eigh(sym)
    if vals.size and vals[0] < -tol:
        raise NotPsdError(f"matrix has eigenvalue {vals[0]:.6e} below -{tol:.1e}")
    cut = tol * inf_norm(sym)
    keep = np.flatnonzero(vals > cut)[::-1]
    factor = vecs[:, keep] * np.sqrt(vals[keep])
    return factor, int(keep.size)
