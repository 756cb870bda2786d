"""Hereditary kernel and polynomial-factor data model, with parsing.

A hereditary kernel is a finitely supported family of p x p complex
coefficient matrices indexed by pairs of words (w, wp): the coefficient of
the monomial ``z^w z'^(transpose(wp))``.  Hereditary means every primed
indeterminate stands to the right of every unprimed one, which is exactly
what the pair-of-words indexing encodes.  A factor is a finitely supported
family of p x q coefficient matrices indexed by single words.

Expression grammar (scalar kernels, p = 1)::

    expr    :=  [sign] term (("+" | "-") term)*
    term    :=  factor ("*" factor)*
    factor  :=  NUMBER | COMPLEX | ZVAR
    NUMBER  :=  real literal, e.g. 1, 0.5, 2e-3
    COMPLEX :=  "(" real ("+"|"-") real "i" ")", e.g. (1.5-0.25i)
    ZVAR    :=  "z" index ["'"], index in 1..N

Within a term all unprimed variables must precede all primed ones.  The
bare literal ``1`` denotes the empty monomial.  Matrix-coefficient kernels
(p > 1) enter only through the JSON container format.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .numerics import as_complex_matrix, inf_norm
from .serialize import matrix_from_json, matrix_to_json
from .words import Word, check_letters, sort_key, transpose


class KernelParseError(ValueError):
    """The expression does not match the kernel grammar."""


class NonHereditaryError(KernelParseError):
    """A primed variable precedes an unprimed one within a term."""


class UnknownIndexError(KernelParseError):
    """A variable index falls outside 1..N."""


@dataclass
class HereditaryKernel:
    """Finitely supported map (w, wp) -> p x p coefficient matrix.

    ``m`` is the degree window used for Gram matrices; it may exceed the
    maximal support length.  Absent keys are zero.  Instances are treated
    as immutable after construction.
    """

    N: int
    p: int
    m: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("arity N must be at least 1")
        if self.p < 1:
            raise ValueError("coefficient dimension p must be at least 1")
        if self.m < 0:
            raise ValueError("degree bound m must be non-negative")
        normalized = {}
        for (w, wp), c in self.coeffs.items():
            w = tuple(int(a) for a in w)
            wp = tuple(int(a) for a in wp)
            check_letters(w, self.N)
            check_letters(wp, self.N)
            if len(w) > self.m or len(wp) > self.m:
                raise ValueError(
                    f"key ({w}, {wp}) exceeds the degree bound m={self.m}"
                )
            arr = as_complex_matrix(c)
            if arr.shape != (self.p, self.p):
                raise ValueError(
                    f"coefficient for ({w}, {wp}) has shape {arr.shape}, "
                    f"expected ({self.p}, {self.p})"
                )
            normalized[(w, wp)] = arr
        self.coeffs = normalized

    def coeff(self, w: Word, wp: Word) -> np.ndarray:
        got = self.coeffs.get((tuple(w), tuple(wp)))
        if got is None:
            return np.zeros((self.p, self.p), dtype=complex)
        return got

    def support_degree(self) -> int:
        """Longest word appearing in any key (0 for the empty kernel)."""
        return max((max(len(w), len(wp)) for w, wp in self.coeffs), default=0)


@dataclass
class NCPolynomial:
    """Finitely supported map w -> p x q coefficient matrix (a kernel factor)."""

    N: int
    p: int
    q: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("arity N must be at least 1")
        if self.p < 1:
            raise ValueError("output dimension p must be at least 1")
        if self.q < 0:
            raise ValueError("inner dimension q must be non-negative")
        normalized = {}
        for w, c in self.coeffs.items():
            w = tuple(int(a) for a in w)
            check_letters(w, self.N)
            arr = np.asarray(c, dtype=complex)
            if arr.ndim != 2 or arr.shape != (self.p, self.q):
                raise ValueError(
                    f"coefficient for {w} has shape {arr.shape}, "
                    f"expected ({self.p}, {self.q})"
                )
            if arr.size and not np.all(np.isfinite(arr)):
                raise ValueError("coefficient contains non-finite entries")
            normalized[w] = arr
        self.coeffs = normalized

    def coeff(self, w: Word) -> np.ndarray:
        got = self.coeffs.get(tuple(w))
        if got is None:
            return np.zeros((self.p, self.q), dtype=complex)
        return got

    def support_degree(self) -> int:
        return max((len(w) for w in self.coeffs), default=0)


# --- expression parser -------------------------------------------------

_REAL = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"

_TOKEN_RE = re.compile(
    rf"""
      (?P<ws>\s+)
    | (?P<cplx>\(\s*[+-]?{_REAL}\s*[+-]\s*{_REAL}\s*i\s*\))
    | (?P<num>{_REAL})
    | (?P<zvar>z\d+'?)
    | (?P<plus>\+)
    | (?P<minus>-)
    | (?P<star>\*)
    """,
    re.VERBOSE,
)

_CPLX_RE = re.compile(
    rf"\(\s*(?P<re>[+-]?{_REAL})\s*(?P<sign>[+-])\s*(?P<im>{_REAL})\s*i\s*\)"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise KernelParseError(f"unexpected character {text[pos]!r} at position {pos}")
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        tokens.append((kind, m.group(), m.start()))
    return tokens


def _parse_complex_literal(text: str) -> complex:
    m = _CPLX_RE.fullmatch(text)
    if m is None:
        raise KernelParseError(f"malformed complex literal {text!r}")
    im = float(m.group("im"))
    if m.group("sign") == "-":
        im = -im
    return complex(float(m.group("re")), im)


def parse_kernel(text: str, N: int, p: int = 1) -> HereditaryKernel:
    """Parse an expression in the scalar grammar into a kernel.

    The primed factors of each term are read left to right as a word v;
    the stored key is (w, transpose(v)) so that the term equals
    ``c * z^w * z'^(transpose(key))``.
    """
    if p != 1:
        raise ValueError("the expression grammar builds scalar kernels only; use JSON for p > 1")
    if N < 1:
        raise ValueError("arity N must be at least 1")
    tokens = _tokenize(text)
    if not tokens:
        raise KernelParseError("empty expression")

    coeffs: dict = {}
    i = 0

    def at_end() -> bool:
        return i >= len(tokens)

    def parse_term(sign: int):
        nonlocal i
        coeff = complex(sign)
        unprimed: list[int] = []
        primed: list[int] = []
        while True:
            if at_end():
                raise KernelParseError("expected a factor at end of input")
            kind, text_, pos = tokens[i]
            if kind == "num":
                coeff *= float(text_)
            elif kind == "cplx":
                coeff *= _parse_complex_literal(text_)
            elif kind == "zvar":
                is_primed = text_.endswith("'")
                idx = int(text_[1:-1] if is_primed else text_[1:])
                if not 1 <= idx <= N:
                    raise UnknownIndexError(f"index {idx} out of range 1..{N} at position {pos}")
                if is_primed:
                    primed.append(idx)
                elif primed:
                    raise NonHereditaryError(
                        f"unprimed factor after a primed one at position {pos}"
                    )
                else:
                    unprimed.append(idx)
            else:
                raise KernelParseError(f"expected a factor, got {text_!r} at position {pos}")
            i += 1
            if not at_end() and tokens[i][0] == "star":
                i += 1
                continue
            break
        return coeff, tuple(unprimed), transpose(tuple(primed))

    sign = 1
    if tokens[0][0] in ("plus", "minus"):
        sign = -1 if tokens[0][0] == "minus" else 1
        i = 1
    while True:
        c, w, wp = parse_term(sign)
        key = (w, wp)
        coeffs[key] = coeffs.get(key, 0j) + c
        if at_end():
            break
        kind, text_, pos = tokens[i]
        if kind == "plus":
            sign = 1
        elif kind == "minus":
            sign = -1
        else:
            raise KernelParseError(f"expected '+' or '-', got {text_!r} at position {pos}")
        i += 1

    support = {
        key: np.array([[c]], dtype=complex) for key, c in coeffs.items() if c != 0
    }
    m = max((max(len(w), len(wp)) for w, wp in support), default=0)
    return HereditaryKernel(N=N, p=1, m=m, coeffs=support)


def format_kernel(kernel: HereditaryKernel) -> str:
    """Print a scalar kernel in the grammar accepted by parse_kernel.

    Round trip: ``parse_kernel(format_kernel(K), K.N)`` has exactly the
    same coefficient map as ``K``.
    """
    if kernel.p != 1:
        raise ValueError("only scalar kernels have an expression form")
    if not kernel.coeffs:
        return "0"
    parts = []
    for w, wp in sorted(kernel.coeffs, key=lambda k: (sort_key(k[0]), sort_key(k[1]))):
        c = complex(kernel.coeffs[(w, wp)][0, 0])
        im_sign = "+" if c.imag >= 0 else "-"
        factors = [f"({c.real!r}{im_sign}{abs(c.imag)!r}i)"]
        factors += [f"z{a}" for a in w]
        factors += [f"z{a}'" for a in transpose(wp)]
        parts.append("*".join(factors))
    return " + ".join(parts)


# --- constructions and checks -------------------------------------------


def kernel_from_factor(factor: NCPolynomial) -> HereditaryKernel:
    """The kernel with coefficients ``H_w @ H_wp*`` over the factor support.

    Such kernels are positive by construction; the degree window is the
    factor's maximal support length.
    """
    coeffs = {}
    for w, cw in factor.coeffs.items():
        for wp, cwp in factor.coeffs.items():
            block = cw @ cwp.conj().T
            if inf_norm(block) > 0:
                coeffs[(w, wp)] = block
    return HereditaryKernel(
        N=factor.N, p=factor.p, m=factor.support_degree(), coeffs=coeffs
    )


def hermitize_check(kernel: HereditaryKernel, tol: float) -> bool:
    """True iff K_{wp,w} equals K_{w,wp}* within tol for every key pair."""
    return hermitian_defect(kernel) <= tol


def hermitian_defect(kernel: HereditaryKernel) -> float:
    """Max-norm of ``K_{wp,w} - K_{w,wp}*`` over all keys (absent = zero)."""
    keys = set(kernel.coeffs)
    keys |= {(wp, w) for w, wp in keys}
    worst = 0.0
    for w, wp in keys:
        diff = kernel.coeff(wp, w) - kernel.coeff(w, wp).conj().T
        worst = max(worst, inf_norm(diff))
    return worst


# --- JSON container format ----------------------------------------------


def kernel_to_json(kernel: HereditaryKernel) -> dict:
    entries = [
        {"w": list(w), "wp": list(wp), "coeff": matrix_to_json(c)}
        for (w, wp), c in sorted(
            kernel.coeffs.items(), key=lambda kv: (sort_key(kv[0][0]), sort_key(kv[0][1]))
        )
    ]
    return {"N": kernel.N, "p": kernel.p, "m": kernel.m, "entries": entries}


def kernel_from_json(data: dict) -> HereditaryKernel:
    coeffs = {}
    for entry in data["entries"]:
        key = (tuple(entry["w"]), tuple(entry["wp"]))
        mat = matrix_from_json(entry["coeff"])
        if key in coeffs:
            coeffs[key] = coeffs[key] + mat
        else:
            coeffs[key] = mat
    return HereditaryKernel(
        N=int(data["N"]), p=int(data["p"]), m=int(data["m"]), coeffs=coeffs
    )


def polynomial_to_json(poly: NCPolynomial) -> dict:
    entries = [
        {"w": list(w), "coeff": matrix_to_json(c)}
        for w, c in sorted(poly.coeffs.items(), key=lambda kv: sort_key(kv[0]))
    ]
    return {"N": poly.N, "p": poly.p, "q": poly.q, "entries": entries}


def polynomial_from_json(data: dict) -> NCPolynomial:
    coeffs = {tuple(e["w"]): matrix_from_json(e["coeff"]) for e in data["entries"]}
    return NCPolynomial(
        N=int(data["N"]), p=int(data["p"]), q=int(data["q"]), coeffs=coeffs
    )
