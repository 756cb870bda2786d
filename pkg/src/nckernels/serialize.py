"""JSON encoding of complex scalars and matrices.

Complex numbers serialize as ``[re, im]`` pairs and matrices as row-major
nested arrays of such pairs.
"""

from __future__ import annotations

import numpy as np


def complex_to_pair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def pair_to_complex(pair) -> complex:
    re, im = pair
    return complex(float(re), float(im))


def matrix_to_json(a) -> list:
    a = np.asarray(a, dtype=complex)
    return [[complex_to_pair(z) for z in row] for row in a]


def matrix_from_json(rows) -> np.ndarray:
    data = [[pair_to_complex(pair) for pair in row] for row in rows]
    return np.asarray(data, dtype=complex)
