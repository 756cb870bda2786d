"""Hereditary non-commutative kernels: positivity certificates and witnesses.

The package represents finitely supported kernels in 2N non-commuting
indeterminates (every primed variable to the right of every unprimed
one), certifies their positivity through the word-indexed Gram matrix,
factors positive kernels into sums of squares, evaluates kernels on
tuples of matrices, and builds the classical witness objects: jointly
nilpotent tensor tuples, weighted shift tuples, and the convergent-case
counterexample.
"""

from .certificates import (
    GramMatrix,
    PositivityCertificate,
    check_nc_positivity,
    factor_kernel,
    gram_matrix,
    kernel_from_gram,
    residual,
)
from .evaluation import (
    MatrixTuple,
    NilpotencyReport,
    block_eval_matrix,
    eval_kernel,
    eval_poly,
    eval_word,
    joint_nilpotency_rank,
    tuple_from_json,
    tuple_to_json,
)
from .kernels import (
    HereditaryKernel,
    KernelParseError,
    NCPolynomial,
    NonHereditaryError,
    UnknownIndexError,
    format_kernel,
    hermitize_check,
    kernel_from_factor,
    kernel_from_json,
    kernel_to_json,
    parse_kernel,
    polynomial_from_json,
    polynomial_to_json,
)
from .numerics import (
    NotHermitianError,
    NotPsdError,
    NotSquareError,
    PsdReport,
    SizeCapError,
    hermitian_min_eig,
    inf_norm,
    kron,
    psd_factor,
)
from .witnesses import (
    CommutativePolyKernel,
    CounterexampleReport,
    ShiftWitnessReport,
    abelianized_coefficients,
    commutative_gram_check,
    counterexample_demo,
    cyclic_shift_matrix,
    eval_commutative_kernel,
    nilpotent_tensor_tuple,
    shift_identity_check,
    shift_tuple,
    shift_witness_test,
    torus_extract,
)
from .words import (
    EMPTY,
    MultiDegree,
    Word,
    abelianize,
    concat,
    enumerate_multidegrees,
    enumerate_words,
    transpose,
    word_count,
)

__version__ = "0.1.0"
