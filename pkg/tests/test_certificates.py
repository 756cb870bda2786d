import numpy as np
import pytest

from nckernels import (
    HereditaryKernel,
    NCPolynomial,
    NotHermitianError,
    NotPsdError,
    block_eval_matrix,
    check_nc_positivity,
    factor_kernel,
    gram_matrix,
    hermitian_min_eig,
    inf_norm,
    kernel_from_factor,
    kernel_from_gram,
    parse_kernel,
    residual,
    word_count,
)
from helpers import (
    deflated_indefinite_kernel,
    random_factor,
    random_nilpotent_tuple,
    random_psd_gram_kernel,
)
from nckernels.witnesses import shift_witness_test


def scalar(c):
    return np.array([[c]], dtype=complex)


def test_gram_matrix_counterexample():
    G = gram_matrix(parse_kernel("1 - z1*z1'", N=1))
    assert G.word_index == [(), (1,)]
    np.testing.assert_allclose(G.matrix, np.diag([1.0, -1.0]), atol=0)


def test_gram_matrix_identity_three():
    G = gram_matrix(parse_kernel("1 + z1*z1' + z2*z2'", N=2))
    np.testing.assert_allclose(G.matrix, np.eye(3), atol=0)


def test_gram_matrix_from_rank_one_factor():
    H = NCPolynomial(N=1, p=1, q=1, coeffs={(): scalar(1), (1,): scalar(1)})
    G = gram_matrix(kernel_from_factor(H))
    np.testing.assert_allclose(G.matrix, np.ones((2, 2)), atol=0)


def test_gram_matrix_rejects_non_hermitian():
    lopsided = HereditaryKernel(N=1, p=1, m=1, coeffs={((), (1,)): scalar(1)})
    with pytest.raises(NotHermitianError):
        gram_matrix(lopsided)


def test_check_counterexample_is_not_positive():
    cert = check_nc_positivity(parse_kernel("1 - z1*z1'", N=1))
    assert cert.verdict == "NotPositive"
    assert cert.min_gram_eigenvalue == pytest.approx(-1.0, abs=1e-14)
    assert cert.factor is None and cert.inner_dimension is None


def test_check_identity_gram_saturates_dimension_bound():
    K = parse_kernel("1 + z1*z1' + z2*z2'", N=2)
    cert = check_nc_positivity(K)
    assert cert.verdict == "PositiveKernel"
    assert cert.inner_dimension == 3 == K.p * word_count(K.N, K.m)
    assert cert.residual <= 1e-12


def test_check_zero_kernel():
    zero = HereditaryKernel(N=2, p=1, m=1, coeffs={})
    cert = check_nc_positivity(zero)
    assert cert.verdict == "PositiveKernel"
    assert cert.inner_dimension == 0
    assert cert.factor.coeffs == {}
    assert cert.residual == 0.0


def test_factor_rank_one_round_trip():
    H0 = NCPolynomial(N=1, p=1, q=1, coeffs={(): scalar(1), (1,): scalar(1)})
    K = kernel_from_factor(H0)
    H = factor_kernel(K)
    assert H.q == 1
    assert residual(K, H) <= 1e-12


def test_factor_rejects_indefinite():
    with pytest.raises(NotPsdError):
        factor_kernel(parse_kernel("1 - z1*z1'", N=1))


def test_residual_examples(rng):
    H = random_factor(rng, 2, 2, 1, 2)
    K = kernel_from_factor(H)
    assert residual(K, H) <= 1e-13

    zero_poly = NCPolynomial(N=1, p=1, q=1, coeffs={})
    K1 = parse_kernel("1 - z1*z1'", N=1)
    assert residual(K1, zero_poly) == 1.0

    const = NCPolynomial(N=1, p=1, q=1, coeffs={(): scalar(1)})
    assert residual(K1, const) == 1.0  # the -1 coefficient stays unmatched


def test_residual_rejects_mismatched_dimensions():
    K = parse_kernel("1", N=1)
    with pytest.raises(ValueError):
        residual(K, NCPolynomial(N=1, p=2, q=1, coeffs={}))
    with pytest.raises(ValueError):
        residual(K, NCPolynomial(N=2, p=1, q=1, coeffs={}))


def test_kernel_from_gram_round_trips(rng):
    K = random_psd_gram_kernel(rng, 2, 2, 2)
    G = gram_matrix(K)
    back = kernel_from_gram(G.matrix, K.N, K.m, K.p)
    assert set(back.coeffs) == set(K.coeffs)
    for key in K.coeffs:
        np.testing.assert_allclose(back.coeff(*key), K.coeff(*key), atol=0)


def test_round_trip_sweep_on_psd_gram_kernels(rng):
    for _ in range(200):
        N = int(rng.integers(1, 4))
        m = int(rng.integers(0, 3))
        p = int(rng.integers(1, 3))
        K = random_psd_gram_kernel(rng, N, m, p)
        G = gram_matrix(K)
        cert = check_nc_positivity(K)
        assert cert.verdict == "PositiveKernel"
        assert cert.residual <= 1e-10 * max(1.0, inf_norm(G.matrix))
        assert cert.inner_dimension <= p * word_count(N, m)
        back = kernel_from_factor(cert.factor)
        assert residual(back, cert.factor) <= 1e-12 * max(1.0, inf_norm(G.matrix))


def test_soundness_on_nilpotent_tuples(rng):
    for _ in range(10):
        N = int(rng.integers(1, 4))
        K = kernel_from_factor(random_factor(rng, N, 2, 1, 2))
        cert = check_nc_positivity(K)
        assert cert.verdict == "PositiveKernel"
        n = int(rng.integers(2, 7))
        points = [random_nilpotent_tuple(rng, N, n) for _ in range(3)]
        block = block_eval_matrix(K, points)
        scale = max(1.0, inf_norm(block))
        assert hermitian_min_eig(block).min_eigenvalue >= -1e-8 * scale


def test_negative_gram_forces_shift_witness(rng):
    for _ in range(10):
        N = int(rng.integers(1, 3))
        m = int(rng.integers(1, 3))
        K, lo = deflated_indefinite_kernel(rng, N, m, 1)
        cert = check_nc_positivity(K)
        assert cert.verdict == "NotPositive"
        delta = -cert.min_gram_eigenvalue
        assert delta >= 1e-6
        report = shift_witness_test(K)
        assert report.verdict == "WitnessFound"
        assert min(report.min_eigenvalues) < -delta / 2
