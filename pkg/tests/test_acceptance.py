"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every tolerance is pinned here and not configurable.
"""

import itertools
import json
import subprocess
import sys
import time

import numpy as np
import pytest

from nckernels import (
    abelianize,
    abelianized_coefficients,
    block_eval_matrix,
    check_nc_positivity,
    commutative_gram_check,
    counterexample_demo,
    enumerate_words,
    eval_commutative_kernel,
    eval_word,
    gram_matrix,
    hermitian_min_eig,
    inf_norm,
    joint_nilpotency_rank,
    kernel_from_factor,
    nilpotent_tensor_tuple,
    shift_identity_check,
    shift_witness_test,
    torus_extract,
    word_count,
)
from helpers import (
    brute_force_nilpotency,
    deflated_indefinite_kernel,
    random_complex,
    random_dense_tuple,
    random_factor,
    random_nilpotent_tuple,
    random_psd_gram_kernel,
)


def report(criterion, text):
    print(f"ACCEPTANCE {criterion}: PASS - {text}", flush=True)


@pytest.fixture(scope="module")
def positive_kernel_family():
    """The 200 seeded random factored kernels shared by criteria 2 and 3."""
    rng = np.random.default_rng(812001)
    family = []
    for _ in range(200):
        N = int(rng.integers(1, 4))
        m = int(rng.integers(0, 3))
        p = int(rng.integers(1, 3))
        q = int(rng.integers(1, 4))
        family.append(kernel_from_factor(random_factor(rng, N, m, p, q)))
    return family


def test_criterion_1_counterexample_reproduction():
    start = time.perf_counter()
    demo = counterexample_demo(samples=100, radius=0.5, seed=812101)
    elapsed = time.perf_counter() - start

    assert abs(demo.gram_eigenvalues[0] + 1.0) <= 1e-12
    assert abs(demo.gram_eigenvalues[1] - 1.0) <= 1e-12
    assert len(demo.diag_min_eigenvalues) == 100
    assert min(demo.diag_min_eigenvalues) >= 0.75 - 1e-9
    assert demo.pair_min_eigenvalue <= -0.12
    assert demo.all_confirmed
    assert elapsed < 1.0
    report(1, f"counterexample reproduced in {elapsed:.3f}s "
              f"(pair min eig {demo.pair_min_eigenvalue:.4f})")


def test_criterion_2_factor_round_trip(positive_kernel_family):
    start = time.perf_counter()
    worst_residual = 0.0
    for K in positive_kernel_family:
        gram = gram_matrix(K)
        cert = check_nc_positivity(K)
        assert cert.verdict == "PositiveKernel"
        scale = max(1.0, inf_norm(gram.matrix))
        assert cert.residual <= 1e-10 * scale
        assert cert.inner_dimension <= K.p * word_count(K.N, K.m)
        worst_residual = max(worst_residual, cert.residual / scale)
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    report(2, f"200 kernels certified and factored in {elapsed:.2f}s "
              f"(worst relative residual {worst_residual:.2e})")


def test_criterion_3_easy_direction(positive_kernel_family):
    rng = np.random.default_rng(812301)
    worst = 0.0
    for K in positive_kernel_family:
        for _ in range(5):  # 5 groups of 4 points = 20 tuples per kernel
            n = int(rng.integers(2, 7))
            points = [random_nilpotent_tuple(rng, K.N, n) for _ in range(4)]
            block = block_eval_matrix(K, points)
            lo = hermitian_min_eig(block).min_eigenvalue
            scale = max(1.0, inf_norm(block))
            assert lo >= -1e-8 * scale
            worst = min(worst, lo / scale)
    report(3, f"4000 nilpotent-tuple evaluations stayed PSD "
              f"(worst relative min eig {worst:.2e})")


def test_criterion_4_witness_construction():
    rng = np.random.default_rng(812401)
    cases = 0
    for N in (1, 2, 3):
        for m in (1, 2, 3):
            if (N + 1) ** m > 256:
                continue
            lam = rng.uniform(0.5, 1.5, size=N) * np.exp(2j * np.pi * rng.uniform(size=N))
            Z = nilpotent_tensor_tuple(N, m, lam)
            nilp = joint_nilpotency_rank(Z)
            assert nilp.is_nilpotent and nilp.rank == m + 1
            plain = nilpotent_tensor_tuple(N, m)
            for w in enumerate_words(N, m):
                weight = np.prod(lam ** np.array(abelianize(w, N)))
                diff = eval_word(Z, w) - weight * eval_word(plain, w)
                assert inf_norm(diff) <= 1e-12
            cases += 1
    assert cases == 9
    report(4, f"{cases} (N, m) tensor tuples have rank m+1 with exact scaling covariance")


def test_criterion_5_shift_machinery():
    rng = np.random.default_rng(812501)
    for _ in range(100):
        N = int(rng.integers(1, 3))
        m = int(rng.integers(0, 3))
        p = int(rng.integers(1, 3))
        K = random_psd_gram_kernel(rng, N, m, p)
        h = {w: random_complex(rng, p) for w in enumerate_words(N, m)}
        s = float(rng.choice([1.0, 10.0, 100.0]))
        lhs, rhs = shift_identity_check(K, s, h)
        assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs))

    grid = (1.0, 10.0, 100.0, 1000.0, 10000.0)
    for _ in range(20):
        N = int(rng.integers(1, 3))
        m = int(rng.integers(1, 3))
        K, lo = deflated_indefinite_kernel(rng, N, m, 1)
        assert lo <= -0.1
        sweep = shift_witness_test(K, s_grid=grid)
        assert sweep.verdict == "WitnessFound"
        assert min(sweep.min_eigenvalues) <= -0.05
    report(5, "100 shift-identity draws matched and 20 deflated kernels "
              "produced shift witnesses below -0.05")


def test_criterion_6_commutative_pipeline():
    rng = np.random.default_rng(812601)
    for _ in range(50):
        N = int(rng.integers(1, 3))
        m = int(rng.integers(0, 3))
        K = kernel_from_factor(random_factor(rng, N, m, 1, int(rng.integers(1, 4))))
        base = nilpotent_tensor_tuple(N, max(K.m, 1))
        P = abelianized_coefficients(K, base)
        scale = max([inf_norm(c) for c in P.coeffs.values()] + [1.0])
        gram = commutative_gram_check(P)
        assert gram.min_eigenvalue >= -1e-8 * scale

        sampler = lambda lam, lamp: eval_commutative_kernel(P, lam, lamp)
        back = torus_extract(sampler, P.N, P.m, P.block_dim)
        keys = set(P.coeffs) | set(back.coeffs)
        worst = max(inf_norm(back.coeff(t, tp) - P.coeff(t, tp)) for t, tp in keys)
        assert worst <= 1e-10
    report(6, "50 positive kernels: commutative Gram PSD and torus "
              "extraction exact to 1e-10")


def test_criterion_7_nilpotency_oracle_equivalence():
    rng = np.random.default_rng(812701)
    for maker in (random_nilpotent_tuple, random_dense_tuple):
        for _ in range(100):
            N = int(rng.integers(1, 3))
            n = int(rng.integers(1, 5))
            Z = maker(rng, N, n)
            assert joint_nilpotency_rank(Z) == brute_force_nilpotency(Z)
    report(7, "subspace-chain rank agreed with brute-force word enumeration "
              "on 200 tuples")


def test_criterion_8_cli_determinism(tmp_path):
    kernel_file = tmp_path / "kernel.json"
    out = subprocess.run(
        [sys.executable, "-m", "nckernels", "factor", "--expr",
         "1 + z1*z1' + z2*z2'", "--N", "2", "--out", str(kernel_file)],
        capture_output=True,
    )
    assert out.returncode == 0

    tuple_file = tmp_path / "tuple.json"
    tuple_file.write_text(json.dumps({
        "N": 1, "n": 2,
        "mats": [[[[0.0, 0.0], [0.25, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]],
    }))

    commands = [
        ["check", "--expr", "1 - z1*z1'", "--N", "1", "--seed", "7",
         "--s-grid", "1,10,100"],
        ["check", "--expr", "1 + z1*z1' + z2*z2'", "--N", "2", "--seed", "7"],
        ["factor", "--expr", "1 + z1*z1' + z2*z2'", "--N", "2", "--seed", "7"],
        ["eval", "--expr", "1 - z1*z1'", "--N", "1", str(tuple_file),
         str(tuple_file), "--seed", "7"],
        ["witness", "--construction", "theorem1", "--N", "2", "--m", "2",
         "--lambda", "1+1j,2", "--seed", "7"],
        ["witness", "--construction", "shift", "--N", "2", "--m", "2",
         "--s", "4", "--seed", "7"],
        ["demo-counterexample", "--samples", "50", "--radius", "0.5",
         "--seed", "7"],
        ["extract", "--expr", "1 + z1*z1'", "--N", "1", "--seed", "7"],
    ]
    for argv in commands:
        runs = [
            subprocess.run(
                [sys.executable, "-m", "nckernels", *argv], capture_output=True
            )
            for _ in range(2)
        ]
        assert runs[0].stdout, f"no JSON emitted for {argv}"
        assert runs[0].stdout == runs[1].stdout, f"nondeterministic output for {argv}"
        json.loads(runs[0].stdout)  # stdout is well-formed JSON
    report(8, f"{len(commands)} CLI commands produced byte-identical JSON "
              "across repeated runs")
