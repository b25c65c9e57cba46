"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

The lines are printed in the pytest terminal summary, or directly when
this file is run as a script.
"""
import math
import subprocess
import sys

import numpy as np
import pytest

from blackwell_kit import (
    Channel,
    Code,
    add_mod,
    bec,
    bhattacharyya,
    bhattacharyya_of,
    blackwell_measure,
    bsc,
    capacity,
    channel_from_measure,
    channel_product,
    channel_sum,
    code_error,
    code_error_of,
    identity_channel,
    interpolate,
    is_degraded,
    map_error,
    map_error_of,
    measure_mixture,
    measure_tensor,
    minus_convolve,
    mutual_information,
    mutual_information_of,
    noisiness_lower_bound,
    plus_convolve,
    polar_minus,
    polar_plus,
    random_channel,
    sum_measure,
    tv_class_distance,
    xor_op,
)
from blackwell_kit.analysis import equivalent_by_lp
from blackwell_kit.blackwell import balance_deviation, equivalent, measures_equal

from conftest import h2

RESULTS: list[str] = []


def record(n: int, title: str, ok: bool, detail: str):
    RESULTS.append(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
    assert ok, detail


def _random(rng, max_in=4, max_out=5, min_in=1):
    return random_channel(int(rng.integers(min_in, max_in + 1)), int(rng.integers(1, max_out + 1)), rng)


def test_1_capacity_correctness():
    expected = math.log(2) - h2(0.11)
    err_bsc = abs(capacity(bsc(0.11)).value - expected)
    err_id = max(abs(capacity(identity_channel(k)).value - math.log(k)) for k in (2, 3, 4))
    record(1, "capacity closed forms", err_bsc <= 1e-6 and err_id <= 1e-9,
           f"|C(BSC(0.11)) - (ln2 - H(0.11))| = {err_bsc:.3g} (<= 1e-6), max identity error {err_id:.3g} (<= 1e-9)")


def test_2_capacity_identities():
    rng = np.random.default_rng(2)
    worst_sum = worst_prod = 0.0
    for _ in range(50):
        W1, W2 = _random(rng), _random(rng)
        c1, c2 = capacity(W1, tol=1e-10).value, capacity(W2, tol=1e-10).value
        cs = capacity(channel_sum(W1, W2), tol=1e-10).value
        cp = capacity(channel_product(W1, W2), tol=1e-10).value
        worst_sum = max(worst_sum, abs(math.exp(cs) - math.exp(c1) - math.exp(c2)))
        worst_prod = max(worst_prod, abs(cp - c1 - c2))
    record(2, "sum/product capacity identities", worst_sum <= 1e-5 and worst_prod <= 1e-5,
           f"50 pairs, worst sum gap {worst_sum:.3g}, worst product gap {worst_prod:.3g} (<= 1e-5)")


def test_3_z_pe_bounds():
    rng = np.random.default_rng(3)
    violations = 0
    for _ in range(1000):
        W = _random(rng)
        n = W.input_size
        Z, pe = bhattacharyya(W), map_error(np.full(n, 1 / n), W)
        if not (0.25 * Z * Z <= pe + 1e-12 and pe <= (n - 1) * Z + 1e-12):
            violations += 1
    record(3, "Z^2/4 <= Pe <= (|X|-1) Z", violations == 0, f"1000 channels, {violations} violations")


def test_4_blackwell_soundness():
    rng = np.random.default_rng(4)
    worst_bal = worst_rt = 0.0
    for _ in range(100):
        W = _random(rng)
        mp = blackwell_measure(W)
        worst_bal = max(worst_bal, balance_deviation(mp))
        back = blackwell_measure(channel_from_measure(mp))
        if back.rank != mp.rank:
            worst_rt = math.inf
        else:
            worst_rt = max(worst_rt, np.abs(back.posteriors - mp.posteriors).max(),
                           np.abs(back.weights - mp.weights).max())
    record(4, "measures balanced, channel<->measure round trip",
           worst_bal <= 1e-10 and worst_rt <= 1e-10,
           f"100 channels, worst balance {worst_bal:.3g}, worst round-trip {worst_rt:.3g} (<= 1e-10)")


def test_5_parameters_from_measure():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(200):
        W = _random(rng)
        p = rng.dirichlet(np.ones(W.input_size))
        mp = blackwell_measure(W)
        worst = max(worst,
                    abs(mutual_information_of(p, mp) - mutual_information(p, W)),
                    abs(map_error_of(p, mp) - map_error(p, W)),
                    abs(bhattacharyya_of(mp) - bhattacharyya(W)))
    worst_code = 0.0
    for _ in range(100):
        nx, ny = int(rng.integers(2, 4)), int(rng.integers(1, 4))
        W = random_channel(nx, ny, rng)
        words = [(a, b) for a in range(nx) for b in range(nx)]
        m = int(rng.integers(1, 4))
        code = Code.from_words([words[i] for i in rng.choice(len(words), m, replace=False)])
        worst_code = max(worst_code, abs(code_error_of(code, blackwell_measure(W)) - code_error(code, W)))
    record(5, "I, Pe, Z and code error from the measure", worst <= 1e-9 and worst_code <= 1e-9,
           f"200 (p, W): worst {worst:.3g}; 100 codes n=2: worst {worst_code:.3g} (<= 1e-9)")


def test_6_operation_formulas():
    rng = np.random.default_rng(6)
    failures, cases = [], 0
    ops = {2: xor_op(), 3: add_mod(3)}
    for _ in range(50):
        W1, W2 = _random(rng, 3, 3), _random(rng, 3, 3)
        a, b = blackwell_measure(W1), blackwell_measure(W2)
        checks = {
            "sum": (channel_sum(W1, W2), sum_measure(a, b)),
            "product": (channel_product(W1, W2), measure_tensor(a, b)),
        }
        W3 = random_channel(W1.input_size, int(rng.integers(1, 4)), rng)
        c = blackwell_measure(W3)
        for alpha in (0.0, 0.3, 1.0):
            checks[f"interp {alpha}"] = (interpolate(alpha, W1, W3), measure_mixture([(alpha, a), (1 - alpha, c)]))
        for n, op in ops.items():
            W = random_channel(n, int(rng.integers(1, 4)), rng)
            mp = blackwell_measure(W)
            checks[f"minus/{n}"] = (polar_minus(W, op), minus_convolve(mp, mp, op))
            checks[f"plus/{n}"] = (polar_plus(W, op), plus_convolve(mp, mp, op))
        for name, (ch, formula) in checks.items():
            cases += 1
            if not measures_equal(blackwell_measure(ch), formula, 1e-9):
                failures.append(name)
    record(6, "measure of operation = measure-level formula", not failures,
           f"{cases} comparisons over 50 rounds, {len(failures)} mismatches {sorted(set(failures))}")


def test_7_polar_oracles():
    oracles = [
        equivalent(polar_minus(bec(0.5), xor_op()), bec(0.75)),
        equivalent(polar_plus(bec(0.5), xor_op()), bec(0.25)),
        equivalent(polar_minus(bsc(0.11), xor_op()), bsc(0.1958)),
    ]
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        W = _random(rng, 3, 4, min_in=2)
        op = xor_op() if W.input_size == 2 else add_mod(3)
        p = np.full(W.input_size, 1 / W.input_size)
        gap = mutual_information(p, polar_minus(W, op)) + mutual_information(p, polar_plus(W, op)) \
            - 2 * mutual_information(p, W)
        worst = max(worst, abs(gap))
    record(7, "polar oracles and chain rule", all(oracles) and worst <= 1e-9,
           f"BEC-/BEC+/BSC- oracles {oracles}, worst chain-rule gap {worst:.3g} (<= 1e-9)")


def test_8_order_cross_oracle():
    rng = np.random.default_rng(8)
    disagreements = equiv_cases = 0
    for k in range(200):
        nx = int(rng.integers(1, 4))
        W1 = random_channel(nx, int(rng.integers(1, 5)), rng)
        if k % 2:
            # half the pairs are equivalent by construction: relabel and split an output
            M = W1.matrix[:, rng.permutation(W1.output_size)]
            W2 = Channel(np.hstack([0.3 * M[:, :1], M[:, 1:], 0.7 * M[:, :1]]))
        else:
            W2 = random_channel(nx, int(rng.integers(1, 5)), rng)
        a, b = equivalent(W1, W2), equivalent_by_lp(W1, W2)
        equiv_cases += a
        disagreements += a != b
    fwd = is_degraded(bsc(0.2), bsc(0.1))
    rev = is_degraded(bsc(0.1), bsc(0.2))
    ok = disagreements == 0 and fwd.degraded and fwd.residual <= 1e-8 and not rev.degraded
    record(8, "Blackwell equivalence vs two-sided LP", ok,
           f"200 pairs ({equiv_cases} equivalent), {disagreements} disagreements; "
           f"BSC(0.2) <= BSC(0.1) residual {getattr(fwd, 'residual', float('nan')):.3g}, reverse degraded={rev.degraded}")


def test_9_metric_contrast():
    W1, W2 = bsc(0.1), bsc(0.1 + 1e-6)
    tv = tv_class_distance(W1, W2)
    noisy = noisiness_lower_bound(W1, W2).lower_bound
    record(9, "TV vs noisiness contrast", tv == 1.0 and noisy <= 1e-5,
           f"tv_class_distance = {tv:.12g} (= 1), noisiness lower bound = {noisy:.3g} (<= 1e-5)")


def test_10_selftest_determinism():
    cmd = [sys.executable, "-m", "blackwell_kit", "selftest", "--seed", "0"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    same = first.stdout == second.stdout and len(first.stdout) > 0
    record(10, "selftest determinism", same and first.returncode == 0,
           f"two runs at seed 0 byte-identical={same}, exit {first.returncode}, "
           f"{first.stdout.decode().strip().splitlines()[-1] if first.stdout else 'no output'}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
