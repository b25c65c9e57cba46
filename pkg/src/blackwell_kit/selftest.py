"""Seeded invariant suites behind ``blackwell-kit selftest``.

Each check draws its own random instances from ``seed`` and returns a
:class:`CheckResult`; the report is a pure function of the seed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analysis, blackwell as bw, operations as ops, parameters as par
from .channel_core import (
    EPS_RECON,
    Channel,
    channel_distance,
    compose,
    decompose,
    deterministic_channel,
    random_channel,
    random_distribution,
)


@dataclass(frozen=True)
class CheckResult:
    module: str
    name: str
    passed: bool
    cases: int
    worst: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}\t{self.module}\t{self.name}\tcases={self.cases}\tworst={self.worst:.12g}"


@dataclass(frozen=True)
class SelftestConfig:
    seed: int = 0
    scale: float = 1.0          # multiplies every sample count

    def n(self, base: int) -> int:
        return max(1, int(round(base * self.scale)))


def _sizes(rng, max_in=4, max_out=5, min_in=1):
    return int(rng.integers(min_in, max_in + 1)), int(rng.integers(1, max_out + 1))


def _rand(rng, max_in=4, max_out=5, min_in=1) -> Channel:
    nx, ny = _sizes(rng, max_in, max_out, min_in)
    return random_channel(nx, ny, rng)


# channel_core

def check_reconstruction(rng, n):
    worst = 0.0
    for _ in range(n):
        W = _rand(rng)
        dec = decompose(W)
        worst = max(worst, float(np.abs(dec.reconstruct(W.input_size) - W.matrix).max()))
    return worst <= EPS_RECON, worst


def check_metric_axioms(rng, n):
    worst = 0.0
    ok = True
    for _ in range(n):
        nx, ny = _sizes(rng)
        A, B, C = (random_channel(nx, ny, rng) for _ in range(3))
        dab, dba = channel_distance(A, B), channel_distance(B, A)
        tri = channel_distance(A, C) - dab - channel_distance(B, C)
        ok &= dab >= 0 and dab == dba and channel_distance(A, A) == 0.0
        ok &= (dab > 0) == (not np.array_equal(A.matrix, B.matrix))
        worst = max(worst, tri)
    return ok and worst <= 1e-12, max(worst, 0.0)


def check_compose_associative(rng, n):
    worst = 0.0
    for _ in range(n):
        a, b, c, d = (int(k) for k in rng.integers(1, 5, size=4))
        W, V, U = random_channel(a, b, rng), random_channel(b, c, rng), random_channel(c, d, rng)
        lhs = compose(U, compose(V, W)).matrix
        rhs = compose(compose(U, V), W).matrix
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst <= 1e-12, worst


def check_deterministic_composition(rng, n):
    ok = True
    for _ in range(n):
        a, b, c = (int(k) for k in rng.integers(1, 5, size=3))
        f = rng.integers(0, b, size=a)
        g = rng.integers(0, c, size=b)
        lhs = compose(deterministic_channel(g, output_size=c), deterministic_channel(f, output_size=b))
        ok &= np.array_equal(lhs.matrix, deterministic_channel(g[f], output_size=c).matrix)
    return ok, 0.0


# parameters

def _uniform(n):
    return np.full(n, 1.0 / n)


def check_z_pe_bounds(rng, n):
    worst = 0.0
    for _ in range(n):
        W = _rand(rng, 5, 6, min_in=2)
        z = par.bhattacharyya(W)
        pe = par.map_error(_uniform(W.input_size), W)
        worst = max(worst, 0.25 * z * z - pe, pe - (W.input_size - 1) * z)
    return worst <= 1e-12, max(worst, 0.0)


def check_mi_below_capacity(rng, n):
    worst = -np.inf
    for _ in range(n):
        W = _rand(rng)
        cap = par.capacity(W, tol=1e-9)
        for _ in range(5):
            worst = max(worst, par.mutual_information(random_distribution(W.input_size, rng), W) - cap.value - 1e-9)
    return worst <= 0, max(worst, 0.0)


def check_concavity_convexity(rng, n):
    worst = 0.0
    for _ in range(n):
        nx, ny = _sizes(rng)
        W1, W2 = random_channel(nx, ny, rng), random_channel(nx, ny, rng)
        p1, p2 = random_distribution(nx, rng), random_distribution(nx, rng)
        pm = 0.5 * (p1 + p2)
        Wm = Channel(0.5 * (W1.matrix + W2.matrix))
        I, Pe = par.mutual_information, par.map_error
        worst = max(worst,
                    0.5 * I(p1, W1) + 0.5 * I(p2, W1) - I(pm, W1),          # concave in p
                    I(pm, Wm) - 0.5 * I(pm, W1) - 0.5 * I(pm, W2),          # convex in W
                    0.5 * Pe(p1, W1) + 0.5 * Pe(p2, W1) - Pe(pm, W1),       # concave in p
                    0.5 * Pe(p1, W1) + 0.5 * Pe(p1, W2) - Pe(p1, Wm))       # concave in W
    return worst <= 1e-12, max(worst, 0.0)


def check_guessing_extremes(rng, n):
    ok = True
    for _ in range(n):
        W = _rand(rng)
        p = random_distribution(W.input_size, rng)[None, :]
        ok &= par.correct_guess_prob(p, W) == 1.0
        k = W.input_size
        pairs = rng.permutation(k)
        prior = np.zeros((k, k))
        prior[np.arange(k), pairs] = random_distribution(k, rng)
        ok &= abs(par.correct_guess_prob(prior, Channel(np.eye(k))) - 1.0) <= 1e-15
    return bool(ok), 0.0


def check_capacity_identities(rng, n):
    worst = 0.0
    for _ in range(n):
        W1, W2 = _rand(rng), _rand(rng)
        c1, c2 = par.capacity(W1, 1e-10).value, par.capacity(W2, 1e-10).value
        cs = par.capacity(ops.channel_sum(W1, W2), 1e-10).value
        cp = par.capacity(ops.channel_product(W1, W2), 1e-10).value
        worst = max(worst, abs(np.exp(cs) - np.exp(c1) - np.exp(c2)), abs(cp - c1 - c2))
    return worst <= 1e-5, worst


# operations

def _random_op(rng) -> ops.BinaryOp:
    return ops.xor_op() if rng.random() < 0.5 else ops.add_mod(3)


def check_outputs_stochastic(rng, n):
    worst = 0.0
    for _ in range(n):
        W1, W2 = _rand(rng), _rand(rng)
        op = _random_op(rng)
        W = random_channel(op.size, int(rng.integers(1, 4)), rng)
        W1b = random_channel(W1.input_size, int(rng.integers(1, 4)), rng)
        outs = [ops.channel_sum(W1, W2), ops.channel_product(W1, W2),
                ops.interpolate(float(rng.random()), W1, W1b),
                ops.polar_minus(W, op), ops.polar_plus(W, op)]
        worst = max(worst, max(float(np.abs(o.matrix.sum(axis=1) - 1).max()) for o in outs))
    return worst <= 1e-12, worst


def check_sum_of_garblings(rng, n):
    worst = 0.0
    for _ in range(n):
        A1, A2 = _rand(rng), _rand(rng)
        V1 = random_channel(A1.output_size, int(rng.integers(1, 5)), rng)
        V2 = random_channel(A2.output_size, int(rng.integers(1, 5)), rng)
        lhs = ops.channel_sum(compose(V1, A1), compose(V2, A2)).matrix
        rhs = compose(ops.channel_sum(V1, V2), ops.channel_sum(A1, A2)).matrix
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst == 0.0, worst


def check_polar_chain_rule(rng, n):
    worst = 0.0
    direction_ok = True
    for _ in range(n):
        op = _random_op(rng)
        W = random_channel(op.size, int(rng.integers(1, 5)), rng)
        i = par.symmetric_capacity(W)
        im = par.symmetric_capacity(ops.polar_minus(W, op))
        ip = par.symmetric_capacity(ops.polar_plus(W, op))
        worst = max(worst, abs(im + ip - 2 * i))
        direction_ok &= ip >= i - 1e-12 and i >= im - 1e-12
    return bool(direction_ok) and worst <= 1e-9, worst


def check_interpolation_mass(rng, n):
    worst = 0.0
    for _ in range(n):
        W1 = _rand(rng)
        W2 = random_channel(W1.input_size, int(rng.integers(1, 5)), rng)
        a = float(rng.random())
        M = ops.interpolate(a, W1, W2).matrix
        worst = max(worst, float(np.abs(M[:, :W1.output_size].sum(axis=1) - a).max()))
    return worst <= 1e-15, worst


# blackwell

def check_measure_balanced(rng, n):
    worst = 0.0
    ok = True
    for _ in range(n):
        W = _rand(rng)
        mp = bw.blackwell_measure(W)
        worst = max(worst, bw.balance_deviation(mp))
        again = bw.canonicalize(mp.posteriors, mp.weights)
        ok &= np.array_equal(again.posteriors, mp.posteriors) and np.array_equal(again.weights, mp.weights)
        ok &= mp.rank <= len(decompose(W).image) <= W.output_size
    return bool(ok) and worst <= 1e-10, worst


def check_measure_roundtrip(rng, n):
    worst = 0.0
    for _ in range(n):
        mp = bw.blackwell_measure(_rand(rng))
        back = bw.blackwell_measure(bw.channel_from_measure(mp))
        if back.rank != mp.rank:
            return False, np.inf
        worst = max(worst, float(np.abs(back.posteriors - mp.posteriors).max()),
                    float(np.abs(back.weights - mp.weights).max()))
    return worst <= 1e-10, worst


def random_equivalent_pair(rng, max_in=3, max_out=4) -> tuple[Channel, Channel]:
    """A channel and a relabelled / split-output copy of it."""
    W = _rand(rng, max_in, max_out, min_in=2)
    M = W.matrix[:, rng.permutation(W.output_size)]
    y = int(rng.integers(W.output_size))
    t = float(rng.uniform(0.2, 0.8))
    split = np.hstack([M, t * M[:, [y]]])
    split[:, y] *= 1 - t
    return W, Channel(split)


def random_pair(rng, max_in=3, max_out=4) -> tuple[Channel, Channel]:
    """Mix of equivalent, degraded and unrelated pairs over a common input."""
    kind = int(rng.integers(3))
    if kind == 0:
        return random_equivalent_pair(rng, max_in, max_out)
    W = _rand(rng, max_in, max_out, min_in=2)
    if kind == 1:
        V = random_channel(W.output_size, int(rng.integers(1, max_out + 1)), rng)
        return W, compose(V, W)
    return W, random_channel(W.input_size, int(rng.integers(1, max_out + 1)), rng)


def check_equivalence_vs_lp(rng, n):
    mismatches = 0
    for _ in range(n):
        W1, W2 = random_pair(rng)
        mismatches += bw.equivalent(W1, W2) != analysis.equivalent_by_lp(W1, W2)
    return mismatches == 0, float(mismatches)


def check_parameters_from_measure(rng, n):
    worst = 0.0
    for _ in range(n):
        W = _rand(rng, 3, 3, min_in=2)
        mp = bw.blackwell_measure(W)
        p = random_distribution(W.input_size, rng)
        worst = max(worst,
                    abs(par.mutual_information(p, W) - bw.mutual_information_of(p, mp)),
                    abs(par.map_error(p, W) - bw.map_error_of(p, mp)),
                    abs(par.bhattacharyya(W) - bw.bhattacharyya_of(mp)))
        words = list(itertools.product(range(W.input_size), repeat=2))
        pick = rng.choice(len(words), size=int(rng.integers(1, 4)), replace=False)
        code = par.Code(2, tuple(words[i] for i in sorted(pick)))
        worst = max(worst, abs(par.code_error(code, W) - bw.code_error_of(code, mp)))
    return worst <= 1e-9, worst


def measure_gap(a: bw.BlackwellMeasure, b: bw.BlackwellMeasure) -> float:
    """Largest atomwise discrepancy between aligned canonical measures (inf if unalignable)."""
    if a.alphabet_size != b.alphabet_size or a.rank != b.rank:
        return np.inf
    worst = 0.0
    for i, j in bw._match(a, b, 1e-9):
        if i is None or j is None:
            return np.inf
        worst = max(worst, float(np.abs(a.posteriors[i] - b.posteriors[j]).max()),
                    abs(float(a.weights[i] - b.weights[j])))
    return worst


def operation_measure_gaps(W1: Channel, W2: Channel, W2same: Channel, op: ops.BinaryOp,
                           Wop: Channel, alpha: float) -> dict[str, float]:
    m1, m2, m2s = bw.blackwell_measure(W1), bw.blackwell_measure(W2), bw.blackwell_measure(W2same)
    mop = bw.blackwell_measure(Wop)
    return {
        "sum": measure_gap(bw.blackwell_measure(ops.channel_sum(W1, W2)), bw.sum_measure(m1, m2)),
        "product": measure_gap(bw.blackwell_measure(ops.channel_product(W1, W2)), bw.measure_tensor(m1, m2)),
        "interpolation": measure_gap(bw.blackwell_measure(ops.interpolate(alpha, W1, W2same)),
                                     bw.measure_mixture([(alpha, m1), (1 - alpha, m2s)])),
        "minus": measure_gap(bw.blackwell_measure(ops.polar_minus(Wop, op)), bw.minus_convolve(mop, mop, op)),
        "plus": measure_gap(bw.blackwell_measure(ops.polar_plus(Wop, op)), bw.plus_convolve(mop, mop, op)),
    }


def check_operation_formulas(rng, n):
    worst = 0.0
    for _ in range(n):
        W1, W2 = _rand(rng, 3, 4), _rand(rng, 3, 4)
        W2same = random_channel(W1.input_size, int(rng.integers(1, 5)), rng)
        op = _random_op(rng)
        Wop = random_channel(op.size, int(rng.integers(1, 4)), rng)
        alpha = float(rng.choice([0.0, 0.3, 1.0]))
        worst = max(worst, max(operation_measure_gaps(W1, W2, W2same, op, Wop, alpha).values()))
    return worst <= 1e-9, worst


# analysis

def check_witness_transitivity(rng, n):
    worst = 0.0
    for _ in range(n):
        W = _rand(rng, 3, 4, min_in=2)
        W1 = compose(random_channel(W.output_size, int(rng.integers(1, 5)), rng), W)
        W2 = compose(random_channel(W1.output_size, int(rng.integers(1, 5)), rng), W1)
        a, b = analysis.is_degraded(W1, W), analysis.is_degraded(W2, W1)
        if not (a.degraded and b.degraded):
            return False, np.inf
        V = analysis.compose_witnesses(b, a)
        worst = max(worst, float(np.abs(compose(V, W).matrix - W2.matrix).max()))
        refl = analysis.is_degraded(W, W)
        if not refl.degraded:
            return False, np.inf
    return worst <= 2 * analysis.LP_TOL, worst


def check_sum_preserves_degradation(rng, n):
    worst = 0.0
    for _ in range(n):
        A1, A2 = _rand(rng, 3, 4), _rand(rng, 3, 4)
        B1 = compose(random_channel(A1.output_size, 3, rng), A1)
        B2 = compose(random_channel(A2.output_size, 3, rng), A2)
        w1, w2 = analysis.is_degraded(B1, A1), analysis.is_degraded(B2, A2)
        if not (w1.degraded and w2.degraded):
            return False, np.inf
        V = ops.channel_sum(w1.intermediate, w2.intermediate)
        worst = max(worst, float(np.abs(compose(V, ops.channel_sum(A1, A2)).matrix
                                        - ops.channel_sum(B1, B2).matrix).max()))
    return worst <= 2 * analysis.LP_TOL, worst


def check_noisiness_bounds(rng, n):
    ok = True
    worst = 0.0
    budget = analysis.NoisinessBudget(m_max=3, samples=20, seed=int(rng.integers(2**31)))
    for _ in range(n):
        W1, W2 = random_pair(rng)
        est = analysis.noisiness_lower_bound(W1, W2, budget)
        ok &= 0 <= est.lower_bound <= 1
        if bw.equivalent(W1, W2):
            worst = max(worst, est.lower_bound)
    return bool(ok) and worst <= 1e-12, worst


def check_guessing_data_processing(rng, n):
    worst = -np.inf
    for _ in range(n):
        W = _rand(rng, 3, 4, min_in=2)
        Wd = compose(random_channel(W.output_size, int(rng.integers(1, 5)), rng), W)
        if not analysis.is_degraded(Wd, W).degraded:
            return False, np.inf
        for m in (1, 2, 3):
            e = rng.exponential(size=(m, W.input_size))
            p = e / e.sum()
            worst = max(worst, par.correct_guess_prob(p, Wd) - par.correct_guess_prob(p, W) - analysis.LP_TOL)
    return worst <= 0, max(worst, 0.0)


CHECKS: list[tuple[str, str, Callable, int]] = [
    ("channel_core", "decomposition reconstructs W", check_reconstruction, 100),
    ("channel_core", "channel distance is a metric", check_metric_axioms, 100),
    ("channel_core", "composition is associative", check_compose_associative, 100),
    ("channel_core", "D_g o D_f = D_(g o f)", check_deterministic_composition, 100),
    ("parameters", "Z^2/4 <= Pe <= (|X|-1) Z", check_z_pe_bounds, 1000),
    ("parameters", "I(p,W) <= C(W)", check_mi_below_capacity, 30),
    ("parameters", "concavity/convexity of I and Pe", check_concavity_convexity, 200),
    ("parameters", "guessing probability extremes", check_guessing_extremes, 50),
    ("parameters", "capacity of sums and products", check_capacity_identities, 20),
    ("operations", "outputs are stochastic", check_outputs_stochastic, 50),
    ("operations", "sum of garblings is garbling of sum", check_sum_of_garblings, 50),
    ("operations", "polar chain rule and direction", check_polar_chain_rule, 100),
    ("operations", "interpolation mass on first block", check_interpolation_mass, 50),
    ("blackwell", "measures balanced, canonical, rank bound", check_measure_balanced, 100),
    ("blackwell", "channel <-> measure round trip", check_measure_roundtrip, 100),
    ("blackwell", "Blackwell equivalence agrees with LP", check_equivalence_vs_lp, 200),
    ("blackwell", "parameters from measure", check_parameters_from_measure, 200),
    ("blackwell", "operation formulas on measures", check_operation_formulas, 50),
    ("analysis", "witnesses compose (reflexive, transitive)", check_witness_transitivity, 30),
    ("analysis", "sums preserve degradation", check_sum_preserves_degradation, 30),
    ("analysis", "noisiness estimate bounds", check_noisiness_bounds, 40),
    ("analysis", "degradation lowers guessing probability", check_guessing_data_processing, 50),
]


def run_selftest(config: SelftestConfig = SelftestConfig()) -> list[CheckResult]:
    results = []
    for k, (module, name, fn, base) in enumerate(CHECKS):
        rng = np.random.default_rng([config.seed, k])
        count = config.n(base)
        passed, worst = fn(rng, count)
        results.append(CheckResult(module, name, bool(passed), count, float(worst)))
    return results


def format_report(results: list[CheckResult], seed: int) -> str:
    lines = [f"selftest seed={seed}"]
    lines += [r.line() for r in results]
    n_pass = sum(r.passed for r in results)
    lines.append(f"passed {n_pass} / {len(results)}, failed {len(results) - n_pass}")
    return "\n".join(lines) + "\n"
