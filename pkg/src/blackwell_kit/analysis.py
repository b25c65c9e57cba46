"""Degradation order and distances between equivalence classes of channels."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .blackwell import blackwell_measure, tv_distance
from .channel_core import Channel, channel_distance, compose
from .errors import DimensionMismatch
from .parameters import (
    JointPrior,
    bhattacharyya,
    capacity,
    correct_guess_prob,
    map_error,
    symmetric_capacity,
)
from .simplex import phase_one

LP_TOL = 1e-8


@dataclass(frozen=True)
class DegradationWitness:
    """``intermediate`` is a channel V with ``W' = V o W`` up to ``residual``."""

    intermediate: Channel
    residual: float

    degraded = True


@dataclass(frozen=True)
class NotDegraded:
    """No garbling of W reproduces W'; ``infeasibility`` is the LP's optimal slack."""

    infeasibility: float

    degraded = False


def _garbling_residual(V: np.ndarray, W: Channel, W_deg: Channel) -> float:
    return float(max(np.abs(W.matrix @ V - W_deg.matrix).max(),
                     np.abs(V.sum(axis=1) - 1.0).max()))


def is_degraded(W_deg: Channel, W: Channel, tol: float = LP_TOL) -> DegradationWitness | NotDegraded:
    """Decide whether ``W_deg`` is a garbling ``V o W`` of ``W``.

    Solves the feasibility LP in the entries ``V(z|y) >= 0``:
    rows of V sum to one and ``sum_y W(y|x) V(z|y) = W_deg(z|x)``.
    """
    if W_deg.input_size != W.input_size:
        raise DimensionMismatch("degradation needs a common input alphabet")
    nx, ny, nz = W.input_size, W.output_size, W_deg.output_size
    A = np.zeros((ny + nx * nz, ny * nz))
    b = np.zeros(ny + nx * nz)
    for y in range(ny):
        A[y, y * nz:(y + 1) * nz] = 1.0
        b[y] = 1.0
    for x in range(nx):
        for z in range(nz):
            row = ny + x * nz + z
            A[row, z::nz] = W.matrix[x]
            b[row] = W_deg.matrix[x, z]
    res = phase_one(A, b)
    if res.infeasibility > tol:
        return NotDegraded(res.infeasibility)
    V = np.clip(res.x.reshape(ny, nz), 0.0, None)
    sums = V.sum(axis=1, keepdims=True)
    V = np.where(sums > 0, V / np.where(sums > 0, sums, 1.0), 1.0 / nz)
    residual = _garbling_residual(V, W, W_deg)
    if residual > tol:
        return NotDegraded(max(res.infeasibility, residual))
    return DegradationWitness(Channel(V), residual)


def equivalent_by_lp(W1: Channel, W2: Channel, tol: float = LP_TOL) -> bool:
    return is_degraded(W1, W2, tol).degraded and is_degraded(W2, W1, tol).degraded


@dataclass(frozen=True)
class NoisinessBudget:
    m_max: int | None = None      # defaults to |X| + 2
    samples: int = 200
    seed: int = 0


@dataclass(frozen=True)
class NoisinessEstimate:
    lower_bound: float
    m_max_used: int
    priors_sampled: int
    witness_prior: JointPrior


def _prior_family(n: int, m_max: int, samples: int, rng: np.random.Generator):
    for m in range(1, m_max + 1):
        for u in range(m):
            for x in range(n):
                p = np.zeros((m, n))
                p[u, x] = 1.0
                yield p
        for sigma in itertools.permutations(range(n), m):
            p = np.zeros((m, n))
            p[np.arange(m), sigma] = 1.0 / m
            yield p
        for _ in range(samples):
            e = rng.exponential(size=(m, n))
            yield e / e.sum()


def noisiness_lower_bound(W1: Channel, W2: Channel,
                          budget: NoisinessBudget = NoisinessBudget()) -> NoisinessEstimate:
    """Certified lower bound on the noisiness distance between two classes.

    The exact distance is a supremum over all label counts ``m`` and joint
    priors; this scans a deterministic finite family (point masses, uniform
    matchings ``u -> sigma(u)`` and seeded Dirichlet draws for each
    ``m <= m_max``) and returns the largest gap in optimal guessing
    probability together with the prior attaining it.
    """
    if W1.input_size != W2.input_size:
        raise DimensionMismatch("noisiness distance needs a common input alphabet")
    n = W1.input_size
    m_max = budget.m_max if budget.m_max is not None else n + 2
    rng = np.random.default_rng(budget.seed)
    best, witness, count = -1.0, None, 0
    for p in _prior_family(n, m_max, budget.samples, rng):
        count += 1
        gap = abs(correct_guess_prob(p, W1) - correct_guess_prob(p, W2))
        if gap > best:
            best, witness = gap, p
    prior = JointPrior(witness)
    exact = abs(correct_guess_prob(prior, W1) - correct_guess_prob(prior, W2))
    return NoisinessEstimate(exact, m_max, count, prior)


def tv_class_distance(W1: Channel, W2: Channel) -> float:
    if W1.input_size != W2.input_size:
        raise DimensionMismatch("TV class distance needs a common input alphabet")
    return tv_distance(blackwell_measure(W1), blackwell_measure(W2))


PROBE_PARAMS: dict[str, Callable[[Channel], float]] = {
    "capacity": lambda W: capacity(W, tol=1e-12).value,
    "symmetric_capacity": symmetric_capacity,
    "map_error": lambda W: map_error(np.full(W.input_size, 1.0 / W.input_size), W),
    "bhattacharyya": bhattacharyya,
}


@dataclass(frozen=True)
class ProbeReport:
    param: str
    radius: float
    samples: int
    max_param_deviation: float
    max_channel_distance: float


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row of ``v`` onto the probability simplex."""
    v = np.atleast_2d(np.asarray(v, dtype=np.float64))
    u = -np.sort(-v, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    k = np.arange(1, v.shape[1] + 1)
    rho = (u - css / k > 0).sum(axis=1)
    theta = css[np.arange(v.shape[0]), rho - 1] / rho
    return np.maximum(v - theta[:, None], 0.0)


def perturb(W: Channel, radius: float, rng: np.random.Generator) -> Channel:
    """A random channel within ``channel_distance <= radius`` of ``W``."""
    M = W.matrix
    noise = rng.normal(size=M.shape)
    noise -= noise.mean(axis=1, keepdims=True)
    scale = 0.5 * np.abs(noise).sum(axis=1).max()
    if radius == 0 or scale == 0:
        return W
    delta = project_to_simplex(M + noise * (radius / scale)) - M
    d0 = 0.5 * np.abs(delta).sum(axis=1).max()
    if d0 > radius:
        delta *= radius / d0
    return Channel(M + delta)


def continuity_probe(W: Channel, param: str = "capacity", radius: float = 1e-4,
                     samples: int = 20, seed: int = 0) -> ProbeReport:
    """Largest parameter change over random perturbations of ``W`` in a ball."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    try:
        f = PROBE_PARAMS[param]
    except KeyError:
        raise ValueError(f"unknown parameter {param!r}; choose from {sorted(PROBE_PARAMS)}") from None
    rng = np.random.default_rng(seed)
    base = f(W)
    dev = dist = 0.0
    for _ in range(samples):
        W2 = perturb(W, radius, rng)
        dist = max(dist, channel_distance(W, W2))
        dev = max(dev, abs(f(W2) - base))
    return ProbeReport(param, radius, samples, dev, dist)


def compose_witnesses(outer: DegradationWitness, inner: DegradationWitness) -> Channel:
    """Witness for ``W'' <= W`` from witnesses of ``W'' <= W'`` and ``W' <= W``."""
    return compose(outer.intermediate, inner.intermediate)
