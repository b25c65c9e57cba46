"""Channels, distributions and the posterior decomposition of a channel.

Alphabets are index sets ``0..n-1``. A channel is a dense row-stochastic
matrix whose row ``x`` is the output distribution ``W(.|x)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, NonStochastic

EPS_STOCH = 1e-9
EPS_ZERO = 1e-12
EPS_RECON = 1e-12

# rows already this close to 1 are left alone so that load/save is a fixpoint
_RENORM_SLACK = 1e-15


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def _check_vector(w: np.ndarray, what: str, index: int = 0) -> np.ndarray:
    if w.ndim != 1 or w.size == 0:
        raise ValueError(f"{what} must be a nonempty vector")
    if not np.all(np.isfinite(w)):
        raise NonStochastic(index, float("nan"))
    if np.any(w < -EPS_STOCH) or np.any(w > 1 + EPS_STOCH):
        dev = float(max(-w.min(), w.max() - 1.0))
        raise NonStochastic(index, dev)
    s = float(w.sum())
    if abs(s - 1.0) > EPS_STOCH:
        raise NonStochastic(index, abs(s - 1.0))
    w = np.clip(w, 0.0, 1.0)
    s = float(w.sum())
    if abs(s - 1.0) > _RENORM_SLACK:
        w = w / s
    return w


@dataclass(frozen=True, eq=False)
class Distribution:
    """A point of the probability simplex over ``0..n-1``."""

    weights: np.ndarray

    def __post_init__(self):
        w = _check_vector(np.asarray(self.weights, dtype=np.float64), "distribution")
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def alphabet_size(self) -> int:
        return self.weights.size

    def __array__(self, dtype=None, copy=None):
        return self.weights if dtype is None else self.weights.astype(dtype)

    def __len__(self):
        return self.weights.size

    @classmethod
    def uniform(cls, n: int) -> "Distribution":
        return cls(np.full(n, 1.0 / n))


def as_distribution(p, size: int | None = None) -> np.ndarray:
    """Validate ``p`` as a probability vector and return it as an array."""
    w = np.asarray(p, dtype=np.float64)
    w = _check_vector(w, "distribution")
    if size is not None and w.size != size:
        raise DimensionMismatch(f"distribution has {w.size} entries, expected {size}")
    return w


@dataclass(frozen=True, eq=False)
class Channel:
    """A discrete memoryless channel ``W(y|x)`` stored as an |X| x |Y| matrix.

    Construct through :func:`validate_channel` (or ``Channel(matrix)``, which
    calls it); the stored matrix is read-only and exactly row-stochastic.
    """

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(_validated_rows(self.matrix)))

    @property
    def input_size(self) -> int:
        return self.matrix.shape[0]

    @property
    def output_size(self) -> int:
        return self.matrix.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"Channel({self.input_size}x{self.output_size})"

    def allclose(self, other: "Channel", atol: float = 1e-12) -> bool:
        return self.shape == other.shape and bool(np.allclose(self.matrix, other.matrix, rtol=0, atol=atol))


def _validated_rows(matrix) -> np.ndarray:
    m = np.array(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ValueError("channel matrix must be a nonempty rectangular 2-D array")
    return np.stack([_check_vector(row, "row", i) for i, row in enumerate(m)])


def validate_channel(matrix) -> Channel:
    """Check row-stochasticity (within ``EPS_STOCH``) and build a Channel.

    Raises :class:`NonStochastic` naming the first offending row.

    >>> validate_channel([[0.89, 0.11], [0.11, 0.89]]).shape
    (2, 2)
    """
    return Channel(matrix)


def deterministic_channel(f: Sequence[int] | Mapping[int, int] | Callable[[int], int],
                          input_size: int | None = None,
                          output_size: int | None = None) -> Channel:
    """The channel ``D_f`` with ``D_f(y|x) = 1`` iff ``y == f(x)``.

    ``f`` may be a sequence (``f[x]``), a mapping or a callable; callables need
    ``input_size``. ``output_size`` defaults to ``max(f) + 1``.
    """
    if callable(f) and not isinstance(f, (Sequence, Mapping)):
        if input_size is None:
            raise ValueError("input_size is required when f is callable")
        values = [int(f(x)) for x in range(input_size)]
    elif isinstance(f, Mapping):
        n = input_size if input_size is not None else len(f)
        try:
            values = [int(f[x]) for x in range(n)]
        except KeyError as exc:
            raise ValueError(f"f is not total: missing {exc.args[0]}") from None
    else:
        values = [int(v) for v in f]
        if input_size is not None and len(values) != input_size:
            raise ValueError("f must give one value per input")
    if not values:
        raise ValueError("empty input alphabet")
    n_out = output_size if output_size is not None else max(values) + 1
    if min(values) < 0 or max(values) >= n_out:
        raise ValueError("f maps outside the output alphabet")
    m = np.zeros((len(values), n_out))
    m[np.arange(len(values)), values] = 1.0
    return Channel(m)


def compose(V: Channel, W: Channel) -> Channel:
    """``(V o W)(z|x) = sum_y V(z|y) W(y|x)``: first ``W``, then ``V``."""
    if W.output_size != V.input_size:
        raise DimensionMismatch(
            f"cannot compose: W outputs {W.output_size} symbols, V takes {V.input_size}")
    # fixed summation order over y (no BLAS reassociation), so zero blocks
    # contribute exactly nothing and results are reproducible bit for bit
    out = np.zeros((W.input_size, V.output_size))
    for y in range(W.output_size):
        out += W.matrix[:, y, None] * V.matrix[None, y, :]
    return Channel(out)


def channel_distance(W: Channel, W2: Channel) -> float:
    """Half the largest row-wise L1 distance between two same-shape channels."""
    if W.shape != W2.shape:
        raise DimensionMismatch(f"shapes differ: {W.shape} vs {W2.shape}")
    return 0.5 * float(np.abs(W2.matrix - W.matrix).sum(axis=1).max())


@dataclass(frozen=True, eq=False)
class ChannelDecomposition:
    """Output law under uniform input plus the posterior of each used output."""

    output_dist: np.ndarray
    image: tuple[int, ...]
    posteriors: dict[int, np.ndarray]

    def reconstruct(self, input_size: int) -> np.ndarray:
        m = np.zeros((input_size, self.output_dist.size))
        for y in self.image:
            m[:, y] = input_size * self.output_dist[y] * self.posteriors[y]
        return m


def decompose(W: Channel) -> ChannelDecomposition:
    n_in = W.input_size
    out = W.matrix.sum(axis=0) / n_in
    image = tuple(int(y) for y in np.flatnonzero(out > EPS_ZERO))
    posteriors = {}
    for y in image:
        post = W.matrix[:, y] / (n_in * out[y])
        post.setflags(write=False)
        posteriors[y] = post
    return ChannelDecomposition(_frozen(out), image, posteriors)


def random_channel(input_size: int, output_size: int, seed=None) -> Channel:
    """Rows drawn i.i.d. from the flat Dirichlet on the output simplex.

    ``seed`` may be an int or a ``numpy.random.Generator``.
    """
    if input_size < 1 or output_size < 1:
        raise ValueError("alphabet sizes must be >= 1")
    rng = np.random.default_rng(seed)
    e = rng.exponential(size=(input_size, output_size))
    return Channel(e / e.sum(axis=1, keepdims=True))


def random_distribution(size: int, seed=None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    e = rng.exponential(size=size)
    return e / e.sum()


# Common fixtures. They are plain channels, nothing special-cased downstream.

def bsc(delta: float) -> Channel:
    return Channel([[1 - delta, delta], [delta, 1 - delta]])


def bec(eps: float) -> Channel:
    """Binary erasure channel; output 1 is the erasure symbol."""
    return Channel([[1 - eps, eps, 0.0], [0.0, eps, 1 - eps]])


def identity_channel(n: int) -> Channel:
    return Channel(np.eye(n))


def constant_channel(input_size: int, dist) -> Channel:
    d = as_distribution(dist)
    return Channel(np.tile(d, (input_size, 1)))
