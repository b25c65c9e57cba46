"""Scalar channel parameters: mutual information, capacity, error probabilities."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channel_core import EPS_STOCH, Channel, Distribution, as_distribution
from .errors import DimensionMismatch, NoConvergence, TooLarge

MAX_ITER = 100_000
ENUM_CAP = 10**7
COMB_CAP = 10**6


def entropy(p) -> float:
    """Shannon entropy in nats with ``0 log 0 = 0``."""
    p = np.asarray(p, dtype=np.float64)
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum())


def _xlogy_ratio(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise ``a * log(a / b)`` with ``0 log(0/b) = 0``; ``b`` must be > 0 where ``a`` > 0."""
    out = np.zeros(np.broadcast(a, b).shape)
    a_b = np.broadcast_to(a, out.shape)
    b_b = np.broadcast_to(b, out.shape)
    mask = a_b > 0
    out[mask] = a_b[mask] * np.log(a_b[mask] / b_b[mask])
    return out


def _check_prior(p, W: Channel) -> np.ndarray:
    p = as_distribution(p)
    if p.size != W.input_size:
        raise DimensionMismatch(f"prior has {p.size} entries, channel has {W.input_size} inputs")
    return p


def mutual_information(p, W: Channel) -> float:
    """I(X;Y) in nats for input law ``p``."""
    p = _check_prior(p, W)
    joint = p[:, None] * W.matrix
    q = joint.sum(axis=0)
    prod = p[:, None] * q[None, :]
    return max(0.0, float(_xlogy_ratio(joint, np.where(prod > 0, prod, 1.0)).sum()))


def symmetric_capacity(W: Channel) -> float:
    return mutual_information(np.full(W.input_size, 1.0 / W.input_size), W)


@dataclass(frozen=True)
class CapacityResult:
    value: float
    lower_bound: float
    upper_bound: float
    iterations: int
    maximizing_input: Distribution

    @property
    def gap(self) -> float:
        return self.upper_bound - self.lower_bound


def _divergences(W: np.ndarray, q: np.ndarray) -> np.ndarray:
    """``D(W(.|x) || q)`` for every row x; +inf where q misses W's support."""
    bad = (W > 0) & (q[None, :] <= 0)
    d = _xlogy_ratio(W, np.where(q > 0, q, 1.0)[None, :]).sum(axis=1)
    d[bad.any(axis=1)] = np.inf
    return d


def capacity(W: Channel, tol: float = 1e-9, max_iter: int = MAX_ITER) -> CapacityResult:
    """Blahut-Arimoto from the uniform input with a certified duality gap.

    At each iterate ``p`` the achieved rate ``I(p, W)`` is a lower bound and
    ``max_x D(W(.|x) || pW)`` an upper bound on the capacity. Iteration stops
    once they are within ``tol``; the reported value is their midpoint.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = W.matrix
    n = W.input_size
    p = np.full(n, 1.0 / n)
    lower, upper = 0.0, np.inf
    for it in range(1, max_iter + 1):
        q = p @ M
        d = _divergences(M, q)
        lower = max(0.0, float(p @ np.where(np.isfinite(d), d, 0.0)))
        upper = float(d.max())
        if upper - lower < tol:
            return CapacityResult(0.5 * (lower + upper), lower, upper, it, Distribution(p))
        # multiplicative update; subtract the max exponent for stability
        e = np.where(np.isfinite(d), d, 0.0)
        w = p * np.exp(e - e.max())
        p = w / w.sum()
    raise NoConvergence(max_iter, upper - lower)


def map_error(p, W: Channel) -> float:
    """Error probability of the MAP decoder under prior ``p``."""
    p = _check_prior(p, W)
    return float(min(1.0, max(0.0, 1.0 - (p[:, None] * W.matrix).max(axis=0).sum())))


def bhattacharyya(W: Channel) -> float:
    """Average pairwise Bhattacharyya coefficient between distinct rows."""
    n = W.input_size
    if n == 1:
        return 0.0
    s = np.sqrt(W.matrix)
    gram = s @ s.T
    total = gram.sum() - np.trace(gram)
    return float(min(1.0, max(0.0, total / (n * (n - 1)))))


@dataclass(frozen=True, eq=False)
class JointPrior:
    """Joint law ``p(u, x)`` of a label ``u in 0..m-1`` and a channel input ``x``."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.size == 0:
            raise ValueError("joint prior must be a nonempty m x |X| array")
        if not np.all(np.isfinite(w)) or np.any(w < -EPS_STOCH):
            raise ValueError("joint prior weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > EPS_STOCH:
            raise ValueError(f"joint prior sums to {w.sum()}, not 1")
        w = np.clip(w, 0.0, None)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def m(self) -> int:
        return self.weights.shape[0]

    @property
    def input_size(self) -> int:
        return self.weights.shape[1]


def correct_guess_prob(prior: JointPrior | np.ndarray, W: Channel) -> float:
    """Best probability of guessing the label ``u`` from the channel output.

    The optimum over randomized decoders is attained by the deterministic
    MAP rule, so this is ``sum_y max_u sum_x p(u,x) W(y|x)``.
    """
    if not isinstance(prior, JointPrior):
        prior = JointPrior(prior)
    if prior.input_size != W.input_size:
        raise DimensionMismatch("joint prior and channel disagree on |X|")
    if prior.m == 1:
        return 1.0
    return float(min(1.0, (prior.weights @ W.matrix).max(axis=0).sum()))


def map_decoder(prior: JointPrior, W: Channel) -> np.ndarray:
    """Deterministic MAP decoder table ``y -> u``; ties go to the lowest label."""
    return np.argmax(prior.weights @ W.matrix, axis=0)


@dataclass(frozen=True)
class Code:
    """A block code: distinct length-``n`` words over ``0..|X|-1``."""

    n: int
    words: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        words = tuple(tuple(int(s) for s in w) for w in self.words)
        if not words:
            raise ValueError("a code needs at least one word")
        if any(len(w) != self.n for w in words):
            raise ValueError(f"every word must have length {self.n}")
        if len(set(words)) != len(words):
            raise ValueError("codewords must be distinct")
        if any(s < 0 for w in words for s in w):
            raise ValueError("negative symbol")
        object.__setattr__(self, "words", words)

    @classmethod
    def from_words(cls, words) -> "Code":
        words = [tuple(w) for w in words]
        return cls(len(words[0]) if words else 0, tuple(words))

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def max_symbol(self) -> int:
        return max(s for w in self.words for s in w)


def _word_likelihood(word, rows: np.ndarray) -> np.ndarray:
    """Product likelihood over all output n-tuples, as an n-dim array."""
    out = rows[word[0]]
    for s in word[1:]:
        out = np.multiply.outer(out, rows[s])
    return out


def code_error(code: Code, W: Channel) -> float:
    """ML-decoding error probability of ``code`` over ``W`` (exact enumeration)."""
    if code.max_symbol >= W.input_size:
        raise DimensionMismatch("code uses symbols outside the channel input alphabet")
    if W.output_size ** code.n > ENUM_CAP:
        raise TooLarge(f"|Y|^n = {W.output_size}^{code.n} exceeds {ENUM_CAP}")
    best = None
    for word in code.words:
        lik = _word_likelihood(word, W.matrix)
        best = lik if best is None else np.maximum(best, lik)
    return float(min(1.0, max(0.0, 1.0 - best.sum() / code.size)))


def optimal_code_error(n: int, M: int, W: Channel) -> float:
    """Smallest ML error over all ``(n, M)`` codes, by exhaustive search."""
    total = W.input_size ** n
    if not 1 <= M <= total:
        raise ValueError(f"M must lie in [1, {total}]")
    if math.comb(total, M) > COMB_CAP:
        raise TooLarge(f"C({total}, {M}) codes exceed {COMB_CAP}")
    if W.output_size ** n > ENUM_CAP:
        raise TooLarge(f"|Y|^n = {W.output_size}^{n} exceeds {ENUM_CAP}")
    if M == 1:
        return 0.0
    words = list(itertools.product(range(W.input_size), repeat=n))
    liks = [_word_likelihood(w, W.matrix).ravel() for w in words]
    best = math.inf
    for combo in itertools.combinations(range(total), M):
        mass = np.max([liks[i] for i in combo], axis=0).sum()
        best = min(best, 1.0 - mass / M)
    return float(min(1.0, max(0.0, best)))
