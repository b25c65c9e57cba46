"""Blackwell measures of channels and arithmetic on finitely supported meta-measures.

A measure is a finite list of atoms ``(posterior, weight)`` where each
posterior is a distribution on the input alphabet. Two channels with the same
input alphabet are equivalent exactly when their Blackwell measures agree,
so the canonical form below is what equivalence tests compare.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .channel_core import EPS_STOCH, EPS_ZERO, Channel, as_distribution, decompose
from .errors import BadWeights, DimensionMismatch, NotBalanced, TooLarge
from .operations import BinaryOp
from .parameters import ENUM_CAP, Code, entropy

ATOM_TOL = 1e-9
EPS_BAL = 1e-9
RANK_CAP = 10**5


@dataclass(frozen=True, eq=False)
class BlackwellMeasure:
    """Canonical finitely supported meta-probability measure on ``0..n-1``.

    ``posteriors`` is ``rank x alphabet_size``; row ``j`` carries ``weights[j]``.
    Instances come out of :func:`canonicalize`; do not build them by hand.
    """

    alphabet_size: int
    posteriors: np.ndarray
    weights: np.ndarray

    @property
    def rank(self) -> int:
        return self.weights.size

    def mean(self) -> np.ndarray:
        return self.weights @ self.posteriors

    def atoms(self) -> list[tuple[np.ndarray, float]]:
        return [(self.posteriors[j], float(self.weights[j])) for j in range(self.rank)]

    def __repr__(self):
        return f"BlackwellMeasure(alphabet={self.alphabet_size}, rank={self.rank})"


@dataclass(frozen=True)
class MeasureOpReport:
    result: BlackwellMeasure
    atom_count_before_merge: int
    merged: int


def _sort_order(P: np.ndarray) -> np.ndarray:
    # primary keys are rounded so that float noise cannot reorder near-ties
    rounded = np.round(P, 12)
    keys = [P[:, c] for c in reversed(range(P.shape[1]))]
    keys += [rounded[:, c] for c in reversed(range(P.shape[1]))]
    return np.lexsort(keys)


def canonicalize_report(posteriors, weights, alphabet_size: int | None = None,
                        atom_tol: float = ATOM_TOL) -> MeasureOpReport:
    """Drop null atoms, merge atoms closer than ``atom_tol`` in L1, sort.

    Atoms are visited in lexicographic order and each is merged into the
    earliest representative within tolerance; a merged posterior is the
    weight-average of its members. ``atom_tol=0`` merges exact duplicates only.
    """
    P = np.asarray(posteriors, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64).ravel()
    if P.ndim == 1:
        P = P[None, :] if w.size == 1 else P.reshape(w.size, -1)
    n = alphabet_size if alphabet_size is not None else P.shape[1]
    if P.shape[0] != w.size or (P.size and P.shape[1] != n):
        raise DimensionMismatch("posteriors and weights do not line up")
    if np.any(~np.isfinite(w)) or np.any(w < 0) or np.any(~np.isfinite(P)):
        raise BadWeights("atom weights must be finite and nonnegative")
    before = w.size
    keep = w > EPS_ZERO
    P, w = P[keep], w[keep]
    if w.size == 0:
        raise BadWeights("measure has no mass")
    order = _sort_order(P)
    P, w = P[order], w[order]

    reps: list[np.ndarray] = []
    rep_w: list[float] = []
    for j in range(w.size):
        hit = -1
        if reps:
            d = np.abs(np.asarray(reps) - P[j]).sum(axis=1)
            close = np.flatnonzero(d <= atom_tol)
            if close.size:
                hit = int(close[0])
        if hit < 0:
            reps.append(P[j].copy())
            rep_w.append(float(w[j]))
        else:
            tot = rep_w[hit] + w[j]
            reps[hit] = (rep_w[hit] * reps[hit] + w[j] * P[j]) / tot
            rep_w[hit] = tot
    R = np.asarray(reps)
    W = np.asarray(rep_w)
    order = _sort_order(R)
    R, W = R[order], W[order]
    s = W.sum()
    if abs(s - 1.0) > EPS_STOCH:
        raise BadWeights(f"atom weights sum to {s}, not 1")
    R.setflags(write=False)
    W.setflags(write=False)
    return MeasureOpReport(BlackwellMeasure(n, R, W), before, int(keep.sum()) - len(reps))


def canonicalize(posteriors, weights, alphabet_size: int | None = None,
                 atom_tol: float = ATOM_TOL) -> BlackwellMeasure:
    return canonicalize_report(posteriors, weights, alphabet_size, atom_tol).result


def blackwell_measure(W: Channel, atom_tol: float = ATOM_TOL) -> BlackwellMeasure:
    """Atoms ``(W_y^{-1}, P^o(y))`` over the outputs ``y`` with positive mass."""
    dec = decompose(W)
    ys = list(dec.image)
    P = np.array([dec.posteriors[y] for y in ys])
    return canonicalize(P, dec.output_dist[ys], W.input_size, atom_tol)


def balance_deviation(mp: BlackwellMeasure) -> float:
    return float(np.abs(mp.mean() - 1.0 / mp.alphabet_size).max())


def is_balanced(mp: BlackwellMeasure, eps: float = EPS_BAL) -> bool:
    """True when the measure's mean posterior is uniform (within ``eps``)."""
    return balance_deviation(mp) <= eps


def rank(mp: BlackwellMeasure) -> int:
    return mp.rank


def _match(a: BlackwellMeasure, b: BlackwellMeasure, atom_tol: float) -> list[tuple[int | None, int | None]]:
    """Pair atoms of ``a`` and ``b`` whose posteriors agree within ``atom_tol``."""
    used = np.zeros(b.rank, dtype=bool)
    pairs: list[tuple[int | None, int | None]] = []
    for i in range(a.rank):
        d = np.abs(b.posteriors - a.posteriors[i]).sum(axis=1)
        d[used] = np.inf
        j = int(np.argmin(d)) if b.rank else -1
        if j >= 0 and d[j] <= atom_tol:
            used[j] = True
            pairs.append((i, j))
        else:
            pairs.append((i, None))
    pairs.extend((None, j) for j in np.flatnonzero(~used))
    return pairs


def measures_equal(a: BlackwellMeasure, b: BlackwellMeasure,
                   atom_tol: float = ATOM_TOL, weight_tol: float = EPS_STOCH) -> bool:
    if a.alphabet_size != b.alphabet_size or a.rank != b.rank:
        return False
    for i, j in _match(a, b, atom_tol):
        if i is None or j is None or abs(a.weights[i] - b.weights[j]) > weight_tol:
            return False
    return True


def equivalent(W1: Channel, W2: Channel, atom_tol: float = ATOM_TOL) -> bool:
    """Blackwell equivalence: each channel is a garbling of the other."""
    if W1.input_size != W2.input_size:
        raise DimensionMismatch("equivalence needs a common input alphabet")
    return measures_equal(blackwell_measure(W1, atom_tol), blackwell_measure(W2, atom_tol), atom_tol)


def tv_distance(a: BlackwellMeasure, b: BlackwellMeasure, atom_tol: float = ATOM_TOL) -> float:
    """Total variation between two finitely supported measures.

    Atoms are aligned by posterior (within ``atom_tol``); the result is half
    the L1 distance between the aligned weight vectors.
    """
    if a.alphabet_size != b.alphabet_size:
        raise DimensionMismatch("measures live on different alphabets")
    total = 0.0
    for i, j in _match(a, b, atom_tol):
        wa = a.weights[i] if i is not None else 0.0
        wb = b.weights[j] if j is not None else 0.0
        total += abs(wa - wb)
    return float(min(1.0, 0.5 * total))


def channel_from_measure(mp: BlackwellMeasure, eps: float = EPS_BAL) -> Channel:
    """A representative channel with one output per atom: ``W(j|x) = |X| w_j p_j(x)``."""
    dev = balance_deviation(mp)
    if dev > eps:
        raise NotBalanced(dev)
    m = mp.alphabet_size * mp.posteriors.T * mp.weights[None, :]
    return Channel(m / m.sum(axis=1, keepdims=True))


def meta_push_forward(f: Sequence[int], mp: BlackwellMeasure, target_size: int | None = None) -> BlackwellMeasure:
    """Push every posterior forward through ``f: X -> X'``; weights are kept."""
    f = np.asarray(f, dtype=np.int64)
    if f.size != mp.alphabet_size:
        raise DimensionMismatch("f must be defined on every input symbol")
    n_out = int(target_size if target_size is not None else f.max() + 1)
    P = np.zeros((mp.rank, n_out))
    for x in range(mp.alphabet_size):
        P[:, f[x]] += mp.posteriors[:, x]
    return canonicalize(P, mp.weights, n_out)


def measure_mixture(pairs: Iterable[tuple[float, BlackwellMeasure]]) -> BlackwellMeasure:
    pairs = list(pairs)
    if not pairs:
        raise BadWeights("empty mixture")
    lam = np.array([l for l, _ in pairs], dtype=np.float64)
    if np.any(lam < 0) or abs(lam.sum() - 1.0) > EPS_STOCH:
        raise BadWeights(f"mixture weights {lam.tolist()} are not a distribution")
    n = pairs[0][1].alphabet_size
    if any(mp.alphabet_size != n for _, mp in pairs):
        raise DimensionMismatch("mixture components live on different alphabets")
    P = np.vstack([mp.posteriors for _, mp in pairs])
    w = np.concatenate([l * mp.weights for l, mp in pairs])
    return canonicalize(P, w, n)


def _cap(count: int):
    if count > RANK_CAP:
        raise TooLarge(f"{count} atoms before merging exceeds {RANK_CAP}")


def measure_tensor(a: BlackwellMeasure, b: BlackwellMeasure) -> BlackwellMeasure:
    """Law of ``p x q`` for independent ``p ~ a``, ``q ~ b`` (row-major pairs)."""
    _cap(a.rank * b.rank)
    P = np.einsum("ix,jy->ijxy", a.posteriors, b.posteriors).reshape(a.rank * b.rank, -1)
    w = np.outer(a.weights, b.weights).ravel()
    return canonicalize(P, w, a.alphabet_size * b.alphabet_size)


def sum_measure(a: BlackwellMeasure, b: BlackwellMeasure) -> BlackwellMeasure:
    """Measure of the channel sum, from the two component measures."""
    n1, n2 = a.alphabet_size, b.alphabet_size
    left = meta_push_forward(range(n1), a, n1 + n2)
    right = meta_push_forward(range(n1, n1 + n2), b, n1 + n2)
    return measure_mixture([(n1 / (n1 + n2), left), (n2 / (n1 + n2), right)])


def _check_op(a: BlackwellMeasure, b: BlackwellMeasure, op: BinaryOp):
    if not a.alphabet_size == b.alphabet_size == op.size:
        raise DimensionMismatch("measures and operation must share the alphabet")


def minus_kernel(p1: np.ndarray, p2: np.ndarray, op: BinaryOp) -> np.ndarray:
    """Law of ``U1`` where ``(X1, X2) = (U1*U2, U2)`` with ``X_i ~ p_i`` independent."""
    return np.asarray(p1)[op.table] @ np.asarray(p2)


def plus_kernel(p1: np.ndarray, p2: np.ndarray, op: BinaryOp) -> list[tuple[int, float, np.ndarray]]:
    """``(u1, P(U1=u1), law of U2 given U1=u1)`` over the support of ``U1``."""
    joint = np.asarray(p1)[op.table] * np.asarray(p2)[None, :]   # [u1, u2]
    marg = joint.sum(axis=1)
    return [(u1, float(marg[u1]), joint[u1] / marg[u1]) for u1 in range(op.size) if marg[u1] > 0]


def minus_convolve(a: BlackwellMeasure, b: BlackwellMeasure, op: BinaryOp) -> BlackwellMeasure:
    _check_op(a, b, op)
    _cap(a.rank * b.rank)
    # [i, u1, u2] . [j, u2] -> [i, j, u1]
    P = np.einsum("iab,jb->ija", a.posteriors[:, op.table], b.posteriors).reshape(a.rank * b.rank, -1)
    w = np.outer(a.weights, b.weights).ravel()
    return canonicalize(P, w, op.size)


def plus_convolve(a: BlackwellMeasure, b: BlackwellMeasure, op: BinaryOp) -> BlackwellMeasure:
    _check_op(a, b, op)
    n = op.size
    _cap(a.rank * b.rank * n)
    joint = a.posteriors[:, None, op.table] * b.posteriors[None, :, None, :]   # [i, j, u1, u2]
    marg = joint.sum(axis=3)
    ok = marg > 0
    post = joint[ok] / marg[ok][:, None]
    w = (np.outer(a.weights, b.weights)[:, :, None] * marg)[ok]
    return canonicalize(post, w, n)


# Parameters evaluated directly on a measure.

def _require_balanced(mp: BlackwellMeasure):
    dev = balance_deviation(mp)
    if dev > EPS_BAL:
        raise NotBalanced(dev)


def mutual_information_of(p, mp: BlackwellMeasure) -> float:
    """``I(p, W)`` for any channel ``W`` with Blackwell measure ``mp``.

    Uses ``I = H(p) - H(X|Y)`` with
    ``H(X|Y) = -|X| sum_j w_j sum_x p(x)p_j(x) log(p(x)p_j(x) / <p, p_j>)``.
    """
    _require_balanced(mp)
    p = as_distribution(p, mp.alphabet_size)
    joint = mp.posteriors * p[None, :]          # [j, x]
    norm = joint.sum(axis=1, keepdims=True)
    inner = np.zeros_like(joint)
    mask = joint > 0
    inner[mask] = joint[mask] * np.log((joint / np.where(norm > 0, norm, 1.0))[mask])
    cond = -mp.alphabet_size * float(mp.weights @ inner.sum(axis=1))
    return max(0.0, entropy(p) - cond)


def map_error_of(p, mp: BlackwellMeasure) -> float:
    _require_balanced(mp)
    p = as_distribution(p, mp.alphabet_size)
    best = (mp.posteriors * p[None, :]).max(axis=1)
    return float(min(1.0, max(0.0, 1.0 - mp.alphabet_size * float(mp.weights @ best))))


def bhattacharyya_of(mp: BlackwellMeasure) -> float:
    _require_balanced(mp)
    n = mp.alphabet_size
    if n == 1:
        return 0.0
    s = np.sqrt(mp.posteriors)
    pair_sum = s.sum(axis=1) ** 2 - mp.posteriors.sum(axis=1)
    return float(min(1.0, max(0.0, float(mp.weights @ pair_sum) / (n - 1))))


def code_error_of(code: Code, mp: BlackwellMeasure) -> float:
    """ML error of ``code`` from the ``n``-fold product of the measure."""
    _require_balanced(mp)
    n_x = mp.alphabet_size
    if code.max_symbol >= n_x:
        raise DimensionMismatch("code uses symbols outside the alphabet")
    if mp.rank ** code.n > ENUM_CAP:
        raise TooLarge(f"rank^n = {mp.rank}^{code.n} exceeds {ENUM_CAP}")
    cols = mp.posteriors.T                      # [x, j]
    best = None
    for word in code.words:
        lik = cols[word[0]]
        for s in word[1:]:
            lik = np.multiply.outer(lik, cols[s])
        best = lik if best is None else np.maximum(best, lik)
    wprod = mp.weights
    for _ in range(code.n - 1):
        wprod = np.multiply.outer(wprod, mp.weights)
    integral = float((best * wprod).sum())
    return float(min(1.0, max(0.0, 1.0 - (n_x ** code.n) / code.size * integral)))
