"""Channel operations: sum, product, interpolation and generalized polar transforms.

Index conventions. Disjoint unions put the first operand's block first.
Pairs ``(a, b)`` flatten row-major to ``a * |B| + b``; the triple
``(y1, y2, u1)`` produced by :func:`polar_plus` flattens to
``(y1 * |Y| + y2) * |X| + u1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel_core import Channel
from .errors import BadAlpha, DimensionMismatch, NotUniformityPreserving


def channel_sum(W1: Channel, W2: Channel) -> Channel:
    """Block-diagonal channel: the sender picks which of W1, W2 to use."""
    m = np.zeros((W1.input_size + W2.input_size, W1.output_size + W2.output_size))
    m[:W1.input_size, :W1.output_size] = W1.matrix
    m[W1.input_size:, W1.output_size:] = W2.matrix
    return Channel(m)


def channel_product(W1: Channel, W2: Channel) -> Channel:
    """Both channels used at once: ``(y1,y2|x1,x2) = W1(y1|x1) W2(y2|x2)``."""
    return Channel(np.kron(W1.matrix, W2.matrix))


def interpolate(alpha: float, W1: Channel, W2: Channel) -> Channel:
    """``W1`` with probability ``alpha``, else ``W2``; the receiver learns which."""
    if W1.input_size != W2.input_size:
        raise DimensionMismatch("interpolated channels must share the input alphabet")
    if not 0.0 <= alpha <= 1.0:
        raise BadAlpha(f"alpha = {alpha} is outside [0, 1]")
    return Channel(np.hstack([alpha * W1.matrix, (1.0 - alpha) * W2.matrix]))


@dataclass(frozen=True, eq=False)
class BinaryOp:
    """A uniformity-preserving binary operation; ``table[a, b] = a * b``.

    Build with :func:`check_uniformity_preserving`.
    """

    table: np.ndarray

    @property
    def size(self) -> int:
        return self.table.shape[0]

    def __call__(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def __eq__(self, other):
        return isinstance(other, BinaryOp) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())


@dataclass(frozen=True, eq=False)
class RightInverse:
    """``table[a, b] = a /* b``, the unique ``c`` with ``c * b = a``."""

    table: np.ndarray

    def __call__(self, a: int, b: int) -> int:
        return int(self.table[a, b])


def check_uniformity_preserving(table) -> BinaryOp:
    """Accept ``table`` iff ``(a, b) -> (a*b, b)`` is a bijection of X^2.

    That is the case exactly when every column ``a -> a*b`` is a permutation;
    the first column that is not is reported.
    """
    t = np.array(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.size == 0:
        raise ValueError("operation table must be a nonempty square array")
    if not np.issubdtype(t.dtype, np.integer):
        if not np.all(t == np.round(t)):
            raise ValueError("operation table entries must be integers")
        t = t.astype(np.int64)
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise ValueError(f"operation table entries must lie in [0, {n})")
    for b in range(n):
        if len(set(t[:, b].tolist())) != n:
            raise NotUniformityPreserving(b)
    t = t.astype(np.int64)
    t.setflags(write=False)
    return BinaryOp(t)


def right_inverse(op: BinaryOp) -> RightInverse:
    n = op.size
    inv = np.empty((n, n), dtype=np.int64)
    for b in range(n):
        inv[op.table[:, b], b] = np.arange(n)
    inv.setflags(write=False)
    return RightInverse(inv)


def xor_op() -> BinaryOp:
    return check_uniformity_preserving([[0, 1], [1, 0]])


def add_mod(n: int) -> BinaryOp:
    a = np.arange(n)
    return check_uniformity_preserving((a[:, None] + a[None, :]) % n)


def _polar_pair(W: Channel, op: BinaryOp) -> np.ndarray:
    """``T[u1, u2, y1, y2] = W(y1 | u1*u2) W(y2 | u2) / |X|``."""
    if op.size != W.input_size:
        raise DimensionMismatch(f"operation acts on {op.size} symbols, channel has {W.input_size} inputs")
    M = W.matrix
    first = M[op.table]                        # [u1, u2, y1]
    return first[:, :, :, None] * M[None, :, None, :] / W.input_size


def polar_minus(W: Channel, op: BinaryOp) -> Channel:
    """``W^-(y1, y2 | u1)``: u2 is uniform and unseen."""
    T = _polar_pair(W, op)
    n_in, n_out = W.input_size, W.output_size
    return Channel(T.sum(axis=1).reshape(n_in, n_out * n_out))


def polar_plus(W: Channel, op: BinaryOp) -> Channel:
    """``W^+(y1, y2, u1 | u2)``: u1 is handed to the receiver."""
    T = _polar_pair(W, op)                     # [u1, u2, y1, y2]
    n_in, n_out = W.input_size, W.output_size
    return Channel(T.transpose(1, 2, 3, 0).reshape(n_in, n_out * n_out * n_in))
