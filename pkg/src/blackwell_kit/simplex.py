"""Dense phase-one simplex for small feasibility problems ``A x = b, x >= 0``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class PhaseOneResult:
    x: np.ndarray
    infeasibility: float      # optimal total artificial slack
    iterations: int


def phase_one(A, b, tol: float = PIVOT_TOL, max_iter: int = 50_000) -> PhaseOneResult:
    """Minimize the total artificial slack with Bland's anti-cycling rule.

    The optimum is zero exactly when the system is feasible; the returned
    ``x`` is the basic solution at the optimum.
    """
    A = np.array(A, dtype=np.float64)
    b = np.array(b, dtype=np.float64)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # columns: n originals, m artificials, rhs
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(n, n + m))

    it = 0
    while it < max_iter:
        entering = next((j for j in range(n + m) if T[m, j] < -tol), None)
        if entering is None:
            break
        col = T[:m, entering]
        rows = np.flatnonzero(col > tol)
        if rows.size == 0:
            # cannot happen: the phase-one objective is bounded below by 0
            break
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol * max(1.0, abs(best))]
        leave = min(ties, key=lambda r: basis[r])
        T[leave] /= T[leave, entering]
        for r in range(m + 1):
            if r != leave and T[r, entering] != 0.0:
                T[r] -= T[r, entering] * T[leave]
        basis[leave] = entering
        it += 1

    x = np.zeros(n + m)
    for r, j in enumerate(basis):
        x[j] = T[r, -1]
    return PhaseOneResult(x[:n], float(max(0.0, x[n:].sum())), it)
