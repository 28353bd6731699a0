"""Independent brute-force gauge oracle for low-dimensional atom sets.

Kept strictly apart from the package's LP path: the gauge of a point in the
cone over finitely many atoms is attained on a support of at most ``dim``
atoms (Caratheodory), so enumerating every small support and solving each
linear system exactly is a complete, if exponential, algorithm.
"""

import itertools
import math

import numpy as np


def gauge_bruteforce(x, atom_rows: np.ndarray, tol: float = 1e-9) -> float:
    """Exact gauge of ``x`` over the symmetric atom rows, or inf if outside."""
    x = np.asarray(x, dtype=float)
    dim = x.shape[0]
    if not np.any(x):
        return 0.0
    count = atom_rows.shape[0]
    best = math.inf
    scale = 1.0 + float(np.linalg.norm(x))
    for size in range(1, dim + 1):
        for subset in itertools.combinations(range(count), size):
            cols = atom_rows[list(subset)].T
            lam, _, _, _ = np.linalg.lstsq(cols, x, rcond=None)
            if np.linalg.norm(cols @ lam - x) > tol * scale:
                continue
            if np.any(lam < -tol):
                continue
            best = min(best, float(np.maximum(lam, 0.0).sum()))
    return best
