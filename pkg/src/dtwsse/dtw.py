"""Dynamic time warping with squared point costs.

The local cost between two time points is the squared Euclidean norm of
their difference and the DTW value is the minimum summed cost over all
boundary-anchored, monotone, unit-step warping paths. No square root is
taken at the end.

Indices in returned warping paths are 0-based.
"""

import numpy as np

from .exceptions import EnumerationBudgetError
from .validation import as_series

__all__ = [
    "cost_matrix",
    "dtw_distance",
    "dtw_with_path",
    "brute_force_dtw",
    "dtw_paired",
    "dtw_one_to_many",
    "pairwise_dtw",
    "path_cost",
    "is_valid_path",
]

# Upper bound on float64 cells held in one batched cost tensor.
_MAX_BATCH_CELLS = 2**22


def _check_pair(a, b):
    a = as_series(a, "a")
    b = as_series(b, "b")
    if a.shape[1] != b.shape[1]:
        raise ValueError(
            f"variable count mismatch: a has M={a.shape[1]}, b has M={b.shape[1]}"
        )
    return a, b


def cost_matrix(a, b):
    """Squared Euclidean cost between every point of `a` and every point of `b`.

    Parameters
    ----------
    a : array-like of shape (La,) or (La, M)
    b : array-like of shape (Lb,) or (Lb, M)

    Returns
    -------
    ndarray of shape (La, Lb)
    """
    a, b = _check_pair(a, b)
    return _cost(a[None], b[None])[0]


def _cost(A, B):
    # (P, La, M) x (P, Lb, M) -> (P, La, Lb); explicit differences keep D >= 0
    # exactly and D == 0 only for identical points.
    diff = A[:, :, None, :] - B[:, None, :, :]
    return np.einsum("pijm,pijm->pij", diff, diff)


def _band_mask(la, lb, window):
    if window is None:
        return None
    radius = max(int(window), abs(la - lb))
    i = np.arange(la)[:, None]
    j = np.arange(lb)[None, :]
    return np.abs(i - j) <= radius


def _accumulate_last(D, window=None):
    """Run the DP recurrence over a batch of cost tables, O(Lb) memory per item."""
    n, la, lb = D.shape
    mask = _band_mask(la, lb, window)
    prev = np.full((n, lb), np.inf)
    for i in range(la):
        cur = np.empty((n, lb))
        for j in range(lb):
            if mask is not None and not mask[i, j]:
                cur[:, j] = np.inf
                continue
            if i == 0 and j == 0:
                cur[:, 0] = D[:, 0, 0]
                continue
            best = prev[:, j]
            if j > 0:
                best = np.minimum(np.minimum(best, prev[:, j - 1]), cur[:, j - 1])
            cur[:, j] = D[:, i, j] + best
        prev = cur
    return prev[:, -1]


def _accumulate_full(D, window=None):
    la, lb = D.shape
    mask = _band_mask(la, lb, window)
    acc = np.full((la + 1, lb + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, la + 1):
        for j in range(1, lb + 1):
            if mask is not None and not mask[i - 1, j - 1]:
                continue
            acc[i, j] = D[i - 1, j - 1] + min(
                acc[i - 1, j], acc[i, j - 1], acc[i - 1, j - 1]
            )
    return acc[1:, 1:]


def dtw_distance(a, b, window=None):
    """DTW value between two series of equal variable count.

    Parameters
    ----------
    a, b : array-like of shape (L,) or (L, M)
        Lengths may differ.
    window : int, optional
        Sakoe-Chiba band radius. ``None`` (default) means unconstrained.

    Returns
    -------
    float
    """
    a, b = _check_pair(a, b)
    return float(_accumulate_last(_cost(a[None], b[None]), window)[0])


def dtw_with_path(a, b, window=None):
    """DTW value together with one optimal warping path.

    Returns
    -------
    distance : float
    path : list of (int, int)
        0-based index pairs from ``(0, 0)`` to ``(La - 1, Lb - 1)``.
    """
    a, b = _check_pair(a, b)
    D = _cost(a[None], b[None])[0]
    acc = _accumulate_full(D, window)
    i, j = acc.shape[0] - 1, acc.shape[1] - 1
    path = [(i, j)]
    while i > 0 or j > 0:
        if i == 0:
            j -= 1
        elif j == 0:
            i -= 1
        else:
            # ties prefer the diagonal, then the vertical step
            moves = ((i - 1, j - 1), (i - 1, j), (i, j - 1))
            i, j = min(moves, key=lambda ij: acc[ij])
        path.append((i, j))
    path.reverse()
    return float(acc[-1, -1]), path


def path_cost(a, b, path):
    """Sum of cost-matrix entries along `path`."""
    D = cost_matrix(a, b)
    return float(sum(D[i, j] for i, j in path))


def is_valid_path(path, la, lb):
    """Check boundary, monotonicity and unit-step constraints of a warping path."""
    if not path or tuple(path[0]) != (0, 0) or tuple(path[-1]) != (la - 1, lb - 1):
        return False
    for (i0, j0), (i1, j1) in zip(path, path[1:]):
        if (i1 - i0, j1 - j0) not in ((1, 0), (0, 1), (1, 1)):
            return False
    return True


def brute_force_dtw(a, b, max_total_length=14):
    """Exact DTW by enumerating every valid warping path.

    Reference oracle for the dynamic program; exponential in the lengths.

    Raises
    ------
    EnumerationBudgetError
        If ``La + Lb`` exceeds `max_total_length`.
    """
    a, b = _check_pair(a, b)
    la, lb = len(a), len(b)
    if la + lb > max_total_length:
        raise EnumerationBudgetError(
            f"La + Lb = {la + lb} exceeds the enumeration budget {max_total_length}"
        )
    D = _cost(a[None], b[None])[0].tolist()
    best = np.inf
    # iterative DFS over (i, j, partial sum)
    stack = [(0, 0, D[0][0])]
    while stack:
        i, j, total = stack.pop()
        if i == la - 1 and j == lb - 1:
            if total < best:
                best = total
            continue
        if i + 1 < la:
            stack.append((i + 1, j, total + D[i + 1][j]))
        if j + 1 < lb:
            stack.append((i, j + 1, total + D[i][j + 1]))
        if i + 1 < la and j + 1 < lb:
            stack.append((i + 1, j + 1, total + D[i + 1][j + 1]))
    return float(best)


def dtw_paired(A, B, window=None):
    """DTW between corresponding rows of two equal-size batches.

    Parameters
    ----------
    A : ndarray of shape (P, La, M)
    B : ndarray of shape (P, Lb, M)

    Returns
    -------
    ndarray of shape (P,)
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.ndim == 2:
        A = A[:, :, None]
    if B.ndim == 2:
        B = B[:, :, None]
    if A.shape[0] != B.shape[0] or A.shape[2] != B.shape[2]:
        raise ValueError(f"incompatible batches {A.shape} and {B.shape}")
    out = np.empty(A.shape[0])
    step = max(1, _MAX_BATCH_CELLS // (A.shape[1] * B.shape[1] * A.shape[2]))
    for start in range(0, A.shape[0], step):
        sl = slice(start, start + step)
        out[sl] = _accumulate_last(_cost(A[sl], B[sl]), window)
    return out


def dtw_one_to_many(a, B, window=None):
    """DTW from one series to every series of a batch of shape (P, L, M)."""
    a = as_series(a, "a")
    B = np.asarray(B, dtype=np.float64)
    if B.ndim == 2:
        B = B[:, :, None]
    return dtw_paired(np.broadcast_to(a, (B.shape[0],) + a.shape), B, window)


def pairwise_dtw(dataset, label=None, window=None):
    """Symmetric matrix of DTW values between the samples of a dataset.

    Parameters
    ----------
    dataset : Dataset or array-like of shape (N, L[, M])
    label : optional
        Restrict to the samples of this class (rows follow dataset order).

    Returns
    -------
    ndarray of shape (n, n) with a zero diagonal.
    """
    X = dataset.X if hasattr(dataset, "X") else np.asarray(dataset, dtype=np.float64)
    if X.ndim == 2:
        X = X[:, :, None]
    if label is not None:
        X = X[dataset.class_indices(label)]
    n = X.shape[0]
    out = np.zeros((n, n))
    iu, ju = np.triu_indices(n, k=1)
    if iu.size:
        vals = dtw_paired(X[iu], X[ju], window)
        out[iu, ju] = vals
        out[ju, iu] = vals
    return out
