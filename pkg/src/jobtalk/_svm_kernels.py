"""Hinge-loss objective/subgradient kernels over CSR data.

Two call-compatible implementations: a numba-jitted loop and a vectorized
numpy fallback, selected via jobtalk._accel.
"""

import numpy as np

from ._accel import njit_or_fallback


def _obj_grad_numpy(indptr, indices, data, y, cw, w, b, C):
    n = len(indptr) - 1
    row_ids = np.repeat(np.arange(n), np.diff(indptr))
    scores = (
        np.bincount(row_ids, weights=data * w[indices], minlength=n) + b
    )
    margins = y * scores
    hinge = np.maximum(0.0, 1.0 - margins)
    obj = 0.5 * float(w @ w) + C * float(np.sum(cw * hinge))
    coef = np.where(margins < 1.0, -C * cw * y, 0.0)
    grad_w = w + np.bincount(
        indices, weights=data * coef[row_ids], minlength=len(w)
    )
    grad_b = float(np.sum(coef))
    return obj, grad_w, grad_b


@njit_or_fallback(_obj_grad_numpy)
def obj_grad(indptr, indices, data, y, cw, w, b, C):
    n = len(indptr) - 1
    grad_w = w.copy()
    grad_b = 0.0
    hinge_sum = 0.0
    for i in range(n):
        score = b
        for k in range(indptr[i], indptr[i + 1]):
            score += data[k] * w[indices[k]]
        margin = y[i] * score
        if margin < 1.0:
            hinge_sum += cw[i] * (1.0 - margin)
            coef = -C * cw[i] * y[i]
            for k in range(indptr[i], indptr[i + 1]):
                grad_w[indices[k]] += data[k] * coef
            grad_b += coef
    obj = 0.5 * np.dot(w, w) + C * hinge_sum
    return obj, grad_w, grad_b


def _decision_numpy(indptr, indices, data, w, b):
    n = len(indptr) - 1
    row_ids = np.repeat(np.arange(n), np.diff(indptr))
    return np.bincount(row_ids, weights=data * w[indices], minlength=n) + b


@njit_or_fallback(_decision_numpy)
def decision_values(indptr, indices, data, w, b):
    n = len(indptr) - 1
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        score = b
        for k in range(indptr[i], indptr[i + 1]):
            score += data[k] * w[indices[k]]
        out[i] = score
    return out
