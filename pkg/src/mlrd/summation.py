"""Compensated (Neumaier) accumulation for scalars and numpy arrays.

Series in this package are summed with error-free transformations so the
accumulation error stays O(eps) independent of term count; the dominant
error is then the rounding of the terms themselves, which the callers
track separately via sums of absolute values.
"""

from __future__ import annotations

import numpy as np


def _neumaier_step(s, comp, x):
    t = s + x
    swap = np.abs(s) >= np.abs(x)
    comp = comp + np.where(swap, (s - t) + x, (x - t) + s)
    return t, comp


class CompensatedSum:
    """Neumaier running sum over a float or complex ndarray (or scalar).

    Complex values are compensated componentwise; ``total`` folds the
    carry back in.
    """

    def __init__(self, shape=(), dtype=np.float64):
        self._complex = np.issubdtype(np.dtype(dtype), np.complexfloating)
        if self._complex:
            self._sr = np.zeros(shape)
            self._si = np.zeros(shape)
            self._cr = np.zeros(shape)
            self._ci = np.zeros(shape)
        else:
            self._sr = np.zeros(shape)
            self._cr = np.zeros(shape)

    def add(self, x, where=None):
        x = np.asarray(x)
        if where is not None:
            x = np.where(where, x, 0.0)
        if self._complex:
            xr, xi = np.real(x), np.imag(x)
            self._sr, self._cr = _neumaier_step(self._sr, self._cr, xr)
            self._si, self._ci = _neumaier_step(self._si, self._ci, xi)
        else:
            self._sr, self._cr = _neumaier_step(self._sr, self._cr, x)

    @property
    def total(self):
        if self._complex:
            return (self._sr + self._cr) + 1j * (self._si + self._ci)
        return self._sr + self._cr


def compensated_dot(weights: np.ndarray, values: np.ndarray) -> complex:
    """Neumaier-compensated dot product of two 1-D arrays."""
    acc = CompensatedSum(dtype=np.complex128 if np.iscomplexobj(values) or np.iscomplexobj(weights) else np.float64)
    prod = np.asarray(weights) * np.asarray(values)
    for p in prod:
        acc.add(p)
    t = acc.total
    return t if np.iscomplexobj(prod) else float(np.real(t))
