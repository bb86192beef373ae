"""Chebyshev-Lobatto collocation helpers."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def _nodes_and_diff(M):
    j = np.arange(M + 1)
    t = np.cos(np.pi * j / M)
    c = np.ones(M + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** j
    T = t[:, None] - t[None, :]
    D = np.outer(c, 1.0 / c) / (T + np.eye(M + 1))
    D -= np.diag(D.sum(axis=1))
    t.setflags(write=False)
    D.setflags(write=False)
    return t, D


def nodes(M):
    """Lobatto points cos(pi j/M), j = 0..M, ordered from +1 down to -1."""
    return _nodes_and_diff(M)[0]


def diff_matrix(M):
    """First-derivative matrix on ``nodes(M)`` (negative-sum trick on the diagonal)."""
    return _nodes_and_diff(M)[1]


def bary_weights(M):
    w = (-1.0) ** np.arange(M + 1)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


class ChebyshevInterpolant:
    """Polynomial interpolant through values at Lobatto points mapped to [lo, hi]."""

    def __init__(self, lo, hi, values):
        self.lo = float(lo)
        self.hi = float(hi)
        self.values = np.asarray(values, dtype=float)
        self.values.setflags(write=False)
        self.M = len(self.values) - 1
        self._t = nodes(self.M)
        self._w = bary_weights(self.M)

    def _to_t(self, x):
        return (2.0 * np.asarray(x, dtype=float) - (self.lo + self.hi)) / (self.hi - self.lo)

    def __call__(self, x):
        t = np.atleast_1d(self._to_t(x))
        diff = t[:, None] - self._t[None, :]
        exact = diff == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            k = self._w / diff
            out = (k @ self.values) / k.sum(axis=1)
        hit = exact.any(axis=1)
        if hit.any():
            out[hit] = self.values[np.argmax(exact[hit], axis=1)]
        return out if np.ndim(x) else float(out[0])

    def derivative_values(self):
        """d/dx of the interpolant at the nodes."""
        return (2.0 / (self.hi - self.lo)) * (diff_matrix(self.M) @ self.values)

    @property
    def grid(self):
        return 0.5 * (self.lo + self.hi) + 0.5 * (self.hi - self.lo) * self._t
