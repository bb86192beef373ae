"""Reduced state of Rob's cavity and its von Neumann entropy.

After post-selection the joint cavity state is pure, and tracing out Alice
leaves

    rho_R = P0 |0><0| + f f^dagger,   P0 = sum |F^A|^2,  f = vec(F^R),

normalized by P0 + |f|^2. The excitation block is rank one, so the spectrum
is {p, 1 - p, 0, ...} with p = P0 / tr and the entropy is the binary entropy
of p. Both the full diagonalization and the closed form are provided; each
serves as the other's oracle. Entropies are in bits.
"""

from dataclasses import dataclass
import math

import numpy as np

from .interaction import AmplitudeSet

DEGENERATE_FLOOR = 1e-30
DEFAULT_TRUNC_TOL = 1e-6
DEFAULT_MAX_N = 30


class DegenerateStateError(ValueError):
    """Every amplitude is below 1e-30: the atom did not interact."""


class TruncationNotConverged(RuntimeError):
    """The truncation scan reached its cap without meeting the tolerance.

    ``amplitudes`` holds the largest set computed, ``history`` the
    (N, entropy, tail_fraction) triples seen along the way.
    """

    def __init__(self, message, amplitudes, history):
        super().__init__(message)
        self.amplitudes = amplitudes
        self.history = history


@dataclass(frozen=True)
class ReducedState:
    p0_raw: float
    f_vec: np.ndarray
    trace_raw: float

    @property
    def p(self):
        return self.p0_raw / self.trace_raw

    def density_matrix(self):
        """Normalized (N^2 + 1)-dimensional matrix; index 0 is the vacuum."""
        d = self.f_vec.size + 1
        rho = np.zeros((d, d), dtype=complex)
        rho[0, 0] = self.p0_raw
        rho[1:, 1:] = np.outer(self.f_vec, self.f_vec.conj())
        return rho / self.trace_raw


@dataclass(frozen=True)
class EntanglementResult:
    p: float
    entropy: float
    N: int
    converged: bool


def assemble(amps):
    """Build the unnormalized reduced state from an amplitude set.

    F^R is flattened row-major, i.e. (F_11, ..., F_1N, F_21, ..., F_NN).
    """
    FA = np.asarray(amps.F_A)
    FR = np.asarray(amps.F_R)
    peak = max(np.abs(FA).max(initial=0.0), np.abs(FR).max(initial=0.0))
    if not peak >= DEGENERATE_FLOOR:
        raise DegenerateStateError(
            f"all amplitudes are below {DEGENERATE_FLOOR:g} (largest {peak:.3g})")
    p0 = float(np.sum(np.abs(FA) ** 2))
    f = FR.ravel().astype(complex)
    f.setflags(write=False)
    return ReducedState(p0, f, p0 + float(np.vdot(f, f).real))


def _bits(lam):
    lam = lam[lam > 0.0]
    return float(-np.sum(lam * np.log2(lam)))


def binary_entropy(p):
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def entropy_eig(state, N=None, converged=False):
    """Entropy from the eigenvalues of the full normalized matrix."""
    try:
        lam = np.linalg.eigvalsh(state.density_matrix())
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigenvalue solver failed: {exc}") from exc
    S = min(max(_bits(lam), 0.0), 1.0)
    if N is None:
        N = math.isqrt(state.f_vec.size)
    return EntanglementResult(state.p, S, N, converged)


def entropy_closed(state):
    """Binary entropy of the vacuum weight, exploiting the rank-1 block."""
    return binary_entropy(state.p)


def entropy_of(amps):
    state = assemble(amps)
    return EntanglementResult(state.p, entropy_closed(state), amps.N, amps.converged)


def truncation_scan(builder, tol=DEFAULT_TRUNC_TOL, max_N=DEFAULT_MAX_N, start=1):
    """Grow the truncation until the next shell no longer matters.

    ``builder(N)`` must return an AmplitudeSet of order N. The scan returns
    the first set of order N for which going to N + 1 changes the entropy by
    less than ``tol`` and the new shell carries less than ``tol`` of the
    total weight; that shell fraction is stored as ``tail_fraction``.

    Raises
    ------
    TruncationNotConverged
        If no such N <= ``max_N`` exists.
    """
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    history = []
    prev = builder(start)
    s_prev = entropy_closed(assemble(prev))
    for N in range(start + 1, max_N + 1):
        cur = builder(N)
        s_cur = entropy_closed(assemble(cur))
        total = cur.total_weight()
        tail = cur.shell_weight(N) / total if total > 0 else 0.0
        history.append((N, s_cur, tail))
        if abs(s_cur - s_prev) < tol and tail < tol:
            prev.converged = True
            prev.tail_fraction = tail
            return prev
        prev, s_prev = cur, s_cur
    prev.tail_fraction = history[-1][2] if history else math.nan
    raise TruncationNotConverged(
        f"truncation did not converge by N = {max_N} (last shell fraction "
        f"{prev.tail_fraction:.3g}, tolerance {tol:g})", prev, history)


__all__ = ["AmplitudeSet", "ReducedState", "EntanglementResult", "DegenerateStateError",
           "TruncationNotConverged", "assemble", "entropy_eig", "entropy_closed",
           "entropy_of", "binary_entropy", "truncation_scan"]
