"""Brute-force certification of the continuum moment formulas.

The bath is replaced by N explicit oscillators sampling the Drude-Ohmic
spectral density J(u) = M gamma u wD^2/(u^2 + wD^2). The coupled quadratic
Hamiltonian is diagonalized exactly and the reduced moments of the system
oscillator are assembled from the normal-mode thermal variances. Nothing here
shares code with :mod:`clausius_lab.bath`, which is the point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .errors import NumericalFailure
from .gaussian import Constants, Moments, OscillatorParams
from .bath import BathSpec

_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class DiscreteBath:
    """Explicit bath modes: ascending frequencies and bilinear couplings."""

    mode_frequencies: np.ndarray
    couplings: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.mode_frequencies, dtype=float)
        c = np.asarray(self.couplings, dtype=float)
        if w.ndim != 1 or w.shape != c.shape or w.size < 1:
            raise ValueError("mode_frequencies and couplings must be equal-length 1-D arrays")
        if np.any(w <= 0):
            raise ValueError("all mode frequencies must be strictly positive")
        if np.any(np.diff(w) <= 0):
            raise ValueError("mode frequencies must be strictly ascending")
        object.__setattr__(self, "mode_frequencies", w)
        object.__setattr__(self, "couplings", c)

    @property
    def mode_count(self) -> int:
        return self.mode_frequencies.size


def spectral_density(u, o: OscillatorParams, b: BathSpec):
    """Drude-Ohmic J(u) = M gamma u wD^2/(u^2 + wD^2)."""
    return o.mass * b.damping * u * b.cutoff**2 / (u**2 + b.cutoff**2)


def sample_bath(
    b: BathSpec,
    o: OscillatorParams,
    mode_count: int,
    omega_max: float,
) -> DiscreteBath:
    """Linear frequency grid on (0, omega_max]; unit bath masses.

    c_k^2 = (2/pi) w_k J(w_k) dw reproduces J in the dense-grid limit; the
    matching positive counter-term is applied when the stiffness matrix is
    assembled, so the bare oscillator frequency keeps its meaning at every
    coupling strength.
    """
    if mode_count < 1:
        raise ValueError(f"mode_count must be >= 1, got {mode_count}")
    if omega_max <= 0:
        raise ValueError(f"omega_max must be positive, got {omega_max}")
    dw = omega_max / mode_count
    wk = dw * np.arange(1, mode_count + 1)
    c_sq = (2.0 / np.pi) * wk * spectral_density(wk, o, b) * dw
    return DiscreteBath(mode_frequencies=wk, couplings=np.sqrt(c_sq))


def default_omega_max(o: OscillatorParams, b: BathSpec) -> float:
    # Drude tail beyond 20x the cutoff contributes negligibly to f2.
    return 20.0 * max(b.cutoff, o.frequency)


def reduced_moments_exact(
    db: DiscreteBath,
    o: OscillatorParams,
    temperature: float,
    c: Constants = Constants(),
) -> Moments:
    """Reduced oscillator moments in the global Gibbs state of the N+1 modes.

    Mass-weighted normal modes: each contributes its exact quantum thermal
    variance, transformed back to the system coordinate. The symmetrized
    cross-correlation of every normal mode vanishes in equilibrium, so the
    reduced cross term is an exact zero.
    """
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    n = db.mode_count
    wk = db.mode_frequencies
    c_sq = db.couplings**2

    stiffness = np.zeros((n + 1, n + 1))
    stiffness[0, 0] = (o.mass * o.frequency**2 + np.sum(c_sq / wk**2)) / o.mass
    stiffness[0, 1:] = stiffness[1:, 0] = -db.couplings / np.sqrt(o.mass)
    idx = np.arange(1, n + 1)
    stiffness[idx, idx] = wk**2

    try:
        eigvals, eigvecs = eigh(stiffness)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("eigen-decomposition of the bath stiffness failed") from exc
    if eigvals[0] <= 0:
        raise NumericalFailure(
            "non-positive normal-mode eigenvalue; counter-term is broken",
            smallest_eigenvalue=float(eigvals[0]),
        )
    residual = stiffness @ eigvecs - eigvecs * eigvals
    norm = float(np.max(np.abs(eigvals)))
    worst = float(np.max(np.linalg.norm(residual, axis=0)))
    if worst > _RESIDUAL_TOL * norm:
        raise NumericalFailure(
            "eigenvector residual above tolerance",
            residual=worst,
            matrix_norm=norm,
        )

    omega_modes = np.sqrt(eigvals)
    coth = 1.0 / np.tanh(c.hbar * omega_modes / (2 * c.kB * temperature))
    weight = eigvecs[0] ** 2
    f1 = float(np.sum(weight * c.hbar / (2 * omega_modes) * coth)) / o.mass
    f2 = o.mass * float(np.sum(weight * c.hbar * omega_modes / 2 * coth))
    return Moments(f1=f1, f2=f2, cross=0.0)


@dataclass(frozen=True)
class ConvergenceRow:
    mode_count: int
    f1: float
    f2: float
    delta_f1: float | None
    delta_f2: float | None


def convergence_report(
    o: OscillatorParams,
    b: BathSpec,
    temperature: float,
    mode_counts: list[int],
    c: Constants = Constants(),
    omega_max: float | None = None,
    converged_tol: float = 0.005,
) -> tuple[list[ConvergenceRow], bool]:
    """Reduced moments for a ladder of mode counts with successive deltas.

    Returns the rows and a flag set when the final successive relative change
    is below ``converged_tol``.
    """
    if list(mode_counts) != sorted(mode_counts):
        raise ValueError("mode_counts must be ascending")
    omax = omega_max if omega_max is not None else default_omega_max(o, b)
    rows: list[ConvergenceRow] = []
    prev: Moments | None = None
    for count in mode_counts:
        m = reduced_moments_exact(sample_bath(b, o, count, omax), o, temperature, c)
        if prev is None:
            rows.append(ConvergenceRow(count, m.f1, m.f2, None, None))
        else:
            rows.append(
                ConvergenceRow(
                    count,
                    m.f1,
                    m.f2,
                    abs(m.f1 - prev.f1) / prev.f1,
                    abs(m.f2 - prev.f2) / prev.f2,
                )
            )
        prev = m
    converged = bool(rows) and rows[-1].delta_f1 is not None and (
        max(rows[-1].delta_f1, rows[-1].delta_f2) < converged_tol
    )
    return rows, converged
