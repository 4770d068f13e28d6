"""Landau-Zener two-level Hamiltonian and its instantaneous eigenbasis.

Basis ordering is (|e>, |g>) with sigma_z|e> = +|e>.  The Hamiltonian is

    H(t) = v*t*sigma_z + delta*sigma_x = [[v*t, delta], [delta, -v*t]].

Instantaneous eigenvalues are +-eps(t) with eps = sqrt((v*t)^2 + delta^2).
Eigenvectors are kept real with a nonnegative |e> amplitude; the |g>
amplitudes are computed from delta^2/(eps + |v*t|) so that no catastrophic
cancellation occurs for |v*t| >> delta on either side of the crossing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class LzParams:
    """Sweep rate v > 0 and gap parameter delta > 0."""

    v: float
    delta: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.v) and self.v > 0.0):
            raise ConfigError(f"lz.v must be finite and > 0, got {self.v!r}")
        if not (np.isfinite(self.delta) and self.delta > 0.0):
            raise ConfigError(f"lz.delta must be finite and > 0, got {self.delta!r}")


@dataclass(frozen=True)
class InstantSpectrum:
    """Eigensystem of H(t): energies +-eps_plus and real unit eigenvectors."""

    eps_plus: float
    eps_minus: float
    ket_plus: np.ndarray
    ket_minus: np.ndarray


def hamiltonian(t: float, p: LzParams) -> np.ndarray:
    """H(t) as a complex 2x2 array."""
    w = p.v * t
    return np.array([[w, p.delta], [p.delta, -w]], dtype=np.complex128)


def spectrum(t: float, p: LzParams) -> InstantSpectrum:
    """Instantaneous eigenvalues and eigenvectors of H(t).

    ket_plus and ket_minus are real, normalized, mutually orthogonal by
    construction (their Gram product is (delta^2 - q*s)/..., with q*s equal
    to delta^2 up to one rounding), and phase-fixed so the |e> component is
    >= 0.
    """
    w = p.v * t
    eps = float(np.sqrt(w * w + p.delta * p.delta))
    # a = eps + |w| is always well conditioned; b = eps - |w| via delta^2/a.
    a = eps + abs(w)
    b = (p.delta * p.delta) / a
    if w >= 0.0:
        q, s = b, a  # q = eps - w, s = eps + w
    else:
        q, s = a, b
    ket_plus = np.array([p.delta, q], dtype=np.complex128)
    ket_plus /= np.sqrt(2.0 * eps * q)
    ket_minus = np.array([p.delta, -s], dtype=np.complex128)
    ket_minus /= np.sqrt(2.0 * eps * s)
    return InstantSpectrum(eps_plus=eps, eps_minus=-eps, ket_plus=ket_plus, ket_minus=ket_minus)


def eps_plus(t: float, p: LzParams) -> float:
    """Gap eps(t) = sqrt((v t)^2 + delta^2); eigenvalues are +-eps."""
    w = p.v * t
    return float(np.sqrt(w * w + p.delta * p.delta))
