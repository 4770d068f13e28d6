"""Jump-operator models for the dissipative Landau-Zener problem.

Two families of Lindblad channels are implemented.

Type I couples to the fixed (diabatic) basis: a decay channel
C1 = sqrt(1 + tau) sigma_minus and a thermal excitation channel
C2 = sqrt(tau) sigma_plus, with overall strength gamma folded into the
coupling as lam = sqrt(gamma).  With that convention the lam^2-weighted
rates are exactly gamma*(1 + tau) and gamma*tau.

Type II couples to the instantaneous eigenbasis through the system
operator A = (cos(theta) sigma_z + sin(theta) sigma_x)/2.  Its matrix
elements between instantaneous eigenstates define three channels:
downward A1 = a1 |minus><plus|, upward A2 = a2 |plus><minus| with
a2 = conj(a1), and pure dephasing A3 = a3 |minus><minus| + a3' |plus><plus|.
Rates follow detailed balance at temperature T against an ohmic-like
spectral weight J evaluated at the instantaneous gap 2*eps_plus:

    gamma1 = 2*pi*J*(n + 1),   gamma2 = 2*pi*J*n,   gamma3 = 2*pi*T,

with n the Bose occupation at 2*eps_plus.  J = 2*eps_plus *
exp(sign * 2*eps_plus / omega_c); the exponential cutoff sign is
configurable and +1 by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lzmodel
from .errors import ConfigError
from .numerics import SIGMA_MINUS, SIGMA_PLUS, SIGMA_X, SIGMA_Z, dagger, outer

# exp() overflows just above exp(709); stay clear of it.
_EXP_GUARD = 700.0


@dataclass(frozen=True)
class TypeIParams:
    """Fixed-basis decay/excitation channels with strength gamma >= 0.

    tau >= 0 scales thermal excitation: rates are gamma*(1+tau) down and
    gamma*tau up.  The coupling reported as lam is sqrt(gamma).
    """

    gamma: float
    tau: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and self.gamma >= 0.0):
            raise ConfigError(f"type1.gamma must be finite and >= 0, got {self.gamma!r}")
        if not (np.isfinite(self.tau) and self.tau >= 0.0):
            raise ConfigError(f"type1.tau must be finite and >= 0, got {self.tau!r}")

    @property
    def lam(self) -> float:
        return math.sqrt(self.gamma)


@dataclass(frozen=True)
class TypeIIParams:
    """Instantaneous-eigenbasis channels.

    lam is the overall coupling, theta the mixing angle of the system
    operator, temperature the bath temperature (>= 0), omega_c the cutoff
    frequency of the spectral weight and spectral_sign the sign of its
    exponent (+1 or -1).
    """

    lam: float = 1.0
    theta: float = 0.0
    temperature: float = 0.0
    omega_c: float = 20.0
    spectral_sign: int = 1

    def __post_init__(self):
        if not (np.isfinite(self.lam) and self.lam >= 0.0):
            raise ConfigError(f"type2.lambda must be finite and >= 0, got {self.lam!r}")
        if not np.isfinite(self.theta):
            raise ConfigError(f"type2.theta must be finite, got {self.theta!r}")
        if not (np.isfinite(self.temperature) and self.temperature >= 0.0):
            raise ConfigError(f"type2.temperature must be finite and >= 0, got {self.temperature!r}")
        if not (np.isfinite(self.omega_c) and self.omega_c > 0.0):
            raise ConfigError(f"type2.omega_c must be finite and > 0, got {self.omega_c!r}")
        if self.spectral_sign not in (1, -1):
            raise ConfigError(f"type2.spectral_sign must be +1 or -1, got {self.spectral_sign!r}")


ModelParams = TypeIParams | TypeIIParams


@dataclass(frozen=True)
class JumpSet:
    """Jump operators C_m (fixed length per model) and the coupling lam.

    Rates enter the dynamics only through lam^2 * C_m^dagger C_m; the
    operators themselves carry the sqrt of the channel rates.
    """

    ops: tuple[np.ndarray, ...]
    lam: float


def type1_jump_set(p: TypeIParams) -> JumpSet:
    """Channels (sqrt(1+tau) sigma_minus, sqrt(tau) sigma_plus)."""
    c_down = math.sqrt(1.0 + p.tau) * SIGMA_MINUS
    c_up = math.sqrt(p.tau) * SIGMA_PLUS
    return JumpSet(ops=(c_down, c_up), lam=p.lam)


def coupling_matrix(theta: float) -> np.ndarray:
    """System-bath coupling A = (cos(theta) sigma_z + sin(theta) sigma_x)/2."""
    return 0.5 * (math.cos(theta) * SIGMA_Z + math.sin(theta) * SIGMA_X)


def eigenbasis_coefficients(t: float, theta: float, lz: lzmodel.LzParams) -> tuple[complex, complex, complex]:
    """Matrix elements (a1, a3, a3p) of A in the instantaneous eigenbasis.

    a1 = <minus|A|plus> drives downward jumps (its conjugate drives upward
    ones), a3 = <minus|A|minus> and a3p = <plus|A|plus> make up the
    dephasing channel.  With the real phase convention of lzmodel.spectrum
    all three are real; |a1| <= 1/2 always.
    """
    spec = lzmodel.spectrum(t, lz)
    a = coupling_matrix(theta)
    km, kp = spec.ket_minus, spec.ket_plus
    a1 = complex(np.vdot(km, a @ kp))
    a3 = complex(np.vdot(km, a @ km))
    a3p = complex(np.vdot(kp, a @ kp))
    return a1, a3, a3p


def bose_occupation(eps_plus: float, temperature: float) -> float:
    """Bose occupation n at the gap 2*eps_plus; exactly 0 at T = 0."""
    if temperature == 0.0:
        return 0.0
    x = 2.0 * eps_plus / temperature
    if x > _EXP_GUARD:
        return 0.0
    return 1.0 / math.expm1(x)


def spectral_density(eps_plus: float, omega_c: float, sign: int = 1) -> float:
    """Spectral weight J = 2*eps_plus * exp(sign * 2*eps_plus / omega_c)."""
    x = sign * 2.0 * eps_plus / omega_c
    if x > _EXP_GUARD:
        raise ConfigError(
            f"spectral weight overflow: exponent {x:.3g} at eps_plus={eps_plus:.6g} "
            f"(omega_c={omega_c:g}, sign={sign:+d}); reduce the window or raise omega_c"
        )
    return 2.0 * eps_plus * math.exp(x)


def type2_rates(eps_plus: float, p: TypeIIParams) -> tuple[float, float, float]:
    """(gamma1, gamma2, gamma3): down, up, dephasing rates at gap 2*eps_plus."""
    n = bose_occupation(eps_plus, p.temperature)
    j = spectral_density(eps_plus, p.omega_c, p.spectral_sign)
    return 2.0 * math.pi * j * (n + 1.0), 2.0 * math.pi * j * n, 2.0 * math.pi * p.temperature


def type2_jump_set(t: float, p: TypeIIParams, lz: lzmodel.LzParams) -> JumpSet:
    """Three instantaneous-eigenbasis channels at time t.

    At T = 0 the upward channel and the dephasing channel vanish
    identically (gamma2 = gamma3 = 0) and their operators are exact zero
    matrices, but the channel count stays 3.
    """
    spec = lzmodel.spectrum(t, lz)
    a1, a3, a3p = eigenbasis_coefficients(t, p.theta, lz)
    g1, g2, g3 = type2_rates(spec.eps_plus, p)
    km, kp = spec.ket_minus, spec.ket_plus
    c1 = math.sqrt(g1) * a1 * outer(km, kp)
    c2 = math.sqrt(g2) * np.conj(a1) * outer(kp, km)
    c3 = math.sqrt(g3) * (a3 * outer(km, km) + a3p * outer(kp, kp))
    return JumpSet(ops=(c1, c2, c3), lam=p.lam)


def jump_set(model: ModelParams, lz: lzmodel.LzParams, t: float) -> JumpSet:
    """Jump operators of either model at time t."""
    if isinstance(model, TypeIParams):
        return type1_jump_set(model)
    if isinstance(model, TypeIIParams):
        return type2_jump_set(t, model, lz)
    raise TypeError(f"unknown model params: {type(model).__name__}")


def channel_count(model: ModelParams) -> int:
    """Number of jump channels (2 for Type I, 3 for Type II)."""
    return 2 if isinstance(model, TypeIParams) else 3


def dissipator(model: ModelParams, lz: lzmodel.LzParams, t: float, rho: np.ndarray) -> np.ndarray:
    """Lindblad dissipator lam^2 * sum_m (C rho C^+ - {C^+ C, rho}/2)."""
    js = jump_set(model, lz, t)
    lam2 = js.lam * js.lam
    out = np.zeros((2, 2), dtype=np.complex128)
    for c in js.ops:
        cd = dagger(c)
        ctc = cd @ c
        out += c @ rho @ cd - 0.5 * (ctc @ rho + rho @ ctc)
    return lam2 * out
