"""Environment spectral densities and the pure-dephasing rate."""

from __future__ import annotations

import math
from dataclasses import dataclass

# rates below this are reported as an infinite lifetime
GAMMA_FLOOR = 1e-300


@dataclass(frozen=True)
class NoiseModel:
    """1/f plus thermal (dielectric) noise amplitudes, in units of w_q.

    v_f and v_d follow the stated simulation constants; ir_factor is
    sqrt(|ln(omega_ir * tau)|); temp_ratio is w_q / (k_B T_E).
    """

    v_f: float = 9.0e-6
    v_d: float = 3.0e-6
    ir_factor: float = 4.0
    temp_ratio: float = 1.43
    w_q: float = 1.0

    def __post_init__(self):
        vals = (self.v_f, self.v_d, self.ir_factor, self.temp_ratio, self.w_q)
        if not all(math.isfinite(v) and v > 0 for v in vals):
            raise ValueError("noise model fields must be positive and finite")


@dataclass(frozen=True)
class DephasingResult:
    gamma_phi: float
    t_phi: float
    term_dc: float
    term_ac: float


def bose_occupation(freq, model):
    """Bose-Einstein occupation at the environment temperature."""
    if freq <= 0:
        raise ValueError("bose_occupation requires freq > 0")
    x = freq * model.temp_ratio / model.w_q
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def spectral_density(freq, model):
    """Two-sided environment spectral density S_f + S_d.

    S_f = v_f^2 * 2*pi/|freq|. The thermal part uses the detailed-balance
    form: (1+n)*v_d*(freq/2pi)^2 on the emission side (freq > 0) and
    n(|freq|)*v_d*(freq/2pi)^2 on the absorption side (freq < 0), so the
    density stays nonnegative for all frequencies.
    """
    if freq == 0:
        raise ValueError("spectral_density undefined at freq = 0")
    s_f = model.v_f ** 2 * 2.0 * math.pi / abs(freq)
    n = bose_occupation(abs(freq), model)
    occ = 1.0 + n if freq > 0 else n
    s_d = occ * model.v_d * (freq / (2.0 * math.pi)) ** 2
    return s_f + s_d


def dephasing_rate(weights, drive, model):
    """Pure-dephasing rate from the harmonic weights.

    gamma = 2*v_f*ir_factor*|g_0| + sum_{k != 0} 2*|g_k|^2 * S(k*omega),
    with the sum over both signs of k up to the supplied k_max.
    """
    if 0 not in weights:
        raise ValueError("weights must include k = 0")
    term_dc = 2.0 * model.v_f * model.ir_factor * abs(weights[0])
    term_ac = 0.0
    for k, g in weights.items():
        if k == 0:
            continue
        term_ac += 2.0 * g * g * spectral_density(k * drive.omega, model)
    gamma = term_dc + term_ac
    t_phi = math.inf if gamma < GAMMA_FLOOR else 1.0 / gamma
    return DephasingResult(gamma_phi=gamma, t_phi=t_phi,
                           term_dc=term_dc, term_ac=term_ac)
