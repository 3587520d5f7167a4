"""Closed-form predictions: Bessel machinery, the multimode gap and its bias
sensitivity, the optimal base frequency, and the RWA/GVV resonance theory."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

BESSEL_X_MAX = 100.0
BESSEL_ORDER_MAX = 200
# series / backward-recurrence crossover; policy bounded by the 1e-10 contract
SERIES_X_MAX = 2.0


class NearSingularityError(ArithmeticError):
    """A retained perturbative denominator is numerically singular."""


class PerturbativeRegimeError(ArithmeticError):
    """The GVV radicand went negative; the perturbative form is invalid."""


class FixedPointError(RuntimeError):
    """The optimal-frequency iteration failed to converge."""


def bessel_j(order, x):
    """Integer-order Bessel function of the first kind.

    Power series for small |x|, Miller backward recurrence with the
    J_0 + 2*sum J_2k = 1 normalization otherwise. Relative accuracy 1e-10
    (absolute 1e-14 near zeros) on |x| <= 100, |order| <= 200.
    """
    n = int(order)
    if n != order:
        raise ValueError("order must be an integer")
    if abs(x) > BESSEL_X_MAX:
        raise ValueError(f"|x| must be <= {BESSEL_X_MAX}")
    if abs(n) > BESSEL_ORDER_MAX:
        raise ValueError(f"|order| must be <= {BESSEL_ORDER_MAX}")
    sign = 1.0
    if n < 0:
        n = -n
        if n % 2:
            sign = -sign
    if x < 0:
        x = -x
        if n % 2:
            sign = -sign
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x <= SERIES_X_MAX:
        return sign * _bessel_series(n, x)
    return sign * _bessel_miller(n, x)


def _bessel_series(n, x):
    half = 0.5 * x
    log_lead = n * math.log(half) - math.lgamma(n + 1) if n else 0.0
    if log_lead < -745.0:  # leading term underflows; J_n is zero to 1e-14
        return 0.0
    term = math.exp(log_lead)
    total = term
    k = 0
    while True:
        k += 1
        term *= -(half * half) / (k * (n + k))
        total += term
        if abs(term) < 1e-18 * max(abs(total), 1e-30):
            return total


def _bessel_miller(n, x):
    start = max(n, int(x)) + 16 + int(2.0 * math.sqrt(40.0 * max(n, x)))
    if start % 2:
        start += 1
    fk1 = 0.0  # f_{k+1}
    fk = 1e-30  # f_k
    norm = 0.0
    target = 0.0
    for k in range(start, 0, -1):
        fk_1 = (2.0 * k / x) * fk - fk1
        fk1, fk = fk, fk_1
        if k - 1 == n:
            target = fk
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * fk
        if abs(fk) > 1e250:
            fk *= 1e-250
            fk1 *= 1e-250
            norm *= 1e-250
            target *= 1e-250
    norm += fk
    return target / norm


@dataclass(frozen=True)
class MultimodeParams:
    """Bessel factors and the characteristic energy of the multimode gap."""

    theta: float
    j_tilde_01: float
    j_tilde_02: float
    j_tilde_11: float
    j_tilde_12: float


def bessel_arguments(drive):
    """Arguments of the two tone Bessel factors, amplitude/(N*omega)."""
    return (drive.omega_1 / (drive.n1 * drive.omega),
            drive.omega_2 / (drive.n2 * drive.omega))


def multimode_params(drive):
    x1, x2 = bessel_arguments(drive)
    j01 = bessel_j(0, x1)
    j02 = bessel_j(0, x2)
    j11 = bessel_j(1, x1)
    j12 = bessel_j(1, x2)
    th = math.sqrt(drive.b ** 2 + (drive.w_q * j01 * j02) ** 2)
    return MultimodeParams(theta=th, j_tilde_01=j01, j_tilde_02=j02,
                           j_tilde_11=j11, j_tilde_12=j12)


def theta(drive):
    """Characteristic energy sqrt(b^2 + (w_q*J0*J0)^2)."""
    return multimode_params(drive).theta


def multimode_in_regime(drive):
    """Intended validity window of the multimode gap formula."""
    return drive.omega >= drive.w_q and drive.nu < math.pi / 4


def gap_multimode(drive):
    """Multimode quasienergy gap sqrt((omega-Theta)^2 + (w_q*J1*J1)^2)."""
    p = multimode_params(drive)
    coupling = drive.w_q * p.j_tilde_11 * p.j_tilde_12
    return math.hypot(drive.omega - p.theta, coupling)


def gap_multimode_branch(drive):
    """Alternate branch form omega - sqrt(same radicand)."""
    p = multimode_params(drive)
    coupling = drive.w_q * p.j_tilde_11 * p.j_tilde_12
    rad = (p.theta ** 2 + drive.omega ** 2 + coupling ** 2
           - 2.0 * p.theta * drive.omega)
    return drive.omega - math.sqrt(rad)


def bias_sensitivity_multimode(drive):
    """d(gap)/db = b*(omega/Theta - 1)/gap of the multimode form."""
    gap = gap_multimode(drive)
    if gap == 0.0:
        raise ZeroDivisionError("multimode gap vanishes; sensitivity has a pole")
    th = theta(drive)
    return drive.b * (drive.omega / th - 1.0) / gap


def optimal_base_frequency(drive, tol=1e-10, max_iter=200):
    """Solve the implicit sweet-spot condition omega* = Theta(omega*).

    Fixed-point iteration from sqrt(b^2 + w_q^2); a 0.5 damping factor is
    applied when the iteration oscillates. Returns (omega_star, residual).
    """
    om = math.sqrt(drive.b ** 2 + drive.w_q ** 2)
    # Below this the Bessel arguments blow up and no physical fixed point
    # exists anyway (Theta >= |b| while omega -> 0).
    om_floor = drive.big_omega / (BESSEL_X_MAX * min(drive.n1, drive.n2))
    prev_step = 0.0
    damped = False
    for _ in range(max_iter):
        if om <= om_floor:
            raise FixedPointError(
                f"omega* iteration collapsed toward zero; last iterate {om!r}")
        target = theta(replace(drive, omega=om))
        step = target - om
        if abs(step) < tol * drive.w_q:
            return target, abs(theta(replace(drive, omega=target)) - target)
        if prev_step * step < 0:
            damped = True
        om = om + (0.5 * step if damped else step)
        prev_step = step
    raise FixedPointError(
        f"omega* iteration did not converge; last iterate {om!r}")


@dataclass(frozen=True)
class ResonanceIndex:
    """Multiphoton resonance label: b = k*omega + delta with k = m*n1 + l*n2."""

    m: int
    l: int
    k: int
    delta: float

    @classmethod
    def from_drive(cls, drive, m, l):
        k = m * drive.n1 + l * drive.n2
        delta = drive.b - k * drive.omega
        if abs(delta) > 0.1 * drive.omega:
            warnings.warn("detuning exceeds 0.1*omega; GVV validity is marginal",
                          stacklevel=2)
        return cls(m=m, l=l, k=k, delta=delta)


def rwa_gap(drive, res):
    """Rotating-wave 2x2 Hamiltonian and its gap near the resonance."""
    x1, x2 = bessel_arguments(drive)
    coupling = drive.w_q * bessel_j(-res.m, x1) * bessel_j(-res.l, x2)
    h = np.array([
        [-drive.b / 2.0, -coupling / 2.0],
        [-coupling / 2.0, drive.b / 2.0 - res.k * drive.omega],
    ])
    return h, math.hypot(res.delta, coupling)


@dataclass(frozen=True)
class StarkShift:
    chi: float
    j_max: int
    excluded_terms: tuple


def stark_shift_chi(drive, res, j_max=40):
    """Second-order AC Stark shift of the resonance.

    chi = -(w_q^2/4) * sum over (j, p) of J_j^2 * J_p^2 / (b + (j*n1+p*n2)*omega),
    excluding every pair on the quasi-degenerate shell j*n1 + p*n2 = -k.
    """
    if j_max < 10:
        raise ValueError("j_max must be at least 10")
    x1, x2 = bessel_arguments(drive)
    idx = np.arange(-j_max, j_max + 1)
    jsq1 = np.array([bessel_j(j, x1) ** 2 for j in idx])
    jsq2 = np.array([bessel_j(p, x2) ** 2 for p in idx])
    harmonics = idx[:, None] * drive.n1 + idx[None, :] * drive.n2
    denom = drive.b + harmonics * drive.omega
    keep = harmonics != -res.k
    bad = keep & (np.abs(denom) < 1e-8 * drive.omega)
    if np.any(bad):
        j_bad, p_bad = np.argwhere(bad)[0]
        raise NearSingularityError(
            f"retained denominator near zero at (j, p) = "
            f"({idx[j_bad]}, {idx[p_bad]})")
    num = np.outer(jsq1, jsq2)
    chi = -(drive.w_q ** 2 / 4.0) * float(np.sum(num[keep] / denom[keep]))
    excluded = tuple((int(idx[j]), int(idx[p]))
                     for j, p in np.argwhere(~keep))
    return StarkShift(chi=chi, j_max=j_max, excluded_terms=excluded)


def gvv_gap(drive, res, chi):
    """GVV gap sqrt(rwa_gap^2 + 4*chi*delta + 4*chi^2)."""
    _, gap_rwa = rwa_gap(drive, res)
    rad = gap_rwa ** 2 + 4.0 * chi * res.delta + 4.0 * chi ** 2
    if rad < 0:
        raise PerturbativeRegimeError(
            f"negative GVV radicand {rad!r}; perturbative regime invalid")
    return math.sqrt(rad)


def gvv_bias_sensitivity(drive, res, chi, mode="full", h=1e-6):
    """DC bias sensitivity of the GVV gap.

    mode="full" uses (delta + 2*chi)*(1 + 2*dchi/db)/gap with dchi/db by
    central finite difference; mode="fast-drive" drops the dchi/db factor.
    """
    gap = gvv_gap(drive, res, chi)
    if gap == 0.0:
        raise ZeroDivisionError("GVV gap vanishes; sensitivity has a pole")
    if mode == "fast-drive":
        return (res.delta + 2.0 * chi) / gap
    if mode != "full":
        raise ValueError("mode must be 'full' or 'fast-drive'")
    dchi = (_chi_at_bias(drive, res, drive.b + h)
            - _chi_at_bias(drive, res, drive.b - h)) / (2.0 * h)
    return (res.delta + 2.0 * chi) * (1.0 + 2.0 * dchi) / gap


def _chi_at_bias(drive, res, b):
    d = replace(drive, b=b)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        r = ResonanceIndex.from_drive(d, res.m, res.l)
    return stark_shift_chi(d, r).chi
