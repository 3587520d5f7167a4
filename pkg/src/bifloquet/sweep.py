"""Parameter-space exploration: 1D lines, 2D (b, nu) grids, sweet/sour-spot
classification, and the fast-drive resonance scans."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .analytic import (
    FixedPointError,
    PerturbativeRegimeError,
    ResonanceIndex,
    gvv_gap,
    optimal_base_frequency,
    rwa_gap,
    stark_shift_chi,
)
from .floquet import (
    DriveConfig,
    ModeTrackingError,
    default_truncation,
    folded_gap_magnitude,
    fourier_weights,
    quasienergy_gap,
    solve_floquet,
)
from .noise import dephasing_rate
from .sensitivity import gap_sensitivity_amplitude, gap_sensitivity_bias


@dataclass(frozen=True)
class GridSpec:
    """Rectangular (b, nu) grid over a drive template.

    omega_policy is either "fixed" (template.omega everywhere) or "optimal"
    (per-point omega* = Theta fixed point).
    """

    template: DriveConfig
    b_range: tuple  # (min, max, count)
    nu_range: tuple  # (min, max, count)
    omega_policy: str = "fixed"

    def __post_init__(self):
        for lo, hi, count in (self.b_range, self.nu_range):
            if count < 2:
                raise ValueError("grid counts must be >= 2")
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError("grid range must be finite with min < max")
        if self.omega_policy not in ("fixed", "optimal"):
            raise ValueError("omega_policy must be 'fixed' or 'optimal'")

    @property
    def b_values(self):
        return np.linspace(*self.b_range)

    @property
    def nu_values(self):
        return np.linspace(*self.nu_range)


@dataclass
class PointResult:
    gap: float
    dgap_db: float
    dgap_domega: float
    gamma_phi: float
    t_phi: float
    omega_star: float
    flags: str
    spectrum: object = None


@dataclass
class SweepResult:
    b_values: np.ndarray
    nu_values: np.ndarray
    omega: np.ndarray  # per-point base frequency actually used
    gap: np.ndarray
    dgap_db: np.ndarray
    dgap_domega: np.ndarray
    gamma_phi: np.ndarray
    t_phi: np.ndarray
    omega_star: np.ndarray
    flags: list  # nested list of flag strings, [nu_index][b_index]


@dataclass
class SweetSpotReport:
    dc_sweet: list
    doubly_sweet: list
    sour: list


def evaluate_point(drive, trunc, noise, previous=None):
    """Gap, both sensitivities, and the dephasing lifetime at one drive point."""
    flags = []
    try:
        spec = solve_floquet(drive, trunc, previous=previous)
    except ModeTrackingError:
        flags.append("tracking_warn")
        spec = solve_floquet(drive, trunc)
    if spec.degenerate:
        flags.append("degenerate")
    gap = quasienergy_gap(spec)
    weights = fourier_weights(spec, trunc.k_max)
    deph = dephasing_rate(weights, drive, noise)
    try:
        dgdb = gap_sensitivity_bias(drive, trunc, center=spec).value
    except ModeTrackingError:
        flags.append("tracking_warn")
        dgdb = math.nan
    try:
        dgdo = gap_sensitivity_amplitude(drive, trunc, center=spec).value
    except ModeTrackingError:
        if "tracking_warn" not in flags:
            flags.append("tracking_warn")
        dgdo = math.nan
    return PointResult(
        gap=gap, dgap_db=dgdb, dgap_domega=dgdo,
        gamma_phi=deph.gamma_phi, t_phi=deph.t_phi,
        omega_star=math.nan, flags=";".join(flags), spectrum=spec)


def _row_truncation(template, b_values, omegas):
    worst = replace(template, b=float(np.max(np.abs(b_values))),
                    omega=float(np.min(omegas)))
    return default_truncation(worst)


def _compute_row(args):
    """One fixed-nu row, warm-started along ascending b. Pure; safe to fork."""
    spec_grid, noise, j = args
    nu = float(spec_grid.nu_values[j])
    b_values = spec_grid.b_values
    template = replace(spec_grid.template, nu=nu)
    star_failed = np.zeros(b_values.shape, dtype=bool)
    if spec_grid.omega_policy == "optimal":
        omegas = np.empty(b_values.shape)
        for i, b in enumerate(b_values):
            try:
                omegas[i] = optimal_base_frequency(replace(template, b=float(b)))[0]
            except FixedPointError:
                omegas[i] = template.omega
                star_failed[i] = True
    else:
        omegas = np.full(b_values.shape, template.omega)
    trunc = _row_truncation(template, b_values, omegas)
    row = []
    previous = None
    for i, (b, om) in enumerate(zip(b_values, omegas)):
        drive = replace(template, b=float(b), omega=float(om))
        point = evaluate_point(drive, trunc, noise, previous=previous)
        if star_failed[i]:
            point.flags = ";".join(
                [f for f in (point.flags, "omega_star_failed") if f])
        elif spec_grid.omega_policy == "optimal":
            point.omega_star = float(om)
        previous = point.spectrum
        point.spectrum = None  # keep rows light for IPC
        row.append(point)
    return j, omegas, row


def sweep_grid(spec, noise, workers=1):
    """Evaluate the full grid; rows (fixed nu) are the parallelism unit."""
    nb = len(spec.b_values)
    nn = len(spec.nu_values)
    shape = (nn, nb)
    out = SweepResult(
        b_values=spec.b_values, nu_values=spec.nu_values,
        omega=np.empty(shape), gap=np.empty(shape),
        dgap_db=np.empty(shape), dgap_domega=np.empty(shape),
        gamma_phi=np.empty(shape), t_phi=np.empty(shape),
        omega_star=np.full(shape, math.nan),
        flags=[[""] * nb for _ in range(nn)])
    jobs = [(spec, noise, j) for j in range(nn)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_compute_row, jobs))
    else:
        rows = [_compute_row(job) for job in jobs]
    rows.sort(key=lambda r: r[0])
    for j, omegas, row in rows:
        out.omega[j, :] = omegas
        for i, p in enumerate(row):
            out.gap[j, i] = p.gap
            out.dgap_db[j, i] = p.dgap_db
            out.dgap_domega[j, i] = p.dgap_domega
            out.gamma_phi[j, i] = p.gamma_phi
            out.t_phi[j, i] = p.t_phi
            out.omega_star[j, i] = p.omega_star
            out.flags[j][i] = p.flags
    return out


def sweep_line(template, axis, values, noise, trunc=None):
    """1D scan of gap, sensitivities, and lifetime along b or Omega1.

    For axis "Omega1" the second tone amplitude template.omega_2 is held fixed.
    Returns a dict of per-point columns.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 1 or not np.all(np.isfinite(values)):
        raise ValueError("invalid scan values")
    drives = [_line_drive(template, axis, float(v)) for v in values]
    if trunc is None:
        worst = max(drives, key=lambda d: d.big_omega + abs(d.b))
        trunc = default_truncation(worst)
    cols = {axis: values, "gap": [], "dgap_db": [], "dgap_dOmega": [],
            "gamma_phi": [], "t_phi": [], "flags": []}
    previous = None
    for drive in drives:
        p = evaluate_point(drive, trunc, noise, previous=previous)
        previous = p.spectrum
        cols["gap"].append(p.gap)
        cols["dgap_db"].append(p.dgap_db)
        cols["dgap_dOmega"].append(p.dgap_domega)
        cols["gamma_phi"].append(p.gamma_phi)
        cols["t_phi"].append(p.t_phi)
        cols["flags"].append(p.flags)
    return {k: (np.asarray(v) if k != "flags" else v) for k, v in cols.items()}


def _line_drive(template, axis, value):
    if axis == "b":
        return replace(template, b=value)
    if axis == "Omega1":
        omega_2 = template.omega_2
        return replace(template,
                       big_omega=math.hypot(value, omega_2),
                       nu=math.atan2(omega_2, value))
    raise ValueError("axis must be 'b' or 'Omega1'")


def fast_drive_scan(template, m, l, omega1_values, noise, trunc=None):
    """Resonance scan over the strong-tone amplitude Omega1.

    The template carries the bias b = k*omega + delta. Alongside the exact
    folded gap and lifetime, the RWA and GVV gaps are evaluated per point.
    """
    omega1_values = np.asarray(omega1_values, dtype=float)
    cols = {"Omega1": omega1_values, "gap_exact": [], "gap_rwa": [],
            "gap_gvv": [], "chi": [], "gamma_phi": [], "t_phi": [],
            "dgap_db": [], "flags": []}
    drives = [_line_drive(template, "Omega1", float(v)) for v in omega1_values]
    if trunc is None:
        worst = max(drives, key=lambda d: d.big_omega + abs(d.b))
        trunc = default_truncation(worst)
    previous = None
    for drive in drives:
        p = evaluate_point(drive, trunc, noise, previous=previous)
        previous = p.spectrum
        flags = p.flags.split(";") if p.flags else []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = ResonanceIndex.from_drive(drive, m, l)
        _, g_rwa = rwa_gap(drive, res)
        chi = stark_shift_chi(drive, res).chi
        try:
            g_gvv = gvv_gap(drive, res, chi)
        except PerturbativeRegimeError:
            g_gvv = math.nan
            flags.append("gvv_invalid")
        cols["gap_exact"].append(folded_gap_magnitude(p.spectrum))
        cols["gap_rwa"].append(g_rwa)
        cols["gap_gvv"].append(g_gvv)
        cols["chi"].append(chi)
        cols["gamma_phi"].append(p.gamma_phi)
        cols["t_phi"].append(p.t_phi)
        cols["dgap_db"].append(p.dgap_db)
        cols["flags"].append(";".join(flags))
    return {k: (np.asarray(v) if k != "flags" else v) for k, v in cols.items()}


def delta_scan(template, m, l, delta_values, noise, trunc=None):
    """Lifetime versus detuning delta at fixed tone amplitudes.

    For each delta the bias is reset to b = k*omega + delta before the exact
    evaluation.
    """
    delta_values = np.asarray(delta_values, dtype=float)
    if np.any(delta_values == 0):
        raise ValueError("delta values must be nonzero")
    k = m * template.n1 + l * template.n2
    drives = [replace(template, b=k * template.omega + float(d))
              for d in delta_values]
    if trunc is None:
        worst = max(drives, key=lambda d: d.big_omega + abs(d.b))
        trunc = default_truncation(worst)
    cols = {"delta": delta_values, "inv_delta": 1.0 / delta_values,
            "b": [], "gap_exact": [], "dgap_db": [], "gamma_phi": [],
            "t_phi": [], "flags": []}
    previous = None
    for drive in drives:
        p = evaluate_point(drive, trunc, noise, previous=previous)
        previous = p.spectrum
        cols["b"].append(drive.b)
        cols["gap_exact"].append(folded_gap_magnitude(p.spectrum))
        cols["dgap_db"].append(p.dgap_db)
        cols["gamma_phi"].append(p.gamma_phi)
        cols["t_phi"].append(p.t_phi)
        cols["flags"].append(p.flags)
    return {k_: (np.asarray(v) if k_ != "flags" else v)
            for k_, v in cols.items()}


def find_sweet_spots(result, tol_dc=1e-4, tol_ac=1e-3, sour_threshold=1e-1):
    """Classify grid points into DC-sweet, doubly sweet, and sour lists."""
    dc_sweet, doubly, sour = [], [], []
    nn, nb = result.gap.shape
    for j in range(nn):
        for i in range(nb):
            ddc = abs(result.dgap_db[j, i])
            dac = abs(result.dgap_domega[j, i])
            if not (math.isfinite(ddc) and ddc < tol_dc):
                continue
            entry = {
                "b": float(result.b_values[i]),
                "nu": float(result.nu_values[j]),
                "i": i, "j": j,
                "dgap_db": float(result.dgap_db[j, i]),
                "dgap_dOmega": float(result.dgap_domega[j, i]),
                "t_phi": float(result.t_phi[j, i]),
                "omega_star": float(result.omega_star[j, i]),
            }
            dc_sweet.append(entry)
            if math.isfinite(dac) and dac < tol_ac:
                doubly.append(entry)
            elif math.isfinite(dac) and dac >= sour_threshold:
                sour.append(entry)
    return SweetSpotReport(dc_sweet=dc_sweet, doubly_sweet=doubly, sour=sour)


def local_maxima(values):
    """Indices of strict interior local maxima of a 1D array."""
    v = np.asarray(values)
    idx = []
    for i in range(1, len(v) - 1):
        if v[i] > v[i - 1] and v[i] > v[i + 1]:
            idx.append(i)
    return idx
