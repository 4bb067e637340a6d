"""Sensor-based emission spectra and excitation-emission maps.

The emission spectrum at frequency omega_s is taken proportional to the
stationary excitation of a weakly coupled sensor qubit tuned to omega_s:
S(omega_s) ~ Tr[rho (Sigma_s^+)^dagger Sigma_s^+], with Sigma_s^+ the dressed
sensor lowering operator. Each sensor frequency is a separate driven problem.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from . import dissipation, floquet
from .errors import NumericalError, WindowError
from .model import ModelParams
from .sweep import map_points

DEFAULT_OMEGA_S = (0.2, 2.2, 220)
DEFAULT_OMEGA_L = (0.9, 1.6, 71)
IMAG_TOL = 1e-10


@dataclass(frozen=True)
class SpectrumCurve:
    omega_s_grid: np.ndarray
    intensity: np.ndarray
    params_snapshot: ModelParams
    diagnostics: dict = None


@dataclass(frozen=True)
class SpectrumMap:
    omega_L_grid: np.ndarray
    omega_s_grid: np.ndarray
    intensity: np.ndarray  # shape (len(omega_L_grid), len(omega_s_grid))
    temperature: float
    params_snapshot: ModelParams = None
    diagnostics: dict = None

    def row(self, i):
        return SpectrumCurve(self.omega_s_grid, self.intensity[i],
                             self.params_snapshot.replace(omega_L=float(self.omega_L_grid[i]))
                             if self.params_snapshot is not None else None)


def sensor_emission(rho0, sensor_jump):
    """Stationary sensor emission Tr[rho0 J^+ J] for the dressed sensor jump J."""
    J = getattr(sensor_jump, "matrix", sensor_jump)
    value = np.trace(rho0 @ (J.conj().T @ J))
    if abs(value.imag) > IMAG_TOL:
        raise NumericalError(f"sensor emission has imaginary part {value.imag:.3e}")
    if value.real < -IMAG_TOL:
        raise NumericalError(f"sensor emission is negative ({value.real:.3e})")
    return max(float(value.real), 0.0)


def emission_record(p):
    """Sensor emission at ``p.omega_s`` together with solver diagnostics.

    Returns ``(intensity, floquet_depth, convergence_delta, residual, n_fock)``.
    """
    problem = dissipation.assemble(p, with_sensor=True)
    sol = floquet.steady_state(problem.parts, p.n_floquet)
    value = sensor_emission(sol.rho0, problem.jump("sensor"))
    return value, sol.n_floquet_used, sol.convergence_delta, sol.residual, problem.n_fock


def emission_point(p):
    """Sensor emission for a single parameter point (sensor at ``p.omega_s``)."""
    return emission_record(p)[0]


def _summarize(records):
    return {
        "n_fock": int(records[0][4]),
        "max_floquet_depth": int(max(r[1] for r in records)),
        "max_convergence_delta": float(max(r[2] for r in records)),
        "max_residual": float(max(r[3] for r in records)),
    }


def _check_grid(grid, name):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D grid")
    if np.any(np.diff(grid) <= 0):
        raise ValueError(f"{name} must be strictly ascending")
    return grid


def emission_spectrum(p, omega_s_grid, workers=1):
    grid = _check_grid(omega_s_grid, "omega_s_grid")
    records = map_points(emission_record, [p.replace(omega_s=float(w)) for w in grid], workers)
    return SpectrumCurve(grid, np.array([r[0] for r in records]), p, _summarize(records))


def excitation_emission_map(p, omega_L_grid, omega_s_grid, workers=1):
    """Emission spectra for every drive frequency; all points are independent."""
    wl = _check_grid(omega_L_grid, "omega_L_grid")
    ws = _check_grid(omega_s_grid, "omega_s_grid")
    points = [p.replace(omega_L=float(a), omega_s=float(b)) for a in wl for b in ws]
    records = map_points(emission_record, points, workers)
    values = np.array([r[0] for r in records]).reshape(wl.size, ws.size)
    return SpectrumMap(wl, ws, values, p.T, p, _summarize(records))


def grid(start, stop, num):
    return np.linspace(float(start), float(stop), int(num))


def zoom_grid(center, half_width, num):
    return np.linspace(center - half_width, center + half_width, int(num))


def _window(curve, center, half_window):
    x = np.asarray(curve.omega_s_grid)
    lo, hi = center - half_window, center + half_window
    tol = 1e-12 * max(1.0, abs(center))
    if lo < x[0] - tol or hi > x[-1] + tol:
        raise WindowError(f"window [{lo:.6g}, {hi:.6g}] outside grid [{x[0]:.6g}, {x[-1]:.6g}]")
    mask = (x >= lo - tol) & (x <= hi + tol)
    if np.count_nonzero(mask) < 3:
        raise WindowError("window contains fewer than three grid points")
    return x[mask], np.asarray(curve.intensity)[mask]


def peak_intensity(curve, center, half_window=None):
    """Baseline-subtracted area of the feature at ``center``.

    A straight line through the first and last samples of the window is
    subtracted before trapezoidal integration; the result is clamped at 0.
    The default half window is 5 Gamma of the curve's parameters.
    """
    if half_window is None:
        half_window = 5 * curve.params_snapshot.Gamma
    x, y = _window(curve, center, half_window)
    baseline = y[0] + (y[-1] - y[0]) * (x - x[0]) / (x[-1] - x[0])
    return max(float(trapezoid(y - baseline, x)), 0.0)


def locate_peak(curve, center, half_window):
    """Position of the highest interior local maximum within the window.

    Refined by a parabola through the maximum and its neighbours. Raises
    :class:`WindowError` when the window has no interior maximum.
    """
    x, y = _window(curve, center, half_window)
    interior = [k for k in range(1, len(y) - 1) if y[k] >= y[k - 1] and y[k] >= y[k + 1]]
    if not interior:
        raise WindowError(f"no local maximum near {center:.6g}")
    k = max(interior, key=lambda i: y[i])
    y0, y1, y2 = y[k - 1], y[k], y[k + 1]
    denom = y0 - 2 * y1 + y2
    shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
    return float(x[k] + shift * (x[k + 1] - x[k]))


def ridge_slope(omega_L, positions):
    """Least-squares slope of feature positions against drive frequency."""
    slope, _ = np.polyfit(np.asarray(omega_L, float), np.asarray(positions, float), 1)
    return float(slope)
