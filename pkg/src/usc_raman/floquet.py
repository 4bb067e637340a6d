"""Time-averaged steady state of the periodically driven master equation.

Writing the long-time state as rho(t) = sum_n rho_n exp(i n wL t), harmonic
balance gives

    (L0 - i n wL) rho_n + Lplus rho_{n-1} + Lminus rho_{n+1} = 0 .

With rho_{+n} = S_{+n} rho_{n-1} and rho_{-n} = S_{-n} rho_{-n+1}:

    S_{+n} = -[L0 - i n wL + Lminus S_{+(n+1)}]^{-1} Lplus
    S_{-n} = -[L0 + i n wL + Lplus  S_{-(n+1)}]^{-1} Lminus

seeded with S_{+-(n_max+1)} = 0, and rho_0 spans the nullspace of
L0 + Lminus S_{+1} + Lplus S_{-1}.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import operators as ops
from .errors import DegenerateSteadyStateError, IntegrationError, NumericalError

log = logging.getLogger(__name__)

REGULARIZATION = 1e-12
DEGENERACY_RATIO = 1e-8


@dataclass(frozen=True)
class FloquetRecursion:
    L_eff: np.ndarray
    S_plus: np.ndarray
    S_minus: np.ndarray
    depth: int
    flags: tuple = ()


@dataclass(frozen=True)
class FloquetSolution:
    rho0: np.ndarray
    n_floquet_used: int
    residual: float
    convergence_delta: float
    rho_plus: np.ndarray = None
    rho_minus: np.ndarray = None
    min_eigenvalue: float = 0.0
    flags: tuple = field(default=())


def _solve(A, B, depth, flags):
    try:
        return np.linalg.solve(A, B)
    except np.linalg.LinAlgError:
        log.warning("singular Floquet solve at depth %d, regularizing by %g", depth, REGULARIZATION)
        flags.append(f"regularized@{depth}")
        return np.linalg.solve(A + REGULARIZATION * np.eye(A.shape[0]), B)


def floquet_recursion(parts, n_max):
    """Effective generator whose nullspace is the time-averaged steady state."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    L0, Lp, Lm, w = parts.L0, parts.Lplus, parts.Lminus, parts.omega_L
    d2 = L0.shape[0]
    if not np.any(Lp) and not np.any(Lm):
        zero = np.zeros((d2, d2), dtype=complex)
        return FloquetRecursion(L0.copy(), zero, zero.copy(), n_max)
    eye = np.eye(d2)
    flags = []
    s_plus = np.zeros((d2, d2), dtype=complex)
    s_minus = np.zeros((d2, d2), dtype=complex)
    for n in range(n_max, 0, -1):
        s_plus = -_solve(L0 - 1j * n * w * eye + Lm @ s_plus, Lp, n, flags)
        s_minus = -_solve(L0 + 1j * n * w * eye + Lp @ s_minus, Lm, -n, flags)
    L_eff = L0 + Lm @ s_plus + Lp @ s_minus
    return FloquetRecursion(L_eff, s_plus, s_minus, n_max, tuple(flags))


def nullspace_state(L_eff):
    """Normalized density matrix spanning the nullspace of ``L_eff``.

    Returns a :class:`FloquetSolution` without harmonic information; raises
    :class:`DegenerateSteadyStateError` if more than one singular value is
    below 1e-8 of the largest.
    """
    if isinstance(L_eff, FloquetRecursion):
        L_eff = L_eff.L_eff
    _, s, vh = np.linalg.svd(L_eff)
    if s[-2] < DEGENERACY_RATIO * s[0]:
        raise DegenerateSteadyStateError(
            f"steady state is not unique: singular values {s[-2]:.3e}, {s[-1]:.3e} "
            f"below {DEGENERACY_RATIO:g} x {s[0]:.3e}")
    vec = vh[-1].conj()
    rho = ops.devectorize(vec)
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho)
    if abs(tr) < 1e-300:
        raise NumericalError("nullspace vector has zero trace")
    rho = rho / tr.real
    residual = float(np.linalg.norm(L_eff @ ops.vectorize(rho)))
    min_eig = float(np.min(np.linalg.eigvalsh(rho)))
    flags = ()
    if min_eig < -1e-8:
        flags = ("negative-eigenvalue",)
        log.warning("steady state has eigenvalue %.3e < -1e-8", min_eig)
    return FloquetSolution(rho, 0, residual, math.nan, min_eigenvalue=min_eig, flags=flags)


def _solve_depth(parts, depth):
    rec = floquet_recursion(parts, depth)
    sol = nullspace_state(rec.L_eff)
    v0 = ops.vectorize(sol.rho0)
    d = sol.rho0.shape[0]
    rho_p = ops.devectorize(rec.S_plus @ v0, d)
    rho_m = ops.devectorize(rec.S_minus @ v0, d)
    return sol, rho_p, rho_m, rec.flags


def steady_state(parts, n_floquet=3, tol=1e-8, max_depth=16):
    """Time-averaged steady state with automatic recursion-depth extension.

    Starts at ``n_floquet`` and increases the depth by one until the trace
    distance between consecutive depths drops below ``tol``.
    """
    prev, *_ = _solve_depth(parts, max(1, n_floquet - 1)) if n_floquet > 1 else (None,)
    depth = n_floquet
    while True:
        sol, rho_p, rho_m, flags = _solve_depth(parts, depth)
        delta = ops.trace_norm(sol.rho0 - prev.rho0) if prev is not None else math.inf
        if delta < tol or depth >= max_depth:
            if delta >= tol:
                flags = flags + ("depth-not-converged",)
                log.warning("Floquet depth %d not converged (delta %.3e)", depth, delta)
            return FloquetSolution(sol.rho0, depth, sol.residual, delta, rho_p, rho_m,
                                   sol.min_eigenvalue, tuple(flags) + sol.flags)
        prev = sol
        depth += 1


def generator_at(parts, t):
    w = parts.omega_L * t
    return parts.L0 + parts.Lplus * np.exp(1j * w) + parts.Lminus * np.exp(-1j * w)


def _integrate(parts, y0, t0, t1, rtol, atol, n_samples=0, augment=False):
    """Integrate drho/dt = L(t) rho over [t0, t1]; y0 may hold several columns."""
    d2 = parts.L0.shape[0]
    shape = y0.shape

    def rhs(t, y):
        Y = y.reshape(shape)
        if augment:
            r = Y[:d2]
            return np.concatenate([generator_at(parts, t) @ r, r]).reshape(-1)
        return (generator_at(parts, t) @ Y).reshape(-1)

    t_eval = np.linspace(t0, t1, n_samples) if n_samples else None
    res = solve_ivp(rhs, (t0, t1), y0.reshape(-1), method="DOP853", rtol=rtol, atol=atol,
                    t_eval=t_eval)
    if not res.success:
        raise IntegrationError(f"time propagation failed on [{t0}, {t1}]: {res.message}")
    return res


def period_propagator(parts, t0=0.0, rtol=1e-12, atol=1e-14):
    """One-period map of the driven master equation, integrated column by column."""
    d2 = parts.L0.shape[0]
    period = 2 * math.pi / parts.omega_L
    res = _integrate(parts, np.eye(d2, dtype=complex), t0, t0 + period, rtol, atol)
    return res.y[:, -1].reshape(d2, d2)


@dataclass(frozen=True)
class PropagationResult:
    rho_avg: np.ndarray
    trace_deviation: float
    n_periods: int


def propagate_oracle(parts, t_end, samples_per_period=64, rtol=1e-12, atol=1e-14):
    """Period average of rho(t) over [t_end - T, t_end] by direct time integration.

    The state starts in the undriven steady state (nullspace of L0). Whole
    periods before the final one are applied through the one-period propagator
    (itself integrated with an adaptive Runge-Kutta scheme), the remainder is
    integrated directly, and the final period is averaged by integrating
    int rho dt alongside rho.
    """
    if parts.omega_L <= 0:
        raise ValueError("propagation needs a positive drive frequency")
    period = 2 * math.pi / parts.omega_L
    if t_end < 20 * period - 1e-12:
        raise ValueError("t_end must cover at least 20 drive periods")
    d2 = parts.L0.shape[0]
    rho = ops.vectorize(nullspace_state(parts.L0).rho0).astype(complex)
    trace_vec = ops.vectorize(np.eye(parts.dim))
    worst = abs(trace_vec @ rho - 1)

    t_start_avg = t_end - period
    n_periods = int(math.floor(t_start_avg / period + 1e-12))
    if np.any(parts.Lplus) or np.any(parts.Lminus):
        prop = period_propagator(parts, 0.0, rtol, atol)
        for _ in range(n_periods):
            rho = prop @ rho
            worst = max(worst, abs(trace_vec @ rho - 1))
    t = n_periods * period
    if t_start_avg - t > 1e-12:
        res = _integrate(parts, rho, t, t_start_avg, rtol, atol)
        rho = res.y[:, -1]
        worst = max(worst, abs(trace_vec @ rho - 1))

    y0 = np.concatenate([rho, np.zeros(d2, dtype=complex)])
    res = _integrate(parts, y0, t_start_avg, t_end, rtol, atol,
                     n_samples=max(2, samples_per_period + 1), augment=True)
    samples = res.y[:d2]
    worst = max(worst, float(np.max(np.abs(trace_vec @ samples - 1))))
    avg = ops.devectorize(res.y[d2:, -1] / period)
    avg = 0.5 * (avg + avg.conj().T)
    return PropagationResult(avg, float(worst), n_periods)
