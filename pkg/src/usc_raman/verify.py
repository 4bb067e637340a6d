"""Oracle suite behind the ``verify`` subcommand.

Each check compares a production code path with an independent reference
(analytic limit, brute-force propagation, Gibbs distribution, symmetry).
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import dissipation, floquet, model, raman
from . import operators as ops
from .model import ModelParams


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    seconds: float = 0.0
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.value:.3e} (threshold {self.threshold:.1e}) {self.detail}"


def check_decoupled(p):
    q = p.replace(eta=0.0, eta_s=0.0)
    n = model.fock_size(q)
    e = np.linalg.eigvalsh(model.build_hamiltonian(q, n_fock=n))
    bare = np.sort(np.add.outer(q.omega_c * np.arange(n), [-q.omega_q / 2, q.omega_q / 2]).ravel())
    err = float(np.max(np.abs(e - bare)))
    return err, err < 1e-12, 1e-12, ""


def check_jaynes_cummings(p):
    eta = 1e-3
    q = p.replace(eta=eta, theta=0.0, omega_q=p.omega_c)
    eig = model.rabi_eigensystem(q)
    split = eig.transition(2, 1)
    rel = abs(split - 2 * eta * q.omega_c) / (2 * eta * q.omega_c)
    return rel, rel < 5e-3, 5e-3, f"splitting {split:.6e}"


def check_fock_convergence(p):
    n = model.fock_size(p)
    e1 = model.rabi_eigensystem(p, n).energies[:8]
    e2 = model.rabi_eigensystem(p, n + 4).energies[:8]
    err = float(np.max(np.abs(e1 - e2)))
    return err, err < 1e-8, 1e-8, f"n_fock {n} vs {n + 4}"


def check_parity_selection(p):
    q = p.replace(theta=0.0)
    eig = raman.fgr_eigensystem(q)
    X = raman.dipole_elements(eig)
    m10 = abs(raman.raman_amplitude(eig, X, 0, 1, q.omega_L))
    m30 = abs(raman.raman_amplitude(eig, X, 0, 3, q.omega_L))
    ok = m10 < 1e-12 and m30 > 1e-3
    return m10, ok, 1e-12, f"|M30| = {m30:.3e}"


def check_gibbs(p, T=0.15):
    """Undriven thermal steady state against Gibbs populations (20% relative)."""
    q = p.replace(T=T, Omega=0.0)
    problem = dissipation.assemble(q, with_sensor=False)
    rho = floquet.nullspace_state(problem.parts.L0).rho0
    pops = np.real(np.diag(rho))
    gibbs = raman.gibbs_populations(problem.eig, T)
    relevant = gibbs > 1e-6
    relevant[0] = False
    rel = float(np.max(np.abs(pops[relevant] - gibbs[relevant]) / gibbs[relevant]))
    return rel, rel < 0.2, 0.2, f"{int(relevant.sum())} excited states compared"


def check_ground_state(p):
    q = p.replace(Omega=0.0, T=0.0)
    problem = dissipation.assemble(q)
    sol = floquet.steady_state(problem.parts, q.n_floquet)
    infidelity = 1 - float(np.real(sol.rho0[0, 0]))
    return infidelity, infidelity < 1e-6, 1e-6, ""


def check_floquet_vs_propagation(p, n_periods=20000):
    eig = model.rabi_eigensystem(p)
    q = p.replace(omega_s=p.omega_L - eig.transition(1, 0))
    problem = dissipation.assemble(q)
    sol = floquet.steady_state(problem.parts, q.n_floquet)
    period = 2 * math.pi / q.omega_L
    prop = floquet.propagate_oracle(problem.parts, n_periods * period)
    dist = ops.trace_norm(sol.rho0 - prop.rho_avg)
    return dist, dist < 1e-5, 1e-5, f"trace drift {prop.trace_deviation:.1e}"


CHECKS = (
    ("decoupled_limit", check_decoupled),
    ("jaynes_cummings_splitting", check_jaynes_cummings),
    ("fock_convergence", check_fock_convergence),
    ("parity_selection", check_parity_selection),
    ("gibbs_thermal_state", check_gibbs),
    ("undriven_ground_state", check_ground_state),
    ("floquet_vs_propagation", check_floquet_vs_propagation),
)


def run_checks(p=None):
    p = p or ModelParams()
    results = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        value, ok, threshold, detail = fn(p)
        results.append(CheckResult(name, bool(ok), float(value), threshold,
                                   time.perf_counter() - t0, detail))
    return results
