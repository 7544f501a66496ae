"""Brute-force truncated-Fock simulations used to check the Gaussian theory.

Two oracles live here:

* :func:`effective_lindblad_steady` integrates the squeezed-mode dissipator
  on one cavity or on one momentum pair until the state stops moving.
* :func:`full_model_evolve` integrates the time-dependent qubit-cavity master
  equation of a single site, drive included, with no rotating-wave or
  adiabatic approximation.

All operators are dense; the largest space is ``n_max**2`` (two cavities).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import DegenerateDrive, StepTooLarge, TruncationLeak, Unstable
from .gaussian import PairCovariance
from .model import ModelParams

QUBIT_DIM = 2


@dataclass(frozen=True)
class FockConfig:
    n_max: int = 12
    sites: int = 1
    dt: float | None = None
    t_final: float | None = None
    include_qubit: bool = False
    leak_threshold: float = 1e-4
    steady_tol: float = 1e-10
    sample_every: int = 100

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 2:
            raise ValueError("n_max must be an integer >= 2")
        if self.sites not in (1, 2):
            raise ValueError("sites must be 1 or 2")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_final is not None and not self.t_final > 0:
            raise ValueError("t_final must be positive")
        if self.sample_every < 1:
            raise ValueError("sample_every must be >= 1")


@dataclass
class FockState:
    """Dense density matrix on a product of truncated spaces.

    ``kinds`` tags every factor as ``"qubit"`` or ``"cavity"``.
    """

    rho: np.ndarray
    dims: tuple[int, ...]
    kinds: tuple[str, ...] = ()
    t: float = 0.0

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if not self.kinds:
            self.kinds = ("cavity",) * len(self.dims)
        if self.rho.shape != (math.prod(self.dims),) * 2:
            raise ValueError(f"rho has shape {self.rho.shape}, dims {self.dims}")

    def check(self, trace_tol=1e-9, herm_tol=1e-12, pos_tol=1e-9) -> None:
        rho = self.rho
        tr = np.trace(rho)
        if abs(tr - 1) > trace_tol:
            raise AssertionError(f"trace drifted to {tr}")
        if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
            raise AssertionError("density matrix lost Hermiticity")
        w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
        if w[0] < -pos_tol:
            raise AssertionError(f"density matrix has eigenvalue {w[0]:.3g}")

    def partial_trace(self, keep) -> "FockState":
        keep = sorted(keep)
        n = len(self.dims)
        t = self.rho.reshape(self.dims + self.dims)
        traced = [i for i in range(n) if i not in keep]
        # trace out from the highest axis down so indices stay valid
        for i in sorted(traced, reverse=True):
            m = t.ndim // 2
            t = np.trace(t, axis1=i, axis2=i + m)
        dims = tuple(self.dims[i] for i in keep)
        d = math.prod(dims)
        return FockState(t.reshape(d, d), dims, tuple(self.kinds[i] for i in keep), self.t)

    def photons(self) -> "FockState":
        return self.partial_trace([i for i, kind in enumerate(self.kinds) if kind == "cavity"])

    def expect(self, op: np.ndarray) -> complex:
        return complex(np.trace(op @ self.rho))

    def top_level_population(self) -> float:
        """Largest population found in the top Fock level of any cavity."""
        worst = 0.0
        for i, kind in enumerate(self.kinds):
            if kind != "cavity":
                continue
            p = np.real(np.diag(self.partial_trace([i]).rho))
            worst = max(worst, float(p[-1]))
        return worst


def destroy(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(complex)


def embed(op: np.ndarray, index: int, dims) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for i, d in enumerate(dims):
        out = np.kron(out, op if i == index else np.eye(d))
    return out


def vacuum(dims, kinds=()) -> FockState:
    d = math.prod(dims)
    rho = np.zeros((d, d), dtype=complex)
    rho[0, 0] = 1.0
    return FockState(rho, tuple(dims), tuple(kinds))


def coherent_state(n: int, alpha: complex) -> FockState:
    k = np.arange(n)
    logfact = np.array([math.lgamma(j + 1) for j in k])
    amp = np.exp(-abs(alpha) ** 2 / 2 - logfact / 2) * alpha**k
    amp = amp / np.linalg.norm(amp)
    return FockState(np.outer(amp, amp.conj()), (n,))


def _leak_check(state: FockState, threshold: float) -> None:
    top = state.top_level_population()
    if top > threshold:
        raise TruncationLeak(f"top Fock level holds population {top:.3g} > {threshold:g}")


def _rk4_matrix(rhs, rho, t, dt):
    k1 = rhs(t, rho)
    k2 = rhs(t + dt / 2, rho + dt / 2 * k1)
    k3 = rhs(t + dt / 2, rho + dt / 2 * k2)
    k4 = rhs(t + dt, rho + dt * k3)
    return rho + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def effective_lindblad_steady(g1, g2, q, Gamma, cfg: FockConfig = FockConfig(), omegas=(0.0, 0.0)) -> FockState:
    """Steady state of the squeezed-mode dissipator on a truncated Fock space.

    The generator is ``(2/Gamma) sum_L (2 L rho L^+ - {L^+ L, rho})`` plus
    ``-i[sum_j omega_j a_j^+ a_j, rho]``.  With one site ``L = g1 a + g2 e^{iq} a^+``;
    with two, ``L_1 = g1 a_1 + g2 e^{iq} a_2^+`` and ``L_2 = g1 a_2 + g2 e^{iq} a_1^+``.
    Integration (RK4, from vacuum) stops once the Frobenius norm of
    ``d rho/dt`` falls below ``cfg.steady_tol``, or at 50 relaxation times.
    """
    if not g1 > 0:
        raise DegenerateDrive("g1 must be positive")
    eta = g2 / g1
    if eta >= 1:
        raise Unstable(f"eta = {eta:.6g} >= 1 has no steady state")

    n = int(cfg.n_max)
    dims = (n,) * cfg.sites
    a = [embed(destroy(n), i, dims) for i in range(cfg.sites)]
    phase = np.exp(1j * q)
    if cfg.sites == 1:
        jumps = [g1 * a[0] + g2 * phase * a[0].conj().T]
    else:
        jumps = [g1 * a[0] + g2 * phase * a[1].conj().T, g1 * a[1] + g2 * phase * a[0].conj().T]
    H = sum(w * ai.conj().T @ ai for w, ai in zip(omegas, a))
    kappa = 2.0 / Gamma

    h_eff = H - 1j * kappa * sum(L.conj().T @ L for L in jumps)
    h_eff_dag = h_eff.conj().T
    jumps_dag = [L.conj().T for L in jumps]

    def rhs(t, rho):
        out = -1j * (h_eff @ rho - rho @ h_eff_dag)
        for L, Ld in zip(jumps, jumps_dag):
            out += 2 * kappa * (L @ rho @ Ld)
        return out

    # generous bound on the generator's spectral radius
    radius = 4 * kappa * sum(np.linalg.norm(L, 2) ** 2 for L in jumps) + 2 * np.linalg.norm(H, 2)
    dt = cfg.dt if cfg.dt is not None else 2.5 / radius
    t1 = Gamma / (4 * (g1**2 - g2**2))
    t_cap = cfg.t_final if cfg.t_final is not None else 50 * t1

    state = vacuum(dims)
    rho, t, step = state.rho, 0.0, 0
    converged = False
    while t < t_cap:
        rho = _rk4_matrix(rhs, rho, t, dt)
        t += dt
        step += 1
        if step % 100 == 0:
            FockState(rho, dims).check()
        if step % 20 == 0 and np.linalg.norm(rhs(t, rho)) < cfg.steady_tol:
            converged = True
            break
    result = FockState((rho + rho.conj().T) / 2, dims, t=t)
    if not converged:
        res = np.linalg.norm(rhs(t, result.rho))
        warnings.warn(f"steady state not reached by t = {t:.4g} (residual {res:.3g})", RuntimeWarning, stacklevel=2)
    _leak_check(result, cfg.leak_threshold)
    return result


def max_frequency(p: ModelParams, n_max: int = 2) -> float:
    """Largest Bohr frequency of the driven site with ``n_max`` Fock levels.

    Coherences span the whole photon ladder, so the cavity enters as
    ``(n_max - 1) omega_r`` and the coupling as ``2 g sqrt(n_max - 1)``.
    """
    ladder = (n_max - 1) * abs(p.omega_r) + 2 * p.g * math.sqrt(n_max - 1)
    return max(
        abs(p.epsilon) + 2 * (abs(p.lambda1) + abs(p.lambda2)) + ladder,
        abs(p.Omega1),
        abs(p.Omega2),
    )


def max_step(p: ModelParams, n_max: int = 2) -> float:
    """Largest step accepted by :func:`full_model_evolve`."""
    return 2 * math.pi / (20 * max_frequency(p, n_max))


@dataclass
class FockTrajectory:
    times: np.ndarray
    states: list = field(default_factory=list)

    def photon_number(self) -> np.ndarray:
        out = []
        for s in self.states:
            ph = s.photons()
            n = ph.dims[0]
            num = np.diag(np.arange(n, dtype=float))
            out.append(ph.expect(num).real)
        return np.array(out)

    def qubit_excitation(self) -> np.ndarray:
        out = []
        for s in self.states:
            qb = s.partial_trace([s.kinds.index("qubit")])
            out.append(qb.rho[1, 1].real)
        return np.array(out)


def full_model_evolve(p: ModelParams, cfg: FockConfig, initial: FockState | None = None) -> FockTrajectory:
    """Integrate the driven single-site qubit-cavity master equation.

    ``H(t) = omega_r a^+a + epsilon/2 sz + g sx (a + a^+) + sum_n lambda_n cos(Omega_n t) sz``
    with qubit decay ``Gamma D[s-]``.  The site index is 0, so the drive
    phases drop out.  Qubit basis ordering is (ground, excited); the state
    defaults to ground x vacuum.  States are sampled every
    ``cfg.sample_every`` steps and at the final time.

    The default step is a quarter of :func:`max_step`.  Long undamped
    evolution of a pure state may need a smaller one to keep rho positive
    to 1e-9.
    """
    if cfg.sites != 1:
        raise ValueError("the full-model oracle covers a single qubit-cavity site")
    n = int(cfg.n_max)
    dims = (QUBIT_DIM, n)
    kinds = ("qubit", "cavity")

    limit = max_step(p, n)
    dt = cfg.dt if cfg.dt is not None else limit / 4
    if dt > limit * (1 + 1e-12):
        raise StepTooLarge(f"dt = {dt:.4g} exceeds 2 pi / (20 f_max) = {limit:.4g}")
    if cfg.t_final is None:
        raise ValueError("full_model_evolve needs cfg.t_final")
    steps = int(math.ceil(cfg.t_final / dt - 1e-9))
    dt = cfg.t_final / steps

    # basis index = qubit * n + photon, qubit 0 = ground
    photon = np.tile(np.arange(n), QUBIT_DIM)
    z = np.repeat([-1.0, 1.0], n)
    base = p.omega_r * photon + p.epsilon / 2 * z - 0.5j * p.Gamma * (z > 0)
    drive = np.array([p.lambda1, p.lambda2, p.Omega1, p.Omega2], dtype=float)

    if initial is None:
        initial = vacuum(dims, kinds)
    rho = np.ascontiguousarray(initial.rho, dtype=complex)
    times, states = [0.0], [FockState(rho.copy(), dims, kinds, 0.0)]
    step = 0
    while step < steps:
        # stop at every check point (each 100 steps) and every sample point
        nxt = min(steps, (step // 100 + 1) * 100, (step // cfg.sample_every + 1) * cfg.sample_every)
        rho = _full_model_steps(rho, step, nxt - step, dt, n, base, z, p.g, p.Gamma, drive)
        step = nxt
        t = step * dt
        state = FockState(rho.copy(), dims, kinds, t)
        if step % 100 == 0:
            state.check(herm_tol=1e-10)
            _leak_check(state, cfg.leak_threshold)
        if step % cfg.sample_every == 0 or step == steps:
            times.append(t)
            states.append(state)
    _leak_check(states[-1], cfg.leak_threshold)
    return FockTrajectory(np.array(times), states)


@numba.njit(cache=True)
def _full_model_rhs(rho, t, n, base, z, g, Gamma, drive, out):
    d = rho.shape[0]
    dz = drive[0] * math.cos(drive[2] * t) + drive[1] * math.cos(drive[3] * t)
    diag = np.empty(d, dtype=np.complex128)
    for i in range(d):
        diag[i] = base[i] + dz * z[i]
    for i in range(d):
        qi = i // n
        mi = i - qi * n
        for j in range(d):
            qj = j // n
            mj = j - qj * n
            # (H_eff rho)_ij - (rho H_eff^+)_ij with H_eff = diag + g sx (a + a^+)
            acc = diag[i] * rho[i, j] - rho[i, j] * np.conj(diag[j])
            oi = (1 - qi) * n
            if mi + 1 < n:
                acc += g * math.sqrt(mi + 1) * rho[oi + mi + 1, j]
            if mi > 0:
                acc += g * math.sqrt(mi) * rho[oi + mi - 1, j]
            oj = (1 - qj) * n
            if mj + 1 < n:
                acc -= g * math.sqrt(mj + 1) * rho[i, oj + mj + 1]
            if mj > 0:
                acc -= g * math.sqrt(mj) * rho[i, oj + mj - 1]
            val = -1j * acc
            if qi == 0 and qj == 0:
                val += Gamma * rho[i + n, j + n]
            out[i, j] = val


@numba.njit(cache=True)
def _full_model_steps(rho, step0, nsteps, dt, n, base, z, g, Gamma, drive):
    d = rho.shape[0]
    k1 = np.empty((d, d), dtype=np.complex128)
    k2 = np.empty_like(k1)
    k3 = np.empty_like(k1)
    k4 = np.empty_like(k1)
    rho = rho.copy()
    for s in range(nsteps):
        t = (step0 + s) * dt
        _full_model_rhs(rho, t, n, base, z, g, Gamma, drive, k1)
        _full_model_rhs(rho + 0.5 * dt * k1, t + 0.5 * dt, n, base, z, g, Gamma, drive, k2)
        _full_model_rhs(rho + 0.5 * dt * k2, t + 0.5 * dt, n, base, z, g, Gamma, drive, k3)
        _full_model_rhs(rho + dt * k3, t + dt, n, base, z, g, Gamma, drive, k4)
        rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return rho


def reduced_covariance(state: FockState, k: float = 0.0, k_partner: float | None = None) -> PairCovariance:
    """Quadrature covariance of the cavity modes of ``state`` (qubits traced out).

    Ordering is (Q_1, P_1, Q_2, P_2); one cavity gives a 2x2 matrix.  Only
    normally ordered moments are read from rho and the commutator is added
    analytically, so the truncated a a^+ at the top level never enters.
    """
    ph = state.photons()
    n_modes = len(ph.dims)
    a = [embed(destroy(n), i, ph.dims) for i, n in enumerate(ph.dims)]
    mean = np.array([ph.expect(ai) for ai in a])
    # x = (a_1, a_1^+, a_2, a_2^+, ...); S = symmetrised central second moments of x
    S = np.empty((2 * n_modes, 2 * n_modes), dtype=complex)
    for i in range(n_modes):
        for j in range(n_modes):
            aa = ph.expect(a[i] @ a[j]) - mean[i] * mean[j]
            nij = ph.expect(a[i].conj().T @ a[j]) - np.conj(mean[i]) * mean[j]
            nji = ph.expect(a[j].conj().T @ a[i]) - np.conj(mean[j]) * mean[i]
            delta = 0.5 if i == j else 0.0
            S[2 * i, 2 * j] = aa
            S[2 * i + 1, 2 * j + 1] = np.conj(aa)
            S[2 * i, 2 * j + 1] = nji + delta
            S[2 * i + 1, 2 * j] = nij + delta
    T = np.kron(np.eye(n_modes), np.array([[1, 1], [1j, -1j]]) / math.sqrt(2))
    gamma = (T @ S @ T.T).real
    gamma = (gamma + gamma.T) / 2
    if k_partner is None:
        k_partner = k
    return PairCovariance(gamma, k, k_partner)


def drive_sideband_weights(lam: float, Omega: float, orders=(0, 1), samples: int = 4096) -> np.ndarray:
    """Fourier weights of the qubit phase factor exp(2i int_0^t lambda cos(Omega s) ds).

    The phase is accumulated by trapezoidal quadrature over one drive period
    and the weights are read from its discrete Fourier transform, so the
    result is independent of any Bessel-function library.  Weight ``n``
    multiplies ``exp(i n Omega t)``.
    """
    period = 2 * math.pi / abs(Omega)
    t = np.linspace(0.0, period, samples + 1)
    phase = 2 * cumulative_trapezoid(lam * np.cos(Omega * t), t, initial=0.0)
    signal = np.exp(1j * phase[:-1])
    coeffs = np.fft.fft(signal) / samples
    return np.array([coeffs[o % samples] for o in orders])
