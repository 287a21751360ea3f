"""Thermalizing Lindblad master equation in the system eigenbasis.

The dissipators act between exact eigenlevels |n>, |m> with jump operators
|n><m| and golden-rule rates J(|w_mn|) |<n|X|m>|^2, where X is the bath
coupling operator (photon quadrature a - a^dag for the cavity channel, s_x
for the dipole).  Downward terms are weighted by (1 + N_T), upward by N_T,
which makes the Gibbs state of the retained levels exactly stationary.

Truncation is two-tier: diagonalize at full n_fock, then keep the lowest
m_levels eigenlevels for the superoperator (dense spectral work scales as
m_levels^6).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .eigen import EigenSystem
from .operators import ModelParams, OperatorMatrix, fock_ladder, spin_operators

DENSE_LEVEL_CAP = 40       # m_levels above this makes the dense eig hopeless
DEGENERACY_TOL = 1e-9      # |w_mn|/omega_c treated as an exact degeneracy
STATIONARY_TOL = 1e-9      # |eigenvalue| identifying the steady-state mode


class DegenerateSteadyStateError(RuntimeError):
    """The Liouvillian kernel is more than one-dimensional."""


class OverdampedSeriesError(ValueError):
    """Oscillation fit requested on a series without enough extrema."""


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose occupation 1/(e^{omega/T} - 1); exactly 0 at T = 0 (by branch)."""
    if temperature <= 0.0:
        return 0.0
    x = omega / temperature
    if x > 700.0:
        return 0.0
    if x <= 0.0:
        raise ValueError(f"thermal occupation needs omega > 0, got {omega}")
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class BathSpec:
    """One dissipation channel: coupling operator choice plus spectral law.

    law "ohmic" gives J(w) = strength * w / ref_freq, law "radiative" gives
    J(w) = strength * (w / ref_freq)**nu (nu = 3 for a 3D photon bath).
    """

    channel: str              # "cavity" or "dipole"
    law: str                  # "ohmic" or "radiative"
    strength: float           # gamma or kappa, in omega_c units
    ref_freq: float           # normalization frequency (omega_c or omega_d)
    nu: float = 3.0

    def __post_init__(self):
        if self.channel not in ("cavity", "dipole"):
            raise ValueError(f"unknown bath channel {self.channel!r}")
        if self.law not in ("ohmic", "radiative"):
            raise ValueError(f"unknown spectral law {self.law!r}")
        if self.strength < 0.0:
            raise ValueError(f"bath strength must be >= 0, got {self.strength}")
        if self.ref_freq <= 0.0:
            raise ValueError(f"ref_freq must be positive, got {self.ref_freq}")
        if self.law == "radiative" and self.nu < 1.0:
            raise ValueError(f"radiative exponent must be >= 1, got {self.nu}")

    def spectral_density(self, omega: float) -> float:
        """J(|omega|) for this channel; J(0) = 0 for both laws."""
        w = abs(omega) / self.ref_freq
        if self.law == "ohmic":
            return self.strength * w
        return self.strength * w**self.nu


def cavity_bath(gamma: float, omega_c: float = 1.0) -> BathSpec:
    """Ohmic flux-coupled cavity bath, J = gamma w / omega_c."""
    return BathSpec(channel="cavity", law="ohmic", strength=gamma, ref_freq=omega_c)


def dipole_bath(kappa: float, omega_d: float = 1.0, ohmic: bool = False) -> BathSpec:
    """Radiative dipole bath, J = kappa (w/omega_d)^3 (or Ohmic variant)."""
    law = "ohmic" if ohmic else "radiative"
    return BathSpec(channel="dipole", law=law, strength=kappa, ref_freq=omega_d)


def coupling_matrix(params: ModelParams, channel: str) -> OperatorMatrix:
    """Bare bath coupling operator on the product space.

    Cavity couples through the quadrature (a - a^dag) (anti-Hermitian; only
    |elements|^2 enter rates), dipole through S_x.  Both commute with the
    polaron transform, so the same operators serve in either frame.
    """
    if channel == "cavity":
        a, ad = fock_ladder(params.n_fock)
        mat = np.kron(np.eye(params.spin_n + 1), a.entries - ad.entries)
        return OperatorMatrix(dim=params.dim, entries=mat, label="a-a_dag")
    if channel == "dipole":
        sx = spin_operators(params.spin_n)[0]
        mat = np.kron(sx.entries, np.eye(params.n_fock))
        return OperatorMatrix(dim=params.dim, entries=mat, label="S_x")
    raise ValueError(f"unknown bath channel {channel!r}")


def transition_rates(
    eig: EigenSystem, op: OperatorMatrix, bath: BathSpec, m_levels: int
) -> np.ndarray:
    """Base golden-rule rates G[n, m] = J(|w_mn|) |<n|X|m>|^2, zero diagonal.

    Symmetric in (n, m); thermal (1 + N_T) / N_T weights are applied by the
    Liouvillian assembly, not here.
    """
    if m_levels < 2:
        raise ValueError(f"need at least 2 levels, got {m_levels}")
    if m_levels > eig.converged_levels:
        raise ValueError(
            f"m_levels={m_levels} exceeds the {eig.converged_levels} converged levels"
        )
    if op.dim != eig.dim:
        raise ValueError(f"operator dim {op.dim} != eigensystem dim {eig.dim}")
    v = eig.vectors[:, :m_levels]
    elem2 = np.abs(v.conj().T @ op.entries @ v) ** 2
    w = eig.frequencies[:m_levels]
    gaps = np.abs(w[None, :] - w[:, None])
    jw = np.vectorize(bath.spectral_density)(gaps)
    rates = jw * elem2
    np.fill_diagonal(rates, 0.0)
    return rates


@dataclass(frozen=True)
class JumpRecord:
    """One assembled dissipator |to><from| with its thermally weighted rate."""

    channel: str
    from_level: int
    to_level: int
    rate: float


@dataclass(frozen=True)
class Liouvillian:
    """Dense superoperator over the retained eigenlevels (row-major vec)."""

    level_freqs: np.ndarray          # (M,)
    matrix: np.ndarray               # (M^2, M^2) complex
    temperature: float
    baths: tuple[BathSpec, ...]
    jumps: tuple[JumpRecord, ...]

    @property
    def m_levels(self) -> int:
        return len(self.level_freqs)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """d(rho)/dt for a density matrix in the retained eigenbasis."""
        m = self.m_levels
        return (self.matrix @ rho.reshape(-1)).reshape(m, m)


def build_liouvillian(
    eig: EigenSystem,
    params: ModelParams,
    baths: Sequence[BathSpec],
    temperature: float = 0.0,
    m_levels: int = 24,
) -> Liouvillian:
    """Assemble the thermal Liouvillian on the m_levels lowest eigenlevels.

    Exactly degenerate pairs (|w_mn| < 1e-9 omega_c) get rate zero, which is
    also what J(0) = 0 dictates.  Upward and downward coefficients are built
    so their ratio is exactly the Boltzmann factor e^{-w/T}.
    """
    if temperature < 0.0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    if m_levels > DENSE_LEVEL_CAP:
        raise ValueError(f"m_levels={m_levels} exceeds the dense cap {DENSE_LEVEL_CAP}")
    w = eig.frequencies[:m_levels].copy()
    m = m_levels
    lsup = np.zeros((m * m, m * m), dtype=complex)

    # coherent part: diagonal -i(w_i - w_j) on each coherence
    diag = (-1j * (w[:, None] - w[None, :])).reshape(-1)
    lsup[np.arange(m * m), np.arange(m * m)] = diag

    def add_dissipator(n: int, mm: int, rate: float):
        # jump |n><mm| at the given rate
        if rate == 0.0:
            return
        lsup[n * m + n, mm * m + mm] += rate
        idx = np.arange(m)
        lsup[mm * m + idx, mm * m + idx] -= 0.5 * rate
        lsup[idx * m + mm, idx * m + mm] -= 0.5 * rate

    jumps: list[JumpRecord] = []
    degen_cut = DEGENERACY_TOL * params.omega_c
    for bath in baths:
        op = coupling_matrix(params, bath.channel)
        base = transition_rates(eig, op, bath, m_levels)
        for n in range(m):
            for k in range(n + 1, m):
                gap = w[k] - w[n]
                if gap < degen_cut or base[n, k] == 0.0:
                    continue
                boltz = 0.0
                if temperature > 0.0:
                    x = gap / temperature
                    boltz = 0.0 if x > 700.0 else math.exp(-x)
                down = base[n, k] / (1.0 - boltz) if boltz else base[n, k]
                up = down * boltz
                add_dissipator(n, k, down)
                jumps.append(JumpRecord(bath.channel, k, n, down))
                if up > 0.0:
                    add_dissipator(k, n, up)
                    jumps.append(JumpRecord(bath.channel, n, k, up))
    return Liouvillian(
        level_freqs=w,
        matrix=lsup,
        temperature=temperature,
        baths=tuple(baths),
        jumps=tuple(jumps),
    )


def liouvillian_eigenvalues(lv: Liouvillian) -> np.ndarray:
    """Superoperator eigenvalues sorted by descending Re, then ascending |Im|."""
    vals = np.linalg.eigvals(lv.matrix)
    order = np.lexsort((np.abs(vals.imag), -vals.real))
    return vals[order]


def liouvillian_gap(lv: Liouvillian, spectrum: np.ndarray | None = None) -> float:
    """Re of the slowest non-stationary eigenvalue (the relaxation gap).

    Raises if no eigenvalue sits within 1e-9 of zero, which would mean the
    assembly broke trace preservation.
    """
    vals = liouvillian_eigenvalues(lv) if spectrum is None else spectrum
    if np.min(np.abs(vals)) > STATIONARY_TOL:
        raise RuntimeError(
            f"no stationary eigenvalue found (closest |lambda| = {np.min(np.abs(vals)):.2e})"
        )
    zero_idx = int(np.argmin(np.abs(vals)))
    rest = np.delete(vals, zero_idx)
    return float(rest[0].real)


def gibbs_state(level_freqs: np.ndarray, temperature: float) -> np.ndarray:
    """Thermal density matrix on the retained levels (T = 0: ground projector)."""
    m = len(level_freqs)
    rho = np.zeros((m, m), dtype=complex)
    if temperature <= 0.0:
        # degenerate ground manifolds get equal weights
        ground = np.isclose(level_freqs, level_freqs[0], rtol=0.0, atol=1e-12)
        rho[np.diag_indices(m)] = ground / np.count_nonzero(ground)
        return rho
    weights = np.exp(-(level_freqs - level_freqs[0]) / temperature)
    rho[np.diag_indices(m)] = weights / weights.sum()
    return rho


def steady_state(lv: Liouvillian, spectrum: np.ndarray | None = None) -> np.ndarray:
    """Stationary density matrix from a direct trace-constrained solve.

    Replacing one row by the trace functional keeps full double precision
    even when the gap is tiny (an eigenvector route loses ~eps*||L||/gap).
    A multi-dimensional kernel is reported, never averaged over.
    """
    m = lv.m_levels
    a = lv.matrix.copy()
    b = np.zeros(m * m, dtype=complex)
    a[0, :] = 0.0
    a[0, (np.arange(m) * m) + np.arange(m)] = 1.0
    b[0] = 1.0
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        x = None
    scale = max(1.0, float(np.linalg.norm(lv.matrix)))
    if x is None or np.linalg.norm(lv.matrix @ x) > 1e-8 * scale:
        vals = liouvillian_eigenvalues(lv) if spectrum is None else spectrum
        n_zero = int(np.count_nonzero(np.abs(vals) < STATIONARY_TOL))
        if n_zero != 1:
            raise DegenerateSteadyStateError(
                f"Liouvillian kernel dimension {n_zero}; steady state not unique"
            )
        raise RuntimeError("trace-constrained solve failed to produce a kernel vector")
    rho = x.reshape(m, m)
    rho = (rho + rho.conj().T) / 2.0
    rho /= np.trace(rho).real
    return rho


@dataclass(frozen=True)
class Trajectory:
    """Time-evolved states in the retained eigenbasis plus named observables."""

    times: np.ndarray
    states: np.ndarray               # (n_times, M, M)
    observables: dict[str, np.ndarray] = field(default_factory=dict)
    projection_deficit: float = 0.0  # initial-state weight lost to truncation

    def trace_drift(self) -> float:
        return float(np.max(np.abs(np.einsum("tii->t", self.states).real - 1.0)))

    def min_eigenvalue(self) -> float:
        return float(min(np.linalg.eigvalsh(s)[0] for s in self.states))


def evolve(
    lv: Liouvillian,
    rho0: np.ndarray,
    times: np.ndarray,
    observables: dict[str, np.ndarray] | None = None,
    rtol: float = 1e-8,
    projection_deficit: float = 0.0,
) -> Trajectory:
    """Integrate d(rho)/dt = L rho through an adaptive stiff-capable solver.

    The complex system is unfolded to real form [[Re L, -Im L], [Im L, Re L]]
    so LSODA can switch between Adams and BDF as the run demands.
    """
    m = lv.m_levels
    if rho0.shape != (m, m):
        raise ValueError(f"rho0 shape {rho0.shape} does not match {m} levels")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) < 2 or np.any(np.diff(times) <= 0.0):
        raise ValueError("times must be a strictly ascending 1-D grid")
    lr, li = lv.matrix.real, lv.matrix.imag
    big = np.block([[lr, -li], [li, lr]])
    y0 = np.concatenate([rho0.reshape(-1).real, rho0.reshape(-1).imag])
    sol = solve_ivp(
        lambda t, y: big @ y,
        (times[0], times[-1]),
        y0,
        method="LSODA",
        t_eval=times,
        rtol=rtol,
        atol=rtol * 1e-2,
        jac=lambda t, y: big,
    )
    if not sol.success:
        reached = sol.t[-1] if len(sol.t) else times[0]
        raise RuntimeError(f"integration failed at t = {reached:.4g}: {sol.message}")
    n = m * m
    states = (sol.y[:n, :] + 1j * sol.y[n:, :]).T.reshape(len(times), m, m)
    obs = {}
    if observables:
        for name, op in observables.items():
            if op.shape != (m, m):
                raise ValueError(f"observable {name!r} shape {op.shape} != ({m}, {m})")
            obs[name] = np.einsum("ij,tji->t", op, states).real
    return Trajectory(
        times=times, states=states, observables=obs, projection_deficit=projection_deficit
    )


def project_pure_state(eig: EigenSystem, psi: np.ndarray, m_levels: int) -> tuple[np.ndarray, float]:
    """Project |psi> onto the retained eigenlevels; returns (rho0, lost weight).

    The projected state is renormalized, so rho0 is a valid density matrix;
    the deficit quantifies how much of |psi> the truncation discarded.
    """
    if m_levels > eig.converged_levels:
        raise ValueError(
            f"m_levels={m_levels} exceeds the {eig.converged_levels} converged levels"
        )
    coeff = eig.vectors[:, :m_levels].conj().T @ psi
    weight = float(np.real(coeff.conj() @ coeff))
    if weight <= 0.0:
        raise ValueError("state has no weight on the retained levels")
    rho0 = np.outer(coeff, coeff.conj()) / weight
    return rho0, 1.0 - weight


def lindblad_superoperator(
    hamiltonian: np.ndarray, jumps: Sequence[tuple[np.ndarray, float]]
) -> np.ndarray:
    """Generic dense Lindblad superoperator (row-major vec convention).

    L = -i(H x 1 - 1 x H^T) + sum_k r_k [c x c* - (c^dag c x 1 + 1 x (c^dag c)^T)/2].
    """
    d = hamiltonian.shape[0]
    if hamiltonian.shape != (d, d):
        raise ValueError("hamiltonian must be square")
    eye = np.eye(d)
    lsup = -1j * (np.kron(hamiltonian, eye) - np.kron(eye, hamiltonian.T))
    for c, rate in jumps:
        if c.shape != (d, d):
            raise ValueError("jump operator shape mismatch")
        if rate < 0.0:
            raise ValueError(f"jump rate must be >= 0, got {rate}")
        cdc = c.conj().T @ c
        lsup += rate * (
            np.kron(c, c.conj())
            - 0.5 * (np.kron(cdc, eye) + np.kron(eye, cdc.T))
        )
    return lsup


# ---------------------------------------------------------------------------
# Damped-oscillation fit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RabiFit:
    """Frequency/decay estimate for a damped oscillation."""

    omega: float
    decay: float
    n_extrema: int
    n_periods: float


def _spectral_peak(times: np.ndarray, values: np.ndarray) -> float:
    """Dominant angular frequency via Hann-windowed zero-padded FFT.

    The DC lobe is excluded by walking to the first local minimum of the
    magnitude spectrum; the peak is then refined with parabolic
    interpolation on log magnitude.
    """
    dt = times[1] - times[0]
    y = values - np.mean(values)
    n = len(y)
    window = np.hanning(n)
    n_pad = 1 << max(12, int(np.ceil(np.log2(16 * n))))
    spec = np.abs(np.fft.rfft(y * window, n_pad))
    # walk past the residual DC lobe
    k0 = 1
    while k0 + 1 < len(spec) and spec[k0 + 1] < spec[k0]:
        k0 += 1
    if k0 + 1 >= len(spec):
        raise OverdampedSeriesError("spectrum is monotone; no oscillation peak")
    k = k0 + int(np.argmax(spec[k0:]))
    if 0 < k < len(spec) - 1 and spec[k - 1] > 0.0 and spec[k + 1] > 0.0:
        la, lb, lc = np.log(spec[k - 1 : k + 2])
        denom = la - 2.0 * lb + lc
        shift = 0.5 * (la - lc) / denom if denom != 0.0 else 0.0
        k = k + np.clip(shift, -0.5, 0.5)
    return 2.0 * math.pi * k / (n_pad * dt)


def fit_rabi_decay(times: np.ndarray, values: np.ndarray) -> RabiFit:
    """Fit a damped oscillation: frequency from the spectrum, decay from extrema.

    The decay rate comes from a log-linear regression of successive
    maximum-minimum differences, which cancels any constant offset in the
    series.  Series with fewer than three interior extrema are rejected as
    overdamped; fits covering fewer than five periods are rejected as
    underresolved.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(times) != len(values) or len(times) < 16:
        raise ValueError("need matching arrays with at least 16 samples")
    if np.any(np.diff(times) <= 0.0):
        raise ValueError("times must be strictly ascending")
    omega = _spectral_peak(times, values)

    # locate extrema on a lightly smoothed copy (flat valleys otherwise shed
    # spurious micro-turns), then refine each on the raw samples
    dt = float(np.median(np.diff(times)))
    half = max(1, int(round(2.0 * math.pi / omega / (16.0 * dt))))
    kernel = np.ones(2 * half + 1) / (2 * half + 1)
    smooth = np.convolve(values, kernel, mode="same")
    dv = np.diff(smooth[half:-half] if half else smooth)
    sign = np.sign(dv)
    sign[sign == 0.0] = 1.0
    rough = np.nonzero(np.diff(sign))[0] + 1 + half
    turns = []
    for i in rough:
        lo, hi = max(0, i - 2 * half), min(len(values), i + 2 * half + 1)
        seg = values[lo:hi]
        j = lo + (int(np.argmax(seg)) if dv[min(i - half - 1, len(dv) - 1)] > 0 else int(np.argmin(seg)))
        if not turns or j - turns[-1] > half:
            turns.append(j)
    turns = np.asarray(turns, dtype=int)
    if len(turns) < 3:
        raise OverdampedSeriesError(
            f"only {len(turns)} extrema found; cannot separate decay from drift"
        )
    ext_t = times[turns]
    ext_v = values[turns]
    swings = np.abs(np.diff(ext_v))
    mid_t = (ext_t[1:] + ext_t[:-1]) / 2.0
    good = swings > 0.0
    if np.count_nonzero(good) < 2:
        raise OverdampedSeriesError("extrema swings vanish; nothing to regress")
    slope, _ = np.polyfit(mid_t[good], np.log(swings[good]), 1)
    decay = -float(slope)
    n_periods = (times[-1] - times[0]) * omega / (2.0 * math.pi)
    if n_periods < 5.0:
        raise ValueError(f"series covers only {n_periods:.2f} oscillation periods (need >= 5)")
    return RabiFit(omega=float(omega), decay=decay, n_extrema=len(turns), n_periods=float(n_periods))
