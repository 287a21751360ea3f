"""Thermal linear-response spectra: structure factors, impedances, transmission.

Structure factors are thermally weighted sums of transition lines,
delta-broadened into Lorentzians of half-width eta.  All dimensional
prefactors (hbar, the LC and dipole impedance scales) are set to 1; only
ratios survive in the transmission function, so a single unit knob would
multiply through without changing any reported shape.

The Boltzmann sum runs over the m_levels retained eigenlevels; requests
whose thermal tail weight beyond the last level would exceed 1e-6 are
rejected rather than silently truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigen import EigenSystem
from .lindblad import coupling_matrix
from .operators import ModelParams

TAIL_TOL = 1e-6


@dataclass(frozen=True)
class SpectrumGrid:
    """One response spectrum on a frequency grid, with its line list."""

    omegas: np.ndarray
    values: np.ndarray
    broadening: float
    temperature: float
    kind: str
    peaks: tuple[tuple[float, float], ...] = ()   # (line frequency, weight)


def thermal_weights(freqs: np.ndarray, temperature: float) -> np.ndarray:
    """Normalized Boltzmann weights over the retained levels.

    Rejects the truncation when the last retained level still carries more
    than TAIL_TOL of the total weight, since then the levels beyond it
    cannot be negligible.
    """
    if temperature < 0.0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0.0:
        w = np.isclose(freqs, freqs[0], rtol=0.0, atol=1e-12).astype(float)
        return w / w.sum()
    w = np.exp(-(freqs - freqs[0]) / temperature)
    w /= w.sum()
    if w[-1] > TAIL_TOL:
        raise ValueError(
            f"thermal tail weight {w[-1]:.2e} at the truncation edge exceeds {TAIL_TOL:.0e}; "
            "retain more levels or lower the temperature"
        )
    return w


def _lorentzian_sum(
    peaks: list[tuple[float, float]], omegas: np.ndarray, eta: float
) -> np.ndarray:
    values = np.zeros_like(omegas)
    for w_line, weight in peaks:
        values += weight * (eta / math.pi) / ((omegas - w_line) ** 2 + eta**2)
    return values


def _structure_factor(
    eig: EigenSystem,
    params: ModelParams,
    channel: str,
    temperature: float,
    omegas: np.ndarray,
    eta: float,
    m_levels: int,
    kind: str,
) -> SpectrumGrid:
    if eta <= 0.0:
        raise ValueError(f"broadening eta must be positive, got {eta}")
    omegas = np.asarray(omegas, dtype=float)
    if omegas.ndim != 1 or np.any(np.diff(omegas) <= 0.0):
        raise ValueError("frequency grid must be strictly ascending")
    if m_levels > eig.converged_levels:
        raise ValueError(
            f"m_levels={m_levels} exceeds the {eig.converged_levels} converged levels"
        )
    freqs = eig.frequencies[:m_levels]
    weights = thermal_weights(freqs, temperature)
    op = coupling_matrix(params, channel)
    v = eig.vectors[:, :m_levels]
    elem2 = np.abs(v.conj().T @ op.entries @ v) ** 2
    peaks = []
    for n in range(m_levels):
        if weights[n] == 0.0:
            continue
        for m in range(m_levels):
            strength = weights[n] * elem2[n, m]
            if strength > 0.0:
                peaks.append((freqs[m] - freqs[n], strength))
    return SpectrumGrid(
        omegas=omegas,
        values=_lorentzian_sum(peaks, omegas, eta),
        broadening=eta,
        temperature=temperature,
        kind=kind,
        peaks=tuple(peaks),
    )


def cavity_structure_factor(
    eig: EigenSystem,
    params: ModelParams,
    temperature: float,
    omegas: np.ndarray,
    eta: float,
    m_levels: int = 24,
) -> SpectrumGrid:
    """S_c(w): thermally weighted quadrature lines |<n|a - a^dag|m>|^2."""
    return _structure_factor(
        eig, params, "cavity", temperature, omegas, eta, m_levels, "cavity_structure"
    )


def dipole_structure_factor(
    eig: EigenSystem,
    params: ModelParams,
    temperature: float,
    omegas: np.ndarray,
    eta: float,
    m_levels: int = 24,
) -> SpectrumGrid:
    """S_dip(w): thermally weighted dipole lines |<n|s_x|m>|^2."""
    return _structure_factor(
        eig, params, "dipole", temperature, omegas, eta, m_levels, "dipole_structure"
    )


def system_impedance(s_c: SpectrumGrid) -> SpectrumGrid:
    """Z_sys(w) = -i w S_c(w) in natural units (pointwise map)."""
    return SpectrumGrid(
        omegas=s_c.omegas,
        values=-1j * s_c.omegas * s_c.values,
        broadening=s_c.broadening,
        temperature=s_c.temperature,
        kind="impedance",
        peaks=s_c.peaks,
    )


def radiation_impedance(s_dip: SpectrumGrid) -> SpectrumGrid:
    """Z_rad(w) = -i w S_dip(w) in natural units (pointwise map)."""
    return system_impedance(s_dip)


def transmission(z_sys: SpectrumGrid, q_factor: float) -> SpectrumGrid:
    """Current transmission T(w) = Q^{-1} / (Q^{-1} + Z_LC / Z_sys), Z_LC = 1.

    Algebraically identical to the current-divider form
    Z_sys / (Z_sys + Q Z_LC); points with Z_sys = 0 take the limiting T = 0.
    """
    if q_factor <= 0.0:
        raise ValueError(f"quality factor must be positive, got {q_factor}")
    z = z_sys.values
    t = np.zeros_like(z, dtype=complex)
    nz = z != 0.0
    t[nz] = (1.0 / q_factor) / (1.0 / q_factor + 1.0 / z[nz])
    return SpectrumGrid(
        omegas=z_sys.omegas,
        values=t,
        broadening=z_sys.broadening,
        temperature=z_sys.temperature,
        kind="transmission",
        peaks=z_sys.peaks,
    )
