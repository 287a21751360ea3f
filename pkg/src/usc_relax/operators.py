"""Truncated-Fock operators and model Hamiltonians.

Everything is assembled on a tensor-product basis with the matter index
slow and the photon index fast: the product state |s, n> sits at row
s * n_fock + n.  Energies are in units of a reference frequency
(conventionally omega_c = 1) and hbar = 1 throughout.

The displacement kernel exp[x(a - a^dag)] is evaluated through the
associated-Laguerre closed form with log-space factorial ratios, so single
matrix elements are available without building or exponentiating matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

# Hard cap on the Hilbert-space dimension of any assembled Hamiltonian.
# Dense diagonalization beyond this is almost certainly a mistake upstream.
DIM_CAP = 4096


def default_n_fock(g: float, omega_c: float = 1.0) -> int:
    """Fock truncation adequate for the low spectrum at coupling g.

    Polaron-displaced states occupy <a^dag a> ~ (g/omega_c)^2, so the
    cutoff has to grow quadratically with the coupling.
    """
    return int(math.ceil(4.0 * (g / omega_c) ** 2 + 40.0))


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the asymmetric quantum Rabi / extended Dicke model.

    epsilon is the parity-breaking dipole asymmetry; spin_n is the N of the
    spin-N/2 matter system (N = 1 recovers the two-level Rabi model).
    """

    omega_c: float = 1.0
    omega_d: float = 1.0
    g: float = 0.0
    epsilon: float = 0.0
    n_fock: int = 40
    spin_n: int = 1

    def __post_init__(self):
        if self.omega_c <= 0.0:
            raise ValueError(f"omega_c must be positive, got {self.omega_c}")
        if self.omega_d < 0.0:
            raise ValueError(f"omega_d must be non-negative, got {self.omega_d}")
        if self.n_fock < 2:
            raise ValueError(f"n_fock must be at least 2, got {self.n_fock}")
        if self.spin_n < 1:
            raise ValueError(f"spin_n must be a positive integer, got {self.spin_n}")
        if (self.spin_n + 1) * self.n_fock > DIM_CAP:
            raise ValueError(
                f"requested dimension {(self.spin_n + 1) * self.n_fock} exceeds "
                f"the dense cap {DIM_CAP}"
            )

    @classmethod
    def auto(cls, **kwargs) -> "ModelParams":
        """Construct with the default coupling-dependent Fock truncation."""
        p = cls(**{k: v for k, v in kwargs.items() if k != "n_fock"})
        return replace(p, n_fock=default_n_fock(p.g, p.omega_c))

    @property
    def dim(self) -> int:
        return (self.spin_n + 1) * self.n_fock


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense square operator with its dimension and a provenance label."""

    dim: int
    entries: np.ndarray
    label: str = ""

    def __post_init__(self):
        if self.entries.shape != (self.dim, self.dim):
            raise ValueError(
                f"entries shape {self.entries.shape} inconsistent with dim {self.dim}"
            )

    def hermiticity_defect(self) -> float:
        """Relative Frobenius asymmetry ||H - H^dag|| / ||H||."""
        norm = np.linalg.norm(self.entries)
        if norm == 0.0:
            return 0.0
        return np.linalg.norm(self.entries - self.entries.conj().T) / norm


def _op(entries: np.ndarray, label: str) -> OperatorMatrix:
    return OperatorMatrix(dim=entries.shape[0], entries=entries, label=label)


def fock_ladder(n_fock: int) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Annihilation and creation operators on the truncated Fock space."""
    if n_fock < 2:
        raise ValueError(f"n_fock must be at least 2, got {n_fock}")
    a = np.zeros((n_fock, n_fock))
    idx = np.arange(1, n_fock)
    a[idx - 1, idx] = np.sqrt(idx)
    return _op(a, "a"), _op(a.T.copy(), "a_dag")


def spin_operators(spin_n: int) -> tuple[OperatorMatrix, OperatorMatrix, OperatorMatrix]:
    """(S_x, S_y, S_z) for spin N/2 in the basis m = N/2 ... -N/2 (descending)."""
    if spin_n < 1:
        raise ValueError(f"spin_n must be a positive integer, got {spin_n}")
    j = spin_n / 2.0
    m = j - np.arange(spin_n + 1)  # descending; index 0 is m = +j
    sz = np.diag(m).astype(complex)
    sp = np.zeros((spin_n + 1, spin_n + 1), dtype=complex)
    # <m+1|S_+|m> = sqrt(j(j+1) - m(m+1)); row index of m+1 is one above m.
    for col in range(1, spin_n + 1):
        mm = m[col]
        sp[col - 1, col] = math.sqrt(j * (j + 1) - mm * (mm + 1))
    sm = sp.conj().T
    sx = (sp + sm) / 2.0
    sy = (sp - sm) / 2.0j
    return _op(sx, "S_x"), _op(sy, "S_y"), _op(sz, "S_z")


# ---------------------------------------------------------------------------
# Laguerre / displacement kernel
# ---------------------------------------------------------------------------

def laguerre(n: int, alpha: int, x: float) -> float:
    """Generalized Laguerre polynomial L_n^(alpha)(x), upward recurrence.

    The three-term recurrence
        (k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}
    is numerically benign for the moderate n, alpha, x >= 0 used here.
    """
    if n < 0:
        raise ValueError(f"degree n must be non-negative, got {n}")
    if alpha < 0:
        raise ValueError(f"order alpha must be non-negative, got {alpha}")
    if n == 0:
        return 1.0
    prev = 1.0
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def _fact_ratio_sqrt(small: int, large: int) -> float:
    """sqrt(small! / large!) in log space; exact for small = large."""
    return math.exp(0.5 * (math.lgamma(small + 1) - math.lgamma(large + 1)))


def displacement_element(n: int, m: int, x: float) -> float:
    """<n| exp[x (a - a^dag)] |m> from the Laguerre closed form.

    The operator is real and unitary; with k = n - m >= 0 the element is
    (-x)^k sqrt(m!/n!) e^{-x^2/2} L_m^{(k)}(x^2), and the transpose picks up
    (-1)^k.  Note the sign: exp[x(a - a^dag)] displaces by -x in the usual
    D(alpha) convention, so lower-triangular elements carry (-1)^(n-m)
    relative to the unsigned kernel tabulated for the multi-photon coupling.
    """
    if n < 0 or m < 0:
        raise ValueError(f"Fock labels must be non-negative, got ({n}, {m})")
    lo, hi = (m, n) if n >= m else (n, m)
    k = hi - lo
    mag = (
        abs(x) ** k
        * _fact_ratio_sqrt(lo, hi)
        * math.exp(-0.5 * x * x)
        * laguerre(lo, k, x * x)
    )
    if n >= m:
        sign = (-1.0) ** k if x >= 0.0 else 1.0
    else:
        sign = 1.0 if x >= 0.0 else (-1.0) ** k
    return sign * mag


def displacement_matrix(n_fock: int, x: float) -> OperatorMatrix:
    """Dense exp[x (a - a^dag)] on the truncated Fock space.

    Assembled diagonal-by-diagonal from the closed form with the Laguerre
    recurrence vectorized over the diagonal offset, O(n_fock^2) total.
    """
    if n_fock < 1:
        raise ValueError(f"n_fock must be positive, got {n_fock}")
    xs = x * x
    d = np.zeros((n_fock, n_fock))
    pref = math.exp(-0.5 * xs)
    alphas = np.arange(n_fock, dtype=float)  # diagonal offset k
    # L_m^{(k)}(xs) for all k at fixed m, iterated upward in m.
    prev = np.ones(n_fock)
    cur = 1.0 + alphas - xs
    lg = np.cumsum(np.log(np.maximum(np.arange(n_fock, dtype=float), 1.0)))  # log m!
    for m_lo in range(n_fock):
        lag = prev if m_lo == 0 else cur
        if m_lo >= 1:
            k = m_lo  # recurrence step index
            prev, cur = cur, ((2 * k + 1 + alphas - xs) * cur - (k + alphas) * prev) / (k + 1)
        ks = np.arange(n_fock - m_lo)
        his = m_lo + ks
        ratio = np.exp(0.5 * (lg[m_lo] - lg[his]))
        vals = (abs(x) ** ks) * ratio * pref * lag[: n_fock - m_lo]
        alternating = np.where(ks % 2 == 0, 1.0, -1.0)
        lower_signs = alternating if x >= 0.0 else 1.0
        upper_signs = 1.0 if x >= 0.0 else alternating
        d[his, m_lo] = lower_signs * vals  # n = m_lo + k >= m = m_lo
        d[m_lo, his] = upper_signs * vals
    return _op(d.astype(complex), f"D({x})")


# ---------------------------------------------------------------------------
# Hamiltonian builders
# ---------------------------------------------------------------------------

def _tensor(mat_op: np.ndarray, ph_op: np.ndarray) -> np.ndarray:
    # matter slow, photon fast
    return np.kron(mat_op, ph_op)


def _hermitize(h: np.ndarray) -> np.ndarray:
    return (h + h.conj().T) / 2.0


def build_rabi(params: ModelParams) -> OperatorMatrix:
    """Lab-frame asymmetric Rabi Hamiltonian for spin_n = 1.

    H = omega_c a^dag a + omega_d s_z + epsilon s_x + g (a + a^dag) s_x.
    """
    if params.spin_n != 1:
        raise ValueError("build_rabi is the two-level model; use build_edm for spin_n > 1")
    a, ad = fock_ladder(params.n_fock)
    sx, _, sz = spin_operators(1)
    eye_s = np.eye(2)
    eye_f = np.eye(params.n_fock)
    h = (
        params.omega_c * _tensor(eye_s, ad.entries @ a.entries)
        + params.omega_d * _tensor(sz.entries, eye_f)
        + params.epsilon * _tensor(sx.entries, eye_f)
        + params.g * _tensor(sx.entries, a.entries + ad.entries)
    )
    return _op(_hermitize(h), "H_rabi")


def polaron_constant(params: ModelParams) -> float:
    """c-number (g^2/omega_c) <S_x^2> = g^2 N (... ) generated by the polaron map.

    For spin-1/2 this is g^2/(4 omega_c): the polaron transform of the Rabi
    Hamiltonian produces -g^2/(4 omega_c) * identity, which the closed-form
    block expressions (and the extended-model Hamiltonian, where the S_x^2
    term cancels it) implicitly absorb.  Energies quoted in that convention
    sit above the lab-frame Rabi spectrum by exactly this constant.
    """
    return params.g**2 / (4.0 * params.omega_c)


def build_polaron_rabi(params: ModelParams) -> OperatorMatrix:
    """Polaron-frame Rabi Hamiltonian, unitarily equivalent to build_rabi.

    H = omega_c a^dag a + epsilon s_x
        + (omega_d/2) [D(g/omega_c) s_+^x + D^dag(g/omega_c) s_-^x]
        - g^2/(4 omega_c),
    with s_pm^x = s_z -+ ... the ladder operators along the s_x axis.  The
    trailing constant keeps the spectrum identical to the lab frame (the
    transform of omega_c a^dag a + g(a+a^dag)s_x leaves it behind).
    """
    if params.spin_n != 1:
        raise ValueError("build_polaron_rabi is the two-level model")
    sx, sy, sz = spin_operators(1)
    s_plus = sz.entries + 1j * sy.entries
    s_minus = sz.entries - 1j * sy.entries
    a, ad = fock_ladder(params.n_fock)
    dmat = displacement_matrix(params.n_fock, params.g / params.omega_c).entries
    eye_f = np.eye(params.n_fock)
    h = (
        params.omega_c * _tensor(np.eye(2), ad.entries @ a.entries)
        + params.epsilon * _tensor(sx.entries, eye_f)
        + 0.5 * params.omega_d * (_tensor(s_plus, dmat) + _tensor(s_minus, dmat.conj().T))
        - polaron_constant(params) * np.eye(2 * params.n_fock)
    )
    return _op(_hermitize(h), "H_rabi_polaron")


def build_edm(params: ModelParams) -> OperatorMatrix:
    """Extended Dicke model with the quadratic S_x^2 term.

    H = omega_c a^dag a + omega_d S_z + g (a + a^dag) S_x
        + (g^2/omega_c) S_x^2 + epsilon S_x
    on the spin-N/2 (x) Fock product space.  At spin_n = 1 this is the Rabi
    Hamiltonian plus the constant g^2/(4 omega_c).
    """
    a, ad = fock_ladder(params.n_fock)
    sx, _, sz = spin_operators(params.spin_n)
    eye_s = np.eye(params.spin_n + 1)
    eye_f = np.eye(params.n_fock)
    h = (
        params.omega_c * _tensor(eye_s, ad.entries @ a.entries)
        + params.omega_d * _tensor(sz.entries, eye_f)
        + params.epsilon * _tensor(sx.entries, eye_f)
        + params.g * _tensor(sx.entries, a.entries + ad.entries)
        + (params.g**2 / params.omega_c) * _tensor(sx.entries @ sx.entries, eye_f)
    )
    return _op(_hermitize(h), "H_edm")


def build_edm_hp(params: ModelParams, n_boson: int) -> OperatorMatrix:
    """Holstein-Primakoff form of the polaron extended Dicke model.

    H = omega_c a^dag a + epsilon b^dag b
        + (omega_d sqrt(N) / 2) [D(g/omega_c) b^dag + D^dag(g/omega_c) b]
    with b the dipole excitation mode truncated at n_boson states.  Valid in
    the lowest-wells regime <b^dag b> << N; also exercised at small g where
    the coupling reduces to a linear drive (two displaced oscillators).
    """
    if n_boson < 2:
        raise ValueError(f"n_boson must be at least 2, got {n_boson}")
    if n_boson * params.n_fock > DIM_CAP:
        raise ValueError(
            f"requested dimension {n_boson * params.n_fock} exceeds the dense cap {DIM_CAP}"
        )
    a, ad = fock_ladder(params.n_fock)
    b, bd = fock_ladder(n_boson)
    dmat = displacement_matrix(params.n_fock, params.g / params.omega_c).entries
    eye_b = np.eye(n_boson)
    coupling = 0.5 * params.omega_d * math.sqrt(params.spin_n)
    h = (
        params.omega_c * _tensor(eye_b, ad.entries @ a.entries)
        + params.epsilon * _tensor(bd.entries @ b.entries, np.eye(params.n_fock))
        + coupling * (_tensor(bd.entries, dmat) + _tensor(b.entries, dmat.conj().T))
    )
    return _op(_hermitize(h), "H_edm_hp")
