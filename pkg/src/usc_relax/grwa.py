"""Generalized rotating-wave closed forms for the polaron Rabi model.

Block-diagonal approximations of the polaron-frame Hamiltonian: the
symmetric (epsilon = 0) dressed ladder with Hopfield angles, the
k-photon-resonance blocks of the asymmetric model, multi-photon Rabi
frequencies, and the analytic transition matrix elements between dressed
states.

Energies produced here are referenced to the polaron-frame zero in which
the c-number g^2/(4 omega_c) generated by the polaron transform is dropped
(the convention of the closed-form expressions).  Add
operators.polaron_constant(params) to a lab-frame Rabi eigenvalue before
comparing, or equivalently subtract it from the values returned here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .operators import ModelParams, displacement_element, laguerre

RESONANCE_TOL = 1e-9  # |detuning|/omega_c below which a block counts as exactly resonant


def _two_level_check(params: ModelParams) -> None:
    if params.spin_n != 1:
        raise ValueError("gRWA closed forms are for the two-level (spin_n = 1) model")


def tunneling_suppression(params: ModelParams) -> float:
    """Polaron-dressed tunneling scale omega_d e^{-g^2/(2 omega_c^2)}."""
    x = params.g / params.omega_c
    return params.omega_d * math.exp(-0.5 * x * x)


def ground_state_energy(params: ModelParams) -> float:
    """Polaron-frame ground energy -sqrt(eps^2 + omega_d^2 e^{-g^2/omega_c^2})/2.

    Includes the vacuum-block dressing by the diagonal displacement element
    D_00; reduces to -omega_d/2 at g = 0, epsilon = 0.
    """
    _two_level_check(params)
    x = params.g / params.omega_c
    return -0.5 * math.hypot(params.epsilon, params.omega_d * math.exp(-0.5 * x * x))


def _hopfield_from_block(delta: float, off: float) -> tuple[float, float]:
    """(cos, sin) of the half mixing angle for [[d/2, c],[c, -d/2]] blocks.

    delta is the diagonal asymmetry (A - B), off the full off-diagonal
    splitting scale (2C).  Exact degeneracy returns the equal-weight pair.
    """
    r = math.hypot(delta, off)
    if r == 0.0 or abs(delta) < RESONANCE_TOL * r:
        return (math.sqrt(0.5), math.sqrt(0.5))
    cos_half = math.sqrt(0.5 * (1.0 + delta / r))
    sin_half = math.sqrt(0.5 * (1.0 - delta / r))
    return (cos_half, sin_half)


# ---------------------------------------------------------------------------
# Symmetric model (epsilon = 0)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockCoefficients:
    """Entries of the n-th polaron block [[a, c], [c, b]] at epsilon = 0.

    Basis is (|down, n>, |up, n-1>); a carries the photon-like diagonal,
    b the matter-like one, c the Laguerre-dressed coupling that reduces to
    the Jaynes-Cummings (g/2) sqrt(n) at small coupling.
    """

    n: int
    a: float
    b: float
    c: float


@dataclass(frozen=True)
class DressedPair:
    """Dressed doublet of one polaron block with its Hopfield weights."""

    n: int
    omega_plus: float
    omega_minus: float
    cos_half: float
    sin_half: float


def symmetric_block(params: ModelParams, n: int) -> BlockCoefficients:
    """Closed-form block coefficients A_n, B_n, C_n of the symmetric model."""
    _two_level_check(params)
    if params.epsilon != 0.0:
        raise ValueError("symmetric blocks require epsilon = 0; use k_resonance_block")
    if n < 1:
        raise ValueError(f"block index n must be >= 1, got {n}")
    x = params.g / params.omega_c
    xs = x * x
    half_tunnel = 0.5 * params.omega_d * math.exp(-0.5 * xs)
    a = params.omega_c * n - half_tunnel * laguerre(n, 0, xs)
    b = params.omega_c * (n - 1) + half_tunnel * laguerre(n - 1, 0, xs)
    c = x * half_tunnel * math.exp(0.5 * (math.lgamma(n) - math.lgamma(n + 1))) * laguerre(
        n - 1, 1, xs
    )
    return BlockCoefficients(n=n, a=a, b=b, c=c)


def dressed_pair(block: BlockCoefficients) -> DressedPair:
    """Eigenvalues and Hopfield weights of one explicit 2x2 block."""
    mean = 0.5 * (block.a + block.b)
    # (a+b)^2/4 + c^2 - ab == (a-b)^2/4 + c^2, the stable form
    root = math.hypot(0.5 * (block.a - block.b), block.c)
    cos_half, sin_half = _hopfield_from_block(block.a - block.b, 2.0 * block.c)
    return DressedPair(
        n=block.n,
        omega_plus=mean + root,
        omega_minus=mean - root,
        cos_half=cos_half,
        sin_half=sin_half,
    )


def symmetric_spectrum_and_hopfield(params: ModelParams, n_max: int) -> list[DressedPair]:
    """Dressed pairs of the symmetric polaron ladder for blocks 1..n_max."""
    return [dressed_pair(symmetric_block(params, n)) for n in range(1, n_max + 1)]


def symmetric_levels(params: ModelParams, n_levels: int) -> list[float]:
    """Lowest polaron-frame energies at epsilon = 0: vacuum level plus pairs."""
    n_blocks = n_levels // 2 + 2
    levels = [ground_state_energy(params)]
    for pair in symmetric_spectrum_and_hopfield(params, n_blocks):
        levels.extend((pair.omega_minus, pair.omega_plus))
    return sorted(levels)[:n_levels]


# ---------------------------------------------------------------------------
# Asymmetric resonances epsilon ~ k omega_c
# ---------------------------------------------------------------------------

def rabi_frequency(k: int, n: int, params: ModelParams) -> float:
    """Multi-photon Rabi frequency Omega_(k,n) = omega_d D_{n,n-k}(g/omega_c).

    Uses the unsigned-x displacement convention of the tabulated coupling,
    i.e. the matrix element of exp[x(a^dag - a)]; it differs from
    displacement_element(n, n-k, x) by the photon-parity gauge (-1)^k that
    no splitting or rate can see.  The sign of the returned value follows
    the Laguerre factor.
    """
    _two_level_check(params)
    if k < 1:
        raise ValueError(f"resonance order k must be >= 1, got {k}")
    if n < k:
        raise ValueError(f"block index n must be >= k, got n={n}, k={k}")
    return params.omega_d * displacement_element(n, n - k, -params.g / params.omega_c)


@dataclass(frozen=True)
class KResonanceBlock:
    """One (k, n) block of the asymmetric polaron model.

    Spanned by (|left, n>, |right, n-k>); detuning = omega_c k - epsilon,
    coupling = Omega_(k,n).  valid is the printed applicability condition
    epsilon, omega_c > omega_d e^{-g^2/(2 omega_c^2)}.
    """

    k: int
    n: int
    center: float
    detuning: float
    coupling: float
    omega_plus: float
    omega_minus: float
    cos_half: float
    sin_half: float
    valid: bool


def k_resonance_block(params: ModelParams, k: int, n: int) -> KResonanceBlock:
    """Closed-form dressed block near the k-photon asymmetric resonance."""
    _two_level_check(params)
    if k < 1:
        raise ValueError(f"resonance order k must be >= 1, got {k}")
    if n < k:
        raise ValueError(f"block index n must be >= k, got n={n}, k={k}")
    detuning = params.omega_c * k - params.epsilon
    coupling = rabi_frequency(k, n, params)
    center = params.omega_c * (n - 0.5 * k)
    half_split = 0.5 * math.hypot(detuning, coupling)
    if abs(detuning) < RESONANCE_TOL * params.omega_c:
        cos_half = sin_half = math.sqrt(0.5)
    else:
        cos_half, sin_half = _hopfield_from_block(detuning, coupling)
    scale = tunneling_suppression(params)
    return KResonanceBlock(
        k=k,
        n=n,
        center=center,
        detuning=detuning,
        coupling=coupling,
        omega_plus=center + half_split,
        omega_minus=center - half_split,
        cos_half=cos_half,
        sin_half=sin_half,
        valid=(params.epsilon > scale and params.omega_c > scale),
    )


def asymmetric_levels(params: ModelParams, k: int, n_levels: int) -> list[float]:
    """Lowest polaron-frame energies near the k-photon resonance.

    Ground level from the vacuum-block formula, unpaired |left, n> singles
    for 0 < n < k at omega_c n - epsilon/2 (their small diagonal dressing is
    neglected, as in the printed treatment), then the (k, n >= k) doublets.
    """
    if k < 1:
        raise ValueError(f"resonance order k must be >= 1, got {k}")
    levels = [ground_state_energy(params)]
    for n in range(1, k):
        levels.append(params.omega_c * n - 0.5 * params.epsilon)
    n_top = k + n_levels // 2 + 2
    for n in range(k, n_top + 1):
        block = k_resonance_block(params, k, n)
        levels.extend((block.omega_minus, block.omega_plus))
    return sorted(levels)[:n_levels]


def block_sx_element(block: KResonanceBlock) -> float:
    """<+|s_x|-> within one (k, n) block: cos(theta/2) sin(theta/2).

    The only non-diagonal s_x matrix element the block approximation allows;
    the ground state stays disconnected (s_x is diagonal on |left/right, 0>).
    """
    return block.cos_half * block.sin_half


# ---------------------------------------------------------------------------
# Dressed transition elements of the symmetric ladder (epsilon = 0)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DressedElements:
    """Analytic transition elements between blocks n and n-1 (or the ground).

    quad holds <.|(a^dag - a)|.> combinations, dipole the <.|s_x|.> ones.
    Signs follow the printed convention with non-negative half-angle
    functions; only magnitudes are basis-independent.  The ground-row s_x
    entries carry the spin-1/2 normalization (s_x = sigma_x/2), which the
    printed table leaves implicit.
    """

    n: int
    quad: dict[str, float]
    dipole: dict[str, float]


def dressed_matrix_elements(params: ModelParams, n: int) -> DressedElements:
    """Transition elements |+,n>,|-,n> -> |+,n-1>,|-,n-1> (n >= 2) or -> GS (n = 1)."""
    _two_level_check(params)
    if params.epsilon != 0.0:
        raise ValueError("dressed transition table applies to the symmetric model")
    if n < 1:
        raise ValueError(f"block index n must be >= 1, got {n}")
    pair_n = dressed_pair(symmetric_block(params, n))
    cn, sn = pair_n.cos_half, pair_n.sin_half
    if n == 1:
        quad = {
            "plus_ground": cn,  # |<down,0|(a^dag - a)|+,1>|, printed via (a + a^dag)
            "minus_ground": -sn,
        }
        dipole = {
            "plus_ground": 0.5 * sn,
            "minus_ground": 0.5 * cn,
        }
        return DressedElements(n=1, quad=quad, dipole=dipole)
    pair_m = dressed_pair(symmetric_block(params, n - 1))
    cm, sm = pair_m.cos_half, pair_m.sin_half
    rn, rm = math.sqrt(n), math.sqrt(n - 1)
    quad = {
        "plus_minus": rm * cm * sn - rn * cn * sm,
        "minus_plus": rm * sm * cn - rn * sn * cm,
        "plus_plus": rm * sm * sn + rn * cn * cm,
        "minus_minus": rm * cm * cn + rn * sn * sm,
    }
    dipole = {
        "plus_minus": -0.5 * sm * sn,
        "minus_plus": 0.5 * cm * cn,
        "plus_plus": 0.5 * cm * sn,
        "minus_minus": -0.5 * sm * cn,
    }
    return DressedElements(n=n, quad=quad, dipole=dipole)


@dataclass(frozen=True)
class RateLimitRow:
    """Analytic dressed-ladder rate next to its printed USC limit.

    rate = J(|delta_omega|) |element|^2 with the closed-form element;
    printed_limit is the value the large-g discussion quotes (gamma for
    like-branch cavity decay, 0 for the cross-branch dipole channel), or
    None where no limit is printed.  Note the printed cavity limit drops
    the photon-number factor of the matrix element: the plus-branch
    (+,n)->(+,n-1) rate genuinely approaches n*gamma, the minus branch
    (n-1)*gamma; only the n giving unit factor lands on gamma itself.
    """

    channel: str
    from_label: str
    to_label: str
    delta_omega: float
    element: float
    rate: float
    printed_limit: float | None


def usc_rate_limits(params: ModelParams, baths: Sequence, n_max: int = 4) -> list[RateLimitRow]:
    """Closed-form dressed transition rates for comparison with numerics.

    baths supplies the spectral laws (objects with .channel in
    {"cavity", "dipole"} and .spectral_density(omega)); rows cover the
    neighbouring-block transitions up to block n_max plus the ground rows.
    """
    _two_level_check(params)
    by_channel = {b.channel: b for b in baths}
    pairs = {n: dressed_pair(symmetric_block(params, n)) for n in range(1, n_max + 1)}
    ground = ground_state_energy(params)
    rows: list[RateLimitRow] = []

    def add(channel, frm, to, domega, elem, limit):
        bath = by_channel.get(channel)
        if bath is None:
            return
        rows.append(
            RateLimitRow(
                channel=channel,
                from_label=frm,
                to_label=to,
                delta_omega=domega,
                element=elem,
                rate=bath.spectral_density(abs(domega)) * elem * elem,
                printed_limit=limit,
            )
        )

    # block 1 -> ground
    el1 = dressed_matrix_elements(params, 1)
    p1 = pairs[1]
    add("cavity", "(+,1)", "GS", p1.omega_plus - ground, el1.quad["plus_ground"], None)
    add("cavity", "(-,1)", "GS", p1.omega_minus - ground, el1.quad["minus_ground"], None)
    add("dipole", "(+,1)", "GS", p1.omega_plus - ground, el1.dipole["plus_ground"], None)
    add("dipole", "(-,1)", "GS", p1.omega_minus - ground, el1.dipole["minus_ground"], None)

    for n in range(2, n_max + 1):
        el = dressed_matrix_elements(params, n)
        hi, lo = pairs[n], pairs[n - 1]
        omegas = {
            "plus_plus": hi.omega_plus - lo.omega_plus,
            "minus_minus": hi.omega_minus - lo.omega_minus,
            "plus_minus": hi.omega_plus - lo.omega_minus,
            "minus_plus": hi.omega_minus - lo.omega_plus,
        }
        labels = {
            "plus_plus": (f"(+,{n})", f"(+,{n - 1})"),
            "minus_minus": (f"(-,{n})", f"(-,{n - 1})"),
            "plus_minus": (f"(+,{n})", f"(-,{n - 1})"),
            "minus_plus": (f"(-,{n})", f"(+,{n - 1})"),
        }
        for key, (frm, to) in labels.items():
            cavity_limit = None
            dipole_limit = None
            if key in ("plus_plus", "minus_minus"):
                cavity_limit = by_channel["cavity"].strength if "cavity" in by_channel else None
            if key == "minus_plus":
                dipole_limit = 0.0
            add("cavity", frm, to, omegas[key], el.quad[key], cavity_limit)
            add("dipole", frm, to, omegas[key], el.dipole[key], dipole_limit)
    return rows
