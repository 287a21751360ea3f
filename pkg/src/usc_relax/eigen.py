"""Dense Hermitian diagonalization with deterministic phases.

Eigenvectors out of LAPACK carry arbitrary phases (and arbitrary mixing
inside degenerate subspaces), which makes downstream matrix elements
irreproducible between runs.  diagonalize() pins the gauge: in every
eigenvector the largest-magnitude component is made real and positive,
with ties broken by the lowest index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .operators import ModelParams, OperatorMatrix, build_rabi

HERMITICITY_TOL = 1e-10
DRIFT_TOL = 1e-6


@dataclass(frozen=True)
class EigenSystem:
    """Sorted eigenfrequencies and gauge-fixed eigenvectors.

    converged_levels counts the prefix of levels certified against the
    numerical residual (all of them, for a dense solve) or against Fock
    truncation when produced by certified_eigensystem.
    """

    frequencies: np.ndarray
    vectors: np.ndarray  # column n is the eigenvector of frequencies[n]
    dim: int
    converged_levels: int


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    out = np.array(vectors, dtype=complex, copy=True)
    for n in range(out.shape[1]):
        col = out[:, n]
        mags = np.abs(col)
        # np.argmax returns the first maximum, which is the tie-break we want
        lead = int(np.argmax(mags))
        if mags[lead] == 0.0:
            continue
        out[:, n] = col * (mags[lead] / col[lead])
    return out


def diagonalize(op: OperatorMatrix, hermiticity_tol: float = HERMITICITY_TOL) -> EigenSystem:
    """Full sorted eigensystem of a Hermitian operator.

    Rejects operators whose relative Frobenius asymmetry exceeds
    hermiticity_tol instead of silently symmetrizing.
    """
    defect = op.hermiticity_defect()
    if defect > hermiticity_tol:
        raise ValueError(
            f"operator '{op.label}' is not Hermitian: relative defect {defect:.3e}"
        )
    h = op.entries
    if np.iscomplexobj(h) and np.any(h.imag != 0.0):
        freqs, vecs = np.linalg.eigh(h)
    else:
        # real-symmetric path keeps vectors exactly real before gauge fixing
        freqs, vecs = np.linalg.eigh(h.real if np.iscomplexobj(h) else h)
        vecs = vecs.astype(complex)
    vecs = _fix_phases(vecs)
    return EigenSystem(
        frequencies=freqs, vectors=vecs, dim=op.dim, converged_levels=op.dim
    )


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-level frequency drift across a ladder of Fock truncations."""

    fock_sizes: tuple[int, ...]
    drifts: np.ndarray  # shape (len(fock_sizes) - 1, n_levels)
    converged_levels: int


def convergence_check(
    params: ModelParams,
    fock_sizes: Sequence[int],
    n_levels: int = 12,
    builder: Callable[[ModelParams], OperatorMatrix] = build_rabi,
    drift_tol: float = DRIFT_TOL,
) -> ConvergenceReport:
    """Re-diagonalize at increasing n_fock and report eigenvalue drift.

    converged_levels is the largest prefix of levels whose drift between
    the two largest truncations stays below drift_tol (absolute, in the
    energy units of the Hamiltonian).
    """
    sizes = sorted(set(int(s) for s in fock_sizes))
    if len(sizes) < 2:
        raise ValueError("need at least two Fock sizes to measure drift")
    from dataclasses import replace

    spectra = []
    for size in sizes:
        eig = diagonalize(builder(replace(params, n_fock=size)))
        spectra.append(eig.frequencies[:n_levels])
    drifts = np.abs(np.diff(np.array(spectra), axis=0))
    final = drifts[-1]
    converged = 0
    for lvl in range(n_levels):
        if final[lvl] < drift_tol:
            converged = lvl + 1
        else:
            break
    return ConvergenceReport(
        fock_sizes=tuple(sizes), drifts=drifts, converged_levels=converged
    )


def certified_eigensystem(
    params: ModelParams,
    levels: int,
    builder: Callable[[ModelParams], OperatorMatrix] = build_rabi,
    margin: int = 20,
    drift_tol: float = DRIFT_TOL,
) -> EigenSystem:
    """Diagonalize at params.n_fock and certify the lowest `levels` by drift.

    Raises if the requested prefix is not converged at the stated truncation;
    callers should enlarge n_fock rather than trust drifting levels.
    """
    report = convergence_check(
        params,
        (params.n_fock, params.n_fock + margin),
        n_levels=levels,
        builder=builder,
        drift_tol=drift_tol,
    )
    if report.converged_levels < levels:
        raise ValueError(
            f"only {report.converged_levels}/{levels} levels converged at "
            f"n_fock={params.n_fock}; increase the truncation"
        )
    eig = diagonalize(builder(params))
    return EigenSystem(
        frequencies=eig.frequencies,
        vectors=eig.vectors,
        dim=eig.dim,
        converged_levels=levels,
    )
