"""Galerkin discretization of the eigenvalue problem.

The operator is projected onto the span of the unperturbed eigenfunctions
v_i, w_i for i = -m..m, giving a Hermitian matrix of order 2(2m+1) whose
spectrum approximates the perturbed one. The basis couples only through the
finitely many harmonics of the coefficient functions, so interior eigenvalues
converge extremely fast in m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dirac import DEFAULT_GRID, DiracOperator, SpinorField, dirac_operator
from .geometry import CoframeFamily, metric_at
from .trigpoly import grid_points

PAIRING_TOL = 1e-8
CLUSTER_RADIUS = 0.4
HERMITICITY_LIMIT = 1e-9


class UnderResolvedError(Exception):
    """Quadrature grid too coarse for the requested truncation."""


class TrackingError(Exception):
    """No unambiguous eigenvalue pair near the requested mode."""


def default_grid(m: int) -> int:
    """Grid size resolving basis degree m plus coefficient harmonics."""
    return max(DEFAULT_GRID, 8 * m + 16)


def basis_spinor(i: int, kind: str, num_points: int = DEFAULT_GRID) -> SpinorField:
    """Unperturbed eigenfunctions: unit-norm spinors

        v_i = (1, 1)^T e^{i i x} / (2 sqrt(pi)),
        w_i = (-1, 1)^T e^{-i i x} / (2 sqrt(pi)),

    both with eigenvalue i; w_i is the charge conjugate of v_i.
    """
    x = grid_points(num_points)
    c = 1.0 / (2.0 * np.sqrt(np.pi))
    if kind == "v":
        e = np.exp(1j * i * x)
        return SpinorField(np.array([c * e, c * e]))
    if kind == "w":
        e = np.exp(-1j * i * x)
        return SpinorField(np.array([-c * e, c * e]))
    raise ValueError(f"kind must be 'v' or 'w', got {kind!r}")


@dataclass(frozen=True)
class GalerkinMatrix:
    """Hermitian Galerkin matrix of order 2(2m+1).

    Rows are indexed by (i, kind) with i = -m..m and the v row preceding the
    w row within each i; ``row()`` exposes the map. ``herm_residual`` is the
    max-norm Hermiticity defect measured before symmetrization, a health
    metric for quadrature resolution.
    """

    m: int
    entries: np.ndarray
    herm_residual: float

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def order(self) -> int:
        return 2 * (2 * self.m + 1)

    def row(self, i: int, kind: str) -> int:
        if abs(i) > self.m:
            raise ValueError(f"|i| must be <= m={self.m}")
        return 2 * (i + self.m) + (0 if kind == "v" else 1)


def galerkin_matrix(op: DiracOperator, m: int) -> GalerkinMatrix:
    """Assemble H[row(j,b), row(i,a)] = <W phi_i^a, phi_j^b> by quadrature.

    The result is symmetrized; a pre-symmetrization Hermiticity residual
    above 1e-9 signals an under-resolved grid and raises.
    """
    n = op.num_points
    if n < 2 * m + 4:
        raise UnderResolvedError(f"grid of {n} points cannot resolve m={m}")
    labels = [(i, kind) for i in range(-m, m + 1) for kind in ("v", "w")]
    phis = np.array([basis_spinor(i, kind, n).samples for i, kind in labels])
    images = np.array([op.apply(SpinorField(p)).samples for p in phis])
    weight = 2.0 * np.pi / n
    entries = weight * np.einsum("rcn,kcn->rk", np.conj(phis), images)
    residual = float(np.max(np.abs(entries - entries.conj().T)))
    if residual > HERMITICITY_LIMIT:
        raise UnderResolvedError(
            f"Hermiticity residual {residual:.2e} exceeds {HERMITICITY_LIMIT:.0e}; "
            f"grid of {n} points under-resolves m={m}"
        )
    entries = 0.5 * (entries + entries.conj().T)
    return GalerkinMatrix(m=m, entries=entries, herm_residual=residual)


def eigenvalues(gm: GalerkinMatrix) -> np.ndarray:
    """All 2(2m+1) eigenvalues, ascending (LAPACK Hermitian solver)."""
    return np.linalg.eigvalsh(gm.entries)


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues of one Galerkin solve plus multiplicity-two bookkeeping."""

    eps: float
    m: int
    eigenvalues: np.ndarray
    pairs: list = field(default_factory=list)   # (mean, gap) per 2-cluster
    tracked: dict = field(default_factory=dict)  # mode n -> pair mean

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)


def tracking_buffer(m: int) -> int:
    return math.ceil(m / 5)


def track_pair(report: SpectrumReport, n: int) -> tuple[float, float]:
    """Mean and gap of the two eigenvalues nearest the integer mode n.

    Requires |n| <= m - ceil(m/5) to stay clear of truncation-edge pollution,
    and both cluster members within 0.4 of n.
    """
    if abs(n) > report.m - tracking_buffer(report.m):
        raise TrackingError(
            f"mode {n} too close to truncation edge for m={report.m}"
        )
    ev = report.eigenvalues
    order = np.argsort(np.abs(ev - n))[:2]
    pair = ev[order]
    if np.max(np.abs(pair - n)) > CLUSTER_RADIUS:
        raise TrackingError(
            f"no eigenvalue pair within {CLUSTER_RADIUS} of mode {n} at "
            f"eps={report.eps}: nearest {pair}"
        )
    return float(pair.mean()), float(abs(pair[1] - pair[0]))


def spectrum_report(
    cf: CoframeFamily,
    eps: float,
    m: int,
    modes=(),
    num_points: int | None = None,
) -> SpectrumReport:
    """Assemble, solve and track one eps point of a coframe family."""
    n = num_points or default_grid(m)
    op = dirac_operator(metric_at(cf, eps, n))
    ev = eigenvalues(galerkin_matrix(op, m))
    pairs = [
        (float(ev[j : j + 2].mean()), float(ev[j + 1] - ev[j]))
        for j in range(0, ev.size - 1, 2)
    ]
    report = SpectrumReport(eps=float(eps), m=m, eigenvalues=ev, pairs=pairs)
    for mode in modes:
        report.tracked[int(mode)] = track_pair(report, int(mode))[0]
    return report
