"""Asymptotic expansion coefficients of the eigenvalues +1 and -1.

Three independent routes are implemented:

* closed form: finite Fourier-coefficient sums in the perturbation data,
* operator route: Rayleigh-Schrodinger theory for the doubly degenerate
  eigenvalue, using the explicit mode-sum pseudoinverse,
* Galerkin fit: least-squares polynomial fit of tracked matrix eigenvalues
  over a small-eps sweep.

Cross-route agreement is the package's main numerical contract: the closed
forms are transcribed exactly as derived and validated against the operator
route rather than silently adjusted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dirac import (
    DEFAULT_GRID,
    SpinorField,
    charge_conjugate,
    first_order_operator,
    second_order_operator,
)
from .galerkin import basis_spinor, spectrum_report
from .geometry import CoframeFamily, first_order_perturbation, second_order_perturbation
from .trigpoly import Matrix3Field, grid_points

ROUTES = ("closed_form", "operator", "galerkin_fit")


class PseudoinverseDomainError(Exception):
    """Input not orthogonal to the eigenspace the pseudoinverse annihilates."""


class TruncationError(Exception):
    """Mode-sum truncation too small for the input bandwidth."""


class DegenerateSplittingError(Exception):
    """First-order block on the degenerate eigenspace is not scalar."""


class FitResidualError(Exception):
    """Eigenvalue sweep is not explained by the polynomial model."""


@dataclass(frozen=True)
class Pseudoinverse:
    """Bounded inverse of (free operator - lambda0) off its eigenspace.

    Acts in Fourier space: the coefficient of e^{iqx} in Qf is

        (1/2) [ (q - lambda0)^{-1} A + (-q - lambda0)^{-1} B ] fhat(q)

    with A = [[1,1],[1,1]], B = [[1,-1],[-1,1]], each term present only when
    its denominator is nonzero. A annihilates the w-type part of mode q and
    doubles the v-type part (eigenvalue q); B does the reverse (the w-type
    part of mode q has eigenvalue -q), so this is the spectral sum
    sum_{mu != lambda0} P_mu / (mu - lambda0) truncated to |q| <= truncation.
    """

    lambda0: int
    truncation: int

    _A = np.array([[1.0, 1.0], [1.0, 1.0]])
    _B = np.array([[1.0, -1.0], [-1.0, 1.0]])

    def apply(
        self, f: SpinorField, orthogonality_tol: float | None = None
    ) -> SpinorField:
        """Apply the mode sum; any kernel content of f is annihilated.

        Pass ``orthogonality_tol`` in contexts where the input is required to
        be orthogonal to the kernel (it is in the second-order eigenvalue
        formula): an overlap above the tolerance then raises instead of being
        silently projected out.
        """
        n = f.num_points
        if orthogonality_tol is not None:
            for kind in ("v", "w"):
                overlap = abs(f.inner(basis_spinor(self.lambda0, kind, n)))
                if overlap > orthogonality_tol:
                    raise PseudoinverseDomainError(
                        f"input overlaps the lambda0={self.lambda0} eigenspace "
                        f"by {overlap:.2e} (tolerance {orthogonality_tol:.0e})"
                    )
        bw = f.bandwidth()
        if self.truncation < bw + abs(self.lambda0) + 1:
            raise TruncationError(
                f"truncation {self.truncation} below bandwidth requirement "
                f"{bw + abs(self.lambda0) + 1}"
            )
        coeffs = f.mode_coefficients(self.truncation)  # (2, 2M+1)
        M = self.truncation
        out = np.zeros_like(coeffs)
        for q in range(-M, M + 1):
            weight = np.zeros((2, 2))
            if q != self.lambda0:
                weight = weight + 0.5 / (q - self.lambda0) * self._A
            if q != -self.lambda0:
                weight = weight + 0.5 / (-q - self.lambda0) * self._B
            out[:, q + M] = weight @ coeffs[:, q + M]
        x = grid_points(n)
        modes = np.exp(1j * np.outer(np.arange(-M, M + 1), x))
        return SpinorField(out @ modes)

    __call__ = apply


def eigenspace_projection(f: SpinorField, lambda0: int) -> SpinorField:
    """Orthogonal projection onto span{v_lambda0, w_lambda0}."""
    v = basis_spinor(lambda0, "v", f.num_points)
    w = basis_spinor(lambda0, "w", f.num_points)
    return f.inner(v) * v + f.inner(w) * w


def _check_sign(n: int) -> None:
    if n not in (1, -1):
        raise ValueError(f"expansion implemented for eigenvalues +1 and -1, got {n}")


# ----------------------------------------------------------------------
# first order
# ----------------------------------------------------------------------

def first_correction_closed(h: Matrix3Field, n: int) -> float:
    """Closed form: -+ (1/2) * hhat_11(0) for n = +-1."""
    _check_sign(n)
    return float(-n * 0.5 * h.fourier(0)[0, 0].real)


def first_correction_operator(
    h: Matrix3Field, n: int, num_points: int = DEFAULT_GRID
) -> float:
    """Diagonal of the first-order term on the degenerate eigenspace.

    Also verifies that the full 2x2 block on span{v_n, w_n} is a real
    multiple of the identity; a nonscalar block would invalidate the whole
    first-order setup and raises DegenerateSplittingError.
    """
    _check_sign(n)
    w1 = first_order_operator(h, num_points)
    v = basis_spinor(n, "v", num_points)
    w = basis_spinor(n, "w", num_points)
    image = w1.apply(v)
    diag_v = image.inner(v)
    off = image.inner(w)
    diag_w = w1.apply(w).inner(w)
    if abs(off) > 1e-9 or abs(diag_v - diag_w) > 1e-9 or abs(diag_v.imag) > 1e-9:
        raise DegenerateSplittingError(
            f"first-order block on mode {n} is not scalar: "
            f"diag ({diag_v:.3e}, {diag_w:.3e}), off-diagonal {abs(off):.3e}"
        )
    return float(diag_v.real)


# ----------------------------------------------------------------------
# second order
# ----------------------------------------------------------------------

def _antisymmetric_flux_sum(h: Matrix3Field) -> complex:
    """sum_{m != 0} m * sum_a [conj(hhat_a2(m)) hhat_a3(m)
                               - conj(hhat_a3(m)) hhat_a2(m)]."""
    total = 0.0 + 0.0j
    for m in range(-h.degree, h.degree + 1):
        if m == 0:
            continue
        hm = h.fourier(m)
        total += m * np.sum(np.conj(hm[:, 1]) * hm[:, 2] - np.conj(hm[:, 2]) * hm[:, 1])
    return total


def second_correction_closed(h: Matrix3Field, k: Matrix3Field, n: int) -> float:
    """Closed-form second-order coefficient for the eigenvalue n = +-1.

    Finite Fourier sums in h, k and h^2; the mode sums terminate because h
    has finite trigonometric degree.
    """
    _check_sign(n)
    hsq = h @ h
    lead = n * (0.375 * hsq.fourier(0)[0, 0] - 0.125 * k.fourier(0)[0, 0])
    flux = -(1j / 16.0) * _antisymmetric_flux_sum(h)

    d = h.degree
    s_diag = 0.0 + 0.0j
    s_mixed = 0.0 + 0.0j
    for m in range(-d - 3, d + 4):
        if n == 1:
            if m == 1:
                continue
            c11 = h.fourier(m - 1)[0, 0]
            s_diag += (m + 1) ** 2 / (m - 1) * c11 * np.conj(c11)
            z = h.fourier(m + 1)
            z1 = z[2, 0] + 1j * z[1, 0]
            z2 = np.conj(z[2, 0]) - 1j * np.conj(z[1, 0])
            s_mixed += (m - 1) * z1 * z2
        else:
            if m == -1:
                continue
            c11 = h.fourier(m + 1)[0, 0]
            s_diag += (m - 1) ** 2 / (m + 1) * c11 * np.conj(c11)
            z = h.fourier(m - 1)
            z1 = z[2, 0] + 1j * z[1, 0]
            z2 = np.conj(z[2, 0]) - 1j * np.conj(z[1, 0])
            s_mixed += (m + 1) * z1 * z2

    value = lead + flux - s_diag / 16.0 - s_mixed / 16.0
    if abs(value.imag) > 1e-12:
        raise ValueError(f"second-order coefficient not real: {value}")
    return float(value.real)


def second_correction_operator(
    h: Matrix3Field,
    k: Matrix3Field,
    n: int,
    truncation: int | None = None,
    num_points: int = DEFAULT_GRID,
) -> float:
    """Operator-route second-order coefficient,

        <W2 v, v> - <(W1 - l1) Q (W1 - l1) v, v>,

    with Q the pseudoinverse at lambda0 = n. Exact up to roundoff whenever
    the truncation covers the bandwidth of (W1 - l1) v.
    """
    _check_sign(n)
    if truncation is None:
        truncation = h.degree + 4
    if truncation < h.degree + 2:
        raise TruncationError(
            f"truncation {truncation} below minimum {h.degree + 2} for this h"
        )
    w1 = first_order_operator(h, num_points)
    w2 = second_order_operator(h, k, num_points)
    v = basis_spinor(n, "v", num_points)
    l1 = first_correction_operator(h, n, num_points)

    residual = w1.apply(v) - l1 * v
    corrected = Pseudoinverse(lambda0=n, truncation=truncation).apply(
        residual, orthogonality_tol=1e-9
    )
    shifted = w1.apply(corrected) - l1 * corrected
    value = w2.apply(v).inner(v) - shifted.inner(v)
    if abs(value.imag) > 1e-10:
        raise ValueError(f"second-order coefficient not real: {value}")
    return float(value.real)


def second_order_asymmetry(h: Matrix3Field, k: Matrix3Field) -> float:
    """lambda2(+1) + lambda2(-1); the h^2 and k terms cancel exactly, so a
    nonzero value is pure spectral asymmetry at quadratic order."""
    return second_correction_closed(h, k, 1) + second_correction_closed(h, k, -1)


# ----------------------------------------------------------------------
# Galerkin fit route
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    """Least-squares expansion of a tracked eigenvalue about mode n."""

    mode: int
    order: int
    coefficients: np.ndarray  # c_1..c_order
    uncertainties: np.ndarray
    residual_norm: float
    eps_grid: np.ndarray
    values: np.ndarray  # tracked pair means minus n

    def __post_init__(self):
        for arr in (self.coefficients, self.uncertainties, self.eps_grid, self.values):
            arr.setflags(write=False)


def default_fit_grid(order: int) -> np.ndarray:
    """6 log-spaced points for slope/curvature fits; a denser linear grid for
    quartic fits, where nuisance powers are needed to tame model error."""
    if order >= 4:
        return np.linspace(0.01, 0.08, 12)
    return np.logspace(np.log10(0.01), np.log10(0.1), 6)


def fit_from_values(n: int, eps_grid, values, order: int = 2) -> FitResult:
    """Fit precomputed tracked deviations ``values`` = lambda(eps) - n.

    Higher powers (up to four beyond ``order``) are included as nuisance
    columns when the sample count allows, absorbing model error from the
    tails of the expansion; only c_1..c_order are reported.
    """
    if order not in (1, 2, 4):
        raise ValueError("order must be 1, 2 or 4")
    grid = np.asarray(eps_grid, dtype=float)
    values = np.asarray(values, dtype=float)
    if grid.size < order + 2:
        raise ValueError(f"need at least {order + 2} eps samples for order {order}")
    if np.any(grid <= 0) or np.any(grid > 0.15):
        raise ValueError("eps samples must lie in (0, 0.15]")

    n_nuisance = min(4, grid.size - order - 2)
    powers = list(range(1, order + 1 + n_nuisance))
    design = np.stack([grid**p for p in powers], axis=1)
    coeffs, _, _, _ = np.linalg.lstsq(design, values, rcond=None)
    residual = float(np.linalg.norm(values - design @ coeffs))

    scale = float(np.max(np.abs(values)))
    if scale > 1e-13 and residual > 1e-6 * scale:
        raise FitResidualError(
            f"fit residual {residual:.2e} exceeds 1e-6 * max|lambda - n| = "
            f"{1e-6 * scale:.2e}; increase m or shrink the eps grid"
        )

    dof = grid.size - len(powers)
    sigma2 = residual**2 / dof if dof > 0 else 0.0
    try:
        cov = sigma2 * np.linalg.inv(design.T @ design)
        unc = np.sqrt(np.maximum(np.diag(cov), 0.0))
    except np.linalg.LinAlgError:
        unc = np.full(len(powers), np.nan)
    return FitResult(
        mode=n,
        order=order,
        coefficients=coeffs[:order].copy(),
        uncertainties=unc[:order].copy(),
        residual_norm=residual,
        eps_grid=grid.copy(),
        values=values,
    )


def fit_expansion(
    cf: CoframeFamily,
    n: int,
    eps_grid=None,
    order: int = 2,
    m: int = 25,
    num_points: int | None = None,
) -> FitResult:
    """Fit tracked Galerkin pair means to n + c_1 eps + ... + c_order eps^order."""
    grid = default_fit_grid(order) if eps_grid is None else np.asarray(eps_grid, float)
    values = np.array(
        [
            spectrum_report(cf, eps, m, modes=(n,), num_points=num_points).tracked[n] - n
            for eps in grid
        ]
    )
    return fit_from_values(n, grid, values, order)


# ----------------------------------------------------------------------
# combined report
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PerturbationReport:
    """First and second expansion coefficients from one route."""

    route: str
    lambda1_plus: float
    lambda1_minus: float
    lambda2_plus: float
    lambda2_minus: float
    fit_order: int = 0

    @property
    def asymmetry2(self) -> float:
        return self.lambda2_plus + self.lambda2_minus


def perturbation_report(
    cf: CoframeFamily,
    route: str,
    truncation: int | None = None,
    num_points: int = DEFAULT_GRID,
    eps_grid=None,
    m: int = 25,
) -> PerturbationReport:
    """Compute all four coefficients by the requested route."""
    h = first_order_perturbation(cf)
    k = second_order_perturbation(cf)
    if route == "closed_form":
        return PerturbationReport(
            route=route,
            lambda1_plus=first_correction_closed(h, 1),
            lambda1_minus=first_correction_closed(h, -1),
            lambda2_plus=second_correction_closed(h, k, 1),
            lambda2_minus=second_correction_closed(h, k, -1),
        )
    if route == "operator":
        return PerturbationReport(
            route=route,
            lambda1_plus=first_correction_operator(h, 1, num_points),
            lambda1_minus=first_correction_operator(h, -1, num_points),
            lambda2_plus=second_correction_operator(h, k, 1, truncation, num_points),
            lambda2_minus=second_correction_operator(h, k, -1, truncation, num_points),
        )
    if route == "galerkin_fit":
        if eps_grid is None:
            eps_grid = np.linspace(0.01, 0.08, 12)
        grid = np.asarray(eps_grid, dtype=float)
        reports = [spectrum_report(cf, eps, m, modes=(1, -1)) for eps in grid]
        fits = {
            n: fit_from_values(
                n, grid, [r.tracked[n] - n for r in reports], order=2
            )
            for n in (1, -1)
        }
        return PerturbationReport(
            route=route,
            lambda1_plus=float(fits[1].coefficients[0]),
            lambda1_minus=float(fits[-1].coefficients[0]),
            lambda2_plus=float(fits[1].coefficients[1]),
            lambda2_minus=float(fits[-1].coefficients[1]),
            fit_order=2,
        )
    raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")
