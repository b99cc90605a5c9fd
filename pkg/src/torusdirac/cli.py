"""Batch command line front end.

Subcommands:
    galerkin     eigenvalue sweep table over eps for the tracked modes
    asympt       expansion coefficients from all three routes, side by side
    fit          polynomial fit of tracked eigenvalues over an eps sweep
    dump-matrix  plain-text dump of the Galerkin matrix at one eps

Exit codes: 0 success, 2 configuration error, 3 numerical contract violation.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import galerkin as gk
from . import perturbation as pt
from .config import EXAMPLE_NAMES, ConfigError, RunConfig, load_config_file
from .dirac import dirac_operator
from .geometry import SingularCoframeError, arc_length, first_order_perturbation, metric_at

EXIT_CONFIG = 2
EXIT_NUMERIC = 3

# closed-form vs operator vs fit agreement gates for `asympt`
TOL_L1_OPERATOR = 1e-12
TOL_L2_OPERATOR = 1e-10
TOL_L1_FIT = 1e-6
TOL_L2_FIT = 1e-4

_NUMERIC_ERRORS = (
    SingularCoframeError,
    gk.UnderResolvedError,
    gk.TrackingError,
    pt.PseudoinverseDomainError,
    pt.TruncationError,
    pt.DegenerateSplittingError,
    pt.FitResidualError,
    np.linalg.LinAlgError,  # eigensolver convergence failure
)


def _csv(value: float) -> str:
    return f"{value:.17g}"


def _md(value: float) -> str:
    return f"{value:.6g}"


def _render_table(header: list[str], rows: list[list[str]], fmt: str) -> str:
    if fmt == "csv":
        lines = [",".join(header)] + [",".join(r) for r in rows]
        return "\n".join(lines) + "\n"
    widths = [
        max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
        for i, h in enumerate(header)
    ]
    def fmt_row(cells):
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"
    sep = "|" + "|".join("-" * (w + 2) for w in widths) + "|"
    return "\n".join([fmt_row(header), sep] + [fmt_row(r) for r in rows]) + "\n"


def cmd_galerkin(cfg: RunConfig, out_format: str) -> tuple[str, list[str]]:
    """One row per eps; tracked pair mean and gap per mode.

    Tracking failures are surfaced per cell (rendered as nan) and returned
    as diagnostics; any failure makes the command exit nonzero.
    """
    family = cfg.family()
    family.check_invertible(cfg.eps_list)
    num = _csv if out_format == "csv" else _md
    header = ["eps"]
    for n in cfg.modes:
        header += [f"mode_{n}", f"gap_{n}"]
    rows = []
    failures = []
    for eps in cfg.eps_list:
        report = gk.spectrum_report(family, eps, cfg.m, modes=())
        row = [num(eps)]
        for n in cfg.modes:
            try:
                mean, gap = gk.track_pair(report, n)
                row += [num(mean), num(gap)]
            except gk.TrackingError as exc:
                row += ["nan", "nan"]
                failures.append(f"eps={eps:g} mode={n}: {exc}")
        rows.append(row)
    return _render_table(header, rows, out_format), failures


def cmd_asympt(cfg: RunConfig, out_format: str) -> str:
    """Expansion coefficients of the eigenvalues +-1 from all three routes.

    Raises RouteDisagreementError (mapped to exit code 3) when routes differ
    beyond tolerance.
    """
    family = cfg.family()
    closed = pt.perturbation_report(family, "closed_form")
    operator = pt.perturbation_report(family, "operator")
    fitted = pt.perturbation_report(family, "galerkin_fit", m=cfg.m)

    names = ("lambda1_plus", "lambda1_minus", "lambda2_plus", "lambda2_minus")
    tol_op = (TOL_L1_OPERATOR,) * 2 + (TOL_L2_OPERATOR,) * 2
    tol_fit = (TOL_L1_FIT,) * 2 + (TOL_L2_FIT,) * 2

    num = _csv if out_format == "csv" else _md
    rows = []
    failures = []
    for name, t_op, t_fit in zip(names, tol_op, tol_fit):
        c, o, f = (getattr(r, name) for r in (closed, operator, fitted))
        dev = max(abs(c - o), abs(c - f), abs(o - f))
        rows.append([name, num(c), num(o), num(f), num(dev)])
        if abs(c - o) > t_op:
            failures.append(f"{name}: |closed - operator| = {abs(c - o):.3e} > {t_op:.0e}")
        if abs(c - f) > t_fit:
            failures.append(f"{name}: |closed - fit| = {abs(c - f):.3e} > {t_fit:.0e}")

    table = _render_table(
        ["coefficient", "closed_form", "operator", "galerkin_fit", "max_deviation"],
        rows,
        out_format,
    )
    h = first_order_perturbation(family)
    h11_mean = h.fourier(0)[0, 0].real
    eps_probe = 1e-4
    measured_slope = (arc_length(family, eps_probe) - arc_length(family, -eps_probe)) / (
        2 * eps_probe
    )
    extras = [
        f"asymmetry2 = {num(closed.asymmetry2)}",
        f"arc_length_slope_predicted = {num(np.pi * h11_mean)}",
        f"arc_length_slope_measured = {num(measured_slope)}",
    ]
    text = table + "\n".join(extras) + "\n"
    if failures:
        raise RouteDisagreementError("\n".join(failures) + "\n\n" + text)
    return text


class RouteDisagreementError(Exception):
    """Cross-route deviation above the contract tolerance."""


def cmd_fit(cfg: RunConfig, out_format: str, order: int = 4, eps_grid=None) -> str:
    """Fitted expansion coefficients per tracked mode, with asymmetry flags."""
    family = cfg.family()
    grid = pt.default_fit_grid(order) if eps_grid is None else np.asarray(eps_grid, float)
    family.check_invertible(grid)
    reports = [gk.spectrum_report(family, eps, cfg.m, modes=cfg.modes) for eps in grid]

    num = _csv if out_format == "csv" else _md
    fits = {}
    header = ["mode"] + [f"c{p}" for p in range(1, order + 1)] + ["residual"]
    rows = []
    for n in cfg.modes:
        values = [r.tracked[n] - n for r in reports]
        fit = pt.fit_from_values(n, grid, values, order)
        fits[n] = fit
        rows.append(
            [str(n)]
            + [num(c) for c in fit.coefficients]
            + [num(fit.residual_norm)]
        )
    table = _render_table(header, rows, out_format)

    flags = []
    if order >= 2:
        for n in sorted({abs(n) for n in cfg.modes if n != 0 and -n in fits and n in fits}):
            c2_sum = fits[n].coefficients[1] + fits[-n].coefficients[1]
            unc = np.hypot(fits[n].uncertainties[1], fits[-n].uncertainties[1])
            flagged = abs(c2_sum) > 3 * max(unc, 1e-12)
            flags.append(
                f"asymmetry_c2(+{n},-{n}) = {num(c2_sum)} "
                f"[{'ASYMMETRIC' if flagged else 'symmetric'}]"
            )
    return table + ("\n".join(flags) + "\n" if flags else "")


def cmd_dump_matrix(cfg: RunConfig) -> str:
    """Row-major text dump of the Galerkin matrix, entries as re+imi."""
    if len(cfg.eps_list) != 1:
        raise ConfigError("dump-matrix needs exactly one eps value")
    family = cfg.family()
    op = dirac_operator(metric_at(family, cfg.eps_list[0], gk.default_grid(cfg.m)))
    matrix = gk.galerkin_matrix(op, cfg.m)
    lines = []
    for row in matrix.entries:
        lines.append(" ".join(f"{z.real:.17g}{z.imag:+.17g}i" for z in row))
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusdirac",
        description="Spectra of the axisymmetric massless Dirac operator "
        "on the unit 3-torus under metric perturbations.",
    )
    parser.add_argument(
        "--list-examples", action="store_true", help="list bundled example configs"
    )
    sub = parser.add_subparsers(dest="command")
    for name, help_ in (
        ("galerkin", "eigenvalue sweep table"),
        ("asympt", "expansion coefficients from all three routes"),
        ("fit", "polynomial fit of tracked eigenvalues"),
        ("dump-matrix", "text dump of the Galerkin matrix"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="config path or example name")
        p.add_argument("--m", type=int, help="Galerkin truncation override")
        p.add_argument("--eps", help="comma-separated eps override")
        p.add_argument("--modes", help="comma-separated tracked modes override")
        p.add_argument("--out", choices=("csv", "md"), help="output format")
        p.add_argument("--out-file", help="write output here instead of stdout")
        if name == "fit":
            p.add_argument("--order", type=int, default=4, choices=(1, 2, 4))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_examples:
        print("\n".join(EXAMPLE_NAMES))
        return 0
    if not args.command:
        parser.print_help()
        return EXIT_CONFIG

    try:
        cfg = load_config_file(args.config)
        if args.m is not None:
            if args.m < 1:
                raise ConfigError("m must be >= 1")
            cfg.m = args.m
        if args.eps:
            cfg.eps_list = [float(t) for t in args.eps.replace(",", " ").split()]
        if args.modes:
            cfg.modes = [int(t) for t in args.modes.replace(",", " ").split()]
        out_format = args.out or cfg.out_format

        tracking_failures: list[str] = []
        if args.command == "galerkin":
            text, tracking_failures = cmd_galerkin(cfg, out_format)
        elif args.command == "asympt":
            text = cmd_asympt(cfg, out_format)
        elif args.command == "fit":
            eps_grid = cfg.eps_list if args.eps else None
            text = cmd_fit(cfg, out_format, order=args.order, eps_grid=eps_grid)
        else:
            text = cmd_dump_matrix(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RouteDisagreementError as exc:
        print(f"route disagreement:\n{exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except _NUMERIC_ERRORS as exc:
        print(f"numerical contract violation: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    if args.out_file:
        with open(args.out_file, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if tracking_failures:
        print(
            "numerical contract violation:\n" + "\n".join(tracking_failures),
            file=sys.stderr,
        )
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
