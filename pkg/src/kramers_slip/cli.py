"""Command-line front end.

Subcommands: kernels, slip, profile, oracle, convergence.  Every command
writes a RunManifest JSON listing its parameters and output files.  CSV
payloads use 12 significant digits and '.' decimals regardless of locale,
so reruns with identical parameters are byte-identical.

Exit codes: 0 success, 2 usage, 3 numerical failure, 4 I/O.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from .errors import InvalidAccommodation, KramersError
from .kernels import L_array, QuadratureSpec, T_array, phi0_array
from .oracle import OracleConfig, bc_residual, solve_halfspace
from .profiles import ProfileRequest, velocity_profile, wall_velocity
from .series import slip_velocity, solve_series, solve_slip

EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

U_SL_EXACT_Q1 = 0.5819  # benchmark slip for the fully diffuse wall

_FIGURE_PRESETS = {1: (1.0, -5.0), 2: (0.5, -5.0), 3: (0.25, -5.0)}


def _tool_version() -> str:
    try:
        return version("kramers-slip")
    except PackageNotFoundError:
        return "0.0.0+local"


def _fmt(v: float) -> str:
    return f"{float(v):.12g}"


def quadrature_from_env() -> QuadratureSpec:
    """Default tolerances, overridable by KRAMERS_QUAD_TOL."""
    raw = os.environ.get("KRAMERS_QUAD_TOL")
    if raw is None:
        return QuadratureSpec()
    try:
        tol = float(raw)
    except ValueError as exc:
        raise SystemExit(
            f"invalid KRAMERS_QUAD_TOL={raw!r}: must be a positive number"
        ) from exc
    return QuadratureSpec(abs_tol=tol, rel_tol=tol)


@dataclass
class RunManifest:
    """Provenance record written next to every command's outputs."""

    command: str
    parameters: dict
    outputs: list[str] = field(default_factory=list)
    tool_version: str = field(default_factory=_tool_version)
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )

    def write(self, path: Path) -> None:
        for out in self.outputs:
            if not Path(out).exists():
                raise IOError(f"declared output {out} was not written")
        path.write_text(json.dumps(self.__dict__, indent=2) + "\n")


def _manifest_path(out: Path | None, command: str) -> Path:
    if out is None:
        return Path(f"{command}_manifest.json")
    return out.with_name(out.stem + "_manifest.json")


def _write_csv(path: Path, header: list[str], rows: list[list[float]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _parse_float_list(text: str) -> list[float]:
    try:
        items = [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise SystemExit(f"could not parse list {text!r}") from exc
    if not items:
        raise SystemExit("list flag must be non-empty")
    return items


def cmd_kernels(args: argparse.Namespace) -> int:
    n_list = [int(n) for n in _parse_float_list(args.n_list)]
    k_list = _parse_float_list(args.k_list)
    rows = []
    for n in n_list:
        tn = T_array(n, k_list)
        lv = L_array(k_list)
        p0 = phi0_array(k_list)
        for j, k in enumerate(k_list):
            rows.append([n, k, tn[j], lv[j], p0[j]])
    out = Path(args.out)
    _write_csv(out, ["n", "k", "T_n", "L", "phi0"], rows)
    manifest = RunManifest(
        "kernels", {"n_list": n_list, "k_list": k_list, "out": str(out)},
        outputs=[str(out)],
    )
    manifest.write(_manifest_path(out, "kernels"))
    return 0


def cmd_slip(args: argparse.Namespace) -> int:
    spec = quadrature_from_env()
    sol = solve_slip(args.q, args.alpha, order=args.order, spec=spec)
    payload = sol.to_dict()

    # cumulative truncation ladder; reference the exact diffuse value at q=1
    V = np.asarray(sol.coefficients.V)
    powers = args.q ** np.arange(len(V))
    cumulative = (2.0 - args.q) / args.q * np.cumsum(V * powers)
    payload["ladder"] = [
        {"order": n, "U_sl_over_Gv": float(u)} for n, u in enumerate(cumulative)
    ]
    if args.q == 1.0:
        for entry in payload["ladder"]:
            entry["rel_error_vs_0.5819"] = (
                entry["U_sl_over_Gv"] / U_SL_EXACT_Q1 - 1.0
            )

    if args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        header = ["q", "alpha", "U_sl_over_Gv", "K_v"] + [
            f"V{n}" for n in range(len(V))
        ]
        row = [args.q, args.alpha, sol.U_sl_dimensionless, sol.K_v] + list(V)
        text = ",".join(header) + "\n" + ",".join(_fmt(v) for v in row) + "\n"

    outputs = []
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        outputs.append(str(out))
    else:
        out = None
        sys.stdout.write(text)
    manifest = RunManifest(
        "slip",
        {"q": args.q, "alpha": args.alpha, "order": args.order,
         "format": args.format, "out": args.out},
        outputs=outputs,
    )
    manifest.write(_manifest_path(out, "slip"))
    return 0


def cmd_profile(args: argparse.Namespace) -> int:
    if args.figure is not None:
        args.q, args.alpha = _FIGURE_PRESETS[args.figure]
    if args.q is None:
        raise SystemExit("profile requires --q (or a --figure preset)")
    spec = quadrature_from_env()
    x = np.linspace(0.0, args.xmax, args.nx)
    coeffs, E_list = solve_series(args.order, spec=spec)
    req = ProfileRequest(
        q=args.q, alpha=args.alpha, order=args.order, x_nodes=x,
        include_components=args.components,
    )
    prof = velocity_profile(req, coeffs, E_list, spec)

    header = ["x", "U_over_Gv"]
    cols = [prof.x, prof.U_over_Gv]
    if prof.Uc_components is not None:
        for n in range(prof.Uc_components.shape[0]):
            header.append(f"Uc{n}")
            cols.append(prof.Uc_components[n])
    rows = [list(r) for r in zip(*cols)]
    out = Path(args.out)
    _write_csv(out, header, rows)
    outputs = [str(out)]

    if args.svg:
        from .plotting import render_profile

        svg = out.with_suffix(".svg")
        render_profile(prof.x, prof.U_over_Gv, args.q, args.alpha, str(svg))
        outputs.append(str(svg))

    manifest = RunManifest(
        "profile",
        {"q": args.q, "alpha": args.alpha, "order": args.order,
         "xmax": args.xmax, "nx": args.nx, "figure": args.figure,
         "out": str(out), "svg": args.svg},
        outputs=outputs,
    )
    manifest.write(_manifest_path(out, "profile"))
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    if args.nmu < 16:
        print(
            f"warning: {args.nmu} ordinates per half-range is coarse; "
            "slip may carry discretization bias", file=sys.stderr,
        )
    cfg = OracleConfig(q=args.q, n_mu=args.nmu, x_max=args.xmax)
    sol = solve_halfspace(cfg)
    summary = {
        "q": args.q,
        "U_sl": sol.U_sl_extracted,
        "U0": float(sol.U_x[0]),
        "bc_residual": bc_residual(sol),
        "iters": sol.iters_used,
    }
    text = json.dumps(summary, indent=2) + "\n"
    outputs = []
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        outputs.append(str(out))
    else:
        out = None
        sys.stdout.write(text)
    if args.dump:
        dump = Path(args.dump)
        header = ["x", "U"] + [f"h_mu{_fmt(m)}" for m in sol.mu_nodes]
        rows = [
            [sol.x_nodes[i], sol.U_x[i]] + list(sol.h_field[i])
            for i in range(len(sol.x_nodes))
        ]
        _write_csv(dump, header, rows)
        outputs.append(str(dump))
    manifest = RunManifest(
        "oracle",
        {"q": args.q, "nmu": args.nmu, "xmax": args.xmax,
         "out": args.out, "dump": args.dump},
        outputs=outputs,
    )
    manifest.write(_manifest_path(out, "oracle"))
    return 0


def cmd_convergence(args: argparse.Namespace) -> int:
    if args.max_order > 8:
        raise SystemExit("max-order must be <= 8")
    spec = quadrature_from_env()
    coeffs, _ = solve_series(args.max_order, spec=spec)
    oracle_sol = solve_halfspace(OracleConfig(q=args.q))
    u_oracle = oracle_sol.U_sl_extracted
    V = np.asarray(coeffs.V)
    powers = args.q ** np.arange(len(V))
    cumulative = (2.0 - args.q) / args.q * np.cumsum(V * powers)

    header = ["N", "U_sl", "rel_error_vs_oracle"]
    if args.q == 1.0:
        header.append("rel_error_vs_0.5819")
    rows = []
    for n, u in enumerate(cumulative):
        row = [n, u, u / u_oracle - 1.0]
        if args.q == 1.0:
            row.append(u / U_SL_EXACT_Q1 - 1.0)
        rows.append(row)
    out = Path(args.out)
    _write_csv(out, header, rows)
    outputs = [str(out)]
    if args.svg:
        from .plotting import render_convergence

        svg = out.with_suffix(".svg")
        render_convergence(
            np.arange(len(cumulative)), cumulative, u_oracle, args.q, str(svg)
        )
        outputs.append(str(svg))
    manifest = RunManifest(
        "convergence",
        {"q": args.q, "max_order": args.max_order, "out": str(out),
         "svg": args.svg},
        outputs=outputs,
    )
    manifest.write(_manifest_path(out, "convergence"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kramers-slip",
        description="Isothermal slip of a quantum gas over a "
        "specular-diffuse wall: series solver, profiles and cross-checks.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernels", help="tabulate kernel moments to CSV")
    k.add_argument("--n-list", required=True, help="comma-separated orders")
    k.add_argument("--k-list", required=True, help="comma-separated k values")
    k.add_argument("--out", required=True)
    k.set_defaults(func=cmd_kernels)

    s = sub.add_parser("slip", help="slip coefficients and velocity")
    s.add_argument("--q", type=float, required=True)
    s.add_argument("--alpha", type=float, default=-5.0)
    s.add_argument("--order", type=int, default=2)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_slip)

    pr = sub.add_parser("profile", help="half-space velocity profile")
    pr.add_argument("--q", type=float, default=None)
    pr.add_argument("--alpha", type=float, default=-5.0)
    pr.add_argument("--order", type=int, default=2)
    pr.add_argument("--xmax", type=float, default=10.0)
    pr.add_argument("--nx", type=int, default=201)
    pr.add_argument("--figure", type=int, choices=(1, 2, 3), default=None,
                    help="preset (q, alpha): 1=(1,-5) 2=(0.5,-5) 3=(0.25,-5)")
    pr.add_argument("--out", default="profile.csv")
    pr.add_argument("--svg", action="store_true")
    pr.add_argument("--components", action="store_true",
                    help="include per-order layer columns Uc0, Uc1, ...")
    pr.set_defaults(func=cmd_profile)

    o = sub.add_parser("oracle", help="discrete-ordinates cross-check")
    o.add_argument("--q", type=float, required=True)
    o.add_argument("--nmu", type=int, default=32)
    o.add_argument("--xmax", type=float, default=30.0)
    o.add_argument("--out", default=None)
    o.add_argument("--dump", default=None,
                   help="CSV dump of the full field h(x, mu) and U(x)")
    o.set_defaults(func=cmd_oracle)

    c = sub.add_parser("convergence", help="order study vs the oracle")
    c.add_argument("--q", type=float, required=True)
    c.add_argument("--max-order", type=int, default=5)
    c.add_argument("--out", default="convergence.csv")
    c.add_argument("--svg", action="store_true")
    c.set_defaults(func=cmd_convergence)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidAccommodation, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return EXIT_USAGE
        raise
    except KramersError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
