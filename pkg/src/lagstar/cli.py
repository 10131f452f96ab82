"""Command line front end.

    lagstar gallery [NAME] [--param k=v ...]
    lagstar build SPEC
    lagstar classify SPEC [--grid 101x101] [--trange a:b] [--srange a:b] [--tol X]
    lagstar verify SPEC [--seed N]
    lagstar mesh SPEC [--format obj|ply|csv] [--project 0|1|2|3|all]

SPEC is a JSON file or the name of a gallery entry.  Exit status: 0 when
every requested check passes, 1 when one fails (the report is still
written), 2 for usage or spec errors, 3 for numeric failures.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from lagstar import classify, gallery, meshio
from lagstar.errors import (
    DomainError,
    IntegrationError,
    MeshIOError,
    MissingPeriodError,
    QuadratureError,
    SingularPointError,
)

log = logging.getLogger("lagstar")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _parse_grid(text):
    try:
        nt, ns = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NTxNS, got {text!r}") from None
    if nt < 2 or ns < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2x2 nodes")
    return nt, ns


def _parse_range(text):
    try:
        a, b = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}") from None
    if not a < b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return [a, b]


def _parse_project(text):
    if text == "all":
        return "all"
    if text in ("0", "1", "2", "3"):
        return int(text)
    raise argparse.ArgumentTypeError("--project takes 0, 1, 2, 3 or all")


def _parse_param(text):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key, float(value)


def load_spec(arg: str, params=None) -> dict:
    path = Path(arg)
    if path.suffix == ".json" or path.exists():
        try:
            spec = json.loads(path.read_text())
        except FileNotFoundError:
            raise UsageError(f"spec file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: not valid JSON ({exc})") from None
        return gallery.validate_spec(spec)
    return gallery.gallery_spec(arg, **dict(params or []))


def _apply_overrides(spec, args):
    grid = spec.setdefault("grid", {})
    if getattr(args, "grid", None):
        grid["nt"], grid["ns"] = args.grid
    if getattr(args, "trange", None):
        grid["t_range"] = args.trange
    if getattr(args, "srange", None):
        grid["s_range"] = args.srange
    return gallery.validate_spec(spec)


def _out_dir(args, spec):
    out = Path(args.out) if args.out else Path((spec.get("output") or {}).get("dir", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2) + "\n")


def _stem(spec):
    return spec.get("name") or "surface"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_gallery(args) -> int:
    if not args.name:
        for name in gallery.GALLERY:
            print(name)
        return EXIT_OK
    spec = gallery.gallery_spec(args.name, **dict(args.param or []))
    text = json.dumps(spec, indent=2)
    if args.out:
        path = _out_dir(args, spec) / f"{_stem(spec)}.json"
        path.write_text(text + "\n")
        print(path)
    else:
        print(text)
    return EXIT_OK


def cmd_build(args) -> int:
    spec = _apply_overrides(load_spec(args.spec, args.param), args)
    surf = gallery.surface_from_spec(spec)
    grid = gallery.grid_from_spec(spec, surf)
    t, s = grid.nodes()
    mask = classify.grid_mask(surf, grid, dilate=0)
    jet = surf.jet(t[:, None], s[None, :], allow_singular=True)
    hn = jet.H_norm[~mask]
    summary = {
        "name": spec.get("name"),
        "alpha": surf.alpha.describe(),
        "omega": surf.omega.describe(),
        "base": [surf.t0, surf.s0],
        "grid": grid.to_dict(),
        "singular_nodes": int(mask.sum()),
        "H_norm": {"min": float(hn.min()), "max": float(hn.max())},
        "min_speed": {"alpha": surf.alpha.min_speed(), "omega": surf.omega.min_speed()},
    }
    print(json.dumps(summary, indent=2))
    if args.out:
        _write_json(_out_dir(args, spec) / f"{_stem(spec)}.build.json", summary)
    return EXIT_OK


def cmd_classify(args) -> int:
    spec = _apply_overrides(load_spec(args.spec, args.param), args)
    surf = gallery.surface_from_spec(spec)
    grid = gallery.grid_from_spec(spec, surf)
    checks = spec.get("checks") or ["lagrangian"]
    report = classify.classify(surf, checks, grid, tol=args.tol, parameters={"spec": spec})
    doc = report.to_dict()
    print(json.dumps(doc, indent=2))
    if args.out:
        _write_json(_out_dir(args, spec) / f"{_stem(spec)}.report.json", doc)
    for c in report.checks:
        log.info("%-14s residual=%.3e threshold=%.1e %s", c.name, c.residual, c.threshold,
                 "pass" if c.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_verify(args) -> int:
    spec = _apply_overrides(load_spec(args.spec, args.param), args)
    surf = gallery.surface_from_spec(spec)
    grid = gallery.grid_from_spec(spec, surf)
    if args.seed is not None:
        rng = np.random.default_rng(args.seed)
        t = rng.uniform(*grid.t_range, 64)
        s = rng.uniform(*grid.s_range, 64)
        conf = np.abs(surf.alpha(t)) ** 2 + np.abs(surf.omega(s)) ** 2
        t, s = t[conf > 1e-2], s[conf > 1e-2]
    else:
        t, s = classify.oracle_points(surf, grid)
    threshold = args.tol or classify.FD_TOL
    errs = classify.oracle_errors(surf, t, s)
    lap = classify.relative_error(classify.fd_oracle_laplace_beta(surf, t, s),
                                  classify.laplace_beta_exact(surf, t, s), floor=1.0)
    errs["laplace_beta"] = lap
    ratios = classify.convergence_ratios(surf, t, s)
    rows = [
        {"oracle": k, "rel_error": v, "threshold": threshold, "pass": bool(v < threshold),
         "convergence_ratio": ratios.get(k)}
        for k, v in errs.items()
    ]
    doc = {"name": spec.get("name"), "h": classify.FD_STEP, "points": int(t.size), "seed": args.seed, "oracles": rows}
    for r in rows:
        ratio = "-" if r["convergence_ratio"] is None else f"{r['convergence_ratio']:.3f}"
        print(f"{r['oracle']:14s} {r['rel_error']:.3e}  ratio {ratio:>6s}  {'pass' if r['pass'] else 'FAIL'}")
    if args.out:
        _write_json(_out_dir(args, spec) / f"{_stem(spec)}.verify.json", doc)
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_CHECK_FAILED


def cmd_mesh(args) -> int:
    spec = _apply_overrides(load_spec(args.spec, args.param), args)
    surf = gallery.surface_from_spec(spec)
    grid = gallery.grid_from_spec(spec, surf)
    output = spec.get("output") or {}
    fmt = args.format or (output.get("formats") or ["obj"])[0]
    proj = args.project if args.project is not None else output.get("project")
    out = _out_dir(args, spec)
    mesh = meshio.sample(surf, grid.t_range, grid.s_range, grid.nt, grid.ns, wrap=args.wrap)
    stem = _stem(spec)
    written = []
    if fmt == "csv":
        written.append(meshio.write_csv(mesh, out / f"{stem}.csv"))
    else:
        axes = [0, 1, 2, 3] if proj == "all" else [3 if proj is None else proj]
        for ax in axes:
            written.append(meshio.WRITERS[fmt](meshio.project(mesh, ax), out / f"{stem}.drop{ax}.{fmt}"))
    for p in written:
        print(p)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lagstar", description="Lagrangian surfaces alpha * omega in C^2")
    verbose = argparse.ArgumentParser(add_help=False)
    verbose.add_argument("-v", "--verbose", action="store_true", help="log each check")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("spec", help="JSON spec file or gallery name")
        p.add_argument("--param", action="append", type=_parse_param, metavar="K=V",
                       help="gallery parameter override (repeatable)")
        p.add_argument("--grid", type=_parse_grid, metavar="NTxNS")
        p.add_argument("--trange", type=_parse_range, metavar="A:B")
        p.add_argument("--srange", type=_parse_range, metavar="A:B")
        p.add_argument("--out", metavar="DIR")
        p.add_argument("--tol", type=float)
        p.add_argument("--seed", type=int)

    g = sub.add_parser("gallery", parents=[verbose], help="list gallery entries or print one spec")
    g.add_argument("name", nargs="?")
    g.add_argument("--param", action="append", type=_parse_param, metavar="K=V")
    g.add_argument("--out", metavar="DIR")
    g.set_defaults(func=cmd_gallery)

    for name, func, help_ in (
        ("build", cmd_build, "build a surface and print a summary"),
        ("classify", cmd_classify, "run the spec's family checks"),
        ("verify", cmd_verify, "finite-difference oracle suite"),
    ):
        p = sub.add_parser(name, parents=[verbose], help=help_)
        common(p)
        p.set_defaults(func=func)

    m = sub.add_parser("mesh", parents=[verbose], help="sample and export a mesh")
    common(m)
    m.add_argument("--format", choices=["obj", "ply", "csv"])
    m.add_argument("--project", type=_parse_project, metavar="{0,1,2,3,all}")
    m.add_argument("--wrap", action="store_true", help="stitch periodic directions")
    m.set_defaults(func=cmd_mesh)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, DomainError, MissingPeriodError, MeshIOError) as exc:
        print(f"lagstar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, IntegrationError, SingularPointError, FloatingPointError) as exc:
        print(f"lagstar: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
