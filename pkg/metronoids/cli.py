from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np

from metronoids import __version__
from metronoids.constructions.builders import SAMPLED_TOL, evaluate_dstar_Dstar, sphere_construction, uniform_body_construction
from metronoids.constructions.volumes import grunbaum_ratio, tail_volume_ratio
from metronoids.engine.metronoid import extreme_points, membership, msupport_many, support_lp
from metronoids.engine.vertices import vertices
from metronoids.errors import MetronoidError, PreconditionError, SearchFailedError
from metronoids.exporters.csv_writer import render_csv, write_csv
from metronoids.exporters.json_writer import certificate_to_dict, dumps, write_json
from metronoids.exporters.svg_writer import write_figure
from metronoids.geometry.directions import default_net
from metronoids.geometry.tolerances import BOUNDARY_TOL
from metronoids.loaders.files import load_body, load_measure
from metronoids.measures.grid import discretize_grid, grid_sandwich_report
from metronoids.models.contracts import ConvexBody, DirectionNet, GridSpec, JSONDict, Metronoid, RunConfig
from metronoids.normalizers.numeric import parse_direction, parse_vector
from metronoids.pipelines.job_runner import ExperimentRunner, run_metadata
from metronoids.pipelines.parallel import worker_count
from metronoids.pipelines.tables import SUITES as TABLE_SUITES
from metronoids.pipelines.tables import build_table
from metronoids.pipelines.verify import DEFAULT_CASES, SUITES as VERIFY_SUITES, run_verify
from metronoids.vertex_index.centroid import centroid_energy
from metronoids.vertex_index.certificates import ball_certificate, cross_polytope_certificate
from metronoids.vertex_index.search import fvein_search

logger = logging.getLogger("metronoids")

DEFAULT_SEED = 20240601


def _common(parser: argparse.ArgumentParser, tol: bool) -> None:
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="base seed for every random stream")
    parser.add_argument("--count", type=int, default=None, help="atom/sample count")
    parser.add_argument("--net", type=int, default=None, help="direction-net size (720 in the plane, 2000 otherwise)")
    if tol:
        parser.add_argument("--tol", type=float, default=None, help="boundary/containment tolerance override")
    parser.add_argument("--out", type=Path, default=None, help="output file; stdout when omitted")
    parser.add_argument("--oracle", action="store_true", help="cross-check against the LP oracle")
    parser.add_argument("--verbose", action="store_true", help="debug logging")


def _body_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--body", type=Path, default=None, help="body JSON file")
    parser.add_argument("--kind", choices=("ball", "cube", "cross"), default=None)
    parser.add_argument("--dim", type=int, default=None)
    parser.add_argument("--radius", type=float, default=1.0)


def _body(args: argparse.Namespace) -> ConvexBody:
    if args.body is not None:
        return load_body(args.body)
    if args.kind is None or args.dim is None:
        raise PreconditionError("give --body FILE or both --kind and --dim")
    return ConvexBody(args.kind, args.dim, radius=args.radius)


def _net(args: argparse.Namespace, dim: int) -> DirectionNet:
    return default_net(dim, args.net)


def _config(args: argparse.Namespace, **parameters: Any) -> RunConfig:
    params = {k: v for k, v in parameters.items() if v is not None}
    for key in ("count", "net", "tol"):
        value = getattr(args, key, None)
        if value is not None:
            params.setdefault(key, value)
    inputs = tuple(str(p) for p in (getattr(args, "measure", None), getattr(args, "body", None)) if p is not None)
    return RunConfig(
        command=args.command_name,
        seed=args.seed,
        parameters=params,
        inputs=inputs,
        output=str(args.out) if args.out else None,
        version=__version__,
    )


def _emit(args: argparse.Namespace, config: RunConfig, render: Callable[[JSONDict], str], write: Callable[[Path, JSONDict], Path]) -> None:
    if args.out is None:
        sys.stdout.write(render(run_metadata(config)))
        return
    runner = ExperimentRunner(output_root=args.out.parent if str(args.out.parent) else Path("."))
    runner.run(config, lambda meta: [write(args.out, meta)])


def _emit_json(args: argparse.Namespace, config: RunConfig, payload: JSONDict) -> None:
    _emit(
        args,
        config,
        lambda meta: dumps({**payload, "metadata": meta}),
        lambda path, meta: write_json(path, payload, meta),
    )


def _emit_csv(args: argparse.Namespace, config: RunConfig, header: tuple[str, ...], rows: list[list[object]]) -> None:
    _emit(
        args,
        config,
        lambda meta: render_csv(header, rows, meta),
        lambda path, meta: write_csv(path, header, rows, meta),
    )


def cmd_support(args: argparse.Namespace) -> int:
    mu = load_measure(args.measure)
    m = Metronoid(mu)
    n = mu.dim
    dirs = parse_direction(args.theta, n)[None, :] if args.theta else _net(args, n).directions
    heights = msupport_many(m, dirs)
    points = extreme_points(m, dirs)
    header = tuple(f"theta_{i + 1}" for i in range(n)) + ("h",) + tuple(f"y_{i + 1}" for i in range(n))
    rows = [[*theta, h, *y] for theta, h, y in zip(dirs, heights, points)]
    if args.oracle:
        header += ("h_lp", "lp_gap")
        for row, theta, h in zip(rows, dirs, heights):
            lp = support_lp(m, theta)
            row.extend([lp, abs(lp - h)])
    _emit_csv(args, _config(args, theta=args.theta, oracle=args.oracle), header, rows)
    return 0


def cmd_member(args: argparse.Namespace) -> int:
    mu = load_measure(args.measure)
    point = _parse_point(args.point, mu.dim)
    tol = args.tol if args.tol is not None else BOUNDARY_TOL
    cert = membership(Metronoid(mu), point, _net(args, mu.dim), tol)
    payload = {
        "point": point,
        "status": cert.status,
        "slack": cert.slack,
        "coefficients": cert.coefficients,
    }
    _emit_json(args, _config(args, point=point.tolist()), {k: v for k, v in payload.items() if v is not None})
    return 0


def _parse_point(raw: str, dim: int) -> np.ndarray:
    parsed = parse_vector(raw)
    if parsed.values is None or len(parsed.values) != dim:
        raise PreconditionError(f"cannot read a point of R^{dim} from {raw!r}")
    return np.array(parsed.values)


def cmd_vertices(args: argparse.Namespace) -> int:
    mu = load_measure(args.measure)
    verts = vertices(Metronoid(mu), args.method)
    header = tuple(f"x_{i + 1}" for i in range(mu.dim))
    _emit_csv(args, _config(args, method=args.method), header, [list(v) for v in verts])
    return 0


def cmd_figure(args: argparse.Namespace) -> int:
    if args.out is None:
        raise PreconditionError("figure needs --out FILE.svg")
    mu = load_measure(args.measure)
    config = _config(args)
    runner = ExperimentRunner(output_root=args.out.parent if str(args.out.parent) else Path("."))
    runner.run(config, lambda meta: [write_figure(args.out, mu, meta)])
    return 0


def cmd_construct(args: argparse.Namespace) -> int:
    tol = args.tol if args.tol is not None else SAMPLED_TOL
    if args.variant == "sphere":
        if args.dim is None:
            raise PreconditionError("construct sphere needs --dim")
        body = ConvexBody(args.kind, args.dim, radius=args.radius) if args.kind else None
        report = sphere_construction(args.dim, args.count or 10_000, args.seed, body=body, net=_net(args, args.dim), tol=tol)
    else:
        body = _body(args)
        report = uniform_body_construction(body, args.scale, args.count or 20_000, args.seed, net=_net(args, body.dim), tol=tol)
    row = evaluate_dstar_Dstar(report)
    payload = {
        "row": dict(zip(row.HEADER, row.as_row())),
        "support_deviation": report.support_deviation,
        "outer_exact": report.containment.outer_exact,
        "measure": report.measure.to_dict(),
    }
    _emit_json(args, _config(args, variant=args.variant, scale=getattr(args, "scale", None), kind=args.kind, dim=args.dim), payload)
    return 0 if report.containment.passed else 1


def _volume_payload(estimate) -> JSONDict:
    payload = {
        "value": estimate.value,
        "std_error": estimate.std_error,
        "samples": estimate.samples,
        "bound": estimate.bound,
        "claimed_bound": estimate.claimed_bound,
        "meets_bound": estimate.meets_bound,
    }
    return {k: v for k, v in payload.items() if v is not None}


def cmd_tailbound(args: argparse.Namespace) -> int:
    body = _body(args)
    u = parse_direction(args.direction, body.dim)
    estimate = tail_volume_ratio(body, u, args.scale, args.count or 1_000_000, args.seed)
    _emit_json(args, _config(args, direction=u.tolist(), scale=args.scale), _volume_payload(estimate))
    return 0 if estimate.meets_bound else 1


def cmd_grunbaum(args: argparse.Namespace) -> int:
    body = _body(args)
    u = parse_direction(args.direction, body.dim)
    estimate = grunbaum_ratio(body, u, args.count or 1_000_000, args.seed)
    _emit_json(args, _config(args, direction=u.tolist()), _volume_payload(estimate))
    return 0 if estimate.meets_bound else 1


def cmd_cert(args: argparse.Namespace) -> int:
    if args.variant == "cross":
        cert = cross_polytope_certificate(args.dim, _net(args, args.dim))
    else:
        tol = args.tol if args.tol is not None else SAMPLED_TOL
        cert = ball_certificate(args.dim, args.count or 10_000, args.seed, _net(args, args.dim), tol)
    _emit_json(args, _config(args, variant=args.variant, dim=args.dim), certificate_to_dict(cert))
    return 0 if cert.valid else 1


def cmd_fvein_search(args: argparse.Namespace) -> int:
    body = _body(args)
    result = fvein_search(body, args.generators, args.seed, args.iterations, args.restarts, _net(args, body.dim))
    if result.certificate is None:
        raise SearchFailedError(f"no feasible cover with {args.generators} generators after {args.iterations} iterations")
    payload = certificate_to_dict(result.certificate)
    payload.update(status=result.status, restart=result.restart, restarts=result.restarts, best_costs=list(result.best_costs))
    config = _config(args, generators=args.generators, iterations=args.iterations, restarts=args.restarts)
    _emit_json(args, config, payload)
    return 0


def cmd_centroid_energy(args: argparse.Namespace) -> int:
    mu = load_measure(args.measure)
    energy = centroid_energy(mu)
    _emit_json(args, _config(args), {"dim": mu.dim, "energy": energy, "sqrt_n": float(np.sqrt(mu.dim))})
    return 0


def cmd_discretize(args: argparse.Namespace) -> int:
    mu = load_measure(args.measure)
    grid = GridSpec(range=args.range, resolution=args.resolution, eps=args.eps)
    snapped = discretize_grid(mu, grid)
    report = grid_sandwich_report(mu, grid, _net(args, mu.dim))
    payload = {
        **snapped.to_dict(),
        "report": {
            "status": report.status,
            "eps": report.eps,
            "lower_violations": report.lower_violations,
            "upper_violations": report.upper_violations,
            "worst_lower": report.worst_lower,
            "worst_upper": report.worst_upper,
        },
    }
    _emit_json(args, _config(args, range=args.range, resolution=args.resolution, eps=args.eps), payload)
    return 0 if report.status == "PASSED" else 1


def cmd_tables(args: argparse.Namespace) -> int:
    header, rows = build_table(args.suite, args.seed, args.count)
    _emit_csv(args, _config(args, suite=args.suite), header, rows)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_verify(args.seed, args.suite, args.cases)
    _emit_json(args, _config(args, suite=args.suite, cases=args.cases), report)
    return 0 if report["validation_status"] == "PASSED" else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metronoids", description="Metronoids of discrete measures and vertex-index certificates.")
    parser.add_argument("--version", action="version", version=f"metronoids {__version__}")
    sub = parser.add_subparsers(dest="command_name", required=True)

    def command(name: str, handler: Callable[[argparse.Namespace], int], help_text: str, tol: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        _common(p, tol)
        p.set_defaults(handler=handler)
        return p

    p = command("support", cmd_support, "support function of M(mu) on a direction or net")
    p.add_argument("measure", type=Path)
    p.add_argument("--theta", default=None, help="single direction, e.g. '1,0'")

    p = command("member", cmd_member, "membership of a point in M(mu)", tol=True)
    p.add_argument("measure", type=Path)
    p.add_argument("--point", required=True)

    p = command("vertices", cmd_vertices, "vertices of M(mu)")
    p.add_argument("measure", type=Path)
    p.add_argument("--method", choices=("auto", "sweep", "brute"), default="auto")

    p = command("figure", cmd_figure, "SVG with atom hull, zonotope and metronoid layers")
    p.add_argument("measure", type=Path)

    p = command("construct", cmd_construct, "sphere or uniform-body construction", tol=True)
    p.add_argument("variant", choices=("sphere", "uniform"))
    _body_options(p)
    p.add_argument("--scale", type=float, default=2.0, help="sandwich factor R")

    for name, handler in (("tailbound", cmd_tailbound), ("grunbaum", cmd_grunbaum)):
        p = command(name, handler, "Monte Carlo half-space volume ratio")
        _body_options(p)
        p.add_argument("--direction", required=True)
        if name == "tailbound":
            p.add_argument("--scale", type=float, default=2.0)

    p = command("cert", cmd_cert, "cross-polytope or ball certificate", tol=True)
    p.add_argument("variant", choices=("cross", "ball"))
    p.add_argument("--dim", type=int, required=True)

    p = command("fvein-search", cmd_fvein_search, "search for a cheap zonotope cover")
    _body_options(p)
    p.add_argument("--generators", type=int, required=True)
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--restarts", type=int, default=8)

    p = command("centroid-energy", cmd_centroid_energy, "integral of ||x|| in the centroid-body norm")
    p.add_argument("measure", type=Path)

    p = command("discretize", cmd_discretize, "snap a measure to the dyadic grid")
    p.add_argument("measure", type=Path)
    p.add_argument("--range", type=float, required=True)
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)

    p = command("tables", cmd_tables, "experiment tables as CSV")
    p.add_argument("suite", choices=TABLE_SUITES)

    p = command("verify", cmd_verify, "run the property suites")
    p.add_argument("--suite", choices=("all", *VERIFY_SUITES), default="all")
    p.add_argument("--cases", type=int, default=DEFAULT_CASES)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    logger.debug("command %s with %d worker thread(s)", args.command_name, worker_count())
    try:
        return args.handler(args)
    except MetronoidError as exc:
        print(f"metronoids {args.command_name}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
