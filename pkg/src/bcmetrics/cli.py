"""Command-line front end: basis | metrics | verify | sweep | acceptance.

Configs are strict JSON.  A config file is either a bare domain document

    {"kind": "polydisc", "dimension": 2, "polyradii": [1.0, 1.0]}

or a full run config

    {
      "domain": {...},
      "degree_cap": 12,
      "tangents": [{"z": [[0.0, 0.0], [0.0, 0.0]], "X": [[1.0, 0.0], [0.0, 0.0]]}],
      "seeds": [0],
      "tolerances": {"equality": 1e-9},
      "cara_mode": "exact",
      "output": {"path": "report.json", "format": "json"}
    }

Complex components are written as [re, im]; bare numbers are taken as real.
Unknown keys are rejected with the offending line.  All numeric output is
printed with 17 significant digits, and identical configs and seeds produce
byte-identical reports.

Exit codes: 0 all checks passed, 1 a numerical criterion failed,
2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import acceptance as acceptance_mod
from .bergman import BasisTable, TangentData, build_basis, kernel_diag
from .domains import (
    DomainSpec,
    _key_line,
    domain_from_dict,
    domain_to_dict,
    gauge,
    sample_boundary,
    sample_interior,
)
from .errors import BcmetricsError, ConfigError, UnsupportedDomainError
from .metrics import (
    MODE_EXACT,
    bergman_metric_hessian,
    caratheodory_exact,
    caratheodory_minimax,
    minimal_interpolant,
)
from .projection import report_to_dict, verify_equality

_RUN_KEYS = {"domain", "degree_cap", "tangents", "seeds", "tolerances", "cara_mode", "output"}
_DEFAULT_DEGREE = 12
_MINIMAX_DEGREE = 4
_MINIMAX_BOUNDARY = 512


def _fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass
class RunConfig:
    domain: DomainSpec
    degree_cap: int = _DEFAULT_DEGREE
    tangents: list[TangentData] = field(default_factory=list)
    seeds: list[int] = field(default_factory=lambda: [0])
    tolerances: dict[str, float] = field(default_factory=dict)
    cara_mode: str = "exact"
    output_path: str | None = None
    output_format: str | None = None


def _parse_complex_vector(raw, dim: int, what: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != dim:
        raise ConfigError(f"{what} must be a list of {dim} components")
    out = np.zeros(dim, dtype=np.complex128)
    for i, comp in enumerate(raw):
        if isinstance(comp, (int, float)) and not isinstance(comp, bool):
            out[i] = float(comp)
        elif (
            isinstance(comp, list)
            and len(comp) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in comp)
        ):
            out[i] = complex(float(comp[0]), float(comp[1]))
        else:
            raise ConfigError(
                f"{what} component {i} must be a number or an [re, im] pair, got {comp!r}"
            )
    return out


def _default_tangents(domain: DomainSpec) -> list[TangentData]:
    n = domain.dimension
    z = np.zeros(n, dtype=np.complex128)
    tangents = []
    for j in range(n):
        x = np.zeros(n, dtype=np.complex128)
        x[j] = 1.0
        tangents.append(TangentData(z, x))
    if n > 1:
        tangents.append(TangentData(z, np.full(n, 1.0 / np.sqrt(n), dtype=np.complex128)))
    return tangents


def load_run_config(path: str) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")

    if "kind" in raw:  # bare domain document
        domain = domain_from_dict(raw, text)
        return RunConfig(domain=domain, tangents=_default_tangents(domain))

    unknown = set(raw) - _RUN_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"{path}: {_key_line(text, key)}: unknown config key {key!r}")
    if "domain" not in raw:
        raise ConfigError(f"{path}: missing required key \"domain\"")
    domain = domain_from_dict(raw["domain"], text)

    config = RunConfig(domain=domain)
    degree = raw.get("degree_cap", _DEFAULT_DEGREE)
    if not isinstance(degree, int) or degree < 0:
        raise ConfigError(
            f"{path}: {_key_line(text, 'degree_cap')}: \"degree_cap\" must be a "
            "non-negative integer"
        )
    config.degree_cap = degree

    seeds = raw.get("seeds", [0])
    if not isinstance(seeds, list) or not all(isinstance(s, int) for s in seeds) or not seeds:
        raise ConfigError(
            f"{path}: {_key_line(text, 'seeds')}: \"seeds\" must be a non-empty "
            "list of integers"
        )
    config.seeds = seeds

    tolerances = raw.get("tolerances", {})
    if not isinstance(tolerances, dict) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in tolerances.values()
    ):
        raise ConfigError(
            f"{path}: {_key_line(text, 'tolerances')}: \"tolerances\" must map "
            "names to numbers"
        )
    config.tolerances = {k: float(v) for k, v in tolerances.items()}

    mode = raw.get("cara_mode", "exact")
    if mode not in ("exact", "minimax"):
        raise ConfigError(
            f"{path}: {_key_line(text, 'cara_mode')}: \"cara_mode\" must be "
            "\"exact\" or \"minimax\""
        )
    config.cara_mode = mode

    tangents_raw = raw.get("tangents")
    if tangents_raw is None:
        config.tangents = _default_tangents(domain)
    else:
        if not isinstance(tangents_raw, list) or not tangents_raw:
            raise ConfigError(
                f"{path}: {_key_line(text, 'tangents')}: \"tangents\" must be a "
                "non-empty list"
            )
        parsed = []
        for i, item in enumerate(tangents_raw):
            if not isinstance(item, dict) or set(item) != {"z", "X"}:
                raise ConfigError(
                    f"{path}: tangent {i} must be an object with exactly "
                    "the keys \"z\" and \"X\""
                )
            z = _parse_complex_vector(item["z"], domain.dimension, f"tangent {i} \"z\"")
            x = _parse_complex_vector(item["X"], domain.dimension, f"tangent {i} \"X\"")
            if gauge(domain, z) >= 1.0:
                raise ConfigError(f"{path}: tangent {i} base point is not inside the domain")
            parsed.append(TangentData(z, x))
        config.tangents = parsed

    output = raw.get("output")
    if output is not None:
        if not isinstance(output, dict) or set(output) - {"path", "format"}:
            raise ConfigError(
                f"{path}: {_key_line(text, 'output')}: \"output\" accepts only "
                "\"path\" and \"format\""
            )
        config.output_path = output.get("path")
        fmt = output.get("format")
        if fmt is not None and fmt not in ("json", "csv"):
            raise ConfigError(
                f"{path}: {_key_line(text, 'format')}: \"format\" must be "
                "\"json\" or \"csv\""
            )
        config.output_format = fmt
    return config


def _emit(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text)


def _caratheodory(config: RunConfig, basis: BasisTable, t: TangentData):
    domain = config.domain
    exact_available = domain.kind in ("polydisc", "ball")
    if config.cara_mode == "minimax" or not exact_available:
        if config.cara_mode != "minimax":
            raise UnsupportedDomainError(
                f"domain kind {domain.kind!r} has no exact Caratheodory closed form; "
                "pass --minimax (or set \"cara_mode\": \"minimax\") to opt into the "
                "sampled lower bound"
            )
        boundary = sample_boundary(domain, _MINIMAX_BOUNDARY, seed=config.seeds[0])
        return caratheodory_minimax(
            domain, t, degree=min(_MINIMAX_DEGREE, config.degree_cap), boundary=boundary
        )
    return caratheodory_exact(domain, t, truncate_degree=config.degree_cap)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_basis(config: RunConfig, out_path: str | None) -> int:
    basis = build_basis(config.domain, config.degree_cap)
    n = config.domain.dimension
    lines = [
        "# orthonormal monomial basis dump (graded order)",
        f"# domain: {json.dumps(domain_to_dict(config.domain), sort_keys=True)}",
        f"# degree_cap: {config.degree_cap}",
    ]
    if config.domain.kind == "polydisc":
        lines.append(
            "# cross-check: on the unit bidisc the integral of |z_1|^2 is pi^2/2, "
            "so the degree-1 normalizer is sqrt(2)/pi, not sqrt(3/2)/pi"
        )
    lines.append(
        ",".join([f"alpha_{j + 1}" for j in range(n)] + ["norm_sq", "normalizer"])
    )
    for row, norm_sq, normalizer in zip(basis.exponents, basis.norms_sq, basis.normalizers):
        lines.append(
            ",".join([str(int(e)) for e in row] + [_fmt(norm_sq), _fmt(normalizer)])
        )
    _emit("\n".join(lines) + "\n", out_path)
    return 0


def _tangent_columns(n: int) -> list[str]:
    cols = []
    for j in range(n):
        cols += [f"z_{j + 1}_re", f"z_{j + 1}_im"]
    for j in range(n):
        cols += [f"X_{j + 1}_re", f"X_{j + 1}_im"]
    return cols


def _tangent_cells(t: TangentData) -> list[str]:
    cells = []
    for v in t.z:
        cells += [_fmt(v.real), _fmt(v.imag)]
    for v in t.X:
        cells += [_fmt(v.real), _fmt(v.imag)]
    return cells


def cmd_metrics(config: RunConfig, out_path: str | None) -> int:
    basis = build_basis(config.domain, config.degree_cap)
    header = _tangent_columns(config.domain.dimension) + [
        "bergman",
        "caratheodory",
        "mode",
        "lu_gap",
        "degree_cap",
        "route_residual",
    ]
    lines = [",".join(header)]
    worst_gap = np.inf
    for t in config.tangents:
        if np.all(t.X == 0):
            bergman = 0.0
            cara_value = 0.0
            mode = MODE_EXACT
            route_residual = 0.0
        else:
            bergman = bergman_metric_hessian(basis, t)
            cara = _caratheodory(config, basis, t)
            cara_value = cara.value
            mode = cara.mode
            interp = minimal_interpolant(basis, t)
            route_residual = abs(
                np.sqrt(kernel_diag(basis, t.z)) * bergman * interp.norm - 1.0
            )
        gap = bergman - cara_value
        worst_gap = min(worst_gap, gap)
        lines.append(
            ",".join(
                _tangent_cells(t)
                + [
                    _fmt(bergman),
                    _fmt(cara_value),
                    mode,
                    _fmt(gap),
                    str(config.degree_cap),
                    _fmt(route_residual),
                ]
            )
        )
    _emit("\n".join(lines) + "\n", out_path)
    return 1 if worst_gap < -1e-8 else 0


def cmd_verify(config: RunConfig, out_path: str | None, tolerance: float | None) -> int:
    basis = build_basis(config.domain, config.degree_cap)
    if tolerance is None:
        tolerance = config.tolerances.get("equality")
    reports = []
    all_within = True
    for t in config.tangents:
        cara = _caratheodory(config, basis, t)
        report = verify_equality(basis, t, cara, tolerance=tolerance)
        all_within = all_within and report.residual_equality <= report.tolerance
        reports.append(
            report_to_dict(report, basis, seeds=config.seeds, tolerances=config.tolerances)
        )
    payload = {"schema": 1, "reports": reports}
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", out_path)
    return 0 if all_within else 1


def cmd_sweep(config: RunConfig, out_path: str | None, points_per_seed: int = 8) -> int:
    """Tabulate the Hahn-bound gap over seeded random tangents."""
    basis = build_basis(config.domain, config.degree_cap)
    header = ["seed"] + _tangent_columns(config.domain.dimension) + [
        "bergman",
        "caratheodory",
        "mode",
        "strict_gap",
        "hahn_distance",
        "residual_equality",
        "verdict",
    ]
    lines = [",".join(header)]
    for seed in config.seeds:
        rng = np.random.default_rng(seed)
        interior = sample_interior(config.domain, 4 * points_per_seed, seed=seed)
        points = [p for p in interior.points if gauge(config.domain, p) <= 0.6]
        points = points[:points_per_seed]
        for z in points:
            raw = rng.standard_normal((config.domain.dimension, 2))
            x = raw[:, 0] + 1j * raw[:, 1]
            x /= np.linalg.norm(x)
            t = TangentData(np.asarray(z), x)
            cara = _caratheodory(config, basis, t)
            report = verify_equality(basis, t, cara)
            lines.append(
                ",".join(
                    [str(seed)]
                    + _tangent_cells(t)
                    + [
                        _fmt(report.bergman),
                        _fmt(report.caratheodory),
                        report.mode,
                        _fmt(report.strict_gap),
                        _fmt(report.hahn_distance),
                        _fmt(report.residual_equality),
                        report.verdict,
                    ]
                )
            )
    _emit("\n".join(lines) + "\n", out_path)
    return 0


def cmd_acceptance(out_path: str | None) -> int:
    records, elapsed = acceptance_mod.run_all(verbose=True)
    summary = {
        "criteria": [
            {
                "id": r.ident,
                "title": r.title,
                "passed": bool(r.passed),
                "measured": {k: float(v) for k, v in r.measured.items()},
            }
            for r in records
        ],
        "elapsed_seconds": elapsed,
        "all_passed": bool(all(r.passed for r in records)),
    }
    if out_path is not None:
        _emit(json.dumps(summary, sort_keys=True, indent=2) + "\n", out_path)
    print(f"total: {sum(r.passed for r in records)}/{len(records)} passed in {elapsed:.1f}s")
    return 0 if summary["all_passed"] else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcmetrics",
        description="Bergman and Caratheodory metrics on model domains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_domain=True):
        if needs_domain:
            p.add_argument("--domain", required=True, help="JSON domain or run config file")
        p.add_argument("--degree", type=int, default=None, help="basis degree cap")
        p.add_argument("--seed", type=int, default=None, help="override the first RNG seed")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument(
            "--format", choices=("json", "csv"), default=None, help="output format override"
        )

    common(sub.add_parser("basis", help="dump the orthonormal basis table as CSV"))
    common(sub.add_parser("metrics", help="metric sweep CSV over the configured tangents"))
    p_verify = sub.add_parser("verify", help="equality reports as JSON")
    common(p_verify)
    p_verify.add_argument(
        "--tolerance", type=float, default=None, help="equality residual tolerance"
    )
    p_verify.add_argument(
        "--minimax",
        action="store_true",
        help="opt into the sampled minimax lower bound for the Caratheodory side",
    )
    p_sweep = sub.add_parser("sweep", help="tabulate Hahn-bound gaps over random tangents")
    common(p_sweep)
    p_accept = sub.add_parser("acceptance", help="run the acceptance criteria suite")
    p_accept.add_argument("--out", default=None, help="JSON summary file")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "acceptance":
            return cmd_acceptance(args.out)
        config = load_run_config(args.domain)
        if args.degree is not None:
            if args.degree < 0:
                raise ConfigError("--degree must be non-negative")
            config.degree_cap = args.degree
        if args.seed is not None:
            config.seeds = [args.seed] + config.seeds[1:]
        if getattr(args, "minimax", False):
            config.cara_mode = "minimax"
        native = {"basis": "csv", "metrics": "csv", "sweep": "csv", "verify": "json"}
        requested = args.format if args.format is not None else config.output_format
        if requested is not None and requested != native[args.command]:
            raise ConfigError(
                f"the {args.command} report format is {native[args.command]!r}; "
                f"got format {requested!r}"
            )
        out_path = args.out if args.out is not None else config.output_path
        if args.command == "basis":
            return cmd_basis(config, out_path)
        if args.command == "metrics":
            return cmd_metrics(config, out_path)
        if args.command == "verify":
            return cmd_verify(config, out_path, args.tolerance)
        if args.command == "sweep":
            return cmd_sweep(config, out_path)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, UnsupportedDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BcmetricsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
