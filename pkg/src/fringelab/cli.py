"""Command-line front end.

Subcommands: ``scan``, ``young``, ``fig2``, ``prep``, ``compare``, ``verify``,
``list`` and ``run`` (replay a saved JSON config). Exit codes: 0 on success,
1 on usage errors, 2 when a simulated quantity disagrees with its closed
form beyond tolerance.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from . import formulas
from .coherence import DEFAULT_PHI_POINTS, format_float, phi_grid, scan_pattern
from .fock import FockState
from .optics import CircuitSpec, CoherentField, coherent_to_fock, propagate_fock
from .scenarios import (
    FORMULA_TOL,
    MAX_YOUNG_ORDER,
    classical_channel_model,
    extraction_tolerance,
    fig2_csv,
    fig2_curve,
    interpolation_input,
    interpolation_scenario,
    phased_interpolation_scenario,
    prepare_interpolation_state,
    single_photon_scenario,
    surface_csv,
    visibility_surface,
    young_input,
    young_scenario,
)
from .verify import run_suite

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2

COMMANDS = ("scan", "young", "fig2", "prep", "compare", "verify", "list")
SCAN_SCENARIOS = ("single-a", "single-b", "young", "interp", "phased", "classical")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    command: str
    domain: str
    reference: str


CATALOG = (
    CatalogEntry("single-a", "scan", "no parameters", "one photon in port a: I_A = (1 + cos phi)/2"),
    CatalogEntry("single-b", "scan", "no parameters", "one photon in port b: I_A = (1 - cos phi)/2"),
    CatalogEntry(
        "young", "young",
        f"coefficient list c_0..c_{MAX_YOUNG_ORDER} with sum |c|^2 = 1, or coherent alpha with --cutoff",
        "single-port input: I_A = N/2 (1 + cos phi), |g1| = 1",
    ),
    CatalogEntry(
        "interp", "scan", "eta in [0, 1]",
        "sqrt(eta) a^2/sqrt2 + sqrt(1-eta) ab: I_A = 1 + eta cos phi, |g1| = eta/sqrt(1 - 2 eta (1-eta))",
    ),
    CatalogEntry(
        "phased", "scan", "eta in [0, 1], beta real",
        "b -> e^{i beta} b: V_Q = sqrt(eta^2 + 2 eta (1-eta) sin^2 beta) vs V_C = sqrt(eta^2 + (1-eta^2) sin^2 beta)",
    ),
    CatalogEntry(
        "classical", "scan", "alpha complex and nonzero, phi12 real",
        "coherent pair (alpha, e^{i phi12} alpha): I_A = |alpha|^2 (1 + cos(phi - phi12)), |g1| = 1",
    ),
    CatalogEntry(
        "prep", "prep", "eta_angle in [0, pi/2]",
        "pair 1H 2V, polarization turn, splitter, vacuum in c: cos(eta) a^2/sqrt2 + sin(eta) ab with p = 1/2",
    ),
    CatalogEntry("fig2", "fig2", "points >= 2 over eta in [0, 1]", "suppressed |g1|(eta) against classical |g1| = 1"),
    CatalogEntry(
        "compare", "compare", "points >= 2 per axis over eta in [0, 1], beta in [0, pi]",
        "quantum and classical visibility surfaces, V_Q <= V_C",
    ),
)


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    scenario: str | None = None
    eta: float | None = None
    beta: float = 0.0
    phi12: float = 0.0
    alpha: complex | None = None
    coeffs: list[complex] | None = None
    phi_points: int = DEFAULT_PHI_POINTS
    points: int | None = None
    cutoff: int | None = None
    format: str = "csv"
    out: str | None = None
    circuit: dict | None = None

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["alpha"] = None if self.alpha is None else [self.alpha.real, self.alpha.imag]
        d["coeffs"] = None if self.coeffs is None else [[c.real, c.imag] for c in self.coeffs]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data)
        unknown = set(data) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        if data.get("alpha") is not None:
            data["alpha"] = complex(*data["alpha"])
        if data.get("coeffs") is not None:
            data["coeffs"] = [complex(*c) for c in data["coeffs"]]
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command == "scan":
            if self.scenario not in SCAN_SCENARIOS:
                raise UsageError(f"unknown scan scenario {self.scenario!r}; choose from {', '.join(SCAN_SCENARIOS)}")
        if self.format not in ("csv", "json"):
            raise UsageError("format must be csv or json")
        if self.phi_points < 2:
            raise UsageError("--phi-points must be at least 2")
        if self.points is not None and self.points < (1 if self.command == "prep" else 2):
            raise UsageError("--points is too small")
        if self.cutoff is not None and self.cutoff < 0:
            raise UsageError("--cutoff must be non-negative")
        if self.eta is not None:
            if self.command == "prep":
                if not 0.0 <= self.eta <= math.pi / 2:
                    raise UsageError("eta_angle must lie in [0, pi/2]")
            elif not 0.0 <= self.eta <= 1.0:
                raise UsageError("eta must lie in [0, 1]")
        needs_eta = self.command == "scan" and self.scenario in ("interp", "phased")
        if needs_eta and self.eta is None:
            raise UsageError(f"scenario {self.scenario} needs --eta")
        if self.is_young and self.coeffs is None and self.alpha is None:
            raise UsageError("young needs --coeffs or --alpha-re/--alpha-im")
        if self.command == "scan" and self.scenario == "classical" and (self.alpha is None or self.alpha == 0):
            raise UsageError("classical scenario needs a nonzero --alpha-re/--alpha-im")
        if self.circuit is not None:
            if self.command not in ("scan", "young") or self.scenario == "classical":
                raise UsageError("--circuit applies to quantum scan scenarios only")
            try:
                spec = CircuitSpec.from_dict(self.circuit)
            except (KeyError, TypeError, ValueError) as exc:
                raise UsageError(f"bad circuit: {exc}") from None
            if spec.mode_count != 2:
                raise UsageError("--circuit must describe a two-mode circuit")

    @property
    def is_young(self) -> bool:
        return self.command == "young" or (self.command == "scan" and self.scenario == "young")


# -- helpers ------------------------------------------------------------------

def parse_coeffs(text: str) -> list[complex]:
    """``"0.6,0.8"`` or ``"0.6:0,0:0.8"`` (re:im pairs) or Python complex literals."""
    out = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if ":" in token:
            re_part, im_part = token.split(":", 1)
            out.append(complex(float(re_part), float(im_part)))
        else:
            out.append(complex(token.replace(" ", "")))
    if not out:
        raise ValueError("empty coefficient list")
    return out


def young_coefficients(cfg: RunConfig) -> list[complex]:
    if cfg.coeffs is not None:
        if len(cfg.coeffs) - 1 > MAX_YOUNG_ORDER:
            raise UsageError(f"at most {MAX_YOUNG_ORDER + 1} coefficients")
        return cfg.coeffs
    field_ = CoherentField([cfg.alpha])
    cutoff = MAX_YOUNG_ORDER if cfg.cutoff is None else cfg.cutoff
    if cutoff > MAX_YOUNG_ORDER:
        raise UsageError(f"--cutoff above {MAX_YOUNG_ORDER} not supported for young")
    state, _ = coherent_to_fock(field_, cutoff)
    coeffs = np.array([state[(n,)] for n in range(cutoff + 1)])
    return list(coeffs / np.linalg.norm(coeffs))


def _input_state(cfg: RunConfig) -> FockState:
    if cfg.is_young:
        return young_input(young_coefficients(cfg))
    if cfg.scenario == "single-a":
        return FockState.basis(1, 0)
    if cfg.scenario == "single-b":
        return FockState.basis(0, 1)
    return interpolation_input(cfg.eta, cfg.beta if cfg.scenario == "phased" else 0.0)


def _scenario(cfg: RunConfig, phis: np.ndarray):
    if cfg.is_young:
        coeffs = young_coefficients(cfg)
        norm2 = sum(abs(c) ** 2 for c in coeffs)
        if abs(norm2 - 1.0) > 1e-10:
            raise UsageError(f"coefficients must be normalized (sum |c|^2 = {norm2:.12g})")
        return young_scenario(coeffs, phis)
    if cfg.scenario in ("single-a", "single-b"):
        return single_photon_scenario(cfg.scenario[-1], phis)
    if cfg.scenario == "interp":
        return interpolation_scenario(cfg.eta, phis, cfg.phi12)
    if cfg.scenario == "phased":
        return phased_interpolation_scenario(cfg.eta, cfg.beta, phis)
    return classical_channel_model(cfg.alpha, cfg.phi12, phis)


def _rows_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else format_float(v) for v in row])
    return buf.getvalue()


def _dump(data) -> str:
    return json.dumps(data, indent=2) + "\n"


# -- commands -----------------------------------------------------------------

def _cmd_scan(cfg: RunConfig) -> tuple[str, bool]:
    phis = phi_grid(cfg.phi_points)
    if cfg.circuit is not None:
        transform = CircuitSpec.from_dict(cfg.circuit).to_transform()
        pattern = scan_pattern(propagate_fock(_input_state(cfg), transform), phis)
        return (pattern.to_csv() if cfg.format == "csv" else pattern.to_json() + "\n"), True
    res = _scenario(cfg, phis)
    if cfg.format == "json":
        return _dump(res.to_dict()), res.ok
    pattern = res.quantum_pattern if res.quantum_pattern is not None else res.classical_pattern
    return pattern.to_csv(), res.ok


def _cmd_fig2(cfg: RunConfig) -> tuple[str, bool]:
    rows = fig2_curve(np.linspace(0.0, 1.0, cfg.points or 101))
    ok = all(abs(r.g1_sim - r.g1_formula) <= FORMULA_TOL for r in rows)
    if cfg.format == "json":
        return _dump([dataclasses.asdict(r) for r in rows]), ok
    return fig2_csv(rows), ok


PREP_COLUMNS = ("eta_angle", "eta_weight", "success_probability", "fidelity", "c20_re", "c20_im", "c11_re", "c11_im")


def _cmd_prep(cfg: RunConfig) -> tuple[str, bool]:
    phis = phi_grid(cfg.phi_points)
    angles = [cfg.eta] if cfg.eta is not None else np.linspace(0.0, math.pi / 2, cfg.points or 19)
    records, ok = [], True
    for angle in angles:
        prep = prepare_interpolation_state(float(angle), phis)
        ok = ok and prep.scenario.ok
        fid = prep.scenario.simulated.get("fidelity", 0.0)
        records.append((float(angle), prep, fid))
    if cfg.format == "json":
        return _dump([
            {
                "eta_angle": a,
                "eta_weight": formulas.angle_to_weight(a),
                "success_probability": p.success_probability,
                "fidelity": f,
                "state": p.state.to_json() if p.state is not None else None,
            }
            for a, p, f in records
        ]), ok
    rows = []
    for a, p, f in records:
        c20 = p.state[(2, 0)] if p.state is not None else 0j
        c11 = p.state[(1, 1)] if p.state is not None else 0j
        rows.append((a, formulas.angle_to_weight(a), p.success_probability, f, c20.real, c20.imag, c11.real, c11.imag))
    return _rows_csv(PREP_COLUMNS, rows), ok


def _cmd_compare(cfg: RunConfig) -> tuple[str, bool]:
    n = cfg.points or 21
    phis = phi_grid(cfg.phi_points)
    pts = visibility_surface(np.linspace(0.0, 1.0, n), np.linspace(0.0, math.pi, n), phis)
    tol = extraction_tolerance(phis)
    ok = all(
        abs(p.V_Q_sim - p.V_Q_formula) <= FORMULA_TOL
        and abs(p.V_C_sim - p.V_C_formula) <= FORMULA_TOL
        and abs(p.V_Q_extracted - p.V_Q_formula) <= tol
        and abs(p.V_C_extracted - p.V_C_formula) <= tol
        and p.V_Q_sim <= p.V_C_sim + FORMULA_TOL
        for p in pts
    )
    if cfg.format == "json":
        return _dump([dataclasses.asdict(p) for p in pts]), ok
    return surface_csv(pts), ok


def _cmd_verify(cfg: RunConfig) -> tuple[str, bool]:
    checks = run_suite()
    ok = all(c.passed for c in checks)
    if cfg.format == "json":
        return _dump([dataclasses.asdict(c) for c in checks]), ok
    lines = [c.line() for c in checks]
    lines.append(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n", ok


def list_scenarios(fmt: str = "csv") -> str:
    if fmt == "json":
        return _dump([dataclasses.asdict(e) for e in CATALOG])
    width = max(len(e.name) for e in CATALOG)
    lines = []
    for e in CATALOG:
        lines.append(f"{e.name:<{width}}  [{e.command}]  domain: {e.domain}")
        lines.append(f"{'':<{width}}  {e.reference}")
    return "\n".join(lines) + "\n"


def _cmd_list(cfg: RunConfig) -> tuple[str, bool]:
    return list_scenarios(cfg.format), True


HANDLERS = {
    "scan": _cmd_scan,
    "young": _cmd_scan,
    "fig2": _cmd_fig2,
    "prep": _cmd_prep,
    "compare": _cmd_compare,
    "verify": _cmd_verify,
    "list": _cmd_list,
}


def run(cfg: RunConfig, stdout: TextIO | None = None) -> int:
    """Execute one configuration and write its artifact. Returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    cfg.validate()
    text, ok = HANDLERS[cfg.command](cfg)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        stdout.write(text)
    if not ok:
        print("validation failed: simulated values disagree with closed forms", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _common(p: argparse.ArgumentParser, *, points: bool = False, physics: bool = False) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="PATH", help="write to PATH instead of stdout")
    p.add_argument("--phi-points", type=int, default=DEFAULT_PHI_POINTS, help="phase grid size on [0, 2pi]")
    if points:
        p.add_argument("--points", type=int, help="parameter grid size")
    if physics:
        p.add_argument("--eta", type=float)
        p.add_argument("--beta", type=float, default=0.0)
        p.add_argument("--phi12", type=float, default=0.0)
        p.add_argument("--alpha-re", type=float)
        p.add_argument("--alpha-im", type=float)
        p.add_argument("--coeffs", type=parse_coeffs, help="comma-separated complex coefficients, e.g. 0.6,0:0.8")
        p.add_argument("--cutoff", type=int, help="photon-number truncation for coherent inputs")
        p.add_argument("--circuit", metavar="JSON", help="two-mode circuit replacing the first splitter")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fringelab", description="Few-photon two-mode interferometry laboratory.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    scan = sub.add_parser("scan", help="phase scan of a named scenario")
    scan.add_argument("--scenario", required=True)
    _common(scan, physics=True)
    young = sub.add_parser("young", help="phase scan of a single-port (Young) input")
    _common(young, physics=True)
    _common(sub.add_parser("fig2", help="|g1| versus eta, simulated and closed form"), points=True)
    prep = sub.add_parser("prep", help="heralded preparation of the mixing-angle state")
    prep.add_argument("--eta", type=float, help="mixing angle in [0, pi/2]; omit for a grid")
    _common(prep, points=True)
    _common(sub.add_parser("compare", help="quantum vs classical visibility over (eta, beta)"), points=True)
    verify = sub.add_parser("verify", help="run the invariant suite")
    verify.add_argument("--format", choices=("csv", "json"), default="csv")
    verify.add_argument("--out", metavar="PATH")
    lst = sub.add_parser("list", help="list scenarios")
    lst.add_argument("--format", choices=("csv", "json"), default="csv")
    replay = sub.add_parser("run", help="execute a saved JSON RunConfig")
    replay.add_argument("config", metavar="CONFIG.json")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.command == "run":
        try:
            return RunConfig.from_json(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    get = lambda name, default=None: getattr(args, name, default)  # noqa: E731
    alpha = None
    if get("alpha_re") is not None or get("alpha_im") is not None:
        alpha = complex(get("alpha_re") or 0.0, get("alpha_im") or 0.0)
    circuit = None
    if get("circuit"):
        try:
            circuit = json.loads(Path(args.circuit).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read circuit: {exc}") from None
    return RunConfig(
        command=args.command,
        scenario="young" if args.command == "young" else get("scenario"),
        eta=get("eta"),
        beta=get("beta", 0.0),
        phi12=get("phi12", 0.0),
        alpha=alpha,
        coeffs=get("coeffs"),
        phi_points=get("phi_points", DEFAULT_PHI_POINTS),
        points=get("points"),
        cutoff=get("cutoff"),
        format=args.format if args.command != "run" else "csv",
        out=get("out"),
        circuit=circuit,
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(config_from_args(args))
    except ValueError as exc:  # UsageError and invalid physical inputs
        print(f"fringelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # downstream reader (e.g. head) closed early
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
