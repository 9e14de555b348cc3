"""Command-line orchestrator.

Subcommands
-----------
analytic   evaluate exact error probabilities over an SNR or Eb/N0 sweep
simulate   Monte Carlo error rates for the same grids
exponent   reliability function E(R) plus an E0 profile side file
validate   cross-check the analytic formulas against simulation,
           asymptotes, floors, and closed-form reductions

Scenario configs are JSON.  A plain object describes one scenario; an
object with a "series" list sweeps several scenarios into one CSV; an
object with a "runs" list (each run naming an output file and its own
series) writes several CSVs under an output directory.  Command-line
flags override config values.

Every output row is formatted with repr() floats, so files are
reproducible byte for byte; a JSON manifest is written next to each
output set recording the tool version, resolved config, sweep, seed, and
output paths.  Exit codes: 0 success, 1 validation failure, 2 usage or
domain error.  The PEAKY_LOG environment variable sets the log level.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .analytic import error_probability, oopsk_noncoherent_error_floor
from .exponents import e0_profile, exponent_curve
from .model import Scenario, db_to_linear, linear_to_db
from .montecarlo import simulate
from .specfun import DomainError

logger = logging.getLogger("peakysim.cli")

ERROR_RATE_HEADER = (
    "scheme,coherence,M,nu,K,omega,snr,ebn0_db,pe,pc_s0,pc_s1,"
    "pe_mc,mc_stderr,trials,seed"
)
EXPONENT_HEADER = "scheme,coherence,M,nu,snr,rate_nats,exponent,rho_star,integ_stderr"
E0_HEADER = "scheme,coherence,M,nu,snr,rho,e0"

_GRID_SLACK = 1e-9
_MIN_TRIALS = 1000
_VALIDATE_TAU_ENV = "PEAKYSIM_VALIDATE_TAU_SCALE"

_SCENARIO_KEYS = ("scheme", "M", "nu", "regime", "K", "omega")


def _fmt(value) -> str:
    """CSV cell: repr for floats (round-trip exact), str for ints, empty
    for absent."""
    if value is None:
        return ""
    if isinstance(value, bool):
        raise DomainError("booleans have no CSV representation")
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def parse_grid(text: str) -> List[float]:
    """Parse a sweep axis: either a single value or start:stop:step with
    both endpoints included (within 1e-9 of a step of slack)."""
    parts = text.split(":")
    try:
        numbers = [float(p) for p in parts]
    except ValueError as exc:
        raise DomainError(f"invalid grid {text!r}: {exc}") from exc
    if len(numbers) == 1:
        return numbers
    if len(numbers) != 3:
        raise DomainError(f"grid must be VALUE or START:STOP:STEP, got {text!r}")
    start, stop, step = numbers
    if not all(math.isfinite(v) for v in numbers):
        raise DomainError(f"grid endpoints must be finite, got {text!r}")
    if step <= 0.0:
        raise DomainError(f"grid step must be > 0, got {text!r}")
    if stop < start:
        raise DomainError(f"grid stop must be >= start, got {text!r}")
    count = int(math.floor((stop - start) / step + _GRID_SLACK)) + 1
    return [start + i * step for i in range(count)]


# ---------------------------------------------------------------------------
# Config resolution
# ---------------------------------------------------------------------------


@dataclass
class RunPlan:
    out_name: str  # file name (multi-run) or full path (single-run)
    series: List[dict]  # scenario base dicts, possibly with fixed snr_db


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise DomainError(f"config {path!r} must be a JSON object")
    return raw


def _flag_overrides(args) -> dict:
    overrides = {}
    if args.scheme is not None:
        overrides["scheme"] = args.scheme
    if getattr(args, "regime", None) is not None:
        overrides["regime"] = args.regime
    if args.M is not None:
        overrides["M"] = args.M
    if args.nu is not None:
        overrides["nu"] = args.nu
    if args.K is not None:
        overrides["K"] = math.inf if args.K == "inf" else float(args.K)
    if args.omega is not None:
        overrides["omega"] = args.omega
    return overrides


def _normalize_series(entries, overrides: dict, context: str) -> List[dict]:
    series = []
    for entry in entries:
        if not isinstance(entry, dict):
            raise DomainError(f"{context}: each series entry must be an object")
        base = dict(entry)
        base.update(overrides)
        base.setdefault("omega", 1.0)
        missing = [k for k in _SCENARIO_KEYS if k not in base]
        if missing:
            raise DomainError(f"{context}: series entry is missing {missing}")
        series.append(base)
    return series


def _resolve_plans(args) -> Tuple[List[RunPlan], Optional[dict], bool]:
    """Returns (plans, raw config or None, multi_run)."""
    overrides = _flag_overrides(args)
    if args.config is None:
        if overrides.keys() < set(_SCENARIO_KEYS) - {"omega"}:
            raise DomainError(
                "without --config, all of --scheme --regime --M --nu --K are required"
            )
        return [RunPlan(args.out, _normalize_series([{}], overrides, "flags"))], None, False
    config = _load_config(args.config)
    if "runs" in config:
        plans = []
        for i, run in enumerate(config["runs"]):
            if not isinstance(run, dict) or "out" not in run or "series" not in run:
                raise DomainError(f"runs[{i}] must have 'out' and 'series'")
            plans.append(
                RunPlan(
                    run["out"],
                    _normalize_series(run["series"], overrides, f"runs[{i}]"),
                )
            )
        if not plans:
            raise DomainError("config has an empty 'runs' list")
        return plans, config, True
    if "series" in config:
        series = _normalize_series(config["series"], overrides, "series")
        if not series:
            raise DomainError("config has an empty 'series' list")
        return [RunPlan(args.out, series)], config, False
    if "scheme" in config or overrides:
        return [RunPlan(args.out, _normalize_series([config], overrides, "config"))], config, False
    raise DomainError("config must contain a scenario, 'series', or 'runs'")


def _resolve_sweep(args, config: Optional[dict]) -> Tuple[str, Optional[List[float]]]:
    """Returns (axis, grid); axis 'fixed' means each series entry carries
    its own snr_db / ebn0_db."""
    if args.ebn0_db is not None and args.snr_db is not None:
        raise DomainError("give only one of --ebn0-db / --snr-db")
    if args.ebn0_db is not None:
        return "ebn0_db", parse_grid(args.ebn0_db)
    if args.snr_db is not None:
        return "snr_db", parse_grid(args.snr_db)
    if config is not None and "sweep" in config:
        sweep = config["sweep"]
        if (
            not isinstance(sweep, dict)
            or sweep.get("axis") not in ("ebn0_db", "snr_db")
            or "grid" not in sweep
        ):
            raise DomainError(
                "config sweep must be {\"axis\": \"ebn0_db\"|\"snr_db\", \"grid\": \"A:B:S\"}"
            )
        return sweep["axis"], parse_grid(str(sweep["grid"]))
    return "fixed", None


def _scenario_at(base: dict, axis: str, value: Optional[float]) -> Scenario:
    entry = dict(base)
    if axis != "fixed":
        entry.pop("snr_db", None)
        entry.pop("ebn0_db", None)
        entry[axis] = value
    if "K" in entry and entry["K"] == math.inf:
        entry["K"] = "inf"
    return Scenario.from_dict(entry)


def _fixed_points(base: dict) -> None:
    if "snr_db" not in base and "ebn0_db" not in base:
        raise DomainError(
            "no sweep given and the scenario fixes neither snr_db nor ebn0_db"
        )


def _k_cell(base: dict) -> float:
    """The K column echoes the configured value exactly rather than the
    d^2/gamma^2 reconstruction, which carries rounding."""
    raw = base["K"]
    return math.inf if raw == "inf" else float(raw)


def _ebn0_cell(base: dict, axis: str, value, scenario: Scenario) -> float:
    """Echo a specified ebn0_db exactly; otherwise derive it."""
    if axis == "ebn0_db":
        return float(value)
    if axis == "fixed" and "ebn0_db" in base:
        return float(base["ebn0_db"])
    return linear_to_db(scenario.operating_point.ebn0)


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def _out_paths(args, plans: List[RunPlan], multi: bool) -> List[str]:
    if multi:
        os.makedirs(args.out, exist_ok=True)
        return [os.path.join(args.out, plan.out_name) for plan in plans]
    _ensure_parent(args.out)
    return [plan.out_name for plan in plans]


def _write_rows(path: str, header: str, rows: List[List[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _manifest_path(args, multi: bool) -> str:
    if multi:
        return os.path.join(args.out, "manifest.json")
    return args.out + ".manifest.json"


def _write_manifest(
    args,
    command: str,
    config: Optional[dict],
    plans: List[RunPlan],
    multi: bool,
    sweep_desc,
    output_paths: List[str],
    extra: Optional[dict] = None,
) -> None:
    manifest = {
        "tool_version": __version__,
        "command": command,
        "scenario": config
        if config is not None
        else {"series": plans[0].series},
        "sweep": sweep_desc,
        "seed": getattr(args, "seed", None),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "output_paths": output_paths,
    }
    if extra:
        manifest.update(extra)
    path = _manifest_path(args, multi)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, default=str)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _iter_cells(plan: RunPlan, axis: str, grid: Optional[List[float]]):
    for base in plan.series:
        if axis == "fixed":
            _fixed_points(base)
            yield base, None
        else:
            for value in grid:
                yield base, value


def cmd_analytic(args) -> int:
    plans, config, multi = _resolve_plans(args)
    axis, grid = _resolve_sweep(args, config)
    paths = _out_paths(args, plans, multi)
    for plan, path in zip(plans, paths):
        rows = []
        for base, value in _iter_cells(plan, axis, grid):
            scenario = _scenario_at(base, axis, value)
            breakdown = error_probability(scenario)
            point = scenario.operating_point
            rows.append(
                [
                    scenario.modulation.scheme.value,
                    scenario.fading.regime.value,
                    _fmt(scenario.modulation.M),
                    _fmt(scenario.modulation.nu),
                    _fmt(_k_cell(base)),
                    _fmt(scenario.fading.omega),
                    _fmt(point.snr),
                    _fmt(_ebn0_cell(base, axis, value, scenario)),
                    _fmt(breakdown.pe),
                    _fmt(breakdown.pc_s0),
                    _fmt(breakdown.pc_s1),
                    "",
                    "",
                    "",
                    "",
                ]
            )
        _write_rows(path, ERROR_RATE_HEADER, rows)
        logger.info("wrote %d analytic rows to %s", len(rows), path)
    _write_manifest(
        args, "analytic", config, plans, multi, {"axis": axis, "grid": grid}, paths
    )
    return 0


def cmd_simulate(args) -> int:
    if args.trials < _MIN_TRIALS:
        raise DomainError(f"--trials must be >= {_MIN_TRIALS}, got {args.trials}")
    plans, config, multi = _resolve_plans(args)
    axis, grid = _resolve_sweep(args, config)
    paths = _out_paths(args, plans, multi)
    row_index = 0
    for plan, path in zip(plans, paths):
        rows = []
        for base, value in _iter_cells(plan, axis, grid):
            scenario = _scenario_at(base, axis, value)
            seed = (args.seed + row_index) % (1 << 64)
            row_index += 1
            result = simulate(
                scenario, trials=args.trials, seed=seed, workers=args.workers
            )
            point = scenario.operating_point
            rows.append(
                [
                    scenario.modulation.scheme.value,
                    scenario.fading.regime.value,
                    _fmt(scenario.modulation.M),
                    _fmt(scenario.modulation.nu),
                    _fmt(_k_cell(base)),
                    _fmt(scenario.fading.omega),
                    _fmt(point.snr),
                    _fmt(_ebn0_cell(base, axis, value, scenario)),
                    "",
                    "",
                    "",
                    _fmt(result.pe),
                    _fmt(result.stderr),
                    _fmt(result.trials),
                    _fmt(result.seed),
                ]
            )
        _write_rows(path, ERROR_RATE_HEADER, rows)
        logger.info("wrote %d simulation rows to %s", len(rows), path)
    _write_manifest(
        args,
        "simulate",
        config,
        plans,
        multi,
        {"axis": axis, "grid": grid},
        paths,
        extra={"trials": args.trials, "workers": args.workers},
    )
    return 0


def cmd_exponent(args) -> int:
    plans, config, multi = _resolve_plans(args)
    rates_text = args.rates or (config or {}).get("rates")
    if rates_text is None:
        raise DomainError("exponent needs --rates (or a config 'rates' entry)")
    rates = parse_grid(str(rates_text))
    if args.bits:
        rates = [r * math.log(2.0) for r in rates]
    rho_points = args.rho_points or int((config or {}).get("rho_points", 21))
    paths = _out_paths(args, plans, multi)
    all_outputs = []
    for plan, path in zip(plans, paths):
        rows = []
        profile_rows = []
        for base in plan.series:
            _fixed_points(base)
            scenario = _scenario_at(base, "fixed", None)
            curve = exponent_curve(scenario, rates, rho_points=rho_points)
            snr = scenario.operating_point.snr
            ident = [
                scenario.modulation.scheme.value,
                scenario.fading.regime.value,
                _fmt(scenario.modulation.M),
                _fmt(scenario.modulation.nu),
                _fmt(snr),
            ]
            for point in curve.points:
                rows.append(
                    ident
                    + [
                        _fmt(point.rate),
                        _fmt(point.exponent),
                        _fmt(point.rho_star),
                        _fmt(point.stderr),
                    ]
                )
            for rho, value, _err in e0_profile(scenario, rho_points=rho_points):
                profile_rows.append(ident + [_fmt(rho), _fmt(value)])
        _write_rows(path, EXPONENT_HEADER, rows)
        side = path + ".e0.csv"
        _write_rows(side, E0_HEADER, profile_rows)
        all_outputs.extend([path, side])
        logger.info("wrote %d exponent rows to %s", len(rows), path)
    _write_manifest(
        args,
        "exponent",
        config,
        plans,
        multi,
        {"rates": rates, "rho_points": rho_points, "bits": bool(args.bits)},
        all_outputs,
    )
    return 0


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def _validate_grid_cells():
    for scheme in ("oopsk", "oofsk"):
        m_values = (2, 4, 8, 16) if scheme == "oofsk" else (2, 4, 8)
        for regime in ("coherent", "noncoherent"):
            for M in m_values:
                for nu in (1.0, 0.5, 0.1):
                    for ebn0_db in (0.0, 5.0, 10.0):
                        for K in (0.0, 10.0):
                            yield scheme, regime, M, nu, ebn0_db, K


def _print_sign_variant_report(out) -> None:
    """The occupied-given-silent region probability of noncoherent phase
    keying decomposes into a wedge part and a circular-cap part; the two
    published forms differ in the sign joining them.  The summed form is
    the one the decision regions give, and Monte Carlo agrees with it;
    both variants are reported here once for the record."""
    from .analytic import _oopsk_noncoherent_breakdown
    from .specfun import DEFAULT_TOL

    alpha, d_mag, gamma2, M, nu = 2.0, 0.5, 0.875, 4, 0.1
    summed = _oopsk_noncoherent_breakdown(
        alpha, d_mag, gamma2, M, nu, DEFAULT_TOL, cap_sign=+1
    )
    differenced = _oopsk_noncoherent_breakdown(
        alpha, d_mag, gamma2, M, nu, DEFAULT_TOL, cap_sign=-1
    )
    sc = Scenario.build(
        "oopsk", M, nu, "noncoherent", k_factor=d_mag * d_mag / gamma2,
        omega=d_mag * d_mag + gamma2, snr=alpha * alpha * nu,
    )
    mc = simulate(sc, trials=200_000, seed=424242)
    print(
        "sign-variant check (noncoherent phase keying, occupied|silent "
        "correct-decision probability):",
        file=out,
    )
    print(
        f"  region-sum form pc_s0 = {summed.pc_s0!r} (implemented); "
        f"differenced form pc_s0 = {differenced.pc_s0!r}",
        file=out,
    )
    print(
        f"  Monte Carlo pe = {mc.pe!r} +- {mc.stderr:.2e}; "
        f"region-sum pe = {summed.pe!r}, differenced pe = {differenced.pe!r}",
        file=out,
    )


def cmd_validate(args) -> int:
    out = sys.stdout
    failures = 0
    checks = 0
    tau_scale = float(os.environ.get(_VALIDATE_TAU_ENV, "1.0"))
    if tau_scale != 1.0:
        print(f"note: threshold perturbation hook active, x{tau_scale!r}", file=out)

    _print_sign_variant_report(out)

    print(
        f"oracle grid: {args.trials} trials/cell, tolerance 3 binomial "
        "standard errors",
        file=out,
    )
    for index, (scheme, regime, M, nu, ebn0_db, K) in enumerate(
        _validate_grid_cells()
    ):
        scenario = Scenario.build(
            scheme, M, nu, regime, k_factor=K, omega=1.0,
            ebn0=db_to_linear(ebn0_db),
        )
        pe = error_probability(scenario).pe
        result = simulate(
            scenario,
            trials=args.trials,
            seed=(args.seed + index) % (1 << 64),
            workers=args.workers,
            tau_scale=tau_scale,
        )
        sigma = math.sqrt(max(pe * (1.0 - pe), 0.0) / args.trials)
        z = abs(result.pe - pe) / sigma if sigma > 0.0 else (
            0.0 if result.pe == pe else math.inf
        )
        ok = z <= 3.0
        checks += 1
        failures += 0 if ok else 1
        print(
            f"  {scheme},{regime},M={M},nu={nu},ebn0_db={ebn0_db},K={K}: "
            f"pe={pe:.6e} pe_mc={result.pe:.6e} z={z:.2f} "
            f"{'ok' if ok else 'FAIL'}",
            file=out,
        )

    print("low-SNR asymptote: |pe(snr=1e-6) - nu| <= 1e-3", file=out)
    for scheme in ("oopsk", "oofsk"):
        m_values = (2, 4, 8, 16) if scheme == "oofsk" else (2, 4, 8)
        for regime in ("coherent", "noncoherent"):
            for M in m_values:
                for nu in (0.5, 0.1):
                    if not nu < M / (M + 1.0):
                        continue
                    for K in (0.0, 10.0):
                        scenario = Scenario.build(
                            scheme, M, nu, regime, k_factor=K, omega=1.0, snr=1e-6
                        )
                        gap = abs(error_probability(scenario).pe - nu)
                        ok = gap <= 1e-3
                        checks += 1
                        failures += 0 if ok else 1
                        if not ok:
                            print(
                                f"  FAIL {scheme},{regime},M={M},nu={nu},K={K}: "
                                f"gap={gap:.2e}",
                                file=out,
                            )
    print("  done", file=out)

    print("error floor checks", file=out)
    floor_sc = Scenario.build("oopsk", 4, 0.1, "noncoherent", k_factor=0.0, omega=1.0, snr=1e6)
    pe_floor = error_probability(floor_sc).pe
    ok = abs(pe_floor - 0.075) <= 0.05 * 0.075
    checks += 1
    failures += 0 if ok else 1
    print(f"  Rayleigh floor pe={pe_floor!r} vs 0.075: {'ok' if ok else 'FAIL'}", file=out)
    rician_sc = Scenario.build("oopsk", 4, 0.1, "noncoherent", k_factor=10.0, omega=1.0, snr=1e6)
    pe_rician = error_probability(rician_sc).pe
    floor = oopsk_noncoherent_error_floor(10.0, 4, 0.1)
    ok = abs(pe_rician - floor) <= 1e-3 * 0.1
    checks += 1
    failures += 0 if ok else 1
    print(f"  Rician K=10 floor pe={pe_rician!r} vs integral {floor!r}: {'ok' if ok else 'FAIL'}", file=out)
    fsk_sc = Scenario.build("oofsk", 4, 0.1, "noncoherent", k_factor=0.0, omega=1.0, snr=1e6)
    pe_fsk = error_probability(fsk_sc).pe
    ok = pe_fsk < 1e-6
    checks += 1
    failures += 0 if ok else 1
    print(f"  energy detection no-floor pe={pe_fsk!r}: {'ok' if ok else 'FAIL'}", file=out)

    print("closed-form reductions", file=out)
    from .analytic import pe_oopsk_coherent_given_h, pe_oofsk_coherent_given_h, pe_oofsk_noncoherent
    from .specfun import gaussian_q

    alpha, h = 1.3, 0.9
    lhs = pe_oopsk_coherent_given_h(h, alpha, 2, 1.0).pe
    rhs = gaussian_q(math.sqrt(2.0) * alpha * h)
    reductions = [("binary antipodal", abs(lhs - rhs), 1e-10)]
    ray_sc = Scenario.build("oopsk", 2, 1.0, "coherent", k_factor=0.0, omega=1.0, snr=alpha * alpha)
    lhs = error_probability(ray_sc).pe
    rhs = 0.5 * (1.0 - math.sqrt(alpha * alpha / (1.0 + alpha * alpha)))
    reductions.append(("binary antipodal Rayleigh average", abs(lhs - rhs), 1e-6))
    a2g2 = 1.7
    lhs = pe_oofsk_noncoherent(math.sqrt(a2g2), 0.0, 1.0, 2, 1.0).pe
    rhs = 1.0 / (2.0 + a2g2)
    reductions.append(("binary orthogonal Rayleigh race", abs(lhs - rhs), 1e-10))
    lhs = pe_oofsk_coherent_given_h(h, alpha, 2, 1.0).pe
    rhs = 0.5 * math.exp(-(alpha * h) ** 2 / 2.0)
    reductions.append(("binary orthogonal known channel", abs(lhs - rhs), 1e-10))
    for name, gap, tol_v in reductions:
        ok = gap <= tol_v
        checks += 1
        failures += 0 if ok else 1
        print(f"  {name}: gap={gap:.2e} {'ok' if ok else 'FAIL'}", file=out)

    print(f"validate: {checks - failures}/{checks} checks passed", file=out)
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON scenario/preset file")
    parser.add_argument("--scheme", choices=["oopsk", "oofsk"])
    parser.add_argument("--regime", choices=["coherent", "noncoherent"])
    parser.add_argument("--M", type=int)
    parser.add_argument("--nu", type=float)
    parser.add_argument("--K", help='Rician factor (number or "inf")')
    parser.add_argument("--omega", type=float)


def _add_sweep_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ebn0-db", dest="ebn0_db", help="Eb/N0 sweep START:STOP:STEP in dB")
    parser.add_argument("--snr-db", dest="snr_db", help="SNR sweep START:STOP:STEP in dB")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peakysim",
        description="Link-level analysis of peaky (on-off) modulation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="exact error probabilities over a sweep")
    _add_scenario_flags(p)
    _add_sweep_flags(p)
    p.add_argument("--out", required=True, help="output CSV (or directory for multi-run configs)")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="Monte Carlo error rates over a sweep")
    _add_scenario_flags(p)
    _add_sweep_flags(p)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0, help="base seed; row i uses seed+i")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("exponent", help="reliability function E(R) over a rate grid")
    _add_scenario_flags(p)
    p.add_argument("--rates", help="rate grid START:STOP:STEP (nats/symbol)")
    p.add_argument("--bits", action="store_true", help="interpret --rates in bits/symbol")
    p.add_argument("--rho-points", dest="rho_points", type=int, help="rho grid size (default 21)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_exponent)

    p = sub.add_parser(
        "validate",
        help="cross-check formulas against simulation, asymptotes, floors, reductions",
    )
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=20260822)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_validate)
    return parser


def _configure_logging() -> None:
    level_name = os.environ.get("PEAKY_LOG", "").strip()
    level = logging.WARNING
    if level_name:
        candidate = getattr(logging, level_name.upper(), None)
        if isinstance(candidate, int):
            level = candidate
        else:
            print(f"warning: unknown PEAKY_LOG level {level_name!r}", file=sys.stderr)
    logging.basicConfig(level=level, format="%(name)s %(levelname)s %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
