"""Batch command-line front end: config file in, CSV/JSON artifacts out.

Subcommands wrap the library modules one-to-one; every run writes a
summary.json embedding a canonical config echo, plus a CSV table where the
command produces one.  Outputs are written atomically and are byte-identical
across reruns with the same config and seed.  Exit codes: 0 success,
1 numeric failure, 2 config or validation failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import asymptotics, cgf, ldp, risk
from ._backend import backend_name
from .config import RunConfig, echo_mapping, load_config
from .errors import (
    ConfigError,
    DivergenceError,
    DomainError,
    ExplosionGuard,
    HawkesError,
    HeavyTailError,
    NetProfitError,
    NoConvergence,
    StabilityError,
    SteepnessError,
    WindowError,
)
from .model import claim_is_heavy, validate
from .risk import RiskModel
from .simulate import RngSpec, integrated_intensity, simulate_thinning

_VALIDATION = (
    ConfigError,
    StabilityError,
    WindowError,
    NetProfitError,
    SteepnessError,
    HeavyTailError,
    ValueError,
)
_NUMERIC = (NoConvergence, DivergenceError, DomainError, ExplosionGuard, HawkesError)


def _fmt(value) -> str:
    """Numbers at 12 significant digits; non-finite as bare literals."""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".12g")
    return str(value)


def _json_ready(obj):
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(format(obj, ".12g"))
        return _fmt(obj)
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    return obj


def _write_atomic(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _write_atomic(path, "\n".join(lines) + "\n")


def _write_summary(cfg: RunConfig, command: str, payload: dict) -> str:
    os.makedirs(cfg.output_path, exist_ok=True)
    summary = {
        "command": command,
        "backend": backend_name(),
        "config": echo_mapping(cfg),
    }
    summary.update(payload)
    path = os.path.join(cfg.output_path, "summary.json")
    _write_atomic(path, json.dumps(_json_ready(summary), indent=2) + "\n")
    return path


def _rng(cfg: RunConfig) -> RngSpec:
    return RngSpec(int(cfg.run["seed"]), int(cfg.run["stream"]))


def _need(cfg: RunConfig, key: str):
    if key not in cfg.run:
        raise ConfigError(f"missing required key run.{key}")
    return cfg.run[key]


def _maybe_table(cfg: RunConfig, name: str, header: list[str], rows: list[list]) -> str:
    """Write the table as CSV or JSON records per output.format."""
    os.makedirs(cfg.output_path, exist_ok=True)
    if cfg.output_format == "csv":
        path = os.path.join(cfg.output_path, f"{name}.csv")
        _write_csv(path, header, rows)
    else:
        path = os.path.join(cfg.output_path, f"{name}.json")
        records = [
            {key: (_fmt(v) if isinstance(v, float) and not math.isfinite(v)
                   else _json_ready(v))
             for key, v in zip(header, row)}
            for row in rows
        ]
        _write_atomic(path, json.dumps(records, indent=2) + "\n")
    return path


def cmd_simulate(cfg: RunConfig) -> None:
    horizon = float(_need(cfg, "horizon"))
    report = validate(cfg.model)
    if not report.stability:
        raise StabilityError(
            f"stability condition violated: branching ratio "
            f"{report.branching_ratio:.6g} >= 1"
        )
    stream = simulate_thinning(
        cfg.model, horizon, _rng(cfg), max_events=int(cfg.run["max_events"])
    )
    os.makedirs(cfg.output_path, exist_ok=True)
    _write_csv(
        os.path.join(cfg.output_path, "events.csv"),
        ["tau", "mark"],
        [[t, a] for t, a in zip(stream.times, stream.marks)],
    )
    _write_summary(cfg, "simulate", {
        "n_events": stream.n_events,
        "mean_intensity": integrated_intensity(cfg.model, stream) / horizon,
    })


def cmd_rate_function(cfg: RunConfig) -> None:
    x_grid = _need(cfg, "x_grid")
    rows = []
    for x in x_grid:
        point = ldp.rate_function(cfg.model, float(x))
        rows.append([point.x, point.theta_star, point.x_star, point.lambda_value])
    _maybe_table(cfg, "rate_function", ["x", "theta_star", "x_star", "lambda"], rows)
    _write_summary(cfg, "rate-function", {
        "n_points": len(rows),
        "mean_rate": asymptotics.lln_mean(cfg.model),
    })


def cmd_cgf(cfg: RunConfig) -> None:
    theta_grid = _need(cfg, "theta_grid")
    try:
        pair = cgf.critical_pair(cfg.model)
        theta_c, x_c = pair.theta_c, pair.x_c
    except SteepnessError:
        # Zero impact: the CGF is finite on the whole line.
        theta_c, x_c = math.inf, math.nan
    rows = [[float(t), cgf.limit_cgf(cfg.model, float(t))] for t in theta_grid]
    _maybe_table(cfg, "cgf", ["theta", "gamma"], rows)
    _write_summary(cfg, "cgf", {
        "theta_c": theta_c,
        "x_c": x_c,
        "mean_rate": asymptotics.lln_mean(cfg.model),
    })


def cmd_clt_check(cfg: RunConfig) -> None:
    horizon = float(_need(cfg, "horizon"))
    replicas = int(_need(cfg, "replicas"))
    report = asymptotics.clt_check(
        cfg.model, horizon, replicas, _rng(cfg),
        workers=cfg.run.get("workers"),
    )
    _write_summary(cfg, "clt-check", {
        "replicas": report.replicas,
        "horizon": report.horizon,
        "sample_mean_rate": report.sample_mean_rate,
        "sample_var_rate": report.sample_var_rate,
        "ks_statistic": report.ks_statistic,
        "p_value": report.p_value,
        "mu": report.mu,
        "sigma2": report.sigma2,
    })


def cmd_cluster_mgf(cfg: RunConfig) -> None:
    theta = float(_need(cfg, "theta"))
    horizon = float(_need(cfg, "horizon"))
    grid_step = cfg.run.get("grid_step")
    grid, values = cgf.cluster_mgf_path(cfg.model, theta, horizon, grid_step)
    _maybe_table(cfg, "cluster_mgf", ["t", "mgf"],
                 [[float(t), float(v)] for t, v in zip(grid, values)])
    fp = cgf.minimal_fixed_point(cfg.model, theta)
    _write_summary(cfg, "cluster-mgf", {
        "theta": theta,
        "final_value": float(values[-1]),
        "fixed_point": fp.x_star,
    })


def _build_risk(cfg: RunConfig) -> RiskModel:
    if cfg.claims is None:
        raise ConfigError("ruin analysis needs a [claims] section")
    if cfg.rho is None:
        raise ConfigError("missing required key claims.rho")
    if cfg.u is None:
        raise ConfigError("missing required key claims.u")
    return RiskModel(hawkes=cfg.model, claims=cfg.claims, rho=cfg.rho, u=cfg.u)


def cmd_ruin(cfg: RunConfig) -> None:
    model = _build_risk(cfg)
    payload: dict = {}

    if claim_is_heavy(model.claims):
        u_grid = cfg.run.get("u_grid", (model.u,))
        infinite = [risk.heavy_tail_infinite(model, float(u)) for u in u_grid]
        payload["K"] = infinite[0].constant
        payload["psi_asymptotic"] = [
            {"u": float(u), "psi": est.psi} for u, est in zip(u_grid, infinite)
        ]
        if "z_grid" in cfg.run:
            payload["finite_horizon"] = [
                {"T": float(z), "factor": risk.heavy_tail_finite(model, model.u, float(z)).factor}
                for z in cfg.run["z_grid"]
            ]
    else:
        rho_window = risk.net_profit_window(model)
        if not rho_window[0] < model.rho < rho_window[1]:
            raise WindowError(
                f"premium rate {model.rho:.6g} outside the net-profit window "
                f"({rho_window[0]:.6g}, {rho_window[1]:.6g})"
            )
        theta_dagger = risk.lundberg_exponent(
            model, tol=float(cfg.run.get("tol_fp", 1e-10))
        )
        payload["rho_window"] = list(rho_window)
        payload["theta_dagger"] = theta_dagger
        if "z_grid" in cfg.run:
            payload["w"] = [
                {"z": float(z), "w": risk.finite_horizon_rate(model, float(z))}
                for z in cfg.run["z_grid"]
            ]

    replicas = int(cfg.run.get("replicas", 0))
    if replicas > 0:
        u_grid = cfg.run.get("u_grid", (model.u,))
        horizon = cfg.run.get("horizon")
        rng = _rng(cfg)
        psi_rows = []
        for j, u in enumerate(u_grid):
            est = risk.ruin_mc(
                model, u=float(u), horizon=horizon, replicas=replicas,
                rng=rng.substream(j * replicas),
                max_events=int(cfg.run["max_events"]),
                workers=cfg.run.get("workers"),
            )
            psi_rows.append({
                "u": float(u), "psi": est.psi_hat,
                "ci_low": est.ci_low, "ci_high": est.ci_high,
                "horizon": est.horizon,
            })
        payload["psi_mc"] = psi_rows
        payload["replicas"] = replicas

    _write_summary(cfg, "ruin", payload)


_COMMANDS = {
    "simulate": cmd_simulate,
    "rate-function": cmd_rate_function,
    "cgf": cmd_cgf,
    "clt-check": cmd_clt_check,
    "cluster-mgf": cmd_cluster_mgf,
    "ruin": cmd_ruin,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hawkes-risk",
        description=(
            "Marked Hawkes processes: simulation, limit CGF, rate functions "
            "and ruin analysis.  HAWKES_RISK_THREADS sets the default worker "
            "count for replica loops; HAWKES_RISK_BACKEND forces the "
            "compiled or python sampling backend."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("config", help="path to an INI-style run config")
        cmd.add_argument(
            "--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
            help="override a config key (repeatable)",
        )
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config, args.set)
        _COMMANDS[args.command](cfg)
    except _VALIDATION as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _NUMERIC as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
