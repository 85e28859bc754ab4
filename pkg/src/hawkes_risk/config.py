"""Run configuration: INI-style sections in, validated model objects out.

A config file has sections [model], [claims] (optional), [run] and [output],
with key=value pairs.  Unknown keys are rejected with the offending
section.key named; every parsed config can be echoed to a string mapping that
reparses to an equal RunConfig (floats are echoed with repr, which
round-trips exactly).
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .errors import ConfigError
from .model import (
    Categorical,
    ClaimLaw,
    Degenerate,
    DegenerateClaim,
    ExpClaim,
    ExpKernel,
    Exponential,
    Gamma,
    GammaClaim,
    HawkesModel,
    LogNormal,
    Pareto,
    PowerKernel,
    Weibull,
)

_KERNEL_KEYS = {"exp": ("beta",), "power": ("p", "c")}
_MARK_KEYS = {
    "degenerate": ("h0",),
    "exponential": ("rate",),
    "gamma": ("shape", "scale"),
    "categorical": ("values", "probs"),
}
_CLAIM_KEYS = {
    "degenerate": ("c0",),
    "exp": ("rate",),
    "gamma": ("shape", "scale"),
    "pareto": ("alpha", "x_m"),
    "weibull": ("shape", "scale"),
    "lognormal": ("mu", "sigma"),
}

_RUN_KEYS = {
    "seed": int,
    "stream": int,
    "horizon": float,
    "replicas": int,
    "theta": float,
    "grid_step": float,
    "tol_fp": float,
    "max_events": int,
    "workers": int,
    "x_grid": "floats",
    "theta_grid": "floats",
    "u_grid": "floats",
    "z_grid": "floats",
}

_RUN_DEFAULTS = {
    "seed": 0,
    "stream": 0,
    "max_events": 1_000_000,
}

_OUTPUT_KEYS = ("path", "format")


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration for one CLI command."""

    model: HawkesModel
    claims: ClaimLaw | None
    rho: float | None
    u: float | None
    run: dict = field(default_factory=dict)
    output_path: str = "out"
    output_format: str = "csv"


def _parse_float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: not a number: {raw!r}") from None


def _parse_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: not an integer: {raw!r}") from None


def _parse_floats(section: str, key: str, raw: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in raw.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"{section}.{key}: not a comma list of numbers: {raw!r}") from None


def _check_keys(section: str, present, allowed) -> None:
    unknown = sorted(set(present) - set(allowed))
    if unknown:
        raise ConfigError(
            f"unknown key(s) in [{section}]: " +
            ", ".join(f"{section}.{k}" for k in unknown)
        )


def _require(section: str, mapping, key: str) -> str:
    if key not in mapping:
        raise ConfigError(f"missing required key {section}.{key}")
    return mapping[key]


def _build_model(sec: dict) -> HawkesModel:
    kernel_name = _require("model", sec, "kernel").strip().lower()
    if kernel_name not in _KERNEL_KEYS:
        raise ConfigError(f"model.kernel: unknown family {kernel_name!r}")
    mark_name = _require("model", sec, "marks").strip().lower()
    if mark_name not in _MARK_KEYS:
        raise ConfigError(f"model.marks: unknown family {mark_name!r}")
    allowed = ("nu", "kernel", "marks") + _KERNEL_KEYS[kernel_name] + _MARK_KEYS[mark_name]
    _check_keys("model", sec, allowed)

    nu = _parse_float("model", "nu", _require("model", sec, "nu"))
    if kernel_name == "exp":
        kernel = ExpKernel(beta=_parse_float("model", "beta", _require("model", sec, "beta")))
    else:
        kernel = PowerKernel(
            p=_parse_float("model", "p", _require("model", sec, "p")),
            c=_parse_float("model", "c", _require("model", sec, "c")),
        )
    if mark_name == "degenerate":
        marks = Degenerate(h0=_parse_float("model", "h0", _require("model", sec, "h0")))
    elif mark_name == "exponential":
        marks = Exponential(rate=_parse_float("model", "rate", _require("model", sec, "rate")))
    elif mark_name == "gamma":
        marks = Gamma(
            shape=_parse_float("model", "shape", _require("model", sec, "shape")),
            scale=_parse_float("model", "scale", _require("model", sec, "scale")),
        )
    else:
        marks = Categorical(
            values=_parse_floats("model", "values", _require("model", sec, "values")),
            probs=_parse_floats("model", "probs", _require("model", sec, "probs")),
        )
    try:
        return HawkesModel(nu=nu, kernel=kernel, marks=marks)
    except ValueError as exc:
        raise ConfigError(f"model: {exc}") from None


def _build_claims(sec: dict) -> tuple[ClaimLaw, float | None, float | None]:
    family = _require("claims", sec, "family").strip().lower()
    if family not in _CLAIM_KEYS:
        raise ConfigError(f"claims.family: unknown family {family!r}")
    _check_keys("claims", sec, ("family", "rho", "u") + _CLAIM_KEYS[family])
    get = lambda key: _parse_float("claims", key, _require("claims", sec, key))
    try:
        if family == "degenerate":
            claims = DegenerateClaim(c0=get("c0"))
        elif family == "exp":
            claims = ExpClaim(rate=get("rate"))
        elif family == "gamma":
            claims = GammaClaim(shape=get("shape"), scale=get("scale"))
        elif family == "pareto":
            claims = Pareto(alpha=get("alpha"), x_m=get("x_m"))
        elif family == "weibull":
            claims = Weibull(shape=get("shape"), scale=get("scale"))
        else:
            claims = LogNormal(mu=get("mu"), sigma=get("sigma"))
    except ValueError as exc:
        raise ConfigError(f"claims: {exc}") from None
    rho = _parse_float("claims", "rho", sec["rho"]) if "rho" in sec else None
    u = _parse_float("claims", "u", sec["u"]) if "u" in sec else None
    return claims, rho, u


def _build_run(sec: dict) -> dict:
    _check_keys("run", sec, _RUN_KEYS)
    run = dict(_RUN_DEFAULTS)
    for key, raw in sec.items():
        kind = _RUN_KEYS[key]
        if kind is int:
            run[key] = _parse_int("run", key, raw)
        elif kind is float:
            run[key] = _parse_float("run", key, raw)
        else:
            run[key] = _parse_floats("run", key, raw)
    return run


def parse_mapping(mapping: dict) -> RunConfig:
    """Build a RunConfig from {section: {key: string}}."""
    _check_keys("<config>", mapping, ("model", "claims", "run", "output"))
    if "model" not in mapping:
        raise ConfigError("missing required section [model]")
    model = _build_model(dict(mapping["model"]))
    claims, rho, u = (None, None, None)
    if "claims" in mapping:
        claims, rho, u = _build_claims(dict(mapping["claims"]))
    run = _build_run(dict(mapping.get("run", {})))
    out = dict(mapping.get("output", {}))
    _check_keys("output", out, _OUTPUT_KEYS)
    output_path = out.get("path", "out")
    output_format = out.get("format", "csv").strip().lower()
    if output_format not in ("csv", "json"):
        raise ConfigError(f"output.format: must be csv or json, got {output_format!r}")
    return RunConfig(
        model=model, claims=claims, rho=rho, u=u, run=run,
        output_path=output_path, output_format=output_format,
    )


def parse_config_text(text: str) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    mapping = {name: dict(parser.items(name)) for name in parser.sections()}
    return parse_mapping(mapping)


def load_config(path: str, overrides: list[str] | None = None) -> RunConfig:
    """Read a config file and apply --set section.key=value overrides."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error in {path}: {exc}") from None
    mapping = {name: dict(parser.items(name)) for name in parser.sections()}
    for item in overrides or []:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"--set expects section.key=value, got {item!r}")
        target, value = item.split("=", 1)
        section, key = target.split(".", 1)
        mapping.setdefault(section.strip(), {})[key.strip()] = value.strip()
    return parse_mapping(mapping)


def _echo_model(model: HawkesModel) -> dict:
    sec = {"nu": repr(model.nu)}
    if isinstance(model.kernel, ExpKernel):
        sec["kernel"] = "exp"
        sec["beta"] = repr(model.kernel.beta)
    else:
        sec["kernel"] = "power"
        sec["p"] = repr(model.kernel.p)
        sec["c"] = repr(model.kernel.c)
    marks = model.marks
    if isinstance(marks, Degenerate):
        sec["marks"] = "degenerate"
        sec["h0"] = repr(marks.h0)
    elif isinstance(marks, Exponential):
        sec["marks"] = "exponential"
        sec["rate"] = repr(marks.rate)
    elif isinstance(marks, Gamma):
        sec["marks"] = "gamma"
        sec["shape"] = repr(marks.shape)
        sec["scale"] = repr(marks.scale)
    else:
        sec["marks"] = "categorical"
        sec["values"] = ",".join(repr(v) for v in marks.values)
        sec["probs"] = ",".join(repr(p) for p in marks.probs)
    return sec


def _echo_claims(cfg: RunConfig) -> dict:
    claims = cfg.claims
    sec: dict[str, str] = {}
    if isinstance(claims, DegenerateClaim):
        sec["family"] = "degenerate"
        sec["c0"] = repr(claims.c0)
    elif isinstance(claims, ExpClaim):
        sec["family"] = "exp"
        sec["rate"] = repr(claims.rate)
    elif isinstance(claims, GammaClaim):
        sec["family"] = "gamma"
        sec["shape"] = repr(claims.shape)
        sec["scale"] = repr(claims.scale)
    elif isinstance(claims, Pareto):
        sec["family"] = "pareto"
        sec["alpha"] = repr(claims.alpha)
        sec["x_m"] = repr(claims.x_m)
    elif isinstance(claims, Weibull):
        sec["family"] = "weibull"
        sec["shape"] = repr(claims.shape)
        sec["scale"] = repr(claims.scale)
    else:
        sec["family"] = "lognormal"
        sec["mu"] = repr(claims.mu)
        sec["sigma"] = repr(claims.sigma)
    if cfg.rho is not None:
        sec["rho"] = repr(cfg.rho)
    if cfg.u is not None:
        sec["u"] = repr(cfg.u)
    return sec


def echo_mapping(cfg: RunConfig) -> dict:
    """Canonical string mapping; parse_mapping(echo_mapping(cfg)) == cfg."""
    mapping: dict[str, dict[str, str]] = {"model": _echo_model(cfg.model)}
    if cfg.claims is not None:
        mapping["claims"] = _echo_claims(cfg)
    run_sec: dict[str, str] = {}
    for key in _RUN_KEYS:
        if key in cfg.run:
            value = cfg.run[key]
            if isinstance(value, tuple):
                run_sec[key] = ",".join(repr(v) for v in value)
            else:
                run_sec[key] = repr(value)
    mapping["run"] = run_sec
    mapping["output"] = {"path": cfg.output_path, "format": cfg.output_format}
    return mapping
