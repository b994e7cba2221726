"""Command-line front end: flat-schema config files, subcommands mapping 1:1
onto the spectral operations, deterministic CSV emission."""

import argparse
import io
import re
import sys

import numpy as np

from . import __version__
from .asymptotics import (ProbabilityMethod, TorusVariant, band_width_prediction,
                          measure_band_width, sigma_probability_direct,
                          sigma_probability_torus)
from .coupling import CouplingParams, gamma_from_alpha
from .secular import ChainGeometry, v_arrays
from .spectrum import (BandKind, EnergySign, NoSolution, dispersion,
                       flat_bands, negative_spectrum, scan_bands)

TWO_PI = 2 * np.pi


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# config schema

# key -> (type, default-as-string or None)
_SCHEMA = {
    "l1": ("number", "2"),
    "l2": ("number", None),
    "l3": ("number", "pi/2"),
    "l": ("number", "1"),
    "t": ("number", None),
    "t_min": ("number", None),
    "t_max": ("number", None),
    "t_steps": ("int", None),
    "gamma": ("number", None),
    "alpha": ("number", None),
    "k_min": ("number", "1e-3"),
    "k_max": ("number", "6"),
    "resolution": ("number", "1e-3"),
    "kappa_max": ("number", "0"),
    "kappa_resolution": ("number", "1e-3"),
    "samples": ("int", "1000000"),
    "seed": ("int", "12345"),
    "variant": ("str", "GenericDelta"),
    "method": ("str", "torus"),
    "e_max": ("number", "1e4"),
    "band_index": ("int", "1"),
    "n_k": ("int", "200"),
    "j": ("int", "1"),
    "m_values": ("intlist", "100,200,400"),
    "output": ("str", ""),
    "format": ("str", "csv"),
}

_PI_RE = re.compile(r"(-)?(?:([0-9][0-9.eE+-]*)\*)?pi(?:/([0-9][0-9.eE+-]*))?")


def parse_number(text, key="value"):
    """Parse a decimal number or an exact pi-expression like '3*pi/2', '-pi/4'."""
    s = text.strip()
    m = _PI_RE.fullmatch(s)
    if m:
        sign = -1.0 if m.group(1) else 1.0
        try:
            coef = float(m.group(2)) if m.group(2) else 1.0
            den = float(m.group(3)) if m.group(3) else 1.0
        except ValueError:
            raise ConfigError(f"{key}: malformed pi-expression {text!r}")
        if den == 0:
            raise ConfigError(f"{key}: division by zero in {text!r}")
        return sign * coef * np.pi / den
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse number {text!r}")


def _parse_typed(key, text):
    kind = _SCHEMA[key][0]
    if kind == "number":
        return parse_number(text, key)
    if kind == "int":
        try:
            return int(text.strip())
        except ValueError:
            raise ConfigError(f"{key}: expected integer, got {text!r}")
    if kind == "intlist":
        try:
            return tuple(int(p) for p in text.split(",") if p.strip())
        except ValueError:
            raise ConfigError(f"{key}: expected comma-separated integers, got {text!r}")
    return text.strip()


def default_config():
    return {k: (_parse_typed(k, d) if d is not None else None)
            for k, (_, d) in _SCHEMA.items()}


def parse_config(text, base=None):
    """Parse flat `key = value` lines into a config dict (over a base/defaults)."""
    cfg = dict(base) if base is not None else default_config()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        cfg[key] = _parse_typed(key, value)
    return cfg


def _format_value(key, value):
    kind = _SCHEMA[key][0]
    if kind == "number":
        return repr(float(value))
    if kind == "intlist":
        return ",".join(str(v) for v in value)
    return str(value)


def serialize_config(cfg):
    """Config text whose parse_config round-trips to an identical dict."""
    lines = []
    for key in sorted(cfg):
        if cfg[key] is None:
            continue
        lines.append(f"{key} = {_format_value(key, cfg[key])}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# resolution of domain objects

def resolve_geometry(cfg):
    l1, l2, l3, l = cfg["l1"], cfg["l2"], cfg["l3"], cfg["l"]
    if l1 is None or l is None:
        raise ConfigError("geometry requires l1 and l")
    try:
        if l2 is not None and l3 is not None:
            return ChainGeometry.normalized(l1, l2, l3, l)
        if l3 is not None:
            return ChainGeometry.from_l3(l1, l3, l)
        if l2 is not None:
            return ChainGeometry.normalized(l1, l2, TWO_PI - l2, l)
    except ValueError as exc:
        raise ConfigError(f"geometry: {exc}")
    raise ConfigError("geometry requires l2 or l3 (the other is inferred)")


def resolve_gamma(cfg):
    if cfg["gamma"] is not None and cfg["alpha"] is not None:
        raise ConfigError("exactly one of gamma/alpha may be set, got both")
    if cfg["alpha"] is not None:
        return gamma_from_alpha(cfg["alpha"])
    if cfg["gamma"] is not None:
        return cfg["gamma"]
    raise ConfigError("coupling requires gamma or alpha")


def resolve_t_values(cfg):
    has_range = any(cfg[k] is not None for k in ("t_min", "t_max", "t_steps"))
    if cfg["t"] is not None:
        if has_range:
            raise ConfigError("set either t or the t_min/t_max/t_steps range, not both")
        return [cfg["t"]]
    if has_range:
        for k in ("t_min", "t_max", "t_steps"):
            if cfg[k] is None:
                raise ConfigError(f"t-range requires {k}")
        if cfg["t_steps"] < 2:
            raise ConfigError("t_steps must be >= 2")
        return list(np.linspace(cfg["t_min"], cfg["t_max"], cfg["t_steps"]))
    raise ConfigError("coupling requires t or a t_min/t_max/t_steps range")


def _single_t(cfg):
    ts = resolve_t_values(cfg)
    if len(ts) != 1:
        raise ConfigError("this subcommand requires a single t, not a range")
    return ts[0]


def _params(t, cfg):
    try:
        return CouplingParams(float(t), float(resolve_gamma(cfg)))
    except ValueError as exc:
        raise ConfigError(f"coupling: {exc}")


def _check_scan(cfg):
    if not (0 <= cfg["k_min"] < cfg["k_max"]):
        raise ConfigError(f"empty k-range: k_min={cfg['k_min']}, k_max={cfg['k_max']}")
    if cfg["resolution"] <= 0:
        raise ConfigError("resolution must be positive")


# ---------------------------------------------------------------------------
# CSV emission

def _g17(x):
    return f"{float(x):.17g}"


def _emit(cfg, columns, rows):
    buf = io.StringIO()
    buf.write(f"# artifact {__version__}\n")
    resolved = {k: v for k, v in cfg.items() if k != "output"}
    for line in serialize_config(resolved).splitlines():
        buf.write(f"# {line}\n")
    buf.write(",".join(columns) + "\r\n")
    for row in rows:
        buf.write(",".join(_g17(c) if isinstance(c, float) else str(c) for c in row)
                  + "\r\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands

def cmd_bands(cfg, negative_only=False):
    _check_scan(cfg)
    geom = resolve_geometry(cfg)
    kappa_max = cfg["kappa_max"]
    if negative_only and kappa_max <= 0:
        kappa_max = 10.0
    rows = []
    for t in resolve_t_values(cfg):
        params = _params(t, cfg)
        if not negative_only:
            k_min = max(cfg["k_min"], cfg["resolution"] * 1e-3, 1e-9)
            for iv in scan_bands(k_min, cfg["k_max"], cfg["resolution"], params, geom):
                rows.append((float(t), iv.k_lo, iv.k_hi,
                             iv.kind.value, iv.energy_sign.value))
        if kappa_max > 0:
            for iv in negative_spectrum(kappa_max, cfg["kappa_resolution"],
                                        params, geom):
                rows.append((float(t), iv.k_lo, iv.k_hi,
                             iv.kind.value, iv.energy_sign.value))
    return _emit(cfg, ["t", "k_lo", "k_hi", "kind", "energy_sign"], rows)


def cmd_negative(cfg):
    return cmd_bands(cfg, negative_only=True)


def cmd_flatbands(cfg):
    geom = resolve_geometry(cfg)
    params = _params(_single_t(cfg), cfg)
    rows = [(fb.k, fb.energy, fb.origin.value, fb.residual)
            for fb in flat_bands(cfg["k_max"], params, geom)]
    return _emit(cfg, ["k", "energy", "origin", "residual"], rows)


def cmd_probability(cfg):
    geom = resolve_geometry(cfg)
    params = _params(_single_t(cfg), cfg)
    method = cfg["method"].lower()
    if method == "direct":
        est = sigma_probability_direct(cfg["e_max"], params, geom)
        tail = f"t={params.t!r};gamma={params.gamma!r};e_max={cfg['e_max']!r}"
    elif method in ("torus", "analytic"):
        try:
            variant = TorusVariant(cfg["variant"])
        except ValueError:
            raise ConfigError(f"unknown torus variant {cfg['variant']!r}")
        est = sigma_probability_torus(cfg["samples"], cfg["seed"], variant,
                                      monte_carlo=(method == "torus"))
        tail = f"variant={variant.value};samples={cfg['samples']};seed={cfg['seed']}"
    else:
        raise ConfigError(f"method must be direct/torus/analytic, got {cfg['method']!r}")
    rows = [(est.method.value, est.value, est.standard_error, tail)]
    return _emit(cfg, ["method", "value", "stderr", "params"], rows)


def cmd_dispersion(cfg):
    _check_scan(cfg)
    geom = resolve_geometry(cfg)
    params = _params(_single_t(cfg), cfg)
    n_k = cfg["n_k"]
    if n_k < 2:
        raise ConfigError("n_k must be >= 2")
    if cfg["band_index"] >= 1:
        intervals = scan_bands(max(cfg["k_min"], 1e-9), cfg["k_max"],
                               cfg["resolution"], params, geom)
        bands = [iv for iv in intervals if iv.kind is BandKind.Band]
        if cfg["band_index"] > len(bands):
            raise ConfigError(f"band_index={cfg['band_index']} but only "
                              f"{len(bands)} bands found in the k-range")
        band = bands[cfg["band_index"] - 1]
        shrink = 1e-7 * (band.k_hi - band.k_lo)
        ks = np.linspace(band.k_lo + shrink, band.k_hi - shrink, n_k)
    else:
        ks = np.linspace(max(cfg["k_min"], 1e-9), cfg["k_max"], n_k)
    rows = []
    for k in ks:
        try:
            pts = dispersion(float(k), params, geom)
        except NoSolution:
            rows.append(("nan", float(k), "NoSolution", "nan"))
            continue
        vc, vs, vz = v_arrays(float(k), params, geom)
        scale = max(abs(vc), abs(vs), abs(vz))
        for p in pts:
            res = abs(vc * np.cos(p.theta) + vs * np.sin(p.theta) - vz) / scale
            rows.append((p.theta, p.k, p.branch, float(res)))
    return _emit(cfg, ["theta", "k", "branch", "residual"], rows)


def cmd_widths(cfg):
    geom = resolve_geometry(cfg)
    params = _params(_single_t(cfg), cfg)
    j = cfg["j"]
    if j not in (1, 2, 3):
        raise ConfigError(f"j must be 1, 2 or 3, got {j}")
    rows = []
    for m in cfg["m_values"]:
        pred = band_width_prediction(m, j, params, geom)
        meas = measure_band_width(m, j, params, geom)
        if meas is None or meas == 0:
            rel = float("inf")
            meas = 0.0
        else:
            rel = abs(meas - pred.width) / meas
        rows.append((m, j, pred.width, float(meas), rel, pred.regime.value))
    return _emit(cfg, ["m", "j", "predicted", "measured", "rel_error", "regime"], rows)


_COMMANDS = {
    "bands": cmd_bands,
    "flatbands": cmd_flatbands,
    "probability": cmd_probability,
    "dispersion": cmd_dispersion,
    "widths": cmd_widths,
    "negative": cmd_negative,
}


# ---------------------------------------------------------------------------
# entry point

def build_config(args):
    cfg = default_config()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}")
        cfg = parse_config(text, cfg)
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"--set: unknown key {key!r}")
        cfg[key] = _parse_typed(key, value)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.output is not None:
        cfg["output"] = args.output
    if cfg["format"] != "csv":
        raise ConfigError(f"format must be 'csv', got {cfg['format']!r}")
    return cfg


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="ringchain",
        description="Band spectrum of a periodic ring chain with interpolated "
                    "circulant vertex coupling")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="path to a flat key=value config file")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a config field (repeatable)")
    parser.add_argument("--output", help="output CSV path (default: stdout)")
    parser.add_argument("--seed", type=int, help="override the RNG seed")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads (scans are deterministic regardless)")
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        text = _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (AssertionError, NoSolution, ValueError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    if cfg["output"]:
        with open(cfg["output"], "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
