"""Experiment configuration: flat key=value files, CLI overrides, meta echo.

A configuration is a flat mapping of known keys to canonical value
strings.  Canonicalization happens at parse time, so equality, file
round-trips and the ``meta.json`` echo are all exact.  Unknown keys and
malformed values raise ConfigError naming the key and the expected
grammar.
"""

import configparser
import io as _io
import json
from collections import OrderedDict

from .profiles import parse_angle, parse_profile
from .lattice import LatticeSpec
from .operators import StepOperator2D


class ConfigError(ValueError):
    """Unknown key, malformed value, or an unusable combination."""


def _canon_profile(text):
    return parse_profile(text).to_spec_string()


def _canon_angle(text):
    return repr(float(parse_angle(text)))


def _canon_float(text):
    return repr(float(text))


def _canon_int(text):
    return str(int(str(text), 10))


def _canon_odd_size(text):
    v = int(str(text), 10)
    if v < 3 or v % 2 == 0:
        raise ValueError("must be odd and >= 3")
    return str(v)


def _canon_pos_int(text):
    v = int(str(text), 10)
    if v < 1:
        raise ValueError("must be >= 1")
    return str(v)


def _canon_nonneg_int(text):
    v = int(str(text), 10)
    if v < 0:
        raise ValueError("must be >= 0")
    return str(v)


def _canon_initial(text):
    s = str(text).strip()
    if s == "gaussian":
        return s
    if s.startswith("basis:"):
        parts = s.split(":")
        if len(parts) != 4:
            raise ValueError("expected basis:<x>:<y>:<c>")
        x, y, c = (int(p) for p in parts[1:])
        if not 0 <= c <= 3:
            raise ValueError("component c must be 0..3")
        return f"basis:{x}:{y}:{c}"
    if s.startswith("file:"):
        return s
    raise ValueError("expected gaussian, basis:<x>:<y>:<c> or file:<path>")


def _canon_emit(text):
    items = [p.strip() for p in str(text).split(",") if p.strip()]
    bad = [p for p in items if p not in ("csv", "json", "svg")]
    if bad or not items:
        raise ValueError("expected a comma list drawn from csv,json,svg")
    return ",".join(sorted(set(items)))


def _canon_str(text):
    return str(text)


# key -> (section, canonicalizer, grammar shown in error messages)
_KEYS = OrderedDict([
    ("preset", ("experiment", _canon_str, "a preset name")),
    ("L_x", ("lattice", _canon_odd_size, "odd integer >= 3")),
    ("L_y", ("lattice", _canon_odd_size, "odd integer >= 3")),
    ("theta_x", ("coins", _canon_profile,
                 "constant:<th> | linear:<b>:<x_c>:<th> | "
                 "wall:<th1>:<th2>:<L> [+noise:<W>:<seed>]")),
    ("theta_y", ("coins", _canon_profile,
                 "constant:<th> | linear:<b>:<x_c>:<th> | "
                 "wall:<th1>:<th2>:<L> [+noise:<W>:<seed>]")),
    ("T_max", ("run", _canon_pos_int, "integer >= 1")),
    ("stride", ("run", _canon_pos_int, "integer >= 1")),
    ("initial", ("run", _canon_initial,
                 "gaussian | basis:<x>:<y>:<c> | file:<path>")),
    ("beta_over_eps", ("run", _canon_angle, "angle (pi/20, 0.15707, ...)")),
    ("shift_x", ("run", _canon_int, "integer")),
    ("shift_y", ("run", _canon_int, "integer")),
    ("kick_x", ("run", _canon_angle, "angle (pi/N, decimal)")),
    ("kick_y", ("run", _canon_angle, "angle (pi/N, decimal)")),
    ("refine_iters", ("run", _canon_nonneg_int, "integer >= 0")),
    ("band_center", ("run", _canon_angle, "angle (pi/N, decimal)")),
    ("band_sigma", ("run", _canon_float, "positive number")),
    ("band_passes", ("run", _canon_pos_int, "integer >= 1")),
    ("k_points", ("spectra", _canon_nonneg_int,
                  "integer >= 0 (0 = commensurate grid)")),
    ("count", ("spectra", _canon_pos_int, "integer >= 1")),
    ("seed", ("output", _canon_int, "integer")),
    ("outdir", ("output", _canon_str, "directory path")),
    ("emit", ("output", _canon_emit, "comma list from csv,json,svg")),
])

_ALIASES = {"T": "T_max", "L": None}  # L fans out to L_x and L_y


class ExperimentConfig:
    """Flat, canonical, order-stable experiment description."""

    def __init__(self, values=None):
        self.values = OrderedDict()
        for k, v in (values or {}).items():
            self.set(k, v)

    # -- mutation ---------------------------------------------------------

    def set(self, key, value):
        key = str(key).replace("-", "_")
        if key in _ALIASES:
            if key == "L":
                self.set("L_x", value)
                self.set("L_y", value)
                return self
            key = _ALIASES[key]
        if key not in _KEYS:
            raise ConfigError(f"unknown config key {key!r}; known keys: "
                              f"{', '.join(_KEYS)}")
        section, canon, grammar = _KEYS[key]
        try:
            self.values[key] = canon(value)
        except (ValueError, TypeError) as err:
            detail = f": {err}" if str(err) else ""
            raise ConfigError(f"bad value {value!r} for key {key!r}; "
                              f"expected {grammar}{detail}") from None
        return self

    def update(self, other):
        for k, v in other.items():
            self.set(k, v)
        return self

    # -- typed access -----------------------------------------------------

    def get(self, key, default=None):
        return self.values.get(key, default)

    def get_int(self, key, default=None):
        v = self.values.get(key)
        return default if v is None else int(v)

    def get_float(self, key, default=None):
        v = self.values.get(key)
        return default if v is None else float(v)

    def lattice(self):
        L_x = self.get_int("L_x", 101)
        L_y = self.get_int("L_y", L_x)
        return LatticeSpec(L_x, L_y)

    def profile(self, axis):
        text = self.get(f"theta_{axis}")
        if text is None:
            raise ConfigError(f"theta_{axis} is required but missing")
        return parse_profile(text)

    def step_operator(self):
        return StepOperator2D(self.lattice(), self.profile("x"),
                              self.profile("y"))

    def band_pass(self):
        center = self.get_float("band_center")
        if center is None:
            return None
        sigma = self.get_float("band_sigma")
        if sigma is None:
            raise ConfigError("band_center given without band_sigma")
        return (center, sigma, self.get_int("band_passes", 1))

    def initial_state_spec(self):
        text = self.get("initial", "gaussian")
        if text == "gaussian":
            return "gaussian"
        if text.startswith("basis:"):
            return tuple(int(p) for p in text.split(":")[1:])
        import numpy as np
        return np.load(text[len("file:"):])

    def emit_set(self):
        return set(self.get("emit", "csv,json,svg").split(","))

    # -- serialization ----------------------------------------------------

    def to_dict(self):
        return dict(self.values)

    def to_config_text(self):
        cp = configparser.ConfigParser()
        cp.optionxform = str
        for key in _KEYS:
            if key in self.values:
                section = _KEYS[key][0]
                if not cp.has_section(section):
                    cp.add_section(section)
                cp.set(section, key, self.values[key])
        buf = _io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    def __eq__(self, other):
        return (isinstance(other, ExperimentConfig)
                and dict(self.values) == dict(other.values))

    def __repr__(self):
        inner = ", ".join(f"{k}={v!r}" for k, v in self.values.items())
        return f"ExperimentConfig({inner})"


def _load_file(path):
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        obj = json.loads(text)
        if "config" in obj:          # a meta.json echo
            obj = obj["config"]
        return obj
    cp = configparser.ConfigParser()
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as err:
        raise ConfigError(f"cannot parse config file {path}: {err}") from None
    flat = OrderedDict()
    for section in cp.sections():
        for key, value in cp.items(section):
            if key in flat:
                raise ConfigError(f"duplicate key {key!r} in {path}")
            flat[key] = value
    return flat


def parse_config(args=(), file=None):
    """Build a config from an optional file plus --key value overrides.

    `args` is a flat token list (--key value or --key=value); flags
    override file values.  The file may be the key=value format or a
    meta.json produced by an earlier run (closure: re-running from the
    echo reproduces the experiment).
    """
    cfg = ExperimentConfig()
    if file is not None:
        cfg.update(_load_file(file))
    tokens = list(args)
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if not tok.startswith("--"):
            raise ConfigError(f"expected --key, got {tok!r}")
        body = tok[2:]
        if "=" in body:
            key, value = body.split("=", 1)
            i += 1
        else:
            key = body
            if i + 1 >= len(tokens):
                raise ConfigError(f"flag --{key} is missing a value")
            value = tokens[i + 1]
            i += 2
        cfg.set(key, value)
    return cfg
