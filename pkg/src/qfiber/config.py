"""Line-oriented scenario configuration: ``key = value`` with ``#`` comments.

Dotted keys select sections, e.g. ``bs.gamma = 1.0``.  Parsing either returns
a fully validated ScenarioConfig or raises ConfigError carrying every problem
found, each with its line number.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lindblad import IntegratorConfig
from .models import BSParams, MultimodeParams, PumpWave, SpFWMParams
from .semiclassical import MeanFieldConfig

MODELS = ("bs", "spfwm", "multimode", "semiclassical")


class ConfigError(ValueError):
    """One entry per problem: (line number or 0, message)."""

    def __init__(self, problems):
        self.problems = list(problems)
        lines = [f"line {ln}: {msg}" if ln else msg for ln, msg in self.problems]
        super().__init__("invalid configuration:\n  " + "\n  ".join(lines))


@dataclass(frozen=True)
class ScenarioConfig:
    model: str
    params: object  # SpFWMParams | BSParams | MultimodeParams
    length_km: float
    initial_state: tuple = ("vacuum",)
    integrator: IntegratorConfig = IntegratorConfig()
    samples: int = 51
    mean_field: MeanFieldConfig = MeanFieldConfig()
    amplitudes: tuple = ()  # semiclassical input field


_BS_KEYS = {
    "gamma", "pump_power", "alpha_s", "alpha_i", "rr_gap", "rr_span",
    "rr_span_minus_gap", "rr_span_plus_gap", "ri_span", "ri_span_minus_gap",
    "ri_span_plus_gap", "beta_s", "beta_i", "beta_p1", "beta_p2",
    "length_km", "n_max",
}
_SPFWM_KEYS = {
    "gamma", "pump_power", "alpha_s", "alpha_i", "raman_real", "raman_imag",
    "beta_p", "beta_s", "beta_i", "length_km", "n_max",
}
_GRID_KEYS = {
    "mode_indices", "delta_w", "omega0", "beta", "alpha", "raman_real",
    "raman_imag", "gamma", "n_max", "dim_cap", "central_freq_approx",
}
_RUN_KEYS = {"length_km", "step_km", "samples", "rehermitize", "monitor_every"}
_SEMI_KEYS = {"amplitudes", "self_steepening", "sprs_loss"}
_NONNEG = {
    "gamma", "pump_power", "alpha_s", "alpha_i", "raman_imag", "ri_span",
    "ri_span_minus_gap", "ri_span_plus_gap", "length_km", "delta_w", "omega0",
}
_INT_KEYS = {"n_max", "samples", "monitor_every", "dim_cap"}


class _Parser:
    def __init__(self, text: str):
        self.problems: list[tuple[int, str]] = []
        self.entries: dict[str, tuple[str, int]] = {}
        for ln, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                self.problems.append((ln, f"expected 'key = value', got {line!r}"))
                continue
            key, value = (part.strip() for part in line.split("=", 1))
            if not key or not value:
                self.problems.append((ln, "empty key or value"))
                continue
            if key in self.entries:
                self.problems.append((ln, f"duplicate key {key!r}"))
                continue
            self.entries[key] = (value, ln)
        self.used: set[str] = set()

    def error(self, key: str, message: str):
        ln = self.entries[key][1] if key in self.entries else 0
        self.problems.append((ln, message))

    def get(self, key: str, default=None) -> str | None:
        if key in self.entries:
            self.used.add(key)
            return self.entries[key][0]
        return default

    def get_float(self, key: str, default: float | None = None):
        raw = self.get(key)
        if raw is None:
            return default
        try:
            value = float(raw)
        except ValueError:
            self.error(key, f"{key}: expected a number, got {raw!r}")
            return default
        leaf = key.rsplit(".", 1)[-1]
        if leaf in _NONNEG and value < 0:
            self.error(key, f"{key}: must be non-negative, got {value}")
            return default
        return value

    def get_int(self, key: str, default: int | None = None, minimum: int | None = None):
        raw = self.get(key)
        if raw is None:
            return default
        try:
            value = int(raw)
        except ValueError:
            self.error(key, f"{key}: expected an integer, got {raw!r}")
            return default
        if minimum is not None and value < minimum:
            self.error(key, f"{key}: must be >= {minimum}, got {value}")
            return default
        return value

    def get_bool(self, key: str, default: bool):
        raw = self.get(key)
        if raw is None:
            return default
        if raw.lower() in ("true", "yes", "on", "1"):
            return True
        if raw.lower() in ("false", "no", "off", "0"):
            return False
        self.error(key, f"{key}: expected true/false, got {raw!r}")
        return default

    def get_floats(self, key: str):
        raw = self.get(key)
        if raw is None:
            return None
        try:
            return tuple(float(tok) for tok in raw.split())
        except ValueError:
            self.error(key, f"{key}: expected whitespace-separated numbers, got {raw!r}")
            return None

    def get_ints(self, key: str):
        raw = self.get(key)
        if raw is None:
            return None
        try:
            return tuple(int(tok) for tok in raw.split())
        except ValueError:
            self.error(key, f"{key}: expected whitespace-separated integers, got {raw!r}")
            return None

    def get_table(self, key: str):
        """index:value pairs, e.g. 'raman_real = 0:1.0 1:0.7 -1:0.7'."""
        raw = self.get(key)
        if raw is None:
            return {}
        table = {}
        for tok in raw.split():
            try:
                idx, val = tok.split(":", 1)
                table[int(idx)] = float(val)
            except ValueError:
                self.error(key, f"{key}: expected index:value pairs, got {tok!r}")
        return table


def _build_dataclass(parser: _Parser, cls, prefix: str, keys, overrides):
    kwargs = {}
    for key in sorted(keys):
        full = f"{prefix}.{key}"
        if key in _INT_KEYS:
            value = parser.get_int(full, None, minimum=0)
        else:
            value = parser.get_float(full, None)
        if value is not None:
            kwargs[key] = value
    kwargs.update(overrides)
    try:
        return cls(**kwargs)
    except (ValueError, TypeError) as exc:
        parser.problems.append((0, f"{prefix} parameters: {exc}"))
        return None


def _parse_grid(parser: _Parser) -> MultimodeParams | None:
    indices = parser.get_ints("grid.mode_indices")
    delta_w = parser.get_float("grid.delta_w")
    missing = [k for k, v in (("grid.mode_indices", indices), ("grid.delta_w", delta_w)) if v is None]
    if missing:
        for key in missing:
            parser.error(key, f"required key {key} is missing")
        return None
    n = len(indices)
    beta = parser.get_floats("grid.beta") or (0.0,) * n
    alpha = parser.get_floats("grid.alpha") or (0.0,) * n
    if len(beta) != n or len(alpha) != n:
        parser.problems.append((0, "grid.beta and grid.alpha need one entry per mode"))
        return None
    pumps = {}
    for key in list(parser.entries):
        if key.startswith("grid.pump_power."):
            pos = key.rsplit(".", 1)[-1]
            power = parser.get_float(key)
            k_val = parser.get_float(f"grid.pump_k.{pos}", 0.0)
            try:
                pos = int(pos)
            except ValueError:
                parser.error(key, f"{key}: pump mode position must be an integer")
                continue
            if power is not None and power < 0:
                parser.error(key, f"{key}: pump power must be non-negative")
                continue
            if power is not None:
                pumps[pos] = PumpWave.from_power(power, delta_w, k_val)
    kwargs = dict(
        mode_freqs=tuple(i * delta_w for i in indices),
        delta_w=delta_w,
        beta=beta,
        alpha=alpha,
        raman_real=parser.get_table("grid.raman_real"),
        raman_imag=parser.get_table("grid.raman_imag"),
        gamma=parser.get_float("grid.gamma", 1.0),
        pump_substitutions=pumps,
        n_max=parser.get_int("grid.n_max", 1, minimum=0),
        central_freq_approx=parser.get_bool("grid.central_freq_approx", False),
    )
    omega0 = parser.get_float("grid.omega0")
    if omega0 is not None:
        kwargs["omega0"] = omega0
    dim_cap = parser.get_int("grid.dim_cap")
    if dim_cap is not None:
        kwargs["dim_cap"] = dim_cap
    try:
        return MultimodeParams(**kwargs)
    except ValueError as exc:
        parser.problems.append((0, f"grid parameters: {exc}"))
        return None


def _parse_initial_state(parser: _Parser, n_modes: int) -> tuple:
    raw = parser.get("initial_state", "vacuum")
    tokens = raw.split()
    kind = tokens[0]
    if kind == "vacuum" and len(tokens) == 1:
        return ("vacuum",)
    if kind == "fock":
        try:
            occ = tuple(int(t) for t in tokens[1:])
        except ValueError:
            parser.error("initial_state", f"initial_state: bad photon numbers in {raw!r}")
            return ("vacuum",)
        if len(occ) != n_modes:
            parser.error(
                "initial_state",
                f"initial_state: expected {n_modes} photon numbers, got {len(occ)}",
            )
            return ("vacuum",)
        return ("fock",) + occ
    if kind == "coherent":
        try:
            amps = tuple(complex(t) for t in tokens[1:])
        except ValueError:
            parser.error("initial_state", f"initial_state: bad amplitudes in {raw!r}")
            return ("vacuum",)
        if len(amps) != n_modes:
            parser.error(
                "initial_state",
                f"initial_state: expected {n_modes} amplitudes, got {len(amps)}",
            )
            return ("vacuum",)
        return ("coherent",) + amps
    parser.error("initial_state", f"initial_state: unknown kind {raw!r}")
    return ("vacuum",)


def parse_config(text: str) -> ScenarioConfig:
    parser = _Parser(text)
    model = parser.get("model")
    if model is None:
        parser.problems.append((0, "required key 'model' is missing (one of %s)" % ", ".join(MODELS)))
        raise ConfigError(parser.problems)
    if model not in MODELS:
        parser.error("model", f"model: unknown model {model!r}, expected one of {', '.join(MODELS)}")
        raise ConfigError(parser.problems)

    params = None
    amplitudes = ()
    if model == "bs":
        for req in ("bs.gamma", "bs.pump_power"):
            if parser.get(req) is None:
                parser.error(req, f"required key {req} is missing")
        params = _build_dataclass(parser, BSParams, "bs", _BS_KEYS, {})
    elif model == "spfwm":
        for req in ("spfwm.gamma", "spfwm.pump_power"):
            if parser.get(req) is None:
                parser.error(req, f"required key {req} is missing")
        params = _build_dataclass(parser, SpFWMParams, "spfwm", _SPFWM_KEYS, {})
    else:
        params = _parse_grid(parser)
        if model == "semiclassical":
            raw = parser.get_floats("semiclassical.amplitudes")
            if raw is None:
                parser.error(
                    "semiclassical.amplitudes",
                    "required key semiclassical.amplitudes is missing (re im pairs)",
                )
            elif params is not None:
                if len(raw) != 2 * len(params.mode_freqs):
                    parser.problems.append(
                        (0, "semiclassical.amplitudes: need one re/im pair per grid mode")
                    )
                else:
                    amplitudes = tuple(complex(r, i) for r, i in zip(raw[::2], raw[1::2]))

    step_km = parser.get_float("run.step_km", 1e-3)
    samples = parser.get_int("run.samples", 51, minimum=2)
    rehermitize = parser.get_bool("run.rehermitize", False)
    monitor_every = parser.get_int("run.monitor_every", 100, minimum=1)
    length = parser.get_float("run.length_km")
    if length is None:
        length = getattr(params, "length_km", None)
    if length is None:
        parser.error("run.length_km", "required key run.length_km is missing")
        length = 0.0

    mean_field = MeanFieldConfig(
        step_km=step_km if step_km and step_km > 0 else 1e-3,
        include_self_steepening=parser.get_bool("semiclassical.self_steepening", True),
        include_sprs_loss=parser.get_bool("semiclassical.sprs_loss", True),
    )

    if model in ("bs", "spfwm"):
        n_state_modes = 2
    elif params is not None:
        n_state_modes = len(params.quantum_positions())
    else:
        n_state_modes = 0
    initial_state = _parse_initial_state(parser, n_state_modes)

    for key in parser.entries:
        if key not in parser.used:
            parser.error(key, f"unknown key {key!r}")

    integrator = None
    if step_km is not None and step_km <= 0:
        parser.error("run.step_km", f"run.step_km: must be positive, got {step_km}")
    else:
        integrator = IntegratorConfig(
            step_km=step_km, rehermitize=rehermitize, monitor_every=monitor_every
        )

    if parser.problems or params is None or integrator is None:
        if not parser.problems:
            parser.problems.append((0, "invalid parameters"))
        raise ConfigError(parser.problems)

    return ScenarioConfig(
        model=model,
        params=params,
        length_km=length,
        initial_state=initial_state,
        integrator=integrator,
        samples=samples,
        mean_field=mean_field,
        amplitudes=amplitudes,
    )


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_config(config: ScenarioConfig) -> str:
    """Canonical text form; parse_config(render_config(c)) == c."""
    lines = [f"model = {config.model}"]
    state = config.initial_state
    if state[0] == "vacuum":
        lines.append("initial_state = vacuum")
    elif state[0] == "fock":
        lines.append("initial_state = fock " + " ".join(str(n) for n in state[1:]))
    else:
        lines.append(
            "initial_state = coherent "
            + " ".join(f"{a.real!r}{a.imag:+}j".replace("+-", "-") for a in state[1:])
        )

    p = config.params
    if config.model == "bs":
        for key in sorted(_BS_KEYS):
            lines.append(f"bs.{key} = {_fmt(getattr(p, key))}")
    elif config.model == "spfwm":
        for key in sorted(_SPFWM_KEYS):
            lines.append(f"spfwm.{key} = {_fmt(getattr(p, key))}")
    else:
        indices = p._grid_indices()
        lines.append("grid.mode_indices = " + " ".join(str(i) for i in indices))
        lines.append(f"grid.delta_w = {p.delta_w!r}")
        lines.append(f"grid.omega0 = {p.omega0!r}")
        lines.append("grid.beta = " + " ".join(repr(b) for b in p.beta))
        lines.append("grid.alpha = " + " ".join(repr(a) for a in p.alpha))
        if p.raman_real:
            lines.append(
                "grid.raman_real = "
                + " ".join(f"{j}:{v!r}" for j, v in sorted(p.raman_real.items()))
            )
        if p.raman_imag:
            lines.append(
                "grid.raman_imag = "
                + " ".join(f"{j}:{v!r}" for j, v in sorted(p.raman_imag.items()))
            )
        lines.append(f"grid.gamma = {p.gamma!r}")
        lines.append(f"grid.n_max = {p.n_max}")
        lines.append(f"grid.dim_cap = {p.dim_cap}")
        lines.append(f"grid.central_freq_approx = {_fmt(p.central_freq_approx)}")
        for pos, pump in sorted(p.pump_substitutions.items()):
            power = float((abs(pump.amplitude) * p.delta_w) ** 2 / (2.0 * np.pi))
            lines.append(f"grid.pump_power.{pos} = {power!r}")
            lines.append(f"grid.pump_k.{pos} = {float(pump.wavenumber)!r}")
        if config.model == "semiclassical":
            lines.append(
                "semiclassical.amplitudes = "
                + " ".join(f"{a.real!r} {a.imag!r}" for a in config.amplitudes)
            )
            lines.append(
                f"semiclassical.self_steepening = {_fmt(config.mean_field.include_self_steepening)}"
            )
            lines.append(f"semiclassical.sprs_loss = {_fmt(config.mean_field.include_sprs_loss)}")

    lines.append(f"run.length_km = {config.length_km!r}")
    lines.append(f"run.step_km = {config.integrator.step_km!r}")
    lines.append(f"run.samples = {config.samples}")
    lines.append(f"run.rehermitize = {_fmt(config.integrator.rehermitize)}")
    lines.append(f"run.monitor_every = {config.integrator.monitor_every}")
    return "\n".join(lines) + "\n"
