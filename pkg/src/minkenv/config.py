"""Flat ``key = value`` family configuration files."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

from .expr import ParseError, parse


class ConfigError(ValueError):
    def __init__(self, message: str, source: str = "<config>", line: int | None = None):
        self.source = source
        self.line = line
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass
class FamilyConfig:
    ax: str
    ay: str
    r: str
    nux: str | None = None
    nuy: str | None = None
    sigma: int = 1
    t_min: float = -1.0
    t_max: float = 1.0
    n_samples: int = 601
    csv: bool = False
    svg: bool = False
    out_dir: str = "."
    name: str = "family"
    source: str = "<config>"
    lines: dict[str, int] = field(default_factory=dict, repr=False, compare=False)

    def where(self, key: str) -> tuple[str, int | None]:
        return self.source, self.lines.get(key)

    def validate(self) -> "FamilyConfig":
        for key in ("ax", "ay", "r", "nux", "nuy"):
            text = getattr(self, key)
            if text is None:
                continue
            try:
                parse(text)
            except ParseError as exc:
                raise ConfigError(f"{key}: {exc}", *self.where(key)) from None
        if (self.nux is None) != (self.nuy is None):
            raise ConfigError("nux and nuy must be given together", *self.where("nux" if self.nux else "nuy"))
        if self.sigma not in (1, -1):
            raise ConfigError(f"sigma must be +1 or -1, got {self.sigma}", *self.where("sigma"))
        if not self.t_min < self.t_max:
            raise ConfigError(f"t_min ({self.t_min}) must be below t_max ({self.t_max})",
                              *self.where("t_max"))
        if self.n_samples < 16:
            raise ConfigError("n_samples must be at least 16", *self.where("n_samples"))
        return self


_KEYS = {f.name: f for f in fields(FamilyConfig) if f.name not in ("source", "lines")}
_REQUIRED = ("ax", "ay", "r")


def _coerce(key: str, raw: str, source: str, line: int):
    try:
        if key in ("sigma", "n_samples"):
            val = float(raw)
            if not val.is_integer():
                raise ValueError
            return int(val)
        if key in ("t_min", "t_max"):
            return float(raw)
        if key in ("csv", "svg"):
            low = raw.lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}", source, line) from None
    return raw


def loads(text: str, source: str = "<config>") -> FamilyConfig:
    values: dict = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", source, lineno)
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", source, lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", source, lineno)
        if not val:
            raise ConfigError(f"empty value for {key!r}", source, lineno)
        values[key] = _coerce(key, val, source, lineno)
        lines[key] = lineno
    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}", source)
    cfg = FamilyConfig(**values, source=source, lines=lines)
    return cfg.validate()


def load(path) -> FamilyConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", str(path)) from None
    cfg = loads(text, str(path))
    if "name" not in cfg.lines:
        cfg.name = path.stem
    return cfg


def dumps(cfg: FamilyConfig) -> str:
    keys = ["ax", "ay", "nux", "nuy", "r", "sigma", "t_min", "t_max", "n_samples"]
    out = []
    for k in keys:
        v = getattr(cfg, k)
        if v is not None:
            out.append(f"{k} = {v!r}" if isinstance(v, float) else f"{k} = {v}")
    return "\n".join(out) + "\n"
