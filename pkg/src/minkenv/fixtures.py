"""The five worked families, as configurations plus their expected outcomes."""

from __future__ import annotations

from dataclasses import dataclass

from .config import FamilyConfig


@dataclass(frozen=True)
class Fixture:
    number: int
    config: FamilyConfig
    expected_class: str
    note: str


def _cfg(n, **kw) -> FamilyConfig:
    return FamilyConfig(name=f"example{n}", source=f"<example {n}>", **kw)


def fixture(n: int, n_samples: int = 601) -> Fixture:
    if n == 1:
        cfg = _cfg(1, ax="t^3", ay="sqrt(1+t^6)", nux="t^3", nuy="sqrt(1+t^6)", r="1",
                   sigma=1, t_min=-1.5, t_max=1.5, n_samples=n_samples)
        return Fixture(1, cfg, "ExactlyTwo", "timelike frontal, constant radius; D adds the circle at t=0")
    if n == 2:
        cfg = _cfg(2, ax="cosh(t)", ay="sinh(t)", nux="cosh(t)", nuy="sinh(t)", r="2-t",
                   sigma=1, t_min=-2.0, t_max=2.0, n_samples=n_samples)
        return Fixture(2, cfg, "Unique", "spacelike frontal with |r'| = |beta| = 1")
    if n == 3:
        # the open interval (0, inf) is truncated to (0, 2)
        cfg = _cfg(3, ax="t^2/2", ay="t^2/2+t^3/3", nux="t+1", nuy="1", r="1",
                   sigma=1, t_min=0.0, t_max=2.0, n_samples=n_samples)
        return Fixture(3, cfg, "NoEnvelope", "spacelike frontal, constant radius: no envelope")
    if n == 4:
        cfg = _cfg(4, ax="t^2/2", ay="t^2/2+t^3/3", nux="t+1", nuy="1", r="1",
                   sigma=1, t_min=-2.0, t_max=0.0, n_samples=n_samples)
        return Fixture(4, cfg, "ExactlyTwo", "same curve on (-2, 0) is timelike: two envelopes")
    if n == 5:
        cfg = _cfg(5, ax="0", ay="1", nux="cosh(t)", nuy="sinh(t)", r="1",
                   sigma=1, t_min=-2.0, t_max=2.0, n_samples=n_samples)
        return Fixture(5, cfg, "UncountablyMany", "constant centre: beta vanishes identically")
    raise ValueError(f"no example {n}; choose 1..5")


ALL = (1, 2, 3, 4, 5)
