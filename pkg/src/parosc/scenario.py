"""Scenario files: a TOML description of one parametric-oscillator run.

Sections
--------
``[profile]``
    ``kind`` in {zero, constant, tanh_step, sampled}; ``omega0`` (constant),
    ``omega1``, ``omega2``, ``k`` (tanh_step), or ``t`` and ``omega_sq``
    arrays (sampled, cubic spline, integrated numerically).
``[force]``
    ``kind`` in {zero, constant, cosine}; ``f0``, ``nu``, ``phase``.
``[ermakov]``
    ``a``, ``c``.
``[physical]``
    ``m``, ``hbar``, ``w``.
``[trajectory]``
    ``gamma1``, ``gamma2``.
``[grid]``
    ``n``, ``margin``, ``n_max``, ``stride`` (x subsampling of exports).
``[times]``
    ``t_start``, ``t_end``, ``samples``, ``t_ref``, ``span``.
``[coherent]``
    ``alpha = [re, im]``, ``n_trunc``.
``[verify]``
    ``n_basis``, ``n_eigen``, ``n_gram``, ``check_times``, ``oracle_dt``,
    ``oracle_horizon``, ``oracle_margin``.
``[outputs]``
    ``states = [n, ...]``.
"""

import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Tuple

import numpy as np
import tomli_w
from scipy.interpolate import CubicSpline

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .classical import DrivingForce, FrequencyProfile, solve_homogeneous
from .constants import PhysConstants
from .errors import ValidationError
from .ermakov import build_transform
from .grid import Grid


@dataclass(frozen=True)
class ProfileSpec:
    kind: str = "tanh_step"
    omega0: float = 1.0
    omega1: float = 5.0
    omega2: float = 3.0
    k: float = 0.5
    t: Tuple[float, ...] = ()
    omega_sq: Tuple[float, ...] = ()

    def build(self):
        if self.kind == "zero":
            return FrequencyProfile.zero()
        if self.kind == "constant":
            return FrequencyProfile.constant(self.omega0)
        if self.kind == "tanh_step":
            return FrequencyProfile.tanh_step(self.omega1, self.omega2, self.k)
        if self.kind == "sampled":
            t, om2 = np.asarray(self.t, float), np.asarray(self.omega_sq, float)
            if t.size < 4 or t.shape != om2.shape:
                raise ValidationError("[profile] sampled: t and omega_sq need equal length >= 4")
            if not (np.diff(t) > 0).all():
                raise ValidationError("[profile] t: sample times must increase")
            return FrequencyProfile.custom(CubicSpline(t, om2, extrapolate=False))
        raise ValidationError(f"[profile] kind: unknown profile {self.kind!r}")

    def as_dict(self):
        keys = {
            "zero": (),
            "constant": ("omega0",),
            "tanh_step": ("omega1", "omega2", "k"),
            "sampled": ("t", "omega_sq"),
        }[self.kind]
        out = {"kind": self.kind}
        for key in keys:
            v = getattr(self, key)
            out[key] = list(v) if isinstance(v, tuple) else v
        return out


@dataclass(frozen=True)
class ForceSpec:
    kind: str = "zero"
    f0: float = 0.0
    nu: float = 0.0
    phase: float = 0.0

    def build(self):
        if self.kind == "zero":
            return DrivingForce.zero()
        if self.kind == "constant":
            return DrivingForce.constant(self.f0)
        if self.kind == "cosine":
            return DrivingForce.cosine(self.f0, self.nu, self.phase)
        raise ValidationError(f"[force] kind: unknown force {self.kind!r}")

    def as_dict(self):
        keys = {"zero": (), "constant": ("f0",), "cosine": ("f0", "nu", "phase")}[self.kind]
        return {"kind": self.kind, **{k: getattr(self, k) for k in keys}}


@dataclass(frozen=True)
class ErmakovSpec:
    a: float = 1.0
    c: float = 1.0


@dataclass(frozen=True)
class TrajectorySpec:
    gamma1: float = 0.0
    gamma2: float = 0.0


@dataclass(frozen=True)
class GridSpec:
    n: int = 2048
    margin: float = 8.0
    n_max: int = 8
    stride: int = 4


@dataclass(frozen=True)
class TimesSpec:
    t_start: float = 0.0
    t_end: float = 4.0
    samples: int = 41
    t_ref: float = 0.0
    span: Tuple[float, float] = (-10.0, 10.0)


@dataclass(frozen=True)
class CoherentSpec:
    alpha: Tuple[float, float] = (1.0, 0.0)
    n_trunc: int = 60


@dataclass(frozen=True)
class VerifySpec:
    n_basis: int = 16
    n_eigen: int = 6
    n_gram: int = 8
    check_times: int = 5
    oracle_dt: float = 1e-4
    oracle_horizon: float = 1.0
    oracle_margin: float = 4.5


@dataclass(frozen=True)
class OutputSpec:
    states: Tuple[int, ...] = (0, 1, 2)


_SECTIONS = {
    "profile": ProfileSpec,
    "force": ForceSpec,
    "ermakov": ErmakovSpec,
    "physical": PhysConstants,
    "trajectory": TrajectorySpec,
    "grid": GridSpec,
    "times": TimesSpec,
    "coherent": CoherentSpec,
    "verify": VerifySpec,
    "outputs": OutputSpec,
}


# array fields whose length is fixed by their meaning
_PAIRS = {("times", "span"), ("coherent", "alpha")}


def _coerce(section, name, value, default):
    where = f"[{section}] {name}"
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ValidationError(f"{where}: expected a string")
        return value
    if isinstance(default, tuple):
        if not isinstance(value, (list, tuple)):
            raise ValidationError(f"{where}: expected an array")
        if section == "outputs":
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
                raise ValidationError(f"{where}: entries must be integers")
            return tuple(value)
        try:
            out = tuple(float(v) for v in value)
        except (TypeError, ValueError):
            raise ValidationError(f"{where}: array entries must be numbers") from None
        if (section, name) in _PAIRS and len(out) != 2:
            raise ValidationError(f"{where}: expected 2 entries")
        return out
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(f"{where}: expected an integer")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where}: expected a number")
    if not np.isfinite(value):
        raise ValidationError(f"{where}: must be finite")
    return float(value)


def _section(name, cls, raw):
    if not isinstance(raw, dict):
        raise ValidationError(f"[{name}] must be a table")
    known = {f.name: f for f in fields(cls)}
    unknown = set(raw) - set(known)
    if unknown:
        raise ValidationError(f"[{name}] unknown keys: {', '.join(sorted(unknown))}")
    defaults = cls()
    kwargs = {k: _coerce(name, k, v, getattr(defaults, k)) for k, v in raw.items()}
    try:
        return cls(**kwargs)
    except ValidationError as exc:
        raise ValidationError(f"[{name}] {exc}") from None


@dataclass(frozen=True)
class Scenario:
    """Everything needed to reproduce one run from a scenario file."""

    name: str = "scenario"
    profile: ProfileSpec = field(default_factory=ProfileSpec)
    force: ForceSpec = field(default_factory=ForceSpec)
    ermakov: ErmakovSpec = field(default_factory=ErmakovSpec)
    physical: PhysConstants = field(default_factory=PhysConstants)
    trajectory: TrajectorySpec = field(default_factory=TrajectorySpec)
    grid: GridSpec = field(default_factory=GridSpec)
    times: TimesSpec = field(default_factory=TimesSpec)
    coherent: CoherentSpec = field(default_factory=CoherentSpec)
    verify: VerifySpec = field(default_factory=VerifySpec)
    outputs: OutputSpec = field(default_factory=OutputSpec)

    def __post_init__(self):
        for key in ("profile", "force"):
            try:
                getattr(self, key).build()
            except ValidationError as exc:
                msg = str(exc)
                raise ValidationError(msg if msg.startswith("[") else f"[{key}] {msg}") from None
        ts = self.times
        if ts.samples < 2:
            raise ValidationError("[times] samples: need at least 2")
        if not ts.t_end > ts.t_start:
            raise ValidationError("[times] t_end must exceed t_start")
        lo, hi = ts.span
        if not (lo <= ts.t_start and ts.t_end <= hi and lo <= ts.t_ref <= hi):
            raise ValidationError("[times] span must contain t_start, t_end and t_ref")
        if self.grid.stride < 1:
            raise ValidationError("[grid] stride must be >= 1")
        if self.grid.n_max < 0 or any(n < 0 for n in self.outputs.states):
            raise ValidationError("quantum numbers must be nonnegative")
        if self.coherent.n_trunc < 0:
            raise ValidationError("[coherent] n_trunc must be nonnegative")
        if not (self.verify.oracle_dt > 0 and self.verify.oracle_horizon > 0):
            raise ValidationError("[verify] oracle_dt and oracle_horizon must be positive")
        for key in ("n_basis", "n_eigen", "n_gram", "check_times"):
            if getattr(self.verify, key) < 1:
                raise ValidationError(f"[verify] {key} must be >= 1")

    # -- (de)serialization --------------------------------------------------

    @classmethod
    def from_dict(cls, raw):
        if not isinstance(raw, dict):
            raise ValidationError("scenario must be a table")
        unknown = set(raw) - set(_SECTIONS) - {"name"}
        if unknown:
            raise ValidationError(f"unknown sections: {', '.join(sorted(unknown))}")
        name = raw.get("name", "scenario")
        if not isinstance(name, str):
            raise ValidationError("name: expected a string")
        parts = {k: _section(k, c, raw[k]) for k, c in _SECTIONS.items() if k in raw}
        return cls(name=name, **parts)

    def to_dict(self):
        out = {"name": self.name}
        for key in _SECTIONS:
            value = getattr(self, key)
            if hasattr(value, "as_dict"):
                out[key] = value.as_dict()
            else:
                out[key] = {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(value).items()}
        return out

    @classmethod
    def loads(cls, text):
        try:
            raw = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ValidationError(f"scenario is not valid TOML: {exc}") from None
        return cls.from_dict(raw)

    @classmethod
    def load(cls, path):
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read scenario {path}: {exc.strerror}") from None
        return cls.loads(text)

    def dumps(self):
        return tomli_w.dumps(self.to_dict())

    def dump(self, path):
        Path(path).write_text(self.dumps())

    def with_grid_n(self, n):
        return replace(self, grid=replace(self.grid, n=int(n)))

    # -- construction -------------------------------------------------------

    @property
    def consts(self):
        return self.physical

    @property
    def alpha(self):
        re, im = self.coherent.alpha
        return complex(re, im)

    def sample_times(self):
        ts = self.times
        return np.linspace(ts.t_start, ts.t_end, ts.samples)

    def check_times(self, count=None):
        ts = self.times
        return np.linspace(ts.t_start, ts.t_end, count or self.verify.check_times)

    def build(self):
        """:class:`TransformData` for this scenario."""
        profile = self.profile.build()
        ts = self.times
        pair = None
        if self.profile.kind == "sampled":
            lo, hi = self.profile.t[0], self.profile.t[-1]
            if not (lo <= ts.span[0] and ts.span[1] <= hi):
                raise ValidationError("[times] span exceeds the sampled profile's time range")
            pair = solve_homogeneous(profile, t0=ts.t_ref, span=ts.span)
        return build_transform(
            profile,
            self.physical,
            a=self.ermakov.a,
            c=self.ermakov.c,
            force=self.force.build(),
            gamma1=self.trajectory.gamma1,
            gamma2=self.trajectory.gamma2,
            pair=pair,
            span=ts.span,
            t_ref=ts.t_ref,
        )

    def state_grid(self, data, n_max=None, margin=None, shift=0.0):
        g = self.grid
        return Grid.for_transform(
            data,
            np.linspace(self.times.t_start, self.times.t_end, 201),
            n_max=g.n_max if n_max is None else n_max,
            margin=g.margin if margin is None else margin,
            n=g.n,
            shift=shift,
        )

    def coherent_shift(self, data):
        """Largest coherent displacement ``sqrt(2/m) sigma |alpha| / w`` on the window."""
        c = self.physical
        f = data.frame(np.linspace(self.times.t_start, self.times.t_end, 201))
        return float(np.sqrt(2 / c.m) * f.sigma.max() * abs(self.alpha) / c.w)


PRESETS = {
    "tanh_step": Scenario(
        name="tanh_step",
        profile=ProfileSpec("tanh_step", omega1=5.0, omega2=3.0, k=0.5),
        times=TimesSpec(t_start=0.0, t_end=4.0, samples=41),
    ),
    "free_particle": Scenario(
        name="free_particle",
        profile=ProfileSpec("zero"),
        times=TimesSpec(t_start=-5.0, t_end=5.0, samples=41),
    ),
    "constant": Scenario(
        name="constant",
        profile=ProfileSpec("constant", omega0=1.0),
        times=TimesSpec(t_start=0.0, t_end=4.0, samples=41),
    ),
}


def preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise ValidationError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


__all__ = ["PRESETS", "Scenario", "preset"]
