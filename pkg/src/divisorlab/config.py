"""Experiment configuration: one small INI file drives every runner.

A config names an experiment, the integer parameters that apply to it
(k, moment order m, half-tuple size l), the numeric ranges (x, h, n,
delta lists), resource settings and output locations.  Serialisation
round-trips exactly: floats are written with repr, so parse(dump(c))
reproduces c bit for bit.  Validation returns the full list of
violations rather than stopping at the first.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigError

EXPERIMENTS = (
    "sieve",
    "delta",
    "voronoi",
    "moments",
    "short-interval",
    "count",
    "omega",
    "shiu",
)

#: hard resource ceilings for a desk-scale run
LIMIT_MAX = 200_000_000
COUNT_N_MAX = 1024

_K_RANGE = {
    "sieve": (1, 6),
    "count": (2, 6),
    "shiu": (2, 2),
}
_K_DEFAULT_RANGE = (2, 4)


def _fmt_floats(values) -> str:
    return ", ".join(repr(float(v)) for v in values)


def _fmt_ints(values) -> str:
    return ", ".join(str(int(v)) for v in values)


def _parse_floats(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(part) for part in text.split(","))


def _parse_ints(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(part) for part in text.split(","))


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a single experiment run depends on."""

    experiment: str
    k: int = 2
    m: int = 2
    l: int = 2
    x_list: tuple = ()
    h_list: tuple = ()
    n_list: tuple = ()
    delta_list: tuple = ()
    limit: int = 1_000_000
    order: int = 8
    sample_count: int = 256
    rng_seed: int = 0
    cache_dir: str = "cache"
    out_dir: str = "out"

    def validate(self) -> list:
        """All violations as human-readable strings; empty means valid."""
        bad = []
        if self.experiment not in EXPERIMENTS:
            bad.append(
                f"experiment must be one of {', '.join(EXPERIMENTS)}; "
                f"got {self.experiment!r}"
            )
            return bad
        k_lo, k_hi = _K_RANGE.get(self.experiment, _K_DEFAULT_RANGE)
        if not k_lo <= self.k <= k_hi:
            bad.append(
                f"k must lie in [{k_lo}, {k_hi}] for {self.experiment}, "
                f"got {self.k}"
            )
        if not 1 <= self.limit <= LIMIT_MAX:
            bad.append(f"limit must lie in [1, {LIMIT_MAX}], got {self.limit}")
        if not 4 <= self.order <= 16:
            bad.append(f"order must lie in [4, 16], got {self.order}")
        if self.sample_count < 8:
            bad.append(f"sample_count must be at least 8, got {self.sample_count}")
        if self.rng_seed < 0:
            bad.append(f"rng_seed must be nonnegative, got {self.rng_seed}")
        if not self.cache_dir:
            bad.append("cache_dir must be nonempty")
        if not self.out_dir:
            bad.append("out_dir must be nonempty")

        exp = self.experiment
        needs_x = exp in ("delta", "voronoi", "moments", "short-interval", "shiu")
        if needs_x and not self.x_list:
            bad.append(f"{exp} needs a nonempty x list")
        for x in self.x_list:
            if not 1 <= x <= self.limit:
                bad.append(f"x={x:g} outside [1, limit={self.limit}]")
        if exp == "moments":
            if not 1 <= self.m <= 9:
                bad.append(f"m must lie in {{1,...,9}}, got {self.m}")
            if any(b <= a for a, b in zip(self.x_list, self.x_list[1:])):
                bad.append("moments x list must be strictly increasing")
        if exp == "voronoi":
            if not self.n_list:
                bad.append("voronoi needs a nonempty n list of truncation lengths")
            if any(n < 1 for n in self.n_list):
                bad.append("voronoi truncation lengths must be positive")
            for x in self.x_list:
                if 2 * x + 1 > self.limit:
                    bad.append(
                        f"voronoi error profiling needs a table past 2x; "
                        f"x={x:g} exceeds limit={self.limit}"
                    )
        if exp == "short-interval":
            if not self.h_list:
                bad.append("short-interval needs a nonempty h list")
            for x in self.x_list:
                for h in self.h_list:
                    if not 1 <= h <= x / 2:
                        bad.append(
                            f"short-interval needs 1 <= h <= x/2; "
                            f"violated by x={x:g}, h={h:g}"
                        )
                    elif x + h > self.limit:
                        bad.append(f"x+h = {x + h:g} beyond limit {self.limit}")
        if exp == "count":
            if self.l not in (2, 3):
                bad.append(f"l must be 2 or 3, got {self.l}")
            if not self.n_list:
                bad.append("count needs a nonempty n list of N values")
            for n in self.n_list:
                if not 3 <= n <= COUNT_N_MAX:
                    bad.append(f"count N={n} outside [3, {COUNT_N_MAX}]")
            if not self.delta_list:
                bad.append("count needs a nonempty delta list")
            for d in self.delta_list:
                if not d > 0:
                    bad.append(f"delta must be positive, got {d:g}")
        if exp == "omega":
            if len(self.x_list) > 1:
                bad.append("omega takes at most one x (the scan endpoint)")
        if exp == "shiu":
            if not self.h_list:
                bad.append("shiu needs a nonempty h list")
            for x in self.x_list:
                for h in self.h_list:
                    if not x**0.1 <= h <= x:
                        bad.append(
                            f"shiu needs x^0.1 <= h <= x; "
                            f"violated by x={x:g}, h={h:g}"
                        )
                    elif x + h > self.limit:
                        bad.append(f"x+h = {x + h:g} beyond limit {self.limit}")
        return bad

    def require_valid(self) -> "ExperimentConfig":
        violations = self.validate()
        if violations:
            raise ConfigError(violations)
        return self

    def dumps(self) -> str:
        parser = configparser.ConfigParser()
        parser["experiment"] = {"name": self.experiment}
        parser["parameters"] = {
            "k": str(self.k),
            "m": str(self.m),
            "l": str(self.l),
            "x": _fmt_floats(self.x_list),
            "h": _fmt_floats(self.h_list),
            "n": _fmt_ints(self.n_list),
            "delta": _fmt_floats(self.delta_list),
            "limit": str(self.limit),
            "order": str(self.order),
            "samples": str(self.sample_count),
        }
        parser["run"] = {
            "seed": str(self.rng_seed),
            "cache_dir": self.cache_dir,
            "out": self.out_dir,
        }
        buf = io.StringIO()
        parser.write(buf)
        return buf.getvalue()

    def dump(self, path) -> Path:
        path = Path(path)
        path.write_text(self.dumps())
        return path

    @classmethod
    def loads(cls, text: str) -> "ExperimentConfig":
        parser = configparser.ConfigParser()
        try:
            parser.read_string(text)
            name = parser.get("experiment", "name")
            p = parser["parameters"]
            r = parser["run"]
            return cls(
                experiment=name,
                k=p.getint("k", 2),
                m=p.getint("m", 2),
                l=p.getint("l", 2),
                x_list=_parse_floats(p.get("x", "")),
                h_list=_parse_floats(p.get("h", "")),
                n_list=_parse_ints(p.get("n", "")),
                delta_list=_parse_floats(p.get("delta", "")),
                limit=p.getint("limit", 1_000_000),
                order=p.getint("order", 8),
                sample_count=p.getint("samples", 256),
                rng_seed=r.getint("seed", 0),
                cache_dir=r.get("cache_dir", "cache"),
                out_dir=r.get("out", "out"),
            )
        except (configparser.Error, KeyError, ValueError) as exc:
            raise ConfigError([f"unparseable config: {exc}"]) from exc

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError([f"config file {path} does not exist"])
        return cls.loads(path.read_text())

    def with_overrides(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)
