"""Availability profiles: one CSV per profile id with header ``timestep,value``."""

from __future__ import annotations

import csv
import io
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class Profile:
    id: str
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        bad = [v for v in vals if not 0.0 <= v <= 1.0]
        if bad:
            raise ProfileError(f"profile {self.id!r}: values must lie in [0, 1], got {bad[0]}")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)


def parse_profile_csv(profile_id: str, text: str) -> Profile:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["timestep", "value"]:
        raise ProfileError(f"profile {profile_id!r}: expected header 'timestep,value'")
    values = []
    for n, row in enumerate(rows[1:], start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 2:
            raise ProfileError(f"profile {profile_id!r} line {n}: expected two columns")
        try:
            step, value = int(row[0]), float(row[1])
        except ValueError:
            raise ProfileError(f"profile {profile_id!r} line {n}: not a number") from None
        if step != len(values):
            raise ProfileError(f"profile {profile_id!r} line {n}: timestep {step} out of order")
        values.append(value)
    return Profile(profile_id, tuple(values))


def write_profile_csv(profile: Profile) -> str:
    lines = ["timestep,value"] + [f"{i},{v:.6f}" for i, v in enumerate(profile.values)]
    return "\n".join(lines) + "\n"


def load_profile(directory: str | Path, profile_id: str) -> Profile:
    path = Path(directory) / f"{profile_id}.csv"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProfileError(f"cannot read profile {path}: {exc.strerror}") from None
    return parse_profile_csv(profile_id, text)


def synthetic_profile(profile_id: str, steps: int, seed: int) -> Profile:
    """Deterministic placeholder profile: a daily cycle plus noise, clipped to [0, 1].

    Ids containing "pv" or "solar" get a day/night shape; anything else gets
    a smoother, wind-like series.
    """
    rng = np.random.default_rng([seed, zlib.crc32(profile_id.encode("utf-8"))])
    hours = np.arange(steps) % 24
    if "pv" in profile_id.lower() or "solar" in profile_id.lower():
        base = np.clip(np.sin((hours - 6) / 12 * np.pi), 0.0, None)
        vals = base * rng.uniform(0.7, 1.0, steps)
    else:
        walk = np.cumsum(rng.normal(0.0, 0.08, steps))
        vals = 0.45 + 0.15 * np.cos(hours / 24 * 2 * np.pi) + walk - walk.mean()
    vals = np.round(np.clip(vals, 0.0, 1.0), 6)
    return Profile(profile_id, tuple(float(v) for v in vals))


def resolve_profiles(
    ids: list[str], steps: int, directory: str | Path | None, seed: int | None
) -> dict[str, Profile]:
    """Load each profile from ``directory``; synthesize missing ones when a seed is given."""
    out = {}
    for pid in sorted(set(ids)):
        path = None if directory is None else Path(directory) / f"{pid}.csv"
        if path is not None and path.exists():
            prof = load_profile(directory, pid)
            if len(prof) < steps:
                raise ProfileError(f"profile {pid!r} has {len(prof)} values, horizon needs {steps}")
            out[pid] = Profile(pid, prof.values[:steps])
        elif seed is not None:
            out[pid] = synthetic_profile(pid, steps, seed)
        else:
            raise ProfileError(f"no profile file for {pid!r} and no --seed for a synthetic one")
    return out
