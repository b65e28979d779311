"""Techno-economic annex: costs, conversion coefficients and storage data.

The annex is a TOML file.  Layout::

    [horizon]                       # optional
    steps = 4
    step_hours = 1.0
    storage_boundary = "cyclic"     # or "free-start-zero"

    [[demand]]                      # optional, repeatable
    commodity = "H2"
    quantity = 1.0
    target = "per_step"             # or "total_over_horizon"

    [tech."electrolyzer@l1"]
    capex_annuity = 10.0            # per unit capacity per horizon
    opex_var = 0.0                  # per unit activity
    bounds = [0.0, inf]             # capacity bounds, optional
    profile = "wind"                # availability profile id, optional
    conversion = { electricity = -1.0, H2 = 1.0 }

    [tech."Battery@l1".storage]
    charge_efficiency = 0.95
    discharge_efficiency = 0.95
    energy_ratio_hours = 4.0

Conversion values are per unit of activity: negative for a consumed
commodity, positive for a produced one.  A commodity that is both an input
and an output of the same (non-storage) technology takes a pair
``[-consumed, produced]``.  Omitted coefficients are zero.

Generic technologies must all be covered.  Import, export and opportunity
technologies may be listed to set ``opex_var`` or conversions; they default
to a coefficient of 1 per commodity and carry no capacity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import tomli

from rreh.model import Commodity, Hub, Technology, TechnologyKind


class AnnexError(ValueError):
    pass


@dataclass(frozen=True)
class StorageSpec:
    charge_efficiency: float = 1.0
    discharge_efficiency: float = 1.0
    energy_ratio_hours: float = 1.0

    def __post_init__(self):
        for name in ("charge_efficiency", "discharge_efficiency"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise AnnexError(f"{name} must lie in (0, 1], got {v}")
        if not self.energy_ratio_hours > 0:
            raise AnnexError(f"energy_ratio_hours must be positive, got {self.energy_ratio_hours}")


@dataclass(frozen=True)
class TechEcon:
    capex_annuity: float = 0.0
    opex_var: float = 0.0
    conversion: Mapping[str, float | tuple[float, float]] = field(default_factory=dict)
    bounds: tuple[float, float] = (0.0, math.inf)
    storage: StorageSpec | None = None
    profile: str | None = None

    def __post_init__(self):
        if self.capex_annuity < 0 or self.opex_var < 0:
            raise AnnexError("costs must be non-negative")
        lo, hi = self.bounds
        if lo < 0 or lo > hi:
            raise AnnexError(f"capacity bounds must satisfy 0 <= min <= max, got [{lo}, {hi}]")

    def coefficients(self, tech: Technology) -> tuple[dict[str, float], dict[str, float]]:
        """Consumed (alpha >= 0) and produced (beta >= 0) amounts per unit activity."""
        default = 0.0 if tech.kind is TechnologyKind.GENERIC else 1.0
        consume = {c: default for c in tech.inputs}
        produce = {c: default for c in tech.outputs}
        stored = stored_commodity(tech) if self.storage else None
        for c, v in self.conversion.items():
            if c == stored:
                raise AnnexError(f"{tech.key}: stored commodity {c} takes efficiencies, not a conversion")
            if c not in tech.inputs and c not in tech.outputs:
                raise AnnexError(f"{tech.key}: {c} is neither an input nor an output")
            if c in tech.inputs and c in tech.outputs:
                if not isinstance(v, tuple):
                    raise AnnexError(f"{tech.key}: {c} is both consumed and produced, give [-consumed, produced]")
                a, b = v
                if a > 0 or b < 0:
                    raise AnnexError(f"{tech.key}: pair for {c} must be [<= 0, >= 0]")
                consume[c], produce[c] = -a, b
            elif isinstance(v, tuple):
                raise AnnexError(f"{tech.key}: a pair is only allowed for a commodity on both sides")
            elif c in tech.inputs:
                if v > 0:
                    raise AnnexError(f"{tech.key}: input {c} needs a coefficient <= 0, got {v}")
                consume[c] = -v
            else:
                if v < 0:
                    raise AnnexError(f"{tech.key}: output {c} needs a coefficient >= 0, got {v}")
                produce[c] = v
        return consume, produce


def stored_commodity(tech: Technology) -> str:
    both = sorted(tech.inputs & tech.outputs)
    if len(both) != 1:
        raise AnnexError(f"{tech.key}: a storage technology needs exactly one commodity that is both input and output")
    return both[0]


@dataclass(frozen=True)
class DemandSpec:
    commodity: str
    quantity: float
    target: str = "per_step"

    def __post_init__(self):
        object.__setattr__(self, "commodity", Commodity.parse(self.commodity).id)
        if self.target not in ("per_step", "total_over_horizon"):
            raise AnnexError(f"unknown demand target {self.target!r}")
        if not self.quantity >= 0:
            raise AnnexError(f"demand quantity must be non-negative, got {self.quantity}")

    @classmethod
    def parse(cls, spec: str) -> "DemandSpec":
        """``COMMODITY:QTY`` or ``COMMODITY:QTY:total``."""
        parts = spec.rsplit(":", 2)
        if len(parts) == 3 and parts[2] in ("total", "per_step"):
            target = "total_over_horizon" if parts[2] == "total" else "per_step"
            commodity, qty = parts[0], parts[1]
        else:
            commodity, _, qty = spec.rpartition(":")
            target = "per_step"
        if not commodity:
            raise AnnexError(f"demand spec {spec!r} should look like COMMODITY:QTY")
        try:
            return cls(commodity, float(qty), target)
        except ValueError as exc:
            raise AnnexError(f"demand spec {spec!r}: {exc}") from None


@dataclass(frozen=True)
class TechnoEconomics:
    techs: Mapping[str, TechEcon]
    steps: int | None = None
    step_hours: float = 1.0
    storage_boundary: str = "cyclic"
    demands: tuple[DemandSpec, ...] = ()

    def __post_init__(self):
        if self.storage_boundary not in ("cyclic", "free-start-zero"):
            raise AnnexError(f"unknown storage boundary {self.storage_boundary!r}")
        if self.step_hours <= 0:
            raise AnnexError("step_hours must be positive")
        if self.steps is not None and self.steps < 1:
            raise AnnexError("horizon steps must be at least 1")

    def for_tech(self, tech: Technology) -> TechEcon:
        return self.techs.get(tech.key, TechEcon())

    def check_against(self, hub: Hub) -> None:
        """Raise AnnexError on any mismatch between annex and hub."""
        known = hub.graph.by_key
        for key in self.techs:
            if key not in known:
                raise AnnexError(f"annex lists technology {key} which the hub does not declare")
        for t in hub.technologies:
            if t.kind is TechnologyKind.GENERIC and t.key not in self.techs:
                raise AnnexError(f"annex does not cover technology {t.key}")
        commodities = set(hub.derived.C)
        for key, econ in self.techs.items():
            t = known[key]
            for c in econ.conversion:
                if c not in commodities:
                    raise AnnexError(f"{key}: conversion key {c} is not a commodity of the hub")
            if t.kind is TechnologyKind.GENERIC and not econ.conversion and econ.storage is None:
                raise AnnexError(f"{key}: a generic technology needs at least one conversion entry")
            if t.kind is not TechnologyKind.GENERIC and (econ.capex_annuity or econ.storage or econ.profile):
                raise AnnexError(f"{key}: only generic technologies carry capacity, storage or a profile")
            if econ.storage is not None:
                stored_commodity(t)
            econ.coefficients(t)


def _conversion(raw, where: str) -> dict[str, float | tuple[float, float]]:
    if not isinstance(raw, dict):
        raise AnnexError(f"{where}: conversion must be a table")
    out: dict[str, float | tuple[float, float]] = {}
    for k, v in raw.items():
        cid = Commodity.parse(k).id
        if isinstance(v, list):
            if len(v) != 2 or not all(isinstance(x, (int, float)) for x in v):
                raise AnnexError(f"{where}: conversion pair for {cid} must hold two numbers")
            out[cid] = (float(v[0]), float(v[1]))
        elif isinstance(v, (int, float)) and not isinstance(v, bool):
            out[cid] = float(v)
        else:
            raise AnnexError(f"{where}: conversion for {cid} must be a number")
    return out


_TECH_KEYS = {"capex_annuity", "opex_var", "conversion", "bounds", "storage", "profile"}


def _tech(key: str, raw: dict) -> TechEcon:
    unknown = set(raw) - _TECH_KEYS
    if unknown:
        raise AnnexError(f"{key}: unknown annex field(s) {', '.join(sorted(unknown))}")
    bounds = raw.get("bounds", [0.0, math.inf])
    if not (isinstance(bounds, list) and len(bounds) == 2):
        raise AnnexError(f"{key}: bounds must be [min, max]")
    storage = raw.get("storage")
    try:
        return TechEcon(
            capex_annuity=float(raw.get("capex_annuity", 0.0)),
            opex_var=float(raw.get("opex_var", 0.0)),
            conversion=_conversion(raw.get("conversion", {}), key),
            bounds=(float(bounds[0]), float(bounds[1])),
            storage=None if storage is None else StorageSpec(**storage),
            profile=raw.get("profile"),
        )
    except TypeError as exc:
        raise AnnexError(f"{key}: {exc}") from None


def parse_annex(text: str) -> TechnoEconomics:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise AnnexError(f"annex is not valid TOML: {exc}") from None
    horizon = doc.get("horizon", {})
    techs = {key: _tech(key, raw) for key, raw in sorted(doc.get("tech", {}).items())}
    demands = tuple(
        DemandSpec(d["commodity"], float(d["quantity"]), d.get("target", "per_step")) for d in doc.get("demand", [])
    )
    return TechnoEconomics(
        techs=techs,
        steps=horizon.get("steps"),
        step_hours=float(horizon.get("step_hours", 1.0)),
        storage_boundary=horizon.get("storage_boundary", "cyclic"),
        demands=demands,
    )


def load_annex(path: str | Path) -> TechnoEconomics:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise AnnexError(f"cannot read annex {path}: {exc.strerror}") from None
    return parse_annex(text)
