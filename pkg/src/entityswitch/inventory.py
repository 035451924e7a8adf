"""Per-country entity inventories: person names with naming rules, locations
with a granularity, organizations with a sub-category.

The file format is JSON: a top-level list of country records. See the README
for a bit-exact example and ``exemplar_inventories()`` for built-in samples.
"""
from __future__ import annotations

import json
import logging
import os
import random
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

from .errors import InventoryError, SamplingError

log = logging.getLogger(__name__)


class NamingRule(str, Enum):
    STANDARD = "standard"
    SINGLE_OR_MULTIPLE_FIRST = "single_or_multiple_first"
    FEMALE_PLUS_GUARDIAN = "female_plus_guardian"


class Granularity(str, Enum):
    VILLAGE = "village"
    CITY = "city"
    PROVINCE = "province"
    ANY = "any"


class OrgSubcategory(str, Enum):
    AIRLINE = "airline"
    BANK = "bank"
    CORPORATION = "corporation"
    NEWSPAPER = "newspaper"
    POLITICAL_PARTY = "political_party"
    RESTAURANT = "restaurant"
    SPORTS_TEAM = "sports_team"
    SPORTS_UNION = "sports_union"
    UNIVERSITY = "university"
    OTHERS = "others"


@dataclass(frozen=True)
class FirstName:
    surface: str
    #: Marks names that compose with a guardian called-name under the
    #: female_plus_guardian rule.
    female: bool = False


@dataclass(frozen=True)
class LocEntry:
    surface: str
    granularity: Granularity


@dataclass(frozen=True)
class OrgEntry:
    surface: str
    subcategory: OrgSubcategory


@dataclass(frozen=True)
class CountryInventory:
    country_id: str
    rule: NamingRule
    first_names: tuple[FirstName, ...]
    family_names: tuple[str, ...]
    locs: tuple[LocEntry, ...]
    orgs: tuple[OrgEntry, ...]
    #: single_or_multiple_first only: chance that a name is the first name alone.
    single_name_probability: float = 0.5


def load_inventories(source: str | os.PathLike) -> list[CountryInventory]:
    """Load and validate inventories from a JSON file path or JSON text.

    A string starting with ``[`` is treated as JSON text, anything else as a
    path. Hard schema violations raise :class:`InventoryError` naming the
    offending record; duplicate surfaces within one entry type are logged as
    warnings. :func:`inventory_warnings` additionally flags name counts that
    differ from the protocol's 20 first / 10 family names.
    """
    if isinstance(source, str) and source.lstrip().startswith("["):
        text = source
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InventoryError(f"invalid JSON: {exc}") from None
    if not isinstance(data, list):
        raise InventoryError("inventory file must be a top-level list of countries")
    if not data:
        raise InventoryError("inventory file declares no countries")

    inventories = [_parse_country(record, idx) for idx, record in enumerate(data)]
    seen: set[str] = set()
    for inv in inventories:
        if inv.country_id in seen:
            raise InventoryError(f"duplicate country id {inv.country_id!r}")
        seen.add(inv.country_id)
    for warning in _duplicate_warnings(inventories):
        log.warning("%s", warning)
    return inventories


def _parse_country(record: object, idx: int) -> CountryInventory:
    where = f"country record #{idx}"
    if not isinstance(record, dict):
        raise InventoryError(f"{where}: expected an object")
    country_id = record.get("id")
    if not isinstance(country_id, str) or not country_id.strip():
        raise InventoryError(f"{where}: missing or empty 'id'")
    where = f"country {country_id!r}"

    rule = _enum_field(NamingRule, record.get("rule", "standard"), f"{where}: rule")

    first_names = []
    for item in _list_field(record, "first_names", where):
        if isinstance(item, str):
            item = {"surface": item}
        if not isinstance(item, dict):
            raise InventoryError(f"{where}: first name entries must be strings or objects")
        surface = _surface(item.get("surface"), f"{where}: first name")
        first_names.append(FirstName(surface, bool(item.get("female", False))))

    family_names = []
    for item in _list_field(record, "family_names", where):
        family_names.append(_surface(item, f"{where}: family name"))

    locs = []
    for item in _list_field(record, "locs", where):
        if not isinstance(item, dict):
            raise InventoryError(f"{where}: loc entries must be objects")
        surface = _surface(item.get("surface"), f"{where}: loc")
        gran = _enum_field(Granularity, item.get("granularity"), f"{where}: loc {surface!r} granularity")
        locs.append(LocEntry(surface, gran))

    orgs = []
    for item in _list_field(record, "orgs", where):
        if not isinstance(item, dict):
            raise InventoryError(f"{where}: org entries must be objects")
        surface = _surface(item.get("surface"), f"{where}: org")
        sub = _enum_field(OrgSubcategory, item.get("subcategory"), f"{where}: org {surface!r} subcategory")
        if sub is OrgSubcategory.OTHERS:
            raise InventoryError(
                f"{where}: org {surface!r}: subcategory 'others' marks entities that are "
                "never replaced and cannot appear in an inventory"
            )
        orgs.append(OrgEntry(surface, sub))

    probability = record.get("single_name_probability", 0.5)
    if not isinstance(probability, (int, float)) or not 0.0 <= float(probability) <= 1.0:
        raise InventoryError(f"{where}: single_name_probability must be in [0, 1]")

    return CountryInventory(
        country_id=country_id,
        rule=rule,
        first_names=tuple(first_names),
        family_names=tuple(family_names),
        locs=tuple(locs),
        orgs=tuple(orgs),
        single_name_probability=float(probability),
    )


def _list_field(record: dict, key: str, where: str) -> list:
    value = record.get(key, [])
    if not isinstance(value, list):
        raise InventoryError(f"{where}: {key} must be a list")
    return value


def _surface(value: object, where: str) -> str:
    if not isinstance(value, str) or not value.strip():
        raise InventoryError(f"{where}: surface must be a non-empty string")
    return value.strip()


def _enum_field(enum_cls, value: object, where: str):
    try:
        return enum_cls(str(value).strip().lower().replace("-", "_").replace(" ", "_"))
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise InventoryError(f"{where}: expected one of {allowed}, got {value!r}") from None


def _duplicate_warnings(inventories: list[CountryInventory]) -> list[str]:
    warnings: list[str] = []
    for inv in inventories:
        for kind, surfaces in (
            ("first name", [f.surface for f in inv.first_names]),
            ("family name", list(inv.family_names)),
            ("loc", [e.surface for e in inv.locs]),
            ("org", [e.surface for e in inv.orgs]),
        ):
            seen: set[str] = set()
            for surface in surfaces:
                key = surface.casefold()
                if key in seen:
                    warnings.append(f"{inv.country_id}: duplicate {kind} {surface!r}")
                seen.add(key)
    return warnings


def inventory_warnings(inventories: list[CountryInventory]) -> list[str]:
    """Soft validation findings: off-protocol name counts plus duplicates."""
    warnings: list[str] = []
    for inv in inventories:
        cid = inv.country_id
        if len(inv.first_names) != 20:
            warnings.append(f"{cid}: {len(inv.first_names)} first names (protocol uses 20)")
        if len(inv.family_names) != 10:
            warnings.append(f"{cid}: {len(inv.family_names)} family names (protocol uses 10)")
    warnings.extend(_duplicate_warnings(inventories))
    return warnings


def _compose_full_name(first: FirstName, inv: CountryInventory, rng: random.Random) -> str:
    if inv.rule is NamingRule.SINGLE_OR_MULTIPLE_FIRST:
        if not inv.family_names or rng.random() < inv.single_name_probability:
            return first.surface
        return f"{first.surface} {rng.choice(inv.family_names)}"
    # standard and female_plus_guardian both fill the family slot from
    # family_names; for female-flagged names that slot is the guardian's
    # called name.
    if not inv.family_names:
        raise InventoryError(
            f"country {inv.country_id!r}: rule {inv.rule.value} requires family names"
        )
    return f"{first.surface} {rng.choice(inv.family_names)}"


def construct_full_names(inv: CountryInventory, seed: int) -> list[str]:
    """One full name per first name, pairing family names with a seeded draw.

    Deterministic for a fixed (inventory, seed).
    """
    if not inv.first_names:
        raise InventoryError(f"country {inv.country_id!r} has no first names")
    rng = random.Random(seed)
    return [_compose_full_name(first, inv, rng) for first in inv.first_names]


def sample_full_name(inv: CountryInventory, rng: random.Random) -> str:
    """Draw one full name: uniform first name, then the country's rule."""
    if not inv.first_names:
        raise InventoryError(f"country {inv.country_id!r} has no first names")
    return _compose_full_name(rng.choice(inv.first_names), inv, rng)


def sample_entity(
    inv: CountryInventory,
    etype: str,
    constraint: Granularity | OrgSubcategory,
    rng: random.Random,
) -> str:
    """Uniform draw over inventory entries of ``etype`` satisfying ``constraint``.

    For LOC the constraint is a granularity (``Granularity.ANY`` admits every
    entry); for ORG it is a sub-category. Advances ``rng``.
    """
    if etype == "LOC":
        if not isinstance(constraint, Granularity):
            raise ValueError(f"LOC constraint must be a Granularity, got {constraint!r}")
        pool = [
            e.surface
            for e in inv.locs
            if constraint is Granularity.ANY or e.granularity is constraint
        ]
    elif etype == "ORG":
        if not isinstance(constraint, OrgSubcategory):
            raise ValueError(f"ORG constraint must be an OrgSubcategory, got {constraint!r}")
        if constraint is OrgSubcategory.OTHERS:
            raise SamplingError("subcategory 'others' is never replaced; nothing to sample")
        pool = [e.surface for e in inv.orgs if e.subcategory is constraint]
    else:
        raise ValueError(f"sample_entity handles LOC and ORG, got {etype!r}")
    if not pool:
        raise SamplingError(
            f"country {inv.country_id!r} has no {etype} entry for constraint "
            f"{constraint.value!r}"
        )
    return rng.choice(pool)


def exemplar_inventories() -> list[CountryInventory]:
    """Built-in small inventories (US, US-difficult, India, Vietnam,
    Indonesia, Pakistan) covering every naming rule."""
    text = resources.files("entityswitch").joinpath("data/exemplar_inventories.json").read_text(
        encoding="utf-8"
    )
    return load_inventories(text)
