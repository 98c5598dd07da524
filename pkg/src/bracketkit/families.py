"""Mnet, container and bracket families over a base set system.

All three are plain subset families with parameters; the optional witness
maps (range index -> family index/indices) are construction bookkeeping that
verifiers may use as hints but always re-check.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .rationals import format_fraction, parse_fraction
from .setsystem import SetSystem, canonical_key


def _canonical_with_witness(n, sets, witness):
    """Canonically sort + dedup sets, remapping a witness dict of old indices."""
    order = sorted(set(sets), key=lambda m: canonical_key(m, n))
    index = {mask: i for i, mask in enumerate(order)}
    remapped = None
    if witness is not None:
        remapped = {}
        for key, value in witness.items():
            if isinstance(value, tuple):
                remapped[key] = tuple(index[sets[v]] for v in value)
            else:
                remapped[key] = index[sets[value]]
    return tuple(order), remapped


@dataclass(frozen=True)
class MnetFamily:
    """Pieces such that every range of size >= eps*n contains a piece of size
    >= lam * |range|."""

    base: SetSystem
    pieces: tuple
    lam: Fraction
    eps: Fraction
    witness: object = None


@dataclass(frozen=True)
class ContainerFamily:
    """Covers such that every range F fits inside some cover C with
    |C \\ F| <= eps * n."""

    base: SetSystem
    covers: tuple
    eps: Fraction
    witness: object = None


@dataclass(frozen=True)
class BracketFamily:
    """Sets providing, per range F, a pair B- <= F <= B+ with
    |B+ \\ B-| <= eps * n."""

    base: SetSystem
    sets: tuple
    eps: Fraction
    pairing: object = None


def make_mnet(base, pieces, lam, eps, witness=None):
    pieces = list(pieces)
    ordered, remapped = _canonical_with_witness(base.n, pieces, witness)
    return MnetFamily(base, ordered, Fraction(lam), Fraction(eps), remapped)


def make_container(base, covers, eps, witness=None):
    covers = list(covers)
    ordered, remapped = _canonical_with_witness(base.n, covers, witness)
    return ContainerFamily(base, ordered, Fraction(eps), remapped)


def make_bracket(base, sets, eps, pairing=None):
    sets = list(sets)
    ordered, remapped = _canonical_with_witness(base.n, sets, pairing)
    return BracketFamily(base, ordered, Fraction(eps), remapped)


def family_to_json(family):
    from .bitsets import indices_from_mask

    if isinstance(family, MnetFamily):
        payload = {
            "kind": "mnet",
            "params": {
                "lambda": format_fraction(family.lam),
                "epsilon": format_fraction(family.eps),
            },
            "sets": [list(indices_from_mask(m)) for m in family.pieces],
        }
    elif isinstance(family, ContainerFamily):
        payload = {
            "kind": "container",
            "params": {"epsilon": format_fraction(family.eps)},
            "sets": [list(indices_from_mask(m)) for m in family.covers],
        }
    elif isinstance(family, BracketFamily):
        payload = {
            "kind": "bracket",
            "params": {"epsilon": format_fraction(family.eps)},
            "sets": [list(indices_from_mask(m)) for m in family.sets],
        }
        if family.pairing is not None:
            payload["pairing"] = {str(k): list(v) for k, v in family.pairing.items()}
    else:
        raise InputError(f"unknown family type {type(family).__name__}")
    return json.dumps(payload)


def family_from_json(text, base):
    from .bitsets import mask_from_indices

    data = json.loads(text)
    sets = [mask_from_indices(s) for s in data["sets"]]
    kind = data.get("kind")
    params = data.get("params", {})
    if kind == "mnet":
        return make_mnet(
            base,
            sets,
            parse_fraction(params["lambda"], name="lambda"),
            parse_fraction(params["epsilon"], name="epsilon"),
        )
    if kind == "container":
        return make_container(base, sets, parse_fraction(params["epsilon"], name="epsilon"))
    if kind == "bracket":
        pairing = None
        if "pairing" in data and data["pairing"] is not None:
            pairing = {int(k): tuple(v) for k, v in data["pairing"].items()}
            ordered, pairing = _canonical_with_witness(base.n, sets, pairing)
            return BracketFamily(base, ordered, parse_fraction(params["epsilon"], name="epsilon"), pairing)
        return make_bracket(base, sets, parse_fraction(params["epsilon"], name="epsilon"))
    raise InputError(f"unknown family kind {kind!r}")
