"""Elementwise constructions on subobjects: inverse images and the union-pushout test."""

from __future__ import annotations

from dataclasses import dataclass

from . import ambient as amb
from .category import Functor, SubCat
from .errors import KindMismatch
from .preord import MonotoneMap, SubPreord
from .report import witness_map


def preimage_sub(f, S):
    """Inverse image of a subobject of ``f.target`` along ``f``."""
    if S.ambient != f.target:
        raise KindMismatch("subobject does not live in the target of the morphism")
    if isinstance(f, MonotoneMap) and isinstance(S, SubPreord):
        return SubPreord(f.source, f.preimage_mask(S.mask))
    if isinstance(f, Functor) and isinstance(S, SubCat):
        om, am = f.preimage_masks(S.obj_mask, S.arr_mask)
        return SubCat(f.source, om, am)
    raise KindMismatch("morphism and subobject are of different kinds")


def image_sub(f, S=None):
    """Image of a subobject of the source (a subobject of the target for preorders)."""
    if isinstance(f, MonotoneMap):
        return SubPreord(f.target, f.image_mask(None if S is None else S.mask))
    om, am = f.image_masks(None if S is None else S.obj_mask, None if S is None else S.arr_mask)
    return SubCat(f.target, om, am, check=False)


@dataclass
class PushoutCheck:
    holds: bool
    pairs_checked: int
    witness: dict | None = None


def pushout_holds(S, T, battery, union=None):
    """Test whether the square ``S n T -> S, T -> S u T`` is a pushout against ``battery``.

    For every test object ``X`` and every pair ``f: S -> X``, ``g: T -> X``
    agreeing on ``S n T`` there must be exactly one ``h: S u T -> X`` with
    ``h|S = f`` and ``h|T = g``. ``union`` defaults to the carrier-level union.
    """
    U = union if union is not None else amb.sub_union(S, T)
    I = amb.sub_intersection(S, T)
    S_in_U, T_in_U = S.sub_of(U), T.sub_of(U)
    I_in_S, I_in_T = I.sub_of(S), I.sub_of(T)
    Uo, So, To = U.as_object(), S.as_object(), T.as_object()
    checked = 0
    for X in battery:
        if amb.kind_of(X) != amb.kind_of(Uo):
            continue
        mediators = {}
        for h in amb.homs(Uo, X):
            key = (h.restrict(S_in_U), h.restrict(T_in_U))
            mediators.setdefault(key, []).append(h)
        by_overlap = {}
        for g in amb.homs(To, X):
            by_overlap.setdefault(g.restrict(I_in_T), []).append(g)
        for f in amb.homs(So, X):
            for g in by_overlap.get(f.restrict(I_in_S), ()):
                checked += 1
                found = mediators.get((f, g), [])
                if len(found) != 1:
                    return PushoutCheck(False, checked, {
                        "test_object": X.name,
                        "S": S.label(), "T": T.label(),
                        "f": witness_map(f), "g": witness_map(g),
                        "mediators": len(found),
                    })
    return PushoutCheck(True, checked)
