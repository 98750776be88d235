"""Uniform helpers over the two ambient categories (finite preorders, finite categories)."""

from __future__ import annotations

from .category import (
    FinCat,
    Functor,
    SubCat,
    composition_closure,
    empty_cat,
    full_arrows,
    functors,
    identity_functor,
    point_cat,
)
from .errors import KindMismatch
from .preord import FinPreord, MonotoneMap, SubPreord, empty, identity_map, monotone_maps, point


def kind_of(A):
    if isinstance(A, FinPreord):
        return "preord"
    if isinstance(A, FinCat):
        return "cat"
    raise KindMismatch(f"not an ambient object: {A!r}")


def homs(X, Y):
    """All morphisms ``X -> Y`` of the ambient category."""
    if isinstance(X, FinPreord) and isinstance(Y, FinPreord):
        return monotone_maps(X, Y)
    if isinstance(X, FinCat) and isinstance(Y, FinCat):
        return functors(X, Y)
    raise KindMismatch("homs between objects of different kinds")


def identity(A):
    return identity_map(A) if kind_of(A) == "preord" else identity_functor(A)


def compose(g, f):
    """``g o f``."""
    if f.target != g.source:
        raise ValueError(f"cannot compose {g!r} after {f!r}")
    return g.after(f)


def whole(A):
    if kind_of(A) == "preord":
        return SubPreord(A, A.full_mask)
    return SubCat(A, A.full_obj_mask, A.full_arr_mask, check=False)


def nothing(A):
    if kind_of(A) == "preord":
        return SubPreord(A, 0)
    return SubCat(A, 0, 0, check=False)


def initial_object(kind):
    return empty() if kind == "preord" else empty_cat()


def terminal_object(kind):
    return point() if kind == "preord" else point_cat()


def initial_map(A):
    """The unique morphism from the empty object into ``A``."""
    if kind_of(A) == "preord":
        return MonotoneMap(empty(), A, (), check=False)
    return Functor(empty_cat(), A, (), (), check=False)


def terminal_map(A, P=None):
    P = P or terminal_object(kind_of(A))
    if kind_of(A) == "preord":
        return MonotoneMap(A, P, (0,) * len(A), check=False)
    return Functor(A, P, (0,) * len(A.objects), (0,) * len(A.arrows), check=False)


def sub_union(S, T):
    """Carrier-level union (for categories: object and arrow union closed under composition)."""
    if isinstance(S, SubPreord):
        return S | T
    A = S.ambient
    arr = composition_closure(A, S.arr_mask | T.arr_mask)
    return SubCat(A, S.obj_mask | T.obj_mask, arr, check=False)


def sub_intersection(S, T):
    if isinstance(S, SubPreord):
        return S & T
    return SubCat(S.ambient, S.obj_mask & T.obj_mask, S.arr_mask & T.arr_mask, check=False)


def sub_key(S):
    return S.mask if isinstance(S, SubPreord) else (S.obj_mask, S.arr_mask)


def sub_size(S):
    return len(S)


def full_on(A, obj_mask):
    """Induced subobject on a set of elements/objects (full subcategory for categories)."""
    if kind_of(A) == "preord":
        return SubPreord(A, obj_mask)
    return SubCat(A, obj_mask, full_arrows(A, obj_mask), check=False)


def carrier_size(A):
    return len(A.carrier) if kind_of(A) == "preord" else len(A.objects)


def restrict(f, S):
    """``f`` restricted to the subobject ``S`` of its source."""
    return f.restrict(S)


def image_generates(F):
    """Whether the arrows in the image of a functor generate its target under composition."""
    om, am = F.image_masks()
    Y = F.target
    return om == Y.full_obj_mask and composition_closure(Y, am) == Y.full_arr_mask


def is_epi(f):
    """Sound epimorphism test: ``True``, ``False`` or ``None`` (unknown).

    Monotone maps are epi exactly when surjective. A functor is certified epi
    when it is surjective on objects and its image generates the target;
    a functor missing an object of the target is not epi; anything else is
    reported unknown.
    """
    if isinstance(f, MonotoneMap):
        return f.is_surjective()
    om, _ = f.image_masks()
    if om != f.target.full_obj_mask:
        return False
    return True if image_generates(f) else None


def label(S):
    return S.label()
