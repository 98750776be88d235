"""Coherent systems of distinguished subobjects on finite preorders and categories.

A system decides which subobjects of each ambient object are distinguished.
Distinguished monos here are always literal inclusions, so "factors through a
subobject" is decided by image containment.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ambient as amb
from .category import SubCat, full_arrows
from .errors import KindMismatch, NotDistinguishedInput, NotEpi, SizeLimit, StabcatError
from .preord import SubPreord, _bits
from .subobjects import image_sub, preimage_sub

PREORD_KINDS = ("indiscrete", "open", "closed", "saturated")
CAT_KINDS = ("indiscrete", "left-saturated", "right-saturated", "saturated")
KINDS = ("indiscrete", "open", "closed", "saturated", "left-saturated", "right-saturated")

DEFAULT_SIZE_LIMIT = 16


class CoherentSystem:
    """A named choice of distinguished subobjects.

    The six built-in kinds are available through :func:`system`. Passing
    ``exclude`` removes specific subobjects (given as ``(ambient, members)``)
    from the choice, which is how faults are seeded for the verifiers.
    """

    def __init__(self, kind, exclude=(), size_limit=DEFAULT_SIZE_LIMIT, name=None):
        if kind not in KINDS:
            raise KindMismatch(f"unknown system kind {kind!r}")
        self.kind = kind
        self.size_limit = size_limit
        self.name = name or kind
        self._excluded = set()
        for A, members in exclude:
            S = amb.full_on(A, _mask_for(A, members))
            self._excluded.add((A, amb.sub_key(S)))
        self._lattices = {}

    def applies_to(self, A):
        k = amb.kind_of(A)
        return self.kind in (PREORD_KINDS if k == "preord" else CAT_KINDS)

    def check_applicable(self, A):
        if not self.applies_to(A):
            raise KindMismatch(f"system {self.kind!r} does not apply to {amb.kind_of(A)} objects")

    def is_distinguished(self, S):
        A = S.ambient
        self.check_applicable(A)
        if self._excluded and (A, amb.sub_key(S)) in self._excluded:
            return False
        if isinstance(S, SubPreord):
            return _preord_test(self.kind, A, S.mask)
        return _cat_test(self.kind, A, S.obj_mask, S.arr_mask)

    def lattice(self, A):
        lat = self._lattices.get(A)
        if lat is None:
            lat = DistinguishedLattice(A, self, _enumerate(self, A))
            self._lattices[A] = lat
        return lat

    def __repr__(self):
        return f"CoherentSystem({self.name})"


_SYSTEMS = {}


def system(kind):
    """The built-in system of the given kind (a :class:`CoherentSystem` passes through)."""
    if isinstance(kind, CoherentSystem):
        return kind
    sys_ = _SYSTEMS.get(kind)
    if sys_ is None:
        sys_ = _SYSTEMS[kind] = CoherentSystem(kind)
    return sys_


def _mask_for(A, members):
    if isinstance(members, int):
        return members
    if amb.kind_of(A) == "preord":
        return A.mask_of(members)
    return sum(1 << A.obj_index(x) for x in members)


def _preord_test(kind, A, mask):
    if kind == "indiscrete":
        return mask == 0 or mask == A.full_mask
    for i in _bits(mask):
        if kind in ("open", "saturated") and A.down(i) & ~mask:
            return False
        if kind in ("closed", "saturated") and A.up(i) & ~mask:
            return False
    return True


def _cat_test(kind, A, obj_mask, arr_mask):
    if kind == "indiscrete":
        return (obj_mask, arr_mask) in ((0, 0), (A.full_obj_mask, A.full_arr_mask))
    if arr_mask != full_arrows(A, obj_mask):
        return False
    for a in range(len(A.arrows)):
        d_in = obj_mask >> A.dom[a] & 1
        c_in = obj_mask >> A.cod[a] & 1
        if kind in ("left-saturated", "saturated") and c_in and not d_in:
            return False
        if kind in ("right-saturated", "saturated") and d_in and not c_in:
            return False
    return True


def _sort_key(S):
    return tuple(sorted(S.members if isinstance(S, SubPreord) else S.obj_members))


def _enumerate(sys_, A):
    sys_.check_applicable(A)
    n = amb.carrier_size(A)
    if n > sys_.size_limit:
        raise SizeLimit(f"{A.name} has {n} elements; the subobject scan is capped at {sys_.size_limit}")
    found = []
    for mask in range(1 << n):
        S = amb.full_on(A, mask)
        if sys_.is_distinguished(S):
            found.append(S)
    found.sort(key=_sort_key)
    return found


class DistinguishedLattice:
    """The distinguished subobjects of one object, ordered lexicographically by member names."""

    def __init__(self, ambient, sys_, members):
        self.ambient = ambient
        self.system = sys_
        self.members = tuple(members)
        self._index = {amb.sub_key(S): i for i, S in enumerate(self.members)}
        self._join = None
        self._meet = None

    @property
    def kind(self):
        return self.system.kind

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, S):
        return amb.sub_key(S) in self._index

    def index(self, S):
        return self._index.get(amb.sub_key(S))

    @property
    def bottom(self):
        return amb.nothing(self.ambient)

    @property
    def top(self):
        return amb.whole(self.ambient)

    def join_table(self):
        """``table[i][j]`` is the index of the union, or ``None`` when it falls outside."""
        if self._join is None:
            self._join = [[self.index(amb.sub_union(S, T)) for T in self.members] for S in self.members]
        return self._join

    def meet_table(self):
        if self._meet is None:
            self._meet = [[self.index(amb.sub_intersection(S, T)) for T in self.members] for S in self.members]
        return self._meet

    def hasse(self):
        """Covering pairs ``(i, j)`` with ``members[i] < members[j]``."""
        below = {(i, j) for i, S in enumerate(self.members) for j, T in enumerate(self.members)
                 if i != j and S <= T}
        return sorted((i, j) for i, j in below
                      if not any((i, k) in below and (k, j) in below for k in range(len(self.members))))

    def labels(self):
        return [S.label() for S in self.members]

    def __repr__(self):
        return f"DistinguishedLattice({self.ambient.name}, {self.kind}: {', '.join(self.labels())})"


# -- the operations --------------------------------------------------------------

def is_distinguished(S, kind):
    return system(kind).is_distinguished(S)


def enumerate_distinguished(A, kind):
    return system(kind).lattice(A)


def _require(sys_, *subs):
    for S in subs:
        if not sys_.is_distinguished(S):
            raise NotDistinguishedInput(S)


def dist_union(S, T, kind):
    """Union of two distinguished subobjects.

    For categories the object and arrow sets are united and closed under
    composites of consecutive arrows; for the saturated kinds this closure
    must add nothing.
    """
    sys_ = system(kind)
    _require(sys_, S, T)
    U = amb.sub_union(S, T)
    if isinstance(S, SubCat) and sys_.kind != "indiscrete":
        raw = S.arr_mask | T.arr_mask
        if U.arr_mask != raw:
            raise StabcatError(f"union of {S.label()} and {T.label()} needed new composites")
    return U


def dist_intersection(S, T, kind):
    sys_ = system(kind)
    _require(sys_, S, T)
    return amb.sub_intersection(S, T)


def dist_preimage(f, S, kind):
    sys_ = system(kind)
    _require(sys_, S)
    return preimage_sub(f, S)


@dataclass
class EpiVerdict:
    status: str  # "yes", "no" or "unknown"
    witness: object = None

    def __bool__(self):
        return self.status == "yes"


def is_distinguished_epi(f, kind, require_epi=True):
    """Decide whether ``f`` factors through no proper distinguished subobject of its target.

    With ``require_epi`` the morphism must be a certified epimorphism
    (:func:`stabcat.ambient.is_epi`); an uncertifiable functor gives "unknown".
    """
    sys_ = system(kind)
    if require_epi:
        epi = amb.is_epi(f)
        if epi is False:
            raise NotEpi(f"{f!r} is not an epimorphism")
        if epi is None:
            return EpiVerdict("unknown")
    img = image_sub(f)
    for T in sys_.lattice(f.target):
        if T.is_whole():
            continue
        if _contains(T, img):
            return EpiVerdict("no", T)
    return EpiVerdict("yes")


def _contains(T, img):
    if isinstance(T, SubPreord):
        return img.mask & ~T.mask == 0
    return img.obj_mask & ~T.obj_mask == 0 and img.arr_mask & ~T.arr_mask == 0


def is_complemented(S):
    """Whether a subobject has a complement: a subobject ``T`` with ``S n T = 0`` and ``S u T`` everything."""
    A = S.ambient
    if isinstance(S, SubPreord):
        rest = A.full_mask & ~S.mask
        return all(not (A.down(i) & rest) and not (A.up(i) & rest) for i in _bits(S.mask))
    om = A.full_obj_mask & ~S.obj_mask
    am = A.full_arr_mask & ~S.arr_mask
    try:
        SubCat(A, om, am)
    except Exception:
        return False
    return True
