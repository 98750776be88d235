"""Finite preorders, monotone maps and induced sub-preorders.

A preorder is stored as a full boolean matrix over an ordered carrier. Subsets
of a carrier are handled internally as integer bitmasks (bit ``i`` is the
``i``-th carrier element); the public surface speaks in element names.
"""

from __future__ import annotations

import numpy as np

from .errors import DuplicateName, NotMonotone, NotReflexive, NotTransitive, UnknownName


def _bits(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def reflexive_transitive_closure(rel):
    """Close a square boolean matrix under reflexivity and transitivity by squaring."""
    r = np.array(rel, dtype=bool)
    n = r.shape[0]
    r = r | np.eye(n, dtype=bool)
    while True:
        step = r | ((r.astype(np.int64) @ r.astype(np.int64)) > 0)
        if np.array_equal(step, r):
            return r
        r = step


class FinPreord:
    """A finite preordered set ``(carrier, leq)``; ``leq[i, j]`` means ``carrier[i] <= carrier[j]``.

    Equality and hashing look at the carrier and the relation only; ``name``
    is a display label.
    """

    __slots__ = ("carrier", "name", "_leq", "_index", "_down", "_up", "_key", "_hash", "_cache")

    def __init__(self, carrier, leq, name=None):
        carrier = tuple(carrier)
        index = {}
        for i, x in enumerate(carrier):
            if not isinstance(x, str) or not x:
                raise ValueError(f"element names must be non-empty strings, got {x!r}")
            if x in index:
                raise DuplicateName(x)
            index[x] = i
        m = np.array(leq, dtype=bool).reshape(len(carrier), len(carrier))
        n = len(carrier)
        for i in range(n):
            if not m[i, i]:
                raise NotReflexive(carrier[i], carrier[i])
        if n:
            two_step = (m.astype(np.int64) @ m.astype(np.int64)) > 0
            bad = np.argwhere(two_step & ~m)
            if len(bad):
                i, j = bad[0]
                raise NotTransitive(carrier[i], carrier[j])
        m.setflags(write=False)
        self.carrier = carrier
        self.name = name or "P"
        self._leq = m
        self._index = index
        self._down = tuple(sum(1 << i for i in range(n) if m[i, j]) for j in range(n))
        self._up = tuple(sum(1 << j for j in range(n) if m[i, j]) for i in range(n))
        self._key = (carrier, m.tobytes())
        self._hash = hash(self._key)
        self._cache = {}

    # -- basic access -------------------------------------------------------
    @property
    def leq(self):
        return self._leq

    @property
    def n(self):
        return len(self.carrier)

    def __len__(self):
        return len(self.carrier)

    def index(self, x):
        try:
            return self._index[x]
        except KeyError:
            raise UnknownName(x, self.name) from None

    def le(self, a, b):
        return bool(self._leq[self.index(a), self.index(b)])

    def down(self, i):
        """Bitmask of the elements below element ``i``."""
        return self._down[i]

    def up(self, i):
        return self._up[i]

    @property
    def full_mask(self):
        return (1 << len(self.carrier)) - 1

    def mask_of(self, names):
        m = 0
        for x in names:
            m |= 1 << self.index(x)
        return m

    def names_of(self, mask):
        return tuple(self.carrier[i] for i in _bits(mask))

    def pairs(self):
        """All pairs ``(a, b)`` with ``a <= b``, in carrier order."""
        c = self.carrier
        return [(c[i], c[j]) for i, j in np.argwhere(self._leq)]

    # -- derived preorders --------------------------------------------------
    def opposite(self, name=None):
        return FinPreord(self.carrier, self._leq.T, name or f"{self.name}^op")

    def induced(self, mask, name=None):
        idx = list(_bits(mask))
        carrier = [self.carrier[i] for i in idx]
        return FinPreord(carrier, self._leq[np.ix_(idx, idx)], name)

    def is_symmetric(self):
        return bool(np.array_equal(self._leq, self._leq.T))

    def is_antisymmetric(self):
        both = self._leq & self._leq.T
        return bool(np.array_equal(both, np.eye(len(self.carrier), dtype=bool)))

    def describe(self):
        return {"kind": "preord", "name": self.name, "elements": list(self.carrier),
                "leq": [list(p) for p in self.pairs() if p[0] != p[1]]}

    # -- protocol -----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FinPreord) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        strict = [f"{a}<={b}" for a, b in self.pairs() if a != b]
        return f"FinPreord({self.name}: {{{','.join(self.carrier)}}}; {', '.join(strict)})"


# -- constructors ---------------------------------------------------------------

def from_pairs(elements, pairs=(), name=None):
    """Preorder generated by ``pairs`` (reflexive-transitive closure)."""
    elements = list(elements)
    index = {}
    for i, x in enumerate(elements):
        if x in index:
            raise DuplicateName(x)
        index[x] = i
    m = np.zeros((len(elements), len(elements)), dtype=bool)
    for a, b in pairs:
        if a not in index:
            raise UnknownName(a)
        if b not in index:
            raise UnknownName(b)
        m[index[a], index[b]] = True
    return FinPreord(elements, reflexive_transitive_closure(m), name)


def validate_preord(candidate, strict=False):
    """Build a :class:`FinPreord` from a raw description.

    ``candidate`` is a mapping with ``elements`` and ``leq`` (list of pairs),
    optionally ``name``. Without ``strict`` the reflexive-transitive closure is
    returned; with ``strict`` the relation must already be a preorder.
    """
    elements = list(candidate["elements"])
    pairs = [tuple(p) for p in candidate.get("leq", [])]
    name = candidate.get("name")
    if not strict:
        return from_pairs(elements, pairs, name)
    index = {}
    for i, x in enumerate(elements):
        if x in index:
            raise DuplicateName(x)
        index[x] = i
    m = np.zeros((len(elements), len(elements)), dtype=bool)
    for a, b in pairs:
        for x in (a, b):
            if x not in index:
                raise UnknownName(x)
        m[index[a], index[b]] = True
    return FinPreord(elements, m, name)


def empty(name="0"):
    return FinPreord((), np.zeros((0, 0), dtype=bool), name)


def point(x="*", name="1"):
    return FinPreord((x,), [[True]], name)


def discrete(*names, name=None):
    return FinPreord(names, np.eye(len(names), dtype=bool), name or "D" + str(len(names)))


def chain(*names, name=None):
    n = len(names)
    return FinPreord(names, np.triu(np.ones((n, n), dtype=bool)), name or "C" + str(n))


def codiscrete(*names, name=None):
    n = len(names)
    return FinPreord(names, np.ones((n, n), dtype=bool), name or "I" + str(n))


def disjoint_union(*parts, name=None):
    carrier = [x for p in parts for x in p.carrier]
    n = len(carrier)
    m = np.zeros((n, n), dtype=bool)
    at = 0
    for p in parts:
        k = len(p.carrier)
        m[at:at + k, at:at + k] = p.leq
        at += k
    return FinPreord(carrier, m, name or "+".join(p.name for p in parts))


def relabel(P, mapping, name=None):
    return FinPreord([mapping[x] for x in P.carrier], P.leq, name or P.name)


# -- maps -------------------------------------------------------------------------

class MonotoneMap:
    """A monotone map, stored as target indices aligned with the source carrier."""

    __slots__ = ("source", "target", "images", "_hash")

    def __init__(self, source, target, assign, check=True):
        if isinstance(assign, dict):
            images = tuple(target.index(assign[x]) if x in assign else _missing(x) for x in source.carrier)
        else:
            images = tuple(assign)
        self.source = source
        self.target = target
        self.images = images
        self._hash = None
        if check:
            tl = target.leq
            for i, j in np.argwhere(source.leq):
                if not tl[images[i], images[j]]:
                    raise NotMonotone(source.carrier[i], source.carrier[j])

    @property
    def assign(self):
        t = self.target.carrier
        return {x: t[j] for x, j in zip(self.source.carrier, self.images)}

    def __call__(self, x):
        return self.target.carrier[self.images[self.source.index(x)]]

    def after(self, f):
        """``self o f``."""
        return MonotoneMap(f.source, self.target, tuple(self.images[j] for j in f.images), check=False)

    def image_mask(self, mask=None):
        m = 0
        for i, j in enumerate(self.images):
            if mask is None or mask >> i & 1:
                m |= 1 << j
        return m

    def preimage_mask(self, mask):
        m = 0
        for i, j in enumerate(self.images):
            if mask >> j & 1:
                m |= 1 << i
        return m

    def is_surjective(self):
        return self.image_mask() == self.target.full_mask

    def is_injective(self):
        return len(set(self.images)) == len(self.images)

    def restrict(self, sub):
        """Restriction to a sub-preorder of the source, as a map out of ``sub.as_object()``."""
        return MonotoneMap(sub.as_object(), self.target,
                           tuple(self.images[i] for i in _bits(sub.mask)), check=False)

    def corestrict(self, sub):
        """The same map viewed as landing in ``sub`` (which must contain the image)."""
        obj = sub.as_object()
        t = self.target.carrier
        return MonotoneMap(self.source, obj, tuple(obj.index(t[j]) for j in self.images), check=False)

    def table(self):
        return [[x, y] for x, y in self.assign.items()]

    def __eq__(self, other):
        return (isinstance(other, MonotoneMap) and self.images == other.images
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.source, self.target, self.images))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{x}->{y}" for x, y in self.assign.items())
        return f"<{self.source.name}->{self.target.name}: {body}>"


def _missing(x):
    raise UnknownName(x, "assignment")


def identity_map(P):
    return MonotoneMap(P, P, tuple(range(len(P))), check=False)


_MAP_CACHE = {}


def monotone_maps(X, Y):
    """All monotone maps ``X -> Y`` in lexicographic order of image tables."""
    key = (X, Y)
    tables = _MAP_CACHE.get(key)
    if tables is None:
        tables = _enumerate_monotone(X, Y)
        _MAP_CACHE[key] = tables
    return [MonotoneMap(X, Y, t, check=False) for t in tables]


def _enumerate_monotone(X, Y):
    n, m = len(X), len(Y)
    xl, yl = X.leq, Y.leq
    out = []
    img = [0] * n

    def extend(i):
        if i == n:
            out.append(tuple(img))
            return
        for j in range(m):
            ok = True
            for k in range(i):
                if xl[k, i] and not yl[img[k], j]:
                    ok = False
                    break
                if xl[i, k] and not yl[j, img[k]]:
                    ok = False
                    break
            if ok:
                img[i] = j
                extend(i + 1)

    extend(0)
    return out


# -- sub-preorders ------------------------------------------------------------------

class SubPreord:
    """A subset of a preorder's carrier, carrying the induced order."""

    __slots__ = ("ambient", "mask")

    def __init__(self, ambient, members=0):
        self.ambient = ambient
        if isinstance(members, int):
            if members < 0 or members > ambient.full_mask:
                raise ValueError("mask out of range")
            self.mask = members
        else:
            self.mask = ambient.mask_of(members)

    @property
    def members(self):
        return frozenset(self.ambient.names_of(self.mask))

    @property
    def elements(self):
        return self.ambient.names_of(self.mask)

    def __len__(self):
        return bin(self.mask).count("1")

    def is_empty(self):
        return self.mask == 0

    def is_whole(self):
        return self.mask == self.ambient.full_mask

    def label(self):
        return "{" + ",".join(self.elements) + "}"

    def as_object(self):
        """The induced preorder on the members (the ambient itself for the whole subobject)."""
        if self.is_whole():
            return self.ambient
        cache = self.ambient._cache
        key = ("sub", self.mask)
        obj = cache.get(key)
        if obj is None:
            obj = self.ambient.induced(self.mask, f"{self.ambient.name}|{self.label()}")
            cache[key] = obj
        return obj

    def inclusion(self):
        return MonotoneMap(self.as_object(), self.ambient, tuple(_bits(self.mask)), check=False)

    def sub_of(self, other):
        """This subobject seen as a subobject of ``other.as_object()`` (requires ``self <= other``)."""
        if not self <= other:
            raise ValueError(f"{self.label()} is not contained in {other.label()}")
        obj = other.as_object()
        return SubPreord(obj, obj.mask_of(self.elements))

    def __or__(self, other):
        return SubPreord(self.ambient, self.mask | other.mask)

    def __and__(self, other):
        return SubPreord(self.ambient, self.mask & other.mask)

    def __le__(self, other):
        return self.mask & ~other.mask == 0

    def __eq__(self, other):
        return isinstance(other, SubPreord) and self.mask == other.mask and self.ambient == other.ambient

    def __hash__(self):
        return hash((self.ambient, self.mask))

    def __repr__(self):
        return f"SubPreord({self.ambient.name}, {self.label()})"
