"""Finite categories, functors and subcategories.

Objects and arrows are named; internally they are addressed by position.
Composition is a table on composable index pairs ``(g, f) -> g o f``.
"""

from __future__ import annotations

from .errors import (
    AssociativityViolation,
    DanglingEndpoint,
    DuplicateName,
    InputError,
    MissingComposite,
    NotAFunctor,
    UnitLawViolation,
    UnknownName,
)
from .preord import _bits


class FinCat:
    __slots__ = ("objects", "arrows", "dom", "cod", "ident", "comp", "name",
                 "_oindex", "_aindex", "_key", "_hash", "_cache", "_inverse", "_homs")

    def __init__(self, objects, arrows, dom, cod, ident, comp, name=None):
        self.objects = tuple(objects)
        self.arrows = tuple(arrows)
        self.dom = tuple(dom)
        self.cod = tuple(cod)
        self.ident = tuple(ident)
        self.comp = dict(comp)
        self.name = name or "C"
        self._oindex = {x: i for i, x in enumerate(self.objects)}
        self._aindex = {a: i for i, a in enumerate(self.arrows)}
        self._key = (self.objects, self.arrows, self.dom, self.cod, self.ident,
                     tuple(sorted(self.comp.items())))
        self._hash = hash(self._key)
        self._cache = {}
        self._inverse = None
        homs = {}
        for a in range(len(self.arrows)):
            homs.setdefault((self.dom[a], self.cod[a]), []).append(a)
        self._homs = {k: tuple(v) for k, v in homs.items()}

    # -- lookup -------------------------------------------------------------
    def obj_index(self, x):
        try:
            return self._oindex[x]
        except KeyError:
            raise UnknownName(x, self.name) from None

    def arr_index(self, a):
        try:
            return self._aindex[a]
        except KeyError:
            raise UnknownName(a, self.name) from None

    @property
    def full_obj_mask(self):
        return (1 << len(self.objects)) - 1

    @property
    def full_arr_mask(self):
        return (1 << len(self.arrows)) - 1

    def hom(self, x, y):
        """Arrow indices from object index ``x`` to ``y``."""
        return self._homs.get((x, y), ())

    def compose(self, g, f):
        """Index of ``g o f``."""
        return self.comp[(g, f)]

    def compose_names(self, g, f):
        return self.arrows[self.comp[(self.arr_index(g), self.arr_index(f))]]

    def is_identity(self, a):
        return self.ident[self.dom[a]] == a

    def inverse(self, a):
        """Index of the inverse of arrow ``a``, or ``None``."""
        if self._inverse is None:
            inv = []
            for f in range(len(self.arrows)):
                x, y = self.dom[f], self.cod[f]
                found = None
                for g in self.hom(y, x):
                    if self.comp[(g, f)] == self.ident[x] and self.comp[(f, g)] == self.ident[y]:
                        found = g
                        break
                inv.append(found)
            self._inverse = tuple(inv)
        return self._inverse[a]

    def is_iso(self, a):
        return self.inverse(a) is not None

    def arrow_triples(self):
        return [(a, self.objects[self.dom[i]], self.objects[self.cod[i]]) for i, a in enumerate(self.arrows)]

    def describe(self):
        ids = {self.objects[x]: self.arrows[a] for x, a in enumerate(self.ident)}
        idset = set(self.ident)
        return {
            "kind": "cat",
            "name": self.name,
            "objects": list(self.objects),
            "arrows": [{"name": a, "dom": d, "cod": c} for a, d, c in self.arrow_triples()],
            "identities": ids,
            "compose": [[self.arrows[g], self.arrows[f], self.arrows[h]]
                        for (g, f), h in sorted(self.comp.items()) if g not in idset and f not in idset],
        }

    def __len__(self):
        return len(self.objects)

    def __eq__(self, other):
        return isinstance(other, FinCat) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        gens = [f"{a}:{d}->{c}" for a, d, c in self.arrow_triples() if not self.is_identity(self.arr_index(a))]
        return f"FinCat({self.name}: objects {{{','.join(self.objects)}}}; {', '.join(gens)})"


def validate_cat(candidate):
    """Build a :class:`FinCat` from a raw description and check every category law.

    Composites forced by the unit laws may be omitted from ``compose``;
    identities missing from ``identities`` are created as ``id_<object>``.
    """
    objects = list(candidate["objects"])
    seen = set()
    for x in objects:
        if x in seen:
            raise DuplicateName(x)
        seen.add(x)
    oindex = {x: i for i, x in enumerate(objects)}

    arrows, dom, cod = [], [], []
    aindex = {}
    for spec in candidate.get("arrows", []):
        if isinstance(spec, dict):
            a, d, c = spec["name"], spec["dom"], spec["cod"]
        else:
            a, d, c = spec
        if a in aindex:
            raise DuplicateName(a)
        if d not in oindex or c not in oindex:
            raise DanglingEndpoint(a)
        aindex[a] = len(arrows)
        arrows.append(a)
        dom.append(oindex[d])
        cod.append(oindex[c])

    given_ids = dict(candidate.get("identities", {}))
    for x in given_ids:
        if x not in oindex:
            raise UnknownName(x, "identities")
    ident = []
    for x in objects:
        a = given_ids.get(x, f"id_{x}")
        if a not in aindex:
            aindex[a] = len(arrows)
            arrows.append(a)
            dom.append(oindex[x])
            cod.append(oindex[x])
        i = aindex[a]
        if dom[i] != oindex[x] or cod[i] != oindex[x]:
            raise UnitLawViolation(a)
        ident.append(i)

    comp = {}
    for entry in candidate.get("compose", []):
        g, f, h = entry
        for a in (g, f, h):
            if a not in aindex:
                raise UnknownName(a, "compose")
        gi, fi, hi = aindex[g], aindex[f], aindex[h]
        if cod[fi] != dom[gi]:
            raise InputError(f"composite {g} o {f} listed but {f} and {g} are not composable")
        if dom[hi] != dom[fi] or cod[hi] != cod[gi]:
            raise InputError(f"composite {g} o {f} = {h} has the wrong endpoints")
        if (gi, fi) in comp and comp[(gi, fi)] != hi:
            raise InputError(f"composite {g} o {f} listed twice with different values")
        comp[(gi, fi)] = hi

    for f in range(len(arrows)):
        for key in ((ident[cod[f]], f), (f, ident[dom[f]])):
            if key in comp and comp[key] != f:
                raise UnitLawViolation(arrows[f])
            comp[key] = f

    for f in range(len(arrows)):
        for g in range(len(arrows)):
            if dom[g] == cod[f] and (g, f) not in comp:
                raise MissingComposite(arrows[g], arrows[f])
    for f in range(len(arrows)):
        for g in range(len(arrows)):
            if dom[g] != cod[f]:
                continue
            gf = comp[(g, f)]
            for h in range(len(arrows)):
                if dom[h] != cod[g]:
                    continue
                if comp[(h, gf)] != comp[(comp[(h, g)], f)]:
                    raise AssociativityViolation(arrows[h], arrows[g], arrows[f])
    return FinCat(objects, arrows, dom, cod, ident, comp, candidate.get("name"))


def make_cat(objects, arrows=(), compose=(), name=None, identities=None):
    """Shorthand for :func:`validate_cat` with arrows given as ``(name, dom, cod)`` triples."""
    return validate_cat({
        "objects": list(objects),
        "arrows": [{"name": a, "dom": d, "cod": c} for a, d, c in arrows],
        "identities": dict(identities or {}),
        "compose": [list(t) for t in compose],
        "name": name,
    })


def check_category_laws(C):
    """Re-check the FinCat invariants on an already built category; returns a list of problems."""
    problems = []
    n = len(C.arrows)
    for x, a in enumerate(C.ident):
        if C.dom[a] != x or C.cod[a] != x:
            problems.append(f"identity {C.arrows[a]} has wrong endpoints")
    for f in range(n):
        for g in range(n):
            if C.dom[g] != C.cod[f]:
                if (g, f) in C.comp:
                    problems.append(f"composite defined on non-composable {C.arrows[g]},{C.arrows[f]}")
                continue
            h = C.comp.get((g, f))
            if h is None:
                problems.append(f"missing composite {C.arrows[g]} o {C.arrows[f]}")
                continue
            if C.dom[h] != C.dom[f] or C.cod[h] != C.cod[g]:
                problems.append(f"composite {C.arrows[g]} o {C.arrows[f]} has wrong endpoints")
    for f in range(n):
        if C.comp.get((C.ident[C.cod[f]], f)) != f or C.comp.get((f, C.ident[C.dom[f]])) != f:
            problems.append(f"unit law fails at {C.arrows[f]}")
    if problems:
        return problems
    for f in range(n):
        for g in range(n):
            if C.dom[g] != C.cod[f]:
                continue
            for h in range(n):
                if C.dom[h] != C.cod[g]:
                    continue
                if C.comp[(h, C.comp[(g, f)])] != C.comp[(C.comp[(h, g)], f)]:
                    problems.append(f"associativity fails at {C.arrows[h]},{C.arrows[g]},{C.arrows[f]}")
    return problems


def disjoint_union_cat(*parts, name=None):
    objects, arrows, dom, cod, ident, comp = [], [], [], [], [], {}
    for P in parts:
        o0, a0 = len(objects), len(arrows)
        objects.extend(P.objects)
        arrows.extend(P.arrows)
        dom.extend(o0 + d for d in P.dom)
        cod.extend(o0 + c for c in P.cod)
        ident.extend(a0 + a for a in P.ident)
        comp.update({(a0 + g, a0 + f): a0 + h for (g, f), h in P.comp.items()})
    if len(set(objects)) != len(objects):
        raise InputError("disjoint union needs disjoint object names")
    if len(set(arrows)) != len(arrows):
        raise InputError("disjoint union needs disjoint arrow names")
    return FinCat(objects, arrows, dom, cod, ident, comp, name or "+".join(P.name for P in parts))


def empty_cat(name="0"):
    return FinCat((), (), (), (), (), {}, name)


def point_cat(x="*", name="1"):
    return FinCat((x,), (f"id_{x}",), (0,), (0,), (0,), {(0, 0): 0}, name)


# -- functors ---------------------------------------------------------------------

class Functor:
    """A functor stored as index tables on objects and arrows."""

    __slots__ = ("source", "target", "obj_images", "arr_images", "_hash")

    def __init__(self, source, target, obj_assign, arr_assign, check=True):
        if isinstance(obj_assign, dict):
            obj_assign = tuple(target.obj_index(obj_assign[x]) if x in obj_assign else _missing(x)
                               for x in source.objects)
        if isinstance(arr_assign, dict):
            arr_assign = tuple(target.arr_index(arr_assign[a]) if a in arr_assign else _missing(a)
                               for a in source.arrows)
        self.source = source
        self.target = target
        self.obj_images = tuple(obj_assign)
        self.arr_images = tuple(arr_assign)
        self._hash = None
        if check:
            problem = functor_problem(self)
            if problem:
                raise NotAFunctor(problem)

    @property
    def obj_assign(self):
        return {x: self.target.objects[j] for x, j in zip(self.source.objects, self.obj_images)}

    @property
    def arr_assign(self):
        return {a: self.target.arrows[j] for a, j in zip(self.source.arrows, self.arr_images)}

    def after(self, f):
        return Functor(f.source, self.target,
                       tuple(self.obj_images[j] for j in f.obj_images),
                       tuple(self.arr_images[j] for j in f.arr_images), check=False)

    def image_masks(self, obj_mask=None, arr_mask=None):
        om = 0
        for i, j in enumerate(self.obj_images):
            if obj_mask is None or obj_mask >> i & 1:
                om |= 1 << j
        am = 0
        for i, j in enumerate(self.arr_images):
            if arr_mask is None or arr_mask >> i & 1:
                am |= 1 << j
        return om, am

    def preimage_masks(self, obj_mask, arr_mask):
        om = 0
        for i, j in enumerate(self.obj_images):
            if obj_mask >> j & 1:
                om |= 1 << i
        am = 0
        for i, j in enumerate(self.arr_images):
            if arr_mask >> j & 1:
                am |= 1 << i
        return om, am

    def is_surjective(self):
        om, am = self.image_masks()
        return om == self.target.full_obj_mask and am == self.target.full_arr_mask

    def is_injective(self):
        return (len(set(self.obj_images)) == len(self.obj_images)
                and len(set(self.arr_images)) == len(self.arr_images))

    def restrict(self, sub):
        obj = sub.as_object()
        return Functor(obj, self.target,
                       tuple(self.obj_images[i] for i in _bits(sub.obj_mask)),
                       tuple(self.arr_images[i] for i in _bits(sub.arr_mask)), check=False)

    def corestrict(self, sub):
        obj = sub.as_object()
        t = self.target
        return Functor(self.source, obj,
                       tuple(obj.obj_index(t.objects[j]) for j in self.obj_images),
                       tuple(obj.arr_index(t.arrows[j]) for j in self.arr_images), check=False)

    def table(self):
        return {"objects": self.obj_assign, "arrows": self.arr_assign}

    def __eq__(self, other):
        return (isinstance(other, Functor) and self.obj_images == other.obj_images
                and self.arr_images == other.arr_images
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.source, self.target, self.obj_images, self.arr_images))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{a}->{b}" for a, b in self.arr_assign.items()
                         if not self.source.is_identity(self.source.arr_index(a)))
        objs = ", ".join(f"{a}->{b}" for a, b in self.obj_assign.items())
        return f"<{self.source.name}->{self.target.name}: {objs}; {body}>"


def _missing(x):
    raise UnknownName(x, "assignment")


def functor_problem(F):
    X, Y = F.source, F.target
    o, a = F.obj_images, F.arr_images
    if len(o) != len(X.objects) or len(a) != len(X.arrows):
        return "assignment tables have the wrong length"
    for f in range(len(X.arrows)):
        if Y.dom[a[f]] != o[X.dom[f]] or Y.cod[a[f]] != o[X.cod[f]]:
            return f"arrow {X.arrows[f]} is sent to an arrow with the wrong endpoints"
    for x in range(len(X.objects)):
        if a[X.ident[x]] != Y.ident[o[x]]:
            return f"identity of {X.objects[x]} is not preserved"
    for (g, f), h in X.comp.items():
        if Y.comp[(a[g], a[f])] != a[h]:
            return f"composite {X.arrows[g]} o {X.arrows[f]} is not preserved"
    return None


def identity_functor(C):
    return Functor(C, C, tuple(range(len(C.objects))), tuple(range(len(C.arrows))), check=False)


_FUNCTOR_CACHE = {}


def functors(X, Y):
    """All functors ``X -> Y`` (backtracking over object then arrow assignments)."""
    key = (X, Y)
    tables = _FUNCTOR_CACHE.get(key)
    if tables is None:
        tables = _enumerate_functors(X, Y)
        _FUNCTOR_CACHE[key] = tables
    return [Functor(X, Y, o, a, check=False) for o, a in tables]


def _enumerate_functors(X, Y):
    nX = len(X.objects)
    out = []
    idset = set(X.ident)
    gens = [f for f in range(len(X.arrows)) if f not in idset]
    # relations touching each generator, checked as soon as all three arrows are placed
    position = {f: k for k, f in enumerate(gens)}
    rel_at = {k: [] for k in range(len(gens))}
    for (g, f), h in X.comp.items():
        involved = [position[x] for x in (g, f, h) if x in position]
        last = max(involved) if involved else -1
        if last >= 0:
            rel_at[last].append((g, f, h))

    def objects(i, o):
        if i == nX:
            arrows(o)
            return
        for j in range(len(Y.objects)):
            o.append(j)
            objects(i + 1, o)
            o.pop()

    def arrows(o):
        a = [None] * len(X.arrows)
        for x in range(nX):
            a[X.ident[x]] = Y.ident[o[x]]

        def place(k):
            if k == len(gens):
                out.append((tuple(o), tuple(a)))
                return
            f = gens[k]
            for cand in Y.hom(o[X.dom[f]], o[X.cod[f]]):
                a[f] = cand
                if all(Y.comp[(a[g], a[ff])] == a[h] for g, ff, h in rel_at[k]):
                    place(k + 1)
            a[f] = None

        place(0)

    objects(0, [])
    return out


# -- subcategories ----------------------------------------------------------------

class SubCat:
    """A subcategory given by object and arrow bitmasks; closure is checked on construction."""

    __slots__ = ("ambient", "obj_mask", "arr_mask")

    def __init__(self, ambient, obj_mask, arr_mask, check=True):
        if not isinstance(obj_mask, int):
            obj_mask = sum(1 << ambient.obj_index(x) for x in obj_mask)
        if not isinstance(arr_mask, int):
            arr_mask = sum(1 << ambient.arr_index(a) for a in arr_mask)
        self.ambient = ambient
        self.obj_mask = obj_mask
        self.arr_mask = arr_mask
        if check:
            problem = subcat_problem(ambient, obj_mask, arr_mask)
            if problem:
                raise InputError(f"not a subcategory of {ambient.name}: {problem}")

    @property
    def obj_members(self):
        return frozenset(self.ambient.objects[i] for i in _bits(self.obj_mask))

    @property
    def arr_members(self):
        return frozenset(self.ambient.arrows[i] for i in _bits(self.arr_mask))

    @property
    def objects(self):
        return tuple(self.ambient.objects[i] for i in _bits(self.obj_mask))

    def __len__(self):
        return bin(self.obj_mask).count("1")

    def is_empty(self):
        return self.obj_mask == 0

    def is_whole(self):
        return self.obj_mask == self.ambient.full_obj_mask and self.arr_mask == self.ambient.full_arr_mask

    def is_full(self):
        return self.arr_mask == full_arrows(self.ambient, self.obj_mask)

    def label(self):
        s = "{" + ",".join(self.objects) + "}"
        if not self.is_full():
            gens = [self.ambient.arrows[i] for i in _bits(self.arr_mask) if not self.ambient.is_identity(i)]
            s += "[" + ",".join(gens) + "]"
        return s

    def as_object(self):
        if self.is_whole():
            return self.ambient
        cache = self.ambient._cache
        key = ("sub", self.obj_mask, self.arr_mask)
        obj = cache.get(key)
        if obj is None:
            obj = induced_cat(self.ambient, self.obj_mask, self.arr_mask,
                              f"{self.ambient.name}|{self.label()}")
            cache[key] = obj
        return obj

    def inclusion(self):
        return Functor(self.as_object(), self.ambient, tuple(_bits(self.obj_mask)),
                       tuple(_bits(self.arr_mask)), check=False)

    def sub_of(self, other):
        if not self <= other:
            raise ValueError(f"{self.label()} is not contained in {other.label()}")
        obj = other.as_object()
        A = self.ambient
        om = sum(1 << obj.obj_index(A.objects[i]) for i in _bits(self.obj_mask))
        am = sum(1 << obj.arr_index(A.arrows[i]) for i in _bits(self.arr_mask))
        return SubCat(obj, om, am, check=False)

    def __le__(self, other):
        return self.obj_mask & ~other.obj_mask == 0 and self.arr_mask & ~other.arr_mask == 0

    def __eq__(self, other):
        return (isinstance(other, SubCat) and self.obj_mask == other.obj_mask
                and self.arr_mask == other.arr_mask and self.ambient == other.ambient)

    def __hash__(self):
        return hash((self.ambient, self.obj_mask, self.arr_mask))

    def __repr__(self):
        return f"SubCat({self.ambient.name}, {self.label()})"


def full_arrows(C, obj_mask):
    m = 0
    for a in range(len(C.arrows)):
        if obj_mask >> C.dom[a] & 1 and obj_mask >> C.cod[a] & 1:
            m |= 1 << a
    return m


def full_sub(C, objects):
    if not isinstance(objects, int):
        objects = sum(1 << C.obj_index(x) for x in objects)
    return SubCat(C, objects, full_arrows(C, objects), check=False)


def subcat_problem(C, obj_mask, arr_mask):
    for a in _bits(arr_mask):
        if not (obj_mask >> C.dom[a] & 1 and obj_mask >> C.cod[a] & 1):
            return f"arrow {C.arrows[a]} has an endpoint outside the object set"
    for x in _bits(obj_mask):
        if not arr_mask >> C.ident[x] & 1:
            return f"identity of {C.objects[x]} missing"
    for (g, f), h in C.comp.items():
        if arr_mask >> g & 1 and arr_mask >> f & 1 and not arr_mask >> h & 1:
            return f"composite {C.arrows[g]} o {C.arrows[f]} missing"
    return None


def induced_cat(C, obj_mask, arr_mask, name=None):
    objs = list(_bits(obj_mask))
    arrs = list(_bits(arr_mask))
    oi = {x: k for k, x in enumerate(objs)}
    ai = {a: k for k, a in enumerate(arrs)}
    comp = {}
    for (g, f), h in C.comp.items():
        if g in ai and f in ai:
            comp[(ai[g], ai[f])] = ai[h]
    return FinCat([C.objects[x] for x in objs], [C.arrows[a] for a in arrs],
                  [oi[C.dom[a]] for a in arrs], [oi[C.cod[a]] for a in arrs],
                  [ai[C.ident[x]] for x in objs], comp, name)


def composition_closure(C, arr_mask):
    """Smallest arrow set containing ``arr_mask`` and closed under composition."""
    m = arr_mask
    changed = True
    while changed:
        changed = False
        for (g, f), h in C.comp.items():
            if m >> g & 1 and m >> f & 1 and not m >> h & 1:
                m |= 1 << h
                changed = True
    return m
