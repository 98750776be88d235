"""Reduced chains and the skeletal quotient of a finite category.

The quotient identifies isomorphic objects. An arrow of the quotient is a
chain of ambient arrows ``(f1, ..., fn)`` in which no arrow is an identity,
no adjacent pair is composable, and each ``cod fi`` is isomorphic to
``dom fi+1``. Chains are normalized by deleting identities and composing
composable neighbours.

Reduced chains are exactly the walks in the *junction graph* whose vertices
are the non-identity arrows, with an edge ``f -> g`` when ``cod f`` and
``dom g`` are distinct but isomorphic. The quotient is finite iff this graph
is acyclic; otherwise hom-sets are enumerated up to a length bound.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter

from .category import FinCat, functors
from .errors import InputError, JunctionMismatch, SizeLimit, TruncationWarning

DEFAULT_MAX_CHAIN = 4


def iso_classes(C):
    """Partition of the objects into isomorphism classes, each sorted in object order,
    the classes ordered by their first object."""
    parent = list(range(len(C.objects)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(len(C.arrows)):
        if C.dom[a] != C.cod[a] and C.inverse(a) is not None:
            ra, rb = find(C.dom[a]), find(C.cod[a])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for x in range(len(C.objects)):
        groups.setdefault(find(x), []).append(x)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def class_name(names):
    return "[" + ",".join(names) + "]"


@dataclass(frozen=True)
class ChainArrow:
    """An arrow of the skeletal quotient: a reduced chain between two iso classes."""

    src: int
    dst: int
    arrows: tuple = ()

    def __len__(self):
        return len(self.arrows)

    def is_identity(self):
        return not self.arrows

    def names(self, C):
        return [C.arrows[a] for a in self.arrows]

    def label(self, C, classes=None):
        if self.arrows:
            return ";".join(C.arrows[a] for a in self.arrows)
        cls = classes[self.src] if classes else ()
        return "1" + class_name([C.objects[x] for x in cls])


def _junction_ok(C, cls_of, f, g):
    return cls_of[C.cod[f]] == cls_of[C.dom[g]]


def _redexes(C, seq):
    out = []
    for i, a in enumerate(seq):
        if C.is_identity(a):
            out.append(("drop", i))
    for i in range(len(seq) - 1):
        if C.cod[seq[i]] == C.dom[seq[i + 1]]:
            out.append(("join", i))
    return out


def reduce_sequence(C, seq, rng=None):
    """Rewrite an arrow sequence to reduced form.

    Without ``rng`` the leftmost redex is always taken (identity deletion
    before composition); with ``rng`` a random applicable redex is chosen at
    every step, which is how confluence is exercised.
    """
    seq = list(seq)
    while True:
        red = _redexes(C, seq)
        if not red:
            return tuple(seq)
        op, i = rng.choice(red) if rng is not None else red[0]
        if op == "drop":
            del seq[i]
        else:
            seq[i:i + 2] = [C.comp[(seq[i + 1], seq[i])]]


def normalize_chain(C, chain, rng=None, at=None, classes=None):
    """Normal form of a chain of arrows (names or indices) of ``C`` as a :class:`ChainArrow`.

    ``at`` is the object name (or class index) an empty input chain lives on.
    """
    classes = classes or iso_classes(C)
    cls_of = _class_index(C, classes)
    seq = [a if isinstance(a, int) else C.arr_index(a) for a in chain]
    for i in range(len(seq) - 1):
        if not _junction_ok(C, cls_of, seq[i], seq[i + 1]):
            raise JunctionMismatch(i, C.arrows[seq[i]], C.arrows[seq[i + 1]])
    if seq:
        src, dst = cls_of[C.dom[seq[0]]], cls_of[C.cod[seq[-1]]]
    else:
        if at is None:
            raise InputError("an empty chain needs an object to sit on")
        src = dst = at if isinstance(at, int) else cls_of[C.obj_index(at)]
    return ChainArrow(src, dst, reduce_sequence(C, seq, rng))


def _class_index(C, classes):
    cls_of = [0] * len(C.objects)
    for k, cls in enumerate(classes):
        for x in cls:
            cls_of[x] = k
    return cls_of


def is_reduced(C, arrows, cls_of):
    for a in arrows:
        if C.is_identity(a):
            return False
    for f, g in zip(arrows, arrows[1:]):
        if C.cod[f] == C.dom[g] or cls_of[C.cod[f]] != cls_of[C.dom[g]]:
            return False
    return True


def random_chain(C, rng, length, classes=None):
    """A random arrow sequence of the given length whose junctions connect isomorphic objects."""
    classes = classes or iso_classes(C)
    cls_of = _class_index(C, classes)
    seq = [rng.randrange(len(C.arrows))]
    while len(seq) < length:
        end = cls_of[C.cod[seq[-1]]]
        nxt = [a for a in range(len(C.arrows)) if cls_of[C.dom[a]] == end]
        seq.append(rng.choice(nxt))
    return seq


class SkeletalQuotient:
    """The torsion-free reflection of a finite category, presented by reduced chains."""

    def __init__(self, C, max_chain=DEFAULT_MAX_CHAIN, name=None):
        self.ambient = C
        self.max_chain = max_chain
        self.name = name or f"phi({C.name})"
        self.classes = iso_classes(C)
        self.class_of = _class_index(C, self.classes)
        self.objects = tuple(class_name([C.objects[x] for x in cls]) for cls in self.classes)
        self.representative = tuple(min(C.objects[x] for x in cls) for cls in self.classes)
        self.generators = tuple(a for a in range(len(C.arrows)) if not C.is_identity(a))
        self.junctions = {f: tuple(g for g in self.generators
                                   if C.cod[f] != C.dom[g] and self.class_of[C.cod[f]] == self.class_of[C.dom[g]])
                          for f in self.generators}
        self.is_finite = _acyclic(self.junctions)
        self._chains = {}
        self._fincat = None

    # -- structure -----------------------------------------------------------
    def obj_index(self, name):
        return self.objects.index(name)

    def identity(self, k):
        return ChainArrow(k, k, ())

    def generator(self, a):
        """The chain ``(a)`` (the empty chain when ``a`` is an identity)."""
        C = self.ambient
        return ChainArrow(self.class_of[C.dom[a]], self.class_of[C.cod[a]],
                          () if C.is_identity(a) else (a,))

    def compose(self, g, f):
        """``g o f`` for chains ``f: a -> b`` and ``g: b -> c``."""
        if f.dst != g.src:
            raise ValueError("chains are not composable")
        return ChainArrow(f.src, g.dst, reduce_sequence(self.ambient, f.arrows + g.arrows))

    def normalize(self, seq, rng=None, at=None):
        return normalize_chain(self.ambient, seq, rng=rng, at=at, classes=self.classes)

    def is_iso(self, c):
        C = self.ambient
        return all(C.inverse(a) is not None for a in c.arrows)

    def inverse(self, c):
        if not self.is_iso(c):
            return None
        C = self.ambient
        return ChainArrow(c.dst, c.src, reduce_sequence(C, [C.inverse(a) for a in reversed(c.arrows)]))

    def label(self, c):
        return c.label(self.ambient, self.classes)

    # -- enumeration ---------------------------------------------------------
    def bound(self, max_len=None):
        if max_len is not None:
            return max_len
        return len(self.generators) if self.is_finite else self.max_chain

    def chains(self, max_len=None):
        """All reduced chains of length at most the bound (identities included), deterministic order."""
        L = self.bound(max_len)
        got = self._chains.get(L)
        if got is not None:
            return got
        out = [self.identity(k) for k in range(len(self.classes))]
        level = [(a,) for a in self.generators]
        n = 1
        while level and n <= L:
            out.extend(ChainArrow(self.class_of[self.ambient.dom[w[0]]],
                                  self.class_of[self.ambient.cod[w[-1]]], w) for w in level)
            level = [w + (g,) for w in level for g in self.junctions[w[-1]]]
            n += 1
        self._chains[L] = out
        return out

    def hom(self, a, b, max_len=None):
        return [c for c in self.chains(max_len) if c.src == a and c.dst == b]

    def truncated(self, max_len=None):
        """Whether enumeration at this bound misses chains."""
        return not self.is_finite and self.bound(max_len) is not None

    def warn_if_truncated(self):
        if not self.is_finite:
            warnings.warn(f"{self.name} is infinite; hom-sets are enumerated up to chain length "
                          f"{self.max_chain}", TruncationWarning, stacklevel=3)

    def growth(self, upto):
        """Number of reduced chains of each length ``1..upto``; strictly positive at every length
        exactly when the quotient is infinite."""
        counts = []
        level = [(a,) for a in self.generators]
        for _ in range(upto):
            counts.append(len(level))
            level = [w + (g,) for w in level for g in self.junctions[w[-1]]]
        return counts

    def to_fincat(self):
        """The quotient as a :class:`FinCat` (finite case only)."""
        if not self.is_finite:
            raise SizeLimit(f"{self.name} is infinite")
        if self._fincat is None:
            arrs = self.chains()
            idx = {c: i for i, c in enumerate(arrs)}
            comp = {}
            for f in arrs:
                for g in arrs:
                    if f.dst == g.src:
                        comp[(idx[g], idx[f])] = idx[self.compose(g, f)]
            self._fincat = FinCat(self.objects, [self.label(c) for c in arrs],
                                  [c.src for c in arrs], [c.dst for c in arrs],
                                  list(range(len(self.classes))), comp, self.name)
            self._arr_index = idx
        return self._fincat

    def arrow_index(self, c):
        self.to_fincat()
        return self._arr_index[c]

    def __repr__(self):
        state = "finite" if self.is_finite else f"truncated-at-{self.max_chain}"
        return f"SkeletalQuotient({self.name}: {len(self.objects)} objects, {state})"


def _acyclic(adj):
    try:
        TopologicalSorter({f: set(gs) for f, gs in adj.items()}).prepare()
    except CycleError:
        return False
    return True


class QuotientFunctor:
    """The projection of a category onto its (possibly infinite) skeletal quotient."""

    def __init__(self, source, target):
        self.source = source
        self.target = target
        self.obj_images = tuple(target.class_of)

    def arrow(self, a):
        return self.target.generator(a)

    def after(self, F):
        """``self o F`` for a functor ``F`` into the ambient category."""
        return ChainValuedFunctor(F.source, self.target, tuple(self.obj_images[j] for j in F.obj_images),
                                  tuple(self.arrow(j) for j in F.arr_images))

    def as_chain_valued(self):
        from .category import identity_functor
        return self.after(identity_functor(self.source))

    def __repr__(self):
        return f"<eta: {self.source.name} -> {self.target.name}>"


class ChainValuedFunctor:
    """A functor from a finite category into a skeletal quotient, given by its values."""

    def __init__(self, source, target, obj_images, arr_images):
        self.source = source
        self.target = target
        self.obj_images = obj_images
        self.arr_images = arr_images

    def table(self):
        q = self.target
        return {"objects": {x: q.objects[k] for x, k in zip(self.source.objects, self.obj_images)},
                "arrows": {a: q.label(c) for a, c in zip(self.source.arrows, self.arr_images)}}

    def is_functor(self):
        X, q = self.source, self.target
        for a in range(len(X.arrows)):
            c = self.arr_images[a]
            if c.src != self.obj_images[X.dom[a]] or c.dst != self.obj_images[X.cod[a]]:
                return False
        for x in range(len(X.objects)):
            if not self.arr_images[X.ident[x]].is_identity():
                return False
        return all(q.compose(self.arr_images[g], self.arr_images[f]) == self.arr_images[h]
                   for (g, f), h in X.comp.items())


class FunctorFromQuotient:
    """A functor out of a skeletal quotient into a finite category.

    Such functors are the functors out of the ambient category that send
    isomorphic objects to the same object; ``lift`` is that functor.
    """

    def __init__(self, source, target, lift):
        self.source = source
        self.target = target
        self.lift = lift

    def obj(self, k):
        return self.lift.obj_images[self.source.classes[k][0]]

    def __call__(self, c):
        B = self.target
        out = B.ident[self.obj(c.src)]
        for a in c.arrows:
            out = B.comp[(self.lift.arr_images[a], out)]
        return out

    def after_eta(self):
        """Composite with the projection: the lifted functor itself."""
        return self.lift

    def table(self):
        q = self.source
        return {"objects": {q.objects[k]: self.target.objects[self.obj(k)] for k in range(len(q.classes))},
                "generators": {q.ambient.arrows[a]: self.target.arrows[self.lift.arr_images[a]]
                               for a in q.generators}}

    def __eq__(self, other):
        return isinstance(other, FunctorFromQuotient) and self.lift == other.lift

    def __hash__(self):
        return hash(self.lift)


def functors_from_quotient(q, B):
    """All functors ``q -> B``: the functors out of the ambient constant on iso classes."""
    out = []
    for F in functors(q.ambient, B):
        if all(F.obj_images[x] == F.obj_images[cls[0]] for cls in q.classes for x in cls):
            out.append(FunctorFromQuotient(q, B, F))
    return out


def confluence_trial(C, seq, orders, rng):
    """Normal forms of ``seq`` under ``orders`` random reduction strategies (as a set)."""
    seen = set()
    for _ in range(orders):
        seen.add(reduce_sequence(C, seq, random.Random(rng.random())))
    return seen

