"""Finite pieces of stable categories as honest categories, and the factorization of torsion
functors through the quotient functor.

A torsion functor out of the ambient category is only ever given on a finite
set of objects (closed under the distinguished subobjects that the
factorization needs), with values in a finite category that has a zero
object.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ambient as amb
from .category import FinCat, point_cat
from .errors import (
    HypothesesFail,
    InputError,
    NoMediator,
    NonUniqueMediator,
    PreconditionError,
)
from .report import Report, witness_map
from .stable import StableCategory, iota


def _unique_names(objects):
    names, seen = [], {}
    for A in objects:
        base = A.name
        k = seen.get(base, 0)
        seen[base] = k + 1
        names.append(base if k == 0 else f"{base}'{k}")
    return names


def object_closure(objects, kind, include_initial=True):
    """The objects together with every distinguished subobject (as an object), recursively."""
    from .systems import system
    sys_ = system(kind)
    out = list(dict.fromkeys(objects))
    if include_initial and out:
        out.insert(0, amb.initial_object(amb.kind_of(out[0])))
        out = list(dict.fromkeys(out))
    k = 0
    while k < len(out):
        for S in sys_.lattice(out[k]):
            So = S.as_object()
            if So not in out:
                out.append(So)
        k += 1
    return out


@dataclass
class TargetCategory:
    """A finite category with a chosen zero object."""

    cat: FinCat
    zero: int

    def __post_init__(self):
        C, z = self.cat, self.zero
        for x in range(len(C.objects)):
            if len(C.hom(x, z)) != 1 or len(C.hom(z, x)) != 1:
                raise InputError(f"{C.objects[z]} is not a zero object of {C.name}")

    def zero_arrow(self, x, y):
        C, z = self.cat, self.zero
        return C.compose(C.hom(z, y)[0], C.hom(x, z)[0])

    def is_zero(self, a):
        C = self.cat
        return a == self.zero_arrow(C.dom[a], C.cod[a])


class MaterializedStable:
    """The full subcategory of a stable category on a finite list of objects, as a FinCat."""

    def __init__(self, st, objects, name=None):
        self.stable = st
        self.objects = list(dict.fromkeys(objects))
        self._obj = {A: i for i, A in enumerate(self.objects)}
        names = _unique_names(self.objects)
        arrows, dom, cod, self._arr, self._classes = [], [], [], {}, []
        for i, A in enumerate(self.objects):
            for j, B in enumerate(self.objects):
                for c in st.hom(A, B):
                    self._arr[(A, B, c.index)] = len(arrows)
                    self._classes.append(c)
                    arrows.append(f"{names[i]}->{names[j]}#{c.index}")
                    dom.append(i)
                    cod.append(j)
        ident = [self._arr[(A, A, st.identity(A).index)] for A in self.objects]
        comp = {}
        for g, cg in enumerate(self._classes):
            for f, cf in enumerate(self._classes):
                if cod[f] != dom[g]:
                    continue
                comp[(g, f)] = self.arrow_of(st.compose(cg, cf))
        self.cat = FinCat(names, arrows, dom, cod, ident, comp, name or f"{st.name}|{len(names)}")

    def obj_index(self, A):
        try:
            return self._obj[A]
        except KeyError:
            raise InputError(f"{A.name} is not among the materialized objects") from None

    def arrow_of(self, c):
        return self._arr[(c.source, c.target, c.index)]

    def class_at(self, a):
        return self._classes[a]

    def target(self):
        return TargetCategory(self.cat, self.obj_index(amb.initial_object(amb.kind_of(self.objects[0]))))


@dataclass
class SampleFunctor:
    """A functor out of the ambient category, given on a finite set of objects.

    ``obj`` sends an ambient object to an object index of ``target.cat``;
    ``arr`` sends an ambient morphism to an arrow index.
    """

    name: str
    target: object  # TargetCategory, or a bare FinCat for functors without zero data
    obj: object
    arr: object
    notes: list = field(default_factory=list)

    @property
    def cat(self):
        return self.target.cat if isinstance(self.target, TargetCategory) else self.target


def sigma_functor(st, objects, name=None):
    """The quotient functor into the materialized stable category on ``objects``."""
    M = MaterializedStable(st, objects)
    return SampleFunctor(name or f"sigma[{st.system.name}]", M.target(), M.obj_index,
                         lambda f: M.arrow_of(st.sigma(f))), M


def collapse_functor():
    """Everything to the one-object, one-arrow category."""
    P = point_cat("0", "Zero")
    return SampleFunctor("collapse", TargetCategory(P, 0), lambda A: 0, lambda f: 0)


def ambient_functor(objects, name="inclusion"):
    """The inclusion of ``objects`` into a finite piece of the ambient category (no zero object)."""
    objects = list(dict.fromkeys(objects))
    names = _unique_names(objects)
    oi = {A: i for i, A in enumerate(objects)}
    arrows, dom, cod, idx, maps = [], [], [], {}, []
    for i, A in enumerate(objects):
        for j, B in enumerate(objects):
            for k, f in enumerate(amb.homs(A, B)):
                idx[f] = len(arrows)
                maps.append(f)
                arrows.append(f"{names[i]}->{names[j]}#{k}")
                dom.append(i)
                cod.append(j)
    ident = [idx[amb.identity(A)] for A in objects]
    comp = {}
    for g, mg in enumerate(maps):
        for f, mf in enumerate(maps):
            if cod[f] == dom[g]:
                comp[(g, f)] = idx[mg.after(mf)]
    C = FinCat(names, arrows, dom, cod, ident, comp, f"ambient|{len(objects)}")
    return SampleFunctor(name, C, lambda A: oi[A], lambda f: idx[f])


# -- zero-pushouts in a target category ---------------------------------------------------

def target_zero_pushout(X, s2, t2, s, t):
    """Check that the commutative square ``s s2 = t t2`` of ``X`` is a zero-pushout.

    Returns ``None`` or a witness of failure.
    """
    C = X.cat
    I, S, T, U = C.dom[s2], C.cod[s2], C.cod[t2], C.cod[s]
    for y in range(len(C.objects)):
        meds = {}
        for h in C.hom(U, y):
            meds.setdefault((C.compose(h, s), C.compose(h, t)), []).append(h)
        for f in C.hom(S, y):
            for g in C.hom(T, y):
                if not (X.is_zero(f) or X.is_zero(g)):
                    continue
                if C.compose(f, s2) != C.compose(g, t2):
                    continue
                found = meds.get((f, g), [])
                if len(found) != 1:
                    return {"test_object": C.objects[y], "f": C.arrows[f], "g": C.arrows[g],
                            "mediators": [C.arrows[h] for h in found]}
    return None


@dataclass
class Factorization:
    """``G`` on stable morphisms, keyed by ``(source, target, class index)``."""

    functor: SampleFunctor
    stable: StableCategory
    values: dict
    report: Report

    def __call__(self, c):
        return self.values[(c.source, c.target, c.index)]


def _check_torsion_functor(F, objects, th, report):
    X = F.target
    C = X.cat
    for A in objects:
        for B in objects:
            for f in amb.homs(A, B):
                a = F.arr(f)
                ok = C.dom[a] == F.obj(A) and C.cod[a] == F.obj(B)
                report.add("F-endpoints", f"{A.name}->{B.name}", ok, None if ok else {"map": witness_map(f)})
                if th.is_trivial(f) and not X.is_zero(a):
                    raise HypothesesFail(f"{F.name} sends the trivial map {f!r} to a non-zero arrow",
                                         {"map": witness_map(f), "image": C.arrows[a]})
        if F.arr(amb.identity(A)) != C.ident[F.obj(A)]:
            raise HypothesesFail(f"{F.name} does not preserve the identity of {A.name}")


def _check_squares(F, objects, sys_, report):
    X = F.target
    for A in objects:
        members = sys_.lattice(A).members
        for i, S in enumerate(members):
            for T in members[i:]:
                U = amb.sub_union(S, T)
                I = amb.sub_intersection(S, T)
                maps = [I.sub_of(S).inclusion(), I.sub_of(T).inclusion(),
                        S.sub_of(U).inclusion(), T.sub_of(U).inclusion()]
                s2, t2, s, t = (F.arr(m) for m in maps)
                bad = target_zero_pushout(X, s2, t2, s, t)
                square = {"object": A.name, "S": S.label(), "T": T.label()}
                report.add("F-zero-pushout", f"{A.name}:{S.label()},{T.label()}", bad is None,
                           None if bad is None else dict(square, **bad))
                if bad is not None:
                    raise HypothesesFail(
                        f"{F.name} does not send the square of {S.label()}, {T.label()} in {A.name} "
                        "to a zero-pushout", dict(square, **bad))


def _mediator(F, p):
    """The unique arrow ``phi`` with ``phi F(s1) = F(f)`` and ``phi F(s0) = 0``."""
    X = F.target
    C = X.cat
    A, B = p.source, p.target
    s1 = F.arr(p.S1.inclusion())
    s0 = F.arr(p.S0.inclusion())
    f = F.arr(p.map)
    z = X.zero_arrow(C.dom[s0], F.obj(B))
    found = [h for h in C.hom(F.obj(A), F.obj(B)) if C.compose(h, s1) == f and C.compose(h, s0) == z]
    if not found:
        raise NoMediator(f"no arrow of {C.name} solves the problem for {p!r}")
    if len(found) > 1:
        raise NonUniqueMediator(f"{len(found)} arrows of {C.name} solve the problem for {p!r}")
    return found[0]


def factor_torsion_functor(F, corpus, kind, theory="preord", max_chain=4):
    """Factor a torsion functor ``F`` through the stable category of ``kind``.

    The hypotheses are checked first on the closure of ``corpus`` under
    distinguished subobjects: ``F`` sends trivial maps to zero arrows and each
    square ``S n T -> S, T -> S u T`` to a zero-pushout. Then every stable
    morphism between corpus objects gets the mediator of the zero-pushout
    problem, computed for every member of its class (well-definedness), and
    functoriality is checked on composable pairs.
    """
    st = StableCategory(kind, theory, max_chain=max_chain)
    objects = object_closure(corpus, st.system)
    report = Report("factor-torsion-functor", dict(st.config(), functor=F.name,
                                                   objects=[A.name for A in objects]))
    if not isinstance(F.target, TargetCategory):
        raise PreconditionError(f"{F.name} has no zero object in its target")
    _check_torsion_functor(F, objects, st.theory, report)
    _check_squares(F, objects, st.system, report)
    C = F.target.cat
    values = {}
    corpus = list(dict.fromkeys(corpus))
    for A in corpus:
        for B in corpus:
            for c in st.hom(A, B):
                phis = {_mediator(F, p) for p in c.class_members}
                report.add("Thm6.4-well-defined", f"{A.name}->{B.name}#{c.index}", len(phis) == 1,
                           None if len(phis) == 1 else {"class": c.describe(),
                                                        "values": sorted(C.arrows[h] for h in phis)})
                values[(A, B, c.index)] = _mediator(F, c.representative)
            for f in amb.homs(A, B):
                ok = values[(A, B, st.sigma(f).index)] == F.arr(f)
                report.add("Thm6.4-factorization", f"{A.name}->{B.name}", ok,
                           None if ok else {"map": witness_map(f)})
        ok = values[(A, A, st.identity(A).index)] == C.ident[F.obj(A)]
        report.add("Thm6.4-identity", A.name, ok)
    for A in corpus:
        for B in corpus:
            for C_ in corpus:
                for c1 in st.hom(A, B):
                    for c2 in st.hom(B, C_):
                        lhs = values[(A, C_, st.compose(c2, c1).index)]
                        rhs = C.compose(values[(B, C_, c2.index)], values[(A, B, c1.index)])
                        report.add("Thm6.4-composition", f"{A.name}->{B.name}->{C_.name}", lhs == rhs,
                                   None if lhs == rhs else {"first": c1.describe(), "second": c2.describe()})
    return Factorization(F, st, values, report)
