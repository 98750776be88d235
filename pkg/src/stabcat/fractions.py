"""The stable category of the indiscrete system: its explicit description and the category of
fractions inverting ``0 -> 1``.

In the explicit description the arrows ``A -> B`` are the non-trivial
ambient maps plus one formal zero ``0_AB``; a composite of non-trivial maps
is kept when non-trivial and replaced by the formal zero otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ambient as amb
from .category import FinCat
from .errors import PreconditionError
from .pretorsion import theory as get_theory
from .report import Report, witness_map
from .stable import StableCategory
from .suites.systems import _Tally
from .universal import SampleFunctor, TargetCategory, _unique_names, collapse_functor, sigma_functor


@dataclass(frozen=True)
class FormalZero:
    source: object
    target: object

    def __repr__(self):
        return f"0[{self.source.name},{self.target.name}]"


class ExplicitStable:
    """The explicit category: non-trivial maps and formal zeros."""

    def __init__(self, objects, theory="preord"):
        self.objects = list(dict.fromkeys(objects))
        self.theory = get_theory(theory)
        self._homs = {}

    def hom(self, A, B):
        h = self._homs.get((A, B))
        if h is None:
            h = [f for f in amb.homs(A, B) if not self.theory.is_trivial(f)] + [FormalZero(A, B)]
            self._homs[(A, B)] = h
        return h

    def is_zero(self, a):
        return isinstance(a, FormalZero)

    def arrow(self, f):
        """An ambient map seen in the explicit category."""
        return FormalZero(f.source, f.target) if self.theory.is_trivial(f) else f

    def identity(self, A):
        return self.arrow(amb.identity(A))

    def compose(self, g, f):
        A, C = f.source, g.target
        if self.is_zero(f) or self.is_zero(g):
            return FormalZero(A, C)
        gf = g.after(f)
        return FormalZero(A, C) if self.theory.is_trivial(gf) else gf

    def to_fincat(self):
        """The category on ``objects`` as a FinCat, with a lookup from arrows to indices."""
        names = _unique_names(self.objects)
        oi = {A: i for i, A in enumerate(self.objects)}
        arrows, dom, cod, idx, items = [], [], [], {}, []
        for i, A in enumerate(self.objects):
            for j, B in enumerate(self.objects):
                for k, a in enumerate(self.hom(A, B)):
                    idx[a] = len(arrows)
                    items.append(a)
                    arrows.append(f"0[{names[i]},{names[j]}]" if self.is_zero(a)
                                  else f"{names[i]}->{names[j]}#{k}")
                    dom.append(i)
                    cod.append(j)
        ident = [idx[self.identity(A)] for A in self.objects]
        comp = {}
        for g, ag in enumerate(items):
            for f, af in enumerate(items):
                if cod[f] == dom[g]:
                    comp[(g, f)] = idx[self.compose(ag, af)]
        C = FinCat(names, arrows, dom, cod, ident, comp, f"explicit|{len(names)}")
        return C, oi, idx


def indiscrete_stable_description(corpus, theory="preord", max_chain=4):
    """Build the explicit category on ``corpus`` and compare it with the computed stable category
    of the indiscrete system: a bijection on every hom-set and equal composition tables."""
    th = get_theory(theory, max_chain)
    E = ExplicitStable(corpus, th)
    st = StableCategory("indiscrete", th, max_chain=max_chain)
    corpus = E.objects
    Z = amb.initial_object(amb.kind_of(corpus[0])) if corpus else None
    report = Report("indiscrete-description", dict(st.config(), objects=[A.name for A in corpus],
                                                   pairs=len(corpus) ** 2))
    if Z is not None and not th.is_trivial_object(Z):
        raise PreconditionError("the initial object is not trivial")
    t = _Tally(report)
    to_explicit = {}
    for A in corpus:
        for B in corpus:
            h = st.hom(A, B)
            images = []
            for c in h:
                rep = c.representative
                if c.is_zero:
                    a = FormalZero(A, B)
                elif rep.S0.is_empty() and rep.S1.is_whole():
                    a = rep.map  # S1 is all of A, so this is a map out of A
                else:
                    a = None
                images.append(a)
                to_explicit[(A, B, c.index)] = a
            explicit = E.hom(A, B)
            ok = None not in images and len(set(images)) == len(images) and set(images) == set(explicit)
            t.see("Cor7.2-bijection", f"{A.name}->{B.name}", ok,
                  {"source": A.name, "target": B.name, "stable": len(h), "explicit": len(explicit)})
    for A in corpus:
        for B in corpus:
            for C in corpus:
                for c1 in st.hom(A, B):
                    for c2 in st.hom(B, C):
                        lhs = to_explicit[(A, C, st.compose(c2, c1).index)]
                        rhs = E.compose(to_explicit[(B, C, c2.index)], to_explicit[(A, B, c1.index)])
                        t.see("Cor7.2-composition", f"{A.name}->{B.name}->{C.name}", lhs == rhs,
                              {"first": c1.describe(), "second": c2.describe(),
                               "stable": repr(lhs), "explicit": repr(rhs)})
    t.flush()
    return E, report


# -- sample functors and the forced formula ---------------------------------------------------------

def explicit_functor(objects, theory="preord"):
    """The quotient functor realized in the explicit category."""
    E = ExplicitStable(objects, theory)
    C, oi, idx = E.to_fincat()
    zero = oi[amb.initial_object(amb.kind_of(E.objects[0]))]
    return SampleFunctor("explicit", TargetCategory(C, zero), lambda A: oi[A],
                         lambda f: idx[E.arrow(f)]), E, idx


def fraction_objects(corpus):
    kind = amb.kind_of(corpus[0])
    return list(dict.fromkeys([amb.initial_object(kind), amb.terminal_object(kind)] + list(corpus)))


def default_sample_functors(objects, theory="preord"):
    """sigma for the indiscrete system (generic and explicit), sigma for the saturated and open
    systems, and the collapse to the zero category."""
    F_ind, _ = sigma_functor(StableCategory("indiscrete", theory), objects, "sigma[indiscrete]")
    F_exp, _, _ = explicit_functor(objects, theory)
    out = [F_ind, F_exp]
    kind = amb.kind_of(objects[0])
    for k in (("saturated", "open") if kind == "preord" else ("saturated",)):
        F, _ = sigma_functor(StableCategory(k, theory), objects, f"sigma[{k}]")
        out.append(F)
    out.append(collapse_functor())
    return out


@dataclass
class FractionFunctor:
    """``G`` on the explicit category, defined by the forced formula."""

    functor: SampleFunctor
    explicit: ExplicitStable
    xi_inverse: int
    one: object
    zero: object

    def __call__(self, a):
        F = self.functor
        C = F.cat
        if isinstance(a, FormalZero):
            A, B = a.source, a.target
            to_one = F.arr(amb.terminal_map(A, self.one))
            from_zero = F.arr(amb.initial_map(B))
            return C.compose(from_zero, C.compose(self.xi_inverse, to_one))
        return F.arr(a)


def fraction_functor(F, objects, theory="preord"):
    """``G(f) = F(f)`` on non-trivial maps and ``G(0_AB) = F(0_B) F(xi)^-1 F(1_A)``.

    Raises :class:`PreconditionError` when ``F(xi)`` is not invertible.
    """
    kind = amb.kind_of(objects[0])
    Z, one = amb.initial_object(kind), amb.terminal_object(kind)
    th = get_theory(theory)
    if not (th.is_trivial_object(Z) and th.is_trivial_object(one)):
        raise PreconditionError("initial and terminal objects must be trivial")
    xi = amb.initial_map(one)
    a = F.arr(xi)
    inv = F.cat.inverse(a)
    if inv is None:
        raise PreconditionError(f"{F.name} does not invert 0 -> 1 ({F.cat.arrows[a]} has no inverse)")
    return FractionFunctor(F, ExplicitStable(objects, th), inv, one, Z)


def verify_fractions(corpus, sample_functors=None, theory="preord", max_chain=4):
    """sigma(0 -> 1) is invertible, and the forced formula gives a functor for each sample ``F``.

    Objects are the corpus plus the initial and terminal objects. For each
    ``F`` the checks are: preservation of identities and composites, the
    trivial-composite case (non-trivial ``f``, ``g`` with ``g f`` trivial),
    ``F(u)`` given by the formula for every trivial ``u``, and ``G sigma = F``.
    """
    objects = fraction_objects(corpus)
    th = get_theory(theory, max_chain)
    kind = amb.kind_of(objects[0])
    Z, one = amb.initial_object(kind), amb.terminal_object(kind)
    if sample_functors is None:
        sample_functors = default_sample_functors(objects, theory)
    report = Report("verify-fractions", {"theory": th.name, "objects": [A.name for A in objects],
                                         "functors": [F.name for F in sample_functors]})
    t = _Tally(report)
    st = StableCategory("indiscrete", th, max_chain=max_chain)
    s = st.sigma(amb.initial_map(one))
    r = st.hom(one, Z)[0]
    ok = (len(st.hom(Z, one)) == 1 and len(st.hom(one, Z)) == 1
          and st.compose(r, s) == st.identity(Z) and st.compose(s, r) == st.identity(one))
    t.see("Prop7.3-xi-invertible", "0->1", ok, {"hom(0,1)": len(st.hom(Z, one)), "hom(1,0)": len(st.hom(one, Z))})
    for F in sample_functors:
        G = fraction_functor(F, objects, th)
        E, C = G.explicit, F.cat
        for A in objects:
            t.see("Prop7.3-identity", F.name, G(E.identity(A)) == C.ident[F.obj(A)], {"object": A.name})
            for B in objects:
                for f in amb.homs(A, B):
                    ok = G(E.arrow(f)) == F.arr(f)
                    t.see("Prop7.3-factorization", F.name, ok, {"map": witness_map(f)})
                    if th.is_trivial(f):
                        t.see("Prop7.3-trivial-maps", F.name, G(FormalZero(A, B)) == F.arr(f),
                              {"map": witness_map(f)})
        for A in objects:
            for B in objects:
                for C_ in objects:
                    for a in E.hom(A, B):
                        for b in E.hom(B, C_):
                            ok = G(E.compose(b, a)) == C.compose(G(b), G(a))
                            wit = {"first": repr(a), "second": repr(b)}
                            t.see("Prop7.3-composition", F.name, ok, wit)
                            if not (E.is_zero(a) or E.is_zero(b)) and th.is_trivial(b.after(a)):
                                t.see("Prop7.3-trivial-composite", F.name, ok,
                                      dict(wit, first=witness_map(a), second=witness_map(b)))
    t.flush()
    return report
