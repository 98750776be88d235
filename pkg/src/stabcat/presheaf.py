"""Preordered objects in presheaf toposes over a finite poset.

A preordered presheaf gives a preorder ``A(p)`` at every index point and a
monotone restriction ``A(q) -> A(p)`` for ``p <= q``. Its internal
subobjects are families of subsets closed under restriction. Saturation is
decided in two ways: pointwise, and through the factorization ``delta`` of
the pullback of ``(S0 x A0) u (A0 x S0)`` along ``(d0, d1): A1 -> A0 x A0``,
built explicitly as presheaves of sets.

The main example is the preordered sheaf on the Sierpinski space,
``{a1<b1, a2<b2} -> {a<b}``, realized over the two-point chain ``U <= X``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .preord import FinPreord, MonotoneMap, SubPreord, _bits, chain, disjoint_union, discrete, from_pairs
from .report import Report


class FinPoset:
    """A finite partial order used as an index."""

    def __init__(self, elements, pairs=(), name="I"):
        P = from_pairs(elements, pairs, name)
        if not P.is_antisymmetric():
            raise InputError(f"index {name} is not antisymmetric")
        self.order = P
        self.name = name

    @property
    def elements(self):
        return self.order.carrier

    def le(self, p, q):
        return self.order.le(p, q)

    def relations(self):
        """Pairs ``(p, q)`` with ``p <= q``, identities included."""
        return [(p, q) for p in self.elements for q in self.elements if self.le(p, q)]

    def __repr__(self):
        return f"FinPoset({self.name}: {self.order.describe()['order']})"


class PreordPresheaf:
    """Stages ``A(p)`` and restrictions ``A(q) -> A(p)`` for ``p <= q``."""

    def __init__(self, index, stages, restrictions, name="A"):
        self.index = index
        self.stages = dict(stages)
        self.name = name
        self.restrictions = {}
        for p in index.elements:
            if p not in self.stages:
                raise InputError(f"{name}: no stage at {p}")
        for p, q in index.relations():
            if p == q:
                r = restrictions.get((p, p))
                if r is not None and tuple(r.images) != tuple(range(len(self.stages[p]))):
                    raise InputError(f"{name}: restriction along {p} <= {p} is not the identity")
                self.restrictions[(p, p)] = MonotoneMap(self.stages[p], self.stages[p],
                                                        tuple(range(len(self.stages[p]))), check=False)
                continue
            r = restrictions.get((p, q))
            if r is None:
                raise InputError(f"{name}: missing restriction for {p} <= {q}")
            if r.source != self.stages[q] or r.target != self.stages[p]:
                raise InputError(f"{name}: restriction for {p} <= {q} has the wrong endpoints")
            self.restrictions[(p, q)] = r
        for p, q in index.relations():
            for q2, s in index.relations():
                if q2 != q:
                    continue
                lhs = self.restrictions[(p, q)].after(self.restrictions[(q, s)])
                if lhs.images != self.restrictions[(p, s)].images:
                    raise InputError(f"{name}: restrictions do not compose along {p} <= {q} <= {s}")

    def r(self, p, q):
        return self.restrictions[(p, q)]

    def describe(self):
        return {"kind": "presheaf", "name": self.name, "index": list(self.index.elements),
                "stages": {p: A.describe() for p, A in self.stages.items()},
                "restrictions": {f"{p}<={q}": r.table() for (p, q), r in self.restrictions.items() if p != q}}

    def __repr__(self):
        return f"PreordPresheaf({self.name} over {self.index.name})"


@dataclass(frozen=True)
class InternalSub:
    """Per stage: a set of elements (mask) and a set of order pairs; full by default."""

    ambient: PreordPresheaf
    objects: tuple  # (point, mask) pairs in index order
    arrows: tuple = None  # (point, frozenset of index pairs); None means full

    def mask(self, p):
        return dict(self.objects)[p]

    def pairs(self, p):
        if self.arrows is None:
            A = self.ambient.stages[p]
            m = self.mask(p)
            return frozenset((i, j) for i in _bits(m) for j in _bits(m) if A.leq[i, j])
        return dict(self.arrows)[p]

    def label(self):
        parts = []
        for p, m in self.objects:
            A = self.ambient.stages[p]
            parts.append(f"{p}:{{{','.join(A.names_of(m))}}}")
        return "[" + " ".join(parts) + "]"


def internal_sub(A, members, arrows=None):
    """Build and validate an internal subobject from ``{point: [element names]}``."""
    objs = tuple((p, A.stages[p].mask_of(members.get(p, ()))) for p in A.index.elements)
    arr = None
    if arrows is not None:
        arr = tuple((p, frozenset((A.stages[p].index(x), A.stages[p].index(y)) for x, y in arrows.get(p, ())))
                    for p in A.index.elements)
    S = InternalSub(A, objs, arr)
    problem = sub_problem(S)
    if problem:
        raise InputError(f"not an internal subobject of {A.name}: {problem}")
    return S


def sub_problem(S):
    A = S.ambient
    for p in A.index.elements:
        st = A.stages[p]
        m = S.mask(p)
        prs = S.pairs(p)
        for i, j in prs:
            if not (m >> i & 1 and m >> j & 1 and st.leq[i, j]):
                return f"pair ({st.carrier[i]},{st.carrier[j]}) at {p} is not an order pair inside the subobject"
        for i in _bits(m):
            if (i, i) not in prs:
                return f"identity of {st.carrier[i]} at {p} missing"
        for i, j in prs:
            for j2, k in prs:
                if j2 == j and (i, k) not in prs:
                    return f"composite at {p} missing"
    for p, q in A.index.relations():
        if p == q:
            continue
        r = A.r(p, q)
        if r.image_mask(S.mask(q)) & ~S.mask(p):
            return f"restriction {q} -> {p} leaves the subobject"
        sp = S.pairs(p)
        for i, j in S.pairs(q):
            if (r.images[i], r.images[j]) not in sp:
                return f"restriction {q} -> {p} sends an arrow outside the subobject"
    return None


def all_internal_subs(A):
    """Every full internal subobject (families of subsets closed under restriction)."""
    pts = A.index.elements
    out = []
    for masks in itertools.product(*[range(1 << len(A.stages[p])) for p in pts]):
        S = InternalSub(A, tuple(zip(pts, masks)))
        if all(not (A.r(p, q).image_mask(S.mask(q)) & ~S.mask(p)) for p, q in A.index.relations() if p != q):
            out.append(S)
    return out


def whole(A):
    return InternalSub(A, tuple((p, A.stages[p].full_mask) for p in A.index.elements))


def nothing(A):
    return InternalSub(A, tuple((p, 0) for p in A.index.elements))


def sub_union(S, T):
    """Pointwise union; with full subobjects the arrows are the union of the two arrow sets."""
    A = S.ambient
    objs = tuple((p, S.mask(p) | T.mask(p)) for p in A.index.elements)
    arrs = tuple((p, S.pairs(p) | T.pairs(p)) for p in A.index.elements)
    return InternalSub(A, objs, arrs)


def sub_intersection(S, T):
    A = S.ambient
    objs = tuple((p, S.mask(p) & T.mask(p)) for p in A.index.elements)
    arrs = tuple((p, S.pairs(p) & T.pairs(p)) for p in A.index.elements)
    return InternalSub(A, objs, arrs)


def same_sub(S, T):
    A = S.ambient
    return all(S.mask(p) == T.mask(p) and S.pairs(p) == T.pairs(p) for p in A.index.elements)


# -- pointwise saturation ------------------------------------------------------------------

def _pointwise(S, use_dom, use_cod):
    A = S.ambient
    for p in A.index.elements:
        st = A.stages[p]
        m = S.mask(p)
        prs = S.pairs(p)
        for i, j in zip(*np.nonzero(st.leq)):
            i, j = int(i), int(j)
            hit = (use_dom and m >> i & 1) or (use_cod and m >> j & 1)
            if hit and (i, j) not in prs:
                return False, {"stage": p, "arrow": [st.carrier[i], st.carrier[j]]}
    return True, None


def is_left_saturated(S):
    """An arrow whose codomain lies in ``S`` lies in ``S``."""
    return _pointwise(S, False, True)[0]


def is_right_saturated(S):
    """An arrow whose domain lies in ``S`` lies in ``S``."""
    return _pointwise(S, True, False)[0]


def is_saturated_pointwise(S):
    return _pointwise(S, True, True)[0]


# -- the factorization route: presheaves of sets -------------------------------------------

class SetPresheaf:
    """Sets ``X(p)`` with restriction functions ``X(q) -> X(p)`` for ``p <= q``."""

    def __init__(self, index, sets, restrict):
        self.index = index
        self.sets = {p: tuple(v) for p, v in sets.items()}
        self.restrict = restrict  # (p, q) -> dict

    def check(self):
        for p, q in self.index.relations():
            r = self.restrict[(p, q)]
            if any(r[x] not in self.sets[p] for x in self.sets[q]):
                return False
        return True


def _element_presheaves(A):
    """``A0``, ``A1`` and the maps ``d0``, ``d1`` of the internal preorder."""
    I = A.index
    A0 = SetPresheaf(I, {p: range(len(A.stages[p])) for p in I.elements},
                     {(p, q): dict(enumerate(A.r(p, q).images)) for p, q in I.relations()})
    arrows = {p: [(int(i), int(j)) for i, j in zip(*np.nonzero(A.stages[p].leq))] for p in I.elements}
    A1 = SetPresheaf(I, arrows, {(p, q): {(i, j): (A.r(p, q).images[i], A.r(p, q).images[j])
                                           for i, j in arrows[q]} for p, q in I.relations()})
    d0 = {p: {f: f[0] for f in arrows[p]} for p in I.elements}
    d1 = {p: {f: f[1] for f in arrows[p]} for p in I.elements}
    return A0, A1, d0, d1


def _product(X, Y):
    I = X.index
    sets = {p: [(x, y) for x in X.sets[p] for y in Y.sets[p]] for p in I.elements}
    res = {(p, q): {(x, y): (X.restrict[(p, q)][x], Y.restrict[(p, q)][y]) for x, y in sets[q]}
           for p, q in I.relations()}
    return SetPresheaf(I, sets, res)


def _is_natural(X, Y, alpha):
    return all(Y.restrict[(p, q)][alpha[q][x]] == alpha[p][X.restrict[(p, q)][x]]
               for p, q in X.index.relations() for x in X.sets[q])


def _preimage(alpha, sub):
    """Pointwise inverse image of a subpresheaf along a natural transformation."""
    return {p: frozenset(x for x, y in alpha[p].items() if y in sub[p]) for p in alpha}


def _lift(sub_from, sub_into, X):
    """The factorization of the inclusion ``sub_from -> X`` through ``sub_into -> X``, or ``None``.

    Both are subpresheaves of ``X``; the lift is the identity on elements and
    must be natural, which is checked explicitly.
    """
    delta = {}
    for p in X.index.elements:
        if not sub_from[p] <= sub_into[p]:
            missing = sorted(sub_from[p] - sub_into[p])
            return None, {"stage": p, "not_factoring": missing[:3]}
        delta[p] = {x: x for x in sub_from[p]}
    for p, q in X.index.relations():
        r = X.restrict[(p, q)]
        for x in sub_from[q]:
            if r[delta[q][x]] != delta[p][r[x]]:
                return None, {"stage": q, "not_natural": x}
    return delta, None


def saturation_factorization(S, which="both"):
    """Build ``A'_1`` as a pullback and try to factor it through ``S1``.

    ``which`` is ``"both"`` (the coherent condition), ``"left"`` (pull back
    ``S0`` along ``d1``) or ``"right"`` (along ``d0``). Returns
    ``(delta or None, witness)``.
    """
    A = S.ambient
    I = A.index
    A0, A1, d0, d1 = _element_presheaves(A)
    S0 = {p: frozenset(_bits(S.mask(p))) for p in I.elements}
    S1 = {p: frozenset(S.pairs(p)) for p in I.elements}
    if which == "both":
        P = _product(A0, A0)
        pair = {p: {f: (d0[p][f], d1[p][f]) for f in A1.sets[p]} for p in I.elements}
        if not _is_natural(A1, P, pair):
            raise InputError("(d0, d1) is not natural")
        W = {p: frozenset(xy for xy in P.sets[p] if xy[0] in S0[p] or xy[1] in S0[p]) for p in I.elements}
        A1p = _preimage(pair, W)
    else:
        d = d1 if which == "left" else d0
        A1p = _preimage(d, S0)
    return _lift(A1p, S1, A1)


def is_saturated_internal(S, A=None, route="pointwise"):
    """Saturation of an internal subobject; ``route`` is ``"pointwise"`` or ``"factorization"``."""
    if A is not None and S.ambient is not A:
        raise InputError("subobject of a different presheaf")
    if route == "pointwise":
        return is_saturated_pointwise(S)
    return saturation_factorization(S, "both")[0] is not None


def complement(S):
    """A full internal subobject ``T`` with ``S n T = 0`` and ``S u T`` everything, or ``None``."""
    A = S.ambient
    W = whole(A)
    for T in all_internal_subs(A):
        if all(S.mask(p) & T.mask(p) == 0 for p in A.index.elements) and same_sub(sub_union(S, T), W):
            return T
    return None


def is_complemented_sub(S, A=None):
    return complement(S) is not None


# -- examples -------------------------------------------------------------------------------

def sierpinski_presheaf(with_point_stage=True):
    """``{a1<b1, a2<b2} -> {a<b}`` over ``U <= X``; without the point stage, just the stage ``X``."""
    AX = disjoint_union(chain("a1", "b1"), chain("a2", "b2"), name="A(X)")
    if not with_point_stage:
        I = FinPoset(["X"], name="1")
        return PreordPresheaf(I, {"X": AX}, {}, name="Sierpinski|X")
    AU = chain("a", "b", name="A(U)")
    I = FinPoset(["U", "X"], [("U", "X")], name="Sierpinski")
    r = MonotoneMap(AX, AU, {"a1": "a", "b1": "b", "a2": "a", "b2": "b"})
    return PreordPresheaf(I, {"U": AU, "X": AX}, {("U", "X"): r}, name="Sierpinski")


def sierpinski_subs(A):
    """The two subobjects ``{ai<bi} -> {a<b}``."""
    has_u = "U" in A.index.elements
    out = []
    for i in (1, 2):
        members = {"X": [f"a{i}", f"b{i}"]}
        if has_u:
            members["U"] = ["a", "b"]
        out.append(internal_sub(A, members))
    return out


def constant_presheaf(P, index=None, name=None):
    """The constant presheaf on a preorder (identity restrictions)."""
    index = index or FinPoset(["U", "X"], [("U", "X")], name="Sierpinski")
    stages = {p: P for p in index.elements}
    ident = MonotoneMap(P, P, tuple(range(len(P))), check=False)
    return PreordPresheaf(index, stages, {(p, q): ident for p, q in index.relations() if p != q},
                          name=name or f"const({P.name})")


def collapse_presheaf():
    """``{a<b} -> {*}`` over ``U <= X``: the chain at ``X`` restricts to a point."""
    I = FinPoset(["U", "X"], [("U", "X")], name="Sierpinski")
    AX = chain("a", "b", name="C2")
    AU = from_pairs(["*"], name="1")
    return PreordPresheaf(I, {"U": AU, "X": AX}, {("U", "X"): MonotoneMap(AX, AU, (0, 0), check=False)},
                          name="C2->1")


def presheaf_corpus():
    from .corpus import P3
    return [
        sierpinski_presheaf(),
        sierpinski_presheaf(with_point_stage=False),
        constant_presheaf(P3()),
        constant_presheaf(disjoint_union(chain("p", "q"), from_pairs(["t"]), name="C2+1")),
        constant_presheaf(discrete("a", "b", name="D2")),
        collapse_presheaf(),
    ]


# -- suites -----------------------------------------------------------------------------------

def verify_internal_saturation(corpus):
    """Saturated implies left and right saturated; the converse (unions are effective pointwise).

    Every full internal subobject of every corpus presheaf is examined, and
    saturation is decided by both routes, which must agree.
    """
    report = Report("verify-internal", {"objects": [A.name for A in corpus]})
    for A in corpus:
        subs = all_internal_subs(A)
        counts = {"forward": 0, "converse": 0, "routes": 0, "one-sided": 0}
        bad = {}
        for S in subs:
            sat = is_saturated_pointwise(S)
            sat_f = saturation_factorization(S, "both")[0] is not None
            left = is_left_saturated(S)
            right = is_right_saturated(S)
            left_f = saturation_factorization(S, "left")[0] is not None
            right_f = saturation_factorization(S, "right")[0] is not None
            checks = {
                "routes": sat == sat_f and left == left_f and right == right_f,
                "forward": (not sat) or (left and right),
                "converse": (not (left and right)) or sat,
            }
            if left != right:
                counts["one-sided"] += 1
                checks["one-sided-excluded"] = not sat
            for k, ok in checks.items():
                counts[k] = counts.get(k, 0) + 1
                if not ok and k not in bad:
                    bad[k] = {"object": A.name, "sub": S.label(), "saturated": sat, "left": left,
                              "right": right, "saturated_by_factorization": sat_f}
        for k in ("routes", "forward", "converse", "one-sided-excluded"):
            if k not in counts:
                continue
            axiom = {"routes": "saturation-routes-agree", "forward": "Lemma2.10-forward",
                     "converse": "Lemma2.10-converse", "one-sided-excluded": "Lemma2.10-one-sided"}[k]
            report.add(axiom, A.name, k not in bad, bad.get(k), note=f"{counts[k]} subobjects")
    return report


def _pointwise_cc(A):
    """The preorder compatibility suite at every stage, plus naturality of the pointwise
    canonical sequences along the restrictions."""
    from .pretorsion import PreordTheory
    from .suites.pretorsion import verify_cc
    th = PreordTheory()
    stages = list(dict.fromkeys(A.stages.values()))
    rep = verify_cc(stages, "saturated", "preord")
    for (p, q), r in A.restrictions.items():
        if p == q:
            continue
        eta_p, eta_q = th.phi(A.stages[p])[1], th.phi(A.stages[q])[1]
        ok = th.phi_map(r).after(eta_q) == eta_p.after(r)
        rep.add("pointwise-phi-natural", f"{A.name}:{p}<={q}", ok)
        ok = th.tau_map(r).images == r.images
        rep.add("pointwise-tau-natural", f"{A.name}:{p}<={q}", ok)
    return rep


def sierpinski_demo(with_point_stage=True, intersect=False):
    """Certify the three claims about the two subobjects ``{ai<bi} -> {a<b}``.

    Both are saturated (by both routes), neither is complemented, and their
    union is the whole object. With ``intersect`` the intersection of the
    two is also checked to be saturated. Without the point stage the two
    become complemented, as in plain sets.
    """
    A = sierpinski_presheaf(with_point_stage)
    S1, S2 = sierpinski_subs(A)
    report = Report("sierpinski-demo", {"presheaf": A.describe(), "subobjects": [S1.label(), S2.label()],
                                        "point_stage": with_point_stage})
    for S in (S1, S2):
        pw = is_saturated_pointwise(S)
        fz = saturation_factorization(S)[0] is not None
        report.add("saturated", S.label(), pw and fz, {"pointwise": pw, "factorization": fz})
    for S in (S1, S2):
        T = complement(S)
        expected_none = with_point_stage
        ok = (T is None) if expected_none else (T is not None)
        axiom = "not-complemented" if with_point_stage else "complemented"
        report.add(axiom, S.label(), ok, {"complement": None if T is None else T.label()})
    report.add("union-is-whole", f"{S1.label()} u {S2.label()}", same_sub(sub_union(S1, S2), whole(A)),
               {"union": sub_union(S1, S2).label()})
    if intersect:
        M = sub_intersection(S1, S2)
        report.add("intersection-saturated", M.label(), is_saturated_pointwise(M)
                   and saturation_factorization(M)[0] is not None)
    report.extend(_pointwise_cc(A))
    return report
