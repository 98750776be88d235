"""Checks for coherent systems: CS1 to CS9, effectiveness, and the behaviour of distinguished epis."""

from __future__ import annotations

import numpy as np

from .. import ambient as amb
from ..preord import SubPreord, _bits, reflexive_transitive_closure
from ..report import Report, witness_map
from ..subobjects import image_sub, preimage_sub, pushout_holds
from ..systems import is_distinguished_epi, system


def small_battery(kind, corpus=None):
    """Default probe objects for the pushout test.

    For preorders the preorders on at most two elements are enough: a
    failing pair of maps into any preorder can be detected by composing with
    the indicator of an up-set into the chain ``0 < 1``. For categories the
    corpus itself is used.
    """
    if kind == "preord":
        from ..corpus import preorder_corpus
        return preorder_corpus(2)
    return list(corpus or ())


def join_is_induced(S, T):
    """Whether the order generated by ``S`` and ``T`` on ``S u T`` is the induced one.

    Only then is the carrier-level union the join in the lattice of all
    sub-preorders; otherwise the join has fewer relations than ``A`` induces.
    """
    A = S.ambient
    idx = list(_bits(S.mask | T.mask))
    pos = {i: k for k, i in enumerate(idx)}
    gen = np.zeros((len(idx), len(idx)), dtype=bool)
    for part in (S.mask, T.mask):
        for i in _bits(part):
            for j in _bits(part):
                if A.leq[i, j]:
                    gen[pos[i], pos[j]] = True
    if not idx:
        return True
    return bool(np.array_equal(reflexive_transitive_closure(gen), A.leq[np.ix_(idx, idx)]))


class _Tally:
    """One record per (axiom, subject) keeping the first witness of failure."""

    def __init__(self, report):
        self.report = report
        self.state = {}

    def see(self, axiom, subject, ok, witness=None):
        key = (axiom, subject)
        cur = self.state.get(key)
        if cur is None:
            self.state[key] = [ok, None if ok else witness, 1]
        else:
            cur[2] += 1
            if not ok and cur[0]:
                cur[0], cur[1] = False, witness

    def flush(self):
        for (axiom, subject), (ok, w, n) in self.state.items():
            self.report.add(axiom, subject, ok, w, note=f"{n} instances")
        self.state.clear()


def verify_cs(corpus, kind, battery=None, morphisms=True, square_max_size=3, effective=None):
    """Check a coherent system on a corpus of ambient objects.

    ``morphisms`` toggles the CS3/CS4 sweep over every corpus morphism; the
    distinguished-epi checks (orthogonality and composition) run over corpus
    objects with at most ``square_max_size`` elements. ``effective`` forces
    or skips CS6 (default: run it).
    """
    sys_ = system(kind)
    corpus = [A for A in corpus if sys_.applies_to(A)]
    akind = amb.kind_of(corpus[0]) if corpus else "preord"
    if battery is None:
        battery = small_battery(akind, corpus)
    report = Report("verify-cs", {
        "system": sys_.name, "objects": len(corpus),
        "battery": [X.name for X in battery], "square_max_size": square_max_size,
    })
    t = _Tally(report)
    lattices = {A: sys_.lattice(A) for A in corpus}

    for A, lat in lattices.items():
        _check_object(t, sys_, A, lat, battery if effective is not False else None)
    t.flush()
    if morphisms:
        _check_morphisms(t, sys_, corpus, lattices)
        t.flush()
    small = [A for A in corpus if amb.carrier_size(A) <= square_max_size]
    _check_epis(t, sys_, small)
    t.flush()
    return report


def _check_object(t, sys_, A, lat, battery):
    name = A.name
    members = lat.members
    # CS1
    t.see("CS1", name, amb.nothing(A) in lat and amb.whole(A) in lat,
          {"object": A.describe(), "lattice": lat.labels()})
    # CS2, CS7
    for i, S in enumerate(members):
        for T in members[i:]:
            U = amb.sub_union(S, T)
            ok = sys_.is_distinguished(U)
            if ok and isinstance(S, SubPreord):
                ok = join_is_induced(S, T)
            t.see("CS2", name, ok, {"object": A.describe(), "S": S.label(), "T": T.label(),
                                    "union": U.label()})
            M = amb.sub_intersection(S, T)
            t.see("CS7", name, sys_.is_distinguished(M),
                  {"object": A.describe(), "S": S.label(), "T": T.label(), "intersection": M.label()})
    # CS8
    for R in members:
        for i, S in enumerate(members):
            for T in members[i:]:
                lhs = amb.sub_intersection(R, amb.sub_union(S, T))
                rhs = amb.sub_union(amb.sub_intersection(R, S), amb.sub_intersection(R, T))
                t.see("CS8", name, amb.sub_key(lhs) == amb.sub_key(rhs),
                      {"object": A.describe(), "R": R.label(), "S": S.label(), "T": T.label(),
                       "lhs": lhs.label(), "rhs": rhs.label()})
    # CS5: R distinguished in S, S distinguished in A  =>  R distinguished in A
    for S in members:
        So = S.as_object()
        if not sys_.applies_to(So):
            continue
        inc = S.inclusion()
        for R in sys_.lattice(So):
            RA = image_sub(inc, R)
            t.see("CS5", name, sys_.is_distinguished(RA),
                  {"object": A.describe(), "S": S.label(), "R_in_S": R.label()})
    # CS9: S distinguished in A is distinguished in every induced T with S <= T
    n = amb.carrier_size(A)
    for S in members:
        key = S.mask if isinstance(S, SubPreord) else S.obj_mask
        for tm in range(1 << n):
            if key & ~tm:
                continue
            T = amb.full_on(A, tm)
            ST = S.sub_of(T)
            t.see("CS9", name, sys_.is_distinguished(ST),
                  {"object": A.describe(), "S": S.label(), "T": T.label()})
    # CS6
    if battery is not None:
        for i, S in enumerate(members):
            for T in members[i:]:
                res = pushout_holds(S, T, battery)
                t.see("CS6", name, res.holds, dict(res.witness or {}, object=A.describe()))


def _check_morphisms(t, sys_, corpus, lattices):
    for X in corpus:
        for Y in corpus:
            lat = lattices[Y]
            members = lat.members
            joins = lat.join_table()
            meets = lat.meet_table()
            for f in amb.homs(X, Y):
                pre = [preimage_sub(f, S) for S in members]
                bad = next((k for k, P in enumerate(pre) if not sys_.is_distinguished(P)), None)
                t.see("CS3", X.name, bad is None, None if bad is None else {
                    "map": witness_map(f), "target": Y.describe(), "S": members[bad].label(),
                    "preimage": pre[bad].label()})
                for i in range(len(members)):
                    for j in range(i, len(members)):
                        for table, op, label in ((joins, amb.sub_union, "union"),
                                                 (meets, amb.sub_intersection, "intersection")):
                            k = table[i][j]
                            if k is None:
                                continue
                            ok = amb.sub_key(pre[k]) == amb.sub_key(op(pre[i], pre[j]))
                            t.see("CS4", X.name, ok, None if ok else {
                                "map": witness_map(f), "target": Y.describe(), "operation": label,
                                "S": members[i].label(), "T": members[j].label()})


def _check_epis(t, sys_, corpus):
    """Orthogonality of distinguished epis against distinguished monos, and closure under composition."""
    epis = []
    for A in corpus:
        for B in corpus:
            for e in amb.homs(A, B):
                if amb.is_epi(e) and is_distinguished_epi(e, sys_):
                    epis.append(e)
    for e in epis:
        A, B = e.source, e.target
        for C in corpus:
            homs_BC = amb.homs(B, C)
            for S in sys_.lattice(C):
                So = S.as_object()
                m = S.inclusion()
                diag = {}
                for d in amb.homs(B, So):
                    diag.setdefault(m.after(d), []).append(d)
                for v in homs_BC:
                    ve = v.after(e)
                    if not _contains(S, image_sub(ve)):
                        continue  # no u with m u = v e
                    u = ve.corestrict(S)
                    fill = [d for d in diag.get(v, ()) if d.after(e) == u]
                    t.see("orthogonality", e.source.name, len(fill) == 1, {
                        "epi": witness_map(e), "mono": S.label(), "in": C.describe(),
                        "v": witness_map(v), "fillers": len(fill)})
    by_source = {}
    for e in epis:
        by_source.setdefault(e.source, []).append(e)
    for e1 in epis:
        for e2 in by_source.get(e1.target, ()):
            c = e2.after(e1)
            ok = bool(amb.is_epi(c)) and bool(is_distinguished_epi(c, sys_))
            t.see("epi-composition", e1.source.name, ok,
                  {"first": witness_map(e1), "second": witness_map(e2)})
    # if g f is a distinguished epi so is g
    for A in corpus:
        for B in corpus:
            for f in amb.homs(A, B):
                for C in corpus:
                    for g in amb.homs(B, C):
                        gf = g.after(f)
                        if amb.is_epi(gf) and is_distinguished_epi(gf, sys_):
                            ok = bool(amb.is_epi(g)) and bool(is_distinguished_epi(g, sys_))
                            t.see("epi-cancellation", A.name, ok,
                                  {"f": witness_map(f), "g": witness_map(g)})


def _contains(S, img):
    if isinstance(S, SubPreord):
        return img.mask & ~S.mask == 0
    return img.obj_mask & ~S.obj_mask == 0 and img.arr_mask & ~S.arr_mask == 0
