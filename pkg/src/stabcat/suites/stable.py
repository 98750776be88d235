"""Checks on the stable category: zero object and zero maps, the induced torsion theory,
collapse isomorphisms, zero-pushouts and the congruence laws."""

from __future__ import annotations

import time

from .. import ambient as amb
from ..errors import StabcatError
from ..report import Report, witness_map
from ..stable import (
    StableCategory,
    exhaustive_partition,
    find_congruence,
    iota,
    union_collapse_iso,
    zero_partial,
)
from .systems import _Tally


def default_battery(kind_of_ambient, corpus, max_size=3):
    if kind_of_ambient == "preord":
        from ..corpus import preorder_corpus
        return preorder_corpus(max_size)
    return list(corpus)


def _stable(kind, theory, stable=None, **kw):
    return stable if stable is not None else StableCategory(kind, theory, **kw)


def _akind(corpus):
    return amb.kind_of(corpus[0]) if corpus else "preord"


# -- zero object and zero maps ------------------------------------------------------------

def verify_stable_zero(corpus, kind, theory="preord", battery=None, stable=None, check_overlap=True,
                       max_chain=4):
    """0 is a zero object; a triple is zero iff its map is trivial; an object is zero iff trivial.

    Hom-sets ``A -> B`` are examined for ``A`` in the corpus and ``B`` in the
    battery (default: preorders on at most three elements, or the corpus).
    """
    st = _stable(kind, theory, stable, check_overlap=check_overlap, max_chain=max_chain)
    th = st.theory
    corpus = [A for A in corpus if st.system.applies_to(A)]
    akind = _akind(corpus)
    battery = default_battery(akind, corpus) if battery is None else list(battery)
    report = Report("verify-stable-zero", dict(st.config(), objects=len(corpus),
                                               battery=[B.name for B in battery]))
    t = _Tally(report)
    Z = amb.initial_object(akind)
    for A in corpus:
        n_in, n_out = len(st.hom(Z, A)), len(st.hom(A, Z))
        t.see("Prop5.2-zero-object", A.name, n_in == 1 and n_out == 1,
              {"object": A.describe(), "classes_from_0": n_in, "classes_to_0": n_out})
        # the two maps of the proof, composed on A
        out = zero_partial(A, Z)
        back = zero_partial(Z, A)
        round_trip = st.class_of(st.compose_partial(back, out))
        trivial = th.is_trivial_object(A)
        same = round_trip == st.identity(A)
        t.see("Prop5.6-trivial-iff-zero-object", A.name, same == trivial,
              {"object": A.describe(), "trivial": trivial, "identity_is_zero": same})
    for A in corpus:
        for B in battery:
            h = st.hom(A, B)
            for c in h:
                rep_trivial = th.is_trivial(c.representative.map)
                t.see("StableMorphism-zero-flag", A.name, c.is_zero == rep_trivial,
                      {"class": c.describe(), "representative_trivial": rep_trivial})
                for p in c.class_members:
                    triv = th.is_trivial(p.map)
                    t.see("Lemma5.4", A.name, c.is_zero == triv,
                          {"partial": p.describe(), "map_trivial": triv, "class_is_zero": c.is_zero})
                    # restricted to S0 a triple must be zero
                    S0o = p.S0.as_object()
                    r = st.compose_partial(p, iota(p.S0.inclusion()))
                    zero_on_S0 = st.hom(S0o, B).class_of(r).is_zero
                    t.see("Lemma5.4-zero-on-S0", A.name, zero_on_S0,
                          {"partial": p.describe(), "restriction_to_S0": r.describe()})
            for f in amb.homs(A, B):
                z = st.sigma(f).is_zero
                triv = th.is_trivial(f)
                t.see("Cor5.5", A.name, z == triv, {"map": witness_map(f), "trivial": triv, "zero": z})
    t.flush()
    return report


# -- the torsion theory on the stable category --------------------------------------------------

def verify_stable_torsion(corpus, kind, theory="preord", battery=None, stable=None, max_chain=4):
    """PT1 and the kernel/cokernel properties of ``tau(A) -> A -> phi(A)`` in the stable category.

    Kernel: a stable ``m: X -> A`` with ``eta m = 0`` factors exactly once
    through ``eps``, and a morphism with ``eta m != 0`` does not factor.
    Cokernel: dually through ``eta``. ``X`` runs over the battery.
    Objects whose ``phi`` is infinite are skipped and listed in the config.
    """
    st = _stable(kind, theory, stable, max_chain=max_chain)
    th = st.theory
    corpus = [A for A in corpus if st.system.applies_to(A)]
    akind = _akind(corpus)
    battery = default_battery(akind, corpus) if battery is None else list(battery)
    skipped = []
    report = Report("verify-stable-torsion", dict(st.config(), objects=len(corpus),
                                                  battery=[B.name for B in battery], skipped=skipped))
    t = _Tally(report)
    every = list(dict.fromkeys(list(corpus) + list(battery)))
    torsion = [A for A in every if th.is_torsion(A)]
    free = [B for B in every if th.is_torsion_free(B)]
    for A in torsion:
        for B in free:
            h = st.hom(A, B)
            t.see("PT1", A.name, all(c.is_zero for c in h),
                  {"torsion": A.describe(), "torsion_free": B.describe(), "classes": len(h)})
    for A in corpus:
        if getattr(th, "bounded", lambda A: False)(A):
            skipped.append(A.name)
            continue
        seq = th.canonical_sequence(A)
        TA, eps, FA, eta = seq.torsion_part, seq.counit, seq.torsionfree_part, seq.unit
        s_eps, s_eta = iota(eps), iota(eta)
        trivial = th.is_trivial_object(A)
        t.see("Thm5.7-trivial-iff-zero", A.name, trivial == (len(st.hom(A, A)) == 1),
              {"object": A.describe(), "trivial": trivial})
        for X in battery:
            # kernel
            through = {}
            for k in st.hom(X, TA):
                through.setdefault(st.class_of(st.compose_partial(s_eps, k.representative)), []).append(k)
            for m in st.hom(X, A):
                killed = st.class_of(st.compose_partial(s_eta, m.representative)).is_zero
                n = len(through.get(m, ()))
                t.see("Thm5.7-kernel", A.name, n == (1 if killed else 0),
                      {"object": A.describe(), "test_object": X.name, "morphism": m.describe(),
                       "eta_m_zero": killed, "factorizations": n})
            # cokernel
            through = {}
            for h in st.hom(FA, X):
                through.setdefault(st.class_of(st.compose_partial(h.representative, s_eta)), []).append(h)
            for m in st.hom(A, X):
                killed = st.class_of(st.compose_partial(m.representative, s_eps)).is_zero
                n = len(through.get(m, ()))
                t.see("Thm5.7-cokernel", A.name, n == (1 if killed else 0),
                      {"object": A.describe(), "test_object": X.name, "morphism": m.describe(),
                       "m_eps_zero": killed, "factorizations": n})
    t.flush()
    return report


# -- collapse isomorphisms ---------------------------------------------------------------------

def verify_collapse(corpus, kind, theory="preord", stable=None, max_chain=4):
    """Every cover ``A = S u T`` by distinguished subobjects with ``T`` trivial yields ``A ~ S``.

    Each certificate carries the two congruence diagrams; the composites are
    also compared with the identities in the computed hom-sets.
    """
    st = _stable(kind, theory, stable, max_chain=max_chain)
    th = st.theory
    corpus = [A for A in corpus if st.system.applies_to(A)]
    report = Report("verify-collapse", dict(st.config(), objects=len(corpus)))
    t = _Tally(report)
    for A in corpus:
        members = st.system.lattice(A).members
        full = amb.sub_key(amb.whole(A))
        for S in members:
            for T in members:
                if amb.sub_key(amb.sub_union(S, T)) != full or not th.is_trivial_object(T.as_object()):
                    continue
                try:
                    iso = union_collapse_iso(A, S, T, st.system, th)
                except StabcatError as exc:
                    t.see("Prop6.1", A.name, False, {"object": A.describe(), "S": S.label(),
                                                     "T": T.label(), "error": str(exc)})
                    continue
                So = S.as_object()
                ok_A = st.class_of(st.compose_partial(iso.backward, iso.forward)) == st.identity(A)
                ok_S = st.class_of(st.compose_partial(iso.forward, iso.backward)) == st.identity(So)
                ok_w = (iso.witness_on_A.check(st.compose_partial(iso.backward, iso.forward),
                                               iota(amb.identity(A)), th, st.system)
                        and iso.witness_on_S.check(st.compose_partial(iso.forward, iso.backward),
                                                   iota(amb.identity(So)), th, st.system))
                t.see("Prop6.1", A.name, ok_A and ok_S and ok_w,
                      {"object": A.describe(), "S": S.label(), "T": T.label(), "iso": iso.describe()})
    t.flush()
    return report


# -- zero-pushouts -------------------------------------------------------------------------------

def zero_pushout_failures(st, S, T, B, partial_mediators=False):
    """Failures of the zero-pushout property for the square of ``S`` and ``T`` against ``B``.

    Returns ``(checked, failures)`` where each failure is a witness dict.
    With ``partial_mediators`` the candidate mediators are the individual
    partial morphisms ``S u T -> B`` rather than their classes (equations are
    still judged in the stable category).
    """
    U = amb.sub_union(S, T)
    I = amb.sub_intersection(S, T)
    Uo, So, To = U.as_object(), S.as_object(), T.as_object()
    s = iota(S.sub_of(U).inclusion())
    t_ = iota(T.sub_of(U).inclusion())
    s2 = iota(I.sub_of(S).inclusion())
    t2 = iota(I.sub_of(T).inclusion())
    mediators = {}
    hU = st.hom(Uo, B)
    for h in (hU.partials if partial_mediators else [c.representative for c in hU]):
        key = (st.class_of(st.compose_partial(h, s)), st.class_of(st.compose_partial(h, t_)))
        mediators.setdefault(key, []).append(h)
    fs = [(f, st.class_of(st.compose_partial(f.representative, s2))) for f in st.hom(So, B)]
    gs = [(g, st.class_of(st.compose_partial(g.representative, t2))) for g in st.hom(To, B)]
    checked, failures = 0, []
    for f, fI in fs:
        for g, gI in gs:
            if not (f.is_zero or g.is_zero) or fI != gI:
                continue
            checked += 1
            found = mediators.get((f, g), [])
            if len(found) != 1:
                failures.append({"S": S.label(), "T": T.label(), "in": S.ambient.name,
                                 "test_object": B.name, "f": f.describe(), "g": g.describe(),
                                 "mediators": [h.describe() for h in found[:3]],
                                 "mediator_count": len(found)})
    return checked, failures


def verify_zero_pushout(A, S, T, kind, theory="preord", battery=None, stable=None, quotient=True,
                        max_chain=4):
    """The image of the square ``S n T -> S, T -> S u T`` is a zero-pushout against ``battery``.

    With ``quotient=False`` mediators are searched among the partial
    morphisms themselves, before identification; uniqueness then fails as
    soon as a class has several members solving the problem.
    """
    st = _stable(kind, theory, stable, max_chain=max_chain)
    battery = default_battery(amb.kind_of(A), [A]) if battery is None else list(battery)
    report = Report("verify-zero-pushout", dict(st.config(), object=A.name, S=S.label(), T=T.label(),
                                                mediators="classes" if quotient else "partial morphisms",
                                                battery=[B.name for B in battery]))
    for B in battery:
        checked, failures = zero_pushout_failures(st, S, T, B, partial_mediators=not quotient)
        report.add("Prop6.3", f"{A.name}:{S.label()},{T.label()}->{B.name}", not failures,
                   failures[0] if failures else None, note=f"{checked} pairs")
    return report


def verify_zero_pushouts(corpus, kind, theory="preord", battery=None, stable=None, max_chain=4):
    """Zero-pushouts for every pair of distinguished subobjects of every corpus object.

    Squares are deduplicated by the object ``S u T`` together with the
    positions of ``S`` and ``T`` in it.
    """
    st = _stable(kind, theory, stable, max_chain=max_chain)
    corpus = [A for A in corpus if st.system.applies_to(A)]
    akind = _akind(corpus)
    battery = default_battery(akind, corpus) if battery is None else list(battery)
    report = Report("verify-zero-pushouts", dict(st.config(), objects=len(corpus),
                                                 battery=[B.name for B in battery]))
    t = _Tally(report)
    seen = set()
    for A in corpus:
        members = st.system.lattice(A).members
        for i, S in enumerate(members):
            for T in members[i:]:
                U = amb.sub_union(S, T)
                key = (U.as_object(), amb.sub_key(S.sub_of(U)), amb.sub_key(T.sub_of(U)))
                if key in seen:
                    continue
                seen.add(key)
                for B in battery:
                    _, failures = zero_pushout_failures(st, S, T, B)
                    t.see("Prop6.3", A.name, not failures, failures[0] if failures else None)
    t.flush()
    return report


# -- congruence laws -------------------------------------------------------------------------------

def verify_congruence(corpus, kind, theory="preord", stable=None, max_partials=150, max_chain=4):
    """The identification of triples is an equivalence, compatible with composition, and the keyed
    partition equals the closure of the exhaustive congruence search.

    Hom-sets with more than ``max_partials`` triples are left out of the
    quadratic checks. Composition compatibility and associativity are checked
    on all composable corpus triples ``A -> B -> C`` among the kept hom-sets.
    """
    st = _stable(kind, theory, stable, max_chain=max_chain)
    th = st.theory
    corpus = [A for A in corpus if st.system.applies_to(A)]
    report = Report("verify-congruence", dict(st.config(), objects=len(corpus), max_partials=max_partials))
    t = _Tally(report)
    small = {}
    for A in corpus:
        for B in corpus:
            h = st.hom(A, B)
            if len(h.partials) <= max_partials:
                small[(A, B)] = h
    for (A, B), h in small.items():
        lat = st.system.lattice(A)
        P = h.partials
        rel = [[find_congruence(p, q, lat, th) is not None for q in P] for p in P]
        n = len(P)
        refl = all(rel[i][i] for i in range(n))
        sym = all(rel[i][j] == rel[j][i] for i in range(n) for j in range(n))
        t.see("congruence-reflexive", A.name, refl, {"source": A.name, "target": B.name})
        t.see("congruence-symmetric", A.name, sym, {"source": A.name, "target": B.name})
        ex = exhaustive_partition(st, A, B)
        mine = sorted((frozenset(p.key for p in c.class_members) for c in h), key=lambda g: min(g))
        t.see("congruence-keyed-equals-exhaustive", A.name, ex == mine,
              {"source": A.name, "target": B.name, "exhaustive": len(ex), "keyed": len(mine)})
        for c in h:
            for p in c.class_members:
                w = find_congruence(p, c.representative, lat, th)
                if w is not None:
                    t.see("congruence-witness-replays", A.name, w.check(p, c.representative, th, st.system),
                          {"partial": p.describe(), "witness": w.describe()})
    for (A, B), h1 in small.items():
        for C in corpus:
            h2 = small.get((B, C))
            if h2 is None:
                continue
            for c1 in h1:
                for c2 in h2:
                    target = st.class_of(st.compose_partial(c2.representative, c1.representative))
                    ok = all(st.class_of(st.compose_partial(q, p)) == target
                             for p in c1.class_members for q in c2.class_members)
                    t.see("congruence-compatible", A.name, ok,
                          {"first": c1.describe(), "second": c2.describe()})
            for p in h1.partials:
                for q in h2.partials:
                    for D in corpus:
                        h3 = small.get((C, D))
                        if h3 is None:
                            continue
                        for r in h3.classes:
                            r = r.representative
                            left = st.compose_partial(r, st.compose_partial(q, p))
                            right = st.compose_partial(st.compose_partial(r, q), p)
                            t.see("associativity", A.name, st.class_of(left) == st.class_of(right),
                                  {"p": p.describe(), "q": q.describe(), "r": r.describe()})
    # sigma is a functor and sends exactly the trivial maps to zero
    for A in corpus:
        t.see("sigma-identity", A.name, st.sigma(amb.identity(A)) == st.identity(A), {"object": A.name})
        for B in corpus:
            if (A, B) not in small:
                continue
            for f in amb.homs(A, B):
                for C in corpus:
                    if (B, C) not in small or (A, C) not in small:
                        continue
                    for g in amb.homs(B, C):
                        ok = st.sigma(g.after(f)) == st.compose(st.sigma(g), st.sigma(f))
                        t.see("sigma-composition", A.name, ok, {"f": witness_map(f), "g": witness_map(g)})
    t.flush()
    return report


# -- everything ---------------------------------------------------------------------------------------

def verify_stable(corpus, kind, theory="preord", battery=None, max_chain=4, timings=None,
                  congruence_corpus=None):
    """Run the zero, torsion, collapse and zero-pushout suites with one shared hom-set cache.

    ``congruence_corpus`` (default: corpus objects with at most two
    elements) is used for the quadratic congruence-law checks.
    """
    st = StableCategory(kind, theory, max_chain=max_chain)
    corpus = [A for A in corpus if st.system.applies_to(A)]
    akind = _akind(corpus)
    battery = default_battery(akind, corpus) if battery is None else list(battery)
    if congruence_corpus is None:
        congruence_corpus = [A for A in corpus if amb.carrier_size(A) <= 2]
    report = Report("verify-stable", dict(st.config(), objects=len(corpus),
                                          battery=[B.name for B in battery]))
    steps = (
        ("zero", lambda: verify_stable_zero(corpus, kind, theory, battery, stable=st)),
        ("torsion", lambda: verify_stable_torsion(corpus, kind, theory, battery, stable=st)),
        ("collapse", lambda: verify_collapse(corpus, kind, theory, stable=st)),
        ("zero-pushouts", lambda: verify_zero_pushouts(corpus, kind, theory, battery, stable=st)),
        ("congruence", lambda: verify_congruence(congruence_corpus, kind, theory, stable=st)),
    )
    for name, run in steps:
        t0 = time.perf_counter()
        sub = run()
        report.extend(sub)
        if "skipped" in sub.config:
            report.config.setdefault("skipped", []).extend(sub.config["skipped"])
        if timings is not None:
            timings[name] = time.perf_counter() - t0
    return report
