import pytest

from stabcat import ambient as amb
from stabcat.corpus import P3, cat_fixtures, preorder_corpus
from stabcat.errors import HypothesesFail, HypothesisViolated, NotACover, NotTrivialOnOverlap, PreconditionError
from stabcat.preord import MonotoneMap, SubPreord, chain, discrete, disjoint_union, point
from stabcat.pretorsion import PreordTheory
from stabcat.stable import (
    StableCategory,
    compose_partial,
    exhaustive_partition,
    find_congruence,
    identity_partial,
    iota,
    make_partial,
    union_collapse_iso,
    zero_partial,
)
from stabcat.suites.stable import (
    verify_collapse,
    verify_congruence,
    verify_stable,
    verify_stable_zero,
    verify_zero_pushout,
)
from stabcat.systems import system
from stabcat.universal import (
    ambient_functor,
    collapse_functor,
    factor_torsion_functor,
    object_closure,
    sigma_functor,
)

PT = PreordTheory()


@pytest.fixture
def c2p1():
    A = disjoint_union(chain("p", "q"), point("t"))
    return A, SubPreord(A, ["p", "q"]), SubPreord(A, ["t"])


class TestPartialMorphisms:
    def test_make_partial(self, c2p1):
        A, S, T = c2p1
        f = MonotoneMap(T.as_object(), point("z"), {"t": "z"})
        p = make_partial(S, T, f, kind="saturated")
        assert p.describe()["S0"] == "{p,q}" and p.describe()["S1"] == "{t}"

    def test_not_a_cover(self, c2p1):
        A, S, T = c2p1
        f = MonotoneMap(T.as_object(), point("z"), {"t": "z"})
        with pytest.raises(NotACover):
            make_partial(SubPreord(A, ["p"]), T, f)

    def test_not_trivial_on_overlap(self):
        C = chain("x", "y")
        with pytest.raises(NotTrivialOnOverlap):
            make_partial(amb.whole(C), amb.whole(C), amb.identity(C))

    def test_overlap_check_can_be_dropped(self):
        C = chain("x", "y")
        p = make_partial(amb.whole(C), amb.whole(C), amb.identity(C), check_overlap=False)
        assert p.S0.is_whole()

    def test_identity_is_neutral(self, p3):
        st = StableCategory("saturated")
        for q in st.partials(p3, p3):
            assert compose_partial(q, identity_partial(p3)) == q
            assert compose_partial(identity_partial(p3), q) == q

    def test_iota_composes_like_maps(self, p3):
        C = chain("x", "y")
        f = MonotoneMap(p3, C, {"a": "x", "b": "x", "c": "y"})
        g = MonotoneMap(C, point("z"), {"x": "z", "y": "z"})
        assert compose_partial(iota(g), iota(f)) == iota(g.after(f))

    def test_zero_absorbs(self, p3):
        st = StableCategory("saturated")
        for q in st.partials(p3, p3):
            z = compose_partial(zero_partial(p3, p3), q)
            assert st.class_of(z).is_zero


class TestHomSets:
    def test_small_counts(self, p3):
        st = StableCategory("indiscrete")
        Z = amb.initial_object("preord")
        assert len(st.hom(point(), point())) == 1
        assert len(st.hom(Z, p3)) == 1 and len(st.hom(p3, Z)) == 1

    @pytest.mark.parametrize("n", [2, 3])
    def test_indiscrete_counts_match_nontrivial_maps(self, n):
        # independent oracle: non-trivial ambient maps plus one zero
        st = StableCategory("indiscrete")
        corpus = preorder_corpus(n, min_size=1)
        for A in corpus:
            for B in corpus:
                expected = sum(1 for f in amb.homs(A, B) if not PT.is_trivial(f)) + 1
                assert len(st.hom(A, B)) == expected, (A.name, B.name)

    def test_p3_endomorphisms(self, p3):
        assert len(StableCategory("indiscrete").hom(p3, p3)) == 11

    def test_discrete_pair_is_zero(self):
        D2 = discrete("a", "b")
        st = StableCategory("saturated")
        assert len(st.hom(D2, D2)) == 1
        assert st.identity(D2) == st.zero(D2, D2)

    @pytest.mark.parametrize("kind", ["saturated", "open", "indiscrete"])
    def test_keyed_partition_equals_exhaustive(self, kind):
        st = StableCategory(kind)
        corpus = preorder_corpus(2) + [P3()]
        for A in corpus:
            for B in preorder_corpus(2):
                keyed = sorted((frozenset(p.key for p in c.class_members) for c in st.hom(A, B)),
                               key=lambda g: min(g))
                assert keyed == exhaustive_partition(st, A, B)

    def test_unquotiented(self, p3):
        st = StableCategory("saturated", quotient=False)
        assert len(st.hom(p3, p3)) == len(st.partials(p3, p3))


class TestCongruence:
    def test_equal_triples(self, p3):
        st = StableCategory("saturated")
        p = identity_partial(p3)
        w = find_congruence(p, p, st.system.lattice(p3))
        assert w.check(p, p)

    def test_zero_to_trivial_map(self):
        # a trivial map is congruent to the zero triple through U0 = whole
        D2 = discrete("a", "b")
        f = MonotoneMap(D2, point("z"), {"a": "z", "b": "z"})
        st = StableCategory("indiscrete")
        w = find_congruence(iota(f), zero_partial(D2, point("z")), st.system.lattice(D2))
        assert w is not None and w.U0.is_whole()

    def test_witnesses_replay(self, p3):
        st = StableCategory("open")
        lat = st.system.lattice(p3)
        for c in st.hom(p3, p3):
            for p in c.class_members:
                w = find_congruence(p, c.representative, lat)
                if w is not None:
                    assert w.check(p, c.representative, None, st.system)

    def test_distinct_classes_have_no_witness(self, p3):
        st = StableCategory("saturated")
        h = st.hom(p3, chain("x", "y"))
        lat = st.system.lattice(p3)
        reps = [c.representative for c in h]
        for i, p in enumerate(reps):
            for q in reps[i + 1:]:
                assert find_congruence(p, q, lat) is None


class TestZeroSuite:
    @pytest.mark.parametrize("kind", ["saturated", "indiscrete", "open", "closed"])
    def test_passes(self, kind):
        assert verify_stable_zero(preorder_corpus(3), kind).passed

    def test_dropping_overlap_condition_is_caught(self):
        r = verify_stable_zero(preorder_corpus(2), "saturated", check_overlap=False)
        assert {c.axiom for c in r.failures()} == {"Lemma5.4-zero-on-S0"}


class TestCollapse:
    def test_certificate(self, c2p1):
        A, S, T = c2p1
        iso = union_collapse_iso(A, S, T, "saturated")
        st = StableCategory("saturated")
        assert st.class_of(compose_partial(iso.backward, iso.forward)) == st.identity(A)
        assert iso.witness_on_A.U0.label() == "{t}"

    def test_empty_trivial_part(self, p3):
        union_collapse_iso(p3, amb.whole(p3), amb.nothing(p3), "saturated")

    def test_hypotheses(self, c2p1):
        A, S, T = c2p1
        with pytest.raises(HypothesisViolated):
            union_collapse_iso(A, T, S, "saturated")  # {p,q} is not trivial
        C = chain("x", "y")
        with pytest.raises(HypothesisViolated):
            union_collapse_iso(C, SubPreord(C, ["x"]), SubPreord(C, ["y"]), "saturated")

    def test_suite(self):
        assert verify_collapse(preorder_corpus(3), "saturated").passed


class TestZeroPushouts:
    def test_stable_classes(self, c2p1):
        A, S, T = c2p1
        assert verify_zero_pushout(A, S, T, "saturated").passed

    def test_partial_mediators_not_unique(self, c2p1):
        # before identification several triples solve the same problem
        A, S, T = c2p1
        r = verify_zero_pushout(A, S, T, "saturated", quotient=False)
        bad = r.failures("Prop6.3")
        assert bad and bad[0].witness["mediator_count"] == 9
        assert bad[0].subject == "C2+1:{p,q},{t}->P1_0"


class TestFactorization:
    @pytest.fixture
    def corpus(self, c2p1):
        return preorder_corpus(2) + [c2p1[0]]

    @pytest.mark.parametrize("src,tgt", [("saturated", "saturated"), ("saturated", "indiscrete"),
                                         ("indiscrete", "indiscrete")])
    def test_sigma_factors(self, corpus, src, tgt):
        objects = object_closure(corpus, system(tgt))
        F, _ = sigma_functor(StableCategory(src), objects)
        assert factor_torsion_functor(F, corpus, tgt).report.passed

    def test_collapse_factors(self, corpus):
        assert factor_torsion_functor(collapse_functor(), corpus, "saturated").report.passed

    def test_indiscrete_sigma_fails_saturated_squares(self, corpus):
        objects = object_closure(corpus, system("saturated"))
        F, _ = sigma_functor(StableCategory("indiscrete"), objects)
        with pytest.raises(HypothesesFail) as e:
            factor_torsion_functor(F, corpus, "saturated")
        sq = e.value.square
        assert (sq["object"], sq["S"], sq["T"]) == ("C2+1", "{p,q}", "{t}")
        assert len(sq["mediators"]) != 1

    def test_target_needs_zero(self, corpus):
        with pytest.raises(PreconditionError):
            factor_torsion_functor(ambient_functor(corpus), corpus, "saturated")


class TestSuites:
    def test_congruence_laws(self):
        assert verify_congruence(preorder_corpus(2), "saturated").passed

    @pytest.mark.parametrize("kind", ["saturated", "left-saturated", "right-saturated", "indiscrete"])
    def test_categories(self, kind):
        fx = cat_fixtures()
        corpus = [fx[k] for k in ("0", "1", "ArrowCat", "CospanCat", "Z2")]
        assert verify_stable(corpus, kind, "cat").passed

    @pytest.mark.parametrize("kind", ["open", "closed"])
    def test_preorders_other_kinds(self, kind):
        assert verify_stable(preorder_corpus(3), kind).passed
