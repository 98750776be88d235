import pytest

from stabcat import ambient as amb
from stabcat.corpus import P3, preorder_corpus
from stabcat.errors import PreconditionError
from stabcat.fractions import (
    ExplicitStable,
    FormalZero,
    default_sample_functors,
    fraction_functor,
    fraction_objects,
    indiscrete_stable_description,
    verify_fractions,
)
from stabcat.preord import MonotoneMap, chain, discrete, point
from stabcat.pretorsion import PreordTheory
from stabcat.stable import StableCategory
from stabcat.universal import ambient_functor

PT = PreordTheory()


class TestExplicit:
    def test_hom_counts(self, p3):
        E = ExplicitStable([p3])
        assert len(E.hom(p3, p3)) == 11
        assert sum(1 for a in E.hom(p3, p3) if E.is_zero(a)) == 1

    def test_hom_into_trivial_is_single(self):
        for A in preorder_corpus(3):
            for D in (point(), discrete("a", "b")):
                E = ExplicitStable([A, D])
                assert E.hom(A, D) == [FormalZero(A, D)]

    def test_trivial_maps_become_zero(self):
        C = chain("x", "y")
        f = MonotoneMap(C, C, {"x": "x", "y": "y"})
        g = MonotoneMap(C, C, {"x": "x", "y": "x"})
        E = ExplicitStable([C])
        assert not PT.is_trivial(f) and PT.is_trivial(g)
        assert E.arrow(g) == FormalZero(C, C)
        assert E.compose(E.arrow(f), E.arrow(f)) == f

    def test_nontrivial_maps_with_trivial_composite(self):
        C2 = chain("x", "y")
        C3 = chain("a", "b", "c")
        f = MonotoneMap(C2, C3, {"x": "a", "y": "b"})
        g = MonotoneMap(C3, C2, {"a": "x", "b": "x", "c": "y"})
        assert not PT.is_trivial(f) and not PT.is_trivial(g)
        E = ExplicitStable([C2, C3])
        assert E.compose(g, f) == FormalZero(C2, C2)

    def test_fincat_is_valid(self, p3):
        C, oi, idx = ExplicitStable(preorder_corpus(2) + [p3]).to_fincat()
        assert len(C.objects) == 6 and len(C.arrows) == 64


class TestDescription:
    def test_matches_stable_category(self, p3):
        _, r = indiscrete_stable_description(preorder_corpus(3) + [p3])
        assert r.passed and r.count("Cor7.2-bijection") > 0


class TestFractions:
    def test_xi_invertible_in_stable(self):
        st = StableCategory("indiscrete")
        Z, one = amb.initial_object("preord"), amb.terminal_object("preord")
        s = st.sigma(amb.initial_map(one))
        r = st.hom(one, Z)[0]
        assert st.compose(r, s) == st.identity(Z) and st.compose(s, r) == st.identity(one)

    def test_formula_on_zero(self, p3):
        objects = fraction_objects([p3])
        F = default_sample_functors(objects)[0]
        G = fraction_functor(F, objects)
        C = F.cat
        u = MonotoneMap(p3, p3, {"a": "a", "b": "a", "c": "a"})
        assert PT.is_trivial(u)
        assert G(FormalZero(p3, p3)) == F.arr(u)
        assert C.arrows[G(FormalZero(p3, p3))] == C.arrows[F.arr(u)]

    def test_not_inverted(self, p3):
        objects = fraction_objects([p3])
        with pytest.raises(PreconditionError):
            fraction_functor(ambient_functor(objects), objects)

    def test_verify(self):
        r = verify_fractions(preorder_corpus(2) + [P3()])
        assert r.passed
        assert r.count("Prop7.3-trivial-composite") > 0
