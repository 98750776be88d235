import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stabcat.corpus import P3, preorder_corpus
from stabcat.errors import InputError
from stabcat.preord import chain, discrete, disjoint_union
from stabcat.presheaf import (
    all_internal_subs,
    complement,
    constant_presheaf,
    internal_sub,
    is_complemented_sub,
    is_left_saturated,
    is_right_saturated,
    is_saturated_internal,
    nothing,
    presheaf_corpus,
    same_sub,
    saturation_factorization,
    sierpinski_demo,
    sierpinski_presheaf,
    sierpinski_subs,
    sub_intersection,
    sub_union,
    verify_internal_saturation,
    whole,
)

ROUTES = ("pointwise", "factorization")


def _components(P):
    G = nx.Graph()
    G.add_nodes_from(P.carrier)
    G.add_edges_from((a, b) for a, b in P.pairs() if a != b)
    return [frozenset(c) for c in nx.connected_components(G)]


def _names(P, mask):
    return frozenset(P.names_of(mask))


class TestSierpinski:
    def test_subs_saturated_both_routes(self):
        A = sierpinski_presheaf()
        for S in sierpinski_subs(A):
            for route in ROUTES:
                assert is_saturated_internal(S, A, route)

    def test_not_complemented(self):
        A = sierpinski_presheaf()
        for S in sierpinski_subs(A):
            assert not is_complemented_sub(S, A)

    def test_complemented_without_point_stage(self):
        A = sierpinski_presheaf(with_point_stage=False)
        S1, S2 = sierpinski_subs(A)
        assert same_sub(complement(S1), S2)

    def test_union_whole_intersection_saturated(self):
        A = sierpinski_presheaf()
        S1, S2 = sierpinski_subs(A)
        assert same_sub(sub_union(S1, S2), whole(A))
        assert is_saturated_internal(sub_intersection(S1, S2), A, "factorization")

    def test_single_point_is_one_sided(self):
        A = sierpinski_presheaf()
        S = internal_sub(A, {"X": ["a1"], "U": ["a"]})
        assert is_left_saturated(S) and not is_right_saturated(S)
        for route in ROUTES:
            assert not is_saturated_internal(S, A, route)
        delta, witness = saturation_factorization(S)
        assert delta is None and witness is not None

    def test_missing_arrows(self):
        A = sierpinski_presheaf()
        S = internal_sub(A, {"X": ["a1", "b1"], "U": ["a", "b"]},
                         arrows={"X": [("a1", "a1"), ("b1", "b1")], "U": [("a", "a"), ("b", "b")]})
        assert not is_right_saturated(S) and not is_left_saturated(S)
        assert not is_saturated_internal(S, A, "factorization")

    def test_restriction_must_stay_inside(self):
        A = sierpinski_presheaf()
        with pytest.raises(InputError):
            internal_sub(A, {"X": ["a1"]})

    @pytest.mark.parametrize("point_stage", [True, False])
    @pytest.mark.parametrize("intersect", [True, False])
    def test_demo(self, point_stage, intersect):
        r = sierpinski_demo(point_stage, intersect)
        assert r.passed
        assert r.count("not-complemented" if point_stage else "complemented") == 2


class TestConstantPresheaves:
    @pytest.mark.parametrize("P", preorder_corpus(3) + [P3()], ids=lambda P: P.name)
    def test_reduce_to_preorder_checks(self, P):
        # oracle: over U <= X a full subobject is S(X) inside S(U); saturated means both
        # stages are unions of components, complemented additionally needs S(U) = S(X)
        A = constant_presheaf(P)
        comps = _components(P)
        unions = {frozenset().union(*sel) for k in range(len(comps) + 1)
                  for sel in itertools.combinations(comps, k)}
        subs = all_internal_subs(A)
        assert len(subs) == sum(1 for u in range(1 << len(P)) for x in range(1 << len(P)) if x & ~u == 0)
        for S in subs:
            su, sx = _names(P, S.mask("U")), _names(P, S.mask("X"))
            sat = su in unions and sx in unions
            assert is_saturated_internal(S, A, "pointwise") == sat
            assert is_saturated_internal(S, A, "factorization") == sat
            assert is_complemented_sub(S, A) == (sat and su == sx)

    def test_whole_and_nothing(self):
        A = constant_presheaf(discrete("a", "b"))
        assert is_complemented_sub(whole(A)) and is_complemented_sub(nothing(A))

    def test_component_is_complemented(self):
        P = disjoint_union(chain("p", "q"), chain("r", "s"))
        A = constant_presheaf(P)
        S = internal_sub(A, {"U": ["p", "q"], "X": ["p", "q"]})
        assert is_complemented_sub(S)


@given(st.sampled_from(presheaf_corpus()), st.data())
def test_routes_agree(A, data):
    S = data.draw(st.sampled_from(all_internal_subs(A)))
    assert is_saturated_internal(S, A, "pointwise") == is_saturated_internal(S, A, "factorization")
    assert (saturation_factorization(S, "left")[0] is not None) == is_left_saturated(S)
    assert (saturation_factorization(S, "right")[0] is not None) == is_right_saturated(S)


def test_internal_saturation_suite():
    r = verify_internal_saturation(presheaf_corpus())
    assert r.passed
    assert r.count("Lemma2.10-one-sided") > 0
