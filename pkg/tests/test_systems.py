import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stabcat import ambient as amb
from stabcat.category import full_sub
from stabcat.corpus import P3, cat_fixtures, cospan_cat, preorder_corpus
from stabcat.errors import KindMismatch, NotDistinguishedInput, NotEpi
from stabcat.faults import open_minus_ab, open_minus_ab_discrete
from stabcat.preord import MonotoneMap, SubPreord, chain, discrete, disjoint_union, point
from stabcat.pretorsion import PreordTheory
from stabcat.suites.systems import verify_cs
from stabcat.systems import (
    CAT_KINDS,
    PREORD_KINDS,
    dist_intersection,
    dist_preimage,
    dist_union,
    enumerate_distinguished,
    is_complemented,
    is_distinguished,
    is_distinguished_epi,
)

from .strategies import preorders


def _brute_preord(A, kind):
    """Definition-level filter over all subsets."""
    n = len(A)
    out = set()
    for members in itertools.chain.from_iterable(itertools.combinations(range(n), k) for k in range(n + 1)):
        s = set(members)
        down = all(i in s for i in range(n) for j in s if A.leq[i, j])
        up = all(j in s for i in s for j in range(n) if A.leq[i, j])
        ok = {"indiscrete": len(s) in (0, n), "open": down, "closed": up, "saturated": down and up}[kind]
        if ok:
            out.add(frozenset(A.carrier[i] for i in s))
    return out


def _brute_cat(C, kind):
    out = set()
    objs = range(len(C.objects))
    for k in range(len(C.objects) + 1):
        for members in itertools.combinations(objs, k):
            s = set(members)
            arrows = range(len(C.arrows))
            left = all(C.dom[a] in s for a in arrows if C.cod[a] in s)
            right = all(C.cod[a] in s for a in arrows if C.dom[a] in s)
            ok = {"indiscrete": len(s) in (0, len(C.objects)), "left-saturated": left,
                  "right-saturated": right, "saturated": left and right}[kind]
            if ok:
                out.add(frozenset(C.objects[i] for i in s))
    return out


class TestIsDistinguished:
    def test_open_examples(self, p3):
        assert is_distinguished(SubPreord(p3, ["a", "b"]), "open")
        assert not is_distinguished(SubPreord(p3, ["c"]), "open")

    def test_cospan_right_saturated(self):
        C = cospan_cat()
        assert is_distinguished(full_sub(C, ["A", "B"]), "right-saturated")

    def test_kind_mismatch(self, p3):
        with pytest.raises(KindMismatch):
            is_distinguished(SubPreord(p3, ["a", "b"]), "left-saturated")


class TestEnumerate:
    def test_p3(self, p3):
        assert enumerate_distinguished(p3, "saturated").labels() == ["{}", "{a,b,c}"]
        assert enumerate_distinguished(p3, "open").labels() == ["{}", "{a,b}", "{a,b,c}"]

    @pytest.mark.parametrize("kind", ["indiscrete"])
    def test_indiscrete_any(self, kind):
        for A in preorder_corpus(3) + list(cat_fixtures().values()):
            L = enumerate_distinguished(A, kind)
            assert len(L) == (1 if amb.carrier_size(A) == 0 else 2)

    @pytest.mark.parametrize("kind", PREORD_KINDS)
    def test_matches_brute_force_preorders(self, kind):
        for A in preorder_corpus(4):
            got = {frozenset(S.elements) for S in enumerate_distinguished(A, kind)}
            assert got == _brute_preord(A, kind), A.name

    @pytest.mark.parametrize("kind", CAT_KINDS)
    def test_matches_brute_force_cats(self, kind):
        for A in cat_fixtures().values():
            L = enumerate_distinguished(A, kind)
            assert {frozenset(S.objects) for S in L} == _brute_cat(A, kind)
            assert all(S.is_full() for S in L)

    def test_saturated_are_unions_of_components(self):
        # independent oracle: connected components of the comparability graph
        for A in preorder_corpus(4):
            G = nx.Graph()
            G.add_nodes_from(A.carrier)
            G.add_edges_from((a, b) for a, b in A.pairs() if a != b)
            comps = [frozenset(c) for c in nx.connected_components(G)]
            unions = {frozenset().union(*sel) for k in range(len(comps) + 1)
                      for sel in itertools.combinations(comps, k)}
            got = {frozenset(S.elements) for S in enumerate_distinguished(A, "saturated")}
            assert got == unions


class TestOperations:
    def test_cospan_union_and_intersection(self):
        C = cospan_cat()
        S, T = full_sub(C, ["A", "B"]), full_sub(C, ["C", "B"])
        assert dist_union(S, T, "right-saturated").is_whole()
        assert dist_intersection(S, T, "right-saturated").objects == ("B",)

    def test_units_and_idempotence(self, p3):
        S = SubPreord(p3, ["a", "b"])
        assert dist_union(S, amb.nothing(p3), "open") == S
        assert dist_union(S, S, "open") == S
        assert dist_intersection(S, amb.whole(p3), "open") == S
        assert dist_intersection(S, amb.nothing(p3), "open").is_empty()

    def test_not_distinguished_input(self, p3):
        with pytest.raises(NotDistinguishedInput):
            dist_union(SubPreord(p3, ["c"]), SubPreord(p3, ["a", "b"]), "open")

    def test_preimage_examples(self, p3):
        C = chain("x", "y", name="C2")
        f = MonotoneMap(p3, C, {"a": "x", "b": "x", "c": "y"})
        assert dist_preimage(f, SubPreord(C, ["x"]), "open").elements == ("a", "b")
        assert dist_preimage(f, amb.whole(C), "open").is_whole()
        S, T = SubPreord(C, ["x"]), amb.whole(C)
        lhs = dist_preimage(f, dist_union(S, T, "open"), "open")
        assert lhs == dist_preimage(f, S, "open") | dist_preimage(f, T, "open")

    @pytest.mark.parametrize("kind", PREORD_KINDS)
    def test_preimage_preserves_union_and_intersection(self, kind):
        corpus = preorder_corpus(3)
        for X in corpus:
            for Y in corpus:
                L = enumerate_distinguished(Y, kind)
                for f in amb.homs(X, Y):
                    for S in L:
                        for T in L:
                            assert dist_preimage(f, S | T, kind) == dist_preimage(f, S, kind) | dist_preimage(f, T, kind)
                            assert dist_preimage(f, S & T, kind) == dist_preimage(f, S, kind) & dist_preimage(f, T, kind)


@given(preorders(4), st.sampled_from(PREORD_KINDS), st.data())
def test_lattice_laws(A, kind, data):
    L = enumerate_distinguished(A, kind)
    pick = st.sampled_from(list(L))
    R, S, T = data.draw(pick), data.draw(pick), data.draw(pick)
    assert (S | T) in L and (S & T) in L
    assert S | T == T | S and S & T == T & S
    assert (R | S) | T == R | (S | T) and (R & S) & T == R & (S & T)
    assert S | (S & T) == S and S & (S | T) == S
    assert R & (S | T) == (R & S) | (R & T)


class TestDistinguishedEpis:
    def test_identity_is_yes(self, p3):
        for kind in PREORD_KINDS:
            assert is_distinguished_epi(amb.identity(p3), kind).status == "yes"

    def test_eta_is_yes(self, p3):
        _, eta = PreordTheory().phi(p3)
        assert is_distinguished_epi(eta, "saturated").status == "yes"

    def test_not_epi(self):
        A = disjoint_union(chain("x", "y"), point("z"))
        f = MonotoneMap(point("p"), A, {"p": "x"})
        with pytest.raises(NotEpi):
            is_distinguished_epi(f, "saturated")

    def test_no_with_witness(self):
        A = disjoint_union(chain("x", "y"), point("z"))
        f = MonotoneMap(discrete("p", "q"), A, {"p": "x", "q": "y"})
        v = is_distinguished_epi(f, "saturated", require_epi=False)
        assert v.status == "no" and v.witness.elements == ("x", "y")


def test_cospan_not_complemented():
    C = cospan_cat()
    assert not is_complemented(full_sub(C, ["A", "B"]))
    A = disjoint_union(chain("p", "q"), point("t"))
    assert is_complemented(SubPreord(A, ["p", "q"]))


class TestVerifyCS:
    @pytest.mark.parametrize("kind", PREORD_KINDS)
    def test_preorders_le3(self, kind):
        assert verify_cs(preorder_corpus(3), kind).passed

    def test_indiscrete_cs6_vacuous(self):
        r = verify_cs(preorder_corpus(3), "indiscrete")
        assert r.passed and r.count("CS6") > 0

    def test_seeded_fault_pullback(self):
        r = verify_cs(preorder_corpus(3) + [P3()], open_minus_ab())
        bad = r.failures()
        assert bad and {c.axiom for c in bad} == {"CS3"}
        assert bad[0].witness["preimage"] == "{a,b}"

    def test_seeded_fault_union(self):
        r = verify_cs(preorder_corpus(3) + [discrete("a", "b", "c")], open_minus_ab_discrete())
        w = r.failures("CS2")[0].witness
        assert (w["S"], w["T"], w["union"]) == ("{a}", "{b}", "{a,b}")

    def test_fault_witness_replays(self):
        # feeding the reported map back through the library reproduces the violation
        r = verify_cs(preorder_corpus(3) + [P3()], open_minus_ab())
        w = r.failures("CS3")[0].witness
        sys_ = open_minus_ab()
        Y = next(B for B in preorder_corpus(3) if B.name == w["map"]["target"])
        f = MonotoneMap(P3(), Y, dict(w["map"]["table"]))
        S = SubPreord(Y, w["S"].strip("{}").split(","))
        assert sys_.is_distinguished(S)
        assert not sys_.is_distinguished(dist_preimage(f, S, "open"))

    @pytest.mark.parametrize("kind", CAT_KINDS)
    def test_cats(self, kind):
        assert verify_cs(list(cat_fixtures().values()), kind).passed
