import networkx as nx
import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from stabcat import ambient as amb
from stabcat.corpus import P3, cat_fixtures, iso_cat, preorder_corpus
from stabcat.errors import KindMismatch
from stabcat.faults import SwappedTheory
from stabcat.preord import MonotoneMap, chain, discrete, point
from stabcat.pretorsion import CatTheory, PreordTheory, theory, trivial_objects_upto
from stabcat.suites.pretorsion import verify_cc, verify_pt

PT = PreordTheory()


class TestPredicates:
    def test_p3(self, p3):
        assert not PT.is_torsion(p3) and not PT.is_torsion_free(p3)

    def test_point_trivial(self):
        assert PT.is_trivial_object(point())

    def test_i2(self):
        th = CatTheory()
        assert th.is_torsion(iso_cat()) and not th.is_torsion_free(iso_cat())

    def test_kind_mismatch(self):
        with pytest.raises(KindMismatch):
            PT.is_torsion(iso_cat())


class TestTrivialMorphism:
    def test_constant_map(self, p3):
        c = PT.is_trivial_morphism(MonotoneMap(p3, point(), (0, 0, 0)))
        assert c.verdict and c.recomposes()

    def test_collapsing_map(self, p3):
        f = MonotoneMap(p3, chain("x", "y"), {"a": "x", "b": "x", "c": "y"})
        c = PT.is_trivial_morphism(f)
        assert not c.verdict and c.violation in {("b", "c"), ("a", "c")}

    def test_identity_on_trivial(self):
        D = discrete("a", "b")
        assert PT.is_trivial_morphism(amb.identity(D)).verdict

    def test_preorders_agree_with_factorization_search(self):
        trivials = trivial_objects_upto("preord", 3)
        corpus = preorder_corpus(3)
        for X in corpus:
            for Y in corpus:
                for f in amb.homs(X, Y):
                    found = any(h.after(g) == f for D in trivials
                                for g in amb.homs(X, D) for h in amb.homs(D, Y))
                    cert = PT.is_trivial_morphism(f)
                    assert cert.verdict == found
                    assert cert.recomposes()

    def test_categories_agree_with_factorization_search(self):
        th = CatTheory()
        trivials = trivial_objects_upto("cat", 2)
        fx = cat_fixtures()
        small = [fx[k] for k in ("0", "1", "ArrowCat", "Z2", "I2")]
        for X in small:
            for Y in small:
                for F in amb.homs(X, Y):
                    found = any(H.after(G) == F for D in trivials
                                for G in amb.homs(X, D) for H in amb.homs(D, Y))
                    assert th.is_trivial_morphism(F).verdict == found, (X.name, Y.name)


def _scc_oracle(P):
    """Condensation of the comparability digraph, via scipy and networkx independently."""
    n = len(P)
    k, labels = connected_components(csr_matrix(P.leq.astype(int)), directed=True, connection="strong")
    G = nx.DiGraph()
    G.add_nodes_from(range(n))
    G.add_edges_from((int(i), int(j)) for i, j in np.argwhere(P.leq) if i != j)
    cond = nx.condensation(G)
    reach = {c: nx.descendants(cond, c) | {c} for c in cond.nodes}
    members = {c: frozenset(P.carrier[i] for i in cond.nodes[c]["members"]) for c in cond.nodes}
    order = {(members[c], members[d]) for c in cond.nodes for d in reach[c]}
    return k, set(members.values()), order


class TestTauPhi:
    def test_p3(self, p3):
        T, eps = PT.tau(p3)
        F, eta = PT.phi(p3)
        assert T.le("a", "b") and T.le("b", "a") and not T.le("b", "c")
        assert eps.images == (0, 1, 2)
        assert F.carrier == ("[a,b]", "[c]") and F.le("[a,b]", "[c]")
        assert eta.images == (0, 0, 1)

    def test_partial_order(self):
        P = chain("x", "y", "z")
        assert PT.is_trivial_object(PT.tau(P)[0])
        assert np.array_equal(PT.phi(P)[0].leq, P.leq)

    @pytest.mark.parametrize("n", [3, 4])
    def test_phi_matches_condensation(self, n):
        for P in preorder_corpus(n) + [P3()]:
            k, classes, order = _scc_oracle(P)
            F, eta = PT.phi(P)
            assert len(F) == k
            cls = {i: frozenset(P.carrier[j] for j in range(len(P)) if eta.images[j] == i) for i in range(len(F))}
            assert set(cls.values()) == classes
            got = {(cls[i], cls[j]) for i in range(len(F)) for j in range(len(F)) if F.leq[i, j]}
            assert got == order

    def test_idempotence_and_mono_epi(self):
        for P in preorder_corpus(3):
            T, eps = PT.tau(P)
            F, eta = PT.phi(P)
            assert PT.tau(T)[0] == T
            assert len(PT.phi(F)[0]) == len(F)
            assert eps.is_injective() and eta.is_surjective()
            assert PT.is_trivial_morphism(eta.after(eps)).verdict

    def test_i2_truncated(self):
        th = CatTheory(4)
        with pytest.warns(Warning):
            seq = th.canonical_sequence(iso_cat())
        assert seq.truncated
        assert seq.torsion_part.objects == iso_cat().objects
        q = th.quotient(iso_cat())
        assert len(q.objects) == 1 and all(c > 0 for c in q.growth(6))

    def test_cat_sequence_composite_trivial(self):
        th = CatTheory()
        for name in ("ArrowCat", "CospanCat", "Z2"):
            A = cat_fixtures()[name]
            seq = th.canonical_sequence(A)
            assert not seq.truncated
            assert th.is_trivial_morphism(seq.unit.after(seq.counit)).verdict


class TestVerifyPT:
    def test_preorders(self):
        assert verify_pt(preorder_corpus(3)).passed

    def test_categories(self):
        corpus = list(cat_fixtures().values())
        assert verify_pt(corpus, "cat").passed

    def test_partial_orders_only(self):
        corpus = [P for P in preorder_corpus(3) if P.is_antisymmetric()]
        assert verify_pt(corpus).passed

    def test_swapped_fault_caught(self):
        r = verify_pt(preorder_corpus(3), SwappedTheory(PreordTheory()))
        assert r.failures("PT2-kernel")
        w = r.failures("PT2-kernel")[0].witness
        assert w is not None


class TestVerifyCC:
    @pytest.mark.parametrize("kind", ["saturated", "indiscrete", "open", "closed"])
    def test_preorders(self, kind):
        assert verify_cc(preorder_corpus(3), kind, "preord").passed

    @pytest.mark.parametrize("kind", ["saturated", "indiscrete"])
    def test_categories(self, kind):
        fx = cat_fixtures()
        corpus = [fx[k] for k in ("I2", "ArrowCat", "CospanCat", "I2+ArrowCat")]
        assert verify_cc(corpus, kind, theory("cat", 4)).passed
