import itertools
import random

import networkx as nx
import numpy as np
import pytest

from stabcat.chains import (
    SkeletalQuotient,
    confluence_trial,
    is_reduced,
    normalize_chain,
    random_chain,
)
from stabcat.corpus import (
    ACCEPTANCE_CAT_FIXTURES,
    CorpusSpec,
    cat_fixtures,
    generate_corpus,
    parse_corpus,
    preorder_corpus,
    preorders_up_to_iso,
)
from stabcat.errors import JunctionMismatch


class TestNormalize:
    def test_inverse_pair_cancels(self, cf):
        c = normalize_chain(cf["I2"], ["u", "v"])
        assert c.is_identity()

    def test_uu_irreducible(self, cf):
        I2 = cf["I2"]
        c = normalize_chain(I2, ["u", "u"])
        assert c.names(I2) == ["u", "u"]

    def test_single_arrow(self, cf):
        C = cf["ArrowCat"]
        assert normalize_chain(C, ["f"]).names(C) == ["f"]

    def test_identity_dropped(self, cf):
        C = cf["ArrowCat"]
        assert normalize_chain(C, ["id_A", "f", "id_B"]).names(C) == ["f"]

    def test_junction_mismatch(self, cf):
        with pytest.raises(JunctionMismatch):
            normalize_chain(cf["CospanCat"], ["f", "g"])

    def test_confluence_on_fixtures(self, cf):
        rng = random.Random(20240601)
        cats = [cf[k] for k in ACCEPTANCE_CAT_FIXTURES]
        for k in range(1000):
            C = cats[k % len(cats)]
            seq = random_chain(C, rng, rng.randint(1, 7))
            forms = confluence_trial(C, seq, 5, rng)
            assert len(forms) == 1


class TestSkeletalQuotient:
    @pytest.mark.parametrize("name", ["I2", "G2", "I2+ArrowCat", "ArrowCat", "CospanCat"])
    def test_associative_within_bound(self, cf, name):
        q = SkeletalQuotient(cf[name], 3)
        chains = q.chains()
        by_src = {}
        for c in chains:
            by_src.setdefault(c.src, []).append(c)
        for f in chains:
            for g in by_src.get(f.dst, ()):
                for h in by_src.get(g.dst, ()):
                    assert q.compose(h, q.compose(g, f)) == q.compose(q.compose(h, g), f)

    @pytest.mark.parametrize("name", ACCEPTANCE_CAT_FIXTURES)
    def test_enumerated_chains_reduced(self, cf, name):
        q = SkeletalQuotient(cf[name], 4)
        assert all(is_reduced(q.ambient, c.arrows, q.class_of) for c in q.chains())

    def test_finiteness_flags(self, cf):
        assert SkeletalQuotient(cf["ArrowCat"]).is_finite
        assert SkeletalQuotient(cf["CospanCat"]).is_finite
        assert not SkeletalQuotient(cf["I2"]).is_finite
        assert SkeletalQuotient(cf["I2"]).growth(5) == [2, 2, 2, 2, 2]

    def test_identities_are_empty_chains(self, cf):
        q = SkeletalQuotient(cf["G2"])
        for k in range(len(q.objects)):
            e = q.identity(k)
            for c in q.chains():
                if c.src == k:
                    assert q.compose(c, e) == c


def _iso_classes_oracle(n):
    """Count preorders on n points up to isomorphism with networkx digraph isomorphism."""
    reps = []
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in itertools.product([False, True], repeat=len(off)):
        m = np.eye(n, dtype=bool)
        for b, (i, j) in zip(bits, off):
            m[i, j] = b
        if np.any((m.astype(int) @ m.astype(int) > 0) & ~m):
            continue
        G = nx.DiGraph()
        G.add_nodes_from(range(n))
        G.add_edges_from((i, j) for i, j in off if m[i, j])
        if not any(nx.is_isomorphic(G, H) for H in reps):
            reps.append(G)
    return len(reps)


class TestCorpus:
    @pytest.mark.parametrize("n,count", [(0, 1), (1, 1), (2, 3), (3, 9), (4, 33)])
    def test_iso_counts(self, n, count):
        assert len(preorders_up_to_iso(n) if n else preorder_corpus(0)) == count

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_counts_match_networkx_oracle(self, n):
        assert len(preorders_up_to_iso(n)) == _iso_classes_oracle(n)

    def test_pairwise_non_isomorphic(self):
        graphs = []
        for P in preorder_corpus(4):
            G = nx.DiGraph()
            G.add_nodes_from(P.carrier)
            G.add_edges_from((a, b) for a, b in P.pairs() if a != b)
            graphs.append(G)
        for G, H in itertools.combinations(graphs, 2):
            if G.number_of_nodes() == H.number_of_nodes() and G.number_of_edges() == H.number_of_edges():
                assert not nx.is_isomorphic(G, H)

    def test_small_corpora(self):
        assert len(preorder_corpus(1)) == 2
        assert len(preorder_corpus(3)) == 14

    def test_deterministic(self):
        assert [P.describe() for P in preorder_corpus(3)] == [P.describe() for P in preorder_corpus(3)]

    def test_fixture_names(self):
        got = generate_corpus(CorpusSpec("cat", mode="fixtures"))
        assert {C.name for C in got} >= set(ACCEPTANCE_CAT_FIXTURES)

    def test_parse(self):
        assert parse_corpus("gen:preord<=3") == CorpusSpec("preord", max_size=3)
        assert parse_corpus("gen:cat:I2,G2").names == ("I2", "G2")
        assert parse_corpus("some/dir").mode == "directory"
