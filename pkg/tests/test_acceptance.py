"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line with its timing.

The lines are printed at the end of the pytest run (see ``conftest.py``).
"""

import random
import time
import warnings

import pytest

from stabcat.category import full_sub
from stabcat.chains import confluence_trial, normalize_chain, random_chain
from stabcat.corpus import ACCEPTANCE_CAT_FIXTURES, P3, cat_fixtures, cospan_cat, iso_cat, preorder_corpus
from stabcat.errors import TruncationWarning
from stabcat.faults import open_minus_ab
from stabcat.fractions import indiscrete_stable_description, verify_fractions
from stabcat.presheaf import presheaf_corpus, sierpinski_demo, verify_internal_saturation
from stabcat.pretorsion import PreordTheory, theory
from stabcat.suites.pretorsion import verify_cc, verify_pt
from stabcat.suites.stable import verify_stable
from stabcat.suites.systems import verify_cs
from stabcat.systems import PREORD_KINDS, is_complemented, is_distinguished

from .test_pretorsion import _scc_oracle

RESULTS = []


def record(name, ok, elapsed, limit=None, detail=""):
    within = limit is None or elapsed < limit
    verdict = "PASS" if ok and within else "FAIL"
    budget = f" (limit {limit:.0f}s)" if limit is not None else ""
    RESULTS.append(f"{verdict} {name}: {elapsed:.1f}s{budget}{' ' + detail if detail else ''}")
    return ok and within


def failing(report):
    return sorted({c.axiom for c in report.failures()})


def test_cs_preorders():
    t0 = time.perf_counter()
    corpus = preorder_corpus(4)
    bad = {}
    for kind in PREORD_KINDS:
        r = verify_cs(corpus, kind)
        if not r.passed or r.count("CS6") == 0:
            bad[kind] = failing(r) or ["CS6 not run"]
    elapsed = time.perf_counter() - t0
    fault = verify_cs(preorder_corpus(3) + [P3()], open_minus_ab())
    caught = [c for c in fault.failures() if c.witness]
    ok = not bad and len(corpus) == 47 and bool(caught)
    assert record("CS preorders<=4 (open, closed, saturated, indiscrete) + seeded fault", ok, elapsed, 60,
                  f"objects={len(corpus)} fault_failures={len(caught)} {bad or ''}".strip())


def test_cs_categories():
    t0 = time.perf_counter()
    fx = cat_fixtures()
    corpus = [fx[k] for k in ACCEPTANCE_CAT_FIXTURES]
    bad = {}
    for kind in ("left-saturated", "right-saturated", "saturated"):
        r = verify_cs(corpus, kind)
        if not r.passed:
            bad[kind] = failing(r)
    C = cospan_cat()
    S = full_sub(C, ["A", "B"])
    cospan_ok = is_distinguished(S, "right-saturated") and not is_complemented(S)
    elapsed = time.perf_counter() - t0
    assert record("CS categories (left-, right-, fully saturated) + cospan non-complemented",
                  not bad and cospan_ok, elapsed, 30, f"fixtures={','.join(ACCEPTANCE_CAT_FIXTURES)} {bad or ''}".strip())


def test_pt():
    t0 = time.perf_counter()
    c4 = preorder_corpus(4)
    r1 = verify_pt(c4, "preord", c4)
    cats = list(cat_fixtures().values())
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        r2 = verify_pt(cats, "cat", cats)
    P = P3()
    k, classes, order = _scc_oracle(P)
    F, eta = PreordTheory().phi(P)
    T, eps = PreordTheory().tau(P)
    cls = {i: frozenset(P.carrier[j] for j in range(len(P)) if eta.images[j] == i) for i in range(len(F))}
    phi_ok = (len(F) == k and set(cls.values()) == classes
              and {(cls[i], cls[j]) for i in range(len(F)) for j in range(len(F)) if F.leq[i, j]} == order)
    # tau keeps the carrier and exactly the symmetric pairs
    sym = {(a, b) for a, b in P.pairs() if P.le(b, a)}
    tau_ok = set(T.carrier) == set(P.carrier) and set(T.pairs()) == sym and eps.is_injective()
    ok = r1.passed and r2.passed and phi_ok and tau_ok and r1.count("PT1") > 0 and r2.count("PT1") > 0
    elapsed = time.perf_counter() - t0
    assert record("PT preorders<=4 and cat fixtures + P3 SCC oracle", ok, elapsed, None,
                  f"{failing(r1) + failing(r2) or ''} phi_oracle={phi_ok} tau_oracle={tau_ok}".strip())


def test_cc():
    t0 = time.perf_counter()
    c4 = preorder_corpus(4)
    cats = list(cat_fixtures().values())
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        runs = {
            "preord+saturated": verify_cc(c4, "saturated", "preord"),
            "preord+indiscrete": verify_cc(c4, "indiscrete", "preord"),
            "cat+indiscrete": verify_cc(cats, "indiscrete", theory("cat", 4)),
            "cat+saturated(L=4)": verify_cc(cats, "saturated", theory("cat", 4)),
        }
    bad = {k: failing(r) for k, r in runs.items() if not r.passed}
    cc_all = all(r.count(f"CC{i}") > 0 for r in runs.values() for i in range(1, 6))
    elapsed = time.perf_counter() - t0
    assert record("CC saturated/indiscrete on preorders<=4, saturated on cats with L=4", not bad and cc_all,
                  elapsed, None, str(bad) if bad else "")


def test_chain_confluence():
    t0 = time.perf_counter()
    fx = cat_fixtures()
    cats = [fx[k] for k in ACCEPTANCE_CAT_FIXTURES]
    rng = random.Random(7)
    disagree = 0
    for k in range(1000):
        C = cats[k % len(cats)]
        if len(confluence_trial(C, random_chain(C, rng, rng.randint(1, 8)), 5, rng)) != 1:
            disagree += 1
    I2 = iso_cat()
    ok = (disagree == 0 and normalize_chain(I2, ["u", "v"]).is_identity()
          and normalize_chain(I2, ["u", "u"]).names(I2) == ["u", "u"])
    elapsed = time.perf_counter() - t0
    assert record("chain rewriting: 1000 chains x 5 orders, (u,v) -> id, (u,u) irreducible", ok, elapsed,
                  None, f"disagreements={disagree}")


@pytest.mark.parametrize("kind", ["saturated", "indiscrete"])
def test_stable(kind):
    t0 = time.perf_counter()
    r = verify_stable(preorder_corpus(4), kind, "preord", battery=preorder_corpus(3))
    needed = ["Prop5.2-zero-object", "Prop5.6-trivial-iff-zero-object", "Lemma5.4", "Cor5.5",
              "Thm5.7-trivial-iff-zero", "Prop6.3", "congruence-keyed-equals-exhaustive"]
    missing = [a for a in needed if r.count(a) == 0]
    if kind == "saturated":
        missing += [] if r.count("Prop6.1") else ["Prop6.1"]
    ok = r.passed and not missing and not r.config.get("skipped")
    elapsed = time.perf_counter() - t0
    assert record(f"stable suite preorders<=4 ({kind})", ok, elapsed, 150,
                  f"{failing(r) or ''} {('missing ' + str(missing)) if missing else ''}".strip())


def test_fractions_oracle():
    t0 = time.perf_counter()
    corpus = preorder_corpus(3)
    _, desc = indiscrete_stable_description(corpus)
    pairs = desc.count("Cor7.2-bijection")
    fr = verify_fractions(corpus)
    ok = (desc.passed and fr.passed and pairs >= 20
          and fr.count("Prop7.3-xi-invertible") == 1 and fr.count("Prop7.3-trivial-composite") > 0)
    elapsed = time.perf_counter() - t0
    assert record("indiscrete stable category vs explicit description; fractions", ok, elapsed, None,
                  f"pairs={pairs} {failing(desc) + failing(fr) or ''}".strip())


def test_sierpinski():
    t0 = time.perf_counter()
    r = sierpinski_demo()
    claims = {a: r.count(a) for a in ("saturated", "not-complemented", "union-is-whole")}
    lem = verify_internal_saturation(presheaf_corpus())
    both = lem.count("Lemma2.10-forward") > 0 and lem.count("Lemma2.10-converse") > 0
    ok = r.passed and claims == {"saturated": 2, "not-complemented": 2, "union-is-whole": 1} and lem.passed and both
    elapsed = time.perf_counter() - t0
    assert record("Sierpinski demo (three claims) + internal saturation both directions", ok, elapsed, None,
                  f"claims={claims} {failing(r) + failing(lem) or ''}".strip())
