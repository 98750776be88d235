"""A short walk through the library on small examples.

Run with ``python demos/tour.py``. Everything printed is computed on the spot.
"""

import warnings

from stabcat import ambient as amb
from stabcat.category import full_sub
from stabcat.corpus import P3, cospan_cat, iso_cat
from stabcat.errors import TruncationWarning
from stabcat.preord import MonotoneMap, SubPreord, chain, disjoint_union, point
from stabcat.presheaf import sierpinski_demo
from stabcat.pretorsion import CatTheory, PreordTheory
from stabcat.stable import StableCategory, union_collapse_iso
from stabcat.systems import enumerate_distinguished, is_complemented


def section(title):
    print()
    print(title)
    print("-" * len(title))


def main():
    p3 = P3()
    section("P3: a ~ b <= c")
    for kind in ("open", "closed", "saturated", "indiscrete"):
        print(f"{kind:>10}: {enumerate_distinguished(p3, kind).labels()}")

    section("torsion part and torsion-free quotient of P3")
    th = PreordTheory()
    T, eps = th.tau(p3)
    F, eta = th.phi(p3)
    print("tau:", T.describe()["leq"])
    print("phi:", F.carrier, F.describe()["leq"])
    print("eta:", eta.table())

    section("a right-saturated subcategory with no complement")
    C = cospan_cat()
    S = full_sub(C, ["A", "B"])
    print(S.label(), "complemented:", is_complemented(S))

    section("the groupoid x <-> y has an infinite torsion-free quotient")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        q = CatTheory(4).quotient(iso_cat())
    print("reduced chains per length:", q.growth(6))

    section("stable morphisms")
    for kind in ("saturated", "indiscrete"):
        st = StableCategory(kind)
        h = st.hom(p3, chain("x", "y"))
        print(f"{kind:>10}: {len(h.partials)} partial morphisms P3 -> C2, {len(h)} classes")
    A = disjoint_union(chain("p", "q"), point("t"))
    iso = union_collapse_iso(A, SubPreord(A, ["p", "q"]), SubPreord(A, ["t"]), "saturated")
    print("C2+1 ~ C2 in the stable category, witnesses:", iso.describe()["on_A"], iso.describe()["on_S"])
    f = MonotoneMap(p3, point("z"), {"a": "z", "b": "z", "c": "z"})
    print("P3 -> 1 is zero:", StableCategory("saturated").sigma(f).is_zero)
    print("identity of 1 is zero:", StableCategory("saturated").identity(point()).is_zero)
    print("hom(0, P3):", len(StableCategory("saturated").hom(amb.initial_object("preord"), p3)))

    section("Sierpinski presheaf")
    for line in sierpinski_demo(intersect=True).lines():
        print(line)


if __name__ == "__main__":
    main()
