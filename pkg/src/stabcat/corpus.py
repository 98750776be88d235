"""Test corpora: exhaustive finite preorders up to isomorphism and a fixture library of small categories."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .category import disjoint_union_cat, empty_cat, make_cat, point_cat
from .errors import InputError, SizeLimit
from .preord import FinPreord, chain, disjoint_union, empty, from_pairs, point

ELEMENT_NAMES = "abcdefgh"
MAX_EXHAUSTIVE = 5


def _labeled_preorders(n):
    """Boolean matrices of every preorder on ``n`` labeled points (vectorized brute force)."""
    if n == 0:
        return np.zeros((1, 0, 0), dtype=bool)
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    k = len(off)
    codes = np.arange(1 << k, dtype=np.int64)
    out = []
    batch = 1 << 16
    for start in range(0, len(codes), batch):
        c = codes[start:start + batch]
        m = np.zeros((len(c), n, n), dtype=bool)
        m[:, range(n), range(n)] = True
        for b, (i, j) in enumerate(off):
            m[:, i, j] = (c >> b) & 1
        mi = m.astype(np.int8)
        two = np.einsum("bij,bjk->bik", mi, mi) > 0
        ok = ~np.any(two & ~m, axis=(1, 2))
        out.append(m[ok])
    return np.concatenate(out)


def _canonical(mats, n):
    """Canonical code and representative of each matrix (minimal row-major encoding over all relabelings)."""
    if n == 0:
        return [(0, mats[0])]
    weights = (1 << np.arange(n * n, dtype=np.int64))[::-1]
    best_code = None
    best_mat = None
    for perm in itertools.permutations(range(n)):
        p = list(perm)
        pm = mats[:, p][:, :, p]
        code = pm.reshape(len(mats), -1).astype(np.int64) @ weights
        if best_code is None:
            best_code, best_mat = code, pm
        else:
            better = code < best_code
            best_code = np.where(better, code, best_code)
            best_mat = np.where(better[:, None, None], pm, best_mat)
    return list(zip(best_code.tolist(), best_mat))


def preorders_up_to_iso(n):
    """One representative per isomorphism class of preorders on ``n`` elements, in canonical-code order."""
    if n > MAX_EXHAUSTIVE:
        raise SizeLimit(f"exhaustive preorder generation is capped at {MAX_EXHAUSTIVE} elements")
    seen = {}
    for code, mat in _canonical(_labeled_preorders(n), n):
        seen.setdefault(code, mat)
    names = ELEMENT_NAMES[:n]
    return [FinPreord(names, seen[code], f"P{n}_{k}") for k, code in enumerate(sorted(seen))]


def preorder_corpus(max_size, min_size=0):
    out = []
    for n in range(min_size, max_size + 1):
        if n == 0:
            out.append(empty("P0_0"))
        else:
            out.extend(preorders_up_to_iso(n))
    return out


# -- fixtures ---------------------------------------------------------------------

def P3():
    """``a ~ b < c``: the running three-element example."""
    return from_pairs("abc", [("a", "b"), ("b", "a"), ("b", "c")], "P3")


def preord_fixtures():
    return {
        "0": empty("0"),
        "1": point("*", "1"),
        "P3": P3(),
        "C2": chain("x", "y", name="C2"),
        "C2+1": disjoint_union(chain("p", "q"), point("t"), name="C2+1"),
        "D2": from_pairs("uv", [], "D2"),
    }


def arrow_cat():
    return make_cat(["A", "B"], [("f", "A", "B")], name="ArrowCat")


def cospan_cat():
    return make_cat(["A", "B", "C"], [("f", "A", "B"), ("g", "C", "B")], name="CospanCat")


def iso_cat():
    """Two objects and one pair of inverse isomorphisms."""
    return make_cat(["x", "y"], [("u", "x", "y"), ("v", "y", "x")],
                    [("v", "u", "id_x"), ("u", "v", "id_y")], name="I2")


def cyclic_group_cat(order=2, obj="o", gen="s", name=None):
    """The cyclic group of the given order as a one-object category."""
    powers = [f"id_{obj}"] + [gen if k == 1 else f"{gen}{k}" for k in range(1, order)]
    arrows = [(p, obj, obj) for p in powers[1:]]
    comp = [(powers[i], powers[j], powers[(i + j) % order])
            for i in range(1, order) for j in range(1, order)]
    return make_cat([obj], arrows, comp, name=name or f"Z{order}")


def groupoid2():
    """The connected groupoid on two objects with vertex group Z/2."""
    # arrows x->y: u, w = u s ; y->x: v, z = s v ; t = u s v is the generator at y
    names = {("x", "x"): ["id_x", "s"], ("y", "y"): ["id_y", "t"],
             ("x", "y"): ["u", "w"], ("y", "x"): ["v", "z"]}
    # model arrows a->b as pairs (a, b, k) with k in Z/2; composite adds k
    def nm(a, b, k):
        return names[(a, b)][k]
    arrows = [(nm(a, b, 1 if a == b else k), a, b) for (a, b), _ in names.items()
              for k in ((1,) if a == b else (0, 1))]
    comp = []
    for (a, b) in names:
        for (b2, c) in names:
            if b2 != b:
                continue
            for k1 in (0, 1):
                for k2 in (0, 1):
                    comp.append((nm(b, c, k2), nm(a, b, k1), nm(a, c, (k1 + k2) % 2)))
    return make_cat(["x", "y"], arrows, comp, name="G2")


def groupoid_plus_arrow():
    return disjoint_union_cat(iso_cat(), make_cat(["A", "B"], [("f", "A", "B")], name="ArrowCat"),
                              name="I2+ArrowCat")


def cat_fixtures():
    """The named fixture library of small categories."""
    return {
        "0": empty_cat("0"),
        "1": point_cat("*", "1"),
        "ArrowCat": arrow_cat(),
        "CospanCat": cospan_cat(),
        "I2": iso_cat(),
        "G2": groupoid2(),
        "I2+ArrowCat": groupoid_plus_arrow(),
        "Z2": cyclic_group_cat(2),
    }


ACCEPTANCE_CAT_FIXTURES = ("ArrowCat", "CospanCat", "I2", "G2", "I2+ArrowCat")


@dataclass(frozen=True)
class CorpusSpec:
    kind: str  # "preord", "cat" or "presheaf"
    max_size: int = 3
    min_size: int = 0
    mode: str = "exhaustive"  # "exhaustive", "fixtures" or "directory"
    path: str | None = None
    names: tuple = ()


def generate_corpus(spec):
    if spec.mode == "directory":
        from .io import load_directory
        return load_directory(spec.path)
    if spec.kind == "preord":
        if spec.mode == "exhaustive":
            return preorder_corpus(spec.max_size, spec.min_size)
        fx = preord_fixtures()
        return [fx[k] for k in (spec.names or fx)]
    if spec.kind == "cat":
        fx = cat_fixtures()
        return [fx[k] for k in (spec.names or fx)]
    if spec.kind == "presheaf":
        from .presheaf import presheaf_corpus
        return presheaf_corpus()
    raise InputError(f"unknown corpus kind {spec.kind!r}")


def parse_corpus(text):
    """Parse a corpus reference: ``gen:preord<=N``, ``gen:cat``, ``gen:cat:Name,Name``,
    ``gen:presheaf``, ``fixtures:preord`` or a directory path."""
    if text.startswith("gen:preord"):
        rest = text[len("gen:preord"):]
        if not rest.startswith("<="):
            raise InputError(f"bad corpus reference {text!r}")
        try:
            n = int(rest[2:])
        except ValueError:
            raise InputError(f"bad corpus size in {text!r}") from None
        return CorpusSpec("preord", max_size=n)
    if text == "fixtures:preord":
        return CorpusSpec("preord", mode="fixtures")
    if text.startswith("gen:cat"):
        names = tuple(x for x in text[len("gen:cat"):].lstrip(":").split(",") if x)
        return CorpusSpec("cat", mode="fixtures", names=names)
    if text == "gen:presheaf":
        return CorpusSpec("presheaf", mode="fixtures")
    return CorpusSpec("directory", mode="directory", path=text)
