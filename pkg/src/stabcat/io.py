"""JSON loaders for preorders, categories, maps, functors and presheaves.

Every loader rejects fields it does not know. Errors are raised as
:class:`InputError` with the file path (and line/column for JSON syntax
errors) in the message.
"""

from __future__ import annotations

import json
from pathlib import Path

from .category import Functor, validate_cat
from .errors import InputError
from .preord import MonotoneMap, validate_preord

FIELDS = {
    "preord": {"kind", "name", "elements", "leq", "strict"},
    "cat": {"kind", "name", "objects", "arrows", "identities", "compose"},
    "map": {"kind", "source", "target", "assign"},
    "functor": {"kind", "source", "target", "objects", "arrows"},
    "presheaf": {"kind", "name", "index", "stages", "restrictions"},
}
ARROW_FIELDS = {"name", "dom", "cod"}
INDEX_FIELDS = {"elements", "leq"}
RESTRICTION_FIELDS = {"lower", "upper", "map"}


def _where(path):
    return str(path) if path is not None else "<input>"


def _reject_unknown(d, allowed, path, what):
    if not isinstance(d, dict):
        raise InputError(f"{_where(path)}: {what} must be an object")
    extra = sorted(set(d) - allowed)
    if extra:
        raise InputError(f"{_where(path)}: unknown field(s) {', '.join(map(repr, extra))} in {what}")


def read_json(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InputError(f"{path}: cannot read ({e.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None


def _wrap(path, fn, *args):
    """Call a validator, prefixing the file path to any input error (its type is kept)."""
    try:
        return fn(*args)
    except InputError as e:
        if not str(e).startswith(_where(path)):
            e.args = (f"{_where(path)}: {e}",)
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"{_where(path)}: malformed description ({type(e).__name__}: {e})") from None


def preord_from_dict(d, path=None, strict=None):
    _reject_unknown(d, FIELDS["preord"], path, "preorder")
    s = d.get("strict", False) if strict is None else strict
    cand = dict(d)
    if "name" not in cand and path is not None:
        cand["name"] = Path(path).stem
    return _wrap(path, validate_preord, cand, s)


def cat_from_dict(d, path=None):
    _reject_unknown(d, FIELDS["cat"], path, "category")
    for a in d.get("arrows", []):
        if isinstance(a, dict):
            _reject_unknown(a, ARROW_FIELDS, path, "arrow")
    cand = dict(d)
    if "name" not in cand and path is not None:
        cand["name"] = Path(path).stem
    return _wrap(path, validate_cat, cand)


def object_from_dict(d, path=None, strict=None):
    kind = d.get("kind") if isinstance(d, dict) else None
    if kind == "preord":
        return preord_from_dict(d, path, strict)
    if kind == "cat":
        return cat_from_dict(d, path)
    raise InputError(f"{_where(path)}: expected kind 'preord' or 'cat', got {kind!r}")


def _resolve(base, ref):
    p = Path(ref)
    return p if p.is_absolute() else Path(base).parent / p


def load_object(path, strict=None):
    return object_from_dict(read_json(path), path, strict)


def map_from_dict(d, path):
    kind = d.get("kind")
    _reject_unknown(d, FIELDS.get(kind, set()) or FIELDS["map"], path, kind or "map")
    src = load_object(_resolve(path, d["source"]))
    tgt = load_object(_resolve(path, d["target"]))
    if kind == "map":
        return _wrap(path, MonotoneMap, src, tgt, dict(d["assign"]))
    if kind == "functor":
        return _wrap(path, Functor, src, tgt, dict(d["objects"]), dict(d["arrows"]))
    raise InputError(f"{_where(path)}: expected kind 'map' or 'functor', got {kind!r}")


def presheaf_from_dict(d, path):
    from .presheaf import FinPoset, PreordPresheaf

    _reject_unknown(d, FIELDS["presheaf"], path, "presheaf")
    _reject_unknown(d["index"], INDEX_FIELDS, path, "index")
    pts = list(d["index"]["elements"])
    index = _wrap(path, FinPoset, pts, [tuple(p) for p in d["index"].get("leq", [])], "I")
    stages = {}
    for p in pts:
        if p not in d["stages"]:
            raise InputError(f"{_where(path)}: no stage for index point {p!r}")
        stages[p] = load_object(_resolve(path, d["stages"][p]))
    extra = sorted(set(d["stages"]) - set(pts))
    if extra:
        raise InputError(f"{_where(path)}: stages for unknown index points {extra}")
    covers = {}
    for r in d.get("restrictions", []):
        _reject_unknown(r, RESTRICTION_FIELDS, path, "restriction")
        p, q = r["lower"], r["upper"]
        mp = _resolve(path, r["map"])
        m = map_from_dict(read_json(mp), mp)
        if m.source != stages[q] or m.target != stages[p]:
            raise InputError(f"{mp}: restriction {q} -> {p} does not connect the stage files")
        covers[(p, q)] = m
    restrictions = _compose_covers(index, stages, covers, path)
    name = d.get("name", Path(path).stem)
    return _wrap(path, PreordPresheaf, index, stages, restrictions, name)


def _compose_covers(index, stages, covers, path):
    """Restrictions for all ``p <= q`` from those given on the cover relations."""
    out = dict(covers)
    le = index.le
    pts = index.elements
    changed = True
    while changed:
        changed = False
        for p in pts:
            for q in pts:
                if p == q or not le(p, q) or (p, q) in out:
                    continue
                for m in pts:
                    if (p, m) in out and (m, q) in out:
                        out[(p, q)] = out[(p, m)].after(out[(m, q)])
                        changed = True
                        break
    for p in pts:
        for q in pts:
            if p != q and le(p, q) and (p, q) not in out:
                raise InputError(f"{_where(path)}: no restriction for {p} <= {q}")
    return out


def _from_dict(d, path, strict=None):
    kind = d.get("kind") if isinstance(d, dict) else None
    if kind in ("map", "functor"):
        return map_from_dict(d, path)
    if kind == "presheaf":
        return presheaf_from_dict(d, path)
    return object_from_dict(d, path, strict)


def load_file(path, strict=None):
    """Any supported file: preorder, category, map, functor or presheaf."""
    return _wrap(path, _from_dict, read_json(path), path, strict)


def load_directory(path, strict=None):
    """All objects in the top-level ``*.json`` files of a directory, in file-name order.

    Map and functor files are skipped; all remaining files must be of one kind.
    Equal objects are kept once.
    """
    path = Path(path)
    if not path.is_dir():
        raise InputError(f"{path}: not a directory")
    out, kinds = [], set()
    for f in sorted(path.glob("*.json")):
        d = read_json(f)
        kind = d.get("kind") if isinstance(d, dict) else None
        if kind in ("map", "functor"):
            continue
        obj = _wrap(f, _from_dict, d, f, strict)
        kinds.add(kind)
        if obj not in out:
            out.append(obj)
    if len(kinds) > 1:
        raise InputError(f"{path}: mixed object kinds {sorted(kinds)}")
    if not out:
        raise InputError(f"{path}: no objects found")
    return out


def dump_object(A):
    """The file representation of a preorder or category."""
    from .category import FinCat
    if isinstance(A, FinCat):
        return {"kind": "cat", "name": A.name, "objects": list(A.objects),
                "arrows": [{"name": a, "dom": A.objects[A.dom[i]], "cod": A.objects[A.cod[i]]}
                           for i, a in enumerate(A.arrows)],
                "identities": {x: A.arrows[A.ident[i]] for i, x in enumerate(A.objects)},
                "compose": [[A.arrows[g], A.arrows[f], A.arrows[h]] for (g, f), h in sorted(A.comp.items())]}
    return {"kind": "preord", "name": A.name, "elements": list(A.carrier),
            "leq": [[a, b] for a, b in A.pairs()], "strict": False}
