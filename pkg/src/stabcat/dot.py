"""DOT text for Hasse diagrams of subobject lattices and for small categories."""

from __future__ import annotations


def _q(s):
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def lattice_dot(L, name=None):
    """Hasse diagram of a distinguished-subobject lattice, bottom to top."""
    lines = [f"digraph {_q(name or f'{L.ambient.name}:{L.kind}')} {{", "  rankdir=BT;", "  node [shape=box];"]
    for i, lab in enumerate(L.labels()):
        lines.append(f"  n{i} [label={_q(lab)}];")
    for i, j in L.hasse():
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def category_dot(C, show_identities=False):
    """Objects as nodes and arrows as labelled edges."""
    lines = [f"digraph {_q(C.name)} {{", "  node [shape=ellipse];"]
    for i, x in enumerate(C.objects):
        lines.append(f"  o{i} [label={_q(x)}];")
    ids = set(C.ident)
    for a, name in enumerate(C.arrows):
        if a in ids and not show_identities:
            continue
        lines.append(f"  o{C.dom[a]} -> o{C.cod[a]} [label={_q(name)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def preord_dot(P):
    """Hasse diagram of a preorder on its classes of equivalent elements."""
    from .pretorsion import PreordTheory
    F, eta = PreordTheory().phi(P)
    n = len(F)
    lines = [f"digraph {_q(P.name)} {{", "  rankdir=BT;"]
    for k in range(n):
        lines.append(f"  c{k} [label={_q(F.carrier[k])}];")
    lt = [[F.leq[i, j] and i != j for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if lt[i][j] and not any(lt[i][k] and lt[k][j] for k in range(n)):
                lines.append(f"  c{i} -> c{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
