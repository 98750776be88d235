"""Deliberately broken structures used to show that the verifiers catch violations."""

from __future__ import annotations

from . import ambient as amb
from .corpus import P3
from .preord import discrete
from .systems import CoherentSystem


def open_minus_ab():
    """The open system on preorders with ``{a,b}`` removed from ``P3`` (breaks pullback stability)."""
    return CoherentSystem("open", exclude=[(P3(), ["a", "b"])], name="open-minus-{a,b}-in-P3")


def open_minus_ab_discrete():
    """The open system with ``{a,b}`` removed from the discrete preorder on ``a, b, c``
    (breaks closure under unions: ``{a} u {b}``)."""
    return CoherentSystem("open", exclude=[(discrete("a", "b", "c"), ["a", "b"])],
                          name="open-minus-{a,b}-in-D3")


class SwappedTheory:
    """A pretorsion theory whose torsion part has been replaced by a copy of the torsion-free part.

    ``tau(A)`` becomes the induced substructure on one representative per
    class (isomorphic to ``phi(A)``), with its inclusion as counit. The
    canonical sequences are then wrong wherever a class has two members.
    """

    def __init__(self, base):
        self.base = base
        self.name = f"swapped-{base.name}"
        self.ambient_kind = base.ambient_kind

    def __getattr__(self, item):
        return getattr(self.base, item)

    def tau(self, A):
        cls = self.base.phi_class_of(A)
        seen, mask = set(), 0
        for i, k in enumerate(cls):
            if k not in seen:
                seen.add(k)
                mask |= 1 << i
        S = amb.full_on(A, mask)
        return S.as_object(), S.inclusion()

    def canonical_sequence(self, A):
        seq = self.base.canonical_sequence(A)
        seq.torsion_part, seq.counit = self.tau(A)
        return seq
