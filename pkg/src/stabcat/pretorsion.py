"""The two concrete pretorsion theories.

``preord``: torsion objects are the equivalence relations, torsion-free
objects the partial orders. ``tau`` keeps the symmetric core of the order,
``phi`` is the condensation by that core.

``cat``: torsion objects are the groupoids, torsion-free objects the skeletal
categories. ``tau`` is the wide subcategory of isomorphisms, ``phi`` the
skeletal quotient of :mod:`stabcat.chains`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ambient as amb
from .category import Functor, SubCat, full_arrows
from .chains import (
    DEFAULT_MAX_CHAIN,
    ChainValuedFunctor,
    FunctorFromQuotient,
    QuotientFunctor,
    SkeletalQuotient,
    functors_from_quotient,
)
from .errors import KindMismatch
from .preord import FinPreord, MonotoneMap, SubPreord
from .report import witness_map


@dataclass
class TrivialityCertificate:
    """Verdict on whether a morphism factors through a trivial object.

    For "yes", ``through`` is the trivial object and ``legs`` the pair
    ``(first, second)`` whose composite is the morphism. For "no",
    ``violation`` names the offending pair or arrow.
    """

    morphism: object
    verdict: bool
    through: object = None
    legs: tuple = ()
    violation: object = None

    def __bool__(self):
        return self.verdict

    def recomposes(self):
        if not self.verdict:
            return True
        first, second = self.legs
        return second.after(first) == self.morphism


@dataclass
class ZExactSequence:
    """``tau(A) --eps--> A --eta--> phi(A)``."""

    object: object
    torsion_part: object
    counit: object
    torsionfree_part: object
    unit: object
    truncated: bool = False
    notes: list = field(default_factory=list)


# -- preorders ------------------------------------------------------------------

class PreordTheory:
    """Equivalence relations / partial orders on finite preorders."""

    name = "preord"
    ambient_kind = "preord"

    def _check(self, A):
        if amb.kind_of(A) != "preord":
            raise KindMismatch("the preorder theory applies to preorders")

    def is_torsion(self, A):
        self._check(A)
        return A.is_symmetric()

    def is_torsion_free(self, A):
        self._check(A)
        return A.is_antisymmetric()

    def is_trivial_object(self, A):
        self._check(A)
        return bool(np.array_equal(A.leq, np.eye(len(A), dtype=bool)))

    def is_trivial_morphism(self, f):
        """Trivial iff ``a <= b`` implies ``f(a) = f(b)``; the witness factors through the discrete image."""
        X = f.source
        for i, j in np.argwhere(X.leq):
            if f.images[i] != f.images[j]:
                return TrivialityCertificate(f, False, violation=(X.carrier[i], X.carrier[j]))
        Y = f.target
        img = sorted(set(f.images))
        D = FinPreord([Y.carrier[j] for j in img], np.eye(len(img), dtype=bool), f"disc({Y.name})")
        pos = {j: k for k, j in enumerate(img)}
        first = MonotoneMap(X, D, tuple(pos[j] for j in f.images), check=False)
        second = MonotoneMap(D, Y, tuple(img), check=False)
        return TrivialityCertificate(f, True, D, (first, second))

    def tau(self, A):
        self._check(A)
        T = A._cache.get("tau")
        if T is None:
            T = FinPreord(A.carrier, A.leq & A.leq.T, f"tau({A.name})")
            A._cache["tau"] = T
        return T, MonotoneMap(T, A, tuple(range(len(A))), check=False)

    def classes(self, A):
        """Classes of the symmetric core, in order of first member."""
        seen, out = set(), []
        sym = A.leq & A.leq.T
        for i in range(len(A)):
            if i in seen:
                continue
            cls = tuple(int(j) for j in np.flatnonzero(sym[i]))
            seen.update(cls)
            out.append(cls)
        return out

    def phi(self, A):
        self._check(A)
        got = A._cache.get("phi")
        if got is None:
            cls = self.classes(A)
            of = {}
            for k, c in enumerate(cls):
                for i in c:
                    of[i] = k
            names = ["[" + ",".join(A.carrier[i] for i in c) + "]" for c in cls]
            leq = np.array([[bool(A.leq[c[0], d[0]]) for d in cls] for c in cls], dtype=bool).reshape(len(cls), len(cls))
            F = FinPreord(names, leq, f"phi({A.name})")
            got = (F, MonotoneMap(A, F, tuple(of[i] for i in range(len(A))), check=False))
            A._cache["phi"] = got
        return got

    def canonical_sequence(self, A):
        T, eps = self.tau(A)
        F, eta = self.phi(A)
        return ZExactSequence(A, T, eps, F, eta)

    def tau_map(self, f):
        TA, _ = self.tau(f.source)
        TB, _ = self.tau(f.target)
        return MonotoneMap(TA, TB, f.images, check=False)

    def phi_map(self, f):
        FA, etaA = self.phi(f.source)
        FB, etaB = self.phi(f.target)
        first = {}
        for i, k in enumerate(etaA.images):
            first.setdefault(k, etaB.images[f.images[i]])
        return MonotoneMap(FA, FB, tuple(first[k] for k in range(len(FA))), check=False)

    def homs_from_phi(self, A, B):
        F, _ = self.phi(A)
        return amb.homs(F, B)

    def through_eta(self, h, A):
        """``h o eta_A`` for a morphism ``h`` out of ``phi(A)``."""
        return h.after(self.phi(A)[1])

    def eta_after(self, A, m):
        """``eta_A o m``."""
        return self.phi(A)[1].after(m)

    def is_trivial_after_eta(self, A, m):
        return bool(self.is_trivial_morphism(self.eta_after(A, m)))

    # class-level view of phi(A), shared with the category theory
    def phi_class_of(self, A):
        return self.phi(A)[1].images

    def phi_classes_count(self, A):
        return len(self.phi(A)[0])

    def phi_sub(self, A, kmask):
        return SubPreord(self.phi(A)[0], kmask)

    def phi_is_distinguished(self, A, kmask, sys_):
        return sys_.is_distinguished(SubPreord(self.phi(A)[0], kmask))

    def is_trivial(self, f):
        pairs = f.source._cache.get("strict_pairs")
        if pairs is None:
            X = f.source
            pairs = [(int(i), int(j)) for i, j in np.argwhere(X.leq) if i != j]
            X._cache["strict_pairs"] = pairs
        im = f.images
        return all(im[i] == im[j] for i, j in pairs)

    def phi_sub_check(self, A, S):
        """Whether ``phi(s)`` is an embedding (injective and order-reflecting) onto its image."""
        phis = self.phi_map(S.inclusion())
        FS, FA = phis.source, phis.target
        ok = phis.is_injective() and all(
            FS.leq[i, j] == FA.leq[phis.images[i], phis.images[j]]
            for i in range(len(FS)) for j in range(len(FS)))
        return ok, None if ok else witness_map(phis)

    def phi_of_sub_is_iso(self, A, S):
        phis = self.phi_map(S.inclusion())
        if not (phis.is_injective() and phis.is_surjective()):
            return False
        # an isomorphism of preorders also reflects the order
        FS, FA = phis.source, phis.target
        return all(FS.leq[i, j] == FA.leq[phis.images[i], phis.images[j]]
                   for i in range(len(FS)) for j in range(len(FS)))

    def bounded(self, A):
        return False


# -- categories -----------------------------------------------------------------

class CatTheory:
    """Groupoids / skeletal categories on finite categories."""

    name = "cat"
    ambient_kind = "cat"

    def __init__(self, max_chain=DEFAULT_MAX_CHAIN):
        self.max_chain = max_chain
        self._quotients = {}

    def _check(self, A):
        if amb.kind_of(A) != "cat":
            raise KindMismatch("the category theory applies to categories")

    def is_torsion(self, A):
        self._check(A)
        return all(A.is_iso(a) for a in range(len(A.arrows)))

    def is_torsion_free(self, A):
        self._check(A)
        return all(A.dom[a] == A.cod[a] for a in range(len(A.arrows)) if A.is_iso(a))

    def is_trivial_object(self, A):
        self._check(A)
        return all(A.dom[a] == A.cod[a] and A.is_iso(a) for a in range(len(A.arrows)))

    def is_trivial_morphism(self, F):
        """Trivial iff every arrow goes to an invertible endomorphism; the witness factors
        through the subcategory of invertible endomorphisms at the image objects."""
        if isinstance(F, ChainValuedFunctor):
            q = F.target
            for a, c in enumerate(F.arr_images):
                if c.src != c.dst or not q.is_iso(c):
                    return TrivialityCertificate(F, False, violation=F.source.arrows[a])
            return TrivialityCertificate(F, True, through="invertible endomorphisms")
        X, Y = F.source, F.target
        for a, b in enumerate(F.arr_images):
            if Y.dom[b] != Y.cod[b] or not Y.is_iso(b):
                return TrivialityCertificate(F, False, violation=X.arrows[a])
        om, _ = F.image_masks()
        am = 0
        for b in range(len(Y.arrows)):
            if om >> Y.dom[b] & 1 and Y.dom[b] == Y.cod[b] and Y.is_iso(b):
                am |= 1 << b
        D = SubCat(Y, om, am, check=True)
        first = F.corestrict(D)
        return TrivialityCertificate(F, True, D.as_object(), (first, D.inclusion()))

    def tau(self, A):
        self._check(A)
        am = sum(1 << a for a in range(len(A.arrows)) if A.is_iso(a))
        S = SubCat(A, A.full_obj_mask, am, check=False)
        return S.as_object(), S.inclusion()

    def quotient(self, A):
        q = self._quotients.get(A)
        if q is None:
            q = SkeletalQuotient(A, self.max_chain)
            self._quotients[A] = q
        return q

    def phi(self, A):
        """``(phi(A), eta_A)``: a FinCat and a Functor when finite, else the lazy quotient."""
        self._check(A)
        q = self.quotient(A)
        if q.is_finite:
            Q = q.to_fincat()
            eta = Functor(A, Q, tuple(q.class_of),
                          tuple(q.arrow_index(q.generator(a)) for a in range(len(A.arrows))), check=False)
            return Q, eta
        q.warn_if_truncated()
        return q, QuotientFunctor(A, q)

    def canonical_sequence(self, A):
        T, eps = self.tau(A)
        F, eta = self.phi(A)
        seq = ZExactSequence(A, T, eps, F, eta, truncated=not self.quotient(A).is_finite)
        if seq.truncated:
            seq.notes.append(f"phi({A.name}) is infinite; chains enumerated up to length {self.max_chain}")
        return seq

    def tau_map(self, F):
        TA, _ = self.tau(F.source)
        TB, _ = self.tau(F.target)
        X, Y = F.source, F.target
        arr = tuple(TB.arr_index(Y.arrows[F.arr_images[X.arr_index(n)]]) for n in TA.arrows)
        return Functor(TA, TB, F.obj_images, arr, check=False)

    def phi_map_on_chain(self, F, c):
        """Image of a chain of ``phi(source)`` under ``phi(F)``, as a chain of ``phi(target)``."""
        qA, qB = self.quotient(F.source), self.quotient(F.target)
        out = qB.identity(qB.class_of[F.obj_images[qA.classes[c.src][0]]])
        for a in c.arrows:
            out = qB.compose(qB.generator(F.arr_images[a]), out)
        return out

    def phi_map_classes(self, F):
        qA, qB = self.quotient(F.source), self.quotient(F.target)
        return tuple(qB.class_of[F.obj_images[cls[0]]] for cls in qA.classes)

    def homs_from_phi(self, A, B):
        q = self.quotient(A)
        if q.is_finite:
            return amb.homs(q.to_fincat(), B)
        return functors_from_quotient(q, B)

    def through_eta(self, h, A):
        if isinstance(h, FunctorFromQuotient):
            return h.after_eta()
        return h.after(self.phi(A)[1])

    def eta_after(self, A, m):
        return self.phi(A)[1].after(m)

    def is_trivial_after_eta(self, A, m):
        return bool(self.is_trivial_morphism(self.eta_after(A, m)))

    # class-level view of phi(A)
    def phi_class_of(self, A):
        return tuple(self.quotient(A).class_of)

    def phi_classes_count(self, A):
        return len(self.quotient(A).classes)

    def phi_is_distinguished(self, A, kmask, sys_):
        """Decide a full subobject of ``phi(A)`` on a set of classes, for the category kinds.

        Every arrow of the quotient is a composite of one-arrow chains, so the
        one-sided closure conditions need only be checked on those.
        """
        q = self.quotient(A)
        if q.is_finite:
            Q = q.to_fincat()
            return sys_.is_distinguished(SubCat(Q, kmask, full_arrows(Q, kmask), check=False))
        if sys_.kind == "indiscrete":
            return kmask in (0, (1 << len(q.classes)) - 1)
        C = A
        for a in q.generators:
            d_in = kmask >> q.class_of[C.dom[a]] & 1
            c_in = kmask >> q.class_of[C.cod[a]] & 1
            if sys_.kind in ("left-saturated", "saturated") and c_in and not d_in:
                return False
            if sys_.kind in ("right-saturated", "saturated") and d_in and not c_in:
                return False
        return True

    def is_trivial(self, F):
        return bool(self.is_trivial_morphism(F))

    def phi_sub_check(self, A, S):
        """Whether ``phi(s)`` is injective on classes and maps the chains of ``phi(S)``
        bijectively onto the chains of ``phi(A)`` between the image classes (up to the bound)."""
        So = S.as_object()
        inc = S.inclusion()
        cls = self.phi_map_classes(inc)
        if len(set(cls)) != len(cls):
            return False, {"classes": list(cls)}
        qS, qA = self.quotient(So), self.quotient(A)
        L = self.max_chain if not (qS.is_finite and qA.is_finite) else None
        seen = {}
        for c in qS.chains(L):
            img = self.phi_map_on_chain(inc, c)
            if img in seen:
                return False, {"identified": [qS.label(seen[img]), qS.label(c)]}
            seen[img] = c
        K = set(cls)
        missing = [qA.label(c) for c in qA.chains(L)
                   if c.src in K and c.dst in K and c not in seen]
        if missing:
            return False, {"not_in_image": missing[:3]}
        return True, None

    def phi_of_sub_is_iso(self, A, S):
        inc = S.inclusion()
        cls = self.phi_map_classes(inc)
        if sorted(cls) != list(range(self.phi_classes_count(A))):
            return False
        # phi(A) is generated by one-arrow chains; all of them must come from S
        qA = self.quotient(A)
        _, am = inc.image_masks()
        return all(am >> a & 1 for a in qA.generators)

    def bounded(self, A):
        return not self.quotient(A).is_finite


def theory(name, max_chain=DEFAULT_MAX_CHAIN):
    if not isinstance(name, str):
        return name  # already a theory object
    if name in ("preord", "preord-theory"):
        return PreordTheory()
    if name in ("cat", "cat-theory"):
        return CatTheory(max_chain)
    raise KindMismatch(f"unknown pretorsion theory {name!r}")


def theory_for(A, max_chain=DEFAULT_MAX_CHAIN):
    return theory(amb.kind_of(A), max_chain)


# -- module-level conveniences ---------------------------------------------------

def is_torsion(A, th=None):
    return (th or theory_for(A)).is_torsion(A)


def is_torsion_free(A, th=None):
    return (th or theory_for(A)).is_torsion_free(A)


def is_trivial_object(A, th=None):
    return (th or theory_for(A)).is_trivial_object(A)


def is_trivial_morphism(f, th=None):
    src = f.source
    return (th or theory_for(src)).is_trivial_morphism(f)


def tau(A, th=None):
    return (th or theory_for(A)).tau(A)


def phi(A, th=None):
    return (th or theory_for(A)).phi(A)


def canonical_sequence(A, th=None):
    return (th or theory_for(A)).canonical_sequence(A)


def trivial_objects_upto(kind, n):
    """Trivial objects with at most ``n`` elements: discrete preorders, or disjoint unions
    of one-object groups of order at most two for categories."""
    if kind == "preord":
        from .preord import discrete, empty
        letters = "abcdefgh"
        return [empty("D0")] + [discrete(*letters[:k], name=f"D{k}") for k in range(1, n + 1)]
    from .category import disjoint_union_cat, empty_cat, point_cat
    from .corpus import cyclic_group_cat
    out = [empty_cat("D0")]
    for k in range(1, n + 1):
        for z in range(k + 1):
            parts = [point_cat(f"p{i}", f"p{i}") for i in range(k - z)]
            parts += [cyclic_group_cat(2, f"g{i}", f"s{i}") for i in range(z)]
            out.append(disjoint_union_cat(*parts, name=f"T{k}_{z}"))
    return out

