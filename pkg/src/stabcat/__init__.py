"""Coherent systems of subobjects, pretorsion theories and their stable categories, computed
exactly on finite preorders, finite categories and preordered presheaves over finite posets."""

from .category import FinCat, Functor, SubCat, validate_cat
from .corpus import CorpusSpec, cat_fixtures, generate_corpus, parse_corpus, preorder_corpus
from .errors import (
    HypothesesFail,
    InputError,
    NoMediator,
    NonUniqueMediator,
    NotACover,
    NotTrivialOnOverlap,
    PreconditionError,
    StabcatError,
    TruncationWarning,
)
from .preord import FinPreord, MonotoneMap, SubPreord, validate_preord
from .pretorsion import canonical_sequence, is_trivial_morphism, is_trivial_object, phi, tau, theory
from .report import Report
from .stable import (
    PartialMorphism,
    StableCategory,
    compose_partial,
    find_congruence,
    make_partial,
    stable_hom,
    union_collapse_iso,
)
from .subobjects import image_sub, preimage_sub, pushout_holds
from .systems import enumerate_distinguished, is_complemented, is_distinguished, system

__version__ = "0.1.0"
