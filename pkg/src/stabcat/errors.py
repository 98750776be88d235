"""Exception hierarchy.

Input problems derive from :class:`InputError` (the CLI maps them to exit
code 2). Violated preconditions of library operations derive from
:class:`PreconditionError`.
"""


class StabcatError(Exception):
    pass


class InputError(StabcatError, ValueError):
    pass


class DuplicateName(InputError):
    def __init__(self, name):
        super().__init__(f"duplicate name {name!r}")
        self.name = name


class UnknownName(InputError):
    def __init__(self, name, where=""):
        super().__init__(f"unknown name {name!r}" + (f" in {where}" if where else ""))
        self.name = name


class NotReflexive(InputError):
    def __init__(self, a, b):
        super().__init__(f"not reflexive: missing ({a}, {b})")
        self.pair = (a, b)


class NotTransitive(InputError):
    def __init__(self, a, c):
        super().__init__(f"not transitive: missing ({a}, {c})")
        self.pair = (a, c)


class NotMonotone(InputError):
    def __init__(self, a, b):
        super().__init__(f"not monotone on the pair ({a}, {b})")
        self.pair = (a, b)


class MissingComposite(InputError):
    def __init__(self, g, f):
        super().__init__(f"missing composite {g} o {f}")
        self.pair = (g, f)


class UnitLawViolation(InputError):
    def __init__(self, f):
        super().__init__(f"unit law fails at {f}")
        self.arrow = f


class AssociativityViolation(InputError):
    def __init__(self, h, g, f):
        super().__init__(f"associativity fails at ({h}, {g}, {f})")
        self.triple = (h, g, f)


class DanglingEndpoint(InputError):
    def __init__(self, arrow):
        super().__init__(f"arrow {arrow!r} has an endpoint that is not an object")
        self.arrow = arrow


class NotAFunctor(InputError):
    def __init__(self, detail):
        super().__init__(f"not a functor: {detail}")
        self.detail = detail


class PreconditionError(StabcatError):
    pass


class KindMismatch(PreconditionError):
    pass


class SizeLimit(PreconditionError):
    pass


class NotDistinguishedInput(PreconditionError):
    def __init__(self, sub):
        super().__init__(f"subobject {sub} is not distinguished")
        self.sub = sub


class NotEpi(PreconditionError):
    pass


class JunctionMismatch(PreconditionError):
    def __init__(self, position, left, right):
        super().__init__(
            f"chain junction {position}: cod({left}) is not isomorphic to dom({right})"
        )
        self.position = position
        self.pair = (left, right)


class NotACover(PreconditionError):
    pass


class NotTrivialOnOverlap(PreconditionError):
    pass


class HypothesisViolated(PreconditionError):
    pass


class HypothesesFail(PreconditionError):
    def __init__(self, message, square=None):
        super().__init__(message)
        self.square = square


class NoMediator(StabcatError):
    pass


class NonUniqueMediator(StabcatError):
    pass


class TruncationWarning(UserWarning):
    pass
