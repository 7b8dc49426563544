"""Exception types shared across the toolkit."""


class OrdfixError(Exception):
    """Base class for every error raised by this package."""


class CycleDetected(OrdfixError):
    """Transitive closure of the given pairs would violate antisymmetry."""


class IndexOutOfRange(OrdfixError):
    """An element index is outside 0..n-1."""


class ArityMismatch(OrdfixError):
    """Number of blocks does not match the size of the index poset."""


class EmptyInput(OrdfixError):
    """A nonempty subset was required."""


class HostMismatch(OrdfixError):
    """Operands live over different host posets."""


class NotAPregap(OrdfixError):
    """The two families do not satisfy the pregap condition."""


class PreconditionUnsatisfiable(OrdfixError):
    """The stated precondition cannot hold for the given (finite) input."""


class NotARetraction(OrdfixError):
    """The given map pair does not compose to the identity."""


class NotAChain(OrdfixError):
    """The given list of sets is not totally ordered by bi-domination."""


class NotMonotone(OrdfixError):
    """A map fails to preserve the order."""


class InvalidCongruence(OrdfixError):
    """The partition is not compatible with the lattice operations."""


class InvalidParts(OrdfixError):
    """The parts supplied to a selection transfer are inconsistent."""


class NotALattice(OrdfixError):
    """Some pair of elements lacks a least upper or greatest lower bound."""

    def __init__(self, x, y, reason):
        self.x = x
        self.y = y
        self.reason = reason
        super().__init__(f"not a lattice: elements {x}, {y} ({reason})")


class ConditionViolated(OrdfixError):
    """One of the numbered sequence conditions fails."""

    def __init__(self, which, detail=""):
        self.which = which
        msg = f"condition ({which}) violated"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class UnknownKey(OrdfixError):
    """No generator is registered under this name."""


class BadParams(OrdfixError):
    """Generator parameters are invalid for the requested key."""


class UnknownSuite(OrdfixError):
    """No verification suite is registered under this name."""


class ParseError(OrdfixError):
    """The input text does not conform to the poset file format."""


class BudgetExceeded(OrdfixError):
    """A configured enumeration or search budget was exhausted."""

    def __init__(self, budget, what="budget"):
        self.budget = budget
        self.what = what
        super().__init__(f"{what} exceeded (budget={budget})")
