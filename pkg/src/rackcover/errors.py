"""Exception types shared across the package."""


class RackError(Exception):
    """Base class for all errors raised by this package."""


class BadShape(RackError):
    """Input table is not a square integer matrix with entries in range."""


class NotLeftQuasigroup(RackError):
    """A row of the multiplication table is not a permutation."""


class NotAutomorphism(RackError):
    """The supplied map is not an automorphism of the given group."""


class SubgroupNotFixed(RackError):
    """The subgroup is not fixed pointwise by the twisting automorphism."""


class CapExceeded(RackError):
    """A search or enumeration exceeded its configured cap."""


class NotACongruence(RackError):
    """The partition is not compatible with multiplication and division."""


class NotNormal(RackError):
    """The subgroup is not normal in the ambient group."""


class BlocksNotPreserved(RackError):
    """A group element does not map blocks of the partition to blocks."""


class FiberMismatch(RackError):
    """Two cocycles disagree on base size or fiber."""


class NotSurjective(RackError):
    """The candidate covering map is not onto."""


class NotHomomorphism(RackError):
    """The candidate covering map does not preserve multiplication."""


class NotUniform(RackError):
    """The partition has blocks of unequal size."""


class NotUnderCayley(RackError):
    """The congruence is not contained in the Cayley kernel."""


class CriterionNotApplicable(RackError):
    """Preconditions of a decision criterion do not hold for the input."""


class PreconditionFailed(RackError):
    """The structural hypothesis of an operation does not hold."""


class NotConnected(RackError):
    """The operation requires a connected structure."""


class RightmostMismatch(RackError):
    """The two sides of the identity end in different variables."""


class UnboundVariable(RackError):
    """A term variable is missing from the assignment."""


class UnknownIdentity(RackError):
    """No built-in identity with the requested name."""


class TermSyntaxError(RackError):
    """Malformed term or identity string; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position
