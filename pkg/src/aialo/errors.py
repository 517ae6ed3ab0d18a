"""Exception types shared across the package."""


class AialoError(Exception):
    """Base class for all package-specific errors."""


class InfeasibleOrUnbounded(AialoError):
    """The underlying LP has no finite optimum."""


class UnknownParameterOnly(AialoError):
    """A sample was requested for a parameter that is not observable."""


class DomainError(AialoError):
    """A formula was evaluated outside its domain of definition."""


class NumericalBreakdown(AialoError):
    """An ellipsoid update lost positive definiteness."""


class IterationCap(AialoError):
    """The ellipsoid solver exceeded its iteration budget."""


class CombinatorialBlowup(AialoError):
    """Vertex enumeration would exceed the configured size caps."""


class NonUniqueOptimum(AialoError):
    """Two extreme points tie for the best objective value."""


class GeneratorExhausted(AialoError):
    """Instance generation failed too many rejection rounds."""
