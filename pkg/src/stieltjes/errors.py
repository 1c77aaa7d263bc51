"""Exception hierarchy shared by every module of the package."""


class StieltjesError(Exception):
    """Base class for all library errors."""


class ValidationError(StieltjesError, ValueError):
    """Malformed input: bad configuration, argument out of range, etc."""


class OutOfWindow(ValidationError):
    """A query point lies outside the working window of the derivator."""


class GeneratorUnbounded(ValidationError):
    """A jump generator whose total mass is not finite."""


class ToleranceNotMet(StieltjesError):
    """Adaptive quadrature exhausted its refinement budget."""


class DerivativeUndefined(StieltjesError):
    """No g-derivative convention applies at the requested point."""


class LimitNotConverged(StieltjesError):
    """A one-sided limit or difference quotient failed its Cauchy test."""


class RouteUnavailable(StieltjesError):
    """A forced monomial route does not apply to the given derivator."""


class NotCertified(StieltjesError):
    """No rigorous truncation bound is available at the requested point."""


class DivergenceDetected(StieltjesError):
    """Partial sums of an uncertified series do not settle."""


class NotIdentifiable(StieltjesError):
    """Series coefficients are not uniquely determined by derivatives."""


class BoundViolated(StieltjesError):
    """A stored coefficient exceeds a claimed growth bound."""


class OutsideDomain(StieltjesError):
    """Evaluation point outside the convergence domain of a series."""


class SingularFactor(StieltjesError):
    """A factor 1 + lambda * jump vanishes where the product is inverted."""


class HypothesisViolated(StieltjesError):
    """The non-vanishing hypothesis needed for an extension fails."""


class SuiteFailed(StieltjesError):
    """A verification suite exceeded its tolerance."""
