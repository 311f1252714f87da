"""Exception types shared across the package."""


class ContamTestError(ValueError):
    """Base class for all domain errors raised by this package."""


class InvalidProportionsError(ContamTestError):
    """Contamination proportions violate 0 <= pi and pi0 + pi1 < 1."""


class FamilyError(ContamTestError):
    """Operation applied to an unsupported or inconsistent model family."""


class SupportError(ContamTestError):
    """Evaluation point or model pair has incompatible support."""


class OrderingError(ContamTestError):
    """Mixture-proportion arguments violate their required ordering."""


class SingularSystemError(ContamTestError):
    """The proportion-recovery system is singular (identical mixtures)."""


class InfeasibleParamsError(ContamTestError):
    """Inputs are mutually inconsistent with any valid contamination."""


class DegenerateRegionError(ContamTestError):
    """Feasible-region parameters do not define a valid region."""


class EmptyRegionError(ContamTestError):
    """No contamination pair satisfies all constraints."""


class NoValidThresholdError(ContamTestError):
    """The attainable threshold range is empty."""


class ScenarioError(ContamTestError):
    """Scenario configuration is malformed or inconsistent."""
