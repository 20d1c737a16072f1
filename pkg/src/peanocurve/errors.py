"""Exception hierarchy shared by all pipeline stages."""


class PeanoError(Exception):
    """Base class for pipeline errors (mapped to exit status 1 by the CLI)."""

    code = "error"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class Empty(PeanoError):
    code = "empty"


class Disconnected(PeanoError):
    code = "disconnected"


class BudgetExceeded(PeanoError):
    code = "budget_exceeded"


class NestingViolation(PeanoError):
    code = "nesting_violation"


class NotAConnector(PeanoError):
    code = "not_a_connector"


class NoPath(PeanoError):
    code = "no_path"


class NotInChain(PeanoError):
    code = "not_in_chain"


class RefinementFailure(PeanoError):
    code = "refinement_failure"


class EndpointOutsideF(PeanoError):
    code = "endpoint_outside_f"


class FDisconnected(PeanoError):
    code = "f_disconnected"


class OutOfDomain(PeanoError):
    code = "out_of_domain"


class DegenerateSpace(PeanoError):
    code = "degenerate_space"


class InverseUndefined(PeanoError):
    code = "inverse_undefined"


class CertificateFailure(PeanoError):
    code = "certificate_failure"


class InsufficientLevels(PeanoError):
    code = "insufficient_levels"


class DivergentSeries(PeanoError):
    code = "divergent_series"
