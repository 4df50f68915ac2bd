"""
Exception hierarchy shared by every module.

Validation problems (bad input) and domain problems (poles, branch
violations) are kept apart so the CLI can map them to distinct exit codes.
"""


class QWZetaError(Exception):
    """Base class for all errors raised by the package"""

    reason = "error"

    def __init__(self, message, reason=None, details=None):
        super().__init__(message)
        if reason is not None:
            self.reason = reason
        self.details = details or {}

    def to_dict(self):
        return {
            "reason": self.reason,
            "message": str(self),
            "details": self.details,
        }


class ValidationError(QWZetaError, ValueError):
    reason = "invalid"


class GraphError(ValidationError):
    reason = "graph"


class VoltageError(ValidationError):
    reason = "voltage"


class ConfigError(ValidationError):
    reason = "config"


class DomainError(QWZetaError, ArithmeticError):
    reason = "domain"


class PoleError(DomainError):
    """Zeta evaluated where its reciprocal vanishes"""

    reason = "pole"


class BranchError(DomainError):
    """A fiber eigenvalue left the disk |z - 1| < 1"""

    reason = "branch"


class OverflowCountError(DomainError):
    reason = "overflow"
