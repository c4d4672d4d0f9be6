"""
Error types shared by every armforge module.

Each class carries a stable ``kind`` string; the CLI reports it in its error
JSON so scripts can branch on the failure without parsing messages.
"""
from typing import Any, Dict


class ArmForgeError(Exception):
    """Base class for all armforge failures."""

    kind = "ArmForgeError"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "message": self.message, **self.details}


class DomainError(ArmForgeError, ValueError):
    """Argument outside the mathematical domain of an operation."""

    kind = "DomainError"


class ContractViolation(ArmForgeError, ValueError):
    """Caller broke a precondition (dimension mismatch, out-of-limit state)."""

    kind = "ContractViolation"


class ConfigurationError(ArmForgeError):
    """Config file or named entry missing or malformed."""

    kind = "ConfigurationError"


class ValidationError(ArmForgeError, ValueError):
    kind = "ValidationError"


class Unreachable(ArmForgeError):
    kind = "Unreachable"


class NoSolution(ArmForgeError):
    """IK did not converge; ``details`` holds the best residual."""

    kind = "NoSolution"

    def __init__(self, message: str, residual: float, iters: int, **details: Any):
        super().__init__(message, residual=residual, iters=iters, **details)
        self.residual = residual
        self.iters = iters


class NotVisible(ArmForgeError):
    kind = "NotVisible"


class StallFault(ArmForgeError):
    """Gravity demand at a joint exceeded what its motor can supply."""

    kind = "Stall"

    def __init__(self, message: str, joint: str, demand: float, available: float):
        super().__init__(message, joint=joint, demand=demand, available=available)
        self.joint = joint
        self.demand = demand
        self.available = available
