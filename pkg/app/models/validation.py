from typing import Dict, Any
from pydantic import ValidationError


class AnyonDomainError(ValueError):
    """Base class for domain errors raised by the thermodynamics services"""


class EmptyAntisymmetricSubspaceError(AnyonDomainError):
    """Raised when d < N and a quantity needs the antisymmetric spin subspace"""

    def __init__(self, spin_dim: int, n_particles: int):
        self.spin_dim = spin_dim
        self.n_particles = n_particles
        super().__init__(
            f"empty antisymmetric spin subspace: d={spin_dim} < N={n_particles}"
        )


class NoBracketError(AnyonDomainError):
    """Raised when phi has constant sign over the admissible range of a parameter"""


class InfeasibleTargetError(AnyonDomainError):
    """Raised when a requested phi target cannot be met by a positive frequency"""


class EnumerationGuardError(AnyonDomainError):
    """Raised when brute-force enumeration would exceed its size guard"""


class CycleSpecError(AnyonDomainError):
    """Raised when the strokes of an engine cycle are inconsistent"""


class UsageError(ValueError):
    """Raised for malformed or missing command-line arguments"""

    def __init__(self, flag: str, message: str):
        self.flag = flag
        super().__init__(message)


class ErrorFormatter:
    """Format errors into the document shape shared by the CLI and the API"""

    @staticmethod
    def format_pydantic_error(error: ValidationError) -> Dict[str, Any]:
        """Format Pydantic validation errors"""
        formatted_errors = []

        for err in error.errors():
            field = '.'.join(str(loc) for loc in err['loc'])
            formatted_errors.append({
                'field': field,
                'message': err['msg'],
                'type': err['type'],
            })

        return {
            'error': 'VALIDATION_ERROR',
            'message': 'Input validation failed',
            'details': formatted_errors
        }

    @staticmethod
    def format_usage_error(flag: str, message: str) -> Dict[str, Any]:
        """Format command-line usage errors"""
        return {
            'error': 'USAGE_ERROR',
            'message': 'Invalid command-line arguments',
            'details': {
                'flag': flag,
                'message': message
            }
        }

    @staticmethod
    def format_domain_error(error: AnyonDomainError) -> Dict[str, Any]:
        """Format domain errors (empty subspace, infeasible targets, guards)"""
        return {
            'error': 'DOMAIN_ERROR',
            'message': 'Parameters outside the admissible domain',
            'details': {
                'type': type(error).__name__,
                'message': str(error)
            }
        }

    @staticmethod
    def format_numerical_error(operation: str, message: str) -> Dict[str, Any]:
        """Format numerical failures such as a missing root bracket"""
        return {
            'error': 'NUMERICAL_ERROR',
            'message': f'Numerical {operation} failed',
            'details': {
                'operation': operation,
                'message': message
            }
        }
