"""
Shared combinatorial scalars: spin-subspace log-dimensions, h(d, N) and the order parameter phi
"""
import logging
import math

from scipy.special import gammaln

from app.models.system import SubspaceDims, ThermoPoint
from app.models.validation import EmptyAntisymmetricSubspaceError

logger = logging.getLogger(__name__)


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k) via log-gamma; caller guarantees 0 <= k <= n"""
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


class CoreService:
    """Binomial log-dimensions and the transition order parameter"""

    def subspace_dims(self, spin_dim: int, n_particles: int) -> SubspaceDims:
        """Log-dimensions of the symmetric and antisymmetric N-fold spin subspaces"""
        if spin_dim < 1 or n_particles < 1:
            raise ValueError("spin_dim and n_particles must be positive")

        sym_log_dim = log_binomial(spin_dim + n_particles - 1, n_particles)
        alt_log_dim = None
        if spin_dim >= n_particles:
            alt_log_dim = log_binomial(spin_dim, n_particles)
        return SubspaceDims(sym_log_dim=sym_log_dim, alt_log_dim=alt_log_dim)

    def h_of(self, spin_dim: int, n_particles: int) -> float:
        """h(d, N) = ln C(d+N-1, N) - ln C(d, N)"""
        dims = self.subspace_dims(spin_dim, n_particles)
        if dims.alt_empty:
            raise EmptyAntisymmetricSubspaceError(spin_dim, n_particles)
        return dims.sym_log_dim - dims.alt_log_dim

    def phi(self, point: ThermoPoint) -> float:
        """phi = N(N-1)/2 * beta*hbar*omega - beta*nu - h(d, N)"""
        params = point.params
        h = self.h_of(params.spin_dim, params.n_particles)
        return params.pair_count * point.beta_hbar_omega - point.beta * params.nu - h

    def h_diagonal_asymptote(self, n_particles: int) -> float:
        """Stirling-series value of h(N, N) = ln C(2N-1, N) for large N"""
        if n_particles < 1:
            raise ValueError("n_particles must be positive")
        return 2 * n_particles * math.log(2) - 0.5 * math.log(math.pi * n_particles) - math.log(2)


core_service = CoreService()
