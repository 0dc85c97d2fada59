# core/entanglement.py

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .amspace import build_single_sphere_operators
from .exceptions import DomainError, NegativeStateError, WindowError

logger = logging.getLogger(__name__)

EIGENVALUE_CUTOFF = 1e-15
NEGATIVE_TOLERANCE = 1e-9
NEGATIVITY_CLAMP = 1e-12
EDGE_TOLERANCE = 1e-12


# ===================================================================
# DENSITY MATRIX HELPERS
# ===================================================================

def _dims(basis_or_dims):
    if hasattr(basis_or_dims, 'dims'):
        return basis_or_dims.dims
    dim_a, dim_b = basis_or_dims
    return int(dim_a), int(dim_b)


def density_matrix(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def _check_product_shape(rho, dims):
    rho = np.asarray(rho)
    dim_a, dim_b = dims
    if rho.shape != (dim_a * dim_b, dim_a * dim_b):
        raise DomainError(f'matrix of shape {rho.shape} is not on a {dim_a}x{dim_b} product basis')
    return rho


def partial_trace(rho, basis_or_dims, keep='A'):
    """Reduced density matrix of sphere `keep`."""
    dims = _dims(basis_or_dims)
    rho = _check_product_shape(rho, dims)
    blocks = rho.reshape(dims[0], dims[1], dims[0], dims[1])
    if keep.upper() == 'A':
        return np.einsum('ijkj->ik', blocks)
    if keep.upper() == 'B':
        return np.einsum('ijil->jl', blocks)
    raise DomainError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(rho, basis_or_dims, sphere='B'):
    dims = _dims(basis_or_dims)
    rho = _check_product_shape(rho, dims)
    blocks = rho.reshape(dims[0], dims[1], dims[0], dims[1])
    if sphere.upper() == 'B':
        swapped = blocks.transpose(0, 3, 2, 1)
    else:
        swapped = blocks.transpose(2, 1, 0, 3)
    return swapped.reshape(rho.shape)


# ===================================================================
# ENTROPIES
# ===================================================================

def entropy_bits(probabilities):
    """-sum p log2 p over p > 1e-15."""
    p = np.asarray(probabilities, dtype=float)
    p = p[p > EIGENVALUE_CUTOFF]
    return float(-np.sum(p * np.log2(p)))


def von_neumann_entropy(rho):
    """Entropy in bits; eigenvalues below -1e-9 mark an invalid state."""
    eigenvalues = linalg.eigvalsh(np.asarray(rho))
    if eigenvalues.size and eigenvalues.min() < -NEGATIVE_TOLERANCE:
        raise NegativeStateError(f'density matrix has eigenvalue {eigenvalues.min():.3e}')
    return entropy_bits(eigenvalues)


def schmidt_coefficients(psi, basis_or_dims):
    """Singular values of the amplitude matrix, normalised to a unit state."""
    dims = _dims(basis_or_dims)
    amplitudes = np.asarray(psi, dtype=complex).reshape(dims)
    singular = linalg.svd(amplitudes, compute_uv=False)
    norm = math.sqrt(float(np.sum(singular ** 2)))
    return singular / norm if norm > 0 else singular


def entanglement_entropy(psi, basis_or_dims):
    """S(rho_A) of a pure state, via the Schmidt coefficients."""
    return entropy_bits(schmidt_coefficients(psi, basis_or_dims) ** 2)


def relative_entropy_lower_bound(rho, basis_or_dims):
    """max(S(rho_A) - S(rho_AB), S(rho_B) - S(rho_AB), 0)."""
    s_ab = von_neumann_entropy(rho)
    s_a = von_neumann_entropy(partial_trace(rho, basis_or_dims, 'A'))
    s_b = von_neumann_entropy(partial_trace(rho, basis_or_dims, 'B'))
    return max(s_a - s_ab, s_b - s_ab, 0.0)


# ===================================================================
# LOGARITHMIC NEGATIVITY
# ===================================================================

def _clamp_negativity(value):
    if -NEGATIVITY_CLAMP < value < 0:
        return 0.0
    return value


def log_negativity(rho, basis_or_dims):
    """E_N = log2 of the trace norm of the partial transpose over B.

    rho is normalised to unit trace before the partial transpose.
    """
    rho = np.asarray(rho, dtype=complex)
    trace = float(np.trace(rho).real)
    if not trace > 0:
        raise NegativeStateError(f'density matrix has trace {trace:.3e}')
    transposed = partial_transpose(rho / trace, basis_or_dims, 'B')
    transposed = (transposed + transposed.conj().T) / 2
    trace_norm = float(np.sum(np.abs(linalg.eigvalsh(transposed))))
    return _clamp_negativity(math.log2(trace_norm))


def log_negativity_pure(psi, basis_or_dims):
    """Pure-state shortcut: the trace norm equals (sum of Schmidt coefficients)^2."""
    coefficients = schmidt_coefficients(psi, basis_or_dims)
    return _clamp_negativity(2.0 * math.log2(float(np.sum(coefficients))))


# ===================================================================
# SUM-UNCERTAINTY WITNESS
# ===================================================================

@dataclass(frozen=True)
class WitnessReport:
    total_variance_sum: float   # hbar^2 units
    bound: float                # l_A + l_B
    violated: bool
    margin: float               # (sum - bound) / bound, negative when violated

    def as_dict(self):
        return {
            'total_variance_sum': self.total_variance_sum,
            'bound': self.bound,
            'violated': self.violated,
            'margin': self.margin,
        }


def _centered_variance(rho, operator):
    mean = np.trace(rho @ operator).real
    centered = operator - mean * np.eye(operator.shape[0])
    return float(np.trace(centered @ rho @ centered).real)


def _check_edges(rho, basis):
    for sphere in ('A', 'B'):
        window = basis.window(sphere)
        populations = np.diag(partial_trace(rho, basis, sphere)).real
        edge_weight = float(np.sum(populations[window.edge_mask()]))
        if edge_weight > EDGE_TOLERANCE:
            raise WindowError(
                f'sphere {sphere} holds weight {edge_weight:.3e} on window edges; '
                'widen the window before evaluating variances')


def witness_sum_uncertainty(rho, basis, l_a=None, l_b=None, measurement_variance=0.0, tolerance=1e-9):
    """Compare sum_alpha Var(L_A,alpha + L_B,alpha) with l_A + l_B.

    Separable states never fall below the bound. The z variance is
    accumulated in m offsets relative to the most populated label, so
    windows anchored at m ~ 1e23 keep full precision.
    """
    rho = np.asarray(rho, dtype=complex)
    _check_edges(rho, basis)
    l_a = basis.window_a.l_ref if l_a is None else l_a
    l_b = basis.window_b.l_ref if l_b is None else l_b

    ops_a = build_single_sphere_operators(basis.window_a)
    ops_b = build_single_sphere_operators(basis.window_b)
    eye_a = np.eye(basis.window_a.dimension)
    eye_b = np.eye(basis.window_b.dimension)
    variance = 0.0
    for component in ('L_x', 'L_y'):
        total = np.kron(getattr(ops_a, component), eye_b) + np.kron(eye_a, getattr(ops_b, component))
        variance += _centered_variance(rho, total)

    populations = np.diag(rho).real
    top_a, top_b = basis.labels(int(np.argmax(populations)))
    m_a = basis.window_a.m_relative(basis.window_a.anchors[top_a.anchor])
    m_b = basis.window_b.m_relative(basis.window_b.anchors[top_b.anchor])
    total_m = np.add.outer(m_a, m_b).reshape(-1)
    mean_m = float(np.dot(populations, total_m))
    variance += float(np.dot(populations, (total_m - mean_m) ** 2))

    total = variance + measurement_variance
    bound = float(l_a + l_b)
    return WitnessReport(
        total_variance_sum=total,
        bound=bound,
        violated=total < bound * (1 - tolerance),
        margin=(total - bound) / bound if bound else math.inf,
    )
