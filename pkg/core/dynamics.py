# core/dynamics.py

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy import linalg

from .amspace import build_interaction_hamiltonian, is_hermitian, symmetric_basis
from .entanglement import entanglement_entropy
from .exceptions import DomainError, EigensolverError, NumericalError, OutOfRegimeError, WindowError
from .params import derive_scales
from .tables import run_grid

logger = logging.getLogger(__name__)

UNITARITY_TOLERANCE = 1e-9

ENTROPY_CURVE_COLUMNS = ['t_seconds', 'm_over_l', 'entropy_closed_bits', 'entropy_exact_bits', 'truncation_loss']

# m0: both spheres in |m=0>; ml: both in (|l> + |-l>)
PREPARATIONS = ('m0', 'ml')


# ===================================================================
# STATES AND PROPAGATION
# ===================================================================

@dataclass
class EvolutionResult:
    times: np.ndarray
    states: np.ndarray                  # one row per time
    truncation_loss: np.ndarray         # weight on window edges per time
    window_half_width: int
    basis: object = field(default=None, repr=False)


def _sphere_superposition(window, m):
    vector = np.zeros(window.dimension, dtype=complex)
    for value in {float(m), float(-m)}:
        vector[window.index_of_m(value)] += 1.0
    return vector / np.linalg.norm(vector)


def initial_state(basis, m_a, m_b):
    """(|m_A> + |-m_A>) (x) (|m_B> + |-m_B>), normalised; |0>|0> when m = 0."""
    return np.kron(_sphere_superposition(basis.window_a, m_a),
                   _sphere_superposition(basis.window_b, m_b))


def preparation_m(preparation, l_value):
    if preparation == 'm0':
        return 0.0
    if preparation == 'ml':
        return l_value
    raise DomainError(f"preparation must be one of {PREPARATIONS}, got {preparation!r}")


def edge_weight(states, basis):
    """Weight of each state on labels where the window truncates the ladder."""
    mask = np.logical_or.outer(basis.window_a.edge_mask(), basis.window_b.edge_mask()).reshape(-1)
    states = np.atleast_2d(states)
    return np.sum(np.abs(states[:, mask]) ** 2, axis=1)


def evolve_exact(hamiltonian, psi0, times, basis=None, window_half_width=None):
    """psi(t) = exp(-i H t) psi0 by eigendecomposition of H (H in 1/s)."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or np.any(np.diff(times) < 0):
        raise DomainError('times must be a sorted one-dimensional grid')
    if not is_hermitian(hamiltonian):
        raise EigensolverError('Hamiltonian is not Hermitian')
    psi0 = np.asarray(psi0, dtype=complex)

    scale = float(np.max(np.abs(hamiltonian))) if hamiltonian.size else 0.0
    if scale == 0.0:
        states = np.tile(psi0, (times.size, 1))
    else:
        # Dimensionless generator: eigenvalues O(1), time measured in 1/scale
        try:
            energies, vectors = linalg.eigh(hamiltonian / scale)
        except linalg.LinAlgError as exc:
            raise EigensolverError(f'eigendecomposition failed: {exc}') from exc
        coefficients = vectors.conj().T @ psi0
        phases = np.exp(-1j * np.outer(times * scale, energies))
        states = (phases * coefficients) @ vectors.T

    norm0 = np.linalg.norm(psi0)
    drift = np.max(np.abs(np.linalg.norm(states, axis=1) - norm0)) if times.size else 0.0
    if drift > UNITARITY_TOLERANCE:
        raise NumericalError(f'unitarity drift {drift:.3e} exceeds {UNITARITY_TOLERANCE}')

    loss = edge_weight(states, basis) if basis is not None else np.zeros(times.size)
    return EvolutionResult(times, states, loss, window_half_width, basis)


def perturbative_state(psi0, basis, alpha, t, guard=1e-2):
    """Second-order expansion (1 - iHt - H^2 t^2 / 2) psi0.

    Returns (vector, guard_ok); guard_ok is False when g = alpha t l_A l_B / 2
    exceeds `guard`, in which case the expansion is not trusted.
    """
    hamiltonian = build_interaction_hamiltonian(basis, alpha)
    g = alpha * t * basis.window_a.l_ref * basis.window_b.l_ref / 2
    guard_ok = g <= guard
    if not guard_ok:
        logger.warning('perturbative expansion used at g=%.3e above the guard %.1e', g, guard)
    psi0 = np.asarray(psi0, dtype=complex)
    first = hamiltonian @ psi0
    second = hamiltonian @ first
    return psi0 - 1j * t * first - 0.5 * t * t * second, guard_ok


# ===================================================================
# CLOSED-FORM ENTROPY
# ===================================================================

def _xlog2x(x):
    return 0.0 if x == 0 else x * math.log2(x)


def entropy_closed_form(g, kappa):
    """Second-order reduced-state entropy in bits, for 0 <= kappa <= g.

    x^2 log x terms are continued to 0 at x = 0, so kappa = 0 (m = 0) and
    kappa = g (m = l) are both defined.
    """
    if g < 0 or kappa < 0 or kappa > g * (1 + 1e-12):
        raise DomainError(f'need 0 <= kappa <= g, got g={g}, kappa={kappa}')
    kappa = min(kappa, g)
    mixing = 2 * g * g - 4 * g * kappa + 18 * kappa * kappa
    if 1 - mixing <= 0:
        raise OutOfRegimeError(f'closed form invalid at g={g:.3e}, kappa={kappa:.3e}')
    spread = (mixing - 1) * math.log1p(-mixing) / math.log(2)
    return spread - 2 * _xlog2x((g - kappa) ** 2) - _xlog2x(16 * kappa * kappa)


# ===================================================================
# ENTROPY CURVES
# ===================================================================

def _exact_entropies(scales, m_over_l, times, half_width):
    basis = symmetric_basis(scales.l_a, scales.l_b, m_over_l * scales.l_a, m_over_l * scales.l_b, half_width)
    hamiltonian = build_interaction_hamiltonian(basis, scales.alpha)
    psi0 = initial_state(basis, m_over_l * scales.l_a, m_over_l * scales.l_b)
    result = evolve_exact(hamiltonian, psi0, times, basis, half_width)
    entropies = np.array([entanglement_entropy(state, basis) for state in result.states])
    return entropies, result.truncation_loss


def auto_converged_window(scales, m_over_l, t_max, half_width=6, tolerance=1e-6, max_half_width=24):
    """Smallest half-width w (doubling from the default) whose entropy at t_max
    changes by less than `tolerance` relative when w is doubled."""
    times = np.array([t_max])
    current, _ = _exact_entropies(scales, m_over_l, times, half_width)
    while True:
        wider = 2 * half_width
        if wider > max_half_width:
            raise WindowError(f'entropy not converged at half-width {half_width} for m/l={m_over_l}')
        candidate, _ = _exact_entropies(scales, m_over_l, times, wider)
        reference = max(abs(candidate[0]), 1e-300)
        if abs(candidate[0] - current[0]) / reference < tolerance or candidate[0] == current[0]:
            logger.info('m/l=%g converged at half-width %d', m_over_l, half_width)
            return half_width
        logger.info('m/l=%g widening window %d -> %d', m_over_l, half_width, wider)
        half_width, current = wider, candidate


def entropy_curve(config, m_over_l_list, t_grid, workers=1):
    """Closed-form and exact S(rho_A) over a time grid for several m/l values."""
    scales = derive_scales(config)
    settings = config.simulation
    times = np.asarray(t_grid, dtype=float)

    def one_curve(m_over_l):
        if not 0 <= m_over_l <= 1:
            raise DomainError(f'm/l must lie in [0, 1], got {m_over_l}')
        half_width = auto_converged_window(
            scales, m_over_l, float(times.max()), settings.window_half_width,
            settings.convergence_tolerance, settings.max_window_half_width)
        exact, loss = _exact_entropies(scales, m_over_l, times, half_width)
        rows = []
        for t, s_exact, t_loss in zip(times, exact, loss):
            g = scales.coupling_g(t)
            kappa = scales.alpha * t * (m_over_l * scales.l_a) * (m_over_l * scales.l_b) / 2
            try:
                s_closed = entropy_closed_form(g, kappa)
            except OutOfRegimeError:
                logger.warning('closed form out of regime at t=%g, m/l=%g', t, m_over_l)
                s_closed = float('nan')
            rows.append((t, m_over_l, s_closed, s_exact, t_loss))
        return rows

    curves = run_grid(one_curve, list(m_over_l_list), workers)
    frame = pd.DataFrame([row for rows in curves for row in rows], columns=ENTROPY_CURVE_COLUMNS)
    return frame.sort_values(['m_over_l', 't_seconds'], kind='stable').reset_index(drop=True)
