# core/collisions.py
"""Gas-collision decoherence as a Poisson mixture of ladder-kicked branches."""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import stats

from .amspace import apply_ladder_power, build_interaction_hamiltonian, ladder_matrix, symmetric_basis
from .dynamics import PREPARATIONS, evolve_exact, initial_state, preparation_m
from .entanglement import density_matrix, log_negativity
from .exceptions import DomainError, WindowError
from .params import CODATA, derive_scales
from .tables import run_grid

logger = logging.getLogger(__name__)

COLLISION_CURVE_COLUMNS = ['t_seconds', 'n', 'preparation', 'log_negativity']

# Relative squared norm below which a kicked branch counts as annihilated
ZERO_BRANCH = 1e-24
OVERFLOW_TOLERANCE = 1e-8


@dataclass(frozen=True)
class CollisionModel:
    rate: float          # 1/s
    max_quanta: int      # n, kicks q uniform in 1..n
    time: float          # s

    def __post_init__(self):
        if self.rate < 0:
            raise DomainError(f'collision rate must be nonnegative, got {self.rate}')
        if self.max_quanta < 1:
            raise DomainError(f'max_quanta must be at least 1, got {self.max_quanta}')
        if self.time < 0:
            raise DomainError(f'time must be nonnegative, got {self.time}')

    @property
    def expected_events(self):
        return self.rate * self.time


def poisson_weight(k, rate, time):
    """P(k; t) = (r t)^k exp(-r t) / k!."""
    if k < 0:
        raise DomainError(f'event count must be nonnegative, got {k}')
    if int(k) != k:
        raise DomainError(f'event count must be an integer, got {k}')
    return float(stats.poisson.pmf(int(k), rate * time))


def collision_rate(radius, pressure, temperature, gas_mass, constants=CODATA):
    """Kinetic-theory impact rate r = pi R^2 P / sqrt(2 pi k_B T m_gas)."""
    if temperature <= 0:
        raise DomainError(f'gas temperature must be positive, got {temperature}')
    if gas_mass <= 0:
        raise DomainError(f'gas molecule mass must be positive, got {gas_mass}')
    if radius <= 0:
        raise DomainError(f'radius must be positive, got {radius}')
    if pressure < 0:
        raise DomainError(f'pressure must be nonnegative, got {pressure}')
    if pressure == 0:
        return 0.0
    return math.pi * radius ** 2 * pressure / math.sqrt(2 * math.pi * constants.k_B * temperature * gas_mass)


def _largest_step(window, sign, scale):
    """Largest |<m+-1|L+-|m>| / scale inside the window, 0 when L+- vanishes there."""
    return float(np.max(np.abs(ladder_matrix(window, sign, scale)), initial=0.0))


def collision_mixture(psi, basis, model, scale=None):
    """Density matrix after at most one collision.

    rho = P(0) |psi><psi| + P(1) / (4n) sum_{q, sphere, sign} |b><b| / <b|b>
    with |b> = (L+-)^q |psi>, then renormalised to unit trace. Branches
    annihilated at a ladder edge are dropped.

    A branch is annihilated when <b|b> is below ZERO_BRANCH times the
    largest ladder step of the window raised to the power 2q.
    """
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    rho = density_matrix(psi)
    p0 = poisson_weight(0, model.rate, model.time)
    p1 = poisson_weight(1, model.rate, model.time)
    if p1 == 0:
        return rho

    branch_weight = p1 / (4 * model.max_quanta)
    kicked = np.zeros_like(rho)
    dropped = 0
    for sphere in ('A', 'B'):
        window = basis.window(sphere)
        sphere_scale = scale if scale is not None else max(window.l_ref, 1.0)
        for sign in (+1, -1):
            step = _largest_step(window, sign, sphere_scale)
            for q in range(1, model.max_quanta + 1):
                branch, loss = apply_ladder_power(psi, basis, sphere, sign, q, sphere_scale)
                if loss > OVERFLOW_TOLERANCE:
                    raise WindowError(
                        f'(L{"+" if sign > 0 else "-"})^{q} on sphere {sphere} overflows the window '
                        f'(lost {loss:.3e}); widen the window beyond {model.max_quanta} quanta')
                norm2 = float(np.vdot(branch, branch).real)
                if step == 0 or norm2 <= ZERO_BRANCH * step ** (2 * q):
                    dropped += 1
                    continue
                kicked += branch_weight * np.outer(branch, branch.conj()) / norm2
    if dropped:
        logger.debug('dropped %d annihilated collision branches', dropped)

    mixture = p0 * rho + kicked
    return mixture / np.trace(mixture).real


def collision_negativity_curve(config, n_list, t_grid, preparations=PREPARATIONS, workers=1):
    """E_N of the collision mixture over (t, n) for each preparation.

    The rate uses sphere A's radius; both spheres see the same gas.
    """
    scales = derive_scales(config)
    rate = collision_rate(config.sphere_a.radius, config.gas_pressure, config.bath_temperature,
                          config.gas_molecule_mass)
    times = np.asarray(t_grid, dtype=float)
    n_values = [int(n) for n in n_list]
    if not n_values or min(n_values) < 1:
        raise DomainError('n_list needs positive integers')
    logger.info('collision rate %.4g 1/s, r t at t_max = %.3g', rate, rate * float(times.max()))

    def one_preparation(preparation):
        m_a = preparation_m(preparation, scales.l_a)
        m_b = preparation_m(preparation, scales.l_b)
        half_width = max(config.simulation.window_half_width, max(n_values) + 4)
        basis = symmetric_basis(scales.l_a, scales.l_b, m_a, m_b, half_width)
        hamiltonian = build_interaction_hamiltonian(basis, scales.alpha)
        evolution = evolve_exact(hamiltonian, initial_state(basis, m_a, m_b), times, basis, half_width)
        rows = []
        for n in n_values:
            for t, psi in zip(times, evolution.states):
                rho = collision_mixture(psi, basis, CollisionModel(rate, n, float(t)))
                rows.append((float(t), n, preparation, log_negativity(rho, basis)))
        return rows

    results = run_grid(one_preparation, list(preparations), workers)
    frame = pd.DataFrame([row for rows in results for row in rows], columns=COLLISION_CURVE_COLUMNS)
    return frame.sort_values(['preparation', 'n', 't_seconds'], kind='stable').reset_index(drop=True)
