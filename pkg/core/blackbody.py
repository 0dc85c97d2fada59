# core/blackbody.py
"""Black-body emission and absorption as a Lindblad master equation.

Each sphere's window spans several l shells. Thermal photons connect shell
l to l+1 through the dipole jump operators A1 (m -> m+1), A2 (m -> m-1,
with a factor i) and A3 (m -> m). Rates carry d_eff^2, so the operators
themselves are built with unit dipole.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy import linalg, sparse

from .amspace import build_interaction_hamiltonian, symmetric_basis
from .dynamics import initial_state, preparation_m
from .entanglement import density_matrix, entropy_bits, log_negativity
from .exceptions import DomainError, NegativeStateError, NumericalError, TraceDriftError, WindowError
from .params import CODATA, derive_scales, sphere_scales
from .tables import run_grid
from .wigner import dipole_coefficient

logger = logging.getLogger(__name__)

LOCAL_ERROR_TOLERANCE = 1e-8
TRACE_DRIFT_TOLERANCE = 1e-7
NEGATIVE_EIGENVALUE_TOLERANCE = 1e-6
VANISHING_NEGATIVITY = 1e-6
SWEEP_TIME = 1.0                # s, evolution time of a temperature sweep
LONG_WAVELENGTH_FACTOR = 10.0
MAX_STEPS = 200_000

NEGATIVITY_TIME_COLUMNS = ['t_seconds', 'T_kelvin', 'log_negativity', 'trace_defect']
NEGATIVITY_TEMPERATURE_COLUMNS = ['T_kelvin', 'log_negativity', 'global_entropy_bits']


# ===================================================================
# JUMP OPERATORS
# ===================================================================

@dataclass
class JumpOperatorSet:
    shell: int                  # lower shell of the boundary, l = l_ref + shell
    l: float
    delta: float                # Delta_l = 2 (l + 1)
    components: tuple           # (A1, A2, A3) as sparse arrays on the window
    chi: float = 0.0            # emission rate, 1/s
    gamma: float = 0.0          # absorption rate, 1/s


def build_jump_operators(window, d_eff=1.0):
    """One JumpOperatorSet per adjacent shell pair inside `window`.

    A_p[(l, m), (l+1, m')] = d_eff * M * 3j * 3j, computed by the fused
    dipole_coefficient. Rows whose target label falls outside the window are
    left empty.
    """
    if window.shell_half_width < 1:
        raise WindowError(f'{window!r} spans a single l shell; jump operators need l and l+1')
    dim = window.dimension
    sets = []
    for shell in range(-window.shell_half_width, window.shell_half_width):
        lower = window.shell_indices(shell)
        upper = window.shell_indices(shell + 1)
        if not lower or not upper:
            continue
        l_value = window.l_ref + shell
        components = []
        for branch, prefactor in ((+1, 1.0), (-1, 1j), (0, 1.0)):
            rows, cols, values = [], [], []
            for i in lower:
                j = window.neighbour(i, branch, delta_shell=1)
                if j is None:
                    continue
                coefficient = dipole_coefficient(l_value, branch, window.l_minus_m[i], window.l_plus_m[i])
                rows.append(i)
                cols.append(j)
                values.append(prefactor * d_eff * coefficient)
            components.append(sparse.csr_array((np.array(values, dtype=complex), (rows, cols)), shape=(dim, dim)))
        sets.append(JumpOperatorSet(shell=shell, l=l_value, delta=2 * (l_value + 1), components=tuple(components)))
    if not sets:
        raise WindowError(f'{window!r} has no adjacent pair of populated shells')
    return sets


# ===================================================================
# RATES
# ===================================================================

def planck_occupation(delta, inertia, temperature, constants=CODATA):
    """Bose occupation N = 1 / (exp(hbar^2 Delta / (2 I k_B T)) - 1); 0 at T = 0."""
    if delta <= 0 or inertia <= 0:
        raise DomainError('Delta and the moment of inertia must be positive')
    if temperature < 0:
        raise DomainError(f'temperature must be nonnegative, got {temperature}')
    if temperature == 0:
        return 0.0
    exponent = constants.hbar ** 2 * delta / (2 * inertia * constants.k_B * temperature)
    if exponent > 700:
        return 0.0
    return 1.0 / math.expm1(exponent)


def effective_dipole(volume, relative_permittivity, temperature, constants=CODATA):
    """Thermally induced dipole of a dielectric sphere at the Wien peak, C m."""
    if volume <= 0 or temperature < 0:
        raise DomainError('volume must be positive and temperature nonnegative')
    b = constants.wien_b
    exponential = math.expm1(2 * math.pi * constants.hbar * constants.c / (b * constants.k_B))
    numerator = (32 * math.pi ** 2 * volume ** 2 * (relative_permittivity - 1) ** 2
                 * constants.c * constants.hbar * constants.eps0 * temperature ** 5)
    return math.sqrt(numerator / (b ** 5 * exponential))


def rates(delta, inertia, temperature, d_eff, constants=CODATA):
    """(chi_l, gamma_l): emission and absorption rates in 1/s."""
    occupation = planck_occupation(delta, inertia, temperature, constants)
    prefactor = (delta ** 3 * constants.hbar ** 2
                 / (6 * constants.c ** 3 * inertia ** 3 * constants.eps0)) * d_eff ** 2
    return prefactor * (1 + occupation), prefactor * occupation


def sphere_rates(sphere, l_value, temperature, constants=CODATA):
    """Rates for the l -> l+1 boundary of one configured sphere."""
    inertia = sphere_scales(sphere, constants).inertia
    d_eff = effective_dipole(sphere.volume, sphere.relative_permittivity, temperature, constants)
    return rates(2 * (l_value + 1), inertia, temperature, d_eff, constants)


def check_long_wavelength(separation, temperature, constants=CODATA):
    """Ratio of the thermal peak wavelength b/T to the separation; warns below 10."""
    if temperature <= 0:
        return math.inf
    ratio = constants.wien_b / temperature / separation
    if ratio < LONG_WAVELENGTH_FACTOR:
        logger.warning('thermal wavelength %.3g m is only %.1f times the separation; '
                       'the long-wavelength bath model is unreliable at T=%g K',
                       constants.wien_b / temperature, ratio, temperature)
    return ratio


# ===================================================================
# MASTER EQUATION
# ===================================================================

@dataclass
class LindbladModel:
    """d rho/dt = -i[H, rho] + sum_k (C_k rho C_k^+ - {C_k^+ C_k, rho}/2).

    H is in 1/s; the rates are folded into the collapse operators.
    """
    hamiltonian: np.ndarray
    collapse_operators: list = field(default_factory=list)
    labels: list = field(default_factory=list)

    def __post_init__(self):
        dim = self.hamiltonian.shape[0]
        decay = np.zeros((dim, dim), dtype=complex)
        for operator in self.collapse_operators:
            decay += (operator.conj().T @ operator).toarray()
        # rho' = K rho + rho K^+ + sum C rho C^+
        self.effective = -1j * self.hamiltonian - 0.5 * decay
        self.scale = float(np.max(np.abs(self.hamiltonian), initial=0.0)) + float(np.max(np.abs(decay), initial=0.0))

    @property
    def dimension(self):
        return self.hamiltonian.shape[0]


def lindblad_rhs(model, rho):
    derivative = model.effective @ rho + rho @ model.effective.conj().T
    for operator in model.collapse_operators:
        half = operator @ rho
        derivative += (operator @ half.conj().T).conj().T
    return derivative


def _local(operator, sphere, dims):
    identity_a = sparse.eye_array(dims[0], format='csr')
    identity_b = sparse.eye_array(dims[1], format='csr')
    if sphere == 'A':
        return sparse.kron(operator, identity_b, format='csr')
    return sparse.kron(identity_a, operator, format='csr')


def build_master_equation(config, basis, independent_baths=None, temperature=None):
    """Interaction Hamiltonian plus thermal collapse operators on a multi-shell basis.

    Collective (same-bath) form by default: sqrt(chi) (A x 1 + 1 x A) and
    sqrt(gamma) (A^+ x 1 + 1 x A^+) per shell boundary and component.
    """
    if independent_baths is None:
        independent_baths = config.simulation.independent_baths
    temperature = config.bath_temperature if temperature is None else temperature
    if temperature < 0:
        raise DomainError(f'bath temperature must be nonnegative, got {temperature}')
    for sphere in ('A', 'B'):
        if basis.window(sphere).shell_half_width < 1:
            raise WindowError(f'sphere {sphere}: l-shell window needs w_l >= 1')

    scales = derive_scales(config)
    hamiltonian = build_interaction_hamiltonian(basis, scales.alpha)
    check_long_wavelength(config.separation, temperature)

    sets_a = build_jump_operators(basis.window_a)
    sets_b = {jump.shell: jump for jump in build_jump_operators(basis.window_b)}
    collapse, labels = [], []
    for jump_a in sets_a:
        jump_b = sets_b.get(jump_a.shell)
        if jump_b is None:
            raise WindowError(f'shell boundary {jump_a.shell} missing on sphere B')
        chi_a, gamma_a = sphere_rates(config.sphere_a, jump_a.l, temperature)
        chi_b, gamma_b = sphere_rates(config.sphere_b, jump_b.l, temperature)
        jump_a.chi, jump_a.gamma, jump_b.chi, jump_b.gamma = chi_a, gamma_a, chi_b, gamma_b
        logger.debug('shell %+d: chi=%.3e gamma=%.3e 1/s', jump_a.shell, chi_a, gamma_a)
        for p, (op_a, op_b) in enumerate(zip(jump_a.components, jump_b.components), start=1):
            for kind, rate_a, rate_b, left, right in (
                    ('emit', chi_a, chi_b, op_a, op_b),
                    ('absorb', gamma_a, gamma_b, op_a.conj().T.tocsr(), op_b.conj().T.tocsr())):
                if rate_a == 0 and rate_b == 0:
                    continue
                local_a = math.sqrt(rate_a) * _local(left, 'A', basis.dims)
                local_b = math.sqrt(rate_b) * _local(right, 'B', basis.dims)
                name = f'{kind} A{p} shell {jump_a.shell:+d}'
                if independent_baths:
                    collapse.extend([local_a, local_b])
                    labels.extend([name + ' sphere A', name + ' sphere B'])
                else:
                    collapse.append((local_a + local_b).tocsr())
                    labels.append(name)
    return LindbladModel(hamiltonian, collapse, labels)


def _rk4_step(model, rho, h):
    k1 = lindblad_rhs(model, rho)
    k2 = lindblad_rhs(model, rho + 0.5 * h * k1)
    k3 = lindblad_rhs(model, rho + 0.5 * h * k2)
    k4 = lindblad_rhs(model, rho + h * k3)
    return rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _check_state(rho, t):
    eigenvalues = linalg.eigvalsh(rho)
    if eigenvalues[0] < -NEGATIVE_EIGENVALUE_TOLERANCE:
        raise NegativeStateError(f'density matrix eigenvalue {eigenvalues[0]:.3e} at t={t:g} s')


def integrate_master_equation(model, rho0, times, tolerance=LOCAL_ERROR_TOLERANCE,
                              trace_tolerance=TRACE_DRIFT_TOLERANCE):
    """rho(t) on a sorted time grid starting from rho0 at t = 0.

    Classical RK4 with step doubling: a step is accepted when one full step
    and two half steps agree to `tolerance`. The trace is never renormalised;
    drift above `trace_tolerance` raises TraceDriftError.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or (times.size and (times[0] < 0 or np.any(np.diff(times) < 0))):
        raise DomainError('times must be a sorted nonnegative grid')
    rho = np.array(rho0, dtype=complex)
    if rho.shape != (model.dimension, model.dimension):
        raise DomainError(f'rho0 of shape {rho.shape} does not match the model dimension {model.dimension}')
    trace0 = np.trace(rho).real
    states = []
    if model.scale == 0:
        return [rho.copy() for _ in times]

    t = 0.0
    h = 0.1 / model.scale
    steps = 0
    max_defect = 0.0
    for target in times:
        resolution = 1e-12 * max(target, 1.0)
        while target - t > resolution:
            step = min(h, target - t)
            full = _rk4_step(model, rho, step)
            half = _rk4_step(model, _rk4_step(model, rho, step / 2), step / 2)
            error = float(np.max(np.abs(half - full))) / 15.0
            if error > tolerance and step > resolution:
                h = step * max(0.2, 0.9 * (tolerance / error) ** 0.2)
                continue
            defect = float(np.max(np.abs(half - half.conj().T)))
            max_defect = max(max_defect, defect)
            rho = (half + half.conj().T) / 2
            t += step
            steps += 1
            if steps > MAX_STEPS:
                raise NumericalError(f'integration did not reach t={target:g} s within {MAX_STEPS} steps')
            drift = abs(np.trace(rho).real - trace0)
            if drift > trace_tolerance:
                raise TraceDriftError(f'trace drifted by {drift:.3e} at t={t:g} s')
            growth = 2.0 if error == 0 else min(2.0, 0.9 * (tolerance / error) ** 0.2)
            if step == h or growth < 1:
                h = step * max(growth, 0.2)
        t = max(t, float(target))
        _check_state(rho, t)
        states.append(rho.copy())
    logger.debug('master equation: %d steps, largest Hermiticity defect %.3e', steps, max_defect)
    return states


# ===================================================================
# NEGATIVITY SWEEPS
# ===================================================================

def _thermal_basis(config, scales, preparation):
    settings = config.simulation
    m_a = preparation_m(preparation, scales.l_a)
    m_b = preparation_m(preparation, scales.l_b)
    basis = symmetric_basis(scales.l_a, scales.l_b, m_a, m_b,
                            settings.blackbody_window_half_width, settings.shell_half_width)
    return basis, density_matrix(initial_state(basis, m_a, m_b))


def _evolve_at(config, scales, preparation, temperature, times):
    basis, rho0 = _thermal_basis(config, scales, preparation)
    model = build_master_equation(config, basis, temperature=temperature)
    return basis, integrate_master_equation(model, rho0, times)


def negativity_vs_time(config, temperatures, t_grid, preparation='ml', workers=1):
    """E_N(t) per bath temperature; T = 0 is the unitary reference."""
    scales = derive_scales(config)
    times = np.asarray(t_grid, dtype=float)

    def one_temperature(temperature):
        basis, states = _evolve_at(config, scales, preparation, temperature, times)
        return [(float(t), float(temperature), log_negativity(rho, basis), abs(np.trace(rho).real - 1.0))
                for t, rho in zip(times, states)]

    results = run_grid(one_temperature, list(temperatures), workers)
    frame = pd.DataFrame([row for rows in results for row in rows], columns=NEGATIVITY_TIME_COLUMNS)
    return frame.sort_values(['T_kelvin', 't_seconds'], kind='stable').reset_index(drop=True)


@dataclass(frozen=True)
class VanishingPoint:
    temperature: float          # first grid temperature with E_N < 1e-6
    global_entropy_bits: float


def negativity_vs_temperature(config, t_fixed, temperatures, preparation='m0', workers=1):
    """E_N and S(rho_AB) at t_fixed over a temperature grid.

    Returns (frame, VanishingPoint or None).
    """
    if t_fixed < 0:
        raise DomainError(f't_fixed must be nonnegative, got {t_fixed}')
    scales = derive_scales(config)
    grid = sorted(float(T) for T in temperatures)
    if not grid:
        raise DomainError('temperature grid is empty')

    def one_temperature(temperature):
        basis, states = _evolve_at(config, scales, preparation, temperature, [0.0, t_fixed])
        rho = states[-1]
        # Integration noise may leave eigenvalues slightly below zero
        return temperature, log_negativity(rho, basis), entropy_bits(linalg.eigvalsh(rho))

    rows = run_grid(one_temperature, grid, workers)
    frame = pd.DataFrame(rows, columns=NEGATIVITY_TEMPERATURE_COLUMNS)

    vanishing = None
    for temperature, negativity, entropy in rows:
        if negativity < VANISHING_NEGATIVITY:
            vanishing = VanishingPoint(temperature, entropy)
            logger.info('negativity vanishes at T=%.3g K with S(rho_AB)=%.3g bits', temperature, entropy)
            break
    return frame, vanishing
