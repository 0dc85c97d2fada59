# core/feasibility.py
"""Closed-form noise, suppression and detection estimates, and the budget built from them.

Energies are compared with V_G, rates with the unitary entangling rate.
Every function returns plain numbers or BudgetLine records; nothing here
touches the Hilbert-space machinery except through the black-body rates.
"""

import logging
import math
from dataclasses import dataclass, field

import pandas as pd

from .blackbody import sphere_rates
from .collisions import collision_rate
from .exceptions import DomainError, SingularTimeError
from .params import CODATA, derive_scales, sphere_scales

logger = logging.getLogger(__name__)

PASS = 'PASS'
MARGINAL = 'MARGINAL'
FAIL = 'FAIL'
INFO = 'INFO'

MAGNETIC_PREFACTOR = 1e-28          # J, fitted for 1e9 aligned nuclear spins at p = 1
REFERENCE_SPINS = 1e9
AVERAGING_WARNING = 100.0

BUDGET_COLUMNS = ['name', 'value', 'unit', 'target', 'pass']
BUDGET_TEXT_COLUMNS = ['name', 'value', 'unit', 'target', 'status', 'notes']


# ===================================================================
# BUDGET LINES
# ===================================================================

def classify(value, target, margin):
    """PASS when value/target <= 1/margin, MARGINAL up to margin, FAIL beyond."""
    value = abs(value)
    if value == 0:
        return PASS
    if target <= 0:
        return FAIL
    ratio = value / target
    if ratio <= 1 / margin:
        return PASS
    if ratio <= margin:
        return MARGINAL
    return FAIL


@dataclass(frozen=True)
class BudgetLine:
    name: str
    value: float
    unit: str
    target: float
    status: str
    notes: str = ''

    @property
    def passed(self):
        return self.status != FAIL

    @property
    def ratio(self):
        return abs(self.value) / self.target if self.target else math.inf

    def as_dict(self):
        return {
            'name': self.name,
            'value': self.value,
            'unit': self.unit,
            'target': self.target,
            'pass': self.passed,
            'status': self.status,
            'notes': self.notes,
        }


def _line(name, value, unit, target, margin, notes=''):
    return BudgetLine(name, value, unit, target, classify(value, target, margin), notes)


# ===================================================================
# ENERGY ESTIMATES
# ===================================================================

def barnett_polarization(temperature, magnetic_field, spin_rate, gyromagnetic_ratio, constants=CODATA):
    """p = hbar (gamma B + omega) / (k_B T), clamped to 1."""
    if temperature < 0:
        raise DomainError(f'temperature must be nonnegative, got {temperature}')
    numerator = constants.hbar * abs(gyromagnetic_ratio * magnetic_field + spin_rate)
    if numerator == 0:
        return 0.0
    if temperature == 0:
        return 1.0
    return min(1.0, numerator / (constants.k_B * temperature))


def magnetic_dipole_budget(temperature, magnetic_field, spin_rate, nuclear_spins, V_G,
                           gyromagnetic_ratio=8e6, margin=3.0, constants=CODATA):
    """Nuclear-spin dipole energy 1e-28 p^2 (n/1e9)^2 J against V_G."""
    polarization = barnett_polarization(temperature, magnetic_field, spin_rate, gyromagnetic_ratio, constants)
    energy = MAGNETIC_PREFACTOR * polarization ** 2 * (nuclear_spins / REFERENCE_SPINS) ** 2
    notes = f'p={polarization:.3g}, V_M/V_G={energy / V_G:.3g}' if V_G else f'p={polarization:.3g}'
    return _line('magnetic dipole (Barnett)', energy, 'J', V_G, margin, notes)


def electric_dipole_suppression(dipole_moment, spin_rate, averaging_time, separation, tilt, V_G,
                                phase_resolved=False, margin=3.0, constants=CODATA):
    """Dipole-dipole energy of the time-averaged dipole of a spinning sphere.

    tilt is the angle between dipole and rotation axis (pi/2 = orthogonal).
    The in-plane part averages down as p / (omega_s t_r); with
    phase_resolved=True the exact (2 - 2 cos omega_s t_r) factor is used.
    """
    if separation <= 0:
        raise DomainError(f'separation must be positive, got {separation}')
    cycles = spin_rate * averaging_time
    if cycles < AVERAGING_WARNING:
        logger.warning('omega_s t_r = %.3g is not much larger than 1; averaging is incomplete', cycles)
    if cycles == 0:
        in_plane = 1.0
    elif phase_resolved:
        in_plane = (2 - 2 * math.cos(cycles)) / cycles ** 2
    else:
        in_plane = 1 / cycles ** 2
    averaged = dipole_moment ** 2 * (math.cos(tilt) ** 2 + in_plane * math.sin(tilt) ** 2)
    coulomb = 4 * math.pi * constants.eps0 * separation ** 3
    energy = averaged / coulomb
    static = dipole_moment ** 2 / coulomb
    return _line('electric dipole', energy, 'J', V_G, margin, f'static dipole energy {static:.3g} J')


def spheroid_coefficient(mass_a, mass_b, semi_axis_a, semi_axis_b, separation, constants=CODATA):
    """|V| / (eps_A eps_B) = G M_A M_B a_A a_B / (512 r^3)."""
    return constants.G * mass_a * mass_b * semi_axis_a * semi_axis_b / (512 * separation ** 3)


def ellipticity_threshold(coefficient, V_G):
    """Common ellipticity at which the quadrupole energy reaches V_G."""
    if coefficient <= 0:
        return math.inf
    return math.sqrt(V_G / coefficient)


def spheroid_quadrupole(mass_a, mass_b, semi_axis_a, semi_axis_b, ellipticity_a, ellipticity_b,
                        separation, V_G, margin=3.0, constants=CODATA):
    if max(ellipticity_a, ellipticity_b) > 0.1:
        logger.warning('ellipticity %.3g is outside the leading-order regime', max(ellipticity_a, ellipticity_b))
    coefficient = spheroid_coefficient(mass_a, mass_b, semi_axis_a, semi_axis_b, separation, constants)
    energy = coefficient * ellipticity_a * ellipticity_b
    threshold = ellipticity_threshold(coefficient, V_G)
    return _line('spheroid quadrupole', energy, 'J', V_G, margin,
                 f'{coefficient:.3g} eps^2 J, threshold eps*={threshold:.3g}')


def casimir_energy(radius, permittivity, separation, V_G, constants=CODATA):
    """Casimir-Polder magnitude; it couples to position only, so the line is informational."""
    if separation <= 2 * radius:
        raise DomainError(f'separation {separation} m does not exceed the contact distance {2 * radius} m')
    clausius = (permittivity - 1) / (permittivity + 2)
    energy = 23 * constants.hbar * constants.c * radius ** 6 / (4 * math.pi * separation ** 7) * clausius ** 2
    return BudgetLine('Casimir-Polder', energy, 'J', V_G, INFO,
                      'acts on centre-of-mass position, not on angular momentum')


def laser_heating_final_temperature(initial_temperature, target_rotation, wavelength, radius, density,
                                    refractive_index, debye_coefficient, heating_prefactor=8.15e-11):
    """Temperature after optical spin-up, Debye heat capacity beta T^3."""
    for name, value in (('initial temperature', initial_temperature), ('wavelength', wavelength),
                        ('radius', radius), ('density', density), ('Debye coefficient', debye_coefficient)):
        if value <= 0:
            raise DomainError(f'{name} must be positive, got {value}')
    if target_rotation < 0:
        raise DomainError(f'target rotation must be nonnegative, got {target_rotation}')
    permittivity = complex(refractive_index) ** 2
    absorption = ((permittivity - 1) / (permittivity + 2)).imag
    deposited = 16 * target_rotation * wavelength ** 2 * absorption / (heating_prefactor * radius * density * debye_coefficient)
    return (initial_temperature ** 4 + deposited) ** 0.25


# ===================================================================
# DETECTION (magneto-gravitational trap)
# ===================================================================

@dataclass
class DetectionReport:
    trap_frequency: float            # Omega, rad/s
    coupling: float                  # lambda, 1/s per unit L_z
    variance_coefficient: float      # (gamma I G0 / 2)^2, multiplies (dz_t^2 - dz_0^2) / sin^4
    required_resolution: float       # m, at the configured duration
    field_side: float                # G0^2 <z^2>, T^2
    angular_side: float              # <L^2> / (I gamma)^2 = omega^2 / gamma^2, T^2
    lines: list = field(default_factory=list)

    def as_dict(self):
        return {
            'trap_frequency': self.trap_frequency,
            'coupling': self.coupling,
            'variance_coefficient': self.variance_coefficient,
            'required_resolution': self.required_resolution,
            'field_side': self.field_side,
            'angular_side': self.angular_side,
        }


def trap_frequency(sphere, field_gradient, constants=CODATA):
    """Omega = sqrt(|chi_V| G0^2 / (rho mu0))."""
    return math.sqrt(abs(sphere.magnetic_susceptibility) * field_gradient ** 2 / (sphere.density * constants.mu0))


def _detection_inputs(config, field_gradient):
    gradient = config.field_gradient if field_gradient is None else field_gradient
    if gradient <= 0:
        raise DomainError(f'field gradient must be positive, got {gradient}')
    return config.sphere_a, gradient


def detection_trap(config, field_gradient=None, constants=CODATA):
    sphere, gradient = _detection_inputs(config, field_gradient)
    scales = sphere_scales(sphere, constants)
    omega = trap_frequency(sphere, gradient, constants)
    coupling = (abs(sphere.magnetic_susceptibility) * sphere.volume * gradient
                / (sphere.gyromagnetic_ratio * scales.inertia * constants.mu0
                   * math.sqrt(2 * constants.hbar * scales.mass * omega)))
    spread = config.noise.position_spread
    field_side = gradient ** 2 * spread ** 2
    angular_side = (sphere.angular_velocity / sphere.gyromagnetic_ratio) ** 2
    if gradient * spread / 2 > config.magnetic_field:
        logger.warning('transverse field components G0 x/2 = %.3g T exceed the bias field; '
                       'keep the sphere close to the z axis', gradient * spread / 2)

    lines = [_line('quadratic L term vs field', angular_side, 'T^2', field_side, config.noise.budget_margin,
                   'the L^2/(I gamma)^2 term must be negligible against <B^2>')]
    return DetectionReport(
        trap_frequency=omega,
        coupling=coupling,
        variance_coefficient=(sphere.gyromagnetic_ratio * scales.inertia * gradient / 2) ** 2,
        required_resolution=required_resolution(config, config.duration, field_gradient=gradient),
        field_side=field_side,
        angular_side=angular_side,
        lines=lines,
    )


def detection_variance_map(dz2_t, dz2_0, t, config, field_gradient=None, constants=CODATA):
    """Var(L_z) in (J s)^2 from the position variances at t and 0."""
    sphere, gradient = _detection_inputs(config, field_gradient)
    if dz2_t < dz2_0:
        raise DomainError(f'position variance decreased ({dz2_t:.3e} < {dz2_0:.3e}); negative L_z variance')
    omega = trap_frequency(sphere, gradient, constants)
    sine2 = math.sin(omega * t / 2) ** 2
    if sine2 < 1e-24:
        raise SingularTimeError(f'sin(Omega t / 2) vanishes at t={t} s (Omega={omega:.6g} rad/s)')
    inertia = sphere_scales(sphere, constants).inertia
    return (sphere.gyromagnetic_ratio * inertia * gradient / (2 * sine2)) ** 2 * (dz2_t - dz2_0)


def required_resolution(config, t, field_gradient=None, taylor=True, constants=CODATA):
    """Position resolution that resolves Var(L_z) = (l_A + l_B) hbar^2 after time t.

    taylor=True uses sin^2(Omega t/2) ~ (Omega t)^2 / 4.
    """
    sphere, gradient = _detection_inputs(config, field_gradient)
    if t <= 0:
        raise DomainError(f'time must be positive, got {t}')
    scales = derive_scales(config, constants)
    target = (scales.l_a + scales.l_b) * constants.hbar ** 2
    omega = trap_frequency(sphere, gradient, constants)
    inertia = scales.sphere_a.inertia
    if taylor:
        return math.sqrt(target) * omega ** 2 * t ** 2 / (2 * sphere.gyromagnetic_ratio * inertia * gradient)
    sine2 = math.sin(omega * t / 2) ** 2
    if sine2 < 1e-24:
        raise SingularTimeError(f'sin(Omega t / 2) vanishes at t={t} s')
    return math.sqrt(target) * 2 * sine2 / (sphere.gyromagnetic_ratio * inertia * gradient)


# ===================================================================
# BUDGET
# ===================================================================

def budget_report(config, constants=CODATA):
    """One BudgetLine per noise channel for `config`."""
    scales = derive_scales(config, constants)
    noise = config.noise
    sphere_a, sphere_b = config.sphere_a, config.sphere_b
    V_G = scales.V_G
    margin = noise.budget_margin
    lines = [
        magnetic_dipole_budget(config.bath_temperature, config.magnetic_field, sphere_a.angular_velocity,
                               sphere_a.nuclear_spins, V_G, sphere_a.gyromagnetic_ratio, margin, constants),
        electric_dipole_suppression(noise.dipole_moment, noise.spin_rate, noise.averaging_time,
                                    config.separation, noise.tilt, V_G, margin=margin, constants=constants),
        spheroid_quadrupole(scales.sphere_a.mass, scales.sphere_b.mass, noise.semi_axis, noise.semi_axis,
                            noise.ellipticity, noise.ellipticity, config.separation, V_G, margin, constants),
        casimir_energy(sphere_a.radius, sphere_a.relative_permittivity, config.separation, V_G, constants),
    ]

    entangling = scales.entangling_rate()
    _, gamma = sphere_rates(sphere_a, scales.l_a, config.bath_temperature, constants)
    lines.append(_line('black-body absorption', gamma, '1/s', entangling, margin,
                       f'bath at {config.bath_temperature:g} K against the unitary entangling rate'))

    final = laser_heating_final_temperature(
        noise.initial_temperature, noise.laser_frequency, noise.laser_wavelength, sphere_a.radius,
        sphere_a.density, sphere_a.refractive_index, noise.debye_coefficient, noise.heating_prefactor)
    _, gamma_final = sphere_rates(sphere_a, scales.l_a, final, constants)
    lines.append(BudgetLine('laser heating', final, 'K', noise.initial_temperature, INFO,
                            f'black-body absorption at T_f: {gamma_final:.3g} 1/s'))

    rate = 0.0
    if config.gas_pressure > 0:
        rate = collision_rate(sphere_a.radius, config.gas_pressure, config.bath_temperature,
                              config.gas_molecule_mass, constants)
    lines.append(_line('gas collisions', rate * config.duration, 'events', 1.0, noise.collision_margin,
                       f'rate {rate:.3g} 1/s over {config.duration:g} s'))
    for line in lines:
        log = logger.warning if line.status == FAIL else logger.info
        log('budget %-26s %-8s %.3g %s (target %.3g)', line.name, line.status, line.value, line.unit, line.target)
    return lines


def budget_frame(lines):
    return pd.DataFrame([line.as_dict() for line in lines])
