# core/params.py

import math
from dataclasses import dataclass, field, replace

from scipy import constants as sc

from .exceptions import DomainError

# ===================================================================
# PHYSICAL CONSTANTS (CODATA via scipy.constants)
# ===================================================================


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants used by every module.

    G [m^3 kg^-1 s^-2], c [m/s], hbar [J s], k_B [J/K], eps0 [F/m],
    mu0 [N/A^2], wien_b [m K].
    """
    G: float = sc.G
    c: float = sc.c
    hbar: float = sc.hbar
    k_B: float = sc.k
    eps0: float = sc.epsilon_0
    mu0: float = sc.mu_0
    wien_b: float = sc.physical_constants['Wien wavelength displacement law constant'][0]


CODATA = PhysicalConstants()

ELEMENTARY_CHARGE = sc.e
ATOMIC_MASS = sc.atomic_mass
H2_MASS = 2.01588 * ATOMIC_MASS

# Nominal silica microsphere and trap values
NOMINAL_RADIUS = 50e-6
NOMINAL_DENSITY = 2200.0
NOMINAL_ANGULAR_VELOCITY = 1e7
NOMINAL_PERMITTIVITY = 3.9
NOMINAL_WAVELENGTH = 300e-9
NOMINAL_ABSORPTION = 0.01      # 1/m, imaginary index = absorption * wavelength / (4 pi)
NOMINAL_SUSCEPTIBILITY = -1.13e-5
NOMINAL_GYROMAGNETIC = 8e6
NOMINAL_NUCLEAR_SPINS = 1e9


# ===================================================================
# CONFIGURATION TYPES
# ===================================================================


@dataclass(frozen=True)
class SphereSpec:
    radius: float = NOMINAL_RADIUS                        # m
    density: float = NOMINAL_DENSITY                      # kg/m^3
    angular_velocity: float = NOMINAL_ANGULAR_VELOCITY    # rad/s
    relative_permittivity: float = NOMINAL_PERMITTIVITY
    refractive_index: complex = complex(1.47, NOMINAL_ABSORPTION * NOMINAL_WAVELENGTH / (4 * math.pi))
    magnetic_susceptibility: float = NOMINAL_SUSCEPTIBILITY
    gyromagnetic_ratio: float = NOMINAL_GYROMAGNETIC      # rad s^-1 T^-1
    nuclear_spins: float = NOMINAL_NUCLEAR_SPINS

    @property
    def volume(self):
        return 4.0 / 3.0 * math.pi * self.radius ** 3


@dataclass(frozen=True)
class SimulationSettings:
    window_half_width: int = 6
    shell_half_width: int = 1
    blackbody_window_half_width: int = 2
    independent_baths: bool = False
    perturbative_guard: float = 1e-2
    measurement_variance: float = 0.0
    convergence_tolerance: float = 1e-6
    max_window_half_width: int = 24


@dataclass(frozen=True)
class NoiseInputs:
    """Inputs of the closed-form noise and detection estimates."""
    dipole_moment: float = 100 * ELEMENTARY_CHARGE * 1e-6   # C m
    spin_rate: float = 1e7                                  # rad/s
    averaging_time: float = 1.0                             # s
    tilt: float = math.pi / 2
    ellipticity: float = 1e-5
    semi_axis: float = NOMINAL_RADIUS                       # m
    laser_frequency: float = 1e7                            # rad/s, target rotation rate
    laser_wavelength: float = NOMINAL_WAVELENGTH            # m
    initial_temperature: float = 1.0                        # K
    debye_coefficient: float = 3e-4                         # J/(kg K^4)
    heating_prefactor: float = 8.15e-11                     # m^4/(W s^2)
    position_spread: float = NOMINAL_RADIUS                 # m, rms z excursion in the trap
    budget_margin: float = 3.0
    collision_margin: float = 10.0


@dataclass(frozen=True)
class ExperimentConfig:
    sphere_a: SphereSpec = field(default_factory=SphereSpec)
    sphere_b: SphereSpec = field(default_factory=SphereSpec)
    separation: float = 4 * NOMINAL_RADIUS    # m, centre to centre
    bath_temperature: float = 0.1             # K
    gas_pressure: float = 1e-17               # Pa
    gas_molecule_mass: float = H2_MASS        # kg
    magnetic_field: float = 1.0               # T
    field_gradient: float = 1e6               # T/m
    duration: float = 10.0                    # s
    simulation: SimulationSettings = field(default_factory=SimulationSettings)
    noise: NoiseInputs = field(default_factory=NoiseInputs)

    def with_changes(self, **changes):
        return replace(self, **changes)


def nominal_config():
    """Two identical silica spheres, 50 um radius, 200 um apart, 10^7 rad/s."""
    return ExperimentConfig()


# ===================================================================
# DERIVED SCALES
# ===================================================================


@dataclass(frozen=True)
class SphereScales:
    mass: float
    inertia: float
    angular_momentum: float
    quantum_number: float


@dataclass(frozen=True)
class DerivedScales:
    sphere_a: SphereScales
    sphere_b: SphereScales
    alpha: float
    V_G: float

    @property
    def l_a(self):
        return self.sphere_a.quantum_number

    @property
    def l_b(self):
        return self.sphere_b.quantum_number

    def coupling_g(self, t):
        """g = alpha t l_A l_B / 2 (alpha t l^2 / 2 for identical spheres)."""
        return self.alpha * t * self.l_a * self.l_b / 2.0

    def coupling_kappa(self, m, t):
        return self.alpha * t * m * m / 2.0

    def entangling_rate(self):
        """Unitary log-negativity growth rate of the m=l preparation, per second."""
        return 4.0 * self.alpha * self.l_a * self.l_b / math.log(2.0)

    def as_dict(self):
        return {
            'mass_a': self.sphere_a.mass,
            'mass_b': self.sphere_b.mass,
            'inertia_a': self.sphere_a.inertia,
            'inertia_b': self.sphere_b.inertia,
            'angular_momentum_a': self.sphere_a.angular_momentum,
            'angular_momentum_b': self.sphere_b.angular_momentum,
            'l_a': self.l_a,
            'l_b': self.l_b,
            'alpha': self.alpha,
            'V_G': self.V_G,
        }


def validate_config(config):
    """Return the list of violated invariants; empty when the config is valid."""
    violations = []
    for name in ('sphere_a', 'sphere_b'):
        sphere = getattr(config, name)
        if not sphere.radius > 0:
            violations.append(f'{name}.radius nonpositive')
        if not sphere.density > 0:
            violations.append(f'{name}.density nonpositive')
        if sphere.angular_velocity < 0:
            violations.append(f'{name}.angular_velocity negative')
    if config.separation <= config.sphere_a.radius + config.sphere_b.radius:
        violations.append('separation ≤ contact distance')
    if config.bath_temperature < 0:
        violations.append('bath_temperature negative')
    if config.gas_pressure < 0:
        violations.append('gas_pressure negative')
    if config.gas_molecule_mass <= 0:
        violations.append('gas_molecule_mass nonpositive')
    if config.duration < 0:
        violations.append('duration negative')
    return violations


def sphere_scales(sphere, constants=CODATA):
    mass = sphere.density * sphere.volume
    inertia = 0.4 * mass * sphere.radius ** 2
    angular_momentum = inertia * sphere.angular_velocity
    return SphereScales(
        mass=mass,
        inertia=inertia,
        angular_momentum=angular_momentum,
        quantum_number=angular_momentum / constants.hbar,
    )


def coupling_alpha(separation, constants=CODATA):
    """alpha = G hbar / (c^2 r^3), in 1/s for dimensionless angular momenta."""
    return constants.G * constants.hbar / (constants.c ** 2 * separation ** 3)


def derive_scales(config, constants=CODATA):
    violations = validate_config(config)
    if violations:
        raise DomainError('; '.join(violations))

    scales_a = sphere_scales(config.sphere_a, constants)
    scales_b = sphere_scales(config.sphere_b, constants)
    alpha = coupling_alpha(config.separation, constants)
    return DerivedScales(
        sphere_a=scales_a,
        sphere_b=scales_b,
        alpha=alpha,
        V_G=alpha * constants.hbar * scales_a.quantum_number * scales_b.quantum_number,
    )
