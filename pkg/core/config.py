# core/config.py
"""Experiment configuration files.

INI grammar read with configparser:

    [sphere_a]        radius, density, angular_velocity, relative_permittivity,
                      refractive_index_real, refractive_index_imag,
                      magnetic_susceptibility, gyromagnetic_ratio, nuclear_spins
    [sphere_b]        same keys; missing keys fall back to [sphere_a]
    [experiment]      separation, bath_temperature, gas_pressure, gas_molecule_mass,
                      magnetic_field, field_gradient, duration
    [simulation]      window_half_width, shell_half_width, blackbody_window_half_width,
                      independent_baths, perturbative_guard, measurement_variance,
                      convergence_tolerance, max_window_half_width, frequency_unit
    [noise]           dipole_moment, spin_rate, averaging_time, tilt, ellipticity,
                      semi_axis, laser_frequency, laser_wavelength, initial_temperature,
                      debye_coefficient, heating_prefactor, position_spread,
                      budget_margin, collision_margin

All values are SI. Any key can be overridden from the environment as
<ENV_PREFIX><SECTION>__<KEY>, e.g. FRAMEDRAG_EXPERIMENT__SEPARATION=4e-4.
"""

import configparser
import io
import logging
import math
import os
from dataclasses import fields, replace
from pathlib import Path

from django.conf import settings

from .exceptions import ConfigurationError
from .params import ExperimentConfig, NoiseInputs, SimulationSettings, SphereSpec

logger = logging.getLogger(__name__)

SPHERE_SECTIONS = ('sphere_a', 'sphere_b')
EXPERIMENT_KEYS = ('separation', 'bath_temperature', 'gas_pressure', 'gas_molecule_mass',
                   'magnetic_field', 'field_gradient', 'duration')
FREQUENCY_UNITS = ('rad/s', 'hz')
# Keys scaled by 2 pi when frequency_unit = hz
ANGULAR_SPHERE_KEYS = ('angular_velocity', 'gyromagnetic_ratio')
ANGULAR_NOISE_KEYS = ('spin_rate', 'laser_frequency')


def _sphere_keys():
    keys = [f.name for f in fields(SphereSpec) if f.name != 'refractive_index']
    return tuple(keys) + ('refractive_index_real', 'refractive_index_imag')


SECTION_KEYS = {
    'sphere_a': _sphere_keys(),
    'sphere_b': _sphere_keys(),
    'experiment': EXPERIMENT_KEYS,
    'simulation': tuple(f.name for f in fields(SimulationSettings)) + ('frequency_unit',),
    'noise': tuple(f.name for f in fields(NoiseInputs)),
}


# ===================================================================
# VALUE PARSING
# ===================================================================

def _field_types(cls):
    return {f.name: f.type for f in fields(cls)}


def _parse_value(section, key, raw, kind):
    text = raw.strip()
    try:
        if kind is bool:
            lowered = text.lower()
            if lowered not in configparser.ConfigParser.BOOLEAN_STATES:
                raise ValueError(text)
            return configparser.ConfigParser.BOOLEAN_STATES[lowered]
        if kind is int:
            return int(text)
        value = float(text)
    except ValueError:
        raise ConfigurationError(f'[{section}] {key}: expected {kind.__name__}, got {raw!r}') from None
    if not math.isfinite(value):
        raise ConfigurationError(f'[{section}] {key}: value must be finite, got {raw!r}')
    return value


def _read_parser(path):
    parser = configparser.ConfigParser(inline_comment_prefixes=('#', ';'), interpolation=None)
    path = Path(path)
    try:
        with path.open(encoding='utf-8') as handle:
            parser.read_file(handle)
    except FileNotFoundError:
        raise ConfigurationError(f'config file not found: {path}') from None
    except configparser.Error as exc:
        raise ConfigurationError(f'{path}: {exc}') from exc
    return parser


def _raw_values(parser):
    """{section: {key: raw string}}, rejecting unknown sections and keys."""
    raw = {}
    for section in parser.sections():
        if section not in SECTION_KEYS:
            raise ConfigurationError(f'unknown section [{section}]; expected one of {sorted(SECTION_KEYS)}')
        values = {}
        for key, value in parser.items(section):
            if key not in SECTION_KEYS[section]:
                raise ConfigurationError(f'[{section}] unknown key {key!r}')
            values[key] = value
        raw[section] = values
    return raw


def _apply_environment(raw, environ, prefix):
    for name, value in sorted(environ.items()):
        if not name.startswith(prefix) or '__' not in name[len(prefix):]:
            continue
        section, _, key = name[len(prefix):].lower().partition('__')
        if section not in SECTION_KEYS or key not in SECTION_KEYS[section]:
            raise ConfigurationError(f'environment override {name} names no configuration key')
        logger.info('config override from environment: [%s] %s = %s', section, key, value)
        raw.setdefault(section, {})[key] = value
    return raw


# ===================================================================
# BUILDING THE CONFIG
# ===================================================================

def _build_sphere(section, values, base, scale):
    types = _field_types(SphereSpec)
    changes = {}
    index = base.refractive_index
    for key, raw in values.items():
        if key == 'refractive_index_real':
            index = complex(_parse_value(section, key, raw, float), index.imag)
        elif key == 'refractive_index_imag':
            index = complex(index.real, _parse_value(section, key, raw, float))
        else:
            changes[key] = _parse_value(section, key, raw, types[key])
    for key in ANGULAR_SPHERE_KEYS:
        if key in changes:
            changes[key] *= scale
    return replace(base, refractive_index=index, **changes)


def _build_dataclass(cls, section, values, scaled_keys=(), scale=1.0):
    types = _field_types(cls)
    changes = {key: _parse_value(section, key, raw, types[key]) for key, raw in values.items()}
    for key in scaled_keys:
        if key in changes:
            changes[key] *= scale
    return replace(cls(), **changes)


def build_config(raw):
    """ExperimentConfig from {section: {key: raw string}}; missing keys keep nominal values."""
    simulation_values = dict(raw.get('simulation', {}))
    unit = simulation_values.pop('frequency_unit', 'rad/s').strip().lower()
    if unit not in FREQUENCY_UNITS:
        raise ConfigurationError(f'[simulation] frequency_unit must be one of {FREQUENCY_UNITS}, got {unit!r}')
    scale = 2 * math.pi if unit == 'hz' else 1.0

    sphere_a = _build_sphere('sphere_a', raw.get('sphere_a', {}), SphereSpec(), scale)
    # sphere_b starts from the raw [sphere_a] values so a single section describes both
    sphere_b_values = {**raw.get('sphere_a', {}), **raw.get('sphere_b', {})}
    sphere_b = _build_sphere('sphere_b', sphere_b_values, SphereSpec(), scale)

    experiment_types = _field_types(ExperimentConfig)
    experiment = {key: _parse_value('experiment', key, value, experiment_types[key])
                  for key, value in raw.get('experiment', {}).items()}
    return ExperimentConfig(
        sphere_a=sphere_a,
        sphere_b=sphere_b,
        simulation=_build_dataclass(SimulationSettings, 'simulation', simulation_values),
        noise=_build_dataclass(NoiseInputs, 'noise', raw.get('noise', {}), ANGULAR_NOISE_KEYS, scale),
        **experiment,
    )


def load_config(path=None, environ=None):
    """Read `path` (default: FRAMEDRAG['DEFAULT_CONFIG']) and apply environment overrides."""
    options = settings.FRAMEDRAG
    path = options['DEFAULT_CONFIG'] if path is None else path
    environ = os.environ if environ is None else environ
    raw = _raw_values(_read_parser(path))
    raw = _apply_environment(raw, environ, options['ENV_PREFIX'])
    config = build_config(raw)
    logger.debug('loaded configuration from %s', path)
    return config


# ===================================================================
# SNAPSHOT
# ===================================================================

def _format(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    return repr(value)


def config_snapshot(config):
    """Resolved configuration rendered in the file grammar, in a fixed key order (angular units rad/s)."""
    parser = configparser.ConfigParser(interpolation=None)
    for section in SPHERE_SECTIONS:
        sphere = getattr(config, section)
        values = {}
        for f in fields(SphereSpec):
            if f.name == 'refractive_index':
                values['refractive_index_real'] = _format(sphere.refractive_index.real)
                values['refractive_index_imag'] = _format(sphere.refractive_index.imag)
            else:
                values[f.name] = _format(getattr(sphere, f.name))
        parser[section] = values
    parser['experiment'] = {key: _format(getattr(config, key)) for key in EXPERIMENT_KEYS}
    simulation = {f.name: _format(getattr(config.simulation, f.name)) for f in fields(SimulationSettings)}
    simulation['frequency_unit'] = 'rad/s'
    parser['simulation'] = simulation
    parser['noise'] = {f.name: _format(getattr(config.noise, f.name)) for f in fields(NoiseInputs)}
    buffer = io.StringIO()
    parser.write(buffer)
    return buffer.getvalue()
