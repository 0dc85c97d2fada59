# core/management/base.py
"""Shared plumbing for the simulator's management commands.

Every command reads an experiment configuration, maps library errors onto
exit codes (2 for configuration and domain errors, 3 for numerical
failures) and records a RunManifest next to each file it writes.
"""

import logging

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from core.config import config_snapshot, load_config
from core.exceptions import ConfigurationError, DomainError, NumericalError
from core.tables import RunManifest, Stopwatch, manifest_path, render_text, write_csv

logger = logging.getLogger('core.management')

EXIT_NOT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def parse_float_list(text, option):
    try:
        values = [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise ConfigurationError(f'{option}: expected comma-separated numbers, got {text!r}') from None
    if not values:
        raise ConfigurationError(f'{option}: empty list')
    return values


def parse_int_list(text, option):
    values = parse_float_list(text, option)
    if any(value != int(value) for value in values):
        raise ConfigurationError(f'{option}: expected integers, got {text!r}')
    return [int(value) for value in values]


def require_positive(value, option):
    if value is None or value <= 0:
        raise ConfigurationError(f'{option} must be positive, got {value}')
    return value


def time_grid(t_max, points):
    """`points` equally spaced times on [0, t_max]."""
    require_positive(points, '--points')
    if t_max < 0:
        raise ConfigurationError(f'--t-max must be nonnegative, got {t_max}')
    return np.linspace(0.0, t_max, points)


class SimulationCommand(BaseCommand):
    """Base class: subclasses implement add_command_arguments() and run()."""

    def add_arguments(self, parser):
        parser.add_argument('--config', default=None,
                            help='experiment configuration file (default: FRAMEDRAG["DEFAULT_CONFIG"])')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        self.outputs = []
        try:
            self.config = load_config(options['config'])
            with Stopwatch() as watch:
                self.run(**options)
        except (ConfigurationError, DomainError) as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE) from exc
        except NumericalError as exc:
            raise CommandError(f'numerical failure: {exc}', returncode=EXIT_NUMERICAL) from exc
        self.write_manifests(watch.elapsed)

    def run(self, **options):
        raise NotImplementedError('subclasses of SimulationCommand must provide a run() method')

    @property
    def workers(self):
        return settings.FRAMEDRAG['WORKERS']

    # -------------------------------------------------------------------
    # output
    # -------------------------------------------------------------------

    def emit_table(self, frame, columns, out=None):
        """CSV to `out` when given, aligned text on stdout otherwise."""
        if out:
            self.outputs.append(write_csv(frame, out, columns))
            self.stdout.write(f'wrote {len(frame)} rows to {out}')
        else:
            self.stdout.write(render_text(frame[columns]))

    def write_manifests(self, elapsed):
        if not self.outputs:
            return
        manifest = RunManifest(
            command=self.command_name(),
            config_snapshot=config_snapshot(self.config),
            code_version=settings.FRAMEDRAG['CODE_VERSION'],
            wall_time_seconds=elapsed,
        )
        for path in self.outputs:
            manifest.add_output(path)
        for path in self.outputs:
            manifest.write(manifest_path(path))
        logger.info('%s finished in %.2f s', manifest.command, elapsed)

    def command_name(self):
        return self.__class__.__module__.rsplit('.', 1)[-1]
