import numpy as np

from core.blackbody import (
    NEGATIVITY_TEMPERATURE_COLUMNS, NEGATIVITY_TIME_COLUMNS, SWEEP_TIME, negativity_vs_temperature,
    negativity_vs_time,
)
from core.exceptions import ConfigurationError
from core.management.base import SimulationCommand, parse_float_list, require_positive, time_grid


def parse_sweep(text):
    """'T1:T2:steps' -> linspace(T1, T2, steps)."""
    parts = text.split(':')
    if len(parts) != 3:
        raise ConfigurationError(f'--sweep-T expects T1:T2:steps, got {text!r}')
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigurationError(f'--sweep-T expects T1:T2:steps, got {text!r}') from None
    require_positive(steps, '--sweep-T steps')
    if start < 0 or stop < start:
        raise ConfigurationError(f'--sweep-T needs 0 <= T1 <= T2, got {text!r}')
    return np.linspace(start, stop, steps)


class Command(SimulationCommand):
    help = 'Black-body decoherence: negativity against time, or against temperature with --sweep-T.'

    def add_command_arguments(self, parser):
        parser.add_argument('--t-max', type=float, default=None,
                            help='last time in s (default: duration); with --sweep-T the fixed time '
                                 f'(default: {SWEEP_TIME:g} s)')
        parser.add_argument('--points', type=int, default=11, help='number of time points')
        parser.add_argument('--temperatures', default='0,0.6,0.8,1.1',
                            help='comma-separated bath temperatures in K for the time curves')
        parser.add_argument('--sweep-T', dest='sweep_t', default=None, help='T1:T2:steps temperature sweep')
        parser.add_argument('--prep', choices=('m0', 'ml'), default=None,
                            help='initial preparation (default: ml for time curves, m0 for sweeps)')
        parser.add_argument('--out', default=None, help='CSV output path')

    def run(self, **options):
        if options['sweep_t']:
            t_fixed = SWEEP_TIME if options['t_max'] is None else options['t_max']
            temperatures = parse_sweep(options['sweep_t'])
            frame, vanishing = negativity_vs_temperature(
                self.config, t_fixed, temperatures, options['prep'] or 'm0', workers=self.workers)
            self.emit_table(frame, NEGATIVITY_TEMPERATURE_COLUMNS, options['out'])
            self.stdout.write(f'temperature sweep at t={t_fixed:g} s')
            if vanishing is None:
                self.stdout.write('negativity stays above 1e-06 on the whole grid')
            else:
                self.stdout.write(f'negativity vanishes at T*={vanishing.temperature:.4g} K, '
                                  f'S(rho_AB)={vanishing.global_entropy_bits:.4g} bits')
            return
        t_max = self.config.duration if options['t_max'] is None else options['t_max']
        times = time_grid(t_max, options['points'])
        temperatures = parse_float_list(options['temperatures'], '--temperatures')
        frame = negativity_vs_time(self.config, temperatures, times, options['prep'] or 'ml', workers=self.workers)
        self.emit_table(frame, NEGATIVITY_TIME_COLUMNS, options['out'])
