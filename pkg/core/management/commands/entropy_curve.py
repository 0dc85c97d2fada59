from core.dynamics import ENTROPY_CURVE_COLUMNS, entropy_curve
from core.management.base import SimulationCommand, parse_float_list, time_grid


class Command(SimulationCommand):
    help = 'Reduced-state entropy against time for several m/l preparations (closed form and exact).'

    def add_command_arguments(self, parser):
        parser.add_argument('--m-list', default='0,0.5,1', help='comma-separated m/l values in [0, 1]')
        parser.add_argument('--t-max', type=float, default=None, help='last time in s (default: duration)')
        parser.add_argument('--points', type=int, default=21, help='number of time points')
        parser.add_argument('--out', default=None, help='CSV output path')

    def run(self, **options):
        t_max = self.config.duration if options['t_max'] is None else options['t_max']
        times = time_grid(t_max, options['points'])
        m_list = parse_float_list(options['m_list'], '--m-list')
        frame = entropy_curve(self.config, m_list, times, workers=self.workers)
        self.emit_table(frame, ENTROPY_CURVE_COLUMNS, options['out'])
