from core.collisions import COLLISION_CURVE_COLUMNS, PREPARATIONS, collision_negativity_curve
from core.management.base import SimulationCommand, parse_int_list, time_grid


class Command(SimulationCommand):
    help = 'Logarithmic negativity of the collision-decohered state against time.'

    def add_command_arguments(self, parser):
        parser.add_argument('--n-list', default='1,3,6', help='comma-separated maximal kick sizes n')
        parser.add_argument('--prep', choices=PREPARATIONS + ('both',), default='both')
        parser.add_argument('--t-max', type=float, default=None, help='last time in s (default: duration)')
        parser.add_argument('--points', type=int, default=11, help='number of time points')
        parser.add_argument('--out', default=None, help='CSV output path')

    def run(self, **options):
        t_max = self.config.duration if options['t_max'] is None else options['t_max']
        times = time_grid(t_max, options['points'])
        preparations = PREPARATIONS if options['prep'] == 'both' else (options['prep'],)
        frame = collision_negativity_curve(self.config, parse_int_list(options['n_list'], '--n-list'),
                                           times, preparations, workers=self.workers)
        self.emit_table(frame, COLLISION_CURVE_COLUMNS, options['out'])
