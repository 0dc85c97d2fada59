from core.feasibility import detection_trap
from core.management.base import SimulationCommand
from core.tables import key_value_frame


class Command(SimulationCommand):
    help = 'Magneto-gravitational detection: trap frequency, coupling and required position resolution.'

    def add_command_arguments(self, parser):
        parser.add_argument('--gradient', type=float, default=None, help='field gradient G0 in T/m')
        parser.add_argument('--out', default=None, help='CSV output path')

    def run(self, **options):
        report = detection_trap(self.config, field_gradient=options['gradient'])
        self.emit_table(key_value_frame(report.as_dict()), ['quantity', 'value'], options['out'])
        for line in report.lines:
            self.stdout.write(f'{line.name}: {line.status} ({line.value:.3g} vs {line.target:.3g} {line.unit})')
