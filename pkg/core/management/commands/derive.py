from core.management.base import SimulationCommand
from core.params import derive_scales
from core.tables import key_value_frame


class Command(SimulationCommand):
    help = 'Print the derived scales (masses, l, alpha, V_G, g at the experiment duration).'

    def add_command_arguments(self, parser):
        parser.add_argument('--out', default=None, help='write the table as CSV instead of printing it')

    def run(self, **options):
        scales = derive_scales(self.config)
        values = scales.as_dict()
        values['g_at_duration'] = scales.coupling_g(self.config.duration)
        values['entangling_rate'] = scales.entangling_rate()
        self.emit_table(key_value_frame(values), ['quantity', 'value'], options['out'])
