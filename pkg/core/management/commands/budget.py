from core.feasibility import BUDGET_COLUMNS, BUDGET_TEXT_COLUMNS, budget_frame, budget_report
from core.management.base import SimulationCommand
from core.tables import render_text


class Command(SimulationCommand):
    help = 'Noise budget: every channel against V_G or the unitary entangling rate.'

    def add_command_arguments(self, parser):
        parser.add_argument('--format', choices=('text', 'csv'), default='text')
        parser.add_argument('--out', default=None, help='write the budget to this file')

    def run(self, **options):
        frame = budget_frame(budget_report(self.config))
        if options['format'] == 'csv':
            columns = BUDGET_COLUMNS + ['status']
            if options['out']:
                self.emit_table(frame, columns, options['out'])
            else:
                self.stdout.write(frame[columns].to_csv(index=False, float_format='%.10g', lineterminator='\n'),
                                  ending='')
            return
        text = render_text(frame[BUDGET_TEXT_COLUMNS])
        if options['out']:
            with open(options['out'], 'w', encoding='utf-8') as handle:
                handle.write(text + '\n')
            self.outputs.append(options['out'])
        self.stdout.write(text)
