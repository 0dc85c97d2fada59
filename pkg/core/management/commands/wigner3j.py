from core.exceptions import DomainError
from core.management.base import SimulationCommand
from core.wigner import ORACLE_MAX_J, wigner3j_dipole, wigner3j_oracle


def evaluate(j1, j2, j3, m1, m2, m3):
    """(value, mode): the Racah oracle for small j, the dipole closed form for (1, l, l+1)."""
    if max(j1, j2, j3) <= ORACLE_MAX_J:
        return wigner3j_oracle(j1, j2, j3, m1, m2, m3), 'oracle'
    if j1 != 1 or j3 != j2 + 1:
        raise DomainError(f'large-j mode supports (1, l, l+1) triples only, got ({j1}, {j2}, {j3})')
    branch, m = -m1, -m2
    if branch not in (-1, 0, 1) or m3 != m + branch or abs(m) > j2:
        return 0.0, 'dipole'
    return wigner3j_dipole(j2, int(branch), m), 'dipole'


class Command(SimulationCommand):
    help = 'Evaluate a Wigner 3-j symbol (j1 j2 j3; m1 m2 m3).'

    def add_command_arguments(self, parser):
        for name in ('j1', 'j2', 'j3', 'm1', 'm2', 'm3'):
            parser.add_argument(name, type=float)

    def run(self, **options):
        value, mode = evaluate(*(options[name] for name in ('j1', 'j2', 'j3', 'm1', 'm2', 'm3')))
        self.stdout.write(f'{value!r} ({mode})')
