import numpy as np
from django.core.management.base import CommandError

from core.amspace import BasisWindow, TruncatedProductBasis, build_interaction_hamiltonian, symmetric_basis
from core.dynamics import evolve_exact, initial_state
from core.entanglement import density_matrix, witness_sum_uncertainty
from core.exceptions import ConfigurationError
from core.management.base import EXIT_NOT_VIOLATED, SimulationCommand
from core.params import derive_scales
from core.tables import read_state_file


class Command(SimulationCommand):
    help = ('Evaluate the sum-uncertainty separability witness. Exit status 0 when the bound is '
            'violated (entanglement certified), 1 when it is not.')

    def add_command_arguments(self, parser):
        parser.add_argument('--state-file', default=None,
                            help='state vector file; default: the m=l preparation evolved for the duration')

    def run(self, **options):
        if options['state_file']:
            psi, basis = self.state_from_file(options['state_file'])
        else:
            psi, basis = self.evolved_state()
        psi = psi / np.linalg.norm(psi)
        report = witness_sum_uncertainty(density_matrix(psi), basis,
                                         measurement_variance=self.config.simulation.measurement_variance)
        for key, value in report.as_dict().items():
            self.stdout.write(f'{key:<20} {value}')
        if not report.violated:
            raise CommandError('witness not violated: separability cannot be excluded',
                               returncode=EXIT_NOT_VIOLATED)

    def state_from_file(self, path):
        header, psi = read_state_file(path)
        window_a = BasisWindow(header['l_a'], header['anchors_a'], header['w'])
        window_b = BasisWindow(header['l_b'], header['anchors_b'], header['w'])
        basis = TruncatedProductBasis(window_a, window_b)
        if psi.size != basis.dimension:
            raise ConfigurationError(
                f'{path}: {psi.size} amplitudes for a basis of dimension {basis.dimension}')
        if not np.any(psi):
            raise ConfigurationError(f'{path}: state vector is zero')
        return psi, basis

    def evolved_state(self):
        scales = derive_scales(self.config)
        half_width = self.config.simulation.window_half_width
        basis = symmetric_basis(scales.l_a, scales.l_b, scales.l_a, scales.l_b, half_width)
        hamiltonian = build_interaction_hamiltonian(basis, scales.alpha)
        psi0 = initial_state(basis, scales.l_a, scales.l_b)
        result = evolve_exact(hamiltonian, psi0, [self.config.duration], basis, half_width)
        return result.states[-1], basis
