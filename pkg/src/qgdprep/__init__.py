"""Ground-state preparation by post-selected gradient iteration with LCU circuits."""
from .kernels import BACKEND
from .pauli import (GradientLcu, HamiltonianFormatError, PauliHamiltonian, PauliTerm, amplitude_vector,
                    build_gradient_lcu, dense_matrix, parse_hamiltonian)
from .qgd import IterationRecord, QgdConfig, Trajectory, qgd_step, run, sampling_bound
from .sim import DensityMatrix, PostSelectionError, StateVector

__version__ = "0.1.0"
