"""Quantum capacity of the amplitude-damping channel with Markov-correlated memory."""

__version__ = "0.1.0"

from .capacity import (  # noqa: E402
    CapacityResult,
    OscillatorMemory,
    capacity_coherent_surface,
    capacity_n_use,
    capacity_two_use,
    coherent_information,
    memory_from_oscillator,
    von_neumann_entropy,
)
from .channels import (  # noqa: E402
    DampingParams,
    KrausGroup,
    KrausSet,
    apply,
    environment_output,
    n_use_perfect_memory_kraus,
    single_use_kraus,
    two_use_kraus,
)
from .linalg import DensityOperator, eig_hermitian, expm, kron  # noqa: E402
from .spectra import (  # noqa: E402
    Spectrum,
    coherent_input_spectra,
    n_use_memoryless_spectra,
    n_use_perfect_memory_spectra,
    two_use_environment_spectrum,
    two_use_output_spectrum,
)
