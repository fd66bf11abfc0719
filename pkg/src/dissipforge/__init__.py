"""dissipforge: engineer open-system dynamics that relax into chosen states.

The package synthesizes jump operators whose dark space is an arbitrary
target state or subspace (cluster and graph states in particular), verifies
convergence by master-equation integration, steady-state null-space
analysis, and stochastic-trajectory cross-checks, and compiles the required
many-body system-bath couplings into sequences of at-most-two-qubit gates.
"""

from .algebra import (
    PauliString,
    PauliSum,
    anticommutes,
    dag,
    kron,
    kron_all,
    matexp,
    null_space,
    pauli_decompose,
    pauli_mul,
)
from .compiler import (
    BathTestSpec,
    GateSequence,
    compile_coupling,
    conjugation_step,
    ms_decompose,
    trotter_step,
    verify_sequence,
)
from .dissipators import (
    DissipatorSet,
    SynthesisSpec,
    is_dark,
    orthonormal_frame,
    preset_lfor2,
    splitting_hamiltonian,
    synth_single,
    synth_subspace,
)
from .lindblad import (
    EvolutionRecord,
    LindbladModel,
    integrate,
    liouvillian_matrix,
    rhs,
    steady_states,
    time_to_fidelity,
)
from .qsd import (
    TrajectoryConfig,
    ensemble_average,
    evolve_trajectory,
    sample_noise,
)
from .states import (
    DensityMatrix,
    GraphSpec,
    PureState,
    bell_state,
    cluster_formula,
    fidelity,
    graph_state,
    purity,
)

__version__ = "0.1.0"

__all__ = [
    "PauliString", "PauliSum", "anticommutes", "dag", "kron", "kron_all",
    "matexp", "null_space", "pauli_decompose", "pauli_mul",
    "BathTestSpec", "GateSequence", "compile_coupling", "conjugation_step",
    "ms_decompose", "trotter_step", "verify_sequence",
    "DissipatorSet", "SynthesisSpec", "is_dark", "orthonormal_frame",
    "preset_lfor2", "splitting_hamiltonian", "synth_single", "synth_subspace",
    "EvolutionRecord", "LindbladModel", "integrate", "liouvillian_matrix",
    "rhs", "steady_states", "time_to_fidelity",
    "TrajectoryConfig", "ensemble_average", "evolve_trajectory", "sample_noise",
    "DensityMatrix", "GraphSpec", "PureState", "bell_state", "cluster_formula",
    "fidelity", "graph_state", "purity",
]
