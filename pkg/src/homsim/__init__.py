"""Wave-model simulator of two-photon interference on a beam splitter."""

__version__ = "0.1.0"

from .core_optics import (
    BasisSign,
    BeamSplitter,
    Branch,
    ModePair,
    PhaseShift,
    apply_element,
    bs_matrix,
    intensity,
    superposed_bs,
    superposed_matrix,
)
from .scenarios import ScenarioResult, ScenarioSpec, run, run_a1, run_a2, run_b1, run_b2, run_c1, run_c2
from .ensemble import (
    EnsembleStats,
    MixComponent,
    SweepRow,
    UniformTheta,
    exact_mixture,
    monte_carlo,
    theta_sweep,
    washout_average,
)
from .fock_oracle import FockState, coincidence_probability, fock_apply_bs, mzi_single_photon
from .circuit import CircuitAst, evaluate_circuit, format_circuit, parse_circuit
