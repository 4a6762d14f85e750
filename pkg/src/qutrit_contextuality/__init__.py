"""Single-qutrit contextuality: witness, inequalities and simulated NMR readout."""
from .contextuality import (
    InequalityReport,
    WitnessSet,
    evaluate,
    evaluate_witness,
    noncontextual_bounds_bruteforce,
    standard_witness_set,
    rotate_witness,
    verify_printed_expansions,
    witness_operator,
)
from .core import (
    ConsistencyError,
    DeviationMatrix,
    DomainError,
    QutritState,
    ValidationError,
    decompose,
    expectation,
    gell_mann,
    random_state,
    reconstruct,
    unitary_exp,
)
from .nmr import SpinSystem, prepare, prepare_diagonal, thermal_state
from .readout import run_protocol, single_shot_score, table1_reproduction, witness_from_protocol

__version__ = "0.1.0"
