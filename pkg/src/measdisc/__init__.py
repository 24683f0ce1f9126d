"""Discrimination of quantum measurements with single and entangled probes."""
from .constructions import (
    Basis,
    ConditionReport,
    check_cond,
    check_condd1,
    check_ic_condition,
    check_theorem2_conditions,
    dplus1_povm_ensemble,
    example_basis_dplus1,
    ic_basis,
    ic_basis_d3,
    magic_qubit_basis,
    proof_bob_measurements,
    sarkar_basis,
    sarkar_unitary,
    table1_projective_ensemble,
    tensor_power_basis,
    trine_pair_ensemble,
    weyl_covariant_povm_ensemble,
    weyl_unitary,
    weyl_x,
    weyl_z,
)
from .entangled import (
    Assemblage,
    BipartiteDensity,
    BValueReport,
    SolverConfig,
    WitnessVerdict,
    assemblage_of,
    b_value_optimal,
    b_value_with_bob,
    helstrom_pair,
    max_entangled,
    pure_two_qubit,
    steering_witness,
    two_qubit_b_closed,
    two_qubit_optimal_bob,
    werner_state,
)
from .estimators import EntanglementAssistedDistinguisher, SingleSystemDistinguisher
from .measurements import MeasurementEnsemble, Povm, ValidationCertificate, conjugate_ensemble, validate
from .single_system import (
    DiscriminationReport,
    HypersphereParams,
    OptimizerConfig,
    grid_oracle_d,
    optimize_d,
    score,
    state_from_params,
    trine_d_closed_form,
)

__version__ = "0.1.0"
