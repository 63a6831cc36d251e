//! Reversible-logic circuit toolkit built around the 4×4 TSG gate.
//!
//! * [`gate`]: TSG, Fredkin, Toffoli, Feynman and NOT as explicit permutations.
//! * [`netlist`]: cascade circuits, simulation and exhaustive enumeration.
//! * [`analysis`]: gate/garbage/delay metrics and functional verification.
//! * [`arith`]: adders, the 4:2 compressor and the Wallace tree multiplier.
//! * [`rnl`]: the RNL v1 text netlist format.

pub mod analysis;
pub mod arith;
pub mod error;
pub mod gate;
pub mod netlist;
pub mod rnl;

pub use analysis::{
    compare_against_reference, metrics, verify_function, Comparison, Counterexample, Expected,
    FunctionKind, FunctionSpec, MetricsReport, ReferenceRow, Verdict, VerifyMode,
    COMPRESSOR_REFERENCES, FULL_ADDER_REFERENCES,
};
pub use arith::{
    find_fa_embeddings, gen_and_array, gen_compressor_4_2, gen_full_adder, gen_half_adder,
    gen_partial_products, gen_ripple_adder, gen_wallace_multiplier, wallace_multiplier,
    FaEmbedding, PartialProductGrid, WallaceMultiplier,
};
pub use error::{Error, Result};
pub use gate::{eval_gate, gate_inverse, is_bijective_table, make_standard_gate, Gate, GateKind};
pub use netlist::{
    check_circuit_reversibility, Assignment, Circuit, GateApp, LineRole, OutputLabel, TruthTable,
    DEFAULT_ENUMERATION_CAP,
};
pub use rnl::{parse_netlist, write_netlist, ParseError, ParseErrorKind};
