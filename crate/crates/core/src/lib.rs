//! Completely positive maps and generators of CP semigroups.
//!
//! The crate decides complete positivity through the Choi matrix, extracts
//! Kraus and minimal GKSL presentations, classifies trace behaviour,
//! exponentiates generators, splices time-dependent generators into two-time
//! propagators and studies truncations along nested subspaces.
//!
//! Every numeric type is generic over a real scalar [`Real`]; the `*64` and
//! `*32` aliases below fix the precision.

pub mod cli;
pub mod cp;
pub mod error;
pub mod evolution;
pub mod expm;
pub mod falsify;
pub mod filtration;
pub mod fixtures;
pub mod gksl;
pub mod operator;
pub mod random;
pub mod scalar;
pub mod superop;

pub use cp::{intermediate_form, kraus_assemble, kraus_extract, ChoiKraus, IntermediateForm, KrausFamily};
pub use error::{Error, Result};
pub use evolution::{
    cocycle_check, euler_limit_exp, exp_generator, halving_study, invertibility_check, propagate, GeneratorSchedule,
    Propagator,
};
pub use falsify::{monotone_falsifier, property_report, rank_n_positive_falsifier, Evidence, SearchBudget};
pub use filtration::{
    compress, lift_projection, projective_reconstruction, truncation_study, AdaptedSequence, Filtration,
};
pub use gksl::{
    assemble_generator, haar_conjugation_average, is_cp_group_generator, is_dcp, lindblad_trick_average,
    minimal_presentation, norm_bounds_check, trace_condition, DcpVerdict, GkslPresentation, TraceClass,
};
pub use operator::{
    hermitian_split, hs_inner, is_positive_semidefinite, trace_norm, traceless_projection, HermitianSplit, Operator,
    PsdCheck, Tolerance,
};
pub use random::random_haar_unitary;
pub use scalar::{Real, C};
pub use superop::{
    conjugate_by_isometry, is_cp, is_dag_morphism, jamiolkowski, jamiolkowski_inv, jamiolkowski_transform, sandwich,
    tensor_with_identity, ChoiMatrix, SuperOperator, VECTORIZATION_CONVENTION,
};

pub type Operator64 = Operator<f64>;
pub type SuperOperator64 = SuperOperator<f64>;
pub type ChoiMatrix64 = ChoiMatrix<f64>;
pub type KrausFamily64 = KrausFamily<f64>;
pub type GkslPresentation64 = GkslPresentation<f64>;
pub type Tolerance64 = Tolerance<f64>;
pub type Filtration64 = Filtration<f64>;
pub type GeneratorSchedule64 = GeneratorSchedule<f64>;

pub type Operator32 = Operator<f32>;
pub type SuperOperator32 = SuperOperator<f32>;
pub type ChoiMatrix32 = ChoiMatrix<f32>;
pub type KrausFamily32 = KrausFamily<f32>;
pub type GkslPresentation32 = GkslPresentation<f32>;
pub type Tolerance32 = Tolerance<f32>;
