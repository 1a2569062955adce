//! The non-realizability checker: gaps, type-T certificates, the conditions
//! on filtration shifts, and the Adams condition on finite tables.

mod adams;
mod description;
mod gaps;
mod typet;

pub use adams::{adams_check, adams_check_odd, AdamsViolation, FiniteModuleTable, TableOp};
pub use description::{Layer, ModuleDescription, ModuleKind};
pub use gaps::{gap_scan, layer_occupancy, run_length, Gap, GapReport, LayerOccupancy};
pub use typet::{
    base_threshold, check, condition1_check, condition_table, delta_for, forbidden_differences, j_range,
    type_t_check, type_t_filtration_check, verdict, verdict_odd, Certificate, CertificateLayer, ConditionTable,
    Outcome, TypeT, Verdict,
};
