//! Set-valued maps `T: ℍ ⇉ V₁`: H-monotonicity, H-cyclic monotonicity, maximality probing.

mod check;
mod cyclic;
mod field;
mod graph;
mod linear;
mod maximality;
mod spec;

pub use check::{hmonotone_check_field, hmonotone_check_graph, MonotoneReport, MonotoneWitness};
pub use cyclic::{
    cyclic_sum_violation, hcyclic_check, hcyclic_check_sampled, CyclicCertificate, CyclicReport, SampledCyclicReport,
};
pub use field::{apply, left_translate_operator, OperatorField};
pub use graph::{AdmissibilityDigraph, Edge, OperatorGraph};
pub use linear::{linear_monotone_criterion, quadratic_potential, sym, LinearCriterion, QuadraticPotential};
pub use maximality::{maximality_probe, MaximalityOutcome, MaximalityReport};
pub use spec::{Operator, OperatorSpec};
