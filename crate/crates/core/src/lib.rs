//! Exact-arithmetic tools for the varieties parameterized by polynomial
//! neural networks: the symbolic coefficient map, randomized Jacobian rank
//! sampling over prime fields and the rationals, expected-dimension and
//! identifiability predicates, and composite Veronese utilities.

pub mod domain;
pub mod engine;
pub mod error;
pub mod forms;
pub mod matrix;
pub mod network;
pub mod poly;
pub mod report;
pub mod scan;
pub mod seeding;
pub mod theory;
pub mod veronese;

pub use domain::{CoefficientDomain, Domain, DomainDescriptor, PrimeField, Rationals};
pub use engine::{
    block_ranks, generic_rank, jacobian_at, neurovariety_stats, neurovariety_stats_in, prime_for_seed, BlockRankReport,
    DimReport, JacobianSample,
};
pub use error::{Error, Result};
pub use matrix::{exact_rank, Matrix};
pub use network::{
    coefficient_map, forward_layers, gauge_fix, Architecture, CoefficientMap, GaugeMask, GaugedMap, LayerPolynomials,
    WeightAssignment, WeightId,
};
pub use poly::{monomials_of_degree, Monomial, SparsePoly};
pub use report::{emit_report, parse_report, render_report, ReportFormat, ReportRow};
pub use scan::{scan, ScanRow, ScanSpec};
pub use theory::{
    ah_secant_defective, applicable_expected_dim, expected_dim_general, expected_dim_single_output, in_necessity_scope,
    room_condition, theorem_verdict, RoomCheck, Verdict, VerdictKind,
};
pub use veronese::{
    classify_secant, composite_veronese, empirical_secant_dim, image_linear_relations, power_independence,
    power_threshold_scan, CompositeVeronese, PowerInstance, PowerScanReport, SecantClassification,
};
