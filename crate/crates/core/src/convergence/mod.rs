//! Absolute-convergence domain, boundary geometry, the divergence-proof
//! machinery for three-term recurrences, and empirical boundary probes.

pub mod domain;
pub mod probe;
pub mod proof;

pub use domain::{
    boundary_radius, domain_membership, eta_z, gauss_boundary_test, quadratic_radius, DomainSpec,
    EtaZ, GaussVerdict,
};
pub use probe::{
    boundary_probe, empirical_radius, BoundaryDiagnostics, ProbeOptions, ProbeSeries,
    ProbeThresholds, TraceRow, Verdict,
};
pub use proof::{
    classify_case, dominating_series_check, find_proof_constants, minorant_partial, CaseTag,
    DominatingCheck, MinorantRegime, MinorantReport, ProofConstants,
};
