//! Differential and boomerang spectra of permutations of GF(2^k), and a
//! closed-form predictor for the boomerang spectrum of the power permutation
//! `X^(q^3+q^2+q-1)` over GF(q^4), `q = 2^n`, checked against brute force.

pub mod closedform;
pub mod config;
pub mod error;
pub mod field;
pub mod report;
pub mod spectra;
pub mod structure;
pub mod verify;

pub use closedform::{BRegion, Classification, ClosedForm, S2Membership, S2Witness};
pub use config::ModulusConfig;
pub use error::{Error, Result};
pub use field::{Elt, FieldSpec};
pub use report::{SpectrumReport, SuiteReport, VerificationReport};
pub use spectra::{PermTable, SpectrumMultiset};
pub use verify::{KnownFamily, Sample, VerifyOptions};
