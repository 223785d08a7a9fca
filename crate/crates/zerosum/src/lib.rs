//! Command-line driver for `zerosum-core`: group specifications, a thread
//! pool runtime, JSON certificates and their re-verification.

pub mod cert;
pub mod cli;
pub mod runtime;
pub mod spec;

pub use cert::{verify_certificate, Certificate, Claim, Status, Verification};
pub use cli::{run_command, Outcome};
pub use runtime::PoolRuntime;
pub use spec::{parse_group_spec, SpecError};
