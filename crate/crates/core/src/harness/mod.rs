//! Builtin fixtures, the monomial counting oracle, and verification drivers.

mod fixtures;
pub mod oracle;
mod report;
mod verify;

pub use fixtures::{
    builtin_fixtures, fixture, fixture_with_bound, is_mcm, synthetic_fixtures, Fixture,
    FixtureModule, M4_SQUARE_GENERATORS,
};
pub use oracle::monomial_oracle_length;
pub use report::{
    big_vec, dim1_json, dim2_json, hilbert_json, num, nums, reduction_json, rr_json,
    rr_properties_json, sign_json, superficial_json, vv_json, vv_power_json, Check, Verdict,
    VerificationReport,
};
pub use verify::{
    verify_fixture, verify_identity_suite, verify_mcm_narita, verify_narita_transfer, verify_sign,
    VerifyOptions,
};
