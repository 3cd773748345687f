//! Numerical thresholds shared across modules.
//!
//! All relative thresholds are measured in the Frobenius norm unless a
//! routine says otherwise.

/// Group membership checks (unitarity, J-unitarity, det = 1).
pub const EPS_GRP: f64 = 1e-9;

/// Disk coordinates must satisfy `|zeta| < 1 - EPS_DISK`.
pub const EPS_DISK: f64 = 1e-12;

/// Below this fraction of the column norm an entry counts as zero.
pub const EPS_PIV: f64 = 1e-10;

/// Entries between `EPS_PIV` and `EPS_PIV_AMBIGUOUS` (relative) cannot be
/// classified reliably as zero or nonzero.
pub const EPS_PIV_AMBIGUOUS: f64 = 1e-7;

/// Reconstruction of a factorization.
pub const EPS_FAC: f64 = 1e-9;

/// Round trips through root subgroup coordinates.
pub const EPS_RT: f64 = 1e-9;

/// Closed-form a-factor against the Birkhoff a-factor.
pub const EPS_A_PRODUCT: f64 = 1e-10;

/// Two routes to the a^{4 delta} identity.
pub const EPS_A4DELTA: f64 = 1e-12;

/// Finite-difference Jacobian identities.
pub const EPS_JACOBIAN: f64 = 1e-4;

/// Closed-form rank one Mobius invariance.
pub const EPS_MOBIUS: f64 = 1e-8;

/// Golden l-factor of a two letter prefix.
pub const EPS_TWO_LETTER: f64 = 1e-12;

/// Default central-difference step.
pub const FD_STEP: f64 = 1e-5;
