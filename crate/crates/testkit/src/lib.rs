//! Seeded generators of valid twisted toric data and the property checks run
//! by both the core test suite and the acceptance target.

pub mod checks;
pub mod gen;

/// Seed shared by every property suite.
pub const SEED: u64 = 0x7474_6d5f_7365_6564;
