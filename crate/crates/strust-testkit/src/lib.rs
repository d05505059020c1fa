//! Test support: an independent brute-force evaluator of the trust formulas
//! and seeded random store generators.
//!
//! The oracle deliberately ignores the store's count tables. It recounts the
//! raw ledger on every query and translates each formula literally, so it
//! shares no code path with the engine it cross-checks.

pub mod gen;
pub mod oracle;
