//! Symbolic and numeric tensor calculus for verifying quasi-Einstein
//! equations, curvature identities and pp-wave conditions.

pub mod metricdsl;
pub mod par;
pub mod ppwave;
pub mod qecore;
pub mod report;
pub mod suite;
pub mod symexpr;
pub mod tensorcalc;
