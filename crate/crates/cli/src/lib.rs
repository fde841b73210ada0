//! Command line front end for `clusterpic`: JSON views, the genus-2 golden
//! tables with their errata, seeded random pictures and the oracle sweep.

pub mod app;
pub mod golden;
pub mod json;
pub mod random;
pub mod selftest;
