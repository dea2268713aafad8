//! Symbolic GR(1) and Rabin(1) synthesis with toggleable solver and core
//! heuristics.

pub mod corefind;
pub mod game;
pub mod gr1solve;
pub mod harness;
pub mod rabinsolve;
pub mod speclang;
pub mod strategy;
pub mod symcore;
