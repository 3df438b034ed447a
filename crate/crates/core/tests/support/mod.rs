//! Test-only reference solvers, independent of the propagation code.

#![allow(dead_code)]

pub mod born_oppenheimer;
