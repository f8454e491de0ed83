//! Exact scalar arithmetic: rationals, dense rational polynomials, and the
//! cyclotomic coefficient field used throughout the crate.

pub mod cyc;
pub mod poly;
pub mod rat;

pub use cyc::{Cyc, CycField};
pub use rat::{format_rat, format_rat_frac, parse_rat, rat, rint, Rat};
