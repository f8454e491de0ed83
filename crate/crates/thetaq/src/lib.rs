//! Exact q-series arithmetic for theta constants with rational
//! characteristics, eta quotients, and a battery of verified identities
//! relating them: Jacobi-style quartics, second-derivative relations at
//! levels 4, 5, 6 and 8, Riccati differential equations satisfied by theta
//! quotients, and Eisenstein/Ramanujan differential systems.
//!
//! Everything is computed over Q(zeta_240) with an explicit integer grade
//! tracking powers of pi, so every identity check is an exact statement:
//! a residual series either vanishes to the requested order or it does not,
//! and failures carry the first offending term as a witness.

pub mod error;
pub mod etaq;
pub mod exact;
pub mod series;
pub mod theta;

pub use error::{Error, Result};
