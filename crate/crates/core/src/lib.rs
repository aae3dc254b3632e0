//! Coefficient machinery for λ-pseudo bi-starlike functions subordinate to the
//! shell-like function `p̃(z) = (1 + τ²z²)/(1 − τz − τ²z²)`, `τ = (1 − √5)/2`.
//!
//! * [`series`]: truncated complex power series (products, quotients, real
//!   powers, composition, reversion).
//! * [`shell`]: `p̃`, its Fibonacci coefficient law, the trisectrix curve and
//!   the real-part floor `√5/10`.
//! * [`caratheodory`]: seeded sampling of the Carathéodory class and the
//!   associated Schwarz functions.
//! * [`pseudo`]: the coefficient system for `a₂`, `a₃`, the closed-form bounds
//!   and the Fekete–Szegő functional.
//! * [`verify`]: the sampling harness that checks all of the above.
//! * [`cli`]: the `gftkit` command-line front end.

pub mod caratheodory;
pub mod cli;
pub mod error;
pub mod pseudo;
pub mod series;
pub mod shell;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
