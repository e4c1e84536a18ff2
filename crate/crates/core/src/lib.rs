//! Exact quantum theories over finite fields.
//!
//! The crate covers three settings of increasing physical realism:
//!
//! * [`modal`]: quantum theory over F_2, where states are non-zero bit
//!   vectors, evolution is any invertible map, and measurement yields a set
//!   of possible outcomes.
//! * Complexified fields F_{p^2} with p = 3 (mod 4) ([`gfield`], [`linalg`]),
//!   carrying a Hermitian form that is not positive definite.
//! * Locally ordered ranges of quadratic residues ([`ordered`]) and integer
//!   "cardinal" probabilities ([`cardinal`]), on which the deterministic and
//!   probabilistic algorithms in [`algorithms`] are analysed.
//!
//! All arithmetic is exact; floating point only appears when computing the
//! classical Grover iteration count.

pub mod algorithms;
pub mod cardinal;
pub mod error;
pub mod gfield;
pub mod linalg;
pub mod modal;
pub mod numtheory;
pub mod ordered;

pub use error::{Error, Result};
