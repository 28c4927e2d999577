//! Arithmetic progressions over big integers, finite colorings, and exact
//! checkers for monochromatic sums of progressions.
//!
//! ```
//! use apsum::numbers::{compute_number, Claim, Limits, NumberQuery};
//!
//! let cert = compute_number(&NumberQuery::W { l: 3, c: 2 }, &Limits::default()).unwrap();
//! assert_eq!((cert.claim, cert.value), (Claim::Exact, 9));
//! ```
//!
//! The `book/` directory holds a longer guide; its snippets run as doctests.

pub mod ap;
pub mod coloring;
pub mod construct;
pub mod error;
pub mod numbers;
pub mod witness;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/progressions.md")]
    struct Progressions;
    #[doc = include_str!("../../../book/src/colorings.md")]
    struct Colorings;
    #[doc = include_str!("../../../book/src/witnesses.md")]
    struct Witnesses;
    #[doc = include_str!("../../../book/src/numbers.md")]
    struct Numbers;
    #[doc = include_str!("../../../book/src/constructions.md")]
    struct Constructions;
}
