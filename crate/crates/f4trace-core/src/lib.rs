//! Groebner bases over prime fields with F4, trace recording (F4B) and
//! trace replay (F4T), plus the cost formulas and structural checks that go
//! with them.
//!
//! The crate is `no_std` (with `alloc`); enable the `std` feature to get
//! `std::error::Error` impls through `thiserror`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analysis;
pub mod engine;
pub mod error;
pub mod field;
pub mod linalg;
pub mod monos;
pub mod pairs;
pub mod poly;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Fp, OpCounter, PrimeField};
pub use monos::{MonoOrder, Monomial, MonomialSet};
pub use poly::Poly;
