//! Exact décalage computations over a PID with a distinguished prime.

pub mod bockstein;
pub mod complex;
pub mod decalage;
pub mod error;
pub mod exact;
pub mod field;
pub mod generate;
pub mod io;
pub mod lemmas;
pub mod lattice;
pub mod matrix;
pub mod report;
pub mod site;
pub mod module;
pub mod ring;
pub mod snf;
pub mod spectral;
pub mod theorem;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use ring::{CoeffRing, EuclideanRing, Field, FpPoly, Integers, PrimeField, QPoly, Rationals, Ring, RingSpec};
