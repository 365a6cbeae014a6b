//! Exact algebraic number arithmetic for heights, prime splitting, Kummer
//! ramification and height-gap certificates.

pub mod arith;
pub mod bounds;
pub mod construct;
pub mod error;
pub mod field;
pub mod hensel;
pub mod ideal;
pub mod height;
pub mod interval;
pub mod kummer;
pub mod modp;
pub mod poly;
pub mod resultant;
pub mod roots;
pub mod scalar;
pub mod sturm;

pub use error::{Error, Result};
pub use interval::Interval;
pub use poly::{IntPolynomial, Poly, RatPolynomial};
pub use scalar::RealScalar;
pub use bounds::{Certificate, PowerProduct};
pub use field::{FieldElement, NumberField};
pub use height::{height, HeightEstimate};
pub use kummer::{AValue, KummerAnalysis};
