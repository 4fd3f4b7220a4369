//! Exact computations with images of noncommutative polynomials on matrix
//! algebras, and certified Waring-type decompositions.

pub mod decompose;
pub mod error;
pub mod exactmat;
pub mod field;
pub mod freealg;
pub mod images;
pub mod parser;
pub mod waring;
pub mod wire;

pub use error::{Error, Result};
pub use exactmat::{Conjugator, Mat};
pub use field::{Field, Scalar};
pub use freealg::{Poly, Word};
pub use parser::{parse_poly, parse_poly_in, render_poly};
