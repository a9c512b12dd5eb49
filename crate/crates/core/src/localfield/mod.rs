//! Complete discretely valued fields of odd residue characteristic.

mod base;
mod ratfunc;
mod square_class;
mod tower;

pub use base::{BaseField, Scalar};
pub use ratfunc::{strip_place, RatFunc};
pub use square_class::{SquareClass, SquareClassSubgroup};
pub use tower::{Elem, Field, SquareRoot, Step};
