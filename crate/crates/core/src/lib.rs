pub mod diff;
pub mod error;
pub mod fixtures;
pub mod grassmann;
pub mod model;
pub mod parse;
pub mod prolong;
pub mod report;
pub mod poly;
pub mod print;
pub mod salg;
pub mod sample;
pub mod scalar;
pub mod solutions;
pub mod superspace;
pub mod symbol;
pub mod verify;

pub use error::{Error, Result};
pub use grassmann::{GExpr, Gen};
pub use parse::{parse_document, parse_expr};
pub use poly::{Poly, RatFunc, Q};
pub use scalar::Scalar;
pub use symbol::{Family, FamilyKind, Function, Kind, Symbol};
