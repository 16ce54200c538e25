pub mod algebraic;
pub mod connect;
pub mod error;
pub mod levelsets;
pub mod mpoly;
pub mod numeric;
pub mod parse;
pub mod planecurve;
pub mod realroots;
pub mod ring;
pub mod surfprops;
pub mod upoly;

pub use error::{Error, Result};
pub use mpoly::{LinearMap3, MPoly, Var};
pub use ring::{RealField, Ring, Q};
pub use parse::parse_polynomial;
