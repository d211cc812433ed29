pub mod arith;
pub mod certificate;
pub mod cremona;
pub mod decimal;
pub mod divisor;
pub mod error;
pub mod families;
pub mod field;
pub mod form;
pub mod matrix;
pub mod monomial;
pub mod upoly;
pub mod irreducible;
pub mod resultant;
pub mod square;
pub mod interpolation;
pub mod par;
pub mod prym;
pub mod seed;
pub mod scan;
pub mod severi;
