//! Exact arithmetic for Pell conics and binary quadratic forms: the conic
//! group law over quadratic fields, composition of forms with square leading
//! coefficient, narrow class groups, primitive algebraic points and their
//! attached forms, torsors with their addition/subtraction maps, and a census
//! of forms that represent 1 rationally but not integrally.

pub mod classgroup;
pub mod cli;
pub mod conic;
pub mod error;
pub mod forms;
pub mod intarith;
pub mod primitive;
pub mod quadfield;
pub mod sample;
pub mod torsor;
pub mod verify;

pub use classgroup::ClassGroup;
pub use conic::{ConicPoint, PellConic};
pub use error::{Error, Result};
pub use forms::{F2Class, FClass, Form};
pub use primitive::PrimitiveData;
pub use quadfield::QElem;
pub use torsor::TorsorPoint;
