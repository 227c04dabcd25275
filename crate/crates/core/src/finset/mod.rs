//! Finite sets, functions, set-valued diagrams and their (co)limits.

mod colimit;
mod diagram;
mod set;

pub use colimit::{
    colimit_set, is_bijection, limit_set, limit_set_capped, mediate, mediate_cone, ConeError, SetCocone, SetCone,
    DEFAULT_TUPLE_CAP,
};
pub use diagram::{enumerate_set_transformations, restrict, SetDiagram, SetTransformation};
pub use set::{FinFunction, FinSet, SetError};
