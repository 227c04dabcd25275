//! Finite categories given by total composition tables, with functors,
//! natural transformations, products, opposites, comma categories and
//! finality.

mod category;
mod comma;
mod finality;
mod functor;
mod nat;
mod product;
pub mod search;
pub mod tokens;

pub use category::{CategoryBuilder, CategoryError, FinCategory, MorId, Morphism, ObjId, RawCategory};
pub use comma::{comma, CommaCategory};
pub use finality::is_final;
pub use functor::{compose_functor, FinFunctor, FunctorError};
pub use nat::{nat_horizontal, nat_vertical, nat_whisker_left, nat_whisker_right, NatError, NatTransformation};
pub use product::{product, product_projections};

pub(crate) use functor::same_category;

/// Validates a name-level category description.
pub fn validate_category(raw: &RawCategory) -> Result<FinCategory, CategoryError> {
    FinCategory::from_raw(raw)
}

/// `C^op`, keeping object and morphism ids.
pub fn opposite(c: &FinCategory) -> FinCategory {
    c.opposite()
}
