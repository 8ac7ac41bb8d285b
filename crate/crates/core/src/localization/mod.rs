//! Localization with respect to the residual torus acting on the
//! compactified morphism space over `J^r`.

pub mod direction;
pub mod engine;
pub mod explicit;
pub mod relations;
pub mod series;

pub use direction::{choose_direction, Direction};
pub use engine::{fixed_point_term, localize, pushforward_class, pushforward_class_along, Localization};
pub use explicit::{explicit_exponents, explicit_pushforward};
pub use relations::{
    linear_relation_class, pushforward_combination, relation_class, vanishing_predicate, LambdaClass,
    VanishingCertificate,
};
pub use series::{expand_weighted_factor, ClassSeries, TLaurentClass, Truncation};
