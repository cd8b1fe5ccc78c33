//! Regular statistics: linear combinations of constrained translates.

mod bivincular;
pub mod builtins;
mod dsl;
mod moments;
mod product;
mod translate;

pub use bivincular::BivincularPattern;
pub use builtins::builtin;
pub use dsl::{parse_statistic, parse_weight};
pub use moments::{expectation, moment, uniform_moment, variance, Moment, Variance};
pub use product::product_terms;
pub use translate::{ConstrainedTranslate, RegularStatistic, TranslateKey};
