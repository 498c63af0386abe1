//! Closed forms and exact oracles: the exponent-2 limit law and its
//! finite-horizon version, the mean-field recursion for expected degree
//! counts, exhaustive enumeration of small instances, and the inequality
//! lemmas as checkable predicates.

mod bounds;
mod enumeration;
mod limits;
mod mean_field;

pub use bounds::{
    check_inverse_moments, check_lemma31, check_lemma32, check_product_inequality, product_sweep,
    BoundVerdict, LemmaId, ProductSweep, INVERSE_MOMENT_SLACK,
};
pub(crate) use bounds::params;
pub use enumeration::{
    enumeration_paths, exact_enumeration_oracle, monte_carlo_distribution, total_variation,
    DegreeMultiset, ExactDistribution, PATH_LIMIT,
};
pub use limits::{b_k, b_k_prime, b_table, HorizonLaw, TheoryTable};
pub use mean_field::{
    mean_field_expectation, mean_field_for_config, mean_field_from_law, mean_field_trajectory,
    MeanField,
};
