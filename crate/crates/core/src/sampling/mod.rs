//! Exact discrete power laws: normalizers, inverse-CDF sampling, the
//! horizon-dependent truncations and their moments.

mod constants;
mod law;
mod zeta;

pub use constants::{
    tail_constants, truncated_moments, truncation_point, truncation_threshold, TailConstants,
};
pub use law::{
    beta_normalizer, InitialDegreeLaw, LawKind, PowerLawSampler, PowerLawSpec, DENSE_TABLE_LIMIT,
};
pub use zeta::{power_sum, zeta_tail, zeta_tail_from, NeumaierSum};
