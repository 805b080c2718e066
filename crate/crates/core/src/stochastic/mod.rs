//! Seeded random sources and the stochastic building blocks built on them.

mod fbm;
mod ito;
mod stream;

pub use fbm::{fbm_increment_variance, fbm_increments_from_pool, fbm_kernel, generate_fbm, FbmSeries};
pub use ito::{ito_imbalance, ImbalancePath};
pub use stream::{gaussian_sequence, RandomStream};
