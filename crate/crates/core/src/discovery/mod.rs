//! Constructive and exhaustive production of configurations: the Feng-Li
//! O'Nan configuration and its Fano completion, the parametrised enumeration
//! of Fano planes through `V = (0,0,1)` with a line through the special
//! point, and structured searches for O'Nan configurations and Fano planes
//! with no line through the special point.
//!
//! Parallel work is split into statically ordered shards and collected in
//! order, so results never depend on the thread count.

mod fengli;
mod incidence;
mod search;
mod special;

pub use fengli::{fengli_fano, fengli_onan, FengLiConstruction, FengLiFano, FengLiInput};
pub use incidence::UnitalIncidence;
pub use search::{enumerate_onans, search_ordinary_fanos, OrdinarySearch};
pub use special::{
    compare_enumerations, compare_special_counts, derived_quantities, enumerate_special_fanos, identity_chain,
    k_equations_hold, params_to_points, solve_k, valid_unit_b1, CountComparison, DerivedQuantities, PairReport,
    SpecialEnumeration, SpecialFanoParams,
};

use crate::error::{Error, Result};

/// Runs `f` on a dedicated pool of `threads` workers; `None` uses rayon's
/// global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::InvalidSpec("thread count must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Construction(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
