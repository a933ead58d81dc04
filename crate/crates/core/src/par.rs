//! Data-parallel helpers with a sequential fallback.
//!
//! Every reduction here is an exact rational sum, so the result does not
//! depend on evaluation order. Without the `parallel` feature,
//! [`Execution::Parallel`] quietly runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Evaluates `f(0), ..., f(n - 1)` in order.
pub fn map_range<T, F>(exec: Execution, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

/// Folds `f(0), ..., f(n - 1)` into an accumulator with `add`, starting
/// from `zero()`. `add` must be associative and commutative.
pub fn reduce_range<T, Z, F, A>(exec: Execution, n: u64, zero: Z, f: F, add: A) -> Result<T>
where
    T: Send,
    Z: Fn() -> T + Sync + Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
    A: Fn(T, T) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n)
            .into_par_iter()
            .map(f)
            .try_reduce(&zero, |a, b| Ok(add(a, b))),
        _ => {
            let mut acc = zero();
            for i in 0..n {
                acc = add(acc, f(i)?);
            }
            Ok(acc)
        }
    }
}
