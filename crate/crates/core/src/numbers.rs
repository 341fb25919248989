//! Factorials, double factorials and binomials over big integers.
//!
//! Both factorial tables are memoized per process and grow on demand up to
//! the largest argument requested. Reads take a shared lock; growth takes
//! the write lock, so the functions are safe to call from parallel sections.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Result};

struct Table {
    values: RwLock<Vec<BigInt>>,
    /// values[i] = step(values[i - stride], i)
    extend: fn(&[BigInt], usize) -> BigInt,
}

impl Table {
    fn get(&self, index: usize) -> BigInt {
        if let Some(v) = self.values.read().expect("factorial cache poisoned").get(index) {
            return v.clone();
        }
        let mut values = self.values.write().expect("factorial cache poisoned");
        while values.len() <= index {
            let i = values.len();
            let next = (self.extend)(&values, i);
            values.push(next);
        }
        values[index].clone()
    }
}

fn factorials() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| Table {
        values: RwLock::new(vec![BigInt::one()]),
        extend: |v, i| &v[i - 1] * i,
    })
}

/// Index `i` holds `(i - 1)!!`, so the table starts at `(-1)!! = 1`.
fn double_factorials() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| Table {
        values: RwLock::new(vec![BigInt::one(), BigInt::one()]),
        extend: |v, i| &v[i - 2] * (i - 1),
    })
}

pub fn factorial(k: usize) -> BigInt {
    factorials().get(k)
}

/// `k!! = k (k-2) (k-4) ...`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(k: i64) -> Result<BigInt> {
    if k < -1 {
        return Err(Error::invalid(format!("double factorial of {k} is undefined")));
    }
    Ok(double_factorials().get((k + 1) as usize))
}

/// Double factorial for arguments that are known to be `>= -1`.
pub(crate) fn dfact(k: i64) -> BigInt {
    debug_assert!(k >= -1, "dfact({k})");
    double_factorials().get((k + 1) as usize)
}

/// Binomial coefficient, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Falling factorial `n (n-1) ... (n-m+1)`, zero when `m > n`.
pub fn falling(n: usize, m: usize) -> BigInt {
    if m > n {
        return BigInt::zero();
    }
    factorial(n) / factorial(n - m)
}

/// Number of perfect matchings of `2n` points, `(2n-1)!!`.
pub fn matchings(n: usize) -> BigInt {
    dfact(2 * n as i64 - 1)
}
