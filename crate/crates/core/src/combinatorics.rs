//! Closed-form monomial and row counts, and the Macaulay nullity formula.
//!
//! Binomials follow the convention `C(a, b) = 0` unless `a, b >= 0` and
//! `a >= b`. Counts are exact `u128`; the FLOP model promotes them to big
//! integers before multiplying.

use crate::error::{Error, Result};
use crate::poly::macaulay_degree;

/// Exact binomial coefficient with the zero convention for out-of-range
/// arguments.
pub fn binomial(a: i64, b: i64) -> u128 {
    if a < 0 || b < 0 || a < b {
        return 0;
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for i in 0..b {
        // acc * (a - i) is divisible by (i + 1) at every step.
        acc = acc
            .checked_mul(a - i)
            .expect("binomial coefficient overflows u128")
            / (i + 1);
    }
    acc
}

/// Number of monomials in `n` variables of total degree at most `k`.
pub fn monomials_leq(n: usize, k: i64) -> u128 {
    if k < 0 {
        return 0;
    }
    binomial(n as i64 + k, k)
}

/// Number of monomials in `n` variables of total degree exactly `k`.
pub fn monomials_eq(n: usize, k: i64) -> u128 {
    if k < 0 {
        return 0;
    }
    binomial(n as i64 + k - 1, k)
}

/// Which row-count convention to use.
///
/// [`RowCounts::MatrixShape`] counts the rows that an assembled Macaulay
/// matrix actually has. [`RowCounts::Literal`] reproduces the cumulative
/// form `t_k = sum_i V_{k-beta_i}`, `M_k = sum_{j<=k} t_j`, which overcounts
/// the rows of the displayed example matrices and is kept only for
/// comparison in the FLOP model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowCounts {
    #[default]
    MatrixShape,
    Literal,
}

/// Dimension, degrees and Macaulay degree of a system, the inputs to every
/// count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountContext {
    n: usize,
    degrees: Vec<u32>,
    d: u32,
}

impl CountContext {
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidInput("need at least one degree".into()));
        }
        if degrees.iter().any(|&b| b < 1) {
            return Err(Error::InvalidInput("all degrees must be >= 1".into()));
        }
        let d = macaulay_degree(&degrees);
        Ok(CountContext {
            n: degrees.len(),
            degrees,
            d,
        })
    }

    /// Context for `n` polynomials all of degree `beta`.
    pub fn uniform(n: usize, beta: u32) -> Result<Self> {
        Self::new(vec![beta; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Macaulay degree.
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn min_degree(&self) -> u32 {
        *self.degrees.iter().min().unwrap()
    }

    pub fn max_degree(&self) -> u32 {
        *self.degrees.iter().max().unwrap()
    }

    /// Bezout number.
    pub fn r(&self) -> u128 {
        self.degrees.iter().map(|&b| b as u128).product()
    }

    /// `V_k`
    pub fn monomials_leq(&self, k: i64) -> u128 {
        monomials_leq(self.n, k)
    }

    /// `v_k`
    pub fn monomials_eq(&self, k: i64) -> u128 {
        monomials_eq(self.n, k)
    }

    /// Rows whose product `x^m p_i` has total degree exactly `k`:
    /// `sum_i v_{k - beta_i}`.
    pub fn new_rows_at_degree(&self, k: i64) -> u128 {
        self.degrees
            .iter()
            .map(|&b| monomials_eq(self.n, k - b as i64))
            .sum()
    }

    /// Row count of `Mac(k)`: `sum_i V_{k - beta_i}`.
    pub fn total_rows(&self, k: i64) -> u128 {
        self.degrees
            .iter()
            .map(|&b| monomials_leq(self.n, k - b as i64))
            .sum()
    }

    /// `new_rows_at_degree` under the chosen convention.
    pub fn new_rows_with(&self, k: i64, conv: RowCounts) -> u128 {
        match conv {
            RowCounts::MatrixShape => self.new_rows_at_degree(k),
            RowCounts::Literal => self.total_rows(k),
        }
    }

    /// `total_rows` under the chosen convention.
    pub fn total_rows_with(&self, k: i64, conv: RowCounts) -> u128 {
        match conv {
            RowCounts::MatrixShape => self.total_rows(k),
            RowCounts::Literal => (self.min_degree() as i64..=k)
                .map(|j| self.total_rows(j))
                .sum(),
        }
    }

    /// Nullity of `Mac(k)` from the Koszul alternating sum
    /// `sum_j (-1)^j sum_{i_1<...<i_j} C(n + k - sum beta_{i_l}, n)`.
    pub fn macaulay_nullity(&self, k: i64) -> u128 {
        let n = self.n;
        assert!(n < 64, "subset enumeration limited to n < 64");
        let mut acc: i128 = 0;
        for mask in 0u64..(1u64 << n) {
            let (size, shift) = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .fold((0u32, 0i64), |(s, t), i| (s + 1, t + self.degrees[i] as i64));
            let term = binomial(n as i64 + k - shift, n as i64) as i128;
            if size % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        debug_assert!(acc >= 0, "nullity formula produced a negative count");
        acc.max(0) as u128
    }
}

/// `alpha_k = (k / (k-1))^(k-1)`, increasing from 2 towards `e`.
pub fn alpha(k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("alpha requires k >= 2, got {k}")));
    }
    let k = k as f64;
    Ok((k / (k - 1.0)).powf(k - 1.0))
}
