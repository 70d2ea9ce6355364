//! Exact integer Krawtchouk matrices.
//!
//! The n-th order Krawtchouk matrix is the (n+1)x(n+1) integer matrix
//! whose column j holds the coefficients of the polynomial
//! `(1+x)^(n-j) (1-x)^j`: entry (r, j) is the coefficient of `x^r`.
//! Equivalently, entry (r, j) is the alternating binomial sum
//! `sum_l (-1)^l C(n-j, r-l) C(j, l)`. These integers are the eigenvalues
//! of the radius-r sphere operators on the hypercube, which is why they
//! show up everywhere in the mutation analysis.
//!
//! Entries grow like 2^n, so they are stored as arbitrary-precision
//! integers; nothing in this module rounds.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::io::Write;

/// binomial(n, k) as an exact integer; 0 when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// The n-th order Krawtchouk matrix with exact integer entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrawtchoukMatrix {
    n: usize,
    rows: Vec<Vec<BigInt>>,
}

impl KrawtchoukMatrix {
    /// Build the full matrix for order `n`.
    ///
    /// Construction runs the Pascal-style recurrence obtained by
    /// multiplying the generating polynomial by (1+x):
    /// `K^(n)_{r,j} = K^(n-1)_{r,j} + K^(n-1)_{r-1,j}` for `j <= n-1`,
    /// and fills the last column from the column-reflection symmetry
    /// `K_{r,n} = (-1)^r K_{r,0}`. Total cost O(n^3) integer additions,
    /// with no cancellation anywhere.
    pub fn build(n: usize) -> Self {
        let mut rows = vec![vec![BigInt::one()]];
        for m in 1..=n {
            let mut next = vec![vec![BigInt::zero(); m + 1]; m + 1];
            for r in 0..=m {
                for j in 0..m {
                    let mut v = if r <= m - 1 { rows[r][j].clone() } else { BigInt::zero() };
                    if r > 0 {
                        v += &rows[r - 1][j];
                    }
                    next[r][j] = v;
                }
                next[r][m] = if r % 2 == 0 {
                    next[r][0].clone()
                } else {
                    -next[r][0].clone()
                };
            }
            rows = next;
        }
        KrawtchoukMatrix { n, rows }
    }

    /// Matrix order.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry (r, j), checked.
    pub fn entry(&self, r: usize, j: usize) -> Result<&BigInt> {
        if r > self.n {
            return Err(Error::IndexOutOfRange { what: "row", index: r, max: self.n });
        }
        if j > self.n {
            return Err(Error::IndexOutOfRange { what: "column", index: j, max: self.n });
        }
        Ok(&self.rows[r][j])
    }

    /// Entry (r, j) without the bounds ceremony; panics out of range.
    pub fn at(&self, r: usize, j: usize) -> &BigInt {
        &self.rows[r][j]
    }

    /// Column j as a vector `(K_{0,j}, ..., K_{n,j})`.
    pub fn column(&self, j: usize) -> Result<Vec<BigInt>> {
        if j > self.n {
            return Err(Error::IndexOutOfRange { what: "column", index: j, max: self.n });
        }
        Ok((0..=self.n).map(|r| self.rows[r][j].clone()).collect())
    }

    /// Dump as CSV of decimal integers, row-major, r increasing downward.
    pub fn write_csv<W: Write + ?Sized>(&self, out: &mut W) -> std::io::Result<()> {
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Lazily built per-order cache; the MAX-SAT decomposition requests many
/// small orders (one per distinct clause-union width).
#[derive(Default, Debug)]
pub struct KrawtchoukCache {
    built: BTreeMap<usize, KrawtchoukMatrix>,
}

impl KrawtchoukCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, n: usize) -> &KrawtchoukMatrix {
        self.built.entry(n).or_insert_with(|| KrawtchoukMatrix::build(n))
    }
}

/// The defining alternating-binomial sum, term by term. Kept as the slow
/// reference the recurrence is tested against.
pub fn entry_by_sum(n: usize, r: usize, j: usize) -> BigInt {
    let mut acc = BigInt::zero();
    for l in 0..=r.min(j) {
        let term = binomial(n - j, r - l) * binomial(j, l);
        if l % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_matrices() {
        let k1 = KrawtchoukMatrix::build(1);
        assert_eq!(k1.at(0, 0), &BigInt::from(1));
        assert_eq!(k1.at(0, 1), &BigInt::from(1));
        assert_eq!(k1.at(1, 0), &BigInt::from(1));
        assert_eq!(k1.at(1, 1), &BigInt::from(-1));

        let k2 = KrawtchoukMatrix::build(2);
        let expect = [[1, 1, 1], [2, 0, -2], [1, -1, 1]];
        for r in 0..=2 {
            for j in 0..=2 {
                assert_eq!(k2.at(r, j), &BigInt::from(expect[r][j]), "entry ({r},{j})");
            }
        }
    }

    #[test]
    fn bounds_checked() {
        let k = KrawtchoukMatrix::build(3);
        assert!(k.entry(4, 0).is_err());
        assert!(k.entry(0, 4).is_err());
        assert!(k.column(4).is_err());
        assert_eq!(k.column(0).unwrap().len(), 4);
    }

    #[test]
    fn column_examples() {
        let k2 = KrawtchoukMatrix::build(2);
        assert_eq!(
            k2.column(1).unwrap(),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(-1)]
        );
        // column 0 is the binomial column, generated by (1+x)^n
        assert_eq!(
            k2.column(0).unwrap(),
            vec![BigInt::from(1), BigInt::from(2), BigInt::from(1)]
        );
        let k1 = KrawtchoukMatrix::build(1);
        assert_eq!(k1.column(1).unwrap(), vec![BigInt::from(1), BigInt::from(-1)]);
    }

    #[test]
    fn last_row_alternates() {
        let k = KrawtchoukMatrix::build(7);
        for j in 0..=7 {
            let expect = if j % 2 == 0 { 1 } else { -1 };
            assert_eq!(k.at(7, j), &BigInt::from(expect));
        }
    }

    #[test]
    fn binomial_edge_cases() {
        assert_eq!(binomial(5, 0), BigInt::from(1));
        assert_eq!(binomial(5, 5), BigInt::from(1));
        assert_eq!(binomial(5, 6), BigInt::from(0));
        assert_eq!(binomial(10, 3), BigInt::from(120));
    }
}
