//! Closed forms for the Onemax family `g(x) = h(|x xor u|)`.
//!
//! For the weight-linear function `f(x) = n - 2|x|` (the sum of all
//! order-1 Walsh functions) everything collapses into Krawtchouk algebra:
//! the F matrix factors as `F_{m,j}(x) = Xi_{m,j} K_{j,|x|}` with a
//! solution-independent matrix `Xi`, and the post-mutation fitness
//! distribution depends on the current solution only through its fitness
//! level. That second fact yields the (n+1)x(n+1) transition matrix
//! `varpi`, the object the runtime analysis consumes. Composing f with
//! any strictly monotone function and/or a xor-shift leaves the matrix
//! unchanged, so the same closed form covers classic Onemax itself.

use crate::bitspace::BitString;
use crate::error::{Error, Result};
use crate::krawtchouk::{binomial, KrawtchoukMatrix};
use crate::mutation::{FMatrix, FSource, FitnessLevels};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// The solution-independent factor of the Onemax F matrix:
/// `Xi_{m,j} = 2^{-n} sum_k (n-2k)^m K_{k,j}`. Entries with `m + j` odd
/// vanish identically.
#[derive(Clone, Debug, PartialEq)]
pub struct XiMatrix<S: Scalar> {
    n: usize,
    m_max: usize,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> XiMatrix<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn entry(&self, m: usize, j: usize) -> Result<&S> {
        if m > self.m_max {
            return Err(Error::IndexOutOfRange { what: "power", index: m, max: self.m_max });
        }
        if j > self.n {
            return Err(Error::IndexOutOfRange { what: "order", index: j, max: self.n });
        }
        Ok(&self.rows[m][j])
    }
}

/// Build the Xi matrix for dimension `n` with rows for powers 0..=m_max.
/// The inner sums are exact integers; the only division is the final
/// 2^n normalization.
pub fn xi_matrix<S: Scalar>(n: usize, m_max: usize) -> XiMatrix<S> {
    let k = KrawtchoukMatrix::build(n);
    let den = BigInt::one() << n;
    // (n-2k)^m tables, built incrementally per row
    let mut powers: Vec<BigInt> = vec![BigInt::one(); n + 1];
    let bases: Vec<BigInt> = (0..=n).map(|kk| BigInt::from(n as i64 - 2 * kk as i64)).collect();
    let mut rows = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        if m > 0 {
            for (pw, b) in powers.iter_mut().zip(&bases) {
                *pw = &*pw * b;
            }
        }
        let row: Vec<S> = (0..=n)
            .map(|j| {
                let mut acc = BigInt::zero();
                for (kk, pw) in powers.iter().enumerate() {
                    acc += pw * k.at(kk, j);
                }
                S::from_big_ratio(&acc, &den)
            })
            .collect();
        rows.push(row);
    }
    XiMatrix { n, m_max, rows }
}

/// Closed-form F matrix for `f(x) = n - 2|x|` at any solution with
/// `ones` 1-bits: `F_{m,j} = Xi_{m,j} K_{j,ones}`. Depends on the
/// solution only through its weight.
pub fn onemax_f<S: Scalar>(n: usize, ones: usize, m_max: usize) -> Result<FMatrix<S>> {
    if ones > n {
        return Err(Error::IndexOutOfRange { what: "weight", index: ones, max: n });
    }
    let xi = xi_matrix::<S>(n, m_max);
    let k = KrawtchoukMatrix::build(n);
    let col: Vec<S> = (0..=n).map(|j| S::from_bigint(k.at(j, ones))).collect();
    let rows = xi
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .zip(&col)
                .map(|(x, c)| x.clone() * c.clone())
                .collect()
        })
        .collect();
    Ok(FMatrix::from_rows(n, rows, FSource::Onemax))
}

/// The fitness levels of `f(x) = n - 2|x|`: values `2l - n` for
/// `l = 0..=n`, with level sizes `binomial(n, l)` (fitness `2l - n`
/// means weight `n - l`, and the binomial is symmetric).
pub fn onemax_levels<S: Scalar>(n: usize) -> FitnessLevels<S> {
    let values = (0..=n).map(|l| S::from_int(2 * l as i64 - n as i64)).collect();
    let sizes = (0..=n).map(|l| binomial(n, l)).collect();
    FitnessLevels::with_sizes(values, sizes, n).expect("onemax levels are well formed")
}

/// Fitness-level index of a solution with the given weight: `n - ones`.
pub fn level_of_ones(n: usize, ones: usize) -> usize {
    n - ones
}

/// The fitness-level transition matrix of bit-flip mutation on the
/// Onemax family. Row i = source level (fitness `2i - n`), column j =
/// target level; rows sum to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct VarpiMatrix<S: Scalar> {
    n: usize,
    p: S,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> VarpiMatrix<S> {
    pub(crate) fn from_rows(n: usize, p: S, rows: Vec<Vec<S>>) -> Self {
        VarpiMatrix { n, p, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of fitness levels (n + 1).
    pub fn q(&self) -> usize {
        self.rows.len()
    }

    pub fn p(&self) -> &S {
        &self.p
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    /// Fitness value of level i.
    pub fn fitness_value(&self, i: usize) -> S {
        S::from_int(2 * i as i64 - self.n as i64)
    }

    /// The matrix with both level orders reversed; equal to the original
    /// for this family, which is exactly why decreasing transforms are
    /// harmless.
    pub fn flipped(&self) -> Self {
        let q = self.q();
        let rows = (0..q)
            .map(|i| (0..q).map(|j| self.rows[q - 1 - i][q - 1 - j].clone()).collect())
            .collect();
        VarpiMatrix { n: self.n, p: self.p.clone(), rows }
    }

    /// Largest row-sum deviation from 1, as f64.
    pub fn max_row_sum_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| {
                let s = row.iter().fold(S::zero(), |a, b| a + b.clone());
                ((s - S::one()).to_f64()).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Build the transition matrix from the spectral form
/// `varpi_{i,j} = 2^{-n} sum_l K_{j,l} (1-2p)^l K_{l,i}`, O(n) per entry
/// with the Krawtchouk matrix precomputed, O(n^3) in total.
///
/// Exact for rational scalars (the default use). In float mode the
/// alternating Krawtchouk products cancel heavily as n grows; row sums
/// stay within 1e-12 of 1 only up to roughly n = 30, so large-n float
/// sweeps should go through the runtime module's well-conditioned
/// evaluator instead.
pub fn varpi<S: Scalar>(n: usize, p: &S) -> Result<VarpiMatrix<S>> {
    if n == 0 {
        return Err(Error::IndexOutOfRange { what: "dimension", index: 0, max: usize::MAX });
    }
    if *p < S::zero() || *p > S::one() {
        return Err(Error::ProbabilityOutOfRange);
    }
    let k = KrawtchoukMatrix::build(n);
    let lambda = crate::mutation::lambda_vector(p, n)?;
    let den = BigInt::one() << n;
    let rows = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| {
                    let mut acc = S::zero();
                    for (l, lam) in lambda.entries().iter().enumerate() {
                        let prod = k.at(j, l) * k.at(l, i);
                        acc = acc + S::from_bigint(&prod) * lam.clone();
                    }
                    acc * S::from_big_ratio(&BigInt::one(), &den)
                })
                .collect()
        })
        .collect();
    Ok(VarpiMatrix { n, p: p.clone(), rows })
}

/// Monotone direction of the outer transform in the Onemax family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonotoneDirection {
    Increasing,
    Decreasing,
}

/// Transition matrix for `g(x) = h(|x xor u|)` with `h` strictly
/// monotone and an optional xor-shift `u`.
///
/// The xor-shift never matters because the mutation kernel commutes with
/// xor; a decreasing `h` reverses both level orders, and reversing both
/// orders maps this matrix onto itself. So the result always equals
/// [`varpi`] — that invariance is the whole content of the operation.
pub fn family_varpi<S: Scalar>(
    n: usize,
    p: &S,
    direction: MonotoneDirection,
    shift: Option<&BitString>,
) -> Result<VarpiMatrix<S>> {
    if let Some(u) = shift {
        if u.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: u.len() });
        }
    }
    let base = varpi(n, p)?;
    Ok(match direction {
        // Increasing h orders g's levels by ascending weight, which is
        // the reverse of the fitness-level order of n - 2|x|; reversing
        // both indices is the flip, and the flip is the same matrix.
        MonotoneDirection::Increasing => base.flipped(),
        MonotoneDirection::Decreasing => base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitspace::all_strings;
    use crate::mutation::build_f_enumerative;
    use crate::oracle::brute_distribution;
    use crate::walsh::FunctionTable;
    use num_rational::BigRational;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn xi_small_values() {
        let xi = xi_matrix::<BigRational>(1, 2);
        assert_eq!(xi.entry(1, 1).unwrap(), &rat(1));
        for n in 1..=6 {
            let xi = xi_matrix::<BigRational>(n, 3);
            // whole-space mean of n - 2|x| is 0
            assert_eq!(xi.entry(1, 0).unwrap(), &rat(0), "n = {n}");
            // parity: entries with m + j odd vanish
            for m in 0..=3 {
                for j in 0..=n {
                    if (m + j) % 2 == 1 {
                        assert_eq!(xi.entry(m, j).unwrap(), &rat(0), "n={n} m={m} j={j}");
                    }
                }
            }
            // row 0 is (1, 0, ..., 0)
            assert_eq!(xi.entry(0, 0).unwrap(), &rat(1));
            for j in 1..=n {
                assert_eq!(xi.entry(0, j).unwrap(), &rat(0));
            }
        }
        assert!(xi_matrix::<BigRational>(3, 2).entry(3, 0).is_err());
    }

    #[test]
    fn onemax_f_small_cases() {
        let fm = onemax_f::<BigRational>(1, 0, 1).unwrap();
        assert_eq!(fm.row(1), &[rat(0), rat(1)]);
        assert_eq!(fm.row(0), &[rat(1), rat(0)]);
        assert_eq!(fm.source(), FSource::Onemax);
        assert!(onemax_f::<BigRational>(3, 4, 1).is_err());
    }

    #[test]
    fn onemax_f_matches_enumeration() {
        for n in [4usize, 6] {
            let table =
                FunctionTable::from_fn(n, |x| rat(n as i64 - 2 * x.popcount() as i64)).unwrap();
            for ones in 0..=n {
                let closed = onemax_f::<BigRational>(n, ones, 3).unwrap();
                let mut x = BitString::zeros(n);
                for b in 0..ones {
                    x.set(b, true);
                }
                let enumerated = build_f_enumerative(&table, 3, &x).unwrap();
                for m in 0..=3 {
                    assert_eq!(closed.row(m), enumerated.row(m), "n={n} ones={ones} m={m}");
                }
            }
        }
    }

    #[test]
    fn varpi_one_bit() {
        let p = ratio(1, 3);
        let vp = varpi(1, &p).unwrap();
        let q = rat(1) - p.clone();
        assert_eq!(vp.rows(), &[vec![q.clone(), p.clone()], vec![p.clone(), q.clone()]]);
    }

    #[test]
    fn varpi_two_bits_improving_entry() {
        for p in [ratio(1, 4), ratio(3, 7)] {
            let vp = varpi(2, &p).unwrap();
            let expect = p.clone() * (rat(1) - p.clone());
            assert_eq!(vp.entry(1, 2), &expect);
            // same value through the lambda form
            let alt = (rat(1) - (rat(1) - rat(2) * p.clone()).powu(2)) / rat(4);
            assert_eq!(vp.entry(1, 2), &alt);
        }
    }

    #[test]
    fn varpi_degenerate_p() {
        let vp = varpi(4, &rat(0)).unwrap();
        for i in 0..=4 {
            for j in 0..=4 {
                let expect = if i == j { rat(1) } else { rat(0) };
                assert_eq!(vp.entry(i, j), &expect);
            }
        }
        // p = 1/2 makes every row the level-size distribution
        let vp = varpi(5, &ratio(1, 2)).unwrap();
        for i in 0..=5 {
            for j in 0..=5 {
                assert_eq!(vp.entry(i, j), &ratio(binomial(5, j).try_into().unwrap(), 32));
            }
        }
    }

    #[test]
    fn varpi_row_stochastic_and_symmetries() {
        for n in [3usize, 8, 17] {
            let p = ratio(2, 7);
            let vp = varpi(n, &p).unwrap();
            for i in 0..=n {
                let sum = vp.row(i).iter().fold(rat(0), |a, b| a + b.clone());
                assert_eq!(sum, rat(1), "row {i}");
                for j in 0..=n {
                    assert!(vp.entry(i, j) >= &rat(0));
                    assert!(vp.entry(i, j) <= &rat(1));
                    // binomial quasi-symmetry
                    let lhs = rat(binomial(n, i).try_into().unwrap()) * vp.entry(i, j).clone();
                    let rhs = rat(binomial(n, j).try_into().unwrap()) * vp.entry(j, i).clone();
                    assert_eq!(lhs, rhs);
                    // double reflection
                    assert_eq!(vp.entry(n - i, n - j), vp.entry(i, j));
                }
            }
        }
    }

    #[test]
    fn varpi_matches_brute_histogram() {
        for n in [2usize, 4, 6] {
            let table =
                FunctionTable::from_fn(n, |x| rat(n as i64 - 2 * x.popcount() as i64)).unwrap();
            let p = ratio(1, 10);
            let vp = varpi(n, &p).unwrap();
            for ones in 0..=n {
                let mut x = BitString::zeros(n);
                for b in 0..ones {
                    x.set(b, true);
                }
                let (_, pi) = brute_distribution(&table, &x, &p).unwrap();
                let i = level_of_ones(n, ones);
                assert_eq!(pi.entries(), vp.row(i), "n={n} ones={ones}");
            }
        }
    }

    #[test]
    fn family_matches_base_matrix() {
        let p = ratio(3, 10);
        let base = varpi(4, &p).unwrap();
        let inc = family_varpi(4, &p, MonotoneDirection::Increasing, None).unwrap();
        assert_eq!(inc.rows(), base.rows());
        let u: BitString = "1010".parse().unwrap();
        let dec = family_varpi(4, &p, MonotoneDirection::Decreasing, Some(&u)).unwrap();
        assert_eq!(dec.rows(), base.rows());
        assert!(family_varpi(4, &p, MonotoneDirection::Increasing, Some(&"10".parse().unwrap()))
            .is_err());
    }

    #[test]
    fn family_matches_oracle_histogram_of_shifted_monotone() {
        // g(x) = h(|x xor u|) for a decreasing h; the histogram over g's
        // own sorted levels must reproduce the closed-form rows.
        let n = 5usize;
        let u: BitString = "01101".parse().unwrap();
        let h = |w: usize| rat(9 - 3 * w as i64); // strictly decreasing
        let table = FunctionTable::from_fn(n, |x| h((x ^ &u).popcount())).unwrap();
        let p = ratio(2, 9);
        let vp = family_varpi(n, &p, MonotoneDirection::Decreasing, Some(&u)).unwrap();
        for x in all_strings(n).unwrap() {
            let (levels, pi) = brute_distribution(&table, &x, &p).unwrap();
            let g_value = table.value(&x);
            let i = levels.index_of(g_value).unwrap();
            assert_eq!(pi.entries(), vp.row(i), "x = {x}");
        }
    }

    #[test]
    fn varpi_validates_input() {
        assert!(varpi(0, &rat(0)).is_err());
        assert!(varpi(3, &rat(2)).is_err());
        assert!(varpi(3, &rat(-1)).is_err());
    }
}
