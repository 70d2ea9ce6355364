//! The core engine: mutation kernel, moment vector `mu = F(x) * Lambda(p)`,
//! the fitness distribution after one mutation, its CDF, and the
//! improvement probability.
//!
//! Uniform bit-flip mutation flips each bit independently with
//! probability p. The reach probability from x to y depends only on the
//! Hamming distance, which makes the expected value of every order-j
//! elementary component contract by `(1-2p)^j`. Stacking the elementary
//! components of the powers `f^m` into the matrix `F(x)` therefore gives
//! all moments at once as `F(x) * Lambda(p)` with
//! `Lambda_j(p) = (1-2p)^j` — a clean split between a problem-dependent
//! factor and an operator-dependent one. Matching those moments against
//! the fitness level values through a Vandermonde system recovers the
//! exact probability of landing on each fitness level.

use crate::bitspace::BitString;
use crate::error::{Error, Result};
use crate::krawtchouk::binomial;
use crate::scalar::Scalar;
use crate::walsh::{transform, FunctionTable};
use num_bigint::BigInt;

/// Levels a float-mode Vandermonde solve will accept before refusing on
/// conditioning grounds.
pub const FLOAT_LEVEL_LIMIT: usize = 30;

/// Which builder produced an [`FMatrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FSource {
    Enumerative,
    Onemax,
    MaxSat,
}

/// The matrix `F(x)`: row m, column j holds the order-j elementary
/// component of the pointwise power `f^m`, evaluated at one solution x.
///
/// Row 0 is `(1, 0, ..., 0)` (the constant function 1) and column 0 of
/// row m is the m-th moment of f over the whole search space.
#[derive(Clone, Debug, PartialEq)]
pub struct FMatrix<S: Scalar> {
    n: usize,
    m_max: usize,
    rows: Vec<Vec<S>>,
    source: FSource,
}

impl<S: Scalar> FMatrix<S> {
    pub(crate) fn from_rows(n: usize, rows: Vec<Vec<S>>, source: FSource) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == n + 1));
        FMatrix { n, m_max: rows.len() - 1, rows, source }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Highest power m with a row in the matrix.
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn source(&self) -> FSource {
        self.source
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

    pub fn row(&self, m: usize) -> &[S] {
        &self.rows[m]
    }
}

/// The operator-dependent vector `Lambda(p)`: entry j is `(1-2p)^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaVector<S: Scalar> {
    p: S,
    entries: Vec<S>,
}

impl<S: Scalar> LambdaVector<S> {
    pub fn p(&self) -> &S {
        &self.p
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }
}

/// The strictly increasing sequence of values a function attains, with
/// optional level sizes |X_l|.
#[derive(Clone, Debug, PartialEq)]
pub struct FitnessLevels<S: Scalar> {
    values: Vec<S>,
    sizes: Option<Vec<BigInt>>,
}

impl<S: Scalar> FitnessLevels<S> {
    pub fn new(values: Vec<S>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidLevels("no levels".into()));
        }
        for w in values.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidLevels(
                    "values must be strictly increasing".into(),
                ));
            }
        }
        Ok(FitnessLevels { values, sizes: None })
    }

    /// Attach level sizes; they must cover all 2^n solutions.
    pub fn with_sizes(values: Vec<S>, sizes: Vec<BigInt>, n: usize) -> Result<Self> {
        let mut levels = Self::new(values)?;
        if sizes.len() != levels.values.len() {
            return Err(Error::SizeMismatch {
                expected: levels.values.len(),
                got: sizes.len(),
            });
        }
        let total: BigInt = sizes.iter().sum();
        if total != (BigInt::from(1) << n) {
            return Err(Error::InvalidLevels(format!(
                "level sizes sum to {total}, expected 2^{n}"
            )));
        }
        levels.sizes = Some(sizes);
        Ok(levels)
    }

    /// Distinct sorted values of a table, with counts.
    pub fn from_table(f: &FunctionTable<S>) -> Self {
        let mut sorted: Vec<&S> = f.values().iter().collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("unordered values"));
        let mut values: Vec<S> = Vec::new();
        let mut sizes: Vec<BigInt> = Vec::new();
        for v in sorted {
            if values.last() == Some(v) {
                let last = sizes.last_mut().unwrap();
                *last += 1;
            } else {
                values.push(v.clone());
                sizes.push(BigInt::from(1));
            }
        }
        FitnessLevels { values, sizes: Some(sizes) }
    }

    pub fn q(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn sizes(&self) -> Option<&[BigInt]> {
        self.sizes.as_deref()
    }

    /// Index of a value, if it is a level.
    pub fn index_of(&self, v: &S) -> Option<usize> {
        self.values.iter().position(|x| x == v)
    }
}

/// A vector of level probabilities; entries sum to 1 (exactly in rational
/// mode, to tolerance in float mode).
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector<S: Scalar> {
    entries: Vec<S>,
}

impl<S: Scalar> ProbabilityVector<S> {
    /// Wrap entries, validating the unit sum.
    pub fn new(entries: Vec<S>) -> Result<Self> {
        let sum = entries.iter().fold(S::zero(), |a, b| a + b.clone());
        let ok = if S::EXACT {
            sum == S::one()
        } else {
            (sum.to_f64() - 1.0).abs() <= 1e-8
        };
        if !ok {
            return Err(Error::NonStochasticRow { row: 0 });
        }
        Ok(ProbabilityVector { entries })
    }

    pub(crate) fn new_unchecked(entries: Vec<S>) -> Self {
        ProbabilityVector { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &S {
        &self.entries[i]
    }
}

fn check_prob<S: Scalar>(p: &S) -> Result<()> {
    if *p < S::zero() || *p > S::one() {
        return Err(Error::ProbabilityOutOfRange);
    }
    Ok(())
}

/// Probability that one bit-flip mutation of `x` produces exactly `y`:
/// `p^d (1-p)^(n-d)` with d the Hamming distance.
pub fn mutation_prob<S: Scalar>(x: &BitString, y: &BitString, p: &S) -> Result<S> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { expected: x.len(), got: y.len() });
    }
    check_prob(p)?;
    let d = (x ^ y).popcount();
    let q = S::one() - p.clone();
    Ok(p.powu(d) * q.powu(x.len() - d))
}

/// The vector `((1-2p)^0, ..., (1-2p)^n)`.
pub fn lambda_vector<S: Scalar>(p: &S, n: usize) -> Result<LambdaVector<S>> {
    check_prob(p)?;
    let base = S::one() - (S::from_int(2) * p.clone());
    let mut entries = Vec::with_capacity(n + 1);
    let mut acc = S::one();
    for _ in 0..=n {
        entries.push(acc.clone());
        acc = acc * base.clone();
    }
    Ok(LambdaVector { p: p.clone(), entries })
}

/// Expected fitness after one mutation of a solution whose elementary
/// components are `components[0..=n]`: the contraction
/// `sum_j (1-2p)^j f_[j](x)`.
pub fn expected_value<S: Scalar>(components: &[S], p: &S) -> Result<S> {
    check_prob(p)?;
    let lambda = lambda_vector(p, components.len().saturating_sub(1))?;
    Ok(components
        .iter()
        .zip(lambda.entries())
        .fold(S::zero(), |acc, (c, l)| acc + c.clone() * l.clone()))
}

/// The moment vector `F(x) * Lambda(p)`: component m is the m-th moment
/// of the fitness value after one mutation; component 0 is 1.
pub fn moments<S: Scalar>(f: &FMatrix<S>, p: &S) -> Result<Vec<S>> {
    check_prob(p)?;
    let lambda = lambda_vector(p, f.n())?;
    Ok(f
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .zip(lambda.entries())
                .fold(S::zero(), |acc, (c, l)| acc + c.clone() * l.clone())
        })
        .collect())
}

/// Exact fitness distribution after one mutation: solves the moment
/// system `V^T pi = F(x) Lambda(p)` where `V_{i,j} = xi_i^j`.
///
/// The F matrix must provide at least q rows (`m_max >= q - 1`); only the
/// first q are consumed. In exact mode the system is solved by Gaussian
/// elimination; in float mode by the O(q^2) divided-difference scheme,
/// refused beyond [`FLOAT_LEVEL_LIMIT`] levels because the system is
/// exponentially ill-conditioned in q.
pub fn distribution<S: Scalar>(
    f: &FMatrix<S>,
    levels: &FitnessLevels<S>,
    p: &S,
) -> Result<ProbabilityVector<S>> {
    let q = levels.q();
    if f.m_max() < q - 1 {
        return Err(Error::InsufficientRows { have: f.m_max() + 1, need: q });
    }
    let mu = moments(f, p)?;
    let mut rhs: Vec<S> = mu[..q].to_vec();
    let pi = if S::EXACT {
        solve_moment_system_exact(levels.values(), &mut rhs)?
    } else {
        if q > FLOAT_LEVEL_LIMIT {
            return Err(Error::ConditioningLimit { q, limit: FLOAT_LEVEL_LIMIT });
        }
        solve_moment_system_newton(levels.values(), &mut rhs);
        rhs
    };
    ProbabilityVector::new(pi)
}

/// Gaussian elimination on the q x q moment system; exact for rational
/// scalars, where the Vandermonde structure guarantees nonsingularity.
fn solve_moment_system_exact<S: Scalar>(xi: &[S], rhs: &mut [S]) -> Result<Vec<S>> {
    let q = xi.len();
    // A[m][i] = xi_i^m
    let mut a: Vec<Vec<S>> = Vec::with_capacity(q);
    let mut row = vec![S::one(); q];
    a.push(row.clone());
    for _ in 1..q {
        for (entry, x) in row.iter_mut().zip(xi) {
            *entry = entry.clone() * x.clone();
        }
        a.push(row.clone());
    }
    for col in 0..q {
        let pivot = (col..q).find(|&r| !a[r][col].is_zero());
        let pivot = pivot.ok_or(Error::SingularSystem("moment system"))?;
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = a[col][col].clone();
        for r in col + 1..q {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() / inv.clone();
            for c in col..q {
                let sub = factor.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - sub;
            }
            let sub = factor * rhs[col].clone();
            rhs[r] = rhs[r].clone() - sub;
        }
    }
    let mut pi = vec![S::zero(); q];
    for r in (0..q).rev() {
        let mut acc = rhs[r].clone();
        for c in r + 1..q {
            acc = acc - a[r][c].clone() * pi[c].clone();
        }
        pi[r] = acc / a[r][r].clone();
    }
    Ok(pi)
}

/// O(q^2) divided-difference solve of the moment system, the
/// Bjorck-Pereyra scheme specialized to `sum_i xi_i^m pi_i = mu_m`.
/// Overwrites `rhs` with the solution.
fn solve_moment_system_newton<S: Scalar>(xi: &[S], rhs: &mut [S]) {
    let q = xi.len();
    if q == 0 {
        return;
    }
    for k in 0..q - 1 {
        for i in (k + 1..q).rev() {
            let sub = xi[k].clone() * rhs[i - 1].clone();
            rhs[i] = rhs[i].clone() - sub;
        }
    }
    for k in (0..q - 1).rev() {
        for i in k + 1..q {
            let den = xi[i].clone() - xi[i - k - 1].clone();
            rhs[i] = rhs[i].clone() / den;
        }
        for i in k..q - 1 {
            let sub = rhs[i + 1].clone();
            rhs[i] = rhs[i].clone() - sub;
        }
    }
}

/// Cumulative distribution: running sums of `pi`; the last entry is 1.
pub fn cdf<S: Scalar>(pi: &ProbabilityVector<S>) -> ProbabilityVector<S> {
    let mut acc = S::zero();
    let entries = pi
        .entries()
        .iter()
        .map(|v| {
            acc = acc.clone() + v.clone();
            acc.clone()
        })
        .collect();
    ProbabilityVector::new_unchecked(entries)
}

/// Probability of strictly improving on level `i` in one mutation:
/// `1 - Pi_i` from the cumulative distribution.
pub fn improvement_prob<S: Scalar>(cdf: &ProbabilityVector<S>, i: usize) -> Result<S> {
    if i >= cdf.len() {
        return Err(Error::IndexOutOfRange {
            what: "level",
            index: i,
            max: cdf.len().saturating_sub(1),
        });
    }
    Ok(S::one() - cdf.entry(i).clone())
}

/// Build `F(x)` by enumeration: tabulate each pointwise power `f^m`,
/// transform it, and read off the elementary components at `x`. Costs
/// O(m_max n 2^n) but works for any function, unlike the closed forms.
pub fn build_f_enumerative<S: Scalar>(
    f: &FunctionTable<S>,
    m_max: usize,
    x: &BitString,
) -> Result<FMatrix<S>> {
    if x.len() != f.n() {
        return Err(Error::LengthMismatch { expected: f.n(), got: x.len() });
    }
    let n = f.n();
    let mut rows = Vec::with_capacity(m_max + 1);
    let mut row0 = vec![S::zero(); n + 1];
    row0[0] = S::one();
    rows.push(row0);
    let mut power = FunctionTable::new(n, vec![S::one(); 1 << n])?;
    for _ in 1..=m_max {
        power = FunctionTable::new(
            n,
            power
                .values()
                .iter()
                .zip(f.values())
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        )?;
        rows.push(transform(&power).elementary_components(x));
    }
    Ok(FMatrix::from_rows(n, rows, FSource::Enumerative))
}

/// Whole-search-space level sizes paired with the level values of a
/// table; convenience for feeding [`distribution`] oracles.
pub fn levels_of_table<S: Scalar>(f: &FunctionTable<S>) -> FitnessLevels<S> {
    FitnessLevels::from_table(f)
}

/// Level sizes for weight-symmetric levels: binomial(n, k).
pub fn binomial_sizes(n: usize) -> Vec<BigInt> {
    (0..=n).map(|k| binomial(n, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitspace::all_strings;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn mutation_prob_examples() {
        let x = bs("010");
        assert_eq!(mutation_prob(&x, &x, &rat(0)).unwrap(), rat(1));
        assert_eq!(
            mutation_prob(&bs("00"), &bs("11"), &ratio(1, 3)).unwrap(),
            ratio(1, 9)
        );
        assert_eq!(
            mutation_prob(&bs("010"), &bs("011"), &ratio(1, 3)).unwrap(),
            ratio(4, 27)
        );
        assert!(mutation_prob(&x, &bs("0100"), &rat(0)).is_err());
        assert!(mutation_prob(&x, &x, &rat(2)).is_err());
    }

    #[test]
    fn kernel_normalizes() {
        for p in [ratio(0, 1), ratio(1, 4), ratio(1, 2), ratio(3, 4), rat(1)] {
            for n in [1usize, 5, 9, 12] {
                let x = BitString::from_index(0b1011 & ((1 << n) - 1), n);
                let total: BigRational = all_strings(n)
                    .unwrap()
                    .map(|y| mutation_prob(&x, &y, &p).unwrap())
                    .fold(rat(0), |a, b| a + b);
                assert_eq!(total, rat(1), "n={n}, p={p}");
            }
        }
    }

    #[test]
    fn lambda_vector_examples() {
        let l = lambda_vector(&rat(0), 4).unwrap();
        assert!(l.entries().iter().all(|v| *v == rat(1)));
        let l = lambda_vector(&ratio(1, 2), 4).unwrap();
        assert_eq!(l.entries()[0], rat(1));
        assert!(l.entries()[1..].iter().all(|v| v.is_zero()));
        let l = lambda_vector(&rat(1), 2).unwrap();
        assert_eq!(l.entries(), &[rat(1), rat(-1), rat(1)]);
    }

    #[test]
    fn expected_value_brute_force_agreement() {
        // random-ish function on 6 bits, float mode
        let n = 6usize;
        let f = FunctionTable::from_fn(n, |x| {
            let i = x.to_index();
            ((i * 2654435761) % 17) as f64 - 8.0
        })
        .unwrap();
        let e = transform(&f);
        let p = 0.3_f64;
        for xi in [0usize, 7, 33, 63] {
            let x = BitString::from_index(xi, n);
            let comps = e.elementary_components(&x);
            let predicted = expected_value(&comps, &p).unwrap();
            let brute: f64 = all_strings(n)
                .unwrap()
                .map(|y| f.value(&y) * mutation_prob(&x, &y, &p).unwrap())
                .sum();
            assert!((predicted - brute).abs() < 1e-10, "x index {xi}");
        }
    }

    #[test]
    fn moments_at_half_are_whole_space_moments() {
        let n = 5usize;
        let f = FunctionTable::from_fn(n, |x| (x.popcount() as f64).powi(2) - 3.0).unwrap();
        let x = BitString::from_index(9, n);
        let fm = build_f_enumerative(&f, 4, &x).unwrap();
        let mu = moments(&fm, &0.5).unwrap();
        assert_eq!(mu[0], 1.0);
        for m in 1..=4usize {
            let direct: f64 =
                f.values().iter().map(|v| v.powi(m as i32)).sum::<f64>() / 32.0;
            assert!((mu[m] - direct).abs() < 1e-9);
            assert!((fm.entry(m, 0).unwrap() - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn distribution_single_level() {
        let f = FunctionTable::from_fn(3, |_| rat(4)).unwrap();
        let x = bs("000");
        let fm = build_f_enumerative(&f, 0, &x).unwrap();
        let levels = FitnessLevels::from_table(&f);
        let pi = distribution(&fm, &levels, &ratio(1, 3)).unwrap();
        assert_eq!(pi.entries(), &[rat(1)]);
    }

    #[test]
    fn distribution_onemax_n1() {
        // f(x) = 1 - 2|x| on one bit; from x = "1" (fitness -1) the
        // mutated fitness is +1 with probability p.
        let f = FunctionTable::from_fn(1, |x| rat(1 - 2 * x.popcount() as i64)).unwrap();
        let x = bs("1");
        let fm = build_f_enumerative(&f, 1, &x).unwrap();
        let levels = FitnessLevels::from_table(&f);
        for p in [ratio(1, 5), ratio(2, 3)] {
            let pi = distribution(&fm, &levels, &p).unwrap();
            assert_eq!(pi.entries()[0], rat(1) - p.clone()); // stay at -1
            assert_eq!(pi.entries()[1], p.clone()); // reach +1
        }
    }

    #[test]
    fn distribution_requires_enough_rows() {
        let f = FunctionTable::from_fn(2, |x| rat(x.popcount() as i64)).unwrap();
        let fm = build_f_enumerative(&f, 1, &bs("00")).unwrap();
        let levels = FitnessLevels::from_table(&f); // q = 3
        assert!(matches!(
            distribution(&fm, &levels, &ratio(1, 4)),
            Err(Error::InsufficientRows { .. })
        ));
    }

    #[test]
    fn float_conditioning_limit() {
        let values: Vec<f64> = (0..64).map(|i| i as f64).collect();
        let f = FunctionTable::new(6, values).unwrap();
        let fm = build_f_enumerative(&f, 63, &bs("000000")).unwrap();
        let levels = FitnessLevels::from_table(&f); // q = 64 > limit
        assert!(matches!(
            distribution(&fm, &levels, &0.25),
            Err(Error::ConditioningLimit { .. })
        ));
    }

    #[test]
    fn moment_consistency() {
        // mu_m == sum_i xi_i^m pi_i for m < q, the defining relation.
        let n = 4usize;
        let f = FunctionTable::from_fn(n, |x| {
            rat(((x.to_index() * 37) % 5) as i64)
        })
        .unwrap();
        let levels = FitnessLevels::from_table(&f);
        let q = levels.q();
        let x = bs("0110");
        let fm = build_f_enumerative(&f, q - 1, &x).unwrap();
        let p = ratio(3, 10);
        let mu = moments(&fm, &p).unwrap();
        let pi = distribution(&fm, &levels, &p).unwrap();
        for m in 0..q {
            let recon: BigRational = levels
                .values()
                .iter()
                .zip(pi.entries())
                .map(|(xi, pr)| xi.powu(m) * pr.clone())
                .fold(rat(0), |a, b| a + b);
            assert_eq!(recon, mu[m], "moment {m}");
        }
    }

    #[test]
    fn newton_solve_matches_exact_solve() {
        // same random system through both routes
        let xi_exact: Vec<BigRational> = vec![rat(-3), rat(-1), rat(0), rat(2), rat(5)];
        let pi_exact: Vec<BigRational> = vec![
            ratio(1, 10), ratio(2, 10), ratio(3, 10), ratio(1, 10), ratio(3, 10),
        ];
        let mu_exact: Vec<BigRational> = (0..5)
            .map(|m| {
                xi_exact
                    .iter()
                    .zip(&pi_exact)
                    .map(|(x, p)| x.powu(m) * p.clone())
                    .fold(rat(0), |a, b| a + b)
            })
            .collect();
        let mut rhs = mu_exact.clone();
        let sol = solve_moment_system_exact(&xi_exact, &mut rhs).unwrap();
        assert_eq!(sol, pi_exact);

        let xi: Vec<f64> = xi_exact.iter().map(|v| v.to_f64()).collect();
        let mut rhs: Vec<f64> = mu_exact.iter().map(|v| v.to_f64()).collect();
        solve_moment_system_newton(&xi, &mut rhs);
        for (got, want) in rhs.iter().zip(&pi_exact) {
            assert!((got - want.to_f64()).abs() < 1e-12);
        }
    }

    #[test]
    fn cdf_and_improvement() {
        let pi = ProbabilityVector::new(vec![0.2, 0.3, 0.4, 0.1]).unwrap();
        let cum = cdf(&pi);
        assert_eq!(cum.entries(), &[0.2, 0.5, 0.9, 1.0]);
        // nondecreasing, last entry 1
        assert!((improvement_prob(&cum, 3).unwrap()).abs() < 1e-12);
        assert!((improvement_prob(&cum, 1).unwrap() - 0.5).abs() < 1e-12);
        assert!(improvement_prob(&cum, 4).is_err());

        let single = ProbabilityVector::new(vec![rat(1)]).unwrap();
        assert_eq!(cdf(&single).entries(), &[rat(1)]);
    }

    #[test]
    fn cdf_matches_lower_triangular_product() {
        let pi = ProbabilityVector::new(vec![0.05, 0.25, 0.1, 0.4, 0.2]).unwrap();
        let cum = cdf(&pi);
        for i in 0..5 {
            let direct: f64 = pi.entries()[..=i].iter().sum();
            assert!((cum.entry(i) - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn build_f_constant_function() {
        let c = rat(3);
        let f = FunctionTable::from_fn(4, |_| c.clone()).unwrap();
        let fm = build_f_enumerative(&f, 3, &bs("0101")).unwrap();
        for m in 0..=3usize {
            assert_eq!(fm.entry(m, 0).unwrap(), &c.powu(m));
            for j in 1..=4 {
                assert!(fm.entry(m, j).unwrap().is_zero());
            }
        }
        assert_eq!(fm.source(), FSource::Enumerative);
    }

    #[test]
    fn improvement_prob_onemax_n2() {
        // from the middle level of f(x) = 2 - 2|x|... wait: n=2 weight-1
        // solutions have fitness 0; improving means hitting fitness 2,
        // which takes flipping the single 1-bit and keeping the 0-bit.
        let f = FunctionTable::from_fn(2, |x| rat(2 - 2 * x.popcount() as i64)).unwrap();
        let x = bs("10");
        let levels = FitnessLevels::from_table(&f);
        let fm = build_f_enumerative(&f, levels.q() - 1, &x).unwrap();
        for p in [ratio(1, 4), ratio(2, 5)] {
            let pi = distribution(&fm, &levels, &p).unwrap();
            let cum = cdf(&pi);
            let i = levels.index_of(&rat(0)).unwrap();
            let improve = improvement_prob(&cum, i).unwrap();
            let expect = p.clone() * (rat(1) - p.clone());
            assert_eq!(improve, expect, "p = {p}");
        }
    }

    #[test]
    fn levels_validation() {
        assert!(FitnessLevels::new(vec![rat(1), rat(1)]).is_err());
        assert!(FitnessLevels::new(vec![rat(2), rat(1)]).is_err());
        assert!(FitnessLevels::<f64>::new(vec![]).is_err());
        let ok = FitnessLevels::with_sizes(
            vec![rat(-1), rat(1)],
            vec![BigInt::from(1), BigInt::from(1)],
            1,
        )
        .unwrap();
        assert_eq!(ok.q(), 2);
        assert!(FitnessLevels::with_sizes(
            vec![rat(-1), rat(1)],
            vec![BigInt::from(1), BigInt::from(2)],
            1,
        )
        .is_err());
    }
}
