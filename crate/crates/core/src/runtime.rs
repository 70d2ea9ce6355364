//! Exact expected first-hitting times of the (1+lambda) EA on the Onemax
//! family, optimal mutation rates, and runtime-curve fits.
//!
//! One generation of the EA draws lambda offspring by bit-flip mutation
//! and keeps the best strictly-improving one. On a fitness-level chain
//! this is an absorbing Markov chain whose transition matrix is upper
//! triangular (elitism never moves down), so the vector of mean
//! absorption times falls out of one O(q^2) back-substitution, and the
//! expected runtime from a uniform random start is the level-size
//! weighted average of those times.

use crate::error::{Error, Result};
use crate::krawtchouk::{binomial, KrawtchoukMatrix};
use crate::onemax::VarpiMatrix;
use crate::scalar::{big_ratio_to_f64, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Best-of-lambda-offspring transition matrix: entry (i, j) is the
/// probability that the best of lambda independent mutations of a
/// level-i parent sits at level j. With cumulative row sums `c_l`,
/// the entry is `c_j^lambda - c_{j-1}^lambda`; it is computed in the
/// factored form `varpi_{i,j} * sum_t c_j^t c_{j-1}^{lambda-1-t}`, which
/// subtracts nothing and so stays accurate in float mode.
pub fn varpi_lambda<S: Scalar>(vp: &VarpiMatrix<S>, lambda: usize) -> Result<VarpiMatrix<S>> {
    if lambda == 0 {
        return Err(Error::IndexOutOfRange { what: "lambda", index: 0, max: usize::MAX });
    }
    if lambda == 1 {
        return Ok(vp.clone());
    }
    let q = vp.q();
    let rows = (0..q)
        .map(|i| {
            let mut out = Vec::with_capacity(q);
            let mut below = S::zero(); // c_{j-1}
            let mut upto = S::zero(); // c_j
            for j in 0..q {
                upto = upto + vp.entry(i, j).clone();
                // sum_{t=0..lambda-1} upto^t * below^(lambda-1-t)
                let mut geo = S::zero();
                for t in 0..lambda {
                    geo = geo + upto.powu(t) * below.powu(lambda - 1 - t);
                }
                out.push(vp.entry(i, j).clone() * geo);
                below = upto.clone();
            }
            out
        })
        .collect();
    Ok(VarpiMatrix::from_rows(vp.n(), vp.p().clone(), rows))
}

/// Upper-triangular transition matrix of the elitist chain: strictly
/// improving moves keep their probability, everything else folds into
/// the diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix<S: Scalar> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> TransitionMatrix<S> {
    /// Number of fitness levels.
    pub fn q(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }
}

/// Fold a level-transition matrix into the elitist transition matrix.
/// Rows must sum to 1 (exactly in rational mode, within 1e-9 in float
/// mode).
pub fn transition_matrix<S: Scalar>(vpl: &VarpiMatrix<S>) -> Result<TransitionMatrix<S>> {
    let q = vpl.q();
    let mut rows = Vec::with_capacity(q);
    for i in 0..q {
        let sum = vpl.row(i).iter().fold(S::zero(), |a, b| a + b.clone());
        let stochastic = if S::EXACT {
            sum == S::one()
        } else {
            (sum.to_f64() - 1.0).abs() <= 1e-9
        };
        if !stochastic {
            return Err(Error::NonStochasticRow { row: i });
        }
        let mut row = vec![S::zero(); q];
        let mut diag = S::zero();
        for j in 0..q {
            if j > i {
                row[j] = vpl.entry(i, j).clone();
            } else {
                diag = diag + vpl.entry(i, j).clone();
            }
        }
        row[i] = diag;
        rows.push(row);
    }
    Ok(TransitionMatrix { rows })
}

/// Mean absorption times of the elitist chain: entry i is the expected
/// number of generations from level i to the top level, which gets time
/// zero. Solved by back-substitution on `(I - T) t = 1`; the diagonal
/// element `1 - P_{i,i}` is accumulated as the (positive) mass of the
/// strictly improving moves, so no cancellation occurs in float mode.
pub fn absorption_times<S: Scalar>(p: &TransitionMatrix<S>) -> Result<Vec<S>> {
    let q = p.q();
    let mut t = vec![S::zero(); q];
    for i in (0..q.saturating_sub(1)).rev() {
        let mut escape = S::zero();
        let mut drift = S::one();
        for j in i + 1..q {
            escape = escape + p.entry(i, j).clone();
            drift = drift + p.entry(i, j).clone() * t[j].clone();
        }
        let absorbing = if S::EXACT {
            !escape.is_zero()
        } else {
            escape.to_f64() > 0.0
        };
        if !absorbing {
            return Err(Error::NotAbsorbing { level: i });
        }
        t[i] = drift / escape;
    }
    Ok(t)
}

/// Expected runtime from a uniform random initial solution: the
/// level-size weighted average of the absorption times.
pub fn expected_runtime<S: Scalar>(times: &[S], level_sizes: &[BigInt]) -> Result<S> {
    if times.len() != level_sizes.len() {
        return Err(Error::SizeMismatch { expected: times.len(), got: level_sizes.len() });
    }
    let total: BigInt = level_sizes.iter().sum();
    let mut acc = S::zero();
    for (t, size) in times.iter().zip(level_sizes) {
        acc = acc + t.clone() * S::from_bigint(size);
    }
    Ok(acc / S::from_bigint(&total))
}

/// Absorption times plus their weighted average, bundled.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsorptionResult<S: Scalar> {
    /// Mean generations from each level; the top level holds 0.
    pub times: Vec<S>,
    /// Expected runtime from a uniform random start.
    pub expected_runtime: S,
}

/// Full pipeline for the Onemax chain with any scalar type: transition
/// probabilities in the Krawtchouk spectral form, best-of-lambda fold,
/// elitist chain, absorption times, uniform-start average.
///
/// Exact and fast for rational scalars at moderate n. In float mode the
/// spectral form loses accuracy beyond n of about 30; large-n float
/// work should use [`onemax_expected_runtime_f64`].
pub fn onemax_chain<S: Scalar>(n: usize, lambda: usize, p: &S) -> Result<AbsorptionResult<S>> {
    let vp = crate::onemax::varpi(n, p)?;
    let vpl = varpi_lambda(&vp, lambda)?;
    let pm = transition_matrix(&vpl)?;
    let times = absorption_times(&pm)?;
    let sizes = crate::mutation::binomial_sizes(n);
    let expected = expected_runtime(&times, &sizes)?;
    Ok(AbsorptionResult { times, expected_runtime: expected })
}

/// Level-transition matrix of the Onemax chain evaluated with positive
/// hypergeometric sums instead of the alternating spectral form: from a
/// parent with `a` ones, reaching `b` ones means flipping k of the ones
/// and `b - a + k` of the zeros. Every term is nonnegative, so this is
/// accurate in f64 for any n the binomials fit (n up to ~1000), row sums
/// landing within 1e-12 of 1. Values agree with
/// [`crate::onemax::varpi`] exactly in the mathematical sense.
pub fn varpi_stable_f64(n: usize, p: f64) -> Result<VarpiMatrix<f64>> {
    if n == 0 {
        return Err(Error::IndexOutOfRange { what: "dimension", index: 0, max: usize::MAX });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange);
    }
    // Pascal triangle rows 0..=n in f64
    let mut pascal: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let mut row = vec![1.0; r + 1];
        for c in 1..r {
            row[c] = pascal[r - 1][c - 1] + pascal[r - 1][c];
        }
        pascal.push(row);
    }
    let mut p_pow = vec![1.0; n + 1];
    let mut q_pow = vec![1.0; n + 1];
    for t in 1..=n {
        p_pow[t] = p_pow[t - 1] * p;
        q_pow[t] = q_pow[t - 1] * (1.0 - p);
    }
    let rows = (0..=n)
        .map(|i| {
            let a = n - i; // parent ones
            (0..=n)
                .map(|j| {
                    let b = n - j; // child ones
                    let mut total = 0.0;
                    for k in 0..=a {
                        // k ones flipped off, l zeros flipped on
                        let Some(l) = (b + k).checked_sub(a) else { continue };
                        if l > n - a {
                            continue;
                        }
                        total += pascal[a][k] * pascal[n - a][l] * p_pow[k + l]
                            * q_pow[n - k - l];
                    }
                    total
                })
                .collect()
        })
        .collect();
    Ok(VarpiMatrix::from_rows(n, p, rows))
}

/// Expected runtime of the (1+lambda) EA on Onemax in float arithmetic,
/// stable for large n.
pub fn onemax_expected_runtime_f64(n: usize, lambda: usize, p: f64) -> Result<f64> {
    let vp = varpi_stable_f64(n, p)?;
    let vpl = varpi_lambda(&vp, lambda)?;
    let pm = transition_matrix(&vpl)?;
    let times = absorption_times(&pm)?;
    expected_runtime(&times, &crate::mutation::binomial_sizes(n))
}

/// Expected runtime of the (1+lambda) EA on Onemax as an exact rational.
///
/// Equivalent to [`onemax_chain`] with rational scalars but far faster
/// for large n: everything is kept over explicit common denominators
/// (one shared power table for the spectral sums, one running product of
/// pivots for the back-substitution) so the hot loop is pure big-integer
/// multiply-accumulate with no gcd normalization.
pub fn onemax_expected_runtime_exact(
    n: usize,
    lambda: usize,
    p: &BigRational,
) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::IndexOutOfRange { what: "dimension", index: 0, max: usize::MAX });
    }
    if lambda == 0 {
        return Err(Error::IndexOutOfRange { what: "lambda", index: 0, max: usize::MAX });
    }
    if *p < BigRational::zero() || *p > BigRational::one() {
        return Err(Error::ProbabilityOutOfRange);
    }
    let q = n + 1;
    let a = p.numer().clone();
    let b = p.denom().clone(); // > 0 after normalization
    let z = &b - BigInt::from(2) * &a; // numerator of 1 - 2p over b

    // scaled[l] = z^l * b^(n-l): the lambda-vector over denominator b^n
    let mut scaled = vec![BigInt::one(); q];
    {
        let mut zp = BigInt::one();
        let mut bp = vec![BigInt::one(); q];
        for l in 1..q {
            bp[l] = &bp[l - 1] * &b;
        }
        for (l, slot) in scaled.iter_mut().enumerate() {
            *slot = &zp * &bp[n - l];
            zp *= &z;
        }
    }

    // Numerators of the one-offspring transition matrix over
    // d1 = 2^n b^n; only cumulative sums and the upper triangle matter.
    let k = KrawtchoukMatrix::build(n);
    let d1 = {
        let mut bn = BigInt::one();
        for _ in 0..n {
            bn *= &b;
        }
        (BigInt::one() << n) * bn
    };
    let numer = |i: usize, j: usize| -> BigInt {
        let mut acc = BigInt::zero();
        for (l, s) in scaled.iter().enumerate() {
            acc += k.at(j, l) * k.at(l, i) * s;
        }
        acc
    };

    // cum[i][j] = sum_{l<=j} numerators of row i
    let mut cum = vec![vec![BigInt::zero(); q]; q];
    for i in 0..q {
        let mut run = BigInt::zero();
        for j in 0..q {
            run += numer(i, j);
            cum[i][j] = run.clone();
        }
    }

    // Best-of-lambda numerators over dl = d1^lambda.
    let dl = d1.pow(lambda as u32);
    let pow_l = |v: &BigInt| v.pow(lambda as u32);

    // Back-substitution over a running common denominator: after level i
    // is processed, t_j = times[j] / denom for all j >= i.
    let mut times = vec![BigInt::zero(); q];
    let mut denom = BigInt::one();
    for i in (0..q - 1).rev() {
        let stay = pow_l(&cum[i][i]); // lambda offspring all at or below i
        let escape = &dl - &stay;
        if escape.is_zero() {
            return Err(Error::NotAbsorbing { level: i });
        }
        // sum over improving targets of P_{i,j} * t_j, over dl * denom
        let mut drift = BigInt::zero();
        for j in i + 1..q {
            let step = pow_l(&cum[i][j]) - pow_l(&cum[i][j - 1]);
            drift += step * &times[j];
        }
        // t_i = (1 + drift/(dl*denom)) * dl/escape
        for t in times.iter_mut().skip(i + 1) {
            *t *= &escape;
        }
        times[i] = &dl * &denom + drift;
        denom *= &escape;
    }

    let mut weighted = BigInt::zero();
    for (l, t) in times.iter().enumerate() {
        weighted += binomial(n, l) * t;
    }
    let total_den = (BigInt::one() << n) * denom;
    Ok(BigRational::new(weighted, total_den))
}

/// Result of the optimal-rate search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalP {
    /// Minimizing bit-flip probability.
    pub p_star: f64,
    /// Expected runtime at the minimizer.
    pub runtime: f64,
}

/// Find the bit-flip probability minimizing the expected runtime of the
/// (1+lambda) EA on Onemax over `(0, 1]`.
///
/// Newton iteration on the derivative (central differences with step
/// `max(1e-8, 1e-6 p)`), started at `1/n`, damped and confined to
/// `(1e-4/n, 1)`; a sign-change bisection takes over if Newton leaves
/// the domain or stalls, and the boundary candidate `p = 1` is compared
/// explicitly (it wins for n = 1). The reported minimum is re-evaluated
/// exactly at the nearest dyadic rational with denominator 2^26, where
/// the quadratic flatness at the optimum makes the rounding loss
/// negligible.
pub fn optimal_p(n: usize, lambda: usize) -> Result<OptimalP> {
    let eval = |p: f64| -> Option<f64> { onemax_expected_runtime_f64(n, lambda, p).ok() };
    let lo = 1e-4 / n as f64;
    let hi = 1.0;
    let mut best_p = f64::NAN;
    let mut best_e = f64::INFINITY;
    let consider = |p: f64, e: f64, best_p: &mut f64, best_e: &mut f64| {
        if e < *best_e {
            *best_e = e;
            *best_p = p;
        }
    };

    let h_of = |p: f64| (1e-6 * p).max(1e-8);
    let deriv = |p: f64| -> Option<f64> {
        let h = h_of(p);
        Some((eval(p + h)? - eval(p - h)?) / (2.0 * h))
    };

    // Damped Newton on dE/dp = 0.
    let mut p = 1.0 / n as f64;
    let mut converged = false;
    for _ in 0..80 {
        let e = match eval(p) {
            Some(e) => e,
            None => break,
        };
        consider(p, e, &mut best_p, &mut best_e);
        let h = h_of(p);
        let (em, e0, ep) = match (eval(p - h), Some(e), eval(p + h)) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => break,
        };
        let g = (ep - em) / (2.0 * h);
        let g_prime = (ep - 2.0 * e0 + em) / (h * h);
        if g.abs() < 1e-10 {
            converged = true;
            break;
        }
        let mut step = if g_prime > 0.0 { -g / g_prime } else { -g.signum() * 0.1 / n as f64 };
        // damp steps that would leave the domain
        let mut damping = 0;
        while (p + step <= lo || p + step >= hi) && damping < 60 {
            step *= 0.5;
            damping += 1;
        }
        if damping == 60 {
            break;
        }
        p += step;
        if step.abs() < 1e-12 {
            converged = true;
            break;
        }
    }
    if let Some(e) = eval(p) {
        consider(p, e, &mut best_p, &mut best_e);
    }

    if !converged {
        // Bracket a sign change of the derivative on a geometric grid and
        // bisect. For monotone objectives (n = 1) no bracket exists and
        // the boundary comparison below decides.
        let mut grid = Vec::new();
        let mut gp = (0.05 / n as f64).max(lo * 2.0);
        let ghi = (8.0 / n as f64).min(0.999_999);
        while gp < ghi {
            grid.push(gp);
            gp *= 1.18;
        }
        grid.push(ghi);
        let mut bracket = None;
        let mut prev: Option<(f64, f64)> = None;
        for &gp in &grid {
            if let (Some(e), Some(d)) = (eval(gp), deriv(gp)) {
                consider(gp, e, &mut best_p, &mut best_e);
                if let Some((pp, pd)) = prev {
                    if pd < 0.0 && d >= 0.0 {
                        bracket = Some((pp, gp));
                        break;
                    }
                }
                prev = Some((gp, d));
            }
        }
        if let Some((mut a, mut c)) = bracket {
            for _ in 0..200 {
                let mid = 0.5 * (a + c);
                match deriv(mid) {
                    Some(d) if d < 0.0 => a = mid,
                    Some(_) => c = mid,
                    None => break,
                }
                if c - a < 1e-13 {
                    break;
                }
            }
            let mid = 0.5 * (a + c);
            if let Some(e) = eval(mid) {
                consider(mid, e, &mut best_p, &mut best_e);
            }
        }
    }

    // Boundary candidate p = 1 (valid only when the chain still absorbs,
    // i.e. n = 1).
    if let Some(e) = eval(1.0) {
        consider(1.0, e, &mut best_p, &mut best_e);
    }

    if !best_p.is_finite() {
        return Err(Error::NonConvergence("optimal-p search"));
    }

    // High-precision re-evaluation at a dyadic rational next to the
    // found minimizer.
    let scale = (1u64 << 26) as f64;
    let dyadic = ((best_p * scale).round() as i64).clamp(1, scale as i64);
    let p_exact = BigRational::new(BigInt::from(dyadic), BigInt::from(1i64 << 26));
    let runtime = match onemax_expected_runtime_exact(n, lambda, &p_exact) {
        Ok(exact) => big_ratio_to_f64(exact.numer(), exact.denom()),
        Err(_) => best_e,
    };
    Ok(OptimalP { p_star: best_p, runtime })
}

/// Basis functions accepted by the least-squares fitter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisFn {
    /// 1
    Constant,
    /// x
    X,
    /// x ln x (natural log; x must be positive)
    XLnX,
    /// 1/x
    InvX,
    /// ln x (natural log; x must be positive)
    LnX,
}

impl BasisFn {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            BasisFn::Constant => 1.0,
            BasisFn::X => x,
            BasisFn::XLnX => x * x.ln(),
            BasisFn::InvX => 1.0 / x,
            BasisFn::LnX => x.ln(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BasisFn::Constant => "1",
            BasisFn::X => "x",
            BasisFn::XLnX => "x*ln(x)",
            BasisFn::InvX => "1/x",
            BasisFn::LnX => "ln(x)",
        }
    }
}

/// Ordinary least squares over the given basis, via the normal
/// equations; returns one coefficient per basis function.
pub fn fit_least_squares(points: &[(f64, f64)], basis: &[BasisFn]) -> Result<Vec<f64>> {
    let k = basis.len();
    if k == 0 || points.len() < k {
        return Err(Error::RankDeficient);
    }
    let mut gram = vec![vec![0.0; k]; k];
    let mut rhs = vec![0.0; k];
    for &(x, y) in points {
        let row: Vec<f64> = basis.iter().map(|b| b.eval(x)).collect();
        for i in 0..k {
            for j in 0..k {
                gram[i][j] += row[i] * row[j];
            }
            rhs[i] += row[i] * y;
        }
    }
    solve_dense(&mut gram, &mut rhs)?;
    Ok(rhs)
}

/// Gaussian elimination with partial pivoting on a small dense system.
fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<()> {
    let k = b.len();
    let scale = a
        .iter()
        .map(|row| row.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
        .fold(0.0_f64, f64::max);
    for col in 0..k {
        let (pivot, magnitude) = (col..k)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if magnitude <= scale * 1e-13 {
            return Err(Error::RankDeficient);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..k {
            let factor = a[r][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for c in col..k {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    for r in (0..k).rev() {
        let mut acc = b[r];
        for c in r + 1..k {
            acc -= a[r][c] * b[c];
        }
        b[r] = acc / a[r][r];
    }
    Ok(())
}
