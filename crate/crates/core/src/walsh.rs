//! Walsh functions, full Walsh expansions of enumerable functions, and
//! elementary-component extraction.
//!
//! A pseudo-Boolean function on n bits is a table of 2^n values. The
//! Walsh functions `psi_w(x) = (-1)^{|w & x|}` form an orthogonal basis;
//! the expansion coefficients are `a_w = 2^{-n} <psi_w, f>`. Grouping the
//! terms of the expansion by the weight of `w` gives the elementary
//! components `f_[j]`, which are simultaneous eigenfunctions of all
//! sphere-neighborhood operators — the fact the whole mutation analysis
//! rests on.

use crate::bitspace::{BitString, ENUM_LIMIT};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A dense table of 2^n values, one per string, indexed by
/// [`BitString::to_index`].
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionTable<S: Scalar> {
    n: usize,
    values: Vec<S>,
}

impl<S: Scalar> FunctionTable<S> {
    /// Wrap a value table; `values.len()` must be exactly 2^n.
    pub fn new(n: usize, values: Vec<S>) -> Result<Self> {
        if n > ENUM_LIMIT {
            return Err(Error::DimensionOverLimit { n, limit: ENUM_LIMIT });
        }
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(Error::SizeMismatch { expected, got: values.len() });
        }
        Ok(FunctionTable { n, values })
    }

    /// Tabulate `f` over the whole hypercube.
    pub fn from_fn(n: usize, mut f: impl FnMut(&BitString) -> S) -> Result<Self> {
        if n > ENUM_LIMIT {
            return Err(Error::DimensionOverLimit { n, limit: ENUM_LIMIT });
        }
        let values = (0..1usize << n)
            .map(|i| f(&BitString::from_index(i, n)))
            .collect();
        Ok(FunctionTable { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, x: &BitString) -> &S {
        &self.values[x.to_index()]
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// Pointwise m-th power of the table.
    pub fn pow(&self, m: usize) -> Self {
        FunctionTable {
            n: self.n,
            values: self.values.iter().map(|v| v.powu(m)).collect(),
        }
    }
}

/// The full coefficient table of a Walsh expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct WalshExpansion<S: Scalar> {
    n: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> WalshExpansion<S> {
    /// Wrap an already-computed coefficient table (one entry per
    /// parameter, indexed like a [`FunctionTable`]).
    pub fn from_coeffs(n: usize, coeffs: Vec<S>) -> Self {
        assert_eq!(coeffs.len(), 1usize << n, "coefficient table size");
        WalshExpansion { n, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, w: &BitString) -> &S {
        &self.coeffs[w.to_index()]
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Evaluate the expansion at `x` by summing all 2^n terms.
    pub fn reconstruct(&self, x: &BitString) -> S {
        let xi = x.to_index();
        let mut acc = S::zero();
        for (wi, a) in self.coeffs.iter().enumerate() {
            if (wi & xi).count_ones() % 2 == 0 {
                acc = acc + a.clone();
            } else {
                acc = acc - a.clone();
            }
        }
        acc
    }

    /// The order-j elementary component at `x`: the partial expansion
    /// restricted to parameters of weight j. Summing over j = 0..=n
    /// reproduces the function value.
    pub fn elementary_component(&self, j: usize, x: &BitString) -> Result<S> {
        if j > self.n {
            return Err(Error::IndexOutOfRange { what: "order", index: j, max: self.n });
        }
        let xi = x.to_index();
        let mut acc = S::zero();
        for (wi, a) in self.coeffs.iter().enumerate() {
            if wi.count_ones() as usize != j {
                continue;
            }
            if (wi & xi).count_ones() % 2 == 0 {
                acc = acc + a.clone();
            } else {
                acc = acc - a.clone();
            }
        }
        Ok(acc)
    }

    /// All elementary components at `x`, orders 0..=n.
    pub fn elementary_components(&self, x: &BitString) -> Vec<S> {
        let xi = x.to_index();
        let mut out = vec![S::zero(); self.n + 1];
        for (wi, a) in self.coeffs.iter().enumerate() {
            let j = wi.count_ones() as usize;
            if (wi & xi).count_ones() % 2 == 0 {
                out[j] = out[j].clone() + a.clone();
            } else {
                out[j] = out[j].clone() - a.clone();
            }
        }
        out
    }
}

/// Evaluate the Walsh function with parameter `w` at `x`:
/// `(-1)^{|w & x|}`, always +1 or -1.
pub fn walsh_eval(w: &BitString, x: &BitString) -> Result<i32> {
    if w.len() != x.len() {
        return Err(Error::LengthMismatch { expected: w.len(), got: x.len() });
    }
    Ok(if (w & x).popcount() % 2 == 0 { 1 } else { -1 })
}

/// Full Walsh transform of a value table, via the in-place butterfly
/// (O(n 2^n) adds) followed by the 2^{-n} normalization. Exact in
/// rational mode.
pub fn transform<S: Scalar>(f: &FunctionTable<S>) -> WalshExpansion<S> {
    let n = f.n;
    let mut data = f.values.clone();
    let mut half = 1usize;
    while half < data.len() {
        let step = half << 1;
        let mut base = 0;
        while base < data.len() {
            for i in base..base + half {
                let a = data[i].clone();
                let b = data[i + half].clone();
                data[i] = a.clone() + b.clone();
                data[i + half] = a - b;
            }
            base += step;
        }
        half = step;
    }
    let scale = S::from_int(1i64 << n);
    for v in &mut data {
        *v = v.clone() / scale.clone();
    }
    WalshExpansion { n, coeffs: data }
}

/// Inverse transform: rebuild the value table from an expansion.
/// The butterfly is an involution up to the 2^n factor, so this is the
/// same pass without the normalization.
pub fn inverse_transform<S: Scalar>(e: &WalshExpansion<S>) -> FunctionTable<S> {
    let table = FunctionTable { n: e.n, values: e.coeffs.clone() };
    let unscaled = transform(&table);
    let scale = S::from_int(1i64 << e.n);
    FunctionTable {
        n: e.n,
        values: unscaled.coeffs.into_iter().map(|v| v * scale.clone()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitspace::all_strings;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn walsh_eval_examples() {
        for x in all_strings(3).unwrap() {
            assert_eq!(walsh_eval(&bs("000"), &x).unwrap(), 1);
        }
        assert_eq!(walsh_eval(&bs("11"), &bs("01")).unwrap(), -1);
        assert_eq!(walsh_eval(&bs("11"), &bs("11")).unwrap(), 1);
        assert!(walsh_eval(&bs("11"), &bs("111")).is_err());
    }

    #[test]
    fn transform_of_constant() {
        let f = FunctionTable::from_fn(4, |_| 7.0).unwrap();
        let e = transform(&f);
        assert_eq!(e.coeff(&bs("0000")), &7.0);
        for i in 1..16usize {
            assert_eq!(e.coeffs()[i], 0.0);
        }
    }

    #[test]
    fn transform_of_weight_linear_function() {
        // f(x) = n - 2|x| has coefficient 1 at each weight-1 parameter
        // and 0 elsewhere.
        let n = 5usize;
        let f =
            FunctionTable::from_fn(n, |x| rat(n as i64 - 2 * x.popcount() as i64)).unwrap();
        let e = transform(&f);
        for w in all_strings(n).unwrap() {
            let expect = if w.popcount() == 1 { rat(1) } else { rat(0) };
            assert_eq!(e.coeff(&w), &expect, "w = {w}");
        }
        // and that f is purely order 1
        for x in all_strings(n).unwrap() {
            let c1 = e.elementary_component(1, &x).unwrap();
            assert_eq!(&c1, f.value(&x));
        }
    }

    #[test]
    fn roundtrip_exact() {
        let f = FunctionTable::new(
            3,
            (0..8).map(|i| rat((i * i % 7) as i64 - 3)).collect(),
        )
        .unwrap();
        let e = transform(&f);
        let back = inverse_transform(&e);
        assert_eq!(back, f);
        // a_0 is the mean over the hypercube
        let mean = f.values().iter().fold(rat(0), |a, b| a + b) / rat(8);
        assert_eq!(e.coeff(&bs("000")), &mean);
    }

    #[test]
    fn elementary_components_sum_to_value() {
        let f = FunctionTable::new(
            3,
            vec![
                rat(2), rat(-1), rat(5), rat(0),
                rat(3), rat(3), rat(-4), rat(7),
            ],
        )
        .unwrap();
        let e = transform(&f);
        for x in all_strings(3).unwrap() {
            let total = e
                .elementary_components(&x)
                .into_iter()
                .fold(rat(0), |a, b| a + b);
            assert_eq!(&total, f.value(&x));
            // order 0 is a_0 everywhere
            assert_eq!(
                e.elementary_component(0, &x).unwrap(),
                e.coeff(&bs("000")).clone()
            );
        }
        assert!(e.elementary_component(4, &bs("000")).is_err());
    }

    #[test]
    fn dimension_limit_enforced() {
        assert!(FunctionTable::<f64>::from_fn(25, |_| 0.0).is_err());
    }
}
