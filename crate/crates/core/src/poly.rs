//! Dense univariate polynomials and multi-indices.

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::{PrecisionContext, Scalar};

/// Dense polynomial in the monomial basis, `coeffs[i]` multiplying `x^i`.
///
/// Trailing zeros are stripped, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BigPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> BigPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        BigPoly { coeffs }
    }

    pub fn zero() -> Self {
        BigPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last nonzero coefficient; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&T> {
        self.coeffs.get(i)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        let mut it = self.coeffs.iter().rev();
        let Some(first) = it.next() else {
            return x.zero_like();
        };
        let mut acc = first.clone();
        for c in it {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s).collect())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let lc = lc.clone();
                Self::new(self.coeffs.iter().map(|c| c.clone() / &lc).collect())
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.clone() + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        Self::new(series_mul(&self.coeffs, &other.coeffs, n))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * &c.int_like(i as i64))
                .collect(),
        )
    }

    /// `p(s x)`.
    pub fn scale_arg(&self, s: &T) -> Self {
        let mut pw = match self.coeffs.first() {
            Some(c) => c.one_like(),
            None => return Self::zero(),
        };
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.clone() * &pw);
            pw *= s;
        }
        Self::new(out)
    }

    /// `p(x + s)`, by repeated synthetic division.
    pub fn taylor_shift(&self, s: &T) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j + 1].clone() * s;
                c[j] += &t;
            }
        }
        Self::new(c)
    }

    /// `x^deg p(1/x)` with `deg = self.degree()`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn to_float(&self, ctx: &PrecisionContext) -> BigPoly<Float> {
        BigPoly::new(self.coeffs.iter().map(|c| c.to_float(ctx)).collect())
    }

    /// Evaluates at a real point in working precision.
    pub fn eval_float(&self, x: &Float, ctx: &PrecisionContext) -> Float {
        let mut acc = Float::new(ctx.bits());
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c.to_float(ctx);
        }
        acc
    }
}

impl BigPoly<Rational> {
    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Rational::from(v)).collect())
    }
}

/// `poly_eval`: Horner evaluation of `p` at `x`, exact when both are.
pub fn poly_eval<T: Scalar>(p: &BigPoly<T>, x: &T) -> T {
    p.eval(x)
}

/// First `n` coefficients of the product of two power series.
pub fn series_mul<T: Scalar>(a: &[T], b: &[T], n: usize) -> Vec<T> {
    let zero = match a.first().or(b.first()) {
        Some(c) => c.zero_like(),
        None => return Vec::new(),
    };
    let mut out = vec![zero; n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += &(ai.clone() * bj);
        }
    }
    out
}

/// First `n` coefficients of `(1 - s x)^{-a}`: `(a)_k s^k / k!`.
pub fn binomial_series<T: Scalar>(a: &T, s: &T, n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n);
    let mut term = a.one_like();
    let mut cur = a.clone();
    for k in 0..n {
        out.push(term.clone());
        term = term * &cur * s / a.int_like(k as i64 + 1);
        cur += &a.one_like();
    }
    out
}

/// Orthogonality conditions per weight: `(n_1, ..., n_r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex {
    parts: Vec<usize>,
}

impl MultiIndex {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParameters("empty multi-index".into()));
        }
        Ok(MultiIndex { parts })
    }

    pub fn diagonal(n: usize, r: usize) -> Self {
        MultiIndex { parts: vec![n; r.max(1)] }
    }

    /// `(floor(q_1 n), ..., floor(q_r n))`.
    pub fn from_ratios(n: usize, q: &[Rational]) -> Result<Self> {
        let parts = q
            .iter()
            .map(|qj| {
                let v = Rational::from(qj * n as u64).floor();
                v.numer().to_usize().unwrap_or(0)
            })
            .collect();
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn eval_examples() {
        let c = BigPoly::from_ints(&[5]);
        assert_eq!(c.eval(&q(123)), q(5));
        let id = BigPoly::from_ints(&[0, 1]);
        assert_eq!(poly_eval(&id, &q(7)), q(7));
        let sq = BigPoly::from_ints(&[1, 2, 1]);
        assert_eq!(sq.eval(&q(3)), q(16));
        assert_eq!(BigPoly::<Rational>::zero().eval(&q(3)), q(0));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = BigPoly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), 1);
        assert!(BigPoly::from_ints(&[0, 0]).is_zero());
    }

    #[test]
    fn shift_and_reverse() {
        let p = BigPoly::from_ints(&[-1, 0, 1]);
        assert_eq!(p.taylor_shift(&q(1)), BigPoly::from_ints(&[0, 2, 1]));
        assert_eq!(BigPoly::from_ints(&[1, 2, 3]).reversed(), BigPoly::from_ints(&[3, 2, 1]));
        assert_eq!(p.derivative(), BigPoly::from_ints(&[0, 2]));
    }

    #[test]
    fn binomial_series_matches_expansion() {
        // (1 - x)^{-2} = 1 + 2x + 3x^2 + ...
        let s = binomial_series(&q(2), &q(1), 4);
        assert_eq!(s, vec![q(1), q(2), q(3), q(4)]);
    }

    #[test]
    fn multi_index_from_ratios() {
        let half = Rational::from((1, 2));
        let m = MultiIndex::from_ratios(9, &[half.clone(), half]).unwrap();
        assert_eq!(m.parts(), &[4, 4]);
        assert_eq!(m.total(), 8);
        assert!(MultiIndex::new(vec![]).is_err());
    }

    proptest! {
        #[test]
        fn real_mode_matches_rational(
            coeffs in prop::collection::vec((-50i64..50, 1i64..20), 1..12),
            xn in -30i64..30, xd in 1i64..10,
        ) {
            let ctx = PrecisionContext::default();
            let p = BigPoly::new(coeffs.iter().map(|&(a, b)| Rational::from((a, b))).collect());
            let x = Rational::from((xn, xd));
            let exact = ctx.float_from(&p.eval(&x));
            let approx = p.eval_float(&ctx.float_from(&x), &ctx);
            let xmax = ctx.float_from(&x).abs().max(&ctx.float(1.0));
            let mut scale = ctx.float(0.0);
            for c in p.coeffs().iter().rev() {
                scale = scale * &xmax + ctx.float_from(c).abs();
            }
            prop_assert!(Float::with_val(ctx.bits(), exact - approx).abs() <= ctx.eps_float() * scale);
        }

        #[test]
        fn product_evaluates_to_product(
            a in prop::collection::vec(-20i64..20, 0..6),
            b in prop::collection::vec(-20i64..20, 0..6),
            x in -9i64..9,
        ) {
            let pa = BigPoly::from_ints(&a);
            let pb = BigPoly::from_ints(&b);
            let x = q(x);
            prop_assert_eq!(pa.mul(&pb).eval(&x), pa.eval(&x) * pb.eval(&x));
            prop_assert_eq!(pa.add(&pb).eval(&x), pa.eval(&x) + pb.eval(&x));
        }
    }
}
