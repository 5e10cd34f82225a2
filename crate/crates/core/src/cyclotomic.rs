//! Exact arithmetic in the cyclotomic field Q(w), `w = exp(2 pi i / r)`.
//!
//! Elements are polynomials in `w` with rational coefficients reduced
//! modulo the cyclotomic polynomial `Phi_r`, so equality is structural.

use std::fmt;
use std::sync::Arc;

use rug::{Float, Rational};

use crate::poly::BigPoly;
use crate::precision::{Complex, PrecisionContext};

/// `Phi_r` as an integer polynomial, by dividing `x^r - 1` by `Phi_d` for
/// every proper divisor `d`.
pub fn cyclotomic_polynomial(r: usize) -> BigPoly<Rational> {
    assert!(r >= 1);
    let mut num = vec![Rational::new(); r + 1];
    num[0] = Rational::from(-1);
    num[r] = Rational::from(1);
    let mut p = BigPoly::new(num);
    for d in 1..r {
        if r % d == 0 {
            p = poly_divexact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn poly_divmod(a: &BigPoly<Rational>, b: &BigPoly<Rational>) -> (BigPoly<Rational>, BigPoly<Rational>) {
    let db = b.degree();
    let lb = b.leading().expect("division by zero polynomial").clone();
    let mut rem = a.coeffs().to_vec();
    if rem.len() <= db {
        return (BigPoly::zero(), a.clone());
    }
    let mut quo = vec![Rational::new(); rem.len() - db];
    for i in (0..quo.len()).rev() {
        let c = Rational::from(&rem[i + db] / &lb);
        if c != 0 {
            for (j, bj) in b.coeffs().iter().enumerate() {
                rem[i + j] -= Rational::from(&c * bj);
            }
        }
        quo[i] = c;
    }
    rem.truncate(db);
    (BigPoly::new(quo), BigPoly::new(rem))
}

fn poly_divexact(a: &BigPoly<Rational>, b: &BigPoly<Rational>) -> BigPoly<Rational> {
    let (q, r) = poly_divmod(a, b);
    debug_assert!(r.is_zero());
    q
}

/// The field Q(w) for a fixed `r`; shared by all its elements.
#[derive(Debug, PartialEq)]
pub struct CyclotomicField {
    r: usize,
    modulus: BigPoly<Rational>,
}

impl CyclotomicField {
    pub fn new(r: usize) -> Arc<Self> {
        Arc::new(CyclotomicField { r, modulus: cyclotomic_polynomial(r) })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Dimension over Q.
    pub fn degree(&self) -> usize {
        self.modulus.degree()
    }
}

/// Element of Q(w).
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    poly: BigPoly<Rational>,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.r == other.field.r && self.poly == other.poly
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .poly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})w"),
                _ => format!("({c})w^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl Cyclotomic {
    fn reduce(field: &Arc<CyclotomicField>, p: BigPoly<Rational>) -> Self {
        let (_, rem) = poly_divmod(&p, &field.modulus);
        Cyclotomic { field: field.clone(), poly: rem }
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, q: Rational) -> Self {
        Self::reduce(field, BigPoly::new(vec![q]))
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Cyclotomic { field: field.clone(), poly: BigPoly::zero() }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_rational(field, Rational::from(1))
    }

    /// `w^k`.
    pub fn root_power(field: &Arc<CyclotomicField>, k: usize) -> Self {
        let e = k % field.r;
        let mut c = vec![Rational::new(); e + 1];
        c[e] = Rational::from(1);
        Self::reduce(field, BigPoly::new(c))
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.poly.coeffs() {
            [] => Some(Rational::new()),
            [c] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        self.poly.coeffs()
    }

    pub fn add(&self, o: &Self) -> Self {
        Cyclotomic { field: self.field.clone(), poly: self.poly.add(&o.poly) }
    }

    pub fn neg(&self) -> Self {
        Cyclotomic { field: self.field.clone(), poly: self.poly.scale(&Rational::from(-1)) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::reduce(&self.field, self.poly.mul(&o.poly))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Cyclotomic { field: self.field.clone(), poly: self.poly.scale(q) }
    }

    /// Inverse via the extended Euclidean algorithm against `Phi_r`.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (mut r0, mut r1) = (self.field.modulus.clone(), self.poly.clone());
        let (mut t0, mut t1) = (BigPoly::<Rational>::zero(), BigPoly::constant(Rational::from(1)));
        while !r1.is_zero() {
            let (q, r) = poly_divmod(&r0, &r1);
            let t = t0.add(&q.mul(&t1).scale(&Rational::from(-1)));
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        // r0 is a nonzero constant since Phi_r is irreducible.
        let c = r0.coeff(0)?.clone();
        Some(Self::reduce(&self.field, t0.scale(&Rational::from(c.recip()))))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    /// Numerical value under the embedding `w -> exp(2 pi i / r)`.
    pub fn to_complex(&self, ctx: &PrecisionContext) -> Complex<Float> {
        let w = Complex::root_of_unity(1, self.field.r, ctx);
        let mut acc = Complex::real(ctx.float(0.0));
        for c in self.poly.coeffs().iter().rev() {
            acc = acc.mul(&w).add(&Complex::real(ctx.float_from(c)));
        }
        acc
    }
}
