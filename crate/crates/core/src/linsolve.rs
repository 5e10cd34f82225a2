//! Linear solvers for moment systems.
//!
//! Exact fields use fraction-free (Bareiss) elimination and accept
//! overdetermined but consistent systems; real systems use partial-pivot
//! LU with a condition-number estimate.

use rug::{Float, Integer, Rational};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::precision::Scalar;

/// Field with exact division.
pub trait ExactField: Clone + PartialEq {
    fn is_zero_elem(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn f_add(&self, o: &Self) -> Self;
    fn f_sub(&self, o: &Self) -> Self;
    fn f_mul(&self, o: &Self) -> Self;
    fn f_div(&self, o: &Self) -> Self;

    /// Rescales a row in place without changing its solution set.
    fn normalize_row(_row: &mut [Self]) {}
}

impl ExactField for Rational {
    fn is_zero_elem(&self) -> bool {
        *self == 0
    }
    fn zero_like(&self) -> Self {
        Rational::new()
    }
    fn f_add(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn f_sub(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn f_mul(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn f_div(&self, o: &Self) -> Self {
        Rational::from(self / o)
    }

    /// Clears denominators and removes the content, leaving a primitive
    /// integer row.
    fn normalize_row(row: &mut [Self]) {
        let mut l = Integer::from(1);
        for v in row.iter() {
            l.lcm_mut(v.denom());
        }
        let mut g = Integer::new();
        for v in row.iter_mut() {
            *v *= &l;
            g.gcd_mut(v.numer());
        }
        if g > 1 {
            for v in row.iter_mut() {
                *v /= &g;
            }
        }
    }
}

impl ExactField for Cyclotomic {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        Cyclotomic::zero(self.field())
    }
    fn f_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn f_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn f_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn f_div(&self, o: &Self) -> Self {
        self.div(o).expect("exact division by zero")
    }
}

/// Solves `A x = b` for an `m x n` matrix with `m >= n` and full column
/// rank. Rows beyond the rank must be consistent; otherwise the system is
/// reported singular.
pub fn bareiss_solve<F: ExactField>(a: &[Vec<F>], b: &[F]) -> Result<Vec<F>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidParameters("ragged linear system".into()));
    }
    if m < n {
        return Err(Error::SingularMomentMatrix(format!("{m} equations for {n} unknowns")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            F::normalize_row(&mut r);
            r
        })
        .collect();
    let mut prev: Option<F> = None;
    for k in 0..n {
        let Some(p) = (k..m).find(|&i| !aug[i][k].is_zero_elem()) else {
            return Err(Error::SingularMomentMatrix(format!("no pivot in column {k}")));
        };
        aug.swap(k, p);
        let (top, rest) = aug.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let akk = pivot_row[k].clone();
        for row in rest.iter_mut() {
            let aik = row[k].clone();
            for j in k + 1..=n {
                let mut v = akk.f_mul(&row[j]).f_sub(&aik.f_mul(&pivot_row[j]));
                if let Some(d) = &prev {
                    v = v.f_div(d);
                }
                row[j] = v;
            }
            row[k] = akk.zero_like();
        }
        prev = Some(akk);
    }
    if let Some(i) = (n..m).find(|&i| !aug[i][n].is_zero_elem()) {
        return Err(Error::SingularMomentMatrix(format!("inconsistent equation {i}")));
    }
    let mut x: Vec<F> = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let mut s = aug[i][n].clone();
        for (j, xj) in x.iter().rev().enumerate() {
            s = s.f_sub(&aug[i][i + 1 + j].f_mul(xj));
        }
        x.push(s.f_div(&aug[i][i]));
    }
    x.reverse();
    Ok(x)
}

/// LU factorisation with partial pivoting, `P A = L U` stored in place.
struct Lu {
    lu: Vec<Vec<Float>>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(mut a: Vec<Vec<Float>>) -> Result<Lu> {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a
            .iter()
            .flat_map(|r| r.iter())
            .map(|v| v.clone().abs())
            .fold(None::<Float>, |m, v| match m {
                Some(m) if m >= v => Some(m),
                _ => Some(v),
            });
        let prec = a.first().and_then(|r| r.first()).map_or(64, Float::prec);
        let tiny = match &scale {
            Some(s) if !s.is_zero() => Float::with_val(prec, s * &Float::with_val(prec, Float::i_exp(1, -(prec as i32)))),
            _ => return Err(Error::SingularMomentMatrix("zero matrix".into())),
        };
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| {
                    a[i][k].clone().abs().partial_cmp(&a[j][k].clone().abs()).unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap();
            if a[p][k].clone().abs() <= tiny {
                return Err(Error::SingularMomentMatrix(format!("pivot {k} vanishes at working precision")));
            }
            a.swap(k, p);
            perm.swap(k, p);
            let (top, rest) = a.split_at_mut(k + 1);
            let pr = &top[k];
            for row in rest.iter_mut() {
                let f = Float::with_val(prec, &row[k] / &pr[k]);
                for j in k + 1..n {
                    let t = Float::with_val(prec, &f * &pr[j]);
                    row[j] -= t;
                }
                row[k] = f;
            }
        }
        Ok(Lu { lu: a, perm })
    }

    fn solve(&self, b: &[Float]) -> Vec<Float> {
        let n = self.lu.len();
        let mut y: Vec<Float> = self.perm.iter().map(|&i| b[i].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                let t = Float::with_val(y[i].prec(), &self.lu[i][j] * &y[j]);
                y[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = Float::with_val(y[i].prec(), &self.lu[i][j] * &y[j]);
                y[i] -= t;
            }
            y[i] /= &self.lu[i][i];
        }
        y
    }
}

fn inf_norm(rows: impl Iterator<Item = Vec<Float>>) -> f64 {
    rows.map(|r| r.iter().map(|v| v.to_f64().abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Real solution together with `log10` of the infinity-norm condition
/// number.
#[derive(Clone, Debug)]
pub struct RealSolution {
    pub x: Vec<Float>,
    pub cond_log10: f64,
}

/// Solves a square real system by pivoted LU.
pub fn lu_solve(a: &[Vec<Float>], b: &[Float]) -> Result<RealSolution> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameters("real solver needs a square system".into()));
    }
    if n == 0 {
        return Ok(RealSolution { x: Vec::new(), cond_log10: 0.0 });
    }
    let lu = Lu::factor(a.to_vec())?;
    let x = lu.solve(b);
    let prec = b[0].prec();
    let inv_cols: Vec<Vec<Float>> = (0..n)
        .map(|j| {
            let e: Vec<Float> = (0..n).map(|i| Float::with_val(prec, u32::from(i == j))).collect();
            lu.solve(&e)
        })
        .collect();
    let inv_rows = (0..n).map(|i| inv_cols.iter().map(|c| c[i].clone()).collect::<Vec<_>>());
    let cond = inf_norm(a.iter().cloned()) * inf_norm(inv_rows);
    Ok(RealSolution { x, cond_log10: cond.log10() })
}

/// Field-dependent dispatch for [`Scalar`] types.
pub trait Solve: Scalar {
    /// Returns the solution and, for real arithmetic, `log10` of the
    /// condition number.
    fn solve_system(a: &[Vec<Self>], b: &[Self]) -> Result<(Vec<Self>, Option<f64>)>;
}

impl Solve for Rational {
    fn solve_system(a: &[Vec<Self>], b: &[Self]) -> Result<(Vec<Self>, Option<f64>)> {
        bareiss_solve(a, b).map(|x| (x, None))
    }
}

impl Solve for Float {
    fn solve_system(a: &[Vec<Self>], b: &[Self]) -> Result<(Vec<Self>, Option<f64>)> {
        lu_solve(a, b).map(|s| (s.x, Some(s.cond_log10)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::PrecisionContext;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn small_exact_system() {
        // x + 2y = 5, 3x + 4y = 6 -> x = -4, y = 9/2
        let a = vec![vec![q(1, 1), q(2, 1)], vec![q(3, 1), q(4, 1)]];
        let x = bareiss_solve(&a, &[q(5, 1), q(6, 1)]).unwrap();
        assert_eq!(x, vec![q(-4, 1), q(9, 2)]);
    }

    #[test]
    fn singular_and_inconsistent() {
        let a = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(matches!(bareiss_solve(&a, &[q(1, 1), q(2, 1)]), Err(Error::SingularMomentMatrix(_))));
        let a = vec![vec![q(1, 1)], vec![q(2, 1)]];
        assert_eq!(bareiss_solve(&a, &[q(1, 1), q(2, 1)]).unwrap(), vec![q(1, 1)]);
        assert!(bareiss_solve(&a, &[q(1, 1), q(3, 1)]).is_err());
    }

    #[test]
    fn hilbert_real_vs_exact() {
        let ctx = PrecisionContext::new(60).unwrap();
        let n = 8;
        let a: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| q(1, (i + j + 1) as i64)).collect()).collect();
        let b: Vec<Rational> = (0..n).map(|i| q(i as i64 + 1, 1)).collect();
        let exact = bareiss_solve(&a, &b).unwrap();
        let af: Vec<Vec<Float>> = a.iter().map(|r| r.iter().map(|v| ctx.float_from(v)).collect()).collect();
        let bf: Vec<Float> = b.iter().map(|v| ctx.float_from(v)).collect();
        let sol = lu_solve(&af, &bf).unwrap();
        assert!(sol.cond_log10 > 9.0 && sol.cond_log10 < 12.0);
        for (e, x) in exact.iter().zip(&sol.x) {
            let rel = Float::with_val(ctx.bits(), ctx.float_from(e) - x).abs() / ctx.float_from(e).abs();
            assert!(rel < 1e-40);
        }
    }

    proptest! {
        #[test]
        fn bareiss_solves_random_systems(
            entries in prop::collection::vec(-9i64..10, 16),
            sol in prop::collection::vec(-9i64..10, 4),
        ) {
            let a: Vec<Vec<Rational>> = entries.chunks(4).map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect();
            let x: Vec<Rational> = sol.iter().map(|&v| q(v, 3)).collect();
            let b: Vec<Rational> = a.iter().map(|r| r.iter().zip(&x).map(|(u, v)| Rational::from(u * v)).sum()).collect();
            match bareiss_solve(&a, &b) {
                Ok(got) => prop_assert_eq!(got, x),
                Err(Error::SingularMomentMatrix(_)) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
