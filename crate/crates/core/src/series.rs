//! Exact Taylor expansion of a solution of a differential operator from its
//! leading coefficients, and constant terms of rational combinations of its
//! derivatives.

use std::sync::Mutex;

use crate::arith::q;
use crate::diffop::{to_recurrence, DiffOp, Recurrence};
use crate::error::{Clause, EfaError, Result};
use crate::field::{Field, KElem};
use crate::ratfun::RatFun;

/// `f = sum f_n z^n` with `L f = 0`, expanded on demand.
pub struct Series {
    field: Field,
    op: DiffOp,
    rec: Recurrence,
    cache: Mutex<Vec<KElem>>,
}

impl Series {
    /// Validates the initial segment against the recurrence of `op`.
    pub fn new(op: &DiffOp, initial: Vec<KElem>) -> Result<Self> {
        let field = op.field().clone();
        let rec = to_recurrence(op);
        if initial.len() < rec.m {
            return Err(EfaError::validation(
                Clause::Coefficients,
                format!(
                    "{} initial coefficients given but the recurrence needs m = max(d, g+1) = {} \
                     (order d = {}, g = largest nonnegative integer root of the indicial polynomial)",
                    initial.len(),
                    rec.m,
                    rec.order()
                ),
            ));
        }
        for n in 0..initial.len() {
            if !rec.residual(&initial, n).is_zero() {
                return Err(EfaError::validation(
                    Clause::Coefficients,
                    format!("initial coefficient f_{n} = {} contradicts the operator's recurrence", initial[n]),
                ));
            }
        }
        let s = Series { field, op: op.clone(), rec, cache: Mutex::new(initial) };
        // Surface undetermined indices early rather than deep inside a later step.
        s.try_coefficients(s.rec.m + 8)?;
        Ok(s)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn operator(&self) -> &DiffOp {
        &self.op
    }
    pub fn recurrence(&self) -> &Recurrence {
        &self.rec
    }

    pub fn try_coefficients(&self, len: usize) -> Result<Vec<KElem>> {
        let mut c = self.cache.lock().unwrap();
        if c.len() < len {
            self.rec.extend(&mut c, len)?;
        }
        Ok(c[..len].to_vec())
    }

    /// `f_0, ..., f_{len-1}`.
    pub fn coefficients(&self, len: usize) -> Vec<KElem> {
        self.try_coefficients(len).expect("series extension validated at construction")
    }

    /// Coefficients of `f^(j)`: `(n+1)...(n+j) f_{n+j}` for `n < len`.
    pub fn derivative_coefficients(&self, j: usize, len: usize) -> Vec<KElem> {
        let c = self.coefficients(len + j);
        (0..len)
            .map(|n| {
                let mut x = c[n + j].clone();
                for t in 1..=j {
                    x = x.scale(&q((n + t) as i64));
                }
                x
            })
            .collect()
    }
}

/// Multiplies truncated series, keeping `len` terms.
pub fn series_mul(a: &[KElem], b: &[KElem], len: usize) -> Vec<KElem> {
    let field = a.first().or(b.first()).map(|x| x.field().clone());
    let Some(field) = field else { return vec![] };
    let mut out = vec![KElem::zero(&field); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

/// Laurent coefficients of `sum_j q[j] f^(j)` at 0 for exponents `v..=upto`,
/// where `v` is the most negative exponent that can occur.
pub fn combination_laurent(qs: &[RatFun], f: &Series, upto: i64) -> (i64, Vec<KElem>) {
    let field = f.field().clone();
    let zero = KElem::zero(&field);
    let expansions: Vec<(i64, Vec<KElem>)> = qs.iter().map(|r| r.laurent_at(&zero, upto)).collect();
    let v = expansions.iter().map(|(v, _)| *v).min().unwrap_or(0).min(0);
    let len = (upto - v + 1) as usize;
    let mut acc = vec![KElem::zero(&field); len];
    for (j, (vj, cj)) in expansions.iter().enumerate() {
        if qs[j].is_zero() {
            continue;
        }
        let need = (upto - vj + 1).max(0) as usize;
        let fj = f.derivative_coefficients(j, need);
        let prod = series_mul(cj, &fj, need);
        for (k, x) in prod.into_iter().enumerate() {
            let e = vj + k as i64;
            if e <= upto {
                let idx = (e - v) as usize;
                acc[idx] = &acc[idx] + &x;
            }
        }
    }
    (v, acc)
}

/// The constant `c` with `sum_j q[j] f^(j) = c`, read off as the constant Laurent
/// coefficient at 0; the next `check` coefficients (and all polar ones) must vanish.
pub fn combination_constant_term(qs: &[RatFun], f: &Series, check: usize) -> Result<KElem> {
    let (v, c) = combination_laurent(qs, f, check as i64);
    for (i, x) in c.iter().enumerate() {
        let e = v + i as i64;
        if e != 0 && !x.is_zero() {
            return Err(EfaError::inconsistency(format!(
                "combination is not constant: coefficient of z^{e} is {x}"
            )));
        }
    }
    Ok(c[(-v) as usize].clone())
}
