//! Linear differential operators `sum a_i(z) D^i` with `D = d/dz`, the
//! recurrences they induce on Taylor coefficients, and left-ideal quotients.

use std::fmt;

use crate::arith::q;
use crate::error::{Clause, EfaError, Result};
use crate::field::{Field, KElem};
use crate::linalg::poly_kernel_vector;
use crate::poly::Poly;
use crate::ratfun::RatFun;

/// Operator with polynomial coefficients, `a[i]` multiplying `D^i`.
#[derive(Clone)]
pub struct DiffOp {
    field: Field,
    a: Vec<Poly>,
}

impl PartialEq for DiffOp {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a
    }
}
impl Eq for DiffOp {}

fn binom(n: usize, k: usize) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

impl DiffOp {
    pub fn new(field: &Field, mut a: Vec<Poly>) -> Self {
        while a.last().is_some_and(|p| p.is_zero()) {
            a.pop();
        }
        DiffOp { field: field.clone(), a }
    }
    pub fn zero(field: &Field) -> Self {
        DiffOp { field: field.clone(), a: vec![] }
    }
    pub fn one(field: &Field) -> Self {
        DiffOp::new(field, vec![Poly::one(field)])
    }
    /// `D`
    pub fn d(field: &Field) -> Self {
        DiffOp::new(field, vec![Poly::zero(field), Poly::one(field)])
    }
    /// Multiplication by the polynomial `p`.
    pub fn mult(p: Poly) -> Self {
        let f = p.field().clone();
        DiffOp::new(&f, vec![p])
    }
    /// Clears denominators of a rational-coefficient operator.
    pub fn from_ratfuns(field: &Field, r: &[RatFun]) -> Self {
        let l = r.iter().fold(Poly::one(field), |acc, x| Poly::lcm(&acc, x.den()));
        DiffOp::new(field, r.iter().map(|x| x.num() * &l.exact_div(x.den())).collect())
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_empty()
    }
    pub fn order(&self) -> usize {
        self.a.len().saturating_sub(1)
    }
    /// Maximal degree in `z` of the coefficients.
    pub fn degree(&self) -> usize {
        self.a.iter().map(|p| p.deg()).max().unwrap_or(0)
    }
    pub fn coeffs(&self) -> &[Poly] {
        &self.a
    }
    pub fn coeff(&self, i: usize) -> Poly {
        self.a.get(i).cloned().unwrap_or_else(|| Poly::zero(&self.field))
    }
    pub fn lc(&self) -> Poly {
        self.coeff(self.order())
    }
    /// Primitive over `K[z]`, with monic leading coefficient polynomial.
    pub fn normalize(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.a.iter().fold(Poly::zero(&self.field), |acc, p| Poly::gcd(&acc, p));
        let mut a: Vec<Poly> = self.a.iter().map(|p| p.exact_div(&g)).collect();
        let lc = a.last().unwrap().lc().inv().unwrap();
        for p in a.iter_mut() {
            *p = p.scale(&lc);
        }
        DiffOp { field: self.field.clone(), a }
    }
    pub fn add(&self, o: &DiffOp) -> DiffOp {
        let n = self.a.len().max(o.a.len());
        DiffOp::new(&self.field, (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
    pub fn sub(&self, o: &DiffOp) -> DiffOp {
        let n = self.a.len().max(o.a.len());
        DiffOp::new(&self.field, (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }
    /// Composition `self * o`, using `D b = b D + b'`.
    pub fn mul(&self, o: &DiffOp) -> DiffOp {
        if self.is_zero() || o.is_zero() {
            return DiffOp::zero(&self.field);
        }
        let mut out = vec![Poly::zero(&self.field); self.order() + o.order() + 1];
        for (j, b) in o.a.iter().enumerate() {
            // derivs[k] = b^(k)
            let mut derivs = vec![b.clone()];
            for k in 1..=self.order() {
                let next = derivs[k - 1].derivative();
                derivs.push(next);
            }
            for (i, ai) in self.a.iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                for k in 0..=i {
                    if derivs[k].is_zero() {
                        continue;
                    }
                    let t = (ai * &derivs[k]).scale_q(&q(binom(i, k)));
                    out[i - k + j] = &out[i - k + j] + &t;
                }
            }
        }
        DiffOp::new(&self.field, out)
    }
    /// Applies the operator to a truncated power series `f_0, ..., f_{N-1}`;
    /// the result is exact in its first `N - order` coefficients.
    pub fn apply_series(&self, f: &[KElem]) -> Vec<KElem> {
        let n = f.len();
        let rho = self.order();
        if n <= rho {
            return vec![];
        }
        let len = n - rho;
        let mut out = vec![KElem::zero(&self.field); len];
        for (i, ai) in self.a.iter().enumerate() {
            // i-th derivative coefficients: (m+1)...(m+i) f_{m+i}
            let der: Vec<KElem> = (0..len)
                .map(|m| {
                    let mut c = f[m + i].clone();
                    for t in 1..=i {
                        c = c.scale(&q((m + t) as i64));
                    }
                    c
                })
                .collect();
            for (k, ak) in ai.coeffs().iter().enumerate() {
                if ak.is_zero() {
                    continue;
                }
                for m in 0..len.saturating_sub(k) {
                    out[m + k] = &out[m + k] + &(ak * &der[m]);
                }
            }
        }
        out
    }
    pub fn to_ratop(&self) -> RatOp {
        RatOp { field: self.field.clone(), a: self.a.iter().map(|p| RatFun::from_poly(p.clone())).collect() }
    }
    pub fn embed(&self, gen_image: &KElem) -> DiffOp {
        DiffOp::new(gen_image.field(), self.a.iter().map(|p| p.embed(gen_image)).collect())
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (i, p) in self.a.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            let d = match i {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{i}"),
            };
            parts.push(match (p.is_one(), i) {
                (true, 0) => "1".to_string(),
                (true, _) => d,
                (false, 0) => format!("({p})"),
                (false, _) => format!("({p})*{d}"),
            });
        }
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Operator with rational-function coefficients.
#[derive(Clone, Debug)]
pub struct RatOp {
    field: Field,
    a: Vec<RatFun>,
}

impl PartialEq for RatOp {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a
    }
}

impl RatOp {
    pub fn new(field: &Field, mut a: Vec<RatFun>) -> Self {
        while a.last().is_some_and(|p| p.is_zero()) {
            a.pop();
        }
        RatOp { field: field.clone(), a }
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_empty()
    }
    pub fn order(&self) -> usize {
        self.a.len().saturating_sub(1)
    }
    pub fn coeffs(&self) -> &[RatFun] {
        &self.a
    }
    pub fn coeff(&self, i: usize) -> RatFun {
        self.a.get(i).cloned().unwrap_or_else(|| RatFun::zero(&self.field))
    }
    pub fn add(&self, o: &RatOp) -> RatOp {
        let n = self.a.len().max(o.a.len());
        RatOp::new(&self.field, (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
    pub fn sub(&self, o: &RatOp) -> RatOp {
        let n = self.a.len().max(o.a.len());
        RatOp::new(&self.field, (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }
    pub fn mul(&self, o: &RatOp) -> RatOp {
        if self.is_zero() || o.is_zero() {
            return RatOp::new(&self.field, vec![]);
        }
        let mut out = vec![RatFun::zero(&self.field); self.order() + o.order() + 1];
        for (j, b) in o.a.iter().enumerate() {
            let mut derivs = vec![b.clone()];
            for k in 1..=self.order() {
                let next = derivs[k - 1].derivative();
                derivs.push(next);
            }
            for (i, ai) in self.a.iter().enumerate() {
                for k in 0..=i {
                    if ai.is_zero() || derivs[k].is_zero() {
                        continue;
                    }
                    let c = KElem::from_i64(&self.field, binom(i, k));
                    let t = (ai * &derivs[k]).scale(&c);
                    out[i - k + j] = &out[i - k + j] + &t;
                }
            }
        }
        RatOp::new(&self.field, out)
    }
    /// Right division: `self = quo * b + rem` with `order(rem) < order(b)`.
    pub fn div_rem_right(&self, b: &RatOp) -> (RatOp, RatOp) {
        assert!(!b.is_zero());
        let mut r = self.clone();
        let mut quo = RatOp::new(&self.field, vec![]);
        let lb = b.a.last().unwrap().clone();
        while !r.is_zero() && r.order() >= b.order() {
            let shift = r.order() - b.order();
            let c = r.a.last().unwrap().div(&lb).unwrap();
            let mut t = vec![RatFun::zero(&self.field); shift + 1];
            t[shift] = c;
            let t = RatOp::new(&self.field, t);
            r = r.sub(&t.mul(b));
            quo = quo.add(&t);
        }
        (quo, r)
    }
    pub fn to_diffop(&self) -> DiffOp {
        DiffOp::from_ratfuns(&self.field, &self.a)
    }
}

/// Recurrence `sum_{j=0}^{d} p_j(n) c_{n-j} = 0`, valid for all `n >= 0` with
/// `c_k = 0` for `k < 0`.
#[derive(Clone, Debug)]
pub struct Recurrence {
    /// `p[j]` as polynomials in `n`.
    pub p: Vec<Poly>,
    /// Number of leading coefficients that determine every solution.
    pub m: usize,
}

impl Recurrence {
    pub fn order(&self) -> usize {
        self.p.len() - 1
    }
    /// `p_0`, the indicial polynomial at 0.
    pub fn indicial(&self) -> &Poly {
        &self.p[0]
    }
    /// Extends `c` in place to length `len`.
    pub fn extend(&self, c: &mut Vec<KElem>, len: usize) -> Result<()> {
        let field = self.p[0].field().clone();
        while c.len() < len {
            let n = c.len();
            let nk = KElem::from_i64(&field, n as i64);
            let lead = self.p[0].eval(&nk);
            let mut s = KElem::zero(&field);
            for j in 1..self.p.len() {
                if j > n {
                    break;
                }
                let pj = self.p[j].eval(&nk);
                if !pj.is_zero() && !c[n - j].is_zero() {
                    s = &s + &(&pj * &c[n - j]);
                }
            }
            if lead.is_zero() {
                if s.is_zero() {
                    return Err(EfaError::validation(
                        Clause::Coefficients,
                        format!("Taylor coefficient of index {n} is not determined by the recurrence; supply it"),
                    ));
                }
                return Err(EfaError::validation(
                    Clause::Coefficients,
                    format!("initial coefficients are inconsistent with the operator at index {n}"),
                ));
            }
            c.push((-&s).div(&lead).unwrap());
        }
        Ok(())
    }
    /// Residual of equation `n` on known coefficients.
    pub fn residual(&self, c: &[KElem], n: usize) -> KElem {
        let field = self.p[0].field().clone();
        let nk = KElem::from_i64(&field, n as i64);
        let mut s = KElem::zero(&field);
        for j in 0..self.p.len().min(n + 1) {
            s = &s + &(&self.p[j].eval(&nk) * &c[n - j]);
        }
        s
    }
}

/// `(x - s)(x - s - 1)...(x - s - i + 1)` as a polynomial in `x`.
fn falling_shifted(field: &Field, s: i64, i: usize) -> Poly {
    let mut acc = Poly::one(field);
    for t in 0..i as i64 {
        acc = &acc * &Poly::from_i64s(field, &[-(s + t), 1]);
    }
    acc
}

/// Recurrence satisfied by the Taylor coefficients of every power-series
/// solution of `l`.
pub fn to_recurrence(l: &DiffOp) -> Recurrence {
    assert!(!l.is_zero());
    let field = l.field().clone();
    // sigma = max (i - k) over nonzero a_{ik} z^k D^i
    let mut sigma = i64::MIN;
    for (i, ai) in l.coeffs().iter().enumerate() {
        for (k, c) in ai.coeffs().iter().enumerate() {
            if !c.is_zero() {
                sigma = sigma.max(i as i64 - k as i64);
            }
        }
    }
    let mut d = 0usize;
    for (i, ai) in l.coeffs().iter().enumerate() {
        for (k, c) in ai.coeffs().iter().enumerate() {
            if !c.is_zero() {
                d = d.max((sigma - (i as i64 - k as i64)) as usize);
            }
        }
    }
    let mut p = vec![Poly::zero(&field); d + 1];
    for (i, ai) in l.coeffs().iter().enumerate() {
        for (k, c) in ai.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = (sigma - (i as i64 - k as i64)) as usize;
            p[j] = &p[j] + &falling_shifted(&field, j as i64, i).scale(c);
        }
    }
    let g = p[0].integer_roots().into_iter().filter(|r| r >= &0.into()).max();
    let m = match g {
        Some(g) => d.max(usize::try_from(g).unwrap() + 1),
        None => d,
    };
    Recurrence { p, m }
}

/// Reduces `op` modulo the left ideal generated by `l` (right remainder).
fn reduce(op: &RatOp, l: &RatOp) -> Vec<RatFun> {
    let (_, r) = op.div_rem_right(l);
    let mut v: Vec<RatFun> = r.coeffs().to_vec();
    v.resize(l.order(), RatFun::zero(&l.field));
    v
}

/// `D * (sum r_k D^k)` reduced modulo `l`.
fn d_times(v: &[RatFun], l: &RatOp) -> Vec<RatFun> {
    let rho = l.order();
    let field = &l.field;
    let mut out = vec![RatFun::zero(field); rho];
    let mut top = RatFun::zero(field);
    for (k, r) in v.iter().enumerate() {
        if r.is_zero() {
            continue;
        }
        out[k] = &out[k] + &r.derivative();
        if k + 1 < rho {
            out[k + 1] = &out[k + 1] + r;
        } else {
            top = r.clone();
        }
    }
    if !top.is_zero() {
        // D^rho = -sum (l_j / l_rho) D^j
        let lr = l.coeff(rho);
        for (j, out_j) in out.iter_mut().enumerate() {
            let c = l.coeff(j);
            if !c.is_zero() {
                *out_j = &*out_j - &(&top * &c.div(&lr).unwrap());
            }
        }
    }
    out
}

/// The minimal-order `A` with `A * m` in the left ideal generated by `l`, so that
/// `A` annihilates `m(f)` for every solution `f` of `l`.
pub fn annihilator_of_image(l: &DiffOp, m: &DiffOp) -> DiffOp {
    let field = l.field().clone();
    let lr = l.to_ratop();
    let rho = l.order();
    if rho == 0 {
        return DiffOp::one(&field);
    }
    let mut rows: Vec<Vec<RatFun>> = vec![reduce(&m.to_ratop(), &lr)];
    if rows[0].iter().all(|x| x.is_zero()) {
        return DiffOp::one(&field);
    }
    loop {
        let next = d_times(rows.last().unwrap(), &lr);
        rows.push(next);
        // Columns are the remainders; look for a dependency among them.
        let n = rows.len();
        let lcm = rows.iter().flatten().fold(Poly::one(&field), |acc, x| Poly::lcm(&acc, x.den()));
        let mat: Vec<Vec<Poly>> = (0..rho)
            .map(|k| (0..n).map(|j| rows[j][k].num() * &lcm.exact_div(rows[j][k].den())).collect())
            .collect();
        let (_, pivots) = crate::linalg::bareiss(mat.clone());
        if pivots.len() < n {
            let v = poly_kernel_vector(mat, n).expect("dependency exists");
            return DiffOp::from_ratfuns(&field, &v).normalize();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;

    fn p(f: &Field, c: &[i64]) -> Poly {
        Poly::from_i64s(f, c)
    }

    fn exp_series(f: &Field, n: usize) -> Vec<KElem> {
        let mut v = vec![KElem::one(f)];
        for i in 1..n {
            let next = v[i - 1].scale(&(q(1) / q(i as i64)));
            v.push(next);
        }
        v
    }

    #[test]
    fn commutation_rule() {
        let f = NumberField::rational();
        let dz = DiffOp::d(&f).mul(&DiffOp::mult(p(&f, &[0, 1])));
        assert_eq!(dz, DiffOp::new(&f, vec![p(&f, &[1]), p(&f, &[0, 1])]));
    }

    #[test]
    fn exponential_recurrence() {
        let f = NumberField::rational();
        let l = DiffOp::new(&f, vec![p(&f, &[-1]), p(&f, &[1])]);
        let r = to_recurrence(&l);
        assert_eq!(r.order(), 1);
        assert_eq!(r.m, 1);
        let mut c = vec![KElem::one(&f)];
        r.extend(&mut c, 6).unwrap();
        assert_eq!(c, exp_series(&f, 6));
    }

    #[test]
    fn division_reconstructs() {
        let f = NumberField::rational();
        let a = DiffOp::new(&f, vec![p(&f, &[1, 2]), p(&f, &[0, 0, 1]), p(&f, &[3, 1]), p(&f, &[0, 1])]);
        let b = DiffOp::new(&f, vec![p(&f, &[-1]), p(&f, &[1, 1])]);
        let (qq, r) = a.to_ratop().div_rem_right(&b.to_ratop());
        assert!(r.order() < 1);
        assert_eq!(qq.mul(&b.to_ratop()).add(&r), a.to_ratop());
        let (qq, r) = b.to_ratop().div_rem_right(&b.to_ratop());
        assert!(r.is_zero());
        assert_eq!(qq.coeffs().len(), 1);
    }

    #[test]
    fn annihilators() {
        let f = NumberField::rational();
        let d2 = DiffOp::new(&f, vec![p(&f, &[]), p(&f, &[]), p(&f, &[1])]);
        assert_eq!(annihilator_of_image(&d2, &DiffOp::d(&f)), DiffOp::d(&f));
        let l = DiffOp::new(&f, vec![p(&f, &[-1]), p(&f, &[1])]);
        assert_eq!(annihilator_of_image(&l, &DiffOp::one(&f)), l);
        let a = annihilator_of_image(&l, &DiffOp::mult(p(&f, &[0, 1])));
        // z e^z series, checked to order 30.
        let e = exp_series(&f, 32);
        let ze: Vec<KElem> = std::iter::once(KElem::zero(&f)).chain(e.iter().cloned()).collect();
        assert!(a.apply_series(&ze).iter().take(30).all(|x| x.is_zero()));
        assert_eq!(a.order(), 1);
    }
}
