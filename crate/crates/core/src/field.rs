//! The coefficient field `K = Q[X]/(p)` with a distinguished complex embedding,
//! its elements, and algebraic numbers determined by a polynomial and an
//! isolating disk.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::arith::factor::is_irreducible;
use crate::arith::{format_q, q, q_to_decimal, QPoly, Q};
use crate::error::{Clause, EfaError, Result};
use crate::numeric::ball::two_pow_neg;
use crate::numeric::{isolate_roots, refine_root, CBall, Cq};

pub struct NumberField {
    min_poly: QPoly,
    root: Mutex<CBall>,
    real: bool,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({:?} at {})", self.min_poly, self.root.lock().unwrap())
    }
}

pub type Field = Arc<NumberField>;

impl NumberField {
    /// The rationals, as `Q[X]/(X)`.
    pub fn rational() -> Field {
        Arc::new(NumberField { min_poly: QPoly::x(), root: Mutex::new(CBall::zero()), real: true })
    }

    /// Field generated by the root of `p` nearest to `approx`. Rejects reducible `p`.
    pub fn new(p: &QPoly, approx: &Cq) -> Result<Field> {
        if p.is_zero() || p.deg() == 0 {
            return Err(EfaError::validation(Clause::Operator, "field polynomial must have degree >= 1"));
        }
        if !is_irreducible(p) {
            return Err(EfaError::validation(
                Clause::Operator,
                format!("field polynomial {p} is reducible over Q"),
            ));
        }
        let p = p.monic();
        if p.deg() == 1 {
            return Ok(Self::rational());
        }
        let roots = isolate_roots(&p, Some(&two_pow_neg(40)));
        let best = roots
            .iter()
            .min_by(|a, b| {
                a.ball.center.sub(approx).norm_sq().cmp(&b.ball.center.sub(approx).norm_sq())
            })
            .unwrap();
        Ok(Arc::new(NumberField { min_poly: p, root: Mutex::new(best.ball.clone()), real: best.real }))
    }

    /// Field from a known irreducible monic polynomial and an isolating disk.
    pub fn from_isolated(p: QPoly, ball: CBall, real: bool) -> Field {
        debug_assert!(p.deg() >= 1);
        if p.deg() == 1 {
            return Self::rational();
        }
        Arc::new(NumberField { min_poly: p, root: Mutex::new(ball), real })
    }

    pub fn min_poly(&self) -> &QPoly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.deg()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn generator_is_real(&self) -> bool {
        self.real
    }

    /// An isolating disk for the generator of radius at most `target`.
    pub fn root_ball(&self, target: &Q) -> CBall {
        let mut guard = self.root.lock().unwrap();
        if guard.rad > *target {
            *guard = refine_root(&self.min_poly, &guard, target);
        }
        guard.clone()
    }

    pub fn same_as(a: &Field, b: &Field) -> bool {
        Arc::ptr_eq(a, b)
            || (a.min_poly == b.min_poly && {
                let ra = a.root_ball(&two_pow_neg(8));
                let rb = b.root_ball(&two_pow_neg(8));
                same_root(&a.min_poly, &ra, &rb)
            })
    }
}

/// Whether two isolating disks of `p` isolate the same root.
pub fn same_root(p: &QPoly, a: &CBall, b: &CBall) -> bool {
    if p.deg() == 1 {
        return true;
    }
    let mut t = two_pow_neg(16);
    loop {
        let roots = isolate_roots(p, Some(&t));
        let ia: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].ball.overlaps(a)).collect();
        let ib: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].ball.overlaps(b)).collect();
        if ia.len() == 1 && ib.len() == 1 {
            return ia == ib;
        }
        t = &t * two_pow_neg(16);
    }
}

/// Element of `K`, as coordinates on the power basis `1, b, ..., b^(d-1)`.
#[derive(Clone)]
pub struct KElem {
    field: Field,
    c: Vec<Q>,
}

impl PartialEq for KElem {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}
impl Eq for KElem {}

impl fmt::Debug for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        if self.c.len() == 1 {
            return f.write_str(&format_q(&self.c[0]));
        }
        let mut parts = Vec::new();
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format_q(x),
                1 => format!("({})*b", format_q(x)),
                _ => format!("({})*b^{i}", format_q(x)),
            });
        }
        f.write_str(&parts.join(" + "))
    }
}

fn trim(mut c: Vec<Q>) -> Vec<Q> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

impl KElem {
    pub fn zero(field: &Field) -> Self {
        KElem { field: field.clone(), c: vec![] }
    }
    pub fn one(field: &Field) -> Self {
        Self::from_q(field, Q::one())
    }
    pub fn from_q(field: &Field, x: Q) -> Self {
        KElem { field: field.clone(), c: trim(vec![x]) }
    }
    pub fn from_i64(field: &Field, x: i64) -> Self {
        Self::from_q(field, q(x))
    }
    /// The generator `b` of `K` (equals 0 when `K = Q`).
    pub fn generator(field: &Field) -> Self {
        Self::from_coords(field, vec![Q::zero(), Q::one()])
    }
    /// Reduces an arbitrary polynomial in the generator.
    pub fn from_coords(field: &Field, c: Vec<Q>) -> Self {
        let d = field.degree();
        let c = if c.len() > d { QPoly::new(c).rem(field.min_poly()).into_coeffs() } else { trim(c) };
        KElem { field: field.clone(), c }
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn coords(&self) -> &[Q] {
        &self.c
    }
    /// Coordinate vector padded to the field degree.
    pub fn dense_coords(&self) -> Vec<Q> {
        let mut v = self.c.clone();
        v.resize(self.field.degree(), Q::zero());
        v
    }
    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.c.clone())
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }
    pub fn as_rational(&self) -> Option<Q> {
        match self.c.len() {
            0 => Some(Q::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }
    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero(&self.field);
        }
        KElem { field: self.field.clone(), c: self.c.iter().map(|x| x * s).collect() }
    }
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(EfaError::DivisionByZero);
        }
        if self.c.len() == 1 {
            return Ok(Self::from_q(&self.field, self.c[0].recip()));
        }
        let (g, s, _) = QPoly::xgcd(&self.to_qpoly(), self.field.min_poly());
        debug_assert_eq!(g, QPoly::one());
        Ok(KElem { field: self.field.clone(), c: s.into_coeffs() })
    }
    pub fn div(&self, o: &KElem) -> Result<Self> {
        Ok(self * &o.inv()?)
    }
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
    /// Lexicographic order on coordinates, for deterministic tie-breaks.
    pub fn cmp_lex(&self, o: &KElem) -> Ordering {
        let n = self.c.len().max(o.c.len());
        for i in 0..n {
            let a = self.c.get(i).cloned().unwrap_or_default();
            let b = o.c.get(i).cloned().unwrap_or_default();
            match a.cmp(&b) {
                Ordering::Equal => {}
                x => return x,
            }
        }
        Ordering::Equal
    }
    /// Enclosure of the complex value under the field's embedding, radius `<= target`.
    pub fn to_ball(&self, target: &Q) -> CBall {
        if let Some(x) = self.as_rational() {
            return CBall::from_q(x);
        }
        let poly = self.to_qpoly();
        let mut bits = 64u64;
        loop {
            let b = self.field.root_ball(&two_pow_neg(bits));
            let v = CBall::eval_qpoly(&poly, &b, bits + 16);
            if v.rad <= *target {
                return v;
            }
            bits *= 2;
        }
    }
    /// Reinterprets this element in another field by sending the generator to `gen_image`.
    pub fn embed(&self, gen_image: &KElem) -> KElem {
        let f = gen_image.field();
        let mut acc = KElem::zero(f);
        for x in self.c.iter().rev() {
            acc = &(&acc * gen_image) + &KElem::from_q(f, x.clone());
        }
        acc
    }
}

impl Add for &KElem {
    type Output = KElem;
    fn add(self, o: &KElem) -> KElem {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        KElem { field: self.field.clone(), c: trim(c) }
    }
}

impl Sub for &KElem {
    type Output = KElem;
    fn sub(self, o: &KElem) -> KElem {
        self + &(-o)
    }
}

impl Neg for &KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        KElem { field: self.field.clone(), c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Mul for &KElem {
    type Output = KElem;
    fn mul(self, o: &KElem) -> KElem {
        if self.c.is_empty() || o.c.is_empty() {
            return KElem::zero(&self.field);
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        let mut prod = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        KElem::from_coords(&self.field, prod)
    }
}

/// Monic minimal polynomial of `x` over `Q`: the squarefree part of the
/// characteristic polynomial of multiplication by `x`.
pub fn minimal_polynomial_over_q(x: &KElem) -> QPoly {
    if let Some(r) = x.as_rational() {
        return QPoly::linear_root(&r);
    }
    let p = x.field().min_poly();
    let d = p.deg();
    let xp = x.to_qpoly();
    let pts: Vec<(Q, Q)> = (0..=d as i64)
        .map(|t| {
            let lin = &QPoly::constant(q(t)) - &xp;
            (q(t), QPoly::resultant(p, &lin))
        })
        .collect();
    QPoly::interpolate(&pts).squarefree_part()
}

/// An algebraic number given by its minimal polynomial over `Q` and a disk
/// isolating it among that polynomial's roots.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    poly: QPoly,
    ball: CBall,
    real: bool,
}

impl AlgebraicNumber {
    pub fn rational(x: Q) -> Self {
        AlgebraicNumber { poly: QPoly::linear_root(&x), ball: CBall::from_q(x), real: true }
    }

    /// `poly` must be irreducible; `ball` must isolate one of its roots.
    pub fn new(poly: QPoly, ball: CBall, real: bool) -> Self {
        let poly = poly.monic();
        if poly.deg() == 1 {
            return Self::rational(-poly.coeff(0));
        }
        AlgebraicNumber { poly, ball, real }
    }

    /// All roots of an irreducible polynomial as algebraic numbers.
    pub fn roots_of_irreducible(poly: &QPoly) -> Vec<AlgebraicNumber> {
        let poly = poly.monic();
        if poly.deg() == 1 {
            return vec![Self::rational(-poly.coeff(0))];
        }
        isolate_roots(&poly, Some(&two_pow_neg(20)))
            .into_iter()
            .map(|r| AlgebraicNumber { poly: poly.clone(), ball: r.ball, real: r.real })
            .collect()
    }

    /// The value of a field element, determined by its minimal polynomial.
    pub fn from_kelem(x: &KElem) -> Self {
        let poly = minimal_polynomial_over_q(x);
        if poly.deg() == 1 {
            return Self::rational(-poly.coeff(0));
        }
        let mut t = two_pow_neg(20);
        loop {
            let v = x.to_ball(&t);
            let roots = isolate_roots(&poly, Some(&t));
            let hits: Vec<_> = roots.into_iter().filter(|r| r.ball.overlaps(&v)).collect();
            if hits.len() == 1 {
                let r = hits.into_iter().next().unwrap();
                return AlgebraicNumber { poly, ball: r.ball, real: r.real };
            }
            t = &t * two_pow_neg(20);
        }
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }
    pub fn ball(&self) -> &CBall {
        &self.ball
    }
    pub fn is_real(&self) -> bool {
        self.real
    }
    pub fn degree(&self) -> usize {
        self.poly.deg()
    }
    pub fn as_rational(&self) -> Option<Q> {
        (self.poly.deg() == 1).then(|| -self.poly.coeff(0))
    }
    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(|x| x.is_zero())
    }
    /// Same value with an isolating disk of radius `<= target`.
    pub fn refine(&self, target: &Q) -> Self {
        if self.ball.rad <= *target {
            return self.clone();
        }
        AlgebraicNumber { poly: self.poly.clone(), ball: refine_root(&self.poly, &self.ball, target), real: self.real }
    }
    pub fn same_value(&self, o: &AlgebraicNumber) -> bool {
        self.poly == o.poly && same_root(&self.poly, &self.ball, &o.ball)
    }
    /// Short human-readable form: exact if rational, else decimal plus polynomial.
    pub fn describe(&self, digits: usize) -> String {
        if let Some(x) = self.as_rational() {
            return format_q(&x);
        }
        let b = self.refine(&Q::new(1.into(), num_bigint::BigInt::from(10).pow(digits as u32 + 2)));
        let mut c = b.ball.clone();
        if self.real {
            c.center.im = Q::zero();
        }
        format!("{} (root of {})", c.to_decimal(digits), self.poly)
    }
    /// Decimal rendering of the real and imaginary parts.
    pub fn approx(&self, digits: usize) -> (String, String) {
        let b = self.refine(&Q::new(1.into(), num_bigint::BigInt::from(10).pow(digits as u32 + 2)));
        let im = if self.real { Q::zero() } else { b.ball.center.im.clone() };
        (q_to_decimal(&b.ball.center.re, digits), q_to_decimal(&im, digits))
    }
    /// Display-only floating approximation.
    pub fn approx_f64(&self) -> (f64, f64) {
        let (re, im) = self.ball.center.to_f64();
        (re, if self.real { 0.0 } else { im })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q_frac;
    use num_traits::Signed;

    fn sqrt2() -> Field {
        NumberField::new(&QPoly::from_i64s(&[-2, 0, 1]), &Cq::from_f64(1.4, 0.0)).unwrap()
    }

    #[test]
    fn norm_identity() {
        let k = sqrt2();
        let b = KElem::generator(&k);
        let one = KElem::one(&k);
        assert_eq!(&(&one + &b) * &(&one - &b), KElem::from_i64(&k, -1));
        let x = KElem::from_coords(&k, vec![q_frac(3, 2), q_frac(1, 2)]);
        assert!((&x * &x.inv().unwrap()).is_one());
        assert_eq!(&b.scale(&q_frac(3, 2)) + &b.scale(&q_frac(1, 2)), b.scale(&q(2)));
    }

    #[test]
    fn minimal_polynomials() {
        let k = sqrt2();
        assert_eq!(minimal_polynomial_over_q(&KElem::from_q(&k, q_frac(1, 2))), QPoly::linear_root(&q_frac(1, 2)));
        assert_eq!(minimal_polynomial_over_q(&KElem::generator(&k)), QPoly::from_i64s(&[-2, 0, 1]));
        let x = &KElem::one(&k) + &KElem::generator(&k);
        assert_eq!(minimal_polynomial_over_q(&x), QPoly::from_i64s(&[-1, -2, 1]));
    }

    #[test]
    fn reducible_field_rejected() {
        assert!(NumberField::new(&QPoly::from_i64s(&[-4, 0, 1]), &Cq::zero()).is_err());
    }

    #[test]
    fn generator_embedding_picks_requested_root() {
        let k = NumberField::new(&QPoly::from_i64s(&[-2, 0, 1]), &Cq::from_f64(-1.4, 0.0)).unwrap();
        let v = KElem::generator(&k).to_ball(&two_pow_neg(30));
        assert!(v.center.re.is_negative());
        let a = AlgebraicNumber::from_kelem(&KElem::generator(&k));
        assert!(a.approx_f64().0 < 0.0);
        assert!(a.describe(5).starts_with("-1.41421"));
    }
}
