//! Rational functions over `K` in lowest terms with monic denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{EfaError, Result};
use crate::field::{Field, KElem};
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// `num / den` reduced; panics if `den = 0`.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFun { den: Poly::one(num.field()), num };
        }
        let g = Poly::gcd(&num, &den);
        let (mut n, mut d) = if g.is_one() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        let lc = d.lc();
        if !lc.is_one() {
            let inv = lc.inv().unwrap();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFun { num: n, den: d }
    }
    pub fn from_poly(p: Poly) -> Self {
        let f = p.field().clone();
        RatFun { num: p, den: Poly::one(&f) }
    }
    pub fn constant(x: KElem) -> Self {
        Self::from_poly(Poly::constant(x))
    }
    pub fn zero(f: &Field) -> Self {
        Self::from_poly(Poly::zero(f))
    }
    pub fn one(f: &Field) -> Self {
        Self::from_poly(Poly::one(f))
    }
    pub fn field(&self) -> &Field {
        self.num.field()
    }
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(EfaError::DivisionByZero);
        }
        Ok(RatFun::new(self.den.clone(), self.num.clone()))
    }
    pub fn div(&self, o: &RatFun) -> Result<Self> {
        Ok(self * &o.inv()?)
    }
    pub fn scale(&self, s: &KElem) -> Self {
        if s.is_zero() {
            return RatFun::zero(self.field());
        }
        RatFun { num: self.num.scale(s), den: self.den.clone() }
    }
    pub fn mul_poly(&self, p: &Poly) -> Self {
        RatFun::new(&self.num * p, self.den.clone())
    }
    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFun::new(n, &self.den * &self.den)
    }
    pub fn eval(&self, x: &KElem) -> Option<KElem> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x).div(&d).unwrap())
    }
    /// Laurent expansion at `a`: returns `(v, c)` with
    /// `self = sum_{i >= 0} c[i] (z - a)^(v + i)`, through the exponent `order`.
    pub fn laurent_at(&self, a: &KElem, order: i64) -> (i64, Vec<KElem>) {
        let f = self.field().clone();
        let lin = Poly::linear_root(a);
        let mut k = 0i64;
        let mut d1 = self.den.clone();
        while d1.eval(a).is_zero() {
            d1 = d1.exact_div(&lin);
            k += 1;
        }
        let v = -k;
        let len = (order - v + 1).max(0) as usize;
        let nt = self.num.taylor_at(a);
        let dt = d1.taylor_at(a);
        let inv0 = dt[0].inv().unwrap();
        let mut out: Vec<KElem> = Vec::with_capacity(len);
        for i in 0..len {
            let mut s = nt.get(i).cloned().unwrap_or_else(|| KElem::zero(&f));
            for j in 1..=i.min(dt.len().saturating_sub(1)) {
                s = &s - &(&dt[j] * &out[i - j]);
            }
            out.push(&s * &inv0);
        }
        (v, out)
    }
    /// Order of the pole at `a` (0 if regular).
    pub fn pole_order_at(&self, a: &KElem) -> usize {
        let lin = Poly::linear_root(a);
        let mut d = self.den.clone();
        let mut k = 0;
        while d.eval(a).is_zero() {
            d = d.exact_div(&lin);
            k += 1;
        }
        k
    }
    pub fn embed(&self, gen_image: &KElem) -> RatFun {
        RatFun::new(self.num.embed(gen_image), self.den.embed(gen_image))
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, o: &RatFun) -> RatFun {
        if self.den == o.den {
            return RatFun::new(&self.num + &o.num, self.den.clone());
        }
        RatFun::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, o: &RatFun) -> RatFun {
        self + &(-o)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero(self.field());
        }
        RatFun::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::field::NumberField;

    #[test]
    fn laurent_of_simple_pole() {
        let f = NumberField::rational();
        let r = RatFun::new(Poly::one(&f), Poly::from_i64s(&f, &[0, 1]));
        let (v, c) = r.laurent_at(&KElem::zero(&f), 1);
        assert_eq!(v, -1);
        assert_eq!(c, vec![KElem::one(&f), KElem::zero(&f), KElem::zero(&f)]);
    }

    #[test]
    fn laurent_double_pole_leading_term() {
        // (1 + z) / (2 (z - 1)^2) at 1: leading coefficient (1 + 1)/2 = 1 at exponent -2.
        let f = NumberField::rational();
        let den = Poly::from_i64s(&f, &[2, -4, 2]);
        let r = RatFun::new(Poly::from_i64s(&f, &[1, 1]), den);
        let (v, c) = r.laurent_at(&KElem::one(&f), 3);
        assert_eq!(v, -2);
        assert!(c[0].is_one());
        assert_eq!(c[1], KElem::from_q(&f, q(1) / q(2)));
        assert!(c[2..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn arithmetic_normalizes() {
        let f = NumberField::rational();
        let a = RatFun::new(Poly::from_i64s(&f, &[-1, 0, 1]), Poly::from_i64s(&f, &[-2, 2]));
        assert_eq!(a.den(), &Poly::one(&f));
        assert_eq!(a.num(), &Poly::from_i64s(&f, &[1, 1]).scale_q(&(q(1) / q(2))));
        let b = RatFun::new(Poly::one(&f), Poly::from_i64s(&f, &[0, 1]));
        let s = &b - &b;
        assert!(s.is_zero());
        // d/dz (1/z) = -1/z^2
        assert_eq!(b.derivative(), RatFun::new(Poly::from_i64s(&f, &[-1]), Poly::from_i64s(&f, &[0, 0, 1])));
    }
}
