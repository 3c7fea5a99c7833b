use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{format_q, q, Q};

/// Dense univariate polynomial over `Q`, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Q>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn from_integers(c: &[BigInt]) -> Self {
        Self::new(c.iter().map(|x| Q::from_integer(x.clone())).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn x() -> Self {
        QPoly { coeffs: vec![Q::zero(), Q::one()] }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: Q, k: usize) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `x - a`
    pub fn linear_root(a: &Q) -> Self {
        Self::new(vec![-a.clone(), Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0 (callers check `is_zero`).
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Q> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn lc(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.coeffs.len() < d.coeffs.len() {
            return (QPoly::zero(), self.clone());
        }
        let dd = d.deg();
        let inv = d.lc().recip();
        let mut r = self.coeffs.clone();
        let mut quo = vec![Q::zero(); r.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = &r[i + dd] * &inv;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dj;
                }
            }
            quo[i] = c;
        }
        r.truncate(dd);
        (QPoly::new(quo), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, d: &QPoly) -> QPoly {
        let (quo, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        quo
    }

    pub fn divides(&self, other: &QPoly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn xgcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (quo, r) = r0.div_rem(&r1);
            let s = &s0 - &(&quo * &s1);
            let t = &t0 - &(&quo * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `self(other(x))`
    pub fn compose(&self, other: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &QPoly::constant(c.clone());
        }
        acc
    }

    /// `self(x + a)`
    pub fn shift(&self, a: &Q) -> QPoly {
        self.compose(&QPoly::new(vec![a.clone(), Q::one()]))
    }

    pub fn is_squarefree(&self) -> bool {
        QPoly::gcd(self, &self.derivative()).deg() == 0
    }

    /// Monic squarefree part.
    pub fn squarefree_part(&self) -> QPoly {
        if self.deg() == 0 {
            return self.monic();
        }
        let g = QPoly::gcd(self, &self.derivative());
        self.exact_div(&g).monic()
    }

    /// Yun's algorithm: `self = lc * prod s_i^i` with monic squarefree, pairwise coprime `s_i`.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = QPoly::gcd(&f, &df);
        let mut b = f.exact_div(&a0);
        let mut c = df.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.deg() > 0 {
            let a = QPoly::gcd(&b, &d);
            b = b.exact_div(&a);
            c = d.exact_div(&a);
            d = &c - &b.derivative();
            if a.deg() > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// Resultant over `Q`.
    pub fn resultant(a: &QPoly, b: &QPoly) -> Q {
        if a.is_zero() || b.is_zero() {
            return Q::zero();
        }
        let mut a = a.clone();
        let mut b = b.clone();
        let mut acc = Q::one();
        loop {
            let m = a.deg();
            let n = b.deg();
            if n == 0 {
                return acc * num_traits::pow(b.lc(), m);
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return Q::zero();
            }
            let k = r.deg();
            // res(a, b) = (-1)^{mn} lc(b)^{m-k} res(b, r)
            if (m * n) % 2 == 1 {
                acc = -acc;
            }
            acc *= num_traits::pow(b.lc(), m - k);
            a = b;
            b = r;
        }
    }

    /// Lagrange interpolation through distinct abscissae.
    pub fn interpolate(points: &[(Q, Q)]) -> QPoly {
        // Newton divided differences.
        let n = points.len();
        let mut coef: Vec<Q> = points.iter().map(|p| p.1.clone()).collect();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = &coef[i] - &coef[i - 1];
                let den = &points[i].0 - &points[i - j].0;
                coef[i] = num / den;
            }
        }
        let mut acc = QPoly::zero();
        for i in (0..n).rev() {
            acc = &(&acc * &QPoly::linear_root(&points[i].0)) + &QPoly::constant(coef[i].clone());
        }
        acc
    }

    /// Primitive integer polynomial proportional to `self` with positive leading coefficient.
    pub fn to_primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Q::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        let g = g * sign;
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Primitive integer version as a `QPoly`.
    pub fn primitive(&self) -> QPoly {
        QPoly::from_integers(&self.to_primitive_integer())
    }

    /// `x^k` factor count at the bottom.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Cauchy bound on root moduli: `1 + max |a_i / a_n|`.
    pub fn cauchy_bound(&self) -> Q {
        let lc = self.lc().abs();
        let mut m = Q::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let r = c.abs() / &lc;
            if r > m {
                m = r;
            }
        }
        m + Q::one()
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_q(c))?,
                1 => write!(f, "({})*x", format_q(c))?,
                _ => write!(f, "({})*x^{i}", format_q(c))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q_frac;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x-1)^2 (x+2) and (x-1)(x+3)
        let a = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        let b = &p(&[-1, 1]) * &p(&[3, 1]);
        assert_eq!(QPoly::gcd(&a, &b), p(&[-1, 1]));
    }

    #[test]
    fn xgcd_bezout() {
        let a = p(&[1, 0, 1]);
        let b = p(&[-1, 1, 0, 2]);
        let (g, s, t) = QPoly::xgcd(&a, &b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
        assert_eq!(g, QPoly::one());
    }

    #[test]
    fn resultant_matches_norm() {
        // Res_y(y^2 - 2, 3 - y) = 3^2 - 2 = 7
        let r = QPoly::resultant(&p(&[-2, 0, 1]), &p(&[3, -1]));
        assert_eq!(r, q(7));
        assert_eq!(QPoly::resultant(&p(&[-1, 1]), &p(&[-1, 0, 1])), q(0));
    }

    #[test]
    fn yun_decomposition() {
        let a = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &(&p(&[0, 1]) * &p(&[0, 3]));
        let d = a.squarefree_decomposition();
        assert_eq!(d, vec![(p(&[0, -1, 1]), 2)]);
        let b = &p(&[1, 1]) * &(&p(&[0, 1]) * &p(&[0, 1]));
        let d = b.squarefree_decomposition();
        assert_eq!(d, vec![(p(&[1, 1]), 1), (p(&[0, 1]), 2)]);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = QPoly::new(vec![q_frac(1, 3), q(-2), q(0), q(5)]);
        let pts: Vec<_> = (0..4).map(|i| (q(i), f.eval(&q(i)))).collect();
        assert_eq!(QPoly::interpolate(&pts), f);
    }

    #[test]
    fn primitive_integer_normalizes_sign_and_content() {
        let f = QPoly::new(vec![q_frac(1, 2), q_frac(-3, 4)]);
        let v = f.to_primitive_integer();
        assert_eq!(v, vec![BigInt::from(-2), BigInt::from(3)]);
    }
}
