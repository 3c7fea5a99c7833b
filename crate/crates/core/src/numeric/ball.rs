//! Complex numbers with rational parts, and closed complex disks (balls) for
//! rigorous enclosures.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{q_from_f64, q_to_decimal, q_to_f64, round_dyadic, QPoly, Q};

/// Exact complex rational.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cq {
    pub re: Q,
    pub im: Q,
}

impl Cq {
    pub fn new(re: Q, im: Q) -> Self {
        Cq { re, im }
    }
    pub fn real(re: Q) -> Self {
        Cq { re, im: Q::zero() }
    }
    pub fn zero() -> Self {
        Cq::real(Q::zero())
    }
    pub fn one() -> Self {
        Cq::real(Q::one())
    }
    pub fn from_f64(re: f64, im: f64) -> Self {
        Cq::new(q_from_f64(re), q_from_f64(im))
    }
    pub fn to_f64(&self) -> (f64, f64) {
        (q_to_f64(&self.re), q_to_f64(&self.im))
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn add(&self, o: &Cq) -> Cq {
        Cq::new(&self.re + &o.re, &self.im + &o.im)
    }
    pub fn sub(&self, o: &Cq) -> Cq {
        Cq::new(&self.re - &o.re, &self.im - &o.im)
    }
    pub fn neg(&self) -> Cq {
        Cq::new(-&self.re, -&self.im)
    }
    pub fn mul(&self, o: &Cq) -> Cq {
        Cq::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    pub fn scale(&self, s: &Q) -> Cq {
        Cq::new(&self.re * s, &self.im * s)
    }
    pub fn conj(&self) -> Cq {
        Cq::new(self.re.clone(), -&self.im)
    }
    /// `|z|^2`, exact.
    pub fn norm_sq(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }
    /// A cheap upper bound on `|z|` (within a factor `sqrt 2`).
    pub fn abs_upper(&self) -> Q {
        self.re.abs() + self.im.abs()
    }
    pub fn inv(&self) -> Option<Cq> {
        let n = self.norm_sq();
        if n.is_zero() {
            return None;
        }
        Some(Cq::new(&self.re / &n, -&self.im / &n))
    }
    pub fn div(&self, o: &Cq) -> Option<Cq> {
        o.inv().map(|i| self.mul(&i))
    }
    pub fn round(&self, prec: u64) -> Cq {
        Cq::new(round_dyadic(&self.re, prec), round_dyadic(&self.im, prec))
    }
    pub fn eval_qpoly(f: &QPoly, z: &Cq) -> Cq {
        let mut acc = Cq::zero();
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(z);
            acc.re += c;
        }
        acc
    }
}

/// Closed disk `{ z : |z - center| <= rad }`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CBall {
    pub center: Cq,
    pub rad: Q,
}

fn ceil_dyadic(x: &Q, prec: u64) -> Q {
    let scale = BigInt::one() << prec;
    let s = (x * Q::from_integer(scale.clone())).ceil().to_integer();
    Q::new(s, scale)
}

impl CBall {
    pub fn new(center: Cq, rad: Q) -> Self {
        debug_assert!(!rad.is_negative());
        CBall { center, rad }
    }
    pub fn exact(center: Cq) -> Self {
        CBall { center, rad: Q::zero() }
    }
    pub fn from_q(x: Q) -> Self {
        CBall::exact(Cq::real(x))
    }
    pub fn zero() -> Self {
        CBall::from_q(Q::zero())
    }
    pub fn one() -> Self {
        CBall::from_q(Q::one())
    }
    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }
    pub fn add(&self, o: &CBall) -> CBall {
        CBall::new(self.center.add(&o.center), &self.rad + &o.rad)
    }
    pub fn sub(&self, o: &CBall) -> CBall {
        CBall::new(self.center.sub(&o.center), &self.rad + &o.rad)
    }
    pub fn neg(&self) -> CBall {
        CBall::new(self.center.neg(), self.rad.clone())
    }
    pub fn mul(&self, o: &CBall) -> CBall {
        let rad = self.center.abs_upper() * &o.rad + o.center.abs_upper() * &self.rad + &self.rad * &o.rad;
        CBall::new(self.center.mul(&o.center), rad)
    }
    pub fn scale(&self, s: &Q) -> CBall {
        CBall::new(self.center.scale(s), &self.rad * s.abs())
    }
    pub fn add_q(&self, s: &Q) -> CBall {
        let mut c = self.center.clone();
        c.re += s;
        CBall::new(c, self.rad.clone())
    }
    /// Exact image of the disk under `z -> 1/z`; `None` if it may contain 0.
    pub fn inv(&self) -> Option<CBall> {
        let d = self.center.norm_sq() - &self.rad * &self.rad;
        if !d.is_positive() {
            return None;
        }
        let c = self.center.conj();
        Some(CBall::new(Cq::new(&c.re / &d, &c.im / &d), &self.rad / &d))
    }
    pub fn div(&self, o: &CBall) -> Option<CBall> {
        o.inv().map(|i| self.mul(&i))
    }
    pub fn pow(&self, mut e: u32) -> CBall {
        let mut base = self.clone();
        let mut acc = CBall::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
    /// Rounds the center to `2^-prec` and the radius upward, keeping containment.
    pub fn round(&self, prec: u64) -> CBall {
        let c = self.center.round(prec);
        let err = (&c.re - &self.center.re).abs() + (&c.im - &self.center.im).abs();
        let rad = ceil_dyadic(&(&self.rad + err), prec);
        CBall::new(c, rad)
    }
    pub fn contains_zero(&self) -> bool {
        self.center.norm_sq() <= &self.rad * &self.rad
    }
    pub fn contains_point(&self, z: &Cq) -> bool {
        self.center.sub(z).norm_sq() <= &self.rad * &self.rad
    }
    /// True if `o` lies entirely inside `self`.
    pub fn contains(&self, o: &CBall) -> bool {
        if o.rad > self.rad {
            return false;
        }
        let gap = &self.rad - &o.rad;
        self.center.sub(&o.center).norm_sq() <= &gap * &gap
    }
    pub fn overlaps(&self, o: &CBall) -> bool {
        let s = &self.rad + &o.rad;
        self.center.sub(&o.center).norm_sq() <= &s * &s
    }
    pub fn conj(&self) -> CBall {
        CBall::new(self.center.conj(), self.rad.clone())
    }
    pub fn meets_real_axis(&self) -> bool {
        self.center.im.abs() <= self.rad
    }
    /// Horner evaluation of a rational polynomial, rounding every step to `prec` bits.
    pub fn eval_qpoly(f: &QPoly, z: &CBall, prec: u64) -> CBall {
        let mut acc = CBall::zero();
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(z).add_q(c).round(prec);
        }
        acc
    }
    /// Rigorous upper bound for `|z|` over the disk.
    pub fn mag_upper(&self) -> Q {
        self.center.abs_upper() + &self.rad
    }
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = q_to_decimal(&self.center.re, digits);
        if self.center.im.is_zero() {
            return re;
        }
        let im = q_to_decimal(&self.center.im.abs(), digits);
        let sign = if self.center.im.is_negative() { "-" } else { "+" };
        format!("{re} {sign} {im}i")
    }
}

impl fmt::Display for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.center.to_f64();
        write!(f, "[{re:.6e} + {im:.6e}i +/- {:.2e}]", q_to_f64(&self.rad))
    }
}

/// `2^-k` as a rational.
pub fn two_pow_neg(k: u64) -> Q {
    Q::new(BigInt::one(), BigInt::one() << k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, q_frac};

    #[test]
    fn inversion_is_exact_disk_image() {
        let b = CBall::new(Cq::new(q(2), q(0)), q(1));
        let i = b.inv().unwrap();
        // 1/[1,3] = [1/3, 1]: center 2/3, radius 1/3.
        assert_eq!(i.center, Cq::real(q_frac(2, 3)));
        assert_eq!(i.rad, q_frac(1, 3));
        assert!(CBall::new(Cq::zero(), q(1)).inv().is_none());
    }

    #[test]
    fn rounding_keeps_containment() {
        let x = CBall::from_q(q_frac(1, 3));
        let r = x.round(20);
        assert!(r.contains_point(&Cq::real(q_frac(1, 3))));
        assert!(r.rad <= two_pow_neg(19));
    }

    #[test]
    fn multiplication_encloses_products() {
        let a = CBall::new(Cq::new(q(1), q(1)), q_frac(1, 10));
        let b = CBall::new(Cq::new(q(2), q(-1)), q_frac(1, 10));
        let p = a.mul(&b);
        for (da, db) in [((1, 10), (0, 1)), ((-1, 10), (1, 10)), ((0, 1), (-1, 10))] {
            let za = Cq::new(q(1) + q_frac(da.0, da.1), q(1));
            let zb = Cq::new(q(2), q(-1) + q_frac(db.0, db.1));
            assert!(p.contains_point(&za.mul(&zb)));
        }
    }
}
