//! Certified isolation of the complex roots of squarefree rational polynomials.
//!
//! Approximations come from the Aberth iteration (first in `f64`, then in
//! rounded rational arithmetic at growing precision). They are certified with
//! Smith's inclusion theorem: the disks `D(z_i, n |W_i|)`, with `W_i` the
//! Weierstrass corrections, cover all roots and every connected component of
//! `k` disks holds exactly `k` roots. Pairwise disjoint disks therefore isolate.

use num_traits::{Signed, Zero};

use super::ball::{two_pow_neg, CBall, Cq};
use crate::arith::{sqrt_upper, QPoly, Q};

/// One certified root: `ball` contains exactly one root of the polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub ball: CBall,
    /// Proven real: the conjugate disk meets no other disk.
    pub real: bool,
}

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn add(self, o: C64) -> C64 {
        C64 { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: C64) -> C64 {
        C64 { re: self.re - o.re, im: self.im - o.im }
    }
    fn mul(self, o: C64) -> C64 {
        C64 { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64 { re: (self.re * o.re + self.im * o.im) / d, im: (self.im * o.re - self.re * o.im) / d }
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

fn initial_guesses(f: &QPoly) -> Vec<C64> {
    let n = f.deg();
    let lc = crate::arith::q_to_f64(&f.lc());
    let cf: Vec<f64> = f.coeffs().iter().map(crate::arith::q_to_f64).collect();
    let radius = 1.0 + cf[..n].iter().map(|c| (c / lc).abs()).fold(0.0, f64::max);
    let radius = if radius.is_finite() { radius.min(1e150) } else { 1e150 };
    let circle: Vec<C64> = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            C64 { re: radius * t.cos(), im: radius * t.sin() }
        })
        .collect();
    if cf.iter().any(|c| !c.is_finite()) {
        return circle;
    }
    let df: Vec<f64> = (1..=n).map(|i| cf[i] * i as f64).collect();
    let eval = |c: &[f64], z: C64| {
        c.iter().rev().fold(C64 { re: 0.0, im: 0.0 }, |acc, &a| acc.mul(z).add(C64 { re: a, im: 0.0 }))
    };
    let mut z = circle.clone();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let w = eval(&cf, z[i]).div(eval(&df, z[i]));
            let mut s = C64 { re: 0.0, im: 0.0 };
            for j in 0..n {
                if j != i {
                    s = s.add(C64 { re: 1.0, im: 0.0 }.div(z[i].sub(z[j])));
                }
            }
            let corr = w.div(C64 { re: 1.0, im: 0.0 }.sub(w.mul(s)));
            if corr.finite() {
                z[i] = z[i].sub(corr);
                moved = moved.max(corr.abs() / (1.0 + z[i].abs()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    if z.iter().all(|c| c.finite()) {
        z
    } else {
        circle
    }
}

/// One Aberth sweep in rational arithmetic rounded to `prec` bits. Returns the
/// largest correction magnitude (upper bound).
fn aberth_sweep(f: &QPoly, df: &QPoly, z: &mut [Cq], prec: u64) -> Q {
    let n = z.len();
    let mut worst = Q::zero();
    for i in 0..n {
        let fz = Cq::eval_qpoly(f, &z[i]);
        if fz.is_zero() {
            continue;
        }
        let dfz = Cq::eval_qpoly(df, &z[i]);
        let Some(w) = fz.div(&dfz) else {
            // Stationary point: nudge.
            z[i] = z[i].add(&Cq::new(two_pow_neg(prec / 2), two_pow_neg(prec / 2 + 1)));
            worst = Q::from_integer(1.into());
            continue;
        };
        let mut s = Cq::zero();
        for j in 0..n {
            if j != i {
                if let Some(t) = z[i].sub(&z[j]).inv() {
                    s = s.add(&t.round(prec + 8));
                }
            }
        }
        let denom = Cq::one().sub(&w.mul(&s));
        let corr = w.div(&denom).unwrap_or(w);
        let corr = corr.round(prec);
        worst = worst.max(corr.abs_upper());
        z[i] = z[i].sub(&corr);
    }
    worst
}

/// Smith disks for the approximations `z`, or `None` if they are not disjoint.
fn certify(f: &QPoly, z: &[Cq], prec: u64) -> Option<Vec<CBall>> {
    let n = z.len();
    let lc = f.lc();
    let nq = Q::from_integer((n as i64).into());
    let mut balls = Vec::with_capacity(n);
    for i in 0..n {
        let mut prod = Cq::real(lc.clone());
        for j in 0..n {
            if j != i {
                let d = z[i].sub(&z[j]);
                if d.is_zero() {
                    return None;
                }
                prod = prod.mul(&d);
            }
        }
        let w = Cq::eval_qpoly(f, &z[i]).div(&prod)?;
        let r = &nq * sqrt_upper(&w.norm_sq(), 2 * prec + 16);
        balls.push(CBall::new(z[i].clone(), r));
    }
    for i in 0..n {
        for j in i + 1..n {
            if balls[i].overlaps(&balls[j]) {
                return None;
            }
        }
    }
    Some(balls)
}

fn mark_real(balls: Vec<CBall>) -> Vec<IsolatedRoot> {
    let n = balls.len();
    (0..n)
        .map(|i| {
            let c = balls[i].conj();
            let real = balls[i].meets_real_axis() && (0..n).all(|j| j == i || !c.overlaps(&balls[j]));
            IsolatedRoot { ball: balls[i].clone(), real }
        })
        .collect()
}

/// Isolates all roots of a squarefree `f` with `deg f >= 1`. Every returned disk
/// has radius at most `target` (when given).
pub fn isolate_roots(f: &QPoly, target: Option<&Q>) -> Vec<IsolatedRoot> {
    let n = f.deg();
    assert!(n >= 1, "isolate_roots: constant polynomial");
    debug_assert!(f.is_squarefree());
    if n == 1 {
        let r = -f.coeff(0) / f.coeff(1);
        return vec![IsolatedRoot { ball: CBall::from_q(r), real: true }];
    }
    let df = f.derivative();
    let mut z: Vec<Cq> = initial_guesses(f).into_iter().map(|c| Cq::from_f64(c.re, c.im)).collect();
    let mut prec: u64 = 64;
    loop {
        let eps = two_pow_neg(prec.saturating_sub(8));
        for _ in 0..60 {
            let worst = aberth_sweep(f, &df, &mut z, prec);
            if worst <= eps {
                break;
            }
        }
        if let Some(balls) = certify(f, &z, prec) {
            if target.is_none_or(|t| balls.iter().all(|b| &b.rad <= t)) {
                return mark_real(balls);
            }
        }
        prec *= 2;
        assert!(prec <= 1 << 20, "root isolation did not converge");
    }
}

/// Shrinks an isolating disk of a root of squarefree `f` to radius `<= target`.
pub fn refine_root(f: &QPoly, ball: &CBall, target: &Q) -> CBall {
    if ball.rad <= *target {
        return ball.clone();
    }
    if f.deg() == 1 {
        return CBall::from_q(-f.coeff(0) / f.coeff(1));
    }
    let mut t = target.clone();
    loop {
        let roots = isolate_roots(f, Some(&t));
        let hits: Vec<_> = roots.into_iter().filter(|r| r.ball.overlaps(ball)).collect();
        if hits.len() == 1 {
            return hits.into_iter().next().unwrap().ball;
        }
        t = &t / Q::from_integer(1024.into());
        assert!(t.is_positive());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, q_frac};

    #[test]
    fn sqrt_two_to_high_precision() {
        let f = QPoly::from_i64s(&[-2, 0, 1]);
        let t = two_pow_neg(70);
        let roots = isolate_roots(&f, Some(&t));
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| r.real));
        let pos = roots.iter().find(|r| r.ball.center.re.is_positive()).unwrap();
        // 1.41421356237309504880168872... (integer square root of 2*10^40)
        let approx = q_frac(141421356237309504, 100000000000000000);
        assert!((&pos.ball.center.re - approx).abs() < q_frac(1, 1_000_000_000_000_000));
    }

    #[test]
    fn imaginary_unit_not_real() {
        let roots = isolate_roots(&QPoly::from_i64s(&[1, 0, 1]), None);
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| !r.real));
        assert!(roots.iter().any(|r| r.ball.contains_point(&Cq::new(q(0), q(1)))));
    }

    #[test]
    fn clustered_roots_are_separated() {
        // (x - 1)(x - 1 - 10^-12)(x + 3)
        let a = QPoly::linear_root(&q(1));
        let b = QPoly::linear_root(&(q(1) + q_frac(1, 1_000_000_000_000)));
        let c = QPoly::linear_root(&q(-3));
        let f = &(&a * &b) * &c;
        let roots = isolate_roots(&f, None);
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().all(|r| r.real));
    }

    #[test]
    fn refinement_keeps_the_same_root() {
        let f = QPoly::from_i64s(&[-1, -1, 1]); // golden ratio and its conjugate
        let roots = isolate_roots(&f, None);
        let neg = roots.iter().find(|r| r.ball.center.re.is_negative()).unwrap();
        let fine = refine_root(&f, &neg.ball, &two_pow_neg(100));
        assert!(fine.rad <= two_pow_neg(100));
        assert!(fine.center.re.is_negative());
    }
}
