//! Adjoining an algebraic number to `K` through a primitive element.

use crate::arith::factor::factor_q;
use crate::arith::{q, QPoly, Q};
use crate::field::{AlgebraicNumber, Field, KElem, NumberField};
use crate::numeric::ball::two_pow_neg;
use crate::numeric::isolate_roots;
use crate::poly::{factor_squarefree_over_k, Poly};

/// `L = K(alpha)` together with the images of the generator of `K` and of `alpha`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub field: Field,
    pub beta: KElem,
    pub alpha: KElem,
}

impl Extension {
    pub fn embed(&self, x: &KElem) -> KElem {
        x.embed(&self.beta)
    }
    pub fn embed_poly(&self, p: &Poly) -> Poly {
        p.embed(&self.beta)
    }
}

/// The irreducible factor over `K` of `alpha`'s minimal polynomial that vanishes at `alpha`.
pub fn minimal_polynomial_over_k(k: &Field, alpha: &AlgebraicNumber) -> Poly {
    let a = Poly::from_qpoly(k, alpha.poly());
    let factors = factor_squarefree_over_k(&a);
    if factors.len() == 1 {
        return factors.into_iter().next().unwrap();
    }
    let mut bits = 32u64;
    loop {
        let ball = alpha.refine(&two_pow_neg(bits)).ball().clone();
        let hits: Vec<&Poly> = factors.iter().filter(|h| h.eval_ball(&ball, bits + 8).contains_zero()).collect();
        if hits.len() == 1 {
            return hits[0].clone();
        }
        assert!(!hits.is_empty(), "no factor vanishes at the algebraic number");
        bits *= 2;
    }
}

/// Builds `K(alpha)`. When `alpha` already lies in `K` the field is `K` itself.
pub fn compose_extension(k: &Field, alpha: &AlgebraicNumber) -> Extension {
    if let Some(r) = alpha.as_rational() {
        return Extension { field: k.clone(), beta: KElem::generator(k), alpha: KElem::from_q(k, r) };
    }
    if k.is_rational() {
        let l = NumberField::from_isolated(alpha.poly().clone(), alpha.ball().clone(), alpha.is_real());
        return Extension { beta: KElem::zero(&l), alpha: KElem::generator(&l), field: l };
    }
    let h = minimal_polynomial_over_k(k, alpha);
    if h.deg() == 1 {
        let a = (-&h.coeff(0)).div(&h.coeff(1)).unwrap();
        return Extension { field: k.clone(), beta: KElem::generator(k), alpha: a };
    }
    let p = k.min_poly();
    let a = alpha.poly();
    let n = a.deg();
    let d = p.deg();
    for kk in 1i64.. {
        // R(x) = Res_y(p(y), kk^n A((x - y)/kk)); its roots are b_i + kk a_j.
        let scaled: Vec<Q> = (0..=n).map(|i| a.coeff(i) * q(kk).pow((n - i) as i32)).collect();
        let scaled = QPoly::new(scaled);
        let pts: Vec<(Q, Q)> = (0..=(n * d) as i64)
            .map(|t| {
                let inner = QPoly::new(vec![q(t), q(-1)]);
                (q(t), QPoly::resultant(p, &scaled.compose(&inner)))
            })
            .collect();
        let r = QPoly::interpolate(&pts);
        if !r.is_squarefree() {
            continue;
        }
        let factors: Vec<QPoly> = factor_q(&r).into_iter().map(|(g, _)| g).collect();
        let (g, delta_ball, real) = select_factor(&factors, k, alpha, kk);
        let l = NumberField::from_isolated(g, delta_ball, real);
        // b_L is the unique common root of p(y) and A((delta - y)/kk).
        let delta = KElem::generator(&l);
        let inv_k = Q::from_integer(1.into()) / q(kk);
        let lin = Poly::new(&l, vec![delta.scale(&inv_k), KElem::from_q(&l, -inv_k.clone())]);
        let a_l = Poly::from_qpoly(&l, a).compose(&lin);
        let gg = Poly::gcd(&Poly::from_qpoly(&l, p), &a_l);
        assert_eq!(gg.deg(), 1, "primitive element: common root not unique");
        let beta = -&gg.coeff(0);
        let alpha_l = (&delta - &beta).scale(&inv_k);
        assert!(Poly::from_qpoly(&l, p).eval(&beta).is_zero());
        assert!(Poly::from_qpoly(&l, a).eval(&alpha_l).is_zero());
        return Extension { field: l, beta, alpha: alpha_l };
    }
    unreachable!()
}

/// Picks the factor of `R` vanishing at `b + kk alpha`, with an isolating disk.
fn select_factor(
    factors: &[QPoly],
    k: &Field,
    alpha: &AlgebraicNumber,
    kk: i64,
) -> (QPoly, crate::numeric::CBall, bool) {
    let mut bits = 32u64;
    loop {
        let t = two_pow_neg(bits);
        let b = KElem::generator(k).to_ball(&t);
        let a = alpha.refine(&t).ball().scale(&q(kk));
        let delta = b.add(&a);
        let mut found = Vec::new();
        for g in factors {
            for root in isolate_roots(g, Some(&t)) {
                if root.ball.overlaps(&delta) {
                    found.push((g.clone(), root.ball, root.real));
                }
            }
        }
        if found.len() == 1 {
            return found.pop().unwrap();
        }
        assert!(!found.is_empty(), "primitive element not located");
        bits *= 2;
    }
}
