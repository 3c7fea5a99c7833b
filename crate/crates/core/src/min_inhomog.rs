//! The minimal inhomogeneous relation `c = sum_{j<=s} Q_j f^(j)`, the
//! transcendence verdict and the first-order system `v' = B v` for
//! `v = (1, f, ..., f^(s-1))`.

use std::cmp::Ordering;

use crate::diffop::DiffOp;
use crate::error::Result;
use crate::field::{Field, KElem};
use crate::poly::Poly;
use crate::ratfun::RatFun;
use crate::rational_solutions::{rational_solution_basis, LinearSystem};
use crate::series::{combination_constant_term, Series};

#[derive(Clone, Debug)]
pub struct InhomEq {
    pub s: usize,
    /// `Q_0, ..., Q_s`.
    pub q: Vec<RatFun>,
    pub c: KElem,
    /// The rational solution of the companion system, when the order dropped.
    pub solution: Option<Vec<RatFun>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// `f` is this polynomial; its values at algebraic points are algebraic.
    Polynomial(Poly),
    Transcendental,
}

/// `v' = B v` with `v = (1, f, ..., f^(s-1))`; `u` holds `u_0, ..., u_{s+1}`
/// so that the last row of `B` is `(u_1/u_0, ..., u_{s+1}/u_0)`.
#[derive(Clone, Debug)]
pub struct SystemMatrix {
    pub b: Vec<Vec<RatFun>>,
    pub u: Vec<Poly>,
}

impl SystemMatrix {
    pub fn size(&self) -> usize {
        self.b.len()
    }
    pub fn field(&self) -> &Field {
        self.u[0].field()
    }
    pub fn u0(&self) -> &Poly {
        &self.u[0]
    }
}

/// The companion system whose rational solutions `(Q_0, ..., Q_{r-1})` make
/// `sum Q_j f^(j)` constant for every solution `f` of `l`:
/// `Q_0' = P_0 Q_{r-1}`, `Q_j' = -Q_{j-1} + P_j Q_{r-1}` with `P_j = a_j / a_r`.
pub fn companion_system(l: &DiffOp) -> LinearSystem {
    let field = l.field().clone();
    let r = l.order();
    let lead = l.lc();
    let mut a = vec![vec![RatFun::zero(&field); r]; r];
    for j in 0..r {
        a[j][r - 1] = RatFun::new(l.coeff(j), lead.clone());
        if j > 0 {
            a[j][j - 1] = RatFun::constant(KElem::from_i64(&field, -1));
        }
    }
    LinearSystem::new(a)
}

fn cmp_ratfun(a: &RatFun, b: &RatFun) -> Ordering {
    a.den().cmp_lex(b.den()).then_with(|| a.num().cmp_lex(b.num()))
}

/// Deterministic choice among rational solutions: smallest common denominator
/// degree, then lexicographic.
fn choose_solution(mut basis: Vec<Vec<RatFun>>) -> Option<Vec<RatFun>> {
    basis.sort_by(|x, y| {
        let dx: usize = x.iter().map(|r| r.den().deg()).max().unwrap_or(0);
        let dy: usize = y.iter().map(|r| r.den().deg()).max().unwrap_or(0);
        dx.cmp(&dy).then_with(|| {
            x.iter().zip(y).map(|(a, b)| cmp_ratfun(a, b)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
        })
    });
    basis.into_iter().next()
}

/// Order `r - 1` relation if the companion system of `l_min` has a rational
/// solution, otherwise `l_min` itself with `c = 0`. `check` non-constant
/// Laurent coefficients are required to vanish when reading off `c`.
pub fn minimal_inhomogeneous(l_min: &DiffOp, f: &Series, check: usize) -> Result<InhomEq> {
    let field = l_min.field().clone();
    let r = l_min.order();
    if let Some(y) = choose_solution(rational_solution_basis(&companion_system(l_min))) {
        let mut q = y.clone();
        while q.len() > 1 && q.last().unwrap().is_zero() {
            q.pop();
        }
        let c = combination_constant_term(&q, f, check)?;
        return Ok(InhomEq { s: q.len() - 1, q, c, solution: Some(y) });
    }
    let q = l_min.coeffs().iter().map(|p| RatFun::from_poly(p.clone())).collect::<Vec<_>>();
    debug_assert_eq!(q.len(), r + 1);
    Ok(InhomEq { s: r, q, c: KElem::zero(&field), solution: None })
}

pub fn transcendence_verdict(eq: &InhomEq) -> Verdict {
    if eq.s == 0 {
        // c = Q_0 f.
        let f = RatFun::constant(eq.c.clone()).div(&eq.q[0]).expect("Q_0 is nonzero");
        assert!(f.is_polynomial(), "order-0 relation must give a polynomial");
        Verdict::Polynomial(f.num().clone())
    } else {
        Verdict::Transcendental
    }
}

/// The `(s+1) x (s+1)` system for `(1, f, ..., f^(s-1))`; requires `s >= 1`.
pub fn normalize(eq: &InhomEq) -> SystemMatrix {
    let s = eq.s;
    assert!(s >= 1);
    let field = eq.c.field().clone();
    let qs = &eq.q[s];
    let mut last = vec![RatFun::constant(eq.c.clone()).div(qs).unwrap()];
    for j in 0..s {
        last.push((-&eq.q[j]).div(qs).unwrap());
    }
    let u0 = last.iter().fold(Poly::one(&field), |acc, x| Poly::lcm(&acc, x.den())).monic();
    let mut u = vec![u0.clone()];
    u.extend(last.iter().map(|x| x.mul_poly(&u0).num().clone()));
    let mut b = vec![vec![RatFun::zero(&field); s + 1]; s + 1];
    for i in 1..s {
        b[i][i + 1] = RatFun::one(&field);
    }
    b[s] = last;
    SystemMatrix { b, u }
}
