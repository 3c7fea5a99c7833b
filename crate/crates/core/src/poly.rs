//! Univariate polynomials over the coefficient field `K`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::factor::{factor_q, rational_roots};
use crate::arith::{q, QPoly, Q};
use crate::field::{AlgebraicNumber, Field, KElem};
use crate::numeric::ball::two_pow_neg;
use crate::numeric::CBall;

#[derive(Clone)]
pub struct Poly {
    field: Field,
    c: Vec<KElem>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}
impl Eq for Poly {}

fn trim(mut c: Vec<KElem>) -> Vec<KElem> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

impl Poly {
    pub fn new(field: &Field, c: Vec<KElem>) -> Self {
        Poly { field: field.clone(), c: trim(c) }
    }
    pub fn zero(field: &Field) -> Self {
        Poly { field: field.clone(), c: vec![] }
    }
    pub fn one(field: &Field) -> Self {
        Self::constant(KElem::one(field))
    }
    pub fn constant(x: KElem) -> Self {
        let f = x.field().clone();
        Poly::new(&f, vec![x])
    }
    pub fn x(field: &Field) -> Self {
        Poly::new(field, vec![KElem::zero(field), KElem::one(field)])
    }
    pub fn monomial(x: KElem, k: usize) -> Self {
        let f = x.field().clone();
        let mut c = vec![KElem::zero(&f); k + 1];
        c[k] = x;
        Poly::new(&f, c)
    }
    /// `z - a`
    pub fn linear_root(a: &KElem) -> Self {
        let f = a.field().clone();
        Poly::new(&f, vec![-a, KElem::one(&f)])
    }
    pub fn from_qpoly(field: &Field, p: &QPoly) -> Self {
        Poly::new(field, p.coeffs().iter().map(|x| KElem::from_q(field, x.clone())).collect())
    }
    pub fn from_i64s(field: &Field, c: &[i64]) -> Self {
        Self::from_qpoly(field, &QPoly::from_i64s(c))
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    /// Degree, with the zero polynomial reported as 0.
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }
    pub fn coeffs(&self) -> &[KElem] {
        &self.c
    }
    pub fn coeff(&self, k: usize) -> KElem {
        self.c.get(k).cloned().unwrap_or_else(|| KElem::zero(&self.field))
    }
    pub fn lc(&self) -> KElem {
        self.c.last().cloned().unwrap_or_else(|| KElem::zero(&self.field))
    }
    pub fn scale(&self, s: &KElem) -> Self {
        if s.is_zero() {
            return Self::zero(&self.field);
        }
        Poly { field: self.field.clone(), c: self.c.iter().map(|x| x * s).collect() }
    }
    pub fn scale_q(&self, s: &Q) -> Self {
        Poly::new(&self.field, self.c.iter().map(|x| x.scale(s)).collect())
    }
    pub fn monic(&self) -> Self {
        if self.is_zero() || self.lc().is_one() {
            return self.clone();
        }
        self.scale(&self.lc().inv().unwrap())
    }
    /// Multiplies by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![KElem::zero(&self.field); k];
        c.extend(self.c.iter().cloned());
        Poly { field: self.field.clone(), c }
    }
    pub fn valuation(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.c.len() < d.c.len() {
            return (Poly::zero(&self.field), self.clone());
        }
        let dd = d.deg();
        let inv = d.lc().inv().unwrap();
        let mut r = self.c.clone();
        let mut quo = vec![KElem::zero(&self.field); self.c.len() - dd];
        for i in (0..quo.len()).rev() {
            let t = &r[i + dd] * &inv;
            if t.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&t * dj);
            }
            quo[i] = t;
        }
        r.truncate(dd);
        (Poly::new(&self.field, quo), Poly::new(&self.field, r))
    }
    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }
    /// Quotient of an exact division; panics if the remainder is nonzero.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (qq, r) = self.div_rem(d);
        assert!(r.is_zero(), "exact_div: nonzero remainder");
        qq
    }
    pub fn divides(&self, o: &Poly) -> bool {
        o.rem(self).is_zero()
    }
    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut a = a.monic();
        let mut b = b.monic();
        while !b.is_zero() {
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a
    }
    /// `(g, s, t)` with `s a + t b = g` monic.
    pub fn xgcd(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let f = &a.field;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
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
        let inv = r0.lc().inv().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }
    /// Inverse of `self` modulo `m`, if coprime.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = Poly::xgcd(&self.rem(m), m);
        (g.deg() == 0 && !g.is_zero()).then(|| s.rem(m))
    }
    pub fn lcm(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero(&a.field);
        }
        (a * &b.exact_div(&Poly::gcd(a, b))).monic()
    }
    pub fn derivative(&self) -> Poly {
        Poly::new(
            &self.field,
            self.c.iter().enumerate().skip(1).map(|(i, x)| x.scale(&q(i as i64))).collect(),
        )
    }
    pub fn eval(&self, x: &KElem) -> KElem {
        let mut acc = KElem::zero(&self.field);
        for c in self.c.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }
    /// `self(other)`
    pub fn compose(&self, other: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for c in self.c.iter().rev() {
            acc = &(&acc * other) + &Poly::constant(c.clone());
        }
        acc
    }
    /// `self(z + a)`
    pub fn shift(&self, a: &KElem) -> Poly {
        self.compose(&Poly::new(&self.field, vec![a.clone(), KElem::one(&self.field)]))
    }
    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
    /// Taylor coefficients at `a`: `self(a + w) = sum c_k w^k`.
    pub fn taylor_at(&self, a: &KElem) -> Vec<KElem> {
        // Repeated synthetic division by (z - a).
        let mut cur = self.c.clone();
        let mut out = Vec::with_capacity(cur.len());
        while !cur.is_empty() {
            let n = cur.len();
            let mut acc = KElem::zero(&self.field);
            let mut quo = vec![KElem::zero(&self.field); n - 1];
            for i in (0..n).rev() {
                acc = &(&acc * a) + &cur[i];
                if i > 0 {
                    quo[i - 1] = acc.clone();
                }
            }
            out.push(acc);
            cur = quo;
        }
        out
    }
    /// Squarefree decomposition (Yun): `self = lc * prod s_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = Poly::gcd(&f, &df);
        let mut b = f.exact_div(&a0);
        let mut c = df.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.deg() > 0 {
            let a = Poly::gcd(&b, &d);
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
    pub fn squarefree_part(&self) -> Poly {
        if self.deg() == 0 {
            return self.monic();
        }
        self.exact_div(&Poly::gcd(self, &self.derivative())).monic()
    }
    /// Writes `self = sum_i b^i u_i(z)` and returns the rational polynomials `u_i`.
    pub fn coordinate_polys(&self) -> Vec<QPoly> {
        let d = self.field.degree();
        (0..d)
            .map(|i| QPoly::new(self.c.iter().map(|x| x.coords().get(i).cloned().unwrap_or_default()).collect()))
            .collect()
    }
    pub fn to_qpoly(&self) -> Option<QPoly> {
        self.c.iter().map(|x| x.as_rational()).collect::<Option<Vec<_>>>().map(QPoly::new)
    }
    /// Rational roots of `self` (each once).
    pub fn rational_roots(&self) -> Vec<Q> {
        if self.is_zero() {
            return vec![];
        }
        let g = self.coordinate_polys().iter().fold(QPoly::zero(), |acc, u| QPoly::gcd(&acc, u));
        if g.deg() == 0 {
            return vec![];
        }
        rational_roots(&g)
    }
    /// Integer roots of `self` (each once), ascending.
    pub fn integer_roots(&self) -> Vec<num_bigint::BigInt> {
        self.rational_roots().into_iter().filter(|r| r.is_integer()).map(|r| r.to_integer()).collect()
    }
    /// `N(z) = Res_y(p(y), self(y, z))`, the norm down to `Q[z]`.
    pub fn norm(&self) -> QPoly {
        if self.field.is_rational() {
            return self.to_qpoly().unwrap();
        }
        let p = self.field.min_poly();
        let n = self.deg() * self.field.degree();
        let pts: Vec<(Q, Q)> = (0..=n as i64)
            .map(|t| {
                let v = self.eval(&KElem::from_i64(&self.field, t));
                (q(t), QPoly::resultant(p, &v.to_qpoly()))
            })
            .collect();
        QPoly::interpolate(&pts)
    }
    /// Maps coefficients into another field via the image of the generator.
    pub fn embed(&self, gen_image: &KElem) -> Poly {
        Poly::new(gen_image.field(), self.c.iter().map(|x| x.embed(gen_image)).collect())
    }
    /// Enclosure of `self(z)` for `z` in the disk.
    pub fn eval_ball(&self, z: &CBall, prec: u64) -> CBall {
        let t = two_pow_neg(prec);
        let mut acc = CBall::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(z).add(&c.to_ball(&t)).round(prec);
        }
        acc
    }
    pub fn cmp_lex(&self, o: &Poly) -> std::cmp::Ordering {
        self.deg().cmp(&o.deg()).then_with(|| {
            for (a, b) in self.c.iter().zip(&o.c) {
                match a.cmp_lex(b) {
                    std::cmp::Ordering::Equal => {}
                    x => return x,
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

/// Monic irreducible factors over `K` of a squarefree polynomial (Trager's norm method).
pub fn factor_squarefree_over_k(u: &Poly) -> Vec<Poly> {
    let f = u.field().clone();
    if u.deg() == 0 {
        return vec![];
    }
    if f.is_rational() {
        return factor_q(&u.to_qpoly().unwrap())
            .into_iter()
            .map(|(g, _)| Poly::from_qpoly(&f, &g))
            .collect();
    }
    let u = u.monic();
    if u.deg() == 1 {
        return vec![u];
    }
    let beta = KElem::generator(&f);
    for s in shifts() {
        // v(z) = u(z - s b)
        let sb = beta.scale(&q(s));
        let v = u.shift(&(-&sb));
        let n = v.norm();
        if !n.is_squarefree() {
            continue;
        }
        let mut out: Vec<Poly> = factor_q(&n)
            .into_iter()
            .map(|(g, _)| {
                let h = Poly::gcd(&v, &Poly::from_qpoly(&f, &g));
                h.shift(&sb).monic()
            })
            .filter(|h| h.deg() > 0)
            .collect();
        out.sort_by(|a, b| a.cmp_lex(b));
        debug_assert_eq!(out.iter().map(|h| h.deg()).sum::<usize>(), u.deg());
        return out;
    }
    unreachable!()
}

fn shifts() -> impl Iterator<Item = i64> {
    (0..).map(|k: i64| if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 })
}

/// Monic irreducible factors over `K` with multiplicity.
pub fn factor_over_k(u: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    for (s, m) in u.squarefree_decomposition() {
        for h in factor_squarefree_over_k(&s) {
            out.push((h, m));
        }
    }
    out
}

/// The complex roots of a `K`-irreducible `h`, as algebraic numbers determined
/// over `Q` (polynomial = squarefree part of the norm).
pub fn roots_of_irreducible(h: &Poly) -> Vec<AlgebraicNumber> {
    let g = h.norm().squarefree_part();
    let candidates = AlgebraicNumber::roots_of_irreducible(&g);
    if candidates.len() == h.deg() {
        return candidates;
    }
    // Keep the roots of g at which h does not vanish numerically; refine until
    // exactly deg h survive.
    let mut bits = 24u64;
    loop {
        let t = two_pow_neg(bits);
        let keep: Vec<AlgebraicNumber> = candidates
            .iter()
            .map(|a| a.refine(&t))
            .filter(|a| h.eval_ball(a.ball(), bits + 8).contains_zero())
            .collect();
        if keep.len() == h.deg() {
            return keep;
        }
        assert!(keep.len() > h.deg(), "root selection lost a root");
        bits *= 2;
    }
}

/// One entry of a root set: a `K`-irreducible factor, its roots and multiplicity.
#[derive(Clone, Debug)]
pub struct RootGroup {
    pub factor: Poly,
    pub roots: Vec<AlgebraicNumber>,
    pub multiplicity: usize,
}

/// All complex roots of `u` with multiplicities, grouped by irreducible factor over `K`.
pub fn roots_with_multiplicity(u: &Poly) -> Vec<RootGroup> {
    assert!(!u.is_zero());
    factor_over_k(u)
        .into_iter()
        .map(|(h, m)| RootGroup { roots: roots_of_irreducible(&h), factor: h, multiplicity: m })
        .collect()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(&self.field, c)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { field: self.field.clone(), c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut c = vec![KElem::zero(&self.field); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = &c[i + j] + &(a * b);
                }
            }
        }
        Poly::new(&self.field, c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (i, x) in self.c.iter().enumerate().rev() {
            if x.is_zero() {
                continue;
            }
            let coef = if x.coords().len() > 1 { format!("({x})") } else { x.to_string() };
            parts.push(match i {
                0 => coef,
                1 if x.is_one() => "z".to_string(),
                1 => format!("{coef}*z"),
                _ if x.is_one() => format!("z^{i}"),
                _ => format!("{coef}*z^{i}"),
            });
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
