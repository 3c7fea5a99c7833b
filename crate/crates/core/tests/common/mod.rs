#![allow(dead_code)]

use std::path::PathBuf;

use efa_core::arith::{q, q_frac, QPoly, Q};
use efa_core::diffop::{to_recurrence, DiffOp};
use efa_core::extension::compose_extension;
use efa_core::input::{elem_doc, parse_input, poly_doc, validate, ApproxDoc, EFunctionInput, FieldDoc, InputDoc};
use efa_core::numeric::Cq;
use efa_core::poly::{factor_over_k, roots_of_irreducible};
use efa_core::{AlgebraicNumber, Field, KElem, NumberField, Poly};
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> EFunctionInput {
    parse_input(&fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub const FIXTURES: [&str; 8] = [
    "exp.json",
    "zm1exp.json",
    "polynomial.json",
    "example1.json",
    "example1_printed.json",
    "example2.json",
    "example3.json",
    "example3_nonminimal.json",
];

pub fn qpoly(field: &Field, c: &[Q]) -> Poly {
    Poly::new(field, c.iter().map(|x| KElem::from_q(field, x.clone())).collect())
}

pub fn sqrt2_field() -> Field {
    NumberField::new(&QPoly::new(vec![q(-2), q(0), q(1)]), &Cq::from_f64(1.41, 0.0)).unwrap()
}

/// `f = sum q_i(z) exp(lambda_i z)` with distinct `lambda_i`.
#[derive(Clone, Debug)]
pub struct ExpPoly {
    pub field: Field,
    pub terms: Vec<(KElem, Poly)>,
}

fn factorial(n: usize) -> Q {
    (1..=n).fold(q(1), |acc, k| acc * q(k as i64))
}

impl ExpPoly {
    /// `prod (D - lambda_i)^(deg q_i + 1)`.
    pub fn operator(&self) -> DiffOp {
        let mut l = DiffOp::one(&self.field);
        for (lam, p) in &self.terms {
            let factor = DiffOp::new(&self.field, vec![Poly::constant(-lam), Poly::one(&self.field)]);
            for _ in 0..=p.deg() {
                l = factor.mul(&l);
            }
        }
        l
    }

    pub fn coefficients(&self, len: usize) -> Vec<KElem> {
        (0..len)
            .map(|n| {
                let mut s = KElem::zero(&self.field);
                for (lam, p) in &self.terms {
                    for (k, c) in p.coeffs().iter().enumerate().take(n + 1) {
                        let t = &lam.pow((n - k) as u32) * c;
                        s = &s + &t.scale(&(q(1) / factorial(n - k)));
                    }
                }
                s
            })
            .collect()
    }

    pub fn input_with(&self, op: &DiffOp) -> EFunctionInput {
        let m = to_recurrence(op).m.max(1);
        let field = if self.field.is_rational() {
            None
        } else {
            Some(FieldDoc {
                min_poly: vec!["-2".into(), "0".into(), "1".into()],
                root_approx: ApproxDoc { re: "1.41".into(), im: "0".into() },
            })
        };
        let doc = InputDoc {
            name: None,
            field,
            operator: op.coeffs().iter().map(poly_doc).collect(),
            initial_coeffs: self.coefficients(m).iter().map(elem_doc).collect(),
            oracle: Some(true),
        };
        validate(doc).unwrap()
    }

    pub fn input(&self) -> EFunctionInput {
        self.input_with(&self.operator())
    }

    /// Nonzero algebraic points where `f` is algebraic, with the value there:
    /// the common roots of the `q_i` with `lambda_i != 0`, value `q_0(alpha)`.
    pub fn expected_exceptional(&self) -> Vec<(AlgebraicNumber, AlgebraicNumber)> {
        let mut g = Poly::zero(&self.field);
        let mut v = Poly::zero(&self.field);
        for (lam, p) in &self.terms {
            if lam.is_zero() {
                v = &v + p;
            } else {
                g = Poly::gcd(&g, p);
            }
        }
        let mut out = Vec::new();
        if g.deg() == 0 {
            return out;
        }
        for (h, _) in factor_over_k(&g) {
            if h.coeff(0).is_zero() {
                continue;
            }
            for alpha in roots_of_irreducible(&h) {
                let ext = compose_extension(&self.field, &alpha);
                let val = AlgebraicNumber::from_kelem(&ext.embed_poly(&v).eval(&ext.alpha));
                out.push((alpha, val));
            }
        }
        out
    }
}

fn small_q<R: Rng>(rng: &mut R) -> Q {
    const CHOICES: [(i64, i64); 9] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1), (1, 2), (-1, 2), (3, 2), (-3, 1)];
    let (n, d) = CHOICES[rng.gen_range(0..CHOICES.len())];
    q_frac(n, d)
}

fn random_poly<R: Rng>(rng: &mut R, field: &Field, deg: usize) -> Poly {
    let mut c: Vec<KElem> = (0..=deg).map(|_| KElem::from_i64(field, rng.gen_range(-3..=3))).collect();
    while c[deg].is_zero() {
        c[deg] = KElem::from_i64(field, rng.gen_range(-3..=3));
    }
    Poly::new(field, c)
}

/// A random instance: 2 or 3 terms, total operator order at most `max_order`,
/// over Q or Q(sqrt 2); about half the time the exponential terms share a root.
pub fn random_exp_poly<R: Rng>(rng: &mut R, max_order: usize) -> ExpPoly {
    let field = if rng.gen_bool(0.25) { sqrt2_field() } else { NumberField::rational() };
    let n_terms = rng.gen_range(2..=3);
    let mut lambdas: Vec<KElem> = Vec::new();
    if rng.gen_bool(0.3) {
        lambdas.push(KElem::zero(&field));
    }
    while lambdas.len() < n_terms {
        let mut lam = KElem::from_q(&field, small_q(rng));
        if !field.is_rational() && rng.gen_bool(0.5) {
            lam = &lam + &KElem::generator(&field).scale(&q(rng.gen_range(1..=2)));
        }
        if !lambdas.contains(&lam) {
            lambdas.push(lam);
        }
    }
    let shared = if rng.gen_bool(0.5) {
        let a = if !field.is_rational() && rng.gen_bool(0.5) {
            KElem::generator(&field)
        } else {
            KElem::from_q(&field, small_q(rng))
        };
        Some(Poly::linear_root(&a))
    } else {
        None
    };
    let budget = max_order.max(2 * n_terms);
    let mut order = 0;
    let mut terms = Vec::new();
    for (i, lam) in lambdas.into_iter().enumerate() {
        let left = n_terms - i - 1;
        let room = budget - order - left;
        let base = match (&shared, lam.is_zero()) {
            (Some(h), false) if room >= 2 => {
                let extra = rng.gen_range(0..=(room - 2).min(1));
                h * &random_poly(rng, &field, extra)
            }
            _ => {
                let deg = rng.gen_range(0..=(room - 1).min(2));
                random_poly(rng, &field, deg)
            }
        };
        order += base.deg() + 1;
        terms.push((lam, base));
    }
    ExpPoly { field, terms }
}

/// Unordered comparison of `(point, value)` sets.
pub fn same_point_set(got: &[(AlgebraicNumber, AlgebraicNumber)], want: &[(AlgebraicNumber, AlgebraicNumber)]) -> bool {
    got.len() == want.len()
        && want.iter().all(|(a, v)| got.iter().any(|(b, w)| a.same_value(b) && v.same_value(w)))
}

pub fn rational_points(pts: &[(Q, Q)]) -> Vec<(AlgebraicNumber, AlgebraicNumber)> {
    pts.iter().map(|(a, v)| (AlgebraicNumber::rational(a.clone()), AlgebraicNumber::rational(v.clone()))).collect()
}
