//! Rational solutions of first-order systems `Y' = A Y` over `K(z)`.
//!
//! Each component satisfies a scalar equation (from the cyclic sequence
//! `w_0 = e_i`, `w_{k+1} = w_k' + w_k A`); its local exponents at the finite
//! singularities bound the denominators, its exponents at infinity bound the
//! degrees. The numerators are then found by exact linear algebra over `K`.

use crate::extension::compose_extension;
use crate::field::{Field, KElem};
use crate::linalg::{bareiss, nullspace, poly_kernel_vector};
use crate::poly::{factor_over_k, roots_of_irreducible, Poly};
use crate::ratfun::RatFun;

#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub a: Vec<Vec<RatFun>>,
}

impl LinearSystem {
    pub fn new(a: Vec<Vec<RatFun>>) -> Self {
        assert!(!a.is_empty() && a.iter().all(|row| row.len() == a.len()), "square system expected");
        LinearSystem { a }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn field(&self) -> &Field {
        self.a[0][0].field()
    }

    /// `Y' - A Y`.
    pub fn residual(&self, y: &[RatFun]) -> Vec<RatFun> {
        (0..self.dim())
            .map(|i| {
                let mut acc = y[i].derivative();
                for (j, yj) in y.iter().enumerate() {
                    if !self.a[i][j].is_zero() && !yj.is_zero() {
                        acc = &acc - &(&self.a[i][j] * yj);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_solution(&self, y: &[RatFun]) -> bool {
        self.residual(y).iter().all(|x| x.is_zero())
    }

    /// Polynomial coefficients `c_0..c_k` of a scalar equation `sum c_j y^(j) = 0`
    /// satisfied by the `i`-th component of every solution.
    pub fn scalar_equation(&self, i: usize) -> Vec<Poly> {
        let field = self.field().clone();
        let r = self.dim();
        let mut unit = vec![RatFun::zero(&field); r];
        unit[i] = RatFun::one(&field);
        let mut ws = vec![unit];
        loop {
            let last = ws.last().unwrap();
            let next: Vec<RatFun> = (0..r)
                .map(|j| {
                    let mut acc = last[j].derivative();
                    for (l, wl) in last.iter().enumerate() {
                        if !wl.is_zero() && !self.a[l][j].is_zero() {
                            acc = &acc + &(wl * &self.a[l][j]);
                        }
                    }
                    acc
                })
                .collect();
            ws.push(next);
            let cols = ws.len();
            // Column m holds d_m w_m with d_m the common denominator of w_m.
            let dens: Vec<Poly> = ws
                .iter()
                .map(|w| w.iter().fold(Poly::one(&field), |acc, x| Poly::lcm(&acc, x.den())))
                .collect();
            let m: Vec<Vec<Poly>> = (0..r)
                .map(|j| (0..cols).map(|c| ws[c][j].mul_poly(&dens[c]).num().clone()).collect())
                .collect();
            let (_, pivots) = bareiss(m.clone());
            if pivots.len() == cols {
                continue;
            }
            let kernel = poly_kernel_vector(m, cols).expect("dependent columns have a kernel");
            let coeffs: Vec<RatFun> = kernel.iter().zip(&dens).map(|(c, d)| c.mul_poly(d)).collect();
            let common = coeffs.iter().fold(Poly::one(&field), |acc, x| Poly::lcm(&acc, x.den()));
            let polys: Vec<Poly> = coeffs.iter().map(|c| c.mul_poly(&common).num().clone()).collect();
            return trim_leading_zero_ops(polys);
        }
    }
}

fn trim_leading_zero_ops(mut c: Vec<Poly>) -> Vec<Poly> {
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
    c
}

/// `e (e-1) ... (e-k+1)` as a polynomial in `e`.
fn falling(field: &Field, k: usize) -> Poly {
    let mut acc = Poly::one(field);
    for t in 0..k {
        acc = &acc * &Poly::from_i64s(field, &[-(t as i64), 1]);
    }
    acc
}

/// Indicial polynomial of `sum c_k D^k` at the point `a` (coefficients already over `a`'s field).
pub fn indicial_at(c: &[Poly], a: &KElem) -> Poly {
    let field = a.field().clone();
    let local: Vec<Option<(i64, KElem)>> = c
        .iter()
        .map(|ck| {
            if ck.is_zero() {
                return None;
            }
            let t = ck.taylor_at(a);
            let v = t.iter().position(|x| !x.is_zero()).unwrap();
            Some((v as i64, t[v].clone()))
        })
        .collect();
    let mu = local.iter().enumerate().filter_map(|(k, l)| l.as_ref().map(|(v, _)| v - k as i64)).min().unwrap();
    let mut ind = Poly::zero(&field);
    for (k, l) in local.iter().enumerate() {
        if let Some((v, lc)) = l {
            if v - k as i64 == mu {
                ind = &ind + &falling(&field, k).scale(lc);
            }
        }
    }
    ind
}

/// Indicial polynomial at infinity: the exponents `e` for which `z^e` can lead a
/// solution's expansion in `1/z`.
pub fn indicial_at_infinity(c: &[Poly]) -> Poly {
    let field = c[0].field().clone();
    let nu = c.iter().enumerate().filter(|(_, ck)| !ck.is_zero()).map(|(k, ck)| ck.deg() as i64 - k as i64).max().unwrap();
    let mut ind = Poly::zero(&field);
    for (k, ck) in c.iter().enumerate() {
        if !ck.is_zero() && ck.deg() as i64 - k as i64 == nu {
            ind = &ind + &falling(&field, k).scale(&ck.lc());
        }
    }
    ind
}

/// Smallest integer local exponent of the scalar equation at the roots of the
/// `K`-irreducible `h`, computed in `K(alpha)` for one root `alpha`.
fn min_exponent_at(c: &[Poly], h: &Poly) -> Option<i64> {
    let alpha = roots_of_irreducible(h).into_iter().next().unwrap();
    let ext = compose_extension(h.field(), &alpha);
    let cl: Vec<Poly> = c.iter().map(|p| ext.embed_poly(p)).collect();
    let ind = indicial_at(&cl, &ext.alpha);
    ind.integer_roots().into_iter().min().map(|e| i64::try_from(e).expect("exponent fits in i64"))
}

/// Pole bound for one component: `prod h^{max(0, -e_min(h))}` over the singular factors.
fn component_denominator(c: &[Poly]) -> Poly {
    let field = c[0].field().clone();
    let lead = c.last().unwrap();
    let mut d = Poly::one(&field);
    if lead.is_constant() {
        return d;
    }
    for (h, _) in factor_over_k(lead) {
        if let Some(e) = min_exponent_at(c, &h) {
            if e < 0 {
                d = &d * &h.pow((-e) as usize);
            }
        }
    }
    d
}

/// A polynomial `D` with `D Y` polynomial for every rational solution `Y`.
pub fn denominator_bound(sys: &LinearSystem) -> Poly {
    let field = sys.field().clone();
    (0..sys.dim()).fold(Poly::one(&field), |acc, i| Poly::lcm(&acc, &component_denominator(&sys.scalar_equation(i))))
}

/// A basis of `{Y in K(z)^r : Y' = A Y}`, each vector verified by substitution.
pub fn rational_solution_basis(sys: &LinearSystem) -> Vec<Vec<RatFun>> {
    let field = sys.field().clone();
    let r = sys.dim();
    let scalar: Vec<Vec<Poly>> = (0..r).map(|i| sys.scalar_equation(i)).collect();
    let d = scalar.iter().fold(Poly::one(&field), |acc, c| Poly::lcm(&acc, &component_denominator(c)));
    // Degree bound for the numerator of each component (None: the component vanishes).
    let bounds: Vec<Option<usize>> = scalar
        .iter()
        .map(|c| {
            let e = indicial_at_infinity(c).integer_roots().into_iter().max()?;
            let b = i64::try_from(e).unwrap() + d.deg() as i64;
            (b >= 0).then_some(b as usize)
        })
        .collect();
    let unknowns: Vec<(usize, usize)> =
        (0..r).flat_map(|i| (0..=bounds[i].map_or(-1, |b| b as i64)).map(move |t| (i, t as usize))).collect();
    if unknowns.is_empty() {
        return vec![];
    }
    let den_a = sys.a.iter().flatten().fold(Poly::one(&field), |acc, x| Poly::lcm(&acc, x.den()));
    let a_poly: Vec<Vec<Poly>> =
        sys.a.iter().map(|row| row.iter().map(|x| x.mul_poly(&den_a).num().clone()).collect()).collect();
    let dd = d.derivative();
    // For Y = N / D the system reads den_a (N' D - N D') - D (den_a A) N = 0.
    let columns: Vec<Vec<Poly>> = unknowns
        .iter()
        .map(|&(i, t)| {
            let one = KElem::one(&field);
            let zt = Poly::monomial(one.clone(), t);
            let dzt = if t == 0 { Poly::zero(&field) } else { Poly::monomial(KElem::from_i64(&field, t as i64), t - 1) };
            (0..r)
                .map(|j| {
                    let mut e = &(&d * &a_poly[j][i]) * &zt;
                    e = -&e;
                    if i == j {
                        e = &e + &(&den_a * &(&(&dzt * &d) - &(&zt * &dd)));
                    }
                    e
                })
                .collect()
        })
        .collect();
    let height = columns.iter().flatten().map(|p| p.coeffs().len()).max().unwrap_or(0);
    let mut rows = Vec::new();
    for j in 0..r {
        for k in 0..height {
            rows.push(columns.iter().map(|col| col[j].coeff(k)).collect::<Vec<KElem>>());
        }
    }
    let basis = nullspace(&rows, unknowns.len(), &KElem::zero(&field));
    basis
        .into_iter()
        .map(|v| {
            let mut nums = vec![Poly::zero(&field); r];
            for (&(i, t), x) in unknowns.iter().zip(&v) {
                if !x.is_zero() {
                    nums[i] = &nums[i] + &Poly::monomial(x.clone(), t);
                }
            }
            let y: Vec<RatFun> = nums.into_iter().map(|n| RatFun::new(n, d.clone())).collect();
            assert!(sys.is_solution(&y), "rational solution failed substitution");
            normalize_solution(y)
        })
        .collect()
}

/// Scales so that the first nonzero component has a monic numerator.
pub fn normalize_solution(y: Vec<RatFun>) -> Vec<RatFun> {
    let Some(first) = y.iter().find(|x| !x.is_zero()) else { return y };
    let s = first.num().lc().inv().unwrap();
    y.iter().map(|x| x.scale(&s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;

    fn rf(f: &Field, n: &[i64], d: &[i64]) -> RatFun {
        RatFun::new(Poly::from_i64s(f, n), Poly::from_i64s(f, d))
    }

    #[test]
    fn constant_system() {
        let f = NumberField::rational();
        let z = RatFun::zero(&f);
        let sys = LinearSystem::new(vec![vec![z.clone(), z.clone()], vec![z.clone(), z]]);
        let b = rational_solution_basis(&sys);
        assert_eq!(b.len(), 2);
        assert!(denominator_bound(&sys).is_one());
    }

    #[test]
    fn simple_pole_exponent() {
        let f = NumberField::rational();
        // y' = -2/z y has solution z^-2.
        let sys = LinearSystem::new(vec![vec![rf(&f, &[-2], &[0, 1])]]);
        let d = denominator_bound(&sys);
        assert_eq!(d, Poly::from_i64s(&f, &[0, 0, 1]));
        let b = rational_solution_basis(&sys);
        assert_eq!(b, vec![vec![rf(&f, &[1], &[0, 0, 1])]]);
        // y' = 1/2 y/z has no rational solution (exponent 1/2).
        let half = RatFun::new(Poly::from_i64s(&f, &[1]), Poly::from_i64s(&f, &[0, 2]));
        assert!(rational_solution_basis(&LinearSystem::new(vec![vec![half]])).is_empty());
    }

    #[test]
    fn polynomial_system_has_trivial_bound() {
        let f = NumberField::rational();
        let sys = LinearSystem::new(vec![vec![rf(&f, &[0, 1], &[1])]]);
        assert!(denominator_bound(&sys).is_one());
        assert!(rational_solution_basis(&sys).is_empty());
    }
}
