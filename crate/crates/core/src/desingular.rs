//! Removal of the nonzero singularities of `v' = B v`, `v = (1, f, ..., f^(s-1))`,
//! by polynomial changes of basis `v = M w`, and the resulting test for algebraic
//! values at the roots of `u_0`.
//!
//! All work is done per `K`-irreducible factor `h` of `u_0` in the residue field
//! `K[z]/(h)`, which treats all conjugate roots of `h` at once.

use crate::error::{EfaError, Result};
use crate::extension::compose_extension;
use crate::field::{AlgebraicNumber, Field, KElem};
use crate::linalg::rref;
use crate::min_inhomog::SystemMatrix;
use crate::poly::{factor_over_k, roots_of_irreducible, Poly};
use crate::ratfun::RatFun;
use crate::series::{series_mul, Series};

type RatMatrix = Vec<Vec<RatFun>>;
type PolyMatrix = Vec<Vec<Poly>>;

fn identity(field: &Field, n: usize) -> PolyMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Poly::one(field) } else { Poly::zero(field) }).collect()).collect()
}

fn to_rat(m: &PolyMatrix) -> RatMatrix {
    m.iter().map(|row| row.iter().map(|p| RatFun::from_poly(p.clone())).collect()).collect()
}

fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let field = a[0][0].field().clone();
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = RatFun::zero(&field);
                    for t in 0..k {
                        if !a[i][t].is_zero() && !b[t][j].is_zero() {
                            acc = &acc + &(&a[i][t] * &b[t][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn poly_mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let field = a[0][0].field().clone();
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).fold(Poly::zero(&field), |acc, t| &acc + &(&a[i][t] * &b[t][j])))
                .collect()
        })
        .collect()
}

/// `X` with `m X = rhs`, for invertible `m`.
fn solve_rat(m: &RatMatrix, rhs: &RatMatrix) -> RatMatrix {
    let n = m.len();
    let w = rhs[0].len();
    let mut aug: RatMatrix = (0..n).map(|i| m[i].iter().chain(rhs[i].iter()).cloned().collect()).collect();
    let pivots = rref(&mut aug);
    assert_eq!(pivots, (0..n).collect::<Vec<_>>(), "singular transform");
    (0..n).map(|i| aug[i][n..n + w].to_vec()).collect()
}

/// Multiplicity of the irreducible `h` in `p`.
fn multiplicity(p: &Poly, h: &Poly) -> usize {
    let mut k = 0;
    let mut cur = p.clone();
    while !cur.is_zero() && h.divides(&cur) {
        cur = cur.exact_div(h);
        k += 1;
    }
    k
}

/// Pole order of `b` at the roots of `h`.
pub fn singularity_order(b: &RatMatrix, h: &Poly) -> usize {
    b.iter().flatten().map(|x| multiplicity(x.den(), h)).max().unwrap_or(0)
}

/// The nonzero `K`-irreducible factors of `u_0` other than `z`.
pub fn nonzero_singular_factors(sys: &SystemMatrix) -> Vec<(Poly, usize)> {
    factor_over_k(sys.u0()).into_iter().filter(|(h, _)| h.valuation() == 0).collect()
}

/// `C = [h^k B] mod h`, scaled by `h'^{-k}` so that at a root `alpha` it equals
/// `[(z - alpha)^k B](alpha)`. Entries are residues mod `h`; `C v(alpha) = 0`.
pub fn relations_at_singularity(b: &RatMatrix, h: &Poly) -> Vec<Vec<Poly>> {
    let k = singularity_order(b, h);
    assert!(k >= 1, "no singularity at the roots of {h}");
    let dh = h.derivative().rem(h).inv_mod(h).expect("h is squarefree").pow(k).rem(h);
    b.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let e = multiplicity(x.den(), h);
                    if e < k || x.is_zero() {
                        return Poly::zero(h.field());
                    }
                    let rest = x.den().exact_div(&h.pow(e));
                    let inv = rest.rem(h).inv_mod(h).unwrap();
                    (&(&x.num().rem(h) * &inv).rem(h) * &dh).rem(h)
                })
                .collect()
        })
        .collect()
}

/// One shearing step at `h`: picks the lowest nonzero relation row, pivots on
/// its highest nonzero coordinate `p >= 1`, and replaces `v_p` by `c.v / h`.
/// Returns the new system and `T` with `v = T w`.
pub fn remove_singularity(b: &RatMatrix, h: &Poly) -> Result<(RatMatrix, PolyMatrix)> {
    let field = h.field().clone();
    let n = b.len();
    let c = relations_at_singularity(b, h);
    let row = c.iter().find(|r| r.iter().any(|x| !x.is_zero())).expect("nonzero relation at a pole");
    let Some(p) = (1..n).rev().find(|&j| !row[j].is_zero()) else {
        return Err(EfaError::inconsistency(format!("relation at the roots of {h} forces 1 = 0")));
    };
    let inv = row[p].inv_mod(h).unwrap();
    let c: Vec<Poly> = row.iter().map(|x| (x * &inv).rem(h)).collect();
    let mut t = identity(&field, n);
    t[p][p] = h.clone();
    for j in 0..n {
        if j != p {
            t[p][j] = -&c[j];
        }
    }
    let mut t_inv: RatMatrix = to_rat(&identity(&field, n));
    let hr = RatFun::from_poly(h.clone());
    for j in 0..n {
        t_inv[p][j] = if j == p { hr.inv().unwrap() } else { RatFun::from_poly(c[j].clone()).div(&hr).unwrap() };
    }
    let tr = to_rat(&t);
    let bt = mat_mul(b, &tr);
    let dt: RatMatrix = t.iter().map(|r| r.iter().map(|x| RatFun::from_poly(x.derivative())).collect()).collect();
    let diff: RatMatrix = bt.iter().zip(&dt).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect();
    Ok((mat_mul(&t_inv, &diff), t))
}

/// `4 (s+1) sum_h k_h deg h` over the nonzero singular factors.
pub fn iteration_cap(sys: &SystemMatrix) -> usize {
    let total: usize =
        nonzero_singular_factors(sys).iter().map(|(h, _)| singularity_order(&sys.b, h) * h.deg()).sum();
    4 * sys.size() * total.max(1)
}

/// A relation `x + y f(alpha) = 0` visible directly in `C` at the original system.
#[derive(Clone, Debug)]
pub struct DirectRelation {
    pub factor: Poly,
    pub row: Vec<Poly>,
    /// `f(alpha) = value(alpha)`.
    pub value: Poly,
}

#[derive(Clone, Debug)]
pub struct Desingularization {
    /// `v = M w`.
    pub m: PolyMatrix,
    /// `w' = N w`.
    pub n: RatMatrix,
    pub steps: usize,
    pub cap: usize,
    /// Factors left untouched because a direct relation already fixed `f` there (fast mode).
    pub skipped: Vec<Poly>,
    pub direct: Vec<DirectRelation>,
}

fn direct_relation(b: &RatMatrix, h: &Poly) -> Option<DirectRelation> {
    let c = relations_at_singularity(b, h);
    c.iter().find_map(|row| {
        if row.len() < 2 || row[1].is_zero() || row[2..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let inv = row[1].inv_mod(h).unwrap();
        let value = (&(-&row[0]) * &inv).rem(h);
        Some(DirectRelation { factor: h.clone(), row: row.clone(), value })
    })
}

/// Removes every nonzero singularity of `sys`, one factor of `u_0` after the other.
/// With `fast`, factors whose value is already fixed by a direct relation are skipped.
pub fn compute_m(sys: &SystemMatrix, cap: Option<usize>, fast: bool) -> Result<Desingularization> {
    let field = sys.field().clone();
    let size = sys.size();
    let cap = cap.unwrap_or_else(|| iteration_cap(sys));
    let mut b = sys.b.clone();
    let mut m = identity(&field, size);
    let mut steps = 0;
    let mut skipped = Vec::new();
    let mut direct = Vec::new();
    for (h, _) in nonzero_singular_factors(sys) {
        if singularity_order(&b, &h) == 0 {
            continue;
        }
        if let Some(d) = direct_relation(&b, &h) {
            direct.push(d);
            if fast {
                skipped.push(h);
                continue;
            }
        }
        while singularity_order(&b, &h) > 0 {
            if steps == cap {
                return Err(EfaError::CapExhausted(format!(
                    "singularity removal exceeded {cap} steps at the roots of {h}; partial transform M = {}",
                    format_matrix(&m)
                )));
            }
            let (next, t) = remove_singularity(&b, &h)?;
            b = next;
            m = poly_mat_mul(&m, &t);
            steps += 1;
        }
    }
    Ok(Desingularization { m, n: b, steps, cap, skipped, direct })
}

fn format_matrix(m: &PolyMatrix) -> String {
    let rows: Vec<String> =
        m.iter().map(|r| format!("[{}]", r.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

/// `M^{-1} B M - M^{-1} M'`.
pub fn transformed_system(b: &RatMatrix, m: &PolyMatrix) -> RatMatrix {
    let mr = to_rat(m);
    let bm = mat_mul(b, &mr);
    let rhs: RatMatrix = bm
        .iter()
        .zip(m)
        .map(|(r, mrow)| r.iter().zip(mrow).map(|(x, p)| x - &RatFun::from_poly(p.derivative())).collect())
        .collect();
    solve_rat(&mr, &rhs)
}

/// Every entry of the transformed system has a power of `z` as denominator.
pub fn terminal_certificate(b: &RatMatrix, m: &PolyMatrix) -> bool {
    transformed_system(b, m).iter().flatten().all(|x| {
        let d = x.den();
        d.deg() == d.valuation()
    })
}

#[derive(Clone, Debug)]
pub enum Certificate {
    /// `alpha = 0`: the value is the constant Taylor coefficient.
    Origin,
    /// `lambda M(alpha) = 0` with `lambda` zero except `lambda_0 = -value`
    /// and `lambda_{j+1} = 1`; residues mod the factor.
    Cokernel(Vec<Poly>),
    /// A relation read off the original system at `alpha` (fast mode).
    Direct(Vec<Poly>),
}

#[derive(Clone, Debug)]
pub struct ExceptionalPoint {
    /// The `K`-irreducible factor of `u_0` vanishing at `alpha`; `None` for 0.
    pub factor: Option<Poly>,
    pub alpha: AlgebraicNumber,
    /// `f^(j)(alpha) = value_residue(alpha)`.
    pub value_residue: Poly,
    pub value: AlgebraicNumber,
    pub certificate: Certificate,
}

fn value_at(residue: &Poly, alpha: &AlgebraicNumber, field: &Field) -> AlgebraicNumber {
    if residue.is_constant() {
        return AlgebraicNumber::from_kelem(&residue.coeff(0));
    }
    let ext = compose_extension(field, alpha);
    AlgebraicNumber::from_kelem(&ext.embed_poly(residue).eval(&ext.alpha))
}

/// The factors `h` at whose roots `f^(j)` takes algebraic values, with the value
/// as a residue mod `h`, from the terminal transform.
fn exceptional_factors(sys: &SystemMatrix, des: &Desingularization, j: usize) -> Vec<(Poly, Poly, Certificate)> {
    let n = sys.size();
    assert!(j + 1 < n, "derivative order must be below s");
    let mut out = Vec::new();
    for (h, _) in nonzero_singular_factors(sys) {
        if des.skipped.contains(&h) {
            if j == 0 {
                let d = des.direct.iter().find(|d| d.factor == h).unwrap();
                out.push((h, d.value.clone(), Certificate::Direct(d.row.clone())));
            }
            continue;
        }
        let row = &des.m[j + 1];
        if (1..n).all(|k| row[k].rem(&h).is_zero()) {
            let value = row[0].rem(&h);
            let mut lambda = vec![Poly::zero(h.field()); n];
            lambda[0] = -&value;
            lambda[j + 1] = Poly::one(h.field());
            out.push((h, value, Certificate::Cokernel(lambda)));
        }
    }
    out
}

/// Algebraic points (including 0) where `f^(j)` takes algebraic values, with the values.
pub fn exceptional_derivative_values(
    sys: &SystemMatrix,
    des: &Desingularization,
    j: usize,
    f: &Series,
) -> Vec<ExceptionalPoint> {
    let field = sys.field().clone();
    let d0 = f.derivative_coefficients(j, 1)[0].clone();
    let mut out = vec![ExceptionalPoint {
        factor: None,
        alpha: AlgebraicNumber::from_kelem(&KElem::zero(&field)),
        value_residue: Poly::constant(d0.clone()),
        value: AlgebraicNumber::from_kelem(&d0),
        certificate: Certificate::Origin,
    }];
    for (h, residue, cert) in exceptional_factors(sys, des, j) {
        for alpha in roots_of_irreducible(&h) {
            out.push(ExceptionalPoint {
                factor: Some(h.clone()),
                value: value_at(&residue, &alpha, &field),
                alpha,
                value_residue: residue.clone(),
                certificate: cert.clone(),
            });
        }
    }
    out
}

pub fn exceptional_points(sys: &SystemMatrix, des: &Desingularization, f: &Series) -> Vec<ExceptionalPoint> {
    exceptional_derivative_values(sys, des, 0, f)
}

/// `f = p + (prod h^m) g` with `g` entire: the Hermite interpolant `p` of the
/// algebraic derivative values at the nonzero exceptional points.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub p: Poly,
    /// `(h, m)`: `f^(i)` is algebraic at the roots of `h` for `i < m`.
    pub parts: Vec<(Poly, usize)>,
}

impl Decomposition {
    pub fn modulus(&self) -> Poly {
        let field = self.p.field().clone();
        self.parts.iter().fold(Poly::one(&field), |acc, (h, m)| &acc * &h.pow(*m))
    }

    /// Taylor coefficients at 0 of `g = (f - p) / prod h^m`.
    pub fn cofactor_series(&self, f: &Series, len: usize) -> Vec<KElem> {
        let field = self.p.field().clone();
        let mut diff = f.coefficients(len);
        for (k, x) in diff.iter_mut().enumerate() {
            *x = &*x - &self.p.coeff(k);
        }
        let u = self.modulus();
        // 1/u as a power series; u(0) != 0 since no factor is z.
        let u0_inv = u.coeff(0).inv().unwrap();
        let mut inv = vec![KElem::zero(&field); len];
        for n in 0..len {
            let mut acc = if n == 0 { KElem::one(&field) } else { KElem::zero(&field) };
            for k in 1..=n.min(u.deg()) {
                acc = &acc - &(&u.coeff(k) * &inv[n - k]);
            }
            inv[n] = &acc * &u0_inv;
        }
        series_mul(&diff, &inv, len)
    }
}

/// `None` when there is no nonzero exceptional point.
pub fn polynomial_part_decomposition(
    sys: &SystemMatrix,
    des: &Desingularization,
) -> Option<Decomposition> {
    let field = sys.field().clone();
    let s = sys.size() - 1;
    // (h, [value residues of f, f', ...]).
    let mut data: Vec<(Poly, Vec<Poly>)> = Vec::new();
    for j in 0..s {
        let found = exceptional_factors(sys, des, j);
        if j == 0 {
            data = found.into_iter().map(|(h, v, _)| (h, vec![v])).collect();
        } else {
            for (h, vals) in data.iter_mut() {
                if vals.len() == j {
                    if let Some((_, v, _)) = found.iter().find(|(g, _, _)| g == h) {
                        vals.push(v.clone());
                    }
                }
            }
        }
    }
    if data.is_empty() {
        return None;
    }
    let unknowns: usize = data.iter().map(|(h, v)| h.deg() * v.len()).sum();
    // Row per (h, i, coefficient of the remainder mod h); columns p_0..p_{unknowns-1}, rhs.
    let mut rows: Vec<Vec<KElem>> = Vec::new();
    for (h, vals) in &data {
        for (i, r) in vals.iter().enumerate() {
            let cols: Vec<Poly> = (0..unknowns)
                .map(|t| {
                    let mut mono = Poly::monomial(KElem::one(&field), t);
                    for _ in 0..i {
                        mono = mono.derivative();
                    }
                    mono.rem(h)
                })
                .collect();
            for k in 0..h.deg() {
                let mut row: Vec<KElem> = cols.iter().map(|c| c.coeff(k)).collect();
                row.push(r.coeff(k));
                rows.push(row);
            }
        }
    }
    let pivots = rref(&mut rows);
    assert!(pivots.len() == unknowns && !pivots.contains(&unknowns), "Hermite interpolation is uniquely solvable");
    let p = Poly::new(&field, (0..unknowns).map(|i| rows[i][unknowns].clone()).collect());
    Some(Decomposition { p, parts: data.into_iter().map(|(h, v)| (h, v.len())).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::diffop::DiffOp;
    use crate::field::NumberField;
    use crate::min_inhomog::{minimal_inhomogeneous, normalize};

    fn p(f: &Field, c: &[i64]) -> Poly {
        Poly::from_i64s(f, c)
    }

    #[test]
    fn shifted_exponential() {
        let f = NumberField::rational();
        let l = DiffOp::new(&f, vec![p(&f, &[0, -1]), p(&f, &[-1, 1])]);
        let s = Series::new(&l, vec![KElem::from_i64(&f, -1), KElem::zero(&f)]).unwrap();
        let sys = normalize(&minimal_inhomogeneous(&l, &s, 30).unwrap());
        let c = relations_at_singularity(&sys.b, &p(&f, &[-1, 1]));
        assert!(c[0].iter().all(|x| x.is_zero()));
        assert_eq!(c[1], vec![Poly::zero(&f), Poly::one(&f)]);
        let des = compute_m(&sys, None, false).unwrap();
        assert_eq!(des.m, vec![vec![p(&f, &[1]), p(&f, &[])], vec![p(&f, &[]), p(&f, &[-1, 1])]]);
        assert!(terminal_certificate(&sys.b, &des.m));
        let exc = exceptional_points(&sys, &des, &s);
        assert_eq!(exc.len(), 2);
        assert_eq!(exc[0].value.as_rational(), Some(q(-1)));
        assert_eq!(exc[1].alpha.as_rational(), Some(q(1)));
        assert!(exc[1].value.is_zero());
        let dec = polynomial_part_decomposition(&sys, &des).unwrap();
        assert!(dec.p.is_zero());
        assert_eq!(dec.parts, vec![(p(&f, &[-1, 1]), 1)]);
        // g = e^z.
        let g = dec.cofactor_series(&s, 6);
        assert_eq!(g[3], KElem::from_q(&f, q(1) / q(6)));
    }

    #[test]
    fn exponential_has_nothing_to_remove() {
        let f = NumberField::rational();
        let l = DiffOp::new(&f, vec![p(&f, &[-1]), p(&f, &[1])]);
        let s = Series::new(&l, vec![KElem::one(&f)]).unwrap();
        let sys = normalize(&minimal_inhomogeneous(&l, &s, 30).unwrap());
        let des = compute_m(&sys, None, false).unwrap();
        assert_eq!(des.m, identity(&f, 2));
        assert_eq!(exceptional_points(&sys, &des, &s).len(), 1);
        assert!(polynomial_part_decomposition(&sys, &des).is_none());
    }
}
