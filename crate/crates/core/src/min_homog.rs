//! Search for the minimal-order operator annihilating a series.
//!
//! Candidates come from the left null space of the block-Toeplitz matrix of
//! truncated series `z^t f^(j)`; each candidate `M` is then proved to annihilate
//! `f` exactly: `A = annihilator_of_image(L, M)` kills `M f`, and the
//! recurrence of `A` shows that a solution whose first `m_A` coefficients vanish
//! is zero.

use crate::diffop::{annihilator_of_image, to_recurrence, DiffOp};
use crate::field::KElem;
use crate::linalg::{nullspace, ModularImage};
use crate::poly::Poly;
use crate::series::Series;

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Use this truncation for the first attempt at every `(r, delta)` instead
    /// of `(r+1)(delta+1) + 10`.
    pub forced_n: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct MinOpResult {
    pub op: DiffOp,
    /// True when minimality is only established for coefficient degree `<= degree_cap`
    /// in every lower order (the result has order > 1).
    pub minimal_within_cap: bool,
    pub degree_cap: usize,
    /// Candidates that failed exact certification.
    pub rejected: usize,
    /// `(r, delta, N)` at which the returned operator was found, if the search found it.
    pub found_at: Option<(usize, usize, usize)>,
}

/// Default degree cap `4 deg L + 16`.
pub fn default_degree_cap(l: &DiffOp) -> usize {
    4 * l.degree() + 16
}

/// The block-Toeplitz matrix: row `(j, t)` holds the coefficients of `z^t f^(j)`
/// at exponents `0..=n`.
pub fn sieve_matrix(derivs: &[Vec<KElem>], delta: usize, n: usize) -> Vec<Vec<KElem>> {
    let field = derivs[0][0].field().clone();
    let mut rows = Vec::with_capacity(derivs.len() * (delta + 1));
    for g in derivs {
        for t in 0..=delta {
            let row: Vec<KElem> = (0..=n)
                .map(|k| if k >= t { g[k - t].clone() } else { KElem::zero(&field) })
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// All `(P_0, ..., P_r)` of degree `<= delta` with `ord_0(sum P_j f^(j)) > n`.
pub fn cokernel_candidates(derivs: &[Vec<KElem>], delta: usize, n: usize) -> Vec<Vec<Poly>> {
    let field = derivs[0][0].field().clone();
    let s = sieve_matrix(derivs, delta, n);
    let rows = s.len();
    let transpose: Vec<Vec<KElem>> = (0..=n).map(|k| (0..rows).map(|i| s[i][k].clone()).collect()).collect();
    nullspace(&transpose, rows, &KElem::zero(&field))
        .into_iter()
        .map(|lam| {
            lam.chunks(delta + 1).map(|c| Poly::new(&field, c.to_vec())).collect()
        })
        .collect()
}

/// Exact proof that `m` annihilates `f` (which is annihilated by `l`).
pub fn certify_relation(l: &DiffOp, m: &DiffOp, f: &Series) -> bool {
    if m.is_zero() {
        return false;
    }
    let a = annihilator_of_image(l, m);
    let rec = to_recurrence(&a);
    let need = rec.m.max(1);
    let coeffs = f.coefficients(need + m.order() + 1);
    let image = m.apply_series(&coeffs);
    image.iter().take(need).all(|x| x.is_zero())
}

fn derivative_table(f: &Series, r: usize, len: usize) -> Vec<Vec<KElem>> {
    (0..=r).map(|j| f.derivative_coefficients(j, len)).collect()
}

/// Lowest-order certified operator annihilating `f`, searching coefficient
/// degrees up to `degree_cap` in each order below that of `f.operator()`.
pub fn find_min_operator(f: &Series, degree_cap: usize, opts: &SearchOptions) -> MinOpResult {
    let l = f.operator().normalize();
    let field = l.field().clone();
    let r0 = l.order();
    let mut rejected = 0;
    let mut modular = ModularImage::for_field(&field, 0);
    for r in 1..r0 {
        for delta in 0..=degree_cap {
            let rows = (r + 1) * (delta + 1);
            let mut n = opts.forced_n.unwrap_or(rows + 10);
            let n_max = 16 * (rows + 10) + 64;
            let mut last_dim = usize::MAX;
            while n <= n_max.max(opts.forced_n.unwrap_or(0)) {
                let derivs = derivative_table(f, r, n + 1);
                let s = sieve_matrix(&derivs, delta, n);
                let screened = loop {
                    match modular.rank(&s) {
                        Some(rk) => break rk,
                        None => modular = ModularImage::for_field(&field, 1 + modular.q as usize % 7),
                    }
                };
                if screened == rows {
                    break;
                }
                let cands = cokernel_candidates(&derivs, delta, n);
                if cands.is_empty() {
                    break;
                }
                // Cheap necessary condition before the exact proof.
                let probe = f.coefficients(2 * (rows + 10) + r + 1);
                for c in &cands {
                    let m = DiffOp::new(&field, c.clone());
                    let plausible = m.apply_series(&probe).iter().all(|x| x.is_zero());
                    if plausible && certify_relation(&l, &m, f) {
                        return MinOpResult {
                            minimal_within_cap: m.order() > 1,
                            op: m.normalize(),
                            degree_cap,
                            rejected,
                            found_at: Some((r, delta, n)),
                        };
                    }
                    rejected += 1;
                }
                // Spurious candidates disappear once n exceeds their vanishing order.
                if cands.len() > last_dim {
                    break;
                }
                last_dim = cands.len();
                n = if n < rows + 10 { rows + 10 } else { 2 * n };
            }
        }
    }
    MinOpResult { minimal_within_cap: r0 > 1, op: l, degree_cap, rejected, found_at: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::field::NumberField;

    #[test]
    fn exponential_from_second_order() {
        let f = NumberField::rational();
        // D^2 - D annihilates e^z and 1; with f = e^z the minimal operator is D - 1.
        let l = DiffOp::new(&f, vec![Poly::zero(&f), Poly::from_i64s(&f, &[-1]), Poly::from_i64s(&f, &[1])]);
        let s = Series::new(&l, vec![KElem::one(&f), KElem::one(&f)]).unwrap();
        let res = find_min_operator(&s, 8, &SearchOptions::default());
        assert_eq!(res.op, DiffOp::new(&f, vec![Poly::from_i64s(&f, &[-1]), Poly::from_i64s(&f, &[1])]));
        assert!(!res.minimal_within_cap);
    }

    #[test]
    fn cokernel_examples() {
        let f = NumberField::rational();
        let l = DiffOp::new(&f, vec![Poly::from_i64s(&f, &[-1]), Poly::from_i64s(&f, &[1])]);
        let s = Series::new(&l, vec![KElem::one(&f)]).unwrap();
        let derivs = derivative_table(&s, 1, 11);
        let c = cokernel_candidates(&derivs, 0, 10);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0][0], c[0][1].scale(&KElem::from_i64(&f, -1)));
        // (1, z) are independent.
        let one: Vec<KElem> = (0..4).map(|n| KElem::from_i64(&f, (n == 0) as i64)).collect();
        let z: Vec<KElem> = (0..4).map(|n| KElem::from_i64(&f, (n == 1) as i64)).collect();
        assert!(cokernel_candidates(&[one, z], 0, 3).is_empty());
        let _ = q(0);
    }
}
