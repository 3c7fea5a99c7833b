mod common;

use common::{random_exp_poly, ExpPoly};
use efa_core::arith::q_frac;
use efa_core::desingular::{compute_m, transformed_system};
use efa_core::diffop::DiffOp;
use efa_core::min_homog::cokernel_candidates;
use efa_core::min_inhomog::{companion_system, minimal_inhomogeneous, normalize};
use efa_core::pipeline::{analyze, Config};
use efa_core::rational_solutions::rational_solution_basis;
use efa_core::report::{build_report, verify_report, AnalysisReport};
use efa_core::series::{combination_constant_term, Series};
use efa_core::{KElem, Poly, RatFun};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64) -> ExpPoly {
    random_exp_poly(&mut ChaCha8Rng::seed_from_u64(seed), 4)
}

const SHEAR_ORDER: i64 = 80;

/// Coefficients of `z^0..=z^upto` of `r * p` for a rational `r` regular or not at 0.
fn times_series(r: &RatFun, p: &[KElem], upto: i64) -> Vec<KElem> {
    let field = r.field().clone();
    let zero = KElem::zero(&field);
    let mut out = vec![zero.clone(); (upto + 1) as usize];
    if r.is_zero() {
        return out;
    }
    let (v, c) = r.laurent_at(&zero, upto);
    for (i, ci) in c.iter().enumerate() {
        for (j, pj) in p.iter().enumerate() {
            let e = v + (i + j) as i64;
            if (0..=upto).contains(&e) {
                out[e as usize] = &out[e as usize] + &(ci * pj);
            }
        }
    }
    out
}

/// `x` with `a x = b` for a small invertible matrix over `K`.
fn solve(a: &[Vec<KElem>], b: &[KElem]) -> Vec<KElem> {
    let n = a.len();
    let mut m: Vec<Vec<KElem>> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero()).expect("singular");
        m.swap(c, p);
        let inv = m[c][c].inv().unwrap();
        for k in c..=n {
            m[c][k] = &m[c][k] * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let t = m[i][c].clone();
                for k in c..=n {
                    m[i][k] = &m[i][k] - &(&t * &m[c][k]);
                }
            }
        }
    }
    m.into_iter().map(|r| r[n].clone()).collect()
}

/// `w = M^(-1) v` as power series, `v = (1, f, ..., f^(s-1))`; then `w' = N w`
/// is checked coefficientwise through `z^SHEAR_ORDER`.
fn shear_sound(m: &[Vec<Poly>], n_mat: &[Vec<RatFun>], f: &Series) -> bool {
    let s = m.len();
    let len = (SHEAR_ORDER + 2 + n_mat.iter().flatten().map(|r| r.den().deg() as i64).sum::<i64>()) as usize;
    let field = f.field().clone();
    let zero = KElem::zero(&field);
    let mut v: Vec<Vec<KElem>> = vec![(0..len).map(|k| if k == 0 { KElem::one(&field) } else { zero.clone() }).collect()];
    for j in 0..s - 1 {
        v.push(f.derivative_coefficients(j, len));
    }
    let m0: Vec<Vec<KElem>> = m.iter().map(|r| r.iter().map(|p| p.coeff(0)).collect()).collect();
    let mut w: Vec<Vec<KElem>> = vec![Vec::with_capacity(len); s];
    for k in 0..len {
        let rhs: Vec<KElem> = (0..s)
            .map(|i| {
                let mut x = v[i][k].clone();
                for (j, mij) in m[i].iter().enumerate() {
                    for t in 1..=k.min(mij.deg()) {
                        x = &x - &(&mij.coeff(t) * &w[j][k - t]);
                    }
                }
                x
            })
            .collect();
        for (j, x) in solve(&m0, &rhs).into_iter().enumerate() {
            w[j].push(x);
        }
    }
    (0..s).all(|i| {
        let mut rhs = vec![zero.clone(); (SHEAR_ORDER + 1) as usize];
        for j in 0..s {
            for (e, x) in times_series(&n_mat[i][j], &w[j], SHEAR_ORDER).into_iter().enumerate() {
                rhs[e] = &rhs[e] + &x;
            }
        }
        (0..=SHEAR_ORDER as usize).all(|e| w[i][e + 1].scale(&q_frac(e as i64 + 1, 1)) == rhs[e])
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn cokernel_vectors_annihilate_the_truncation(seed in any::<u64>(), r in 1usize..3, delta in 0usize..3, n in 3usize..20) {
        let e = instance(seed);
        let f = e.input().series;
        let derivs: Vec<Vec<KElem>> = (0..=r).map(|j| f.derivative_coefficients(j, n + 1)).collect();
        let coeffs = f.coefficients(n + 1 + r);
        for c in cokernel_candidates(&derivs, delta, n) {
            prop_assert!(c.iter().all(|p| p.deg() <= delta));
            let image = DiffOp::new(&e.field, c).apply_series(&coeffs);
            prop_assert!(image.iter().take(n + 1).all(|x| x.is_zero()));
        }
    }

    #[test]
    fn exceptional_points_are_roots_of_u0(seed in any::<u64>(), num in -9i64..10, den in 1i64..6) {
        let e = instance(seed);
        let inp = e.input();
        let a = analyze(&inp, &Config::default()).unwrap();
        let sys = a.system.as_ref().unwrap();
        for pt in a.exceptional.iter().filter(|p| p.factor.is_some()) {
            let h = pt.factor.as_ref().unwrap();
            prop_assert!(sys.u0().rem(h).is_zero());
        }
        // A point where u_0 does not vanish is never a common root of the
        // polynomial coefficients of the exponentials.
        let x = KElem::from_q(&e.field, q_frac(num, den));
        if !sys.u0().eval(&x).is_zero() {
            let common = e.terms.iter().filter(|(l, _)| !l.is_zero()).all(|(_, p)| p.eval(&x).is_zero());
            prop_assert!(!common || x.is_zero());
        }
    }

    #[test]
    fn singularity_removal_is_a_valid_change_of_variables(seed in any::<u64>()) {
        let e = instance(seed);
        let inp = e.input();
        let a = analyze(&inp, &Config::default()).unwrap();
        let sys = a.system.as_ref().unwrap();
        let des = a.desingularization.as_ref().unwrap();
        prop_assert!(shear_sound(&des.m, &transformed_system(&sys.b, &des.m), &inp.series));
    }

    #[test]
    fn reports_survive_a_round_trip(seed in any::<u64>(), fast in any::<bool>()) {
        let e = instance(seed);
        let inp = e.input();
        let config = Config { fast, ..Config::default() };
        let a = analyze(&inp, &config).unwrap();
        let report = build_report(&inp, &a, &config);
        let back = AnalysisReport::from_json(&report.to_json()).unwrap();
        prop_assert_eq!(&back, &report);
        prop_assert!(verify_report(&back).unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn rational_solutions_satisfy_the_system(seed in any::<u64>()) {
        let e = instance(seed);
        let inp = e.input();
        let l = analyze(&inp, &Config::default()).unwrap().min_op.op;
        let sys = companion_system(&l);
        for y in rational_solution_basis(&sys) {
            prop_assert!(sys.is_solution(&y));
        }
        let eq = minimal_inhomogeneous(&l, &inp.series, 100).unwrap();
        prop_assert!(combination_constant_term(&eq.q, &inp.series, 100).is_ok_and(|c| c == eq.c));
    }
}

#[test]
fn shear_on_worked_examples() {
    for name in ["zm1exp.json", "example2.json", "example3.json"] {
        let inp = common::fixture(name);
        let eq = minimal_inhomogeneous(&inp.operator, &inp.series, 60).unwrap();
        let sys = normalize(&eq);
        let des = compute_m(&sys, None, false).unwrap();
        assert!(shear_sound(&des.m, &transformed_system(&sys.b, &des.m), &inp.series), "{name}");
    }
}
