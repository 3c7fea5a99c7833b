//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that the lines are always printed. A
//! criterion listed in `KNOWN_RED` is still evaluated and printed as FAIL, but
//! does not fail the run; any other failure does.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use efa_core::arith::{q, q_frac, Q};
use efa_core::corroborate::{enclosure_violations, numeric_corroborate};
use efa_core::desingular::terminal_certificate;
use efa_core::diffop::DiffOp;
use efa_core::input::EFunctionInput;
use efa_core::min_inhomog::{companion_system, Verdict};
use efa_core::pipeline::{analyze, min_operator, Analysis, Config};
use efa_core::poly::factor_over_k;
use efa_core::rational_solutions::rational_solution_basis;
use efa_core::report::{build_report, verify_report};
use efa_core::series::combination_constant_term;
use efa_core::{AlgebraicNumber, KElem, NumberField, Poly, RatFun};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXAMPLE1_LIMIT: Duration = Duration::from_secs(60);
const EXAMPLE3_LIMIT: Duration = Duration::from_secs(120);
const EXP_LIMIT: Duration = Duration::from_secs(10);
const RANDOM_LIMIT: Duration = Duration::from_secs(60);
const RANDOM_INSTANCES: usize = 50;
const FORCED_N_RUNS: usize = 20;
const SERIES_CHECK: usize = 200;
const RELATION_CHECK: usize = 100;
const DIGITS: usize = 50;
const COFACTOR_TERMS: usize = 21;

/// Sub-checks that cannot hold as stated; see the README.
const KNOWN_RED: [&str; 1] = ["2.g-literal"];

struct Suite {
    unexpected: usize,
}

impl Suite {
    fn line(&mut self, id: &str, ok: bool, detail: String) {
        let known = KNOWN_RED.contains(&id);
        let tag = match (ok, known) {
            (true, false) => "PASS",
            (true, true) => "PASS (listed as known red; update the list)",
            (false, true) => "FAIL (known, unattainable as stated)",
            (false, false) => "FAIL",
        };
        println!("criterion {id:<14} {tag:<5}  {detail}");
        if !ok && !known {
            self.unexpected += 1;
        }
    }
}

fn run(inp: &EFunctionInput) -> (Analysis, Duration) {
    let t = Instant::now();
    let a = analyze(inp, &Config::default()).expect("analysis");
    (a, t.elapsed())
}

fn points(a: &Analysis) -> Vec<(AlgebraicNumber, AlgebraicNumber)> {
    a.exceptional.iter().map(|e| (e.alpha.clone(), e.value.clone())).collect()
}

fn show(pts: &[(AlgebraicNumber, AlgebraicNumber)]) -> String {
    let s: Vec<String> = pts.iter().map(|(a, v)| format!("({}, {})", a.describe(6), v.describe(6))).collect();
    format!("{{{}}}", s.join(", "))
}

fn rq(num: &[i64], den: &[i64]) -> RatFun {
    let f = NumberField::rational();
    RatFun::new(Poly::from_i64s(&f, num), Poly::from_i64s(&f, den))
}

/// `a_i / a_r` for `i < r`.
fn monic_coeffs(l: &DiffOp) -> Vec<RatFun> {
    let lc = RatFun::from_poly(l.lc());
    (0..l.order()).map(|i| RatFun::from_poly(l.coeff(i)).div(&lc).unwrap()).collect()
}

fn proportional(a: &[RatFun], b: &[RatFun]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| &(x * &b[0]) == &(y * &a[0]))
}

fn example1(s: &mut Suite, name: &str, id: &str, expected: [RatFun; 3]) {
    let inp = fixture(name);
    let (a, t) = run(&inp);
    let got = monic_coeffs(&a.min_op.op);
    s.line(
        &format!("{id}.operator"),
        a.min_op.op.order() == 3 && got == expected,
        format!("{name}: L_min = {} (a_i/a_3 = {})", a.min_op.op, got.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")),
    );
    let basis = rational_solution_basis(&companion_system(&a.min_op.op));
    s.line(&format!("{id}.no-rational"), basis.is_empty() && a.inhom.s == 3, format!("rational solutions: {}, s = {}", basis.len(), a.inhom.s));
    let pts = points(&a);
    s.line(&format!("{id}.exceptional"), same_point_set(&pts, &rational_points(&[(q(0), q(1))])), show(&pts));
    s.line(&format!("{id}.time"), t < EXAMPLE1_LIMIT, format!("{:.3} s (limit {} s)", t.as_secs_f64(), EXAMPLE1_LIMIT.as_secs()));
}

fn criterion1(s: &mut Suite) {
    example1(s, "example1_printed.json", "1", [rq(&[3, -1], &[0, 0, 1]), rq(&[1, -22, 1], &[0, 0, 1]), rq(&[3, -11], &[0, 1])]);
    example1(s, "example1.json", "1-corrected", [rq(&[-3, -1], &[0, 0, 1]), rq(&[1, -22, -1], &[0, 0, 1]), rq(&[3, -11], &[0, 1])]);
}

fn central_binomial_term(n: usize, scale: Q) -> Q {
    let mut c = q(1);
    for k in 1..=n {
        c = c * q((n + k) as i64) / q(k as i64);
    }
    let mut fact = q(1);
    for k in 1..=n {
        fact = fact * q(2 * k as i64);
    }
    scale * c / fact
}

fn criterion2(s: &mut Suite) {
    let inp = fixture("example2.json");
    let (a, _) = run(&inp);
    let basis = rational_solution_basis(&companion_system(&a.min_op.op));
    // (1, (1-z)(1-z+2z^2)/(z(1+z)), (1-z)^2/(1+z))
    let y = [rq(&[1], &[1]), rq(&[1, -2, 3, -2], &[0, 1, 1]), rq(&[1, -2, 1], &[1, 1])];
    s.line(
        "2.rational",
        basis.len() == 1 && proportional(&basis[0], &y),
        format!("basis = [{}]", basis.iter().map(|v| v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")).collect::<Vec<_>>().join("; ")),
    );
    let c_over_q0 = RatFun::constant(a.inhom.c.clone()).div(&a.inhom.q[0]).unwrap();
    s.line("2.constant", c_over_q0 == rq(&[1], &[2]) && a.inhom.q[0] == y[0], format!("c = {}, Q_0 = {}", a.inhom.c, a.inhom.q[0]));
    let pts = points(&a);
    s.line(
        "2.exceptional",
        same_point_set(&pts, &rational_points(&[(q(0), q(0)), (q(1), q_frac(1, 2))])),
        show(&pts),
    );
    let f = NumberField::rational();
    let Some(d) = &a.decomposition else {
        s.line("2.decomposition", false, "no decomposition".into());
        return;
    };
    s.line(
        "2.decomposition",
        d.p == Poly::constant(KElem::from_q(&f, q_frac(1, 2))) && d.parts == vec![(Poly::from_i64s(&f, &[-1, 1]), 1)],
        format!("p = {}, parts = {:?}", d.p, d.parts.iter().map(|(h, m)| format!("({h})^{m}")).collect::<Vec<_>>()),
    );
    let g = d.cofactor_series(&inp.series, COFACTOR_TERMS);
    let matches = |scale: Q| (0..COFACTOR_TERMS).all(|n| g[n].as_rational() == Some(central_binomial_term(n, scale.clone())));
    s.line(
        "2.g-literal",
        matches(q(2)),
        format!("g_n = 2 C(2n,n)/2^n/n! for n < {COFACTOR_TERMS}? g_0 = {}, g_1 = {}", g[0], g[1]),
    );
    s.line(
        "2.g-derived",
        matches(q_frac(1, 2)),
        format!("g_n = (1/2) C(2n,n)/2^n/n! for n < {COFACTOR_TERMS} (forced by g(0) = (f(0) - p)/(0 - 1))"),
    );
}

fn criterion3(s: &mut Suite) {
    let inp = fixture("example3.json");
    let (a, t) = run(&inp);
    s.line(
        "3.operator",
        a.min_op.op.normalize() == inp.operator.normalize(),
        format!("L_min = {}", a.min_op.op),
    );
    s.line("3.order", a.inhom.s == a.min_op.op.order() && a.inhom.solution.is_none(), format!("s = {}, r = {}", a.inhom.s, a.min_op.op.order()));
    let roots: Vec<Q> = a.system.as_ref().map(|sys| sys.u0().rational_roots()).unwrap_or_default();
    let mut sorted = roots.clone();
    sorted.sort();
    let u0_ok = a.system.as_ref().is_some_and(|sys| factor_over_k(sys.u0()).iter().all(|(h, _)| h.deg() == 1));
    s.line("3.u0", u0_ok && sorted == vec![q(-1), q(0)], format!("u_0 = {}", a.system.as_ref().map(|x| x.u0().to_string()).unwrap_or_default()));
    let pts = points(&a);
    s.line("3.exceptional", same_point_set(&pts, &rational_points(&[(q(0), q(0))])), show(&pts));
    let d1: Vec<_> = a
        .derivative_exceptional
        .iter()
        .find(|(j, _)| *j == 1)
        .map(|(_, p)| p.iter().map(|e| (e.alpha.clone(), e.value.clone())).collect())
        .unwrap_or_default();
    let want = rational_points(&[(q(-1), q(0))]);
    s.line(
        "3.derivative",
        want.iter().all(|(x, v)| d1.iter().any(|(y, w)| x.same_value(y) && v.same_value(w))),
        format!("f' algebraic at {}", show(&d1)),
    );
    let (b, _) = run(&fixture("example3_nonminimal.json"));
    s.line(
        "3.nonminimal-input",
        b.min_op.op.normalize() == a.min_op.op.normalize() && same_point_set(&points(&b), &pts),
        format!("from D L: L_min = {}, rejected {}", b.min_op.op, b.min_op.rejected),
    );
    s.line("3.time", t < EXAMPLE3_LIMIT, format!("{:.3} s (limit {} s)", t.as_secs_f64(), EXAMPLE3_LIMIT.as_secs()));
}

fn criterion4(s: &mut Suite) {
    let f = NumberField::rational();
    let (a, t1) = run(&fixture("exp.json"));
    let pts = points(&a);
    let u0_const = a.system.as_ref().is_some_and(|x| x.u0().deg() == 0);
    s.line("4.exp", u0_const && same_point_set(&pts, &rational_points(&[(q(0), q(1))])), format!("{} , u_0 constant: {u0_const}", show(&pts)));
    let (b, t2) = run(&fixture("zm1exp.json"));
    let pts = points(&b);
    s.line("4.zm1exp", same_point_set(&pts, &rational_points(&[(q(0), q(-1)), (q(1), q(0))])), show(&pts));
    let diag = vec![vec![Poly::one(&f), Poly::zero(&f)], vec![Poly::zero(&f), Poly::from_i64s(&f, &[-1, 1])]];
    let m = b.desingularization.as_ref().map(|d| d.m.clone()).unwrap_or_default();
    s.line(
        "4.zm1exp-M",
        m == diag,
        format!("M = [{}]", m.iter().map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")).collect::<Vec<_>>().join("; ")),
    );
    s.line("4.time", t1 < EXP_LIMIT && t2 < EXP_LIMIT, format!("{:.3} s, {:.3} s (limit {} s)", t1.as_secs_f64(), t2.as_secs_f64(), EXP_LIMIT.as_secs()));
}

fn criterion5(s: &mut Suite) {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut nonzero_points = 0;
    let mut algebraic_k = 0;
    for i in 0..RANDOM_INSTANCES {
        let e = random_exp_poly(&mut rng, 6);
        algebraic_k += usize::from(!e.field.is_rational());
        let inp = e.input();
        let t = Instant::now();
        let a = match analyze(&inp, &Config::default()) {
            Ok(a) => a,
            Err(err) => {
                failures.push(format!("#{i}: {err}"));
                continue;
            }
        };
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        let f0 = AlgebraicNumber::from_kelem(&e.coefficients(1)[0]);
        let mut want = e.expected_exceptional();
        nonzero_points += want.len();
        want.push((AlgebraicNumber::rational(q(0)), f0));
        let got = points(&a);
        let vanishes = a.min_op.op.apply_series(&inp.series.coefficients(SERIES_CHECK + a.min_op.op.order())).iter().all(|x| x.is_zero());
        if a.partial.is_some() || a.verdict != Verdict::Transcendental || !vanishes || !same_point_set(&got, &want) || dt > RANDOM_LIMIT {
            failures.push(format!("#{i} {:?}: got {}, expected {}", e.terms.iter().map(|(l, p)| format!("({p}) e^({l} z)")).collect::<Vec<_>>(), show(&got), show(&want)));
        }
    }
    s.line(
        "5.lindemann",
        failures.is_empty(),
        format!(
            "{RANDOM_INSTANCES} instances ({algebraic_k} over Q(sqrt 2), {nonzero_points} nonzero exceptional points), slowest {:.3} s (limit {} s){}",
            slowest.as_secs_f64(),
            RANDOM_LIMIT.as_secs(),
            if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join(" | ")) }
        ),
    );
}

fn criterion6(s: &mut Suite) {
    for name in FIXTURES {
        let inp = fixture(name);
        let (a, _) = run(&inp);
        let l = &a.min_op.op;
        let a_ok = l.apply_series(&inp.series.coefficients(SERIES_CHECK + l.order())).iter().all(|x| x.is_zero());
        let b_ok = combination_constant_term(&a.inhom.q, &inp.series, RELATION_CHECK).is_ok_and(|c| c == a.inhom.c);
        let c_ok = match (&a.system, &a.desingularization) {
            (Some(sys), Some(d)) => terminal_certificate(&sys.b, &d.m),
            _ => matches!(a.verdict, Verdict::Polynomial(_)),
        };
        let notes = numeric_corroborate(&a, &inp.series, DIGITS);
        let enclosures = notes.iter().filter(|n| n.check.starts_with("series enclosure")).count();
        let d_ok = enclosure_violations(&notes).is_empty() && enclosures == a.exceptional.len();
        let config = Config::default();
        let report = build_report(&inp, &a, &config);
        let checks = verify_report(&report).map(|c| c.iter().all(|x| x.passed)).unwrap_or(false);
        s.line(
            &format!("6.{}", name.trim_end_matches(".json")),
            a_ok && b_ok && c_ok && d_ok && checks,
            format!("(a) L_min f = O(z^{SERIES_CHECK}) {a_ok}, (b) relation to z^{RELATION_CHECK} {b_ok}, (c) terminal {c_ok}, (d) {enclosures} enclosures at {DIGITS} digits {d_ok}; report re-verified {checks}"),
        );
    }
}

fn criterion7(s: &mut Suite) {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut rejected = 0;
    let mut mismatches = Vec::new();
    let fixtures = ["example2.json", "example3_nonminimal.json", "example1.json", "zm1exp.json"];
    for run_ix in 0..FORCED_N_RUNS {
        let inp = if run_ix < fixtures.len() {
            fixture(fixtures[run_ix])
        } else {
            let e = random_exp_poly(&mut rng, 4);
            let mu = KElem::from_i64(&e.field, rng.gen_range(-2..=2));
            let extra = DiffOp::new(&e.field, vec![Poly::constant(-&mu), Poly::one(&e.field)]);
            e.input_with(&extra.mul(&e.operator()))
        };
        let n = rng.gen_range(1..=4);
        let forced = min_operator(&inp, &Config { forced_n: Some(n), ..Config::default() });
        let free = min_operator(&inp, &Config::default());
        rejected += forced.rejected;
        if forced.op.normalize() != free.op.normalize() {
            mismatches.push(format!("run {run_ix} (N = {n}): {} vs {}", forced.op, free.op));
        }
    }
    s.line(
        "7.forced-N",
        mismatches.is_empty() && rejected > 0,
        format!("{FORCED_N_RUNS} runs, {rejected} spurious candidates rejected, L_min unchanged in all runs{}", if mismatches.is_empty() { String::new() } else { format!("; mismatches: {}", mismatches.join(" | ")) }),
    );
}

fn main() -> ExitCode {
    let mut s = Suite { unexpected: 0 };
    let criteria: [(&str, fn(&mut Suite)); 7] = [
        ("1", criterion1),
        ("2", criterion2),
        ("3", criterion3),
        ("4", criterion4),
        ("5", criterion5),
        ("6", criterion6),
        ("7", criterion7),
    ];
    for (id, c) in criteria {
        let t = Instant::now();
        c(&mut s);
        println!("criterion {id} took {:.3} s", t.elapsed().as_secs_f64());
    }
    if s.unexpected == 0 {
        println!("acceptance: all criteria pass except the known-red items above");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} unexpected failure(s)", s.unexpected);
        ExitCode::FAILURE
    }
}
