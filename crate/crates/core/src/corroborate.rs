//! Numeric sanity checks of an analysis by summing the Taylor series in ball
//! arithmetic.
//!
//! What is certified: every partial sum `sum_{n<N} f_n alpha^n` is enclosed
//! rigorously (rounding and the uncertainty of `alpha` are propagated).
//! What is not: the tail `sum_{n>=N}`. E-function growth constants are not part
//! of the input, so the tail is estimated by the size of the last terms. The
//! exclusion of small-height rationals at non-exceptional points is a heuristic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{q, Q};
use crate::field::{AlgebraicNumber, KElem};
use crate::numeric::ball::two_pow_neg;
use crate::numeric::{CBall, Cq};
use crate::pipeline::Analysis;
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Note {
    pub point: String,
    pub check: String,
    /// False for heuristic checks.
    pub certified: bool,
    pub passed: bool,
    pub detail: String,
}

fn bits_for(digits: usize) -> u64 {
    (digits as f64 * 3.33).ceil() as u64 + 32
}

/// `sum f_n z^n` until the terms stay below `2^-bits`; the radius includes a
/// tail estimate of twice the largest of the last five terms.
pub fn series_enclosure(f: &Series, z: &CBall, digits: usize) -> CBall {
    let bits = bits_for(digits);
    let eps = two_pow_neg(bits);
    let prec = bits + 32;
    let coeff_target = two_pow_neg(bits + 16);
    let mut sum = CBall::zero();
    let mut pow = CBall::one();
    let mut recent: Vec<Q> = Vec::new();
    let mut len = 64;
    let mut coeffs = f.coefficients(len);
    let mut n = 0;
    loop {
        if n == len {
            len *= 2;
            coeffs = f.coefficients(len);
        }
        // The coefficient error is amplified by |z|^n.
        let scale = pow.mag_upper().max(q(1));
        let term = coeffs[n].to_ball(&(&coeff_target / scale)).mul(&pow).round(prec);
        recent.push(term.mag_upper());
        if recent.len() > 5 {
            recent.remove(0);
        }
        sum = sum.add(&term).round(prec);
        pow = pow.mul(z).round(prec);
        n += 1;
        if n >= 16 && recent.iter().all(|m| *m < eps) || n >= 4096 {
            break;
        }
    }
    let tail = recent.iter().max().cloned().unwrap_or_else(|| q(0)) * q(2);
    CBall::new(sum.center, sum.rad + tail)
}

fn point_label(a: &AlgebraicNumber) -> String {
    a.describe(12)
}

fn value_ball(v: &AlgebraicNumber, digits: usize) -> CBall {
    let b = v.refine(&two_pow_neg(bits_for(digits))).ball().clone();
    if v.is_real() {
        CBall::new(Cq::real(b.center.re), b.rad)
    } else {
        b
    }
}

/// Small-height rationals `p/d` (|p|, d <= 10) lying in `ball`.
fn small_rationals_in(ball: &CBall) -> Vec<Q> {
    let mut hits = Vec::new();
    for d in 1..=10i64 {
        for p in -10..=10i64 {
            let x = Q::new(p.into(), d.into());
            if ball.contains_point(&Cq::real(x.clone())) && !hits.contains(&x) {
                hits.push(x);
            }
        }
    }
    hits
}

pub fn numeric_corroborate(a: &Analysis, f: &Series, digits: usize) -> Vec<Note> {
    let field = f.field().clone();
    let mut notes = Vec::new();
    for e in &a.exceptional {
        let z = value_ball(&e.alpha, digits);
        let enc = series_enclosure(f, &z, digits);
        let claim = value_ball(&e.value, digits);
        let ok = enc.overlaps(&claim);
        notes.push(Note {
            point: point_label(&e.alpha),
            check: "series enclosure contains the claimed value".into(),
            certified: false,
            passed: ok,
            detail: format!("sum = {}, claimed {}", enc.to_decimal(digits.min(30)), e.value.describe(digits.min(30))),
        });
    }
    let Some(sys) = &a.system else { return notes };
    if a.exceptional.is_empty() {
        return notes;
    }
    // Non-exceptional points: small rationals that are not roots of u_0.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tried = 0;
    while tried < 3 {
        let x = Q::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=7).into());
        let xk = KElem::from_q(&field, x.clone());
        if x == q(0) || sys.u0().eval(&xk).is_zero() {
            continue;
        }
        tried += 1;
        let enc = series_enclosure(f, &CBall::from_q(x.clone()), digits);
        let hits = small_rationals_in(&enc);
        notes.push(Note {
            point: crate::arith::format_q(&x),
            check: "enclosure excludes rationals of height <= 10 (heuristic)".into(),
            certified: false,
            passed: hits.is_empty(),
            detail: format!("f({}) ~ {}", crate::arith::format_q(&x), enc.to_decimal(digits.min(30))),
        });
    }
    notes
}

/// The hard failures: an exceptional value outside its enclosure.
pub fn enclosure_violations(notes: &[Note]) -> Vec<&Note> {
    notes.iter().filter(|n| !n.passed && n.check.starts_with("series enclosure")).collect()
}
