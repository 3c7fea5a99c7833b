//! Serializable analysis reports and their independent re-verification.

use serde::{Deserialize, Serialize};

use crate::arith::{format_q, parse_q, QPoly, Q};
use crate::corroborate::{numeric_corroborate, Note};
use crate::desingular::{terminal_certificate, Certificate, ExceptionalPoint};
use crate::diffop::DiffOp;
use crate::error::{EfaError, Result};
use crate::extension::compose_extension;
use crate::field::{same_root, AlgebraicNumber, Field};
use crate::input::{elem_doc, parse_elem, parse_poly, poly_doc, validate, ElemDoc, EFunctionInput, InputDoc, PolyDoc};
use crate::min_homog::certify_relation;
use crate::min_inhomog::{normalize, InhomEq, Verdict};
use crate::numeric::{CBall, Cq};
use crate::pipeline::{Analysis, Config};
use crate::poly::{factor_over_k, roots_of_irreducible, Poly};
use crate::ratfun::RatFun;
use crate::series::combination_laurent;
use crate::Clause;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatFunDoc {
    pub num: PolyDoc,
    pub den: PolyDoc,
}

/// Minimal polynomial over `Q` plus an isolating disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicDoc {
    pub min_poly: Vec<String>,
    pub center_re: String,
    pub center_im: String,
    pub radius: String,
    pub real: bool,
    pub decimal: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinOpDoc {
    pub operator: Vec<PolyDoc>,
    pub order: usize,
    pub degree_cap: usize,
    pub minimal_within_cap: bool,
    pub rejected_candidates: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InhomDoc {
    pub s: usize,
    pub q: Vec<RatFunDoc>,
    pub c: ElemDoc,
    pub u: Vec<PolyDoc>,
    pub rational_solution: Option<Vec<RatFunDoc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectDoc {
    pub factor: PolyDoc,
    pub row: Vec<PolyDoc>,
    pub value: PolyDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesingDoc {
    pub m: Vec<Vec<PolyDoc>>,
    pub steps: usize,
    pub iteration_cap: usize,
    pub skipped_factors: Vec<PolyDoc>,
    pub direct_relations: Vec<DirectDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertDoc {
    /// `origin`, `cokernel` or `direct`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<PolyDoc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDoc {
    pub alpha: AlgebraicDoc,
    /// Irreducible factor of `u_0` over the base field vanishing at `alpha`.
    pub factor: Option<PolyDoc>,
    /// The value is this polynomial evaluated at `alpha`.
    pub value_residue: PolyDoc,
    pub value: AlgebraicDoc,
    pub certificate: CertDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivDoc {
    pub j: usize,
    pub points: Vec<PointDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartDoc {
    pub factor: PolyDoc,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompDoc {
    pub p: PolyDoc,
    pub parts: Vec<PartDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: InputDoc,
    pub config: Config,
    /// `complete` or `partial`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial_reason: Option<String>,
    pub min_operator: MinOpDoc,
    pub inhomogeneous: InhomDoc,
    /// `polynomial` or `transcendental`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<PolyDoc>,
    pub desingularization: Option<DesingDoc>,
    pub exceptional: Vec<PointDoc>,
    pub derivative_exceptional: Vec<DerivDoc>,
    pub decomposition: Option<DecompDoc>,
    pub checks: Vec<CheckDoc>,
    pub corroboration: Vec<Note>,
    pub timings_ms: Vec<(String, u128)>,
}

impl AnalysisReport {
    pub fn is_partial(&self) -> bool {
        self.status == "partial"
    }
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| EfaError::Parse(e.to_string()))
    }
}

fn ratfun_doc(r: &RatFun) -> RatFunDoc {
    RatFunDoc { num: poly_doc(r.num()), den: poly_doc(r.den()) }
}

pub fn algebraic_doc(a: &AlgebraicNumber, digits: usize) -> AlgebraicDoc {
    AlgebraicDoc {
        min_poly: a.poly().coeffs().iter().map(format_q).collect(),
        center_re: format_q(&a.ball().center.re),
        center_im: format_q(&a.ball().center.im),
        radius: format_q(&a.ball().rad),
        real: a.is_real(),
        decimal: a.describe(digits),
    }
}

fn point_doc(e: &ExceptionalPoint, digits: usize) -> PointDoc {
    let certificate = match &e.certificate {
        Certificate::Origin => CertDoc { kind: "origin".into(), vector: None },
        Certificate::Cokernel(v) => CertDoc { kind: "cokernel".into(), vector: Some(v.iter().map(poly_doc).collect()) },
        Certificate::Direct(v) => CertDoc { kind: "direct".into(), vector: Some(v.iter().map(poly_doc).collect()) },
    };
    PointDoc {
        alpha: algebraic_doc(&e.alpha, digits),
        factor: e.factor.as_ref().map(poly_doc),
        value_residue: poly_doc(&e.value_residue),
        value: algebraic_doc(&e.value, digits),
        certificate,
    }
}

/// Builds the report, runs the numeric corroboration and the full re-verification.
pub fn build_report(input: &EFunctionInput, a: &Analysis, config: &Config) -> AnalysisReport {
    let digits = 20.min(config.digits);
    let inhom = &a.inhom;
    let u = a.system.as_ref().map(|s| s.u.iter().map(poly_doc).collect()).unwrap_or_default();
    let mut report = AnalysisReport {
        input: input.doc.clone(),
        config: config.clone(),
        status: if a.partial.is_some() { "partial" } else { "complete" }.into(),
        partial_reason: a.partial.clone(),
        min_operator: MinOpDoc {
            operator: a.min_op.op.coeffs().iter().map(poly_doc).collect(),
            order: a.min_op.op.order(),
            degree_cap: a.min_op.degree_cap,
            minimal_within_cap: a.min_op.minimal_within_cap,
            rejected_candidates: a.min_op.rejected,
        },
        inhomogeneous: InhomDoc {
            s: inhom.s,
            q: inhom.q.iter().map(ratfun_doc).collect(),
            c: elem_doc(&inhom.c),
            u,
            rational_solution: inhom.solution.as_ref().map(|y| y.iter().map(ratfun_doc).collect()),
        },
        verdict: match a.verdict {
            Verdict::Polynomial(_) => "polynomial".into(),
            Verdict::Transcendental => "transcendental".into(),
        },
        polynomial: match &a.verdict {
            Verdict::Polynomial(p) => Some(poly_doc(p)),
            Verdict::Transcendental => None,
        },
        desingularization: a.desingularization.as_ref().map(|d| DesingDoc {
            m: d.m.iter().map(|r| r.iter().map(poly_doc).collect()).collect(),
            steps: d.steps,
            iteration_cap: d.cap,
            skipped_factors: d.skipped.iter().map(poly_doc).collect(),
            direct_relations: d
                .direct
                .iter()
                .map(|r| DirectDoc {
                    factor: poly_doc(&r.factor),
                    row: r.row.iter().map(poly_doc).collect(),
                    value: poly_doc(&r.value),
                })
                .collect(),
        }),
        exceptional: a.exceptional.iter().map(|e| point_doc(e, digits)).collect(),
        derivative_exceptional: a
            .derivative_exceptional
            .iter()
            .map(|(j, pts)| DerivDoc { j: *j, points: pts.iter().map(|e| point_doc(e, digits)).collect() })
            .collect(),
        decomposition: a.decomposition.as_ref().map(|d| DecompDoc {
            p: poly_doc(&d.p),
            parts: d.parts.iter().map(|(h, m)| PartDoc { factor: poly_doc(h), multiplicity: *m }).collect(),
        }),
        checks: vec![],
        corroboration: numeric_corroborate(a, &input.series, config.digits),
        timings_ms: a.timings_ms.clone(),
    };
    report.checks = verify_report(&report).unwrap_or_else(|e| {
        vec![CheckDoc { name: "report re-verification".into(), passed: false, detail: e.to_string() }]
    });
    report
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> CheckDoc {
    CheckDoc { name: name.into(), passed, detail: if passed { String::new() } else { detail.into() } }
}

fn parse_algebraic(d: &AlgebraicDoc) -> Result<AlgebraicNumber> {
    let pq = |s: &String| parse_q(s).ok_or_else(|| EfaError::Parse(format!("bad rational {s:?} in report")));
    let poly = QPoly::new(d.min_poly.iter().map(pq).collect::<Result<Vec<Q>>>()?);
    let ball = CBall::new(Cq::new(pq(&d.center_re)?, pq(&d.center_im)?), pq(&d.radius)?);
    Ok(AlgebraicNumber::new(poly, ball, d.real))
}

/// The stored algebraic number is the root of `h` (or the value `r(alpha)`) it claims to be.
fn same_algebraic(stored: &AlgebraicNumber, fresh: &AlgebraicNumber) -> bool {
    stored.poly() == fresh.poly() && same_root(fresh.poly(), stored.ball(), fresh.ball())
}

fn parse_ratfun(field: &Field, d: &RatFunDoc) -> Result<RatFun> {
    let num = parse_poly(field, &d.num, Clause::Operator, "report")?;
    let den = parse_poly(field, &d.den, Clause::Operator, "report")?;
    if den.is_zero() {
        return Err(EfaError::Parse("zero denominator in report".into()));
    }
    Ok(RatFun::new(num, den))
}

/// Recomputes every certificate in `report` from its own contents.
pub fn verify_report(report: &AnalysisReport) -> Result<Vec<CheckDoc>> {
    let input = validate(report.input.clone())?;
    let field = input.field.clone();
    let f = &input.series;
    let cfg = &report.config;
    let mut out = Vec::new();
    let pp = |d: &PolyDoc| parse_poly(&field, d, Clause::Operator, "report");

    // Minimal operator.
    let l_min = DiffOp::new(&field, report.min_operator.operator.iter().map(pp).collect::<Result<Vec<_>>>()?);
    let n = cfg.series_check_order;
    let image = l_min.apply_series(&f.coefficients(n + l_min.order() + 1));
    let bad = image.iter().take(n).position(|x| !x.is_zero());
    out.push(check(
        &format!("L_min f vanishes to order {n}"),
        bad.is_none(),
        format!("coefficient {} is nonzero", bad.unwrap_or(0)),
    ));
    out.push(check(
        "L_min f = 0 (annihilator-of-image certificate)",
        !l_min.is_zero() && certify_relation(&input.operator, &l_min, f),
        "certificate failed",
    ));

    // Inhomogeneous relation.
    let inh = &report.inhomogeneous;
    let q = inh.q.iter().map(|d| parse_ratfun(&field, d)).collect::<Result<Vec<_>>>()?;
    let c = parse_elem(&field, &inh.c, Clause::Operator, "report")?;
    let rc = cfg.relation_check_order as i64;
    let (v, lc) = combination_laurent(&q, f, rc);
    let bad = lc.iter().enumerate().find(|(i, x)| {
        let e = v + *i as i64;
        if e == 0 {
            !(*x - &c).is_zero()
        } else {
            !x.is_zero()
        }
    });
    out.push(check(
        &format!("relation residual vanishes to order {rc}"),
        bad.is_none(),
        format!("Laurent coefficient of z^{} is nonzero", bad.map_or(0, |(i, _)| v + i as i64)),
    ));
    if let Some(y) = &inh.rational_solution {
        let y = y.iter().map(|d| parse_ratfun(&field, d)).collect::<Result<Vec<_>>>()?;
        let sys = crate::min_inhomog::companion_system(&l_min);
        out.push(check("rational solution satisfies the companion system", sys.is_solution(&y), "residual nonzero"));
    }

    if report.verdict == "polynomial" {
        let p = pp(report.polynomial.as_ref().ok_or_else(|| EfaError::Parse("missing polynomial".into()))?)?;
        let coeffs = f.coefficients(n);
        let ok = (0..n).all(|k| coeffs[k] == p.coeff(k));
        out.push(check("f equals the reported polynomial", ok, "coefficient mismatch"));
        return Ok(out);
    }

    let eq = InhomEq { s: inh.s, q: q.clone(), c, solution: None };
    let sys = normalize(&eq);
    let u_ok = inh.u.len() == sys.u.len() && inh.u.iter().zip(&sys.u).all(|(d, p)| pp(d).map(|x| &x == p).unwrap_or(false));
    out.push(check("normalized system matches (u_0, ..., u_{s+1})", u_ok, "mismatch"));
    let Some(des) = &report.desingularization else {
        out.push(check("singularity removal completed", !report.is_partial(), "partial report"));
        return Ok(out);
    };
    let m: Vec<Vec<Poly>> =
        des.m.iter().map(|r| r.iter().map(pp).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    let skipped = des.skipped_factors.iter().map(pp).collect::<Result<Vec<_>>>()?;
    if skipped.is_empty() {
        out.push(check(
            "M^-1 B M - M^-1 M' has poles only at 0",
            terminal_certificate(&sys.b, &m),
            "a nonzero pole remains",
        ));
    } else {
        // Fast mode leaves poles at the skipped factors only.
        let nsys = crate::desingular::transformed_system(&sys.b, &m);
        let ok = nsys.iter().flatten().all(|x| {
            let mut d = x.den().clone();
            while d.valuation() > 0 {
                d = d.exact_div(&Poly::x(&field));
            }
            factor_over_k(&d).iter().all(|(h, _)| skipped.contains(h))
        });
        out.push(check("transformed system has poles only at 0 and skipped factors", ok, "unexpected pole"));
    }
    out.push(check("M has first row e_0", m[0][0].is_one() && m[0][1..].iter().all(|p| p.is_zero()), "bad first row"));

    let nonzero_factors: Vec<Poly> =
        factor_over_k(sys.u0()).into_iter().map(|(h, _)| h).filter(|h| h.valuation() == 0).collect();
    let mut lists: Vec<(usize, &Vec<PointDoc>)> = vec![(0, &report.exceptional)];
    lists.extend(report.derivative_exceptional.iter().map(|d| (d.j, &d.points)));
    for (j, pts) in lists {
        let origin = f.derivative_coefficients(j, 1)[0].clone();
        // Completeness: a factor is listed iff its cokernel test passes.
        for h in &nonzero_factors {
            if skipped.contains(h) {
                continue;
            }
            let passes = (1..m.len()).all(|k| m[j + 1][k].rem(h).is_zero());
            let listed = pts.iter().any(|p| p.factor.as_ref().map(pp).transpose().ok().flatten().as_ref() == Some(h));
            out.push(check(
                &format!("f^({j}) at the roots of {h}: listed iff the cokernel test passes"),
                passes == listed,
                format!("test {passes}, listed {listed}"),
            ));
        }
        for p in pts {
            out.push(verify_point(&field, p, j, &m, &origin, &skipped)?);
        }
    }

    if let Some(d) = &report.decomposition {
        let p = pp(&d.p)?;
        let mut ok = true;
        for part in &d.parts {
            let h = pp(&part.factor)?;
            if skipped.contains(&h) {
                let direct = des.direct_relations.iter().find(|r| pp(&r.factor).ok().as_ref() == Some(&h));
                ok &= part.multiplicity == 1
                    && match direct {
                        Some(r) => (&p - &pp(&r.value)?).rem(&h).is_zero(),
                        None => false,
                    };
                continue;
            }
            for i in 0..part.multiplicity {
                let row = &m[i + 1];
                let mut pi = p.clone();
                for _ in 0..i {
                    pi = pi.derivative();
                }
                ok &= (1..m.len()).all(|k| row[k].rem(&h).is_zero()) && (&pi - &row[0]).rem(&h).is_zero();
            }
        }
        out.push(check("decomposition interpolates the algebraic derivative values", ok, "interpolation mismatch"));
    }

    let violations: Vec<&Note> =
        report.corroboration.iter().filter(|n| !n.passed && n.check.starts_with("series enclosure")).collect();
    out.push(check(
        "numeric enclosures contain every claimed value",
        violations.is_empty(),
        violations.iter().map(|n| n.point.clone()).collect::<Vec<_>>().join(", "),
    ));
    Ok(out)
}

fn verify_point(
    field: &Field,
    p: &PointDoc,
    j: usize,
    m: &[Vec<Poly>],
    origin: &crate::field::KElem,
    skipped: &[Poly],
) -> Result<CheckDoc> {
    let pp = |d: &PolyDoc| parse_poly(field, d, Clause::Operator, "report");
    let alpha = parse_algebraic(&p.alpha)?;
    let value = parse_algebraic(&p.value)?;
    let residue = pp(&p.value_residue)?;
    let Some(hd) = &p.factor else {
        let ok = alpha.is_zero()
            && residue.is_constant()
            && &residue.coeff(0) == origin
            && same_algebraic(&value, &AlgebraicNumber::from_kelem(origin));
        return Ok(check(&format!("f^({j})(0) equals the Taylor coefficient"), ok, "mismatch"));
    };
    let h = pp(hd)?;
    let name = format!("f^({j}) at {}", p.alpha.decimal);
    let Some(root) = roots_of_irreducible(&h).into_iter().find(|r| same_algebraic(&alpha, r)) else {
        return Ok(check(&name, false, "alpha is not a root of its factor"));
    };
    let ext = compose_extension(field, &root);
    let fresh = AlgebraicNumber::from_kelem(&ext.embed_poly(&residue).eval(&ext.alpha));
    if !same_algebraic(&value, &fresh) {
        return Ok(check(&name, false, "value does not match its residue"));
    }
    let vector: Vec<Poly> =
        p.certificate.vector.as_ref().map(|v| v.iter().map(pp).collect::<Result<Vec<_>>>()).transpose()?.unwrap_or_default();
    let ok = match p.certificate.kind.as_str() {
        "cokernel" => {
            let shape = vector.len() == m.len()
                && (&vector[0] + &residue).rem(&h).is_zero()
                && vector[j + 1].is_one()
                && vector.iter().enumerate().all(|(i, x)| i == 0 || i == j + 1 || x.is_zero());
            // lambda M = 0 modulo h.
            let kernel = (0..m.len()).all(|col| {
                let s = (0..m.len()).fold(Poly::zero(field), |acc, i| &acc + &(&vector[i] * &m[i][col]));
                s.rem(&h).is_zero()
            });
            shape && kernel
        }
        "direct" => {
            // A relation row x + y f(alpha) = 0 with value = -x/y.
            j == 0
                && skipped.contains(&h)
                && vector.len() >= 2
                && !vector[1].rem(&h).is_zero()
                && (&vector[0] + &(&vector[1] * &residue)).rem(&h).is_zero()
        }
        _ => false,
    };
    Ok(check(&name, ok, "certificate does not verify"))
}

/// Reruns the checks and returns the failing ones.
pub fn failing_checks(report: &AnalysisReport) -> Result<Vec<CheckDoc>> {
    Ok(verify_report(report)?.into_iter().filter(|c| !c.passed).collect())
}

/// A rational function rendered for display.
pub fn ratfun_string(d: &RatFunDoc, field: &Field) -> String {
    match parse_ratfun(field, d) {
        Ok(r) => r.to_string(),
        Err(_) => "?".into(),
    }
}

pub fn verdict_of(a: &Analysis) -> &'static str {
    match a.verdict {
        Verdict::Polynomial(_) => "polynomial",
        Verdict::Transcendental => "transcendental",
    }
}
