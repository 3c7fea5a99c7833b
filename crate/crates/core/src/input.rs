//! JSON input: the annihilating operator, the initial Taylor coefficients and the
//! E-function guarantee, validated clause by clause.
//!
//! Rationals are `"n/d"` strings, field elements are arrays of coordinates on the
//! power basis of the generator (a bare string is accepted for a rational
//! element), polynomials are ascending coefficient arrays.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arith::{format_q, parse_q, QPoly, Q};
use crate::diffop::DiffOp;
use crate::error::{Clause, EfaError, Result};
use crate::field::{Field, KElem, NumberField};
use crate::numeric::Cq;
use crate::poly::Poly;
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemDoc {
    Rational(String),
    Coords(Vec<String>),
}

pub type PolyDoc = Vec<ElemDoc>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxDoc {
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldDoc {
    /// Ascending rational coefficients of a monic irreducible polynomial.
    pub min_poly: Vec<String>,
    /// Decimal approximation selecting the root used as generator.
    pub root_approx: ApproxDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDoc>,
    /// `a_0, ..., a_r` of `sum a_i(z) D^i`.
    pub operator: Vec<PolyDoc>,
    /// `f_0, f_1, ...` with `f = sum f_n z^n`.
    pub initial_coeffs: Vec<ElemDoc>,
    /// The caller's guarantee that `f` is an E-function.
    #[serde(default)]
    pub oracle: Option<bool>,
}

/// A validated input.
pub struct EFunctionInput {
    pub doc: InputDoc,
    pub field: Field,
    pub operator: DiffOp,
    pub series: Series,
}

impl std::fmt::Debug for EFunctionInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EFunctionInput").field("doc", &self.doc).finish()
    }
}

fn parse_rational(s: &str, clause: Clause, what: &str) -> Result<Q> {
    parse_q(s).ok_or_else(|| EfaError::validation(clause, format!("{what}: cannot parse rational {s:?}")))
}

pub fn parse_elem(field: &Field, e: &ElemDoc, clause: Clause, what: &str) -> Result<KElem> {
    let coords = match e {
        ElemDoc::Rational(s) => vec![parse_rational(s, clause, what)?],
        ElemDoc::Coords(v) => v.iter().map(|s| parse_rational(s, clause, what)).collect::<Result<_>>()?,
    };
    if coords.len() > field.degree().max(1) {
        return Err(EfaError::validation(
            clause,
            format!("{what}: {} coordinates for a field of degree {}", coords.len(), field.degree()),
        ));
    }
    Ok(KElem::from_coords(field, coords))
}

pub fn parse_poly(field: &Field, p: &PolyDoc, clause: Clause, what: &str) -> Result<Poly> {
    let c = p.iter().map(|e| parse_elem(field, e, clause, what)).collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(field, c))
}

pub fn elem_doc(x: &KElem) -> ElemDoc {
    if x.field().is_rational() {
        ElemDoc::Rational(format_q(&x.dense_coords()[0]))
    } else {
        ElemDoc::Coords(x.dense_coords().iter().map(format_q).collect())
    }
}

pub fn poly_doc(p: &Poly) -> PolyDoc {
    p.coeffs().iter().map(elem_doc).collect()
}

pub fn parse_field(doc: &Option<FieldDoc>) -> Result<Field> {
    let Some(fd) = doc else { return Ok(NumberField::rational()) };
    let coeffs =
        fd.min_poly.iter().map(|s| parse_rational(s, Clause::Operator, "field.min_poly")).collect::<Result<Vec<_>>>()?;
    let p = QPoly::new(coeffs);
    if p.deg() == 0 {
        return Err(EfaError::validation(Clause::Operator, "field.min_poly must have positive degree"));
    }
    let re: f64 = fd.root_approx.re.parse().map_err(|_| {
        EfaError::validation(Clause::Operator, format!("field.root_approx.re: bad number {:?}", fd.root_approx.re))
    })?;
    let im: f64 = fd.root_approx.im.parse().map_err(|_| {
        EfaError::validation(Clause::Operator, format!("field.root_approx.im: bad number {:?}", fd.root_approx.im))
    })?;
    if p.deg() == 1 {
        return Ok(NumberField::rational());
    }
    NumberField::new(&p, &Cq::from_f64(re, im))
}

/// Builds and validates an input document.
pub fn validate(doc: InputDoc) -> Result<EFunctionInput> {
    match doc.oracle {
        Some(true) => {}
        Some(false) => {
            return Err(EfaError::validation(
                Clause::Oracle,
                "oracle flag is false: the series is not guaranteed to be an E-function",
            ))
        }
        None => {
            return Err(EfaError::validation(
                Clause::Oracle,
                "missing oracle flag: the series is not guaranteed to be an E-function",
            ))
        }
    }
    let field = parse_field(&doc.field)?;
    let coeffs = doc
        .operator
        .iter()
        .enumerate()
        .map(|(i, p)| parse_poly(&field, p, Clause::Operator, &format!("operator coefficient a_{i}")))
        .collect::<Result<Vec<_>>>()?;
    let operator = DiffOp::new(&field, coeffs);
    if operator.is_zero() || operator.order() == 0 {
        return Err(EfaError::validation(Clause::Operator, "the operator must have order at least 1"));
    }
    let initial = doc
        .initial_coeffs
        .iter()
        .enumerate()
        .map(|(n, e)| parse_elem(&field, e, Clause::Coefficients, &format!("initial coefficient f_{n}")))
        .collect::<Result<Vec<_>>>()?;
    let series = Series::new(&operator, initial)?;
    Ok(EFunctionInput { doc, field, operator, series })
}

pub fn parse_input_str(text: &str) -> Result<EFunctionInput> {
    let doc: InputDoc = serde_json::from_str(text).map_err(|e| EfaError::Parse(e.to_string()))?;
    validate(doc)
}

pub fn parse_input(path: &Path) -> Result<EFunctionInput> {
    let text = std::fs::read_to_string(path)?;
    parse_input_str(&text)
}
