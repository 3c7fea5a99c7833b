//! The full analysis: minimal operator, minimal inhomogeneous relation,
//! singularity removal and exceptional points.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::desingular::{
    compute_m, exceptional_derivative_values, exceptional_points, polynomial_part_decomposition, Decomposition,
    Desingularization, ExceptionalPoint,
};
use crate::error::{EfaError, Result};
use crate::input::EFunctionInput;
use crate::min_homog::{default_degree_cap, find_min_operator, MinOpResult, SearchOptions};
use crate::min_inhomog::{minimal_inhomogeneous, normalize, transcendence_verdict, InhomEq, SystemMatrix, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Coefficient degree cap for the minimal-operator search; default `4 deg L + 16`.
    pub degree_cap: Option<usize>,
    /// Order to which `L_min f` is checked to vanish.
    pub series_check_order: usize,
    /// Order to which the inhomogeneous relation residual is checked.
    pub relation_check_order: usize,
    /// Skip singularity removal where a direct relation already gives `f(alpha)`.
    pub fast: bool,
    /// Working precision (decimal digits) of the numeric corroboration.
    pub digits: usize,
    /// Forced first truncation order of the cokernel search.
    pub forced_n: Option<usize>,
    /// Override of the singularity-removal step cap.
    pub iteration_cap: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            degree_cap: None,
            series_check_order: 200,
            relation_check_order: 100,
            fast: false,
            digits: 50,
            forced_n: None,
            iteration_cap: None,
        }
    }
}

pub struct Analysis {
    pub min_op: MinOpResult,
    pub inhom: InhomEq,
    pub verdict: Verdict,
    pub system: Option<SystemMatrix>,
    pub desingularization: Option<Desingularization>,
    /// Points where `f` is algebraic; empty when the verdict is polynomial or the run is partial.
    pub exceptional: Vec<ExceptionalPoint>,
    /// `(j, points)` for `f^(j)`, `1 <= j < s`.
    pub derivative_exceptional: Vec<(usize, Vec<ExceptionalPoint>)>,
    pub decomposition: Option<Decomposition>,
    /// Why the run stopped short (iteration cap), if it did.
    pub partial: Option<String>,
    pub timings_ms: Vec<(String, u128)>,
}

/// Step 2 only.
pub fn min_operator(input: &EFunctionInput, config: &Config) -> MinOpResult {
    let cap = config.degree_cap.unwrap_or_else(|| default_degree_cap(&input.operator));
    find_min_operator(&input.series, cap, &SearchOptions { forced_n: config.forced_n })
}

pub fn analyze(input: &EFunctionInput, config: &Config) -> Result<Analysis> {
    let mut timings = Vec::new();
    let t = Instant::now();
    let min_op = min_operator(input, config);
    timings.push(("min_operator".to_string(), t.elapsed().as_millis()));

    let t = Instant::now();
    let inhom = minimal_inhomogeneous(&min_op.op, &input.series, config.relation_check_order)?;
    let verdict = transcendence_verdict(&inhom);
    timings.push(("min_inhomogeneous".to_string(), t.elapsed().as_millis()));

    let mut analysis = Analysis {
        min_op,
        inhom,
        verdict,
        system: None,
        desingularization: None,
        exceptional: vec![],
        derivative_exceptional: vec![],
        decomposition: None,
        partial: None,
        timings_ms: timings,
    };
    if let Verdict::Polynomial(_) = analysis.verdict {
        return Ok(analysis);
    }

    let t = Instant::now();
    let sys = normalize(&analysis.inhom);
    let des = match compute_m(&sys, config.iteration_cap, config.fast) {
        Ok(d) => d,
        Err(EfaError::CapExhausted(msg)) => {
            analysis.system = Some(sys);
            analysis.partial = Some(msg);
            return Ok(analysis);
        }
        Err(e) => return Err(e),
    };
    analysis.timings_ms.push(("desingularization".to_string(), t.elapsed().as_millis()));

    let t = Instant::now();
    analysis.exceptional = exceptional_points(&sys, &des, &input.series);
    analysis.derivative_exceptional =
        (1..analysis.inhom.s).map(|j| (j, exceptional_derivative_values(&sys, &des, j, &input.series))).collect();
    analysis.decomposition = polynomial_part_decomposition(&sys, &des);
    analysis.timings_ms.push(("exceptional_points".to_string(), t.elapsed().as_millis()));
    analysis.system = Some(sys);
    analysis.desingularization = Some(des);
    Ok(analysis)
}
