//! Command model behind the `hvir` binary.
//!
//! Arguments are parsed and validated into a [`Command`] before anything is
//! computed; [`run`] is a pure function of the command (apart from reading a
//! table file for `recover`).

use std::fmt::Write as _;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{AlgebraElement, AlgebraError, PhiVariant, RescalingMap};
use crate::analysis::{
    closure, recover_params, reducibility_scan, restriction_report, ActionTable, AnalysisError, Report,
    Window,
};
use crate::groups::{GroupError, SubgroupSpec};
use crate::intermediate::{act, classify, iso_check, IsoWitness, ModuleError, ModuleParams, WeightVector};
use crate::parse::{ParamsError, SyntaxError};
use crate::scalar::{Rational, RationalParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputMode {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verb {
    Bracket { x: AlgebraElement, y: AlgebraElement },
    Jacobi { k: u32, bound: u32, samples: Option<usize>, seed: u64 },
    Act { params: ModuleParams, x: AlgebraElement, at: Rational },
    Classify { params: ModuleParams },
    Iso { p1: ModuleParams, p2: ModuleParams },
    Phi { map: RescalingMap, x: AlgebraElement },
    Closure { params: ModuleParams, window: Window, seeds: Vec<Rational> },
    Scan { params: ModuleParams, window: Window },
    Restrict { params: ModuleParams, subgroup: SubgroupSpec, window: Window },
    Recover { table: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub verb: Verb,
    pub output: OutputMode,
}

impl Command {
    pub fn text(verb: Verb) -> Self {
        Command { verb, output: OutputMode::Text }
    }

    pub fn structured(verb: Verb) -> Self {
        Command { verb, output: OutputMode::Structured }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Rational(#[from] RationalParseError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("jacobi identity fails for {0} triples")]
    JacobiFailure(usize),
}

impl CliError {
    /// Stable error code printed with every diagnostic.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Syntax(_) | CliError::Rational(_) => "E_PARSE",
            CliError::Group(_) => "E_GROUP",
            CliError::Params(_) => "E_PARAMS",
            CliError::Algebra(_) => "E_ALGEBRA",
            CliError::Module(_) => "E_MODULE",
            CliError::Analysis(_) => "E_ANALYSIS",
            CliError::Io { .. } => "E_IO",
            CliError::Usage(_) => "E_USAGE",
            CliError::JacobiFailure(_) => "E_JACOBI",
        }
    }

    pub fn exit_status(&self) -> i32 {
        match self {
            CliError::Syntax(_)
            | CliError::Rational(_)
            | CliError::Group(_)
            | CliError::Params(_)
            | CliError::Usage(_) => 2,
            CliError::Algebra(_) | CliError::Module(_) | CliError::Analysis(_) => 3,
            CliError::Io { .. } => 4,
            CliError::JacobiFailure(_) => 5,
        }
    }
}

/// Builds a window over `group`, which must be cyclic.
pub fn window_for(group: &SubgroupSpec, bound: u32) -> Result<Window, CliError> {
    Ok(Window::new(group.clone(), bound)?)
}

#[derive(Serialize)]
struct Value<'a, T: Serialize> {
    verb: &'a str,
    result: T,
}

fn structured<T: Serialize>(verb: &str, result: T) -> String {
    serde_json::to_string_pretty(&Value { verb, result }).expect("serializable") + "\n"
}

/// Executes a command and returns what it prints on success.
pub fn run(cmd: &Command) -> Result<String, CliError> {
    let json = cmd.output == OutputMode::Structured;
    match &cmd.verb {
        Verb::Bracket { x, y } => {
            let z = x.bracket(y);
            Ok(if json { structured("bracket", z.to_string()) } else { format!("{z}\n") })
        }
        Verb::Jacobi { k, bound, samples, seed } => {
            let (checked, failures) = jacobi_sweep(*k, *bound, *samples, *seed);
            if failures > 0 {
                return Err(CliError::JacobiFailure(failures));
            }
            Ok(if json {
                structured("jacobi", checked)
            } else {
                format!("checked {checked} triples, 0 failures\n")
            })
        }
        Verb::Act { params, x, at } => {
            let v = act(params, x, &WeightVector::basis(at.clone()))?;
            Ok(if json { structured("act", v.to_string()) } else { format!("{v}\n") })
        }
        Verb::Classify { params } => {
            let c = classify(params);
            Ok(if json {
                let report =
                    Report { params: Some(params.clone()), verdict: Some(c.verdict), ..Report::default() };
                report.to_json() + "\n"
            } else {
                format!("verdict: {}\nsubquotient: {}\n", c.verdict, c.subquotient)
            })
        }
        Verb::Iso { p1, p2 } => {
            let w = iso_check(p1, p2)?;
            if json {
                return Ok(structured("iso", &w));
            }
            Ok(match w {
                Some(IsoWitness::Shift(g)) => format!("isomorphic: true\nwitness: shift {g}\n"),
                Some(IsoWitness::SubquotientSwap) => {
                    "isomorphic: true\nwitness: v'(h) -> h*w(h)\n".to_string()
                }
                Some(IsoWitness::DensitySwap(g)) => {
                    format!("isomorphic: true\nwitness: v(q) -> (alpha+q)*w(q-{g})\n")
                }
                None => "isomorphic: false\n".to_string(),
            })
        }
        Verb::Phi { map, x } => {
            let y = map.apply(x)?;
            Ok(if json { structured("phi", y.to_string()) } else { format!("{y}\n") })
        }
        Verb::Closure { params, window, seeds } => {
            let seeds: Vec<_> = seeds.iter().cloned().map(WeightVector::basis).collect();
            let span = closure(params, window, &seeds)?;
            let report = Report {
                params: Some(params.clone()),
                window: Some(window.clone()),
                dimensions: Some(vec![span.dim()]),
                basis_indices: Some(span.pivots()),
                ..Report::default()
            };
            if json {
                return Ok(report.to_json() + "\n");
            }
            let mut out = format!("dimension: {} of {}\n", span.dim(), window.size());
            for row in span.rows() {
                let _ = writeln!(out, "  {row}");
            }
            Ok(out)
        }
        Verb::Scan { params, window } => {
            let scan = reducibility_scan(params, window)?;
            let report = Report {
                params: Some(params.clone()),
                window: Some(window.clone()),
                verdict: Some(scan.classification.verdict),
                dimensions: Some(scan.dimensions.clone()),
                basis_indices: Some(window.indices()),
                ..Report::default()
            };
            if json {
                return Ok(report.to_json() + "\n");
            }
            let mut out = format!("verdict: {}\n", scan.classification.verdict);
            for (q, d) in window.indices().iter().zip(&scan.dimensions) {
                let _ = writeln!(out, "  closure(v({q})) has dimension {d}");
            }
            Ok(out)
        }
        Verb::Restrict { params, subgroup, window } => {
            let cosets = restriction_report(params, subgroup, window)?;
            if json {
                let report = Report {
                    params: Some(params.clone()),
                    window: Some(window.clone()),
                    cosets: Some(cosets),
                    ..Report::default()
                };
                return Ok(report.to_json() + "\n");
            }
            let mut out = String::new();
            for c in &cosets {
                let _ = writeln!(out, "{} + {}: {}", c.representative, subgroup, c.params);
            }
            Ok(out)
        }
        Verb::Recover { table } => {
            let text = std::fs::read_to_string(table)
                .map_err(|source| CliError::Io { path: table.clone(), source })?;
            let table: ActionTable = text.parse()?;
            let rec = recover_params(&table)?;
            if json {
                #[derive(Serialize)]
                struct Scale<'a> {
                    index: &'a Rational,
                    scale: &'a Rational,
                }
                #[derive(Serialize)]
                struct Recovered<'a> {
                    params: &'a ModuleParams,
                    scales: Vec<Scale<'a>>,
                }
                let scales = rec.scales.iter().map(|(index, scale)| Scale { index, scale }).collect();
                return Ok(structured("recover", Recovered { params: &rec.params, scales }));
            }
            let mut out = format!("params: {}\nscales:\n", rec.params);
            for (q, c) in &rec.scales {
                let _ = writeln!(out, "  v({q}): {c}");
            }
            Ok(out)
        }
    }
}

/// Basis symbols `d_g`, `I(g)` for `g = n/k!`, `|n| ≤ bound`, plus the center.
pub fn window_basis(k: u32, bound: u32) -> Vec<AlgebraElement> {
    let step = Rational::factorial(k).recip();
    let b = bound as i64;
    let mut out = vec![AlgebraElement::cd(), AlgebraElement::cdi(), AlgebraElement::ci()];
    for n in -b..=b {
        let g = &step * Rational::from(n);
        out.push(AlgebraElement::d(g.clone()));
        out.push(AlgebraElement::i(g));
    }
    out
}

/// Jacobi identity over all unordered basis triples (with repetition), or
/// over `samples` random sparse triples. Returns `(checked, failures)`.
pub fn jacobi_sweep(k: u32, bound: u32, samples: Option<usize>, seed: u64) -> (usize, usize) {
    let basis = window_basis(k, bound);
    let mut checked = 0;
    let mut failures = 0;
    let mut check = |x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement| {
        checked += 1;
        if !AlgebraElement::jacobiator(x, y, z).is_zero() {
            failures += 1;
        }
    };
    match samples {
        None => {
            for a in 0..basis.len() {
                for b in a..basis.len() {
                    for c in b..basis.len() {
                        check(&basis[a], &basis[b], &basis[c]);
                    }
                }
            }
        }
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..n {
                let [x, y, z] = [(); 3].map(|_| random_element(&mut rng, &basis));
                check(&x, &y, &z);
            }
        }
    }
    (checked, failures)
}

/// Sparse element with 1 to 4 terms drawn from `basis` and small rational coefficients.
pub fn random_element(rng: &mut impl Rng, basis: &[AlgebraElement]) -> AlgebraElement {
    let terms = rng.gen_range(1..=4);
    let mut x = AlgebraElement::zero();
    for _ in 0..terms {
        let b = &basis[rng.gen_range(0..basis.len())];
        let c = Rational::new(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=5));
        x = x + b.scale(&c);
    }
    x
}

/// Maps the `--variant` flag to a rescaling variant.
pub fn phi_variant(name: &str) -> Result<PhiVariant, CliError> {
    match name {
        "exact" => Ok(PhiVariant::ExactCentral),
        "centerless" => Ok(PhiVariant::Centerless),
        other => Err(CliError::Usage(format!("unknown variant `{other}` (expected exact or centerless)"))),
    }
}

/// Parses `<k>:<bound>` for `jacobi --window`.
pub fn parse_jacobi_window(text: &str) -> Result<(u32, u32), CliError> {
    let bad = || CliError::Usage(format!("window must look like <k>:<bound>, got `{text}`"));
    let (k, b) = text.split_once(':').ok_or_else(bad)?;
    let k: u32 = k.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if k == 0 {
        return Err(bad());
    }
    Ok((k, b))
}
