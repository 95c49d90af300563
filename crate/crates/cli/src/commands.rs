//! One function per subcommand. Each returns the report and whether every
//! check it ran passed.

use std::path::Path;

use serde::Serialize;
use taumod::hyperelliptic::{
    genus2_suite, random_corpus, zeros_of_differential, CorpusElement, CurveInput, Genus2Check,
    TauOptions,
};
use taumod::origami::{cusps, enumerate_origamis, sl2_orbits, Cusp};
use taumod::picard::{hodge_formula, tau_divisor_relation, verify_suite, DivisorClass, Symbol};
use taumod::rational::{parse_pq, serde_pq, to_pq};
use taumod::report::SuiteReport;
use taumod::tau_elliptic::{genus1_suite, Genus1Options};
use taumod::teichcurve::{convergence_table, Calibration, ConvergenceTable};
use taumod::{Origami, Rational, Stratum};

use crate::output::{csv_text, json_text, Report};

/// Exit status of a subcommand that produced a report.
pub struct Outcome {
    pub report: Box<dyn Report>,
    pub passed: bool,
}

/// Bad arguments or input data; reported with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

pub type CmdResult = std::result::Result<Outcome, InputError>;

pub fn parse_stratum(s: &str) -> Result<Stratum, InputError> {
    s.parse::<Stratum>()
        .map_err(|e| InputError(format!("--stratum {s:?}: {e}")))
}

pub fn parse_calibration(s: &str) -> Result<Calibration, InputError> {
    match parse_pq(s) {
        Some(k) if k > Rational::from_integer(0) => Ok(Calibration::new(k)),
        _ => Err(InputError(format!(
            "--calibration-k {s:?}: expected a positive rational p/q"
        ))),
    }
}

// ---- origami ----

#[derive(Serialize)]
struct OrigamiRow {
    stratum: String,
    d: usize,
    orbit_id: usize,
    origami: Origami,
    automorphism_order: usize,
    cylinders: String,
    #[serde(with = "serde_pq")]
    cylinder_modulus_sum: Rational,
}

#[derive(Serialize)]
struct OrbitEntry {
    orbit_id: usize,
    size: usize,
    genus: u32,
    cusps: Vec<Cusp>,
}

#[derive(Serialize)]
struct OrigamiReport {
    schema: &'static str,
    stratum: String,
    d: usize,
    origamis: usize,
    orbits: Vec<OrbitEntry>,
    rows: Vec<OrigamiRow>,
}

#[derive(Serialize)]
struct OrigamiCsvRow<'a> {
    stratum: &'a str,
    d: usize,
    orbit_id: usize,
    h: String,
    v: String,
    automorphism_order: usize,
    cylinders: &'a str,
    cylinder_modulus_sum: String,
}

fn images(p: &taumod::Permutation) -> String {
    let v: Vec<usize> = p.clone().into();
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

impl Report for OrigamiReport {
    fn to_json(&self) -> anyhow::Result<String> {
        json_text(self)
    }

    fn to_csv(&self) -> anyhow::Result<String> {
        let rows: Vec<OrigamiCsvRow> = self
            .rows
            .iter()
            .map(|r| OrigamiCsvRow {
                stratum: &r.stratum,
                d: r.d,
                orbit_id: r.orbit_id,
                h: images(r.origami.h()),
                v: images(r.origami.v()),
                automorphism_order: r.automorphism_order,
                cylinders: &r.cylinders,
                cylinder_modulus_sum: to_pq(&r.cylinder_modulus_sum),
            })
            .collect();
        csv_text(&rows)
    }
}

pub fn origami(degree: usize, stratum: &str) -> CmdResult {
    let s = parse_stratum(stratum)?;
    if degree == 0 {
        return Err(InputError("--degree must be at least 1".into()));
    }
    let e = enumerate_origamis(degree, &s);
    if let Some(w) = e.warning {
        return Err(InputError(w));
    }
    let orbits = sl2_orbits(&e.origamis);
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (id, c) in orbits.iter().enumerate() {
        for o in &c.members {
            let cyl = o.horizontal_cylinders();
            rows.push(OrigamiRow {
                stratum: s.to_string(),
                d: degree,
                orbit_id: id,
                origami: o.clone(),
                automorphism_order: o.automorphism_order(),
                cylinders: cyl
                    .cylinders
                    .iter()
                    .map(|c| format!("{}x{}", c.width, c.height))
                    .collect::<Vec<_>>()
                    .join(";"),
                cylinder_modulus_sum: cyl.modulus_sum(),
            });
        }
        entries.push(OrbitEntry {
            orbit_id: id,
            size: c.len(),
            genus: c.genus(),
            cusps: cusps(c),
        });
    }
    let report = OrigamiReport {
        schema: "taumod.origami/1",
        stratum: s.to_string(),
        d: degree,
        origamis: rows.len(),
        orbits: entries,
        rows,
    };
    Ok(Outcome {
        report: Box::new(report),
        passed: true,
    })
}

// ---- lyapunov ----

#[derive(Serialize)]
struct LyapunovOutput {
    schema: &'static str,
    stratum: String,
    dmin: usize,
    dmax: usize,
    #[serde(rename = "K", with = "serde_pq")]
    k: Rational,
    #[serde(flatten)]
    table: ConvergenceTable,
}

impl Report for LyapunovOutput {
    fn to_json(&self) -> anyhow::Result<String> {
        json_text(self)
    }

    fn to_csv(&self) -> anyhow::Result<String> {
        csv_text(&self.table.rows)
    }
}

pub fn lyapunov(stratum: &str, dmin: Option<usize>, dmax: usize, cal: Calibration) -> CmdResult {
    let s = parse_stratum(stratum)?;
    let lo = dmin.unwrap_or(1).max(s.min_degree());
    if dmax < lo {
        return Err(InputError(format!(
            "no degree in [{lo}, {dmax}] carries {s}; minimal degree is {}",
            s.min_degree()
        )));
    }
    log::info!("lyapunov table for {s}, d = {lo}..={dmax}, {cal}");
    let table = convergence_table(&s, lo..=dmax, &cal);
    let report = LyapunovOutput {
        schema: "taumod.lyapunov/1",
        stratum: s.to_string(),
        dmin: lo,
        dmax,
        k: cal.k,
        table,
    };
    Ok(Outcome {
        report: Box::new(report),
        passed: true,
    })
}

// ---- picard ----

#[derive(Serialize)]
struct PicardOutput {
    schema: &'static str,
    genus: u32,
    hodge_formula: String,
    tau_relation: String,
    lambda: DivisorClass,
    tau_divisor: DivisorClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<SuiteReport>,
}

#[derive(Serialize)]
struct PicardCsvRow {
    genus: u32,
    symbol: String,
    lambda_coefficient: String,
    tau_divisor_coefficient: String,
}

impl Report for PicardOutput {
    fn to_json(&self) -> anyhow::Result<String> {
        json_text(self)
    }

    fn to_csv(&self) -> anyhow::Result<String> {
        let rows: Vec<PicardCsvRow> = taumod::picard::symbols(self.genus)
            .into_iter()
            .filter(|s| *s != Symbol::Lambda)
            .map(|s| PicardCsvRow {
                genus: self.genus,
                symbol: s.name(),
                lambda_coefficient: to_pq(&self.lambda.coeff(s)),
                tau_divisor_coefficient: to_pq(&self.tau_divisor.coeff(s)),
            })
            .collect();
        let mut text = csv_text(&rows)?;
        if let Some(v) = &self.verify {
            text.push('\n');
            text.push_str(&v.to_csv()?);
        }
        Ok(text)
    }
}

pub fn picard(genus: u32, verify: bool) -> CmdResult {
    let h = hodge_formula(genus)?;
    let t = tau_divisor_relation(genus)?;
    let suite = if verify {
        Some(verify_suite(genus)?)
    } else {
        None
    };
    let passed = suite.as_ref().is_none_or(|s| s.passed);
    let report = PicardOutput {
        schema: "taumod.picard/1",
        genus,
        hodge_formula: h.rhs.render_as_rhs_of(Symbol::Lambda),
        tau_relation: t.render_relation(),
        lambda: h.rhs,
        tau_divisor: t,
        verify: suite,
    };
    Ok(Outcome {
        report: Box::new(report),
        passed,
    })
}

// ---- tau ----

/// Check groups of the genus-one suite and the name prefixes they select.
const GENUS1_GROUPS: [(&str, &[&str]); 4] = [
    ("modular", &["lemma3-modular"]),
    ("translation", &["remark1-tau-translation"]),
    ("cusp", &["lemma7-cusp", "remark1-cusp"]),
    (
        "connection",
        &["bergman-connection", "corollary-euler-identity-g1"],
    ),
];

fn selected_groups(checks: Option<&str>, all: bool) -> Option<Vec<&str>> {
    match (checks, all) {
        (_, true) | (None, false) => None,
        (Some(c), false) if c.split(',').any(|t| t.trim() == "all") => None,
        (Some(c), false) => Some(
            c.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .collect(),
        ),
    }
}

pub fn tau_genus1(checks: Option<&str>, all: bool, opts: Genus1Options) -> CmdResult {
    let groups = selected_groups(checks, all);
    let mut prefixes: Vec<&str> = Vec::new();
    if let Some(gs) = &groups {
        for g in gs {
            let (_, p) = GENUS1_GROUPS.iter().find(|(n, _)| n == g).ok_or_else(|| {
                let names: Vec<&str> = GENUS1_GROUPS.iter().map(|(n, _)| *n).collect();
                InputError(format!(
                    "unknown genus-1 check group {g:?} (expected {}, all)",
                    names.join(", ")
                ))
            })?;
            prefixes.extend_from_slice(p);
        }
    }
    let mut suite = genus1_suite(&opts)?;
    if groups.is_some() {
        let kept = suite
            .checks
            .into_iter()
            .filter(|c| prefixes.iter().any(|p| c.check.starts_with(p)))
            .collect();
        suite = SuiteReport::new(suite.suite, kept);
    }
    let passed = suite.passed;
    Ok(Outcome {
        report: Box::new(suite),
        passed,
    })
}

pub struct Genus2Args<'a> {
    pub curve: Option<&'a Path>,
    pub checks: Option<&'a str>,
    pub all: bool,
    pub seed: u64,
    pub corpus: usize,
    pub tol: Option<f64>,
}

pub fn tau_genus2(a: Genus2Args) -> CmdResult {
    let groups: Vec<Genus2Check> = match selected_groups(a.checks, a.all) {
        None => Genus2Check::ALL.to_vec(),
        Some(gs) => gs.iter().map(|g| g.parse()).collect::<Result<_, _>>()?,
    };
    let mut opts = TauOptions::default();
    if let Some(t) = a.tol {
        if !(t > 0.0 && t < 1e-3) {
            return Err(InputError(format!(
                "--tol {t}: expected a value in (0, 1e-3)"
            )));
        }
        opts.quad_tol = t;
        opts.theta_tol = t;
    }
    let elements = match a.curve {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            let input = CurveInput::from_json(&text)?;
            let id = path
                .file_stem()
                .map_or("curve".into(), |s| s.to_string_lossy().into_owned());
            let el = CorpusElement::from_input(id, &input)?;
            zeros_of_differential(&el.curve, &el.spec, opts.degeneracy_threshold)?;
            vec![el]
        }
        None => {
            if a.corpus == 0 {
                return Err(InputError("--corpus must be at least 1".into()));
            }
            random_corpus(a.seed, a.corpus)
        }
    };
    let suite = genus2_suite(&elements, &groups, &opts);
    let passed = suite.passed;
    Ok(Outcome {
        report: Box::new(suite),
        passed,
    })
}
