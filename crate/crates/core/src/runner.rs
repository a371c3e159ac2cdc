//! Prime sweeps comparing the class-number formulas with direct cycle counts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{is_prime, primes_between};
use crate::cycles::{self, CycleCensus, CycleError};
use crate::predictor::{is_power_of_two, PredictError, Predictor, SpinePrediction};
use crate::ssgraph::{self, GraphError, ModularPolynomialData};

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Predict(#[from] PredictError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Where the graph side gets its modular polynomial.
#[derive(Debug, Clone, Default)]
pub enum PhiSource {
    #[default]
    Builtin,
    External(ModularPolynomialData),
}

impl PhiSource {
    fn resolve(&self, ell: u64) -> Result<ModularPolynomialData, RunnerError> {
        match self {
            PhiSource::Builtin => Ok(ModularPolynomialData::builtin(ell)?),
            PhiSource::External(data) if data.ell() == ell => Ok(data.clone()),
            PhiSource::External(data) => Err(GraphError::EllMismatch {
                expected: ell,
                found: data.ell(),
            }
            .into()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CensusConfig {
    pub ell: u64,
    pub r: u32,
    pub p_min: u64,
    pub p_max: u64,
    pub with_oracle: bool,
    pub skip_tainted: bool,
    pub seed: u64,
    /// First prime entering the running average; `p_min` when unset.
    pub average_start: Option<u64>,
    pub phi: PhiSource,
}

impl CensusConfig {
    pub fn new(ell: u64, r: u32, p_min: u64, p_max: u64) -> Self {
        Self {
            ell,
            r,
            p_min,
            p_max,
            with_oracle: false,
            skip_tainted: false,
            seed: 0,
            average_start: None,
            phi: PhiSource::Builtin,
        }
    }

    fn validate(&self) -> Result<(), RunnerError> {
        if self.p_min <= 13 || self.p_min > self.p_max {
            return Err(RunnerError::InvalidConfig(format!(
                "need 13 < pmin <= pmax, got {}..{}",
                self.p_min, self.p_max
            )));
        }
        if matches!(self.phi, PhiSource::Builtin) && ![2, 3, 5, 7].contains(&self.ell) {
            return Err(RunnerError::InvalidConfig(format!(
                "no built-in modular polynomial for l = {}",
                self.ell
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusRow {
    pub p: u64,
    pub n_s_formula: Option<u64>,
    pub n_t_formula: Option<u64>,
    pub n_s_graph: Option<u64>,
    pub n_t_graph: Option<u64>,
    pub spine_size: Option<usize>,
    pub vertex_count: usize,
    pub running_avg: Option<f64>,
    pub limit: f64,
    pub agreement: bool,
    pub tainted: bool,
    /// Above the operative Kaneko bound.
    pub valid: bool,
    pub histogram: BTreeMap<usize, u64>,
    pub error: Option<String>,
}

impl CensusRow {
    /// `n_t/#V < n_s/#spine`, when the graph found spine cycles.
    pub fn spine_denser(&self) -> Option<bool> {
        let (ns, nt, spine) = (self.n_s_graph?, self.n_t_graph?, self.spine_size?);
        if ns == 0 || spine == 0 {
            return None;
        }
        Some((nt as u128) * (spine as u128) < (ns as u128) * (self.vertex_count as u128))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusSummary {
    pub rows: usize,
    pub error_rows: usize,
    pub tainted_rows: usize,
    /// Primes whose graph counts disagree with the formulas, after the taint policy.
    pub mismatches: Vec<u64>,
    pub final_running_avg: Option<f64>,
    pub limit: f64,
    pub limit_conjectural: bool,
    /// `(rows where the density comparison applies, rows where it held)`.
    pub density: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct CensusReport {
    pub rows: Vec<CensusRow>,
    pub summary: CensusSummary,
}

impl CensusReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), RunnerError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "p",
            "ns_formula",
            "nt_formula",
            "ns_graph",
            "nt_graph",
            "spine_size",
            "vertex_count",
            "running_avg",
            "limit",
            "agreement",
            "tainted",
        ])?;
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        for row in &self.rows {
            w.write_record([
                row.p.to_string(),
                opt(row.n_s_formula),
                opt(row.n_t_formula),
                opt(row.n_s_graph),
                opt(row.n_t_graph),
                opt(row.spine_size),
                row.vertex_count.to_string(),
                opt(row.running_avg.map(|a| format!("{a:.6}"))),
                format!("{:.6}", row.limit),
                row.agreement.to_string(),
                row.tainted.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary_text(&self) -> String {
        let s = &self.summary;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "rows: {} ({} with errors, {} tainted)",
            s.rows, s.error_rows, s.tainted_rows
        );
        match s.final_running_avg {
            Some(avg) => {
                let _ = writeln!(
                    out,
                    "running average n_s: {avg:.6} (limit {:.6}{})",
                    s.limit,
                    if s.limit_conjectural {
                        ", conjectural"
                    } else {
                        ""
                    }
                );
            }
            None => {
                let _ = writeln!(out, "running average n_s: none (limit {:.6})", s.limit);
            }
        }
        if s.density.0 > 0 {
            let _ = writeln!(
                out,
                "spine denser than graph: {}/{} rows",
                s.density.1, s.density.0
            );
        }
        if s.mismatches.is_empty() {
            out.push_str("mismatches: none\n");
        } else {
            let list: Vec<String> = s.mismatches.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(out, "mismatches: {}", list.join(","));
        }
        out
    }
}

struct GraphSide {
    census: CycleCensus,
    spine_size: usize,
    vertex_count: usize,
}

fn graph_side(
    p: u64,
    r: u32,
    phi: &ModularPolynomialData,
    seed: u64,
) -> Result<GraphSide, RunnerError> {
    let graph = ssgraph::build_graph_with(p, phi, seed)?;
    let census = cycles::census(&graph, r)?;
    Ok(GraphSide {
        census,
        spine_size: graph.spine_size(),
        vertex_count: graph.vertex_count(),
    })
}

fn census_row(
    p: u64,
    cfg: &CensusConfig,
    predictor: &Predictor,
    phi: Option<&ModularPolynomialData>,
    limit: f64,
) -> CensusRow {
    let mut row = CensusRow {
        p,
        n_s_formula: None,
        n_t_formula: None,
        n_s_graph: None,
        n_t_graph: None,
        spine_size: None,
        vertex_count: ssgraph::expected_vertex_count(p),
        running_avg: None,
        limit,
        agreement: false,
        tainted: false,
        valid: false,
        histogram: BTreeMap::new(),
        error: None,
    };
    match predictor.predict(p) {
        Ok(pred) => {
            row.n_s_formula = Some(pred.n_s);
            row.n_t_formula = Some(pred.n_t);
            row.valid = pred.valid;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    if let Some(phi) = phi {
        match graph_side(p, cfg.r, phi, cfg.seed) {
            Ok(g) => {
                row.n_s_graph = Some(g.census.n_s_graph);
                row.n_t_graph = Some(g.census.n_t_graph);
                row.spine_size = Some(g.spine_size);
                row.vertex_count = g.vertex_count;
                row.tainted = g.census.tainted_present;
                row.histogram = g.census.spine_count_histogram;
                row.agreement =
                    row.n_s_formula == row.n_s_graph && row.n_t_formula == row.n_t_graph;
            }
            Err(e) => {
                let msg = e.to_string();
                row.error = Some(match row.error.take() {
                    Some(prev) => format!("{prev}; {msg}"),
                    None => msg,
                });
            }
        }
    }
    row
}

pub fn run_census(cfg: &CensusConfig) -> Result<CensusReport, RunnerError> {
    cfg.validate()?;
    let predictor = Predictor::new(cfg.ell, cfg.r)?;
    let limit = predictor.average_limit()?;
    let phi = if cfg.with_oracle {
        Some(cfg.phi.resolve(cfg.ell)?)
    } else {
        None
    };
    let primes: Vec<u64> = primes_between(cfg.p_min, cfg.p_max)
        .into_iter()
        .filter(|&p| p != cfg.ell)
        .collect();
    let mut rows: Vec<CensusRow> = primes
        .par_iter()
        .map(|&p| census_row(p, cfg, &predictor, phi.as_ref(), limit.as_f64()))
        .collect();
    rows.sort_by_key(|r| r.p);

    let start = cfg.average_start.unwrap_or(cfg.p_min);
    let (mut sum, mut count) = (0u64, 0u64);
    for row in &mut rows {
        if row.p < start {
            continue;
        }
        if let Some(ns) = row.n_s_formula {
            sum += ns;
            count += 1;
        }
        if count > 0 {
            row.running_avg = Some(sum as f64 / count as f64);
        }
    }

    let mismatches = rows
        .iter()
        .filter(|r| cfg.with_oracle && !r.agreement && r.error.is_none())
        .filter(|r| !(cfg.skip_tainted && r.tainted))
        .map(|r| r.p)
        .collect();
    let density_rows: Vec<bool> = rows.iter().filter_map(|r| r.spine_denser()).collect();
    let summary = CensusSummary {
        rows: rows.len(),
        error_rows: rows.iter().filter(|r| r.error.is_some()).count(),
        tainted_rows: rows.iter().filter(|r| r.tainted).count(),
        mismatches,
        final_running_avg: rows.iter().rev().find_map(|r| r.running_avg),
        limit: limit.as_f64(),
        limit_conjectural: limit.conjectural,
        density: (
            density_rows.len(),
            density_rows.iter().filter(|&&d| d).count(),
        ),
    };
    Ok(CensusReport { rows, summary })
}

#[derive(Debug, Clone)]
pub struct ValidateEntry {
    pub p: u64,
    pub prediction: Option<SpinePrediction>,
    pub census: Option<CycleCensus>,
    pub formula_match: bool,
    /// Spine counts fall in the allowed set; always true when none is prescribed.
    pub support_ok: bool,
    pub evenness_ok: bool,
    pub tainted: bool,
    pub error: Option<String>,
}

impl ValidateEntry {
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.formula_match && self.support_ok && self.evenness_ok
    }
}

#[derive(Debug, Clone)]
pub struct ValidateReport {
    pub ell: u64,
    pub r: u32,
    /// Power-of-two `r`: results are reported without being enforced.
    pub experimental: bool,
    pub allowed_support: Option<BTreeSet<usize>>,
    pub entries: Vec<ValidateEntry>,
}

impl ValidateReport {
    /// Entries that count against the run: failed, untainted, and enforced.
    pub fn violations(&self) -> Vec<&ValidateEntry> {
        if self.experimental {
            return Vec::new();
        }
        self.entries
            .iter()
            .filter(|e| !e.ok() && !(e.tainted && e.error.is_none()))
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "validate l={} r={}{}",
            self.ell,
            self.r,
            if self.experimental {
                " (experimental, not enforced)"
            } else {
                ""
            }
        );
        for e in &self.entries {
            if let Some(err) = &e.error {
                let _ = writeln!(out, "p={} error: {err}", e.p);
                continue;
            }
            let (Some(pred), Some(c)) = (&e.prediction, &e.census) else {
                continue;
            };
            let hist: Vec<String> = c
                .spine_count_histogram
                .iter()
                .map(|(k, v)| format!("{k}:{v}"))
                .collect();
            let _ = writeln!(
                out,
                "p={} formula=({},{}) graph=({},{}) histogram={{{}}} match={} support={} even={}{}",
                e.p,
                pred.n_s,
                pred.n_t,
                c.n_s_graph,
                c.n_t_graph,
                hist.join(","),
                e.formula_match,
                e.support_ok,
                e.evenness_ok,
                if e.tainted { " tainted" } else { "" }
            );
        }
        let _ = writeln!(out, "{}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

/// Spine counts permitted per cycle past the bound, when prescribed.
pub fn allowed_spine_counts(r: u32) -> Option<BTreeSet<usize>> {
    if r % 2 == 1 {
        Some(BTreeSet::from([0, 1]))
    } else if !is_power_of_two(r) {
        Some(BTreeSet::from([0, 2]))
    } else {
        None
    }
}

pub fn run_validate(
    ell: u64,
    r: u32,
    primes: &[u64],
    seed: u64,
    phi: &PhiSource,
) -> Result<ValidateReport, RunnerError> {
    let predictor = Predictor::new(ell, r)?;
    let phi = phi.resolve(ell)?;
    let allowed = allowed_spine_counts(r);
    let bound = predictor.bound().clone();
    let entries = primes
        .par_iter()
        .map(|&p| {
            let mut entry = ValidateEntry {
                p,
                prediction: None,
                census: None,
                formula_match: false,
                support_ok: false,
                evenness_ok: false,
                tainted: false,
                error: None,
            };
            if !is_prime(p) {
                entry.error = Some(format!("{p} is not prime"));
                return entry;
            }
            if !bound.exceeded_by(p) {
                entry.error = Some(format!(
                    "p = {p} does not exceed the bound {}",
                    bound.operative()
                ));
                return entry;
            }
            let pred = match predictor.predict(p) {
                Ok(pred) => pred,
                Err(e) => {
                    entry.error = Some(e.to_string());
                    return entry;
                }
            };
            let g = match graph_side(p, r, &phi, seed) {
                Ok(g) => g,
                Err(e) => {
                    entry.error = Some(e.to_string());
                    return entry;
                }
            };
            let c = g.census;
            entry.formula_match = c.n_s_graph == pred.n_s && c.n_t_graph == pred.n_t;
            entry.support_ok = allowed.as_ref().is_none_or(|a| c.support().is_subset(a));
            entry.evenness_ok = c.n_t_graph % 2 == 0 && (r % 2 == 0 || c.n_s_graph % 2 == 0);
            entry.tainted = c.tainted_present;
            entry.prediction = Some(pred);
            entry.census = Some(c);
            entry
        })
        .collect();
    Ok(ValidateReport {
        ell,
        r,
        experimental: is_power_of_two(r),
        allowed_support: allowed,
        entries,
    })
}

/// Residue-class table of `(n_s, n_t)` for odd `r`.
///
/// The full table is emitted when the modulus is at most `full_limit`;
/// otherwise the classes of the primes in `(M, M + 10000]` are sampled.
pub fn run_residues(ell: u64, r: u32, full_limit: u64) -> Result<String, RunnerError> {
    if r % 2 == 0 {
        return Err(RunnerError::InvalidConfig(format!(
            "residue tables need odd r, got {r}"
        )));
    }
    let predictor = Predictor::new(ell, r)?;
    let table = predictor.residue_census();
    let modulus = table.modulus();
    let residues: Vec<u64> = match table.modulus_u128() {
        Some(m) if m <= full_limit as u128 => (1..m as u64).collect(),
        _ => {
            let start = predictor.bound().operative().to_integer();
            let mut rs: Vec<u64> = primes_between(start + 1, start + 10_000)
                .into_iter()
                .map(|p| table.residue_of(p))
                .collect();
            rs.sort_unstable();
            rs.dedup();
            rs
        }
    };
    let entries: Vec<(u64, u64, u64)> = residues
        .into_iter()
        .filter_map(|m| table.entry(m).map(|(ns, nt)| (m, ns, nt)))
        .collect();

    let mut out = String::new();
    let _ = writeln!(out, "modulus={modulus}");
    let factors: Vec<String> = table
        .modulus_factors()
        .0
        .iter()
        .map(|&(q, e)| {
            if e == 1 {
                q.to_string()
            } else {
                format!("{q}^{e}")
            }
        })
        .collect();
    let _ = writeln!(out, "# l={ell} r={r} modulus={}", factors.join("*"));
    out.push_str("# residue n_s n_t\n");
    for (m, ns, nt) in &entries {
        let _ = writeln!(out, "{m} {ns} {nt}");
    }
    out.push_str("[spine-avoiding]\n");
    for (m, ns, nt) in &entries {
        if *ns == 0 && *nt > 0 {
            let _ = writeln!(out, "{m} {ns} {nt}");
        }
    }
    Ok(out)
}
