//! Aggregated capacity reports and their JSON / CSV forms.

use serde::{Deserialize, Serialize};

use crate::capacity::{
    alpha_exact_with, rho_lin, rho_lin_exponent, theta_lin_lower, AlphaLinOptions, AlphaOptions,
    Exponent, DEFAULT_MATRIX_BUDGET, DEFAULT_MAX_N, DEFAULT_VERTEX_CAP,
};
use crate::cayley::{CayleyGraph, PowerVertex};
use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::theta::{lovasz_theta, DEFAULT_TOLERANCE};

pub const SCHEMA: &str = "cayley-capacity/1";

/// Branch-and-bound node budget per power used by reports.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

const DOMINANCE_SLACK: f64 = 1e-9;

const SYSTEMATIC_NOTE: &str = "alpha_lin searches systematic generators (I | A^T) on the first m \
coordinates; coordinate permutations are automorphisms of G^n, so every subspace has an \
equivalent systematic form and exhaustive results are exact";

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub max_n: usize,
    pub vertex_cap: u64,
    pub node_budget: Option<u64>,
    pub matrix_budget: u64,
    pub sorted_rows: bool,
    pub theta_tolerance: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            max_n: DEFAULT_MAX_N,
            vertex_cap: DEFAULT_VERTEX_CAP,
            node_budget: Some(DEFAULT_NODE_BUDGET),
            matrix_budget: DEFAULT_MATRIX_BUDGET,
            sorted_rows: true,
            theta_tolerance: DEFAULT_TOLERANCE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphInfo {
    pub label: String,
    pub field: String,
    pub q: u32,
    pub s: u32,
    pub set: Vec<u32>,
}

impl GraphInfo {
    pub fn of(g: &CayleyGraph) -> Self {
        GraphInfo {
            label: g.label().to_string(),
            field: g.field().spec_string(),
            q: g.q(),
            s: g.s(),
            set: g.set_indices(),
        }
    }
}

/// A value `q^exponent` with the exponent kept exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactPower {
    pub value: f64,
    pub exponent: Exponent,
}

impl ExactPower {
    pub fn new(q: u32, exponent: Exponent) -> Self {
        ExactPower { value: exponent.power_of(q), exponent }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaSummary {
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaEntry {
    pub k: usize,
    pub size: usize,
    /// Radix-q vertex codes, first coordinate most significant.
    pub witness: Vec<u64>,
    pub exhaustive: bool,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaLinEntry {
    pub n: usize,
    pub m: usize,
    pub size: u128,
    /// Rows of `A`; empty for `m = n` and absent for the zero subspace.
    pub witness: Option<Vec<Vec<u32>>>,
    pub rate: Exponent,
    pub exhaustive: bool,
    pub candidates: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub k: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    pub exponent: Exponent,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub max_n: usize,
    pub vertex_cap: u64,
    pub node_budget: Option<u64>,
    pub matrix_budget: u64,
    pub matrix_candidates_used: u64,
    pub nodes_used: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub schema: String,
    pub graph: GraphInfo,
    pub rho_lin: ExactPower,
    pub theta: Option<ThetaSummary>,
    pub alpha_by_power: Vec<AlphaEntry>,
    pub alpha_skipped: Vec<Skipped>,
    pub alpha_lin_by_power: Vec<AlphaLinEntry>,
    pub lower_bound_theta_lin: LowerBound,
    pub budgets: Budgets,
    pub notes: Vec<String>,
}

impl CapacityReport {
    /// False when any solver stopped on a budget or theta failed.
    pub fn complete(&self) -> bool {
        self.theta.is_some()
            && self.alpha_by_power.iter().all(|a| a.exhaustive)
            && self.alpha_lin_by_power.iter().all(|a| a.exhaustive)
    }

    /// Re-checks the report invariants.
    pub fn check_invariants(&self) -> Result<()> {
        let rho = self.rho_lin.value;
        for entry in &self.alpha_lin_by_power {
            let v = entry.rate.power_of::<f64>(self.graph.q);
            if v > rho + DOMINANCE_SLACK {
                return Err(Error::InvariantViolation(format!(
                    "code rate {} at n = {} gives {v} > rho_lin = {rho}",
                    entry.rate, entry.n
                )));
            }
        }
        if self.lower_bound_theta_lin.value > rho + DOMINANCE_SLACK {
            return Err(Error::InvariantViolation(format!(
                "lower bound {} exceeds rho_lin = {rho}",
                self.lower_bound_theta_lin.value
            )));
        }
        for lin in &self.alpha_lin_by_power {
            // only exhaustive alpha values are upper bounds
            if let Some(a) = self.alpha_by_power.iter().find(|a| a.k == lin.n && a.exhaustive) {
                if lin.size > a.size as u128 {
                    return Err(Error::InvariantViolation(format!(
                        "alpha_lin(G^{}) = {} exceeds alpha = {}",
                        lin.n, lin.size, a.size
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: CapacityReport =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        if r.schema != SCHEMA {
            return Err(Error::Serialization(format!("unknown schema `{}`", r.schema)));
        }
        Ok(r)
    }

    /// One row per reported quantity.
    pub fn rows(&self) -> Vec<CsvRow> {
        let g = &self.graph;
        let row = |quantity: String, value: String, exp: String, witness: String, exhaustive: bool| CsvRow {
            graph: g.label.clone(),
            q: g.q,
            s: g.s,
            quantity,
            value,
            exact_exponent: exp,
            witness,
            exhaustive_flag: exhaustive,
        };
        let mut out = vec![row(
            "rho_lin".into(),
            self.rho_lin.value.to_string(),
            self.rho_lin.exponent.to_string(),
            String::new(),
            true,
        )];
        if let Some(t) = &self.theta {
            out.push(row("theta".into(), t.value.to_string(), String::new(), String::new(), true));
        }
        for a in &self.alpha_by_power {
            out.push(row(
                format!("alpha[k={}]", a.k),
                a.size.to_string(),
                String::new(),
                join(&a.witness, " "),
                a.exhaustive,
            ));
        }
        for a in &self.alpha_lin_by_power {
            let witness = match &a.witness {
                Some(rows) => rows.iter().map(|r| join(r, ",")).collect::<Vec<_>>().join(";"),
                None => String::new(),
            };
            out.push(row(
                format!("alpha_lin[n={}]", a.n),
                a.size.to_string(),
                a.rate.to_string(),
                witness,
                a.exhaustive,
            ));
        }
        let lb = &self.lower_bound_theta_lin;
        out.push(row(
            "lower_bound_theta_lin".into(),
            lb.value.to_string(),
            lb.exponent.to_string(),
            String::new(),
            lb.exhaustive,
        ));
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in self.rows() {
            w.serialize(r).map_err(|e| Error::Serialization(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub graph: String,
    pub q: u32,
    pub s: u32,
    pub quantity: String,
    pub value: String,
    pub exact_exponent: String,
    pub witness: String,
    pub exhaustive_flag: bool,
}

pub fn capacity_report(g: &CayleyGraph, opts: &ReportOptions) -> Result<CapacityReport> {
    if opts.max_n == 0 {
        return Err(Error::ZeroPower);
    }
    let q = g.q();
    let mut notes = vec![SYSTEMATIC_NOTE.to_string()];

    let theta = match lovasz_theta::<f64>(g, opts.theta_tolerance) {
        Ok(t) => Some(ThetaSummary { value: t.value, residual: t.residual, iterations: t.iterations }),
        Err(e) => {
            notes.push(format!("theta unavailable: {e}"));
            None
        }
    };

    let alpha_opts = AlphaOptions { vertex_cap: opts.vertex_cap, node_budget: opts.node_budget };
    let mut alpha_by_power = Vec::new();
    let mut alpha_skipped = Vec::new();
    let mut nodes_used = 0;
    for k in 1..=opts.max_n {
        match alpha_exact_with(g, k, &alpha_opts) {
            Ok(a) => {
                nodes_used += a.nodes;
                alpha_by_power.push(AlphaEntry {
                    k,
                    size: a.size,
                    witness: a.witness_codes(q),
                    exhaustive: a.exhaustive,
                    nodes: a.nodes,
                });
            }
            Err(e @ Error::VertexCapExceeded { .. }) => {
                alpha_skipped.push(Skipped { k, reason: e.to_string() });
            }
            Err(e) => return Err(e),
        }
    }

    let lin_opts = AlphaLinOptions { budget: opts.matrix_budget, sorted_rows: opts.sorted_rows };
    let lower = theta_lin_lower(g, opts.max_n, &lin_opts)?;
    let alpha_lin_by_power: Vec<AlphaLinEntry> = lower
        .per_n
        .iter()
        .map(|r| AlphaLinEntry {
            n: r.n,
            m: r.m,
            size: r.size(q),
            witness: r.witness.as_ref().map(|c| c.rows_as_indices()),
            rate: r.rate(),
            exhaustive: r.exhaustive,
            candidates: r.candidates,
        })
        .collect();
    let matrix_candidates_used = alpha_lin_by_power.iter().map(|a| a.candidates).sum();

    let report = CapacityReport {
        schema: SCHEMA.to_string(),
        graph: GraphInfo::of(g),
        rho_lin: ExactPower { value: rho_lin(g), exponent: rho_lin_exponent(g) },
        theta,
        alpha_by_power,
        alpha_skipped,
        alpha_lin_by_power,
        lower_bound_theta_lin: LowerBound {
            value: lower.value(q),
            exponent: lower.exponent,
            exhaustive: lower.exhaustive(),
        },
        budgets: Budgets {
            max_n: opts.max_n,
            vertex_cap: opts.vertex_cap,
            node_budget: opts.node_budget,
            matrix_budget: opts.matrix_budget,
            matrix_candidates_used,
            nodes_used,
        },
        notes,
    };
    report.check_invariants()?;
    Ok(report)
}

/// The interval-set family: linear capacity at most `√p`, while the
/// interval `{0, ..., (p-1)/4}` is independent of size `(p+3)/4`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub schema: String,
    pub p: u64,
    pub graph: GraphInfo,
    pub interval_witness: Vec<u32>,
    pub witness_independent: bool,
    /// `(p+3)/4`.
    pub alpha_lower: u64,
    pub alpha: AlphaEntry,
    pub rho_lin: ExactPower,
    pub theta: Option<ThetaSummary>,
    /// `√p < (p+3)/4`, decided in integers as `16p < (p+3)^2`.
    pub strict_gap: bool,
    pub chain: String,
    pub warning: Option<String>,
}

pub fn run_separation(p: u64) -> Result<SeparationReport> {
    let g = CayleyGraph::interval(p)?;
    let f = g.field();
    let witness: Vec<FieldElem> = (0..=(p - 1) / 4).map(|i| f.from_int(i as i64)).collect();
    let independent = witness
        .iter()
        .enumerate()
        .all(|(i, &u)| witness[i + 1..].iter().all(|&v| !g.adjacent(u, v)));
    let alpha_lower = (p - 1) / 4 + 1;
    let a = alpha_exact_with(&g, 1, &AlphaOptions::default())?;
    let rho = ExactPower { value: rho_lin(&g), exponent: rho_lin_exponent(&g) };
    let theta = lovasz_theta::<f64>(&g, DEFAULT_TOLERANCE)
        .ok()
        .map(|t| ThetaSummary { value: t.value, residual: t.residual, iterations: t.iterations });
    let strict_gap = 16 * p < (p + 3) * (p + 3);
    let sep = if strict_gap { "<" } else { ">=" };
    let theta_text = theta.as_ref().map_or("unavailable".to_string(), |t| format!("{:.6}", t.value));
    let chain = format!(
        "Theta_lin <= sqrt({p}) = {:.6} (exponent {}) {sep} (p+3)/4 = {alpha_lower} <= alpha(G) = {} \
         <= Theta(G) <= theta(G) = {theta_text}",
        rho.value, rho.exponent, a.size
    );
    let warning = (!strict_gap).then(|| {
        format!("p = {p} is too small for a separation: (p+3)/4 = {alpha_lower} <= sqrt(p) = {:.6}", rho.value)
    });
    Ok(SeparationReport {
        schema: SCHEMA.to_string(),
        p,
        graph: GraphInfo::of(&g),
        interval_witness: witness.iter().map(|x| x.index()).collect(),
        witness_independent: independent,
        alpha_lower,
        alpha: AlphaEntry {
            k: 1,
            size: a.size,
            witness: a.witness.iter().map(|v: &PowerVertex| v.encode(g.q())).collect(),
            exhaustive: a.exhaustive,
            nodes: a.nodes,
        },
        rho_lin: rho,
        theta,
        strict_gap,
        chain,
        warning,
    })
}
