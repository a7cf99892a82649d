//! Polynomial-method certificates for linear codes in strong powers of
//! Cayley graphs.
//!
//! Given a code `{(x, Ax)}` independent in G^n, the pipeline builds
//!
//! ```text
//! P(z) = ∏_{i=1}^{n-m} ∏_{d ∈ D} (<a_i, z> - d),    D = F_q \ (S ∪ {0}),
//! ```
//!
//! which vanishes on `(S ∪ {0})^m` except at the origin, reduces it modulo
//! the relations `∏_{t ∈ S ∪ {0}} (z_i - t)`, and checks that the remainder
//! is forced to be `c₂ ∏_i ∏_{t ∈ S} (z_i - t)`. Comparing degrees yields
//! `s·m <= (n-m)(q-1-s)`, the rate bound `m/n <= 1 - s/(q-1)`.
//!
//! Every claim is checked by evaluation or by an independent second route;
//! nothing is inferred from the code being independent.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::capacity::{find_adjacent_message, LinearCode};
use crate::cayley::CayleyGraph;
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::poly::{MultiPoly, PolySnapshot, DEFAULT_TERM_CAP};

/// The ideal generated by one monic relation `∏_{t ∈ S₀}(z_i - t)` per
/// variable, all sharing the same coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionBasis {
    field: Arc<FieldCtx>,
    nodes: Vec<FieldElem>,
    /// Relation coefficients, constant term first; monic of degree `|nodes|`.
    relation: Vec<FieldElem>,
}

impl ReductionBasis {
    /// Relation vanishing on `nodes`. Nodes must be distinct and nonempty.
    pub fn new(field: Arc<FieldCtx>, nodes: &[FieldElem]) -> Result<Self> {
        check_nodes(&field, nodes)?;
        let mut rel = vec![FieldElem::ONE];
        for &t in nodes {
            rel = mul_linear(&field, &rel, t);
        }
        Ok(ReductionBasis { field, nodes: nodes.to_vec(), relation: rel })
    }

    /// The basis for a graph: nodes `S ∪ {0}`.
    pub fn for_graph(g: &CayleyGraph) -> Self {
        Self::new(g.field().clone(), &g.closed_set()).expect("closed set is distinct and nonempty")
    }

    pub fn relation(&self) -> &[FieldElem] {
        &self.relation
    }

    pub fn nodes(&self) -> &[FieldElem] {
        &self.nodes
    }

    /// `z^e` modulo the relation, as coefficients of degree `< |nodes|`.
    fn power_remainders(&self, max_e: u32) -> Vec<Vec<FieldElem>> {
        let f = &self.field;
        let h = self.nodes.len();
        let mut out = Vec::with_capacity(max_e as usize + 1);
        let mut cur = vec![FieldElem::ZERO; h];
        cur[0] = FieldElem::ONE;
        if h == 1 {
            // relation z - t with t = node: z ≡ t
            out.push(cur.clone());
            for _ in 0..max_e {
                cur[0] = f.mul(cur[0], self.nodes[0]);
                out.push(cur.clone());
            }
            return out;
        }
        out.push(cur.clone());
        for _ in 0..max_e {
            // multiply by z, then rewrite z^h = -Σ_{j<h} rel_j z^j
            let top = cur[h - 1];
            for j in (1..h).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = FieldElem::ZERO;
            if !top.is_zero() {
                for (c, &r) in cur.iter_mut().zip(&self.relation) {
                    *c = f.sub(*c, f.mul(top, r));
                }
            }
            out.push(cur.clone());
        }
        out
    }
}

fn check_nodes(field: &FieldCtx, nodes: &[FieldElem]) -> Result<()> {
    let mut seen = vec![false; field.q() as usize];
    if nodes.is_empty() {
        return Err(Error::BadInterpolationNodes);
    }
    for &t in nodes {
        field.elem(t.index() as u64)?;
        if std::mem::replace(&mut seen[t.index() as usize], true) {
            return Err(Error::BadInterpolationNodes);
        }
    }
    Ok(())
}

/// `poly · (z - t)` for univariate coefficient vectors.
fn mul_linear(f: &FieldCtx, poly: &[FieldElem], t: FieldElem) -> Vec<FieldElem> {
    let mut out = vec![FieldElem::ZERO; poly.len() + 1];
    for (i, &c) in poly.iter().enumerate() {
        out[i + 1] = f.add(out[i + 1], c);
        out[i] = f.sub(out[i], f.mul(c, t));
    }
    out
}

/// `D = F_q \ (S ∪ {0})` in canonical order.
pub fn non_closed_set(g: &CayleyGraph) -> Vec<FieldElem> {
    g.field().elements().filter(|&x| !g.in_closed_set(x)).collect()
}

/// `P(z) = ∏_i ∏_{d ∈ D} (<a_i, z> - d)`, expanded.
pub fn build_p(g: &CayleyGraph, code: &LinearCode) -> Result<MultiPoly> {
    build_p_capped(g, code, DEFAULT_TERM_CAP)
}

pub fn build_p_capped(g: &CayleyGraph, code: &LinearCode, cap: usize) -> Result<MultiPoly> {
    if code.m() == code.n() {
        return Err(Error::InvalidCode("P is defined only for m < n".into()));
    }
    if code.entries().iter().any(|x| x.index() >= g.q()) {
        return Err(Error::InvalidCode("matrix entry outside the field".into()));
    }
    let f = g.field();
    let d_set = non_closed_set(g);
    let mut p = MultiPoly::constant(f.clone(), code.m(), FieldElem::ONE);
    for row in code.rows() {
        for &d in &d_set {
            let factor = MultiPoly::linear(f.clone(), row, f.neg(d));
            p = p.mul_capped(&factor, cap)?;
        }
    }
    Ok(p)
}

/// Remainder of `p` modulo the ideal: every exponent is rewritten through
/// `z_i^h ≡ z_i^h - relation(z_i)` until it is below `h = |nodes|`.
pub fn reduce_mod_ideal(p: &MultiPoly, basis: &ReductionBasis) -> Result<MultiPoly> {
    if p.field() != &basis.field {
        return Err(Error::RingMismatch);
    }
    let f = p.field();
    let nvars = p.nvars();
    let max_e = p.terms().flat_map(|(e, _)| e.iter().copied()).max().unwrap_or(0);
    let rems = basis.power_remainders(max_e);
    let mut q = MultiPoly::zero(f.clone(), nvars);
    for (exps, c) in p.terms() {
        // expand ∏_i rem(z_i^{e_i}) as a tensor product
        let mut partial: Vec<(Vec<u32>, FieldElem)> = vec![(Vec::with_capacity(nvars), c)];
        for &e in exps {
            let r = &rems[e as usize];
            let mut next = Vec::with_capacity(partial.len() * r.len());
            for (mono, coef) in &partial {
                for (d, &rc) in r.iter().enumerate() {
                    if rc.is_zero() {
                        continue;
                    }
                    let mut m2 = mono.clone();
                    m2.push(d as u32);
                    next.push((m2, f.mul(*coef, rc)));
                }
            }
            partial = next;
        }
        for (mono, coef) in partial {
            q.add_term(mono, coef);
        }
    }
    Ok(q)
}

/// Unique polynomial of degree `< |nodes|` in every variable that matches
/// `values` on the grid `nodes^m`.
///
/// Interpolation runs one axis at a time: along each axis the values are
/// replaced by Lagrange-basis coefficients.
pub fn low_degree_extension(
    field: &Arc<FieldCtx>,
    nvars: usize,
    nodes: &[FieldElem],
    values: &BTreeMap<Vec<FieldElem>, FieldElem>,
) -> Result<MultiPoly> {
    check_nodes(field, nodes)?;
    let f = field.as_ref();
    let h = nodes.len();
    let total = h.pow(nvars as u32);

    // dense tensor over grid indices, last axis fastest
    let mut tensor = Vec::with_capacity(total);
    for idx in 0..total {
        let point = grid_point(nodes, nvars, idx);
        match values.get(&point) {
            Some(&v) => tensor.push(v),
            None => return Err(Error::IncompleteGrid(point.iter().map(|x| x.index()).collect())),
        }
    }

    // lagrange[k][d]: coefficient of z^d in L_k(z) = ∏_{j≠k} (z - h_j)/(h_k - h_j)
    let mut lagrange = Vec::with_capacity(h);
    for (k, &hk) in nodes.iter().enumerate() {
        let mut num = vec![FieldElem::ONE];
        let mut den = FieldElem::ONE;
        for (j, &hj) in nodes.iter().enumerate() {
            if j != k {
                num = mul_linear(f, &num, hj);
                den = f.mul(den, f.sub(hk, hj));
            }
        }
        let inv = f.inv(den).expect("distinct nodes");
        lagrange.push(num.into_iter().map(|c| f.mul(c, inv)).collect::<Vec<_>>());
    }

    for axis in 0..nvars {
        let stride = h.pow((nvars - 1 - axis) as u32);
        let mut next = vec![FieldElem::ZERO; total];
        for (idx, &v) in tensor.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let k = (idx / stride) % h;
            let base = idx - k * stride;
            for (d, &lc) in lagrange[k].iter().enumerate() {
                let slot = base + d * stride;
                next[slot] = f.add(next[slot], f.mul(v, lc));
            }
        }
        tensor = next;
    }

    let mut out = MultiPoly::zero(field.clone(), nvars);
    for (idx, &c) in tensor.iter().enumerate() {
        let mut e = vec![0u32; nvars];
        let mut rest = idx;
        for slot in e.iter_mut().rev() {
            *slot = (rest % h) as u32;
            rest /= h;
        }
        out.add_term(e, c);
    }
    Ok(out)
}

fn grid_point(nodes: &[FieldElem], nvars: usize, mut idx: usize) -> Vec<FieldElem> {
    let h = nodes.len();
    let mut z = vec![FieldElem::ZERO; nvars];
    for slot in z.iter_mut().rev() {
        *slot = nodes[idx % h];
        idx /= h;
    }
    z
}

/// Every point of `nodes^m` with the value of `p` there.
pub fn grid_values(p: &MultiPoly, nodes: &[FieldElem]) -> BTreeMap<Vec<FieldElem>, FieldElem> {
    let total = nodes.len().pow(p.nvars() as u32);
    (0..total)
        .map(|idx| {
            let z = grid_point(nodes, p.nvars(), idx);
            let v = p.eval(&z);
            (z, v)
        })
        .collect()
}

/// Stages of the certificate pipeline, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Independence,
    BuildP,
    Vanishing,
    Reduction,
    Uniqueness,
    Identity,
    Inequality,
}

impl Stage {
    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn describe(self) -> &'static str {
        match self {
            Stage::Independence => "no (z, Az) with z in S0^m \\ {0} is adjacent to the origin",
            Stage::BuildP => "P expanded, deg P <= (n-m)(q-1-s), P(0) = c",
            Stage::Vanishing => "P vanishes on S0^m \\ {0}",
            Stage::Reduction => "Q = P mod R has per-variable degree <= s and agrees with P on S0^m",
            Stage::Uniqueness => "Q equals the low-degree extension of P restricted to S0^m",
            Stage::Identity => "Q = c2 * prod_i prod_{t in S} (z_i - t), deg Q = s*m",
            Stage::Inequality => "s*m <= deg P <= (n-m)(q-1-s) and m/n <= 1 - s/(q-1)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageLog {
    pub stage: Stage,
    pub index: u8,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail {
        stage: Stage,
        index: u8,
        reason: String,
        /// A grid point (element indices) or degree pair exhibiting the failure.
        witness: Option<Vec<u64>>,
    },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Machine-checkable record of one run of the pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub graph: String,
    pub field: String,
    pub q: u32,
    pub set: Vec<u32>,
    pub s: u32,
    pub n: usize,
    pub m: usize,
    pub matrix: Vec<Vec<u32>>,
    /// `F_q \ (S ∪ {0})`.
    pub d_set: Vec<u32>,
    /// `P(0)`.
    pub c: Option<u32>,
    pub c2: Option<u32>,
    pub deg_p: Option<u32>,
    pub deg_q: Option<u32>,
    /// `(s·m, (n-m)(q-1-s))`.
    pub inequality: (u64, u64),
    pub p_poly: Option<PolySnapshot>,
    pub q_poly: Option<PolySnapshot>,
    pub stages: Vec<StageLog>,
    pub verdict: Verdict,
}

struct Run {
    stages: Vec<StageLog>,
}

impl Run {
    fn pass(&mut self, stage: Stage, detail: String) {
        self.stages.push(StageLog { stage, index: stage.index(), passed: true, detail });
    }

    fn fail(&mut self, stage: Stage, reason: String, witness: Option<Vec<u64>>) -> Verdict {
        self.stages.push(StageLog { stage, index: stage.index(), passed: false, detail: reason.clone() });
        Verdict::Fail { stage, index: stage.index(), reason, witness }
    }
}

fn indices(v: &[FieldElem]) -> Vec<u64> {
    v.iter().map(|x| x.index() as u64).collect()
}

/// Runs the full pipeline on `code`. Errors only on malformed input;
/// mathematical failures are reported in the verdict.
pub fn certify_code(g: &CayleyGraph, code: &LinearCode) -> Result<Certificate> {
    let f = g.field().clone();
    let (q, s, n, m) = (g.q() as u64, g.s() as u64, code.n(), code.m());
    if m == n {
        return Err(Error::InvalidCode("certificates need m < n".into()));
    }
    let d_set = non_closed_set(g);
    let mut cert = Certificate {
        graph: g.label().to_string(),
        field: f.spec_string(),
        q: g.q(),
        set: g.set_indices(),
        s: g.s(),
        n,
        m,
        matrix: code.rows_as_indices(),
        d_set: d_set.iter().map(|x| x.index()).collect(),
        c: None,
        c2: None,
        deg_p: None,
        deg_q: None,
        inequality: (s * m as u64, (n - m) as u64 * (q - 1 - s)),
        p_poly: None,
        q_poly: None,
        stages: Vec::new(),
        verdict: Verdict::Pass,
    };
    let mut run = Run { stages: Vec::new() };
    cert.verdict = pipeline(g, code, &d_set, &mut cert, &mut run)?;
    cert.stages = run.stages;
    Ok(cert)
}

fn pipeline(
    g: &CayleyGraph,
    code: &LinearCode,
    d_set: &[FieldElem],
    cert: &mut Certificate,
    run: &mut Run,
) -> Result<Verdict> {
    let f = g.field().clone();
    let (q, s, n, m) = (g.q() as u64, g.s(), code.n(), code.m());

    // stage 0
    if d_set.is_empty() {
        return Ok(run.fail(
            Stage::Independence,
            "D is empty: the graph is complete and no nontrivial code exists".into(),
            None,
        ));
    }
    if let Some(z) = find_adjacent_message(g, code)? {
        let word = code.encode(g, &z);
        return Ok(run.fail(
            Stage::Independence,
            format!("codeword {:?} is adjacent to the origin", indices(&word)),
            Some(indices(&z)),
        ));
    }
    run.pass(Stage::Independence, format!("checked {} points", (s as u64 + 1).pow(m as u32) - 1));

    // stage 1
    let p = build_p(g, code)?;
    let deg_p = p.total_degree().unwrap_or(0);
    let c = p.eval(&vec![FieldElem::ZERO; m]);
    cert.p_poly = Some(PolySnapshot::from(&p));
    cert.deg_p = Some(deg_p);
    cert.c = Some(c.index());
    let bound = cert.inequality.1;
    if deg_p as u64 > bound {
        return Ok(run.fail(
            Stage::BuildP,
            format!("deg P = {deg_p} exceeds (n-m)(q-1-s) = {bound}"),
            Some(vec![deg_p as u64, bound]),
        ));
    }
    let prod_d = d_set.iter().fold(FieldElem::ONE, |acc, &d| f.mul(acc, d));
    let c_formula = f.pow(prod_d, (n - m) as u64);
    if c_formula != c {
        return Ok(run.fail(
            Stage::BuildP,
            format!("P(0) = {c} but (prod D)^(n-m) = {c_formula}"),
            None,
        ));
    }
    run.pass(Stage::BuildP, format!("P = {p}; deg P = {deg_p} <= {bound}; c = P(0) = {c}"));

    // stage 2
    let basis = ReductionBasis::for_graph(g);
    let nodes = basis.nodes().to_vec();
    let values = grid_values(&p, &nodes);
    for (z, v) in &values {
        if z.iter().any(|x| !x.is_zero()) && !v.is_zero() {
            return Ok(run.fail(
                Stage::Vanishing,
                format!("P{:?} = {v}", indices(z)),
                Some(indices(z)),
            ));
        }
    }
    run.pass(Stage::Vanishing, format!("P = 0 at all {} nonzero grid points", values.len() - 1));

    // stage 3
    let reduced = reduce_mod_ideal(&p, &basis)?;
    cert.q_poly = Some(PolySnapshot::from(&reduced));
    if let Some(i) = (0..m).find(|&i| reduced.degree_in(i).unwrap_or(0) > s) {
        return Ok(run.fail(
            Stage::Reduction,
            format!("Q has degree {} in z{}", reduced.degree_in(i).unwrap_or(0), i + 1),
            None,
        ));
    }
    for (z, v) in &values {
        if reduced.eval(z) != *v {
            return Ok(run.fail(Stage::Reduction, "Q and P disagree".into(), Some(indices(z))));
        }
    }
    run.pass(Stage::Reduction, format!("Q = {reduced}"));

    // stage 4
    let lde = low_degree_extension(&f, m, &nodes, &values)?;
    if lde != reduced {
        let z = values.keys().find(|z| lde.eval(z) != reduced.eval(z)).map(|z| indices(z));
        return Ok(run.fail(
            Stage::Uniqueness,
            format!("interpolant {lde} differs from Q = {reduced}"),
            z,
        ));
    }
    run.pass(Stage::Uniqueness, "ideal reduction and grid interpolation agree term for term".into());

    // stage 5: c2 = c · (∏_{t∈S} (-t))^{-m}
    let neg_prod = g.set().iter().fold(FieldElem::ONE, |acc, &t| f.mul(acc, f.neg(t)));
    let c2 = f.mul(c, f.pow(f.inv(neg_prod).expect("0 is not in S"), m as u64));
    cert.c2 = Some(c2.index());
    let mut target = MultiPoly::constant(f.clone(), m, c2);
    for i in 0..m {
        for &t in g.set() {
            let factor = MultiPoly::univariate(f.clone(), m, i, &[f.neg(t), FieldElem::ONE]);
            target = target.mul(&factor)?;
        }
    }
    let deg_q = reduced.total_degree().unwrap_or(0);
    cert.deg_q = Some(deg_q);
    if reduced != target {
        return Ok(run.fail(
            Stage::Identity,
            format!("Q = {reduced} but c2 * prod (z_i - t) = {target}"),
            None,
        ));
    }
    if deg_q != s * m as u32 {
        return Ok(run.fail(
            Stage::Identity,
            format!("deg Q = {deg_q} differs from s*m = {}", s * m as u32),
            Some(vec![deg_q as u64, (s * m as u32) as u64]),
        ));
    }
    run.pass(Stage::Identity, format!("Q = c2 * prod_(i, t in S) (z_i - t) with c2 = {c2}; deg Q = {deg_q}"));

    // stage 6
    let (lhs, rhs) = cert.inequality;
    let rate = Ratio::new(m as u64, n as u64);
    let cap = Ratio::new(q - 1 - s as u64, q - 1);
    if !(lhs <= deg_p as u64 && deg_p as u64 <= rhs) || rate > cap {
        return Ok(run.fail(
            Stage::Inequality,
            format!("s*m = {lhs}, deg P = {deg_p}, (n-m)(q-1-s) = {rhs}, rate {rate} vs {cap}"),
            Some(vec![lhs, rhs]),
        ));
    }
    let tight = if lhs == rhs { " (tight)" } else { "" };
    run.pass(
        Stage::Inequality,
        format!("{lhs} <= {deg_p} <= {rhs}{tight}; rate {m}/{n} <= {}/{}", cap.numer(), cap.denom()),
    );
    Ok(Verdict::Pass)
}
