//! Capacity quantities for Cayley graphs: the linear-capacity upper bound
//! `q^(1 - |S|/(q-1))`, exact independence numbers of small strong powers,
//! and exact linear independence numbers by generator-matrix search.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cayley::{CayleyGraph, PowerVertex};
use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::mis::{max_independent_set, BitGraph, MisOptions};
use crate::scalar::Real;

/// Default vertex cap for [`alpha_exact`].
pub const DEFAULT_VERTEX_CAP: u64 = 4096;
/// Default number of candidate matrices for [`alpha_lin_exact`].
pub const DEFAULT_MATRIX_BUDGET: u64 = 10_000_000;
/// Default largest block length searched by reports.
pub const DEFAULT_MAX_N: usize = 4;

/// An exact rational exponent `e`, standing for the real number `q^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(pub Ratio<u64>);

impl Exponent {
    pub fn new(num: u64, den: u64) -> Self {
        Exponent(Ratio::new(num, den))
    }

    pub fn zero() -> Self {
        Exponent::new(0, 1)
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    /// `base^self` as a float.
    pub fn power_of<T: Real>(&self, base: u32) -> T {
        let e = T::from_count(self.numer()) / T::from_count(self.denom());
        T::from_count(base as u64).powf(e)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Serialization(format!("bad exponent `{s}`"));
        let (n, d) = s.split_once('/').ok_or_else(bad)?;
        let n: u64 = n.parse().map_err(|_| bad())?;
        let d: u64 = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(Exponent::new(n, d))
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exponent of the linear-capacity bound: `1 - s/(q-1) = (q-1-s)/(q-1)`.
pub fn rho_lin_exponent(g: &CayleyGraph) -> Exponent {
    let q1 = g.q() as u64 - 1;
    Exponent::new(q1 - g.s() as u64, q1)
}

/// Upper bound `q^(1 - |S|/(q-1))` on the linear Shannon capacity.
pub fn rho_lin<T: Real>(g: &CayleyGraph) -> T {
    rho_lin_exponent(g).power_of(g.q())
}

/// A linear code `{(x, A x) : x ∈ F_q^m}` of block length `n`, with `A`
/// stored row-major as `(n - m) × m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearCode {
    n: usize,
    m: usize,
    a: Vec<FieldElem>,
}

impl LinearCode {
    pub fn new(n: usize, m: usize, a: Vec<FieldElem>) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidCode(format!("need 1 <= m <= n, got m={m}, n={n}")));
        }
        if a.len() != (n - m) * m {
            return Err(Error::InvalidCode(format!(
                "A must have {}x{} = {} entries, got {}",
                n - m,
                m,
                (n - m) * m,
                a.len()
            )));
        }
        Ok(LinearCode { n, m, a })
    }

    pub fn from_rows(n: usize, m: usize, rows: &[Vec<FieldElem>]) -> Result<Self> {
        if rows.len() != n.saturating_sub(m) || rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidCode(format!(
                "A must have {} rows of length {m}",
                n.saturating_sub(m)
            )));
        }
        Self::new(n, m, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.a
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.a[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[FieldElem]> {
        // chunks(0) panics, so the m == n case yields no rows explicitly.
        self.a.chunks(self.m.max(1)).take(self.n - self.m)
    }

    pub fn rows_as_indices(&self) -> Vec<Vec<u32>> {
        self.rows().map(|r| r.iter().map(|x| x.index()).collect()).collect()
    }

    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.m as u64, self.n as u64)
    }

    /// The codeword `(x, A x)`.
    pub fn encode(&self, g: &CayleyGraph, x: &[FieldElem]) -> Vec<FieldElem> {
        let f = g.field();
        let mut out = x.to_vec();
        out.extend(self.rows().map(|row| {
            row.iter()
                .zip(x)
                .fold(FieldElem::ZERO, |acc, (&a, &z)| f.add(acc, f.mul(a, z)))
        }));
        out
    }

    fn check_field(&self, g: &CayleyGraph) -> Result<()> {
        match self.a.iter().find(|x| x.index() >= g.q()) {
            Some(x) => Err(Error::InvalidCode(format!(
                "entry {} lies outside GF({})",
                x.index(),
                g.q()
            ))),
            None => Ok(()),
        }
    }
}

/// Nonzero points of `(S ∪ {0})^m` in odometer order (last coordinate fastest).
pub fn closed_grid_points(g: &CayleyGraph, m: usize) -> Vec<Vec<FieldElem>> {
    let s0 = g.closed_set();
    let h = s0.len();
    let total = h.pow(m as u32);
    (1..total)
        .map(|mut idx| {
            let mut z = vec![FieldElem::ZERO; m];
            for slot in z.iter_mut().rev() {
                *slot = s0[idx % h];
                idx /= h;
            }
            z
        })
        .collect()
}

/// A nonzero `z ∈ (S ∪ {0})^m` whose image `A z` also lies in
/// `(S ∪ {0})^(n-m)`, i.e. a codeword adjacent to the origin.
pub fn find_adjacent_message(g: &CayleyGraph, code: &LinearCode) -> Result<Option<Vec<FieldElem>>> {
    code.check_field(g)?;
    let f = g.field();
    let s0 = g.closed_set();
    let h = s0.len();
    let mut digits = vec![0usize; code.m];
    loop {
        // advance the odometer; the all-zero point is skipped
        let mut i = code.m;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < h {
                break;
            }
            digits[i] = 0;
        }
        let z: Vec<FieldElem> = digits.iter().map(|&d| s0[d]).collect();
        let escapes = code.rows().any(|row| {
            let dot = row
                .iter()
                .zip(&z)
                .fold(FieldElem::ZERO, |acc, (&a, &x)| f.add(acc, f.mul(a, x)));
            !g.in_closed_set(dot)
        });
        if !escapes {
            return Ok(Some(z));
        }
    }
}

/// Whether the code is an independent set of G^n.
///
/// By translation invariance it suffices that no nonzero codeword is
/// adjacent to the origin, and a codeword `(z, Az)` can only be adjacent to
/// the origin when `z ∈ (S ∪ {0})^m`.
pub fn is_linear_independent_set(g: &CayleyGraph, code: &LinearCode) -> Result<bool> {
    Ok(find_adjacent_message(g, code)?.is_none())
}

/// Options for [`alpha_exact_with`].
#[derive(Clone, Debug)]
pub struct AlphaOptions {
    pub vertex_cap: u64,
    pub node_budget: Option<u64>,
}

impl Default for AlphaOptions {
    fn default() -> Self {
        AlphaOptions { vertex_cap: DEFAULT_VERTEX_CAP, node_budget: None }
    }
}

/// Result of [`alpha_exact`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaResult {
    pub k: usize,
    pub size: usize,
    /// Independent set of G^k, vertices in ascending code order.
    pub witness: Vec<PowerVertex>,
    pub exhaustive: bool,
    pub nodes: u64,
}

impl AlphaResult {
    pub fn witness_codes(&self, q: u32) -> Vec<u64> {
        self.witness.iter().map(|v| v.encode(q)).collect()
    }
}

/// The strong power G^k as a dense bitset graph over radix-q vertex codes.
pub fn power_graph(g: &CayleyGraph, k: usize, vertex_cap: u64) -> Result<BitGraph> {
    if k == 0 {
        return Err(Error::ZeroPower);
    }
    let q = g.q() as u64;
    let vertices = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if vertices > vertex_cap as u128 {
        return Err(Error::VertexCapExceeded { k: k as u32, vertices, cap: vertex_cap });
    }
    let n = vertices as usize;
    let f = g.field();
    let digits: Vec<Vec<FieldElem>> = (0..n)
        .map(|c| PowerVertex::decode(c as u64, k, g.q()).coords().to_vec())
        .collect();
    // nonzero difference vectors with every coordinate in S ∪ {0}
    let deltas = closed_grid_points(g, k);
    let mut graph = BitGraph::new(n);
    for (u, du) in digits.iter().enumerate() {
        for d in &deltas {
            let v = du
                .iter()
                .zip(d)
                .fold(0u64, |acc, (&a, &b)| acc * q + f.add(a, b).index() as u64);
            graph.add_edge(u, v as usize);
        }
    }
    Ok(graph)
}

/// Exact α(G^k) with a witness, under the default vertex cap.
pub fn alpha_exact(g: &CayleyGraph, k: usize) -> Result<AlphaResult> {
    alpha_exact_with(g, k, &AlphaOptions::default())
}

pub fn alpha_exact_with(g: &CayleyGraph, k: usize, opts: &AlphaOptions) -> Result<AlphaResult> {
    let graph = power_graph(g, k, opts.vertex_cap)?;
    // G^k is a Cayley graph on F_q^k, so some maximum independent set
    // contains the origin.
    let mis = max_independent_set(
        &graph,
        &MisOptions { anchor: Some(0), node_budget: opts.node_budget },
    );
    let witness = mis
        .witness
        .iter()
        .map(|&c| PowerVertex::decode(c as u64, k, g.q()))
        .collect();
    Ok(AlphaResult {
        k,
        size: mis.witness.len(),
        witness,
        exhaustive: mis.exhaustive,
        nodes: mis.nodes,
    })
}

/// Options for [`alpha_lin_exact`].
#[derive(Clone, Debug)]
pub struct AlphaLinOptions {
    /// Total number of candidate matrices that may be examined.
    pub budget: u64,
    /// Only enumerate matrices whose rows are in nondecreasing order. Row
    /// order is a coordinate permutation, so this never changes the
    /// lexicographically smallest witness.
    pub sorted_rows: bool,
}

impl Default for AlphaLinOptions {
    fn default() -> Self {
        AlphaLinOptions { budget: DEFAULT_MATRIX_BUDGET, sorted_rows: true }
    }
}

/// Result of [`alpha_lin_exact`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaLinResult {
    pub n: usize,
    /// Best dimension found; 0 stands for the zero subspace.
    pub m: usize,
    /// Lexicographically smallest systematic generator at dimension `m`.
    pub witness: Option<LinearCode>,
    /// True when every dimension above `m` was ruled out completely.
    pub exhaustive: bool,
    /// Candidate matrices charged against the budget.
    pub candidates: u64,
}

impl AlphaLinResult {
    /// `α_lin(G^n) = q^m` as an exact integer.
    pub fn size(&self, q: u32) -> u128 {
        (q as u128).pow(self.m as u32)
    }

    pub fn rate(&self) -> Exponent {
        Exponent::new(self.m as u64, self.n as u64)
    }
}

/// Exact α_lin(G^n) by enumerating systematic generators `(I | A^T)`.
///
/// Systematic form on the first m coordinates loses nothing: every
/// m-dimensional subspace has an information set, and coordinate
/// permutations are automorphisms of G^n.
pub fn alpha_lin_exact(g: &CayleyGraph, n: usize, opts: &AlphaLinOptions) -> Result<AlphaLinResult> {
    if n == 0 {
        return Err(Error::ZeroPower);
    }
    let mut remaining = opts.budget;
    let mut charged = 0u64;
    for m in (1..=n).rev() {
        if m == n {
            if remaining == 0 {
                return Ok(AlphaLinResult { n, m: 0, witness: None, exhaustive: false, candidates: charged });
            }
            remaining -= 1;
            charged += 1;
            if g.s() == 0 {
                let code = LinearCode::new(n, n, Vec::new())?;
                return Ok(AlphaLinResult { n, m: n, witness: Some(code), exhaustive: true, candidates: charged });
            }
            continue;
        }
        let level = Level::new(g, n, m, opts.sorted_rows);
        let size = level.count();
        if size <= remaining as u128 {
            remaining -= size as u64;
            charged += size as u64;
            if let Some(rows) = level.search_parallel() {
                let code = level.code(&rows)?;
                return Ok(AlphaLinResult { n, m, witness: Some(code), exhaustive: true, candidates: charged });
            }
        } else {
            let (found, used) = level.search_limited(remaining);
            charged += used;
            return Ok(match found {
                // Every larger dimension was already ruled out.
                Some(rows) => AlphaLinResult {
                    n,
                    m,
                    witness: Some(level.code(&rows)?),
                    exhaustive: true,
                    candidates: charged,
                },
                None => AlphaLinResult { n, m: 0, witness: None, exhaustive: false, candidates: charged },
            });
        }
    }
    Ok(AlphaLinResult { n, m: 0, witness: None, exhaustive: true, candidates: charged })
}

/// Search state for one dimension: rows of A are encoded as radix-q codes
/// (first entry most significant), so row-major lexicographic order on A
/// is lexicographic order on row-code tuples.
struct Level<'a> {
    g: &'a CayleyGraph,
    n: usize,
    m: usize,
    row_codes: u64,
    sorted: bool,
    /// `masks[r]` has bit `j` set iff `<row r, z_j>` lies in `S ∪ {0}`.
    masks: Vec<u64>,
    words: usize,
}

impl<'a> Level<'a> {
    fn new(g: &'a CayleyGraph, n: usize, m: usize, sorted: bool) -> Self {
        let f = g.field();
        let q = g.q() as u64;
        let row_codes = q.pow(m as u32);
        let points = closed_grid_points(g, m);
        let words = points.len().div_ceil(64).max(1);
        let mut masks = vec![0u64; row_codes as usize * words];
        for r in 0..row_codes {
            let row = PowerVertex::decode(r, m, g.q());
            let base = r as usize * words;
            for (j, z) in points.iter().enumerate() {
                let dot = row
                    .coords()
                    .iter()
                    .zip(z)
                    .fold(FieldElem::ZERO, |acc, (&a, &x)| f.add(acc, f.mul(a, x)));
                if g.in_closed_set(dot) {
                    masks[base + j / 64] |= 1 << (j % 64);
                }
            }
        }
        Level { g, n, m, row_codes, sorted, masks, words }
    }

    fn rows(&self) -> usize {
        self.n - self.m
    }

    fn count(&self) -> u128 {
        let r = self.row_codes as u128;
        let k = self.rows() as u32;
        if self.sorted {
            // multisets of size k from r row codes
            let mut c: u128 = 1;
            for i in 0..k as u128 {
                c = c.saturating_mul(r + i) / (i + 1);
            }
            c
        } else {
            r.checked_pow(k).unwrap_or(u128::MAX)
        }
    }

    fn mask(&self, r: u64) -> &[u64] {
        &self.masks[r as usize * self.words..(r as usize + 1) * self.words]
    }

    fn code(&self, rows: &[u64]) -> Result<LinearCode> {
        let a: Vec<FieldElem> = rows
            .iter()
            .flat_map(|&r| PowerVertex::decode(r, self.m, self.g.q()).coords().to_vec())
            .collect();
        LinearCode::new(self.n, self.m, a)
    }

    /// Lexicographically first passing tuple, searching first-row subtrees
    /// in parallel. `find_map_first` keeps the result order-independent.
    fn search_parallel(&self) -> Option<Vec<u64>> {
        (0..self.row_codes).into_par_iter().find_map_first(|r0| {
            let mut acc = self.mask(r0).to_vec();
            let mut rows = vec![r0];
            let mut budget = u64::MAX;
            self.descend(&mut rows, &mut acc, &mut budget).then_some(rows)
        })
    }

    /// Sequential lexicographic search examining at most `budget` complete
    /// candidates. Returns the hit and the number of candidates examined.
    fn search_limited(&self, budget: u64) -> (Option<Vec<u64>>, u64) {
        let mut left = budget;
        for r0 in 0..self.row_codes {
            if left == 0 {
                break;
            }
            let mut acc = self.mask(r0).to_vec();
            let mut rows = vec![r0];
            if self.descend(&mut rows, &mut acc, &mut left) {
                return (Some(rows), budget - left);
            }
        }
        (None, budget - left)
    }

    /// Extends `rows` in lexicographic order. `acc` is the AND of the masks
    /// of the rows chosen so far: grid points still inside `S ∪ {0}` in
    /// every chosen coordinate. A complete candidate passes iff `acc` is empty.
    fn descend(&self, rows: &mut Vec<u64>, acc: &mut Vec<u64>, budget: &mut u64) -> bool {
        if rows.len() == self.rows() {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            return acc.iter().all(|&w| w == 0);
        }
        let start = if self.sorted { *rows.last().expect("nonempty") } else { 0 };
        let saved = acc.clone();
        for r in start..self.row_codes {
            if *budget == 0 {
                return false;
            }
            for (a, (&s, &b)) in acc.iter_mut().zip(saved.iter().zip(self.mask(r))) {
                *a = s & b;
            }
            rows.push(r);
            if self.descend(rows, acc, budget) {
                return true;
            }
            rows.pop();
        }
        acc.copy_from_slice(&saved);
        false
    }
}

/// Lower bound on the linear Shannon capacity from searched block lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaLinLower {
    /// Best rate `m/n` over the searched block lengths (0 if nothing found).
    pub exponent: Exponent,
    pub per_n: Vec<AlphaLinResult>,
}

impl ThetaLinLower {
    pub fn value<T: Real>(&self, q: u32) -> T {
        self.exponent.power_of(q)
    }

    pub fn exhaustive(&self) -> bool {
        self.per_n.iter().all(|r| r.exhaustive)
    }
}

/// `max_{n <= max_n} q^(m(n)/n)`; `budget` is shared across block lengths.
pub fn theta_lin_lower(g: &CayleyGraph, max_n: usize, opts: &AlphaLinOptions) -> Result<ThetaLinLower> {
    if max_n == 0 {
        return Err(Error::ZeroPower);
    }
    let mut remaining = opts.budget;
    let mut per_n = Vec::with_capacity(max_n);
    let mut best = Exponent::zero();
    for n in 1..=max_n {
        let r = alpha_lin_exact(g, n, &AlphaLinOptions { budget: remaining, ..opts.clone() })?;
        remaining = remaining.saturating_sub(r.candidates);
        best = best.max(r.rate());
        per_n.push(r);
    }
    Ok(ThetaLinLower { exponent: best, per_n })
}
