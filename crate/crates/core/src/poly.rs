//! Sparse multivariate polynomials over a finite field.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

/// Default cap on the number of stored terms.
pub const DEFAULT_TERM_CAP: usize = 1_000_000;

/// A polynomial in `nvars` variables, stored as exponent vector → nonzero
/// coefficient.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    field: Arc<FieldCtx>,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FieldElem>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

/// Serialized form: `[[exponent vector], coefficient]` pairs in ascending
/// exponent order.
pub type TermList = Vec<(Vec<u32>, u32)>;

impl MultiPoly {
    pub fn zero(field: Arc<FieldCtx>, nvars: usize) -> Self {
        MultiPoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Arc<FieldCtx>, nvars: usize, c: FieldElem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The variable `z_i`.
    pub fn var(field: Arc<FieldCtx>, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(field, nvars);
        p.add_term(e, FieldElem::ONE);
        p
    }

    /// `Σ_j coeffs[j] z_j + constant`.
    pub fn linear(field: Arc<FieldCtx>, coeffs: &[FieldElem], constant: FieldElem) -> Self {
        let nvars = coeffs.len();
        let mut p = Self::constant(field, nvars, constant);
        for (j, &a) in coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[j] = 1;
            p.add_term(e, a);
        }
        p
    }

    /// Univariate polynomial in `z_var` from coefficients (constant first).
    pub fn univariate(field: Arc<FieldCtx>, nvars: usize, var: usize, coeffs: &[FieldElem]) -> Self {
        let mut p = Self::zero(field, nvars);
        for (d, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = d as u32;
            p.add_term(e, c);
        }
        p
    }

    pub fn from_terms(field: Arc<FieldCtx>, nvars: usize, terms: &[(Vec<u32>, FieldElem)]) -> Result<Self> {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::RingMismatch);
            }
            p.field.elem(c.index() as u64)?;
            p.add_term(e.clone(), *c);
        }
        Ok(p)
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, FieldElem)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> FieldElem {
        self.terms.get(exps).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn term_list(&self) -> TermList {
        self.terms.iter().map(|(e, c)| (e.clone(), c.index())).collect()
    }

    /// Adds `c · z^e` in place.
    pub fn add_term(&mut self, e: Vec<u32>, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in variable `i`; `None` for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field || self.nvars != other.nvars {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: FieldElem) -> Self {
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (e, a) in self.terms() {
            out.add_term(e.clone(), self.field.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_capped(other, DEFAULT_TERM_CAP)
    }

    pub fn mul_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        self.compatible(other)?;
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.nvars);
        for (ea, a) in self.terms() {
            for (eb, b) in other.terms() {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, f.mul(a, b));
            }
            if out.len() > cap {
                return Err(Error::TermCapExceeded { cap });
            }
        }
        Ok(out)
    }

    /// Term-by-term evaluation.
    pub fn eval(&self, point: &[FieldElem]) -> FieldElem {
        assert_eq!(point.len(), self.nvars, "point arity");
        let f = &self.field;
        self.terms().fold(FieldElem::ZERO, |acc, (e, c)| {
            let mono = e
                .iter()
                .zip(point)
                .fold(c, |m, (&k, &x)| f.mul(m, f.pow(x, k as u64)));
            f.add(acc, mono)
        })
    }

    /// Evaluation by nested Horner schemes, one variable at a time.
    pub fn eval_horner(&self, point: &[FieldElem]) -> FieldElem {
        assert_eq!(point.len(), self.nvars, "point arity");
        let terms: Vec<(&[u32], FieldElem)> = self.terms.iter().map(|(e, &c)| (e.as_slice(), c)).collect();
        horner(&self.field, &terms, point)
    }
}

fn horner(f: &FieldCtx, terms: &[(&[u32], FieldElem)], point: &[FieldElem]) -> FieldElem {
    if point.is_empty() {
        return terms.iter().fold(FieldElem::ZERO, |acc, &(_, c)| f.add(acc, c));
    }
    let Some(top) = terms.iter().map(|(e, _)| e[0]).max() else {
        return FieldElem::ZERO;
    };
    let mut acc = FieldElem::ZERO;
    for d in (0..=top).rev() {
        let slice: Vec<(&[u32], FieldElem)> = terms
            .iter()
            .filter(|(e, _)| e[0] == d)
            .map(|&(e, c)| (&e[1..], c))
            .collect();
        let inner = horner(f, &slice, &point[1..]);
        acc = f.add(f.mul(acc, point[0]), inner);
    }
    acc
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut mono = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                let name = if self.nvars == 1 { "z".to_string() } else { format!("z{}", i + 1) };
                match k {
                    0 => {}
                    1 => mono.push(name),
                    _ => mono.push(format!("{name}^{k}")),
                }
            }
            let text = match (c.index(), mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono.join("*"),
                (_, false) => format!("{}*{}", c, mono.join("*")),
            };
            parts.push(text);
        }
        f.write_str(&parts.join(" + "))
    }
}

/// JSON-friendly polynomial snapshot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolySnapshot {
    pub nvars: usize,
    pub terms: TermList,
}

impl From<&MultiPoly> for PolySnapshot {
    fn from(p: &MultiPoly) -> Self {
        PolySnapshot { nvars: p.nvars, terms: p.term_list() }
    }
}
