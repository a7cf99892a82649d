//! Cayley graphs on the additive group of a finite field.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::scalar::Real;

/// The graph Γ(F_q, S): vertices are field elements, `u ~ v` iff `u - v ∈ S`.
///
/// `S` must avoid zero and be closed under negation. Empty and full
/// connection sets are allowed.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    field: Arc<FieldCtx>,
    set: Vec<FieldElem>,
    member: Vec<bool>,
    label: String,
}

impl PartialEq for CayleyGraph {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.set == other.set
    }
}

impl Eq for CayleyGraph {}

impl CayleyGraph {
    pub fn new(field: Arc<FieldCtx>, set: impl IntoIterator<Item = FieldElem>) -> Result<Self> {
        let q = field.q() as usize;
        let mut member = vec![false; q];
        for x in set {
            let x = field.elem(x.index() as u64)?;
            member[x.index() as usize] = true;
        }
        if member[0] {
            return Err(Error::ZeroInConnectionSet);
        }
        for x in field.nonzero() {
            let nx = field.neg(x);
            if member[x.index() as usize] && !member[nx.index() as usize] {
                return Err(Error::AsymmetricConnectionSet { elem: x.index(), neg: nx.index() });
            }
        }
        let set: Vec<FieldElem> = field.nonzero().filter(|x| member[x.index() as usize]).collect();
        let label = default_label(&field, &set);
        Ok(CayleyGraph { field, set, member, label })
    }

    /// Builds a graph from canonical element indices.
    pub fn from_indices(field: Arc<FieldCtx>, indices: &[u64]) -> Result<Self> {
        let elems = indices
            .iter()
            .map(|&i| field.elem(i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, elems)
    }

    pub fn edgeless(field: Arc<FieldCtx>) -> Self {
        Self::new(field, []).expect("empty set is valid")
    }

    pub fn complete(field: Arc<FieldCtx>) -> Self {
        let all: Vec<FieldElem> = field.nonzero().collect();
        Self::new(field, all).expect("full set is valid")
    }

    /// Paley graph: S is the set of nonzero squares. Needs q = 1 mod 4.
    pub fn paley(field: Arc<FieldCtx>) -> Result<Self> {
        let q = field.q() as u64;
        if q % 4 != 1 {
            return Err(Error::NotOneModFour { family: "paley", q });
        }
        let squares: Vec<FieldElem> = field
            .nonzero()
            .filter(|&x| field.is_quadratic_residue(x).expect("nonzero"))
            .collect();
        let label = format!("paley({q})");
        Ok(Self::new(field, squares)?.with_label(label))
    }

    /// The separation family over GF(p): S = {(p-1)/4 + 1, ..., 3(p-1)/4}
    /// read as residues. Needs p prime with p = 1 mod 4.
    pub fn interval(p: u64) -> Result<Self> {
        let field = Arc::new(FieldCtx::prime(p)?);
        if p % 4 != 1 {
            return Err(Error::NotOneModFour { family: "interval", q: p });
        }
        let lo = (p - 1) / 4 + 1;
        let hi = 3 * (p - 1) / 4;
        let set: Vec<FieldElem> = (lo..=hi).map(|i| field.from_int(i as i64)).collect();
        Ok(Self::new(field, set)?.with_label(format!("interval({p})")))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Connection set in canonical order.
    pub fn set(&self) -> &[FieldElem] {
        &self.set
    }

    pub fn set_indices(&self) -> Vec<u32> {
        self.set.iter().map(|x| x.index()).collect()
    }

    /// `|S|`.
    pub fn s(&self) -> u32 {
        self.set.len() as u32
    }

    #[inline]
    pub fn in_set(&self, x: FieldElem) -> bool {
        self.member[x.index() as usize]
    }

    /// Membership in `S ∪ {0}`.
    #[inline]
    pub fn in_closed_set(&self, x: FieldElem) -> bool {
        x.is_zero() || self.member[x.index() as usize]
    }

    /// `S ∪ {0}` in canonical order.
    pub fn closed_set(&self) -> Vec<FieldElem> {
        std::iter::once(FieldElem::ZERO).chain(self.set.iter().copied()).collect()
    }

    /// Γ(F_q, (F_q \ {0}) \ S).
    pub fn complement(&self) -> CayleyGraph {
        let comp: Vec<FieldElem> = self.field.nonzero().filter(|&x| !self.in_set(x)).collect();
        let label = match self.label.strip_prefix("complement(").and_then(|l| l.strip_suffix(')')) {
            Some(inner) => inner.to_string(),
            None => format!("complement({})", self.label),
        };
        CayleyGraph::new(self.field.clone(), comp)
            .expect("complement of a symmetric set is symmetric")
            .with_label(label)
    }

    #[inline]
    pub fn adjacent(&self, u: FieldElem, v: FieldElem) -> bool {
        self.in_set(self.field.sub(u, v))
    }

    /// Adjacency in the strong power G^k, evaluated coordinatewise.
    pub fn adjacent_power(&self, u: &PowerVertex, v: &PowerVertex) -> Result<bool> {
        if u.len() != v.len() {
            return Err(Error::LengthMismatch(u.len(), v.len()));
        }
        if u.is_empty() {
            return Err(Error::ZeroPower);
        }
        let mut differs = false;
        for (&a, &b) in u.coords().iter().zip(v.coords()) {
            let d = self.field.sub(a, b);
            if !self.in_closed_set(d) {
                return Ok(false);
            }
            differs |= !d.is_zero();
        }
        Ok(differs)
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<bool>> {
        let q = self.q();
        (0..q)
            .map(|u| {
                (0..q)
                    .map(|v| {
                        self.adjacent(
                            FieldElem::from_index_unchecked(u),
                            FieldElem::from_index_unchecked(v),
                        )
                    })
                    .collect()
            })
            .collect()
    }

    /// Adjacency eigenvalue for character `a`: `Σ_{t∈S} Re chi_a(t)`.
    pub fn eigenvalue<T: Real>(&self, a: FieldElem) -> T {
        self.set
            .iter()
            .fold(T::zero(), |acc, &t| acc + self.field.char_re::<T>(a, t))
    }

    /// All q adjacency eigenvalues, largest first.
    pub fn spectrum<T: Real>(&self) -> Vec<T> {
        let mut eig: Vec<T> = self.field.elements().map(|a| self.eigenvalue(a)).collect();
        eig.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
        eig
    }

    /// Smallest nonzero `a` with `a·S = S̄`, so that `x ↦ a x` maps G onto
    /// its complement.
    pub fn find_complementing_scalar(&self) -> Option<ComplementingScalar> {
        let comp = self.complement();
        if comp.s() != self.s() {
            return None;
        }
        let f = &self.field;
        for a in f.nonzero() {
            if self.set.iter().all(|&t| comp.in_set(f.mul(a, t))) {
                let mut image: Vec<FieldElem> = self.set.iter().map(|&t| f.mul(a, t)).collect();
                image.sort();
                debug_assert_eq!(image, comp.set);
                return Some(ComplementingScalar {
                    scalar: a,
                    set: self.set.clone(),
                    image,
                });
            }
        }
        None
    }

    /// Searches for a vertex bijection `π` with `u ~ v` in `self` iff
    /// `π(u) ~ π(v)` in `other`. Backtracking with `π(0) = 0`, which loses
    /// nothing because translations are automorphisms of a Cayley graph.
    pub fn find_isomorphism(&self, other: &CayleyGraph) -> Option<Vec<FieldElem>> {
        if self.q() != other.q() || self.s() != other.s() {
            return None;
        }
        let q = self.q() as usize;
        let a = self.adjacency_matrix();
        let b = other.adjacency_matrix();
        let mut map = vec![usize::MAX; q];
        let mut used = vec![false; q];
        map[0] = 0;
        used[0] = true;

        fn extend(
            i: usize,
            a: &[Vec<bool>],
            b: &[Vec<bool>],
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if i == map.len() {
                return true;
            }
            for j in 0..map.len() {
                if used[j] {
                    continue;
                }
                if (0..i).all(|k| a[i][k] == b[j][map[k]]) {
                    map[i] = j;
                    used[j] = true;
                    if extend(i + 1, a, b, map, used) {
                        return true;
                    }
                    used[j] = false;
                }
            }
            map[i] = usize::MAX;
            false
        }

        extend(1, &a, &b, &mut map, &mut used).then(|| {
            map.into_iter()
                .map(|j| FieldElem::from_index_unchecked(j as u32))
                .collect()
        })
    }

    /// Orbits of `x ↦ -x` on the nonzero elements, each listed smallest first.
    pub fn negation_orbits(field: &FieldCtx) -> Vec<Vec<FieldElem>> {
        let mut seen = vec![false; field.q() as usize];
        let mut orbits = Vec::new();
        for x in field.nonzero() {
            if seen[x.index() as usize] {
                continue;
            }
            let nx = field.neg(x);
            seen[x.index() as usize] = true;
            seen[nx.index() as usize] = true;
            orbits.push(if nx == x { vec![x] } else { vec![x, nx] });
        }
        orbits
    }

    /// The graph whose connection set is the union of the orbits selected by
    /// `mask` (bit `i` picks `negation_orbits(field)[i]`).
    pub fn from_orbit_mask(field: Arc<FieldCtx>, mask: u64) -> Result<Self> {
        let orbits = Self::negation_orbits(&field);
        let set: Vec<FieldElem> = orbits
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .flat_map(|(_, o)| o.iter().copied())
            .collect();
        Self::new(field, set)
    }

    /// Every valid connection set over `field`, enumerated by orbit mask.
    pub fn all_symmetric(field: &Arc<FieldCtx>) -> Vec<CayleyGraph> {
        let n = Self::negation_orbits(field).len();
        assert!(n < 32, "too many symmetric sets to enumerate");
        (0..1u64 << n)
            .map(|mask| Self::from_orbit_mask(field.clone(), mask).expect("orbit unions are symmetric"))
            .collect()
    }
}

fn default_label(field: &FieldCtx, set: &[FieldElem]) -> String {
    let elems: Vec<String> = set.iter().map(|x| x.index().to_string()).collect();
    format!("cayley({};{})", field.spec_string(), elems.join(","))
}

impl fmt::Display for CayleyGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Witness that `x ↦ scalar·x` sends S onto its complement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementingScalar {
    pub scalar: FieldElem,
    pub set: Vec<FieldElem>,
    /// `scalar · set`, sorted; equals the complementary connection set.
    pub image: Vec<FieldElem>,
}

/// A vertex of the strong power G^k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PowerVertex {
    coords: Vec<FieldElem>,
}

impl PowerVertex {
    pub fn new(coords: Vec<FieldElem>) -> Self {
        PowerVertex { coords }
    }

    pub fn from_indices(field: &FieldCtx, indices: &[u64]) -> Result<Self> {
        let coords = indices.iter().map(|&i| field.elem(i)).collect::<Result<_>>()?;
        Ok(PowerVertex { coords })
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Radix-q code with the first coordinate most significant.
    pub fn encode(&self, q: u32) -> u64 {
        self.coords
            .iter()
            .fold(0u64, |acc, x| acc * q as u64 + x.index() as u64)
    }

    pub fn decode(mut code: u64, k: usize, q: u32) -> Self {
        let mut coords = vec![FieldElem::ZERO; k];
        for slot in coords.iter_mut().rev() {
            *slot = FieldElem::from_index_unchecked((code % q as u64) as u32);
            code /= q as u64;
        }
        PowerVertex { coords }
    }
}
