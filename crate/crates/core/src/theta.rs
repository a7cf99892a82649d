//! Lovász theta for Cayley graphs on F_q.
//!
//! For a Cayley graph the theta program may be restricted to translation
//! invariant matrices `B(x, y) = b(x - y) / q`, which are diagonalized by the
//! additive characters. It becomes the linear program
//!
//! ```text
//! maximize   Σ_g b(g)
//! subject to b(0) = 1,  b(t) = 0 for t ∈ S,  b̂(a) >= 0 for all a,
//! ```
//!
//! with `b̂(a) = Σ_g b(g) Re chi_a(g)`. The solver works in the Fourier
//! variables `y(a) = b̂(a) / q`, which are nonnegative, and folds `a` and
//! `-a` into one variable. The resulting `b` is then re-verified directly.

use serde::{Deserialize, Serialize};

use crate::cayley::CayleyGraph;
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::scalar::Real;
use crate::simplex::{self, Problem, Settings};

/// Default accuracy demanded of [`lovasz_theta`].
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaResult<T> {
    pub value: T,
    /// Optimal symmetric weight function, indexed by canonical element index.
    pub b: Vec<T>,
    /// `b̂(a)` for every `a`, recomputed from `b`.
    pub fourier: Vec<T>,
    /// Largest violation among `b(0) = 1`, `b|_S = 0`, symmetry, `b̂ >= 0`
    /// and agreement of `Σ b` with the LP objective.
    pub residual: T,
    /// Largest `|Σ_g b(g) Im chi_a(g)|`; vanishes for symmetric `b`.
    pub imag_residual: T,
    pub iterations: usize,
}

/// Orbits of negation on all of F_q, zero first: `(representative, size)`.
fn signed_orbits(field: &FieldCtx) -> Vec<(FieldElem, usize)> {
    std::iter::once((FieldElem::ZERO, 1))
        .chain(CayleyGraph::negation_orbits(field).into_iter().map(|o| (o[0], o.len())))
        .collect()
}

pub fn lovasz_theta<T: Real>(g: &CayleyGraph, tolerance: T) -> Result<ThetaResult<T>> {
    lovasz_theta_with(g, tolerance, &Settings::default())
}

pub fn lovasz_theta_with<T: Real>(
    g: &CayleyGraph,
    tolerance: T,
    settings: &Settings<T>,
) -> Result<ThetaResult<T>> {
    let f = g.field();
    let q = T::from_count(g.q() as u64);
    let orbits = signed_orbits(f);

    // y_o >= 0 per orbit; Σ_o |o| y_o = 1 encodes b(0) = 1
    let mut rows = vec![orbits.iter().map(|&(_, w)| T::from_count(w as u64)).collect::<Vec<T>>()];
    let mut rhs = vec![T::one()];
    for o in CayleyGraph::negation_orbits(f) {
        if !g.in_set(o[0]) {
            continue;
        }
        let t = o[0];
        rows.push(
            orbits
                .iter()
                .map(|&(a, w)| T::from_count(w as u64) * f.char_re::<T>(a, t))
                .collect(),
        );
        rhs.push(T::zero());
    }
    let mut objective = vec![T::zero(); orbits.len()];
    objective[0] = q;
    let sol = simplex::solve(&Problem { objective, rows, rhs }, settings)?;

    // b(x) = Σ_a y(a) Re chi_a(x)
    let b: Vec<T> = f
        .elements()
        .map(|x| {
            orbits.iter().zip(&sol.x).fold(T::zero(), |acc, (&(a, w), &y)| {
                acc + y * T::from_count(w as u64) * f.char_re::<T>(a, x)
            })
        })
        .collect();
    let result = verify(g, b, sol.value, sol.iterations);
    if result.residual > tolerance {
        return Err(Error::ThetaVerification {
            residual: result.residual.to_f64().unwrap_or(f64::NAN),
            tolerance: tolerance.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(result)
}

/// Recomputes every constraint from `b` alone.
fn verify<T: Real>(g: &CayleyGraph, b: Vec<T>, lp_value: T, iterations: usize) -> ThetaResult<T> {
    let f = g.field();
    let at = |x: FieldElem| b[x.index() as usize];
    let mut residual = (at(FieldElem::ZERO) - T::one()).abs();
    for &t in g.set() {
        residual = residual.max(at(t).abs());
    }
    for x in f.elements() {
        residual = residual.max((at(x) - at(f.neg(x))).abs());
    }
    let mut fourier = Vec::with_capacity(b.len());
    let mut imag_residual = T::zero();
    for a in f.elements() {
        let (mut re, mut im) = (T::zero(), T::zero());
        for x in f.elements() {
            re = re + at(x) * f.char_re::<T>(a, x);
            im = im + at(x) * f.char_im::<T>(a, x);
        }
        residual = residual.max(-re);
        imag_residual = imag_residual.max(im.abs());
        fourier.push(re);
    }
    let value = b.iter().fold(T::zero(), |acc, &v| acc + v);
    residual = residual.max((value - lp_value).abs());
    ThetaResult { value, b, fourier, residual, imag_residual, iterations }
}

/// Spectral bound `q·(-λ_min)/(λ_max - λ_min)`, which dominates theta for
/// regular graphs.
pub fn hoffman_bound<T: Real>(g: &CayleyGraph) -> Result<T> {
    if g.s() == 0 {
        return Err(Error::EdgelessHoffman);
    }
    let spec = g.spectrum::<T>();
    let max = spec[0];
    let min = spec[spec.len() - 1];
    Ok(T::from_count(g.q() as u64) * (-min) / (max - min))
}
