//! Dense two-phase primal simplex with Bland's rule.
//!
//! Solves `max c·x` subject to `A x = b`, `x >= 0`. Rows with negative
//! right-hand side are negated up front, phase one minimizes the sum of
//! artificial variables, and phase two optimizes the real objective.
//! Bland's rule (lowest eligible index enters and leaves) rules out cycling.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Equality-form LP: maximize `objective · x` subject to `rows · x = rhs`, `x >= 0`.
#[derive(Clone, Debug)]
pub struct Problem<T> {
    pub objective: Vec<T>,
    pub rows: Vec<Vec<T>>,
    pub rhs: Vec<T>,
}

#[derive(Clone, Debug)]
pub struct Solution<T> {
    pub x: Vec<T>,
    pub value: T,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct Settings<T> {
    /// Entries below this magnitude are treated as zero when pivoting.
    pub pivot_tol: T,
    pub max_iterations: usize,
}

impl<T: Real> Default for Settings<T> {
    fn default() -> Self {
        // 1e-9 for f64; scaled up for lower-precision types
        let eps = T::epsilon();
        let tol = (eps * T::lit(100.0)).max(T::lit(1e-9));
        Settings { pivot_tol: tol, max_iterations: 50_000 }
    }
}

struct Tableau<T> {
    /// `rows x (cols + 1)`; last column is the right-hand side.
    t: Vec<Vec<T>>,
    basis: Vec<usize>,
    cols: usize,
    tol: T,
    iterations: usize,
    max_iterations: usize,
}

impl<T: Real> Tableau<T> {
    fn rhs(&self, r: usize) -> T {
        self.t[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c];
        for v in self.t[r].iter_mut() {
            *v = *v / p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c];
            if factor == T::zero() {
                continue;
            }
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = *v - factor * pv;
            }
        }
        self.basis[r] = c;
        self.iterations += 1;
    }

    /// Maximizes `cost · x` over columns `< allowed`. Returns `Err(Unbounded)`
    /// if the objective is unbounded.
    fn optimize(&mut self, cost: &[T], allowed: usize) -> Result<()> {
        loop {
            if self.iterations >= self.max_iterations {
                return Err(Error::NonConvergence(self.iterations));
            }
            // reduced cost d_j = c_j - c_B · column_j
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut d = cost[j];
                for (r, &b) in self.basis.iter().enumerate() {
                    d = d - cost[b] * self.t[r][j];
                }
                d > self.tol
            });
            let Some(c) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.t.len() {
                let a = self.t[r][c];
                if a > self.tol {
                    let ratio = self.rhs(r) / a;
                    let better = match leave {
                        None => true,
                        Some((lr, best)) => {
                            ratio < best - self.tol
                                || (ratio <= best + self.tol && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return Err(Error::Unbounded),
            }
        }
    }
}

pub fn solve<T: Real>(problem: &Problem<T>, settings: &Settings<T>) -> Result<Solution<T>> {
    let m = problem.rows.len();
    let n = problem.objective.len();
    assert_eq!(problem.rhs.len(), m, "rhs length must match row count");
    assert!(problem.rows.iter().all(|r| r.len() == n), "ragged constraint matrix");

    // columns: n structural, then m artificial
    let cols = n + m;
    let mut t = Vec::with_capacity(m);
    for (i, (row, &b)) in problem.rows.iter().zip(&problem.rhs).enumerate() {
        let sign = if b < T::zero() { -T::one() } else { T::one() };
        let mut r: Vec<T> = row.iter().map(|&v| v * sign).collect();
        r.extend((0..m).map(|j| if j == i { T::one() } else { T::zero() }));
        r.push(b * sign);
        t.push(r);
    }
    let mut tab = Tableau {
        t,
        basis: (n..cols).collect(),
        cols,
        tol: settings.pivot_tol,
        iterations: 0,
        max_iterations: settings.max_iterations,
    };

    let phase1: Vec<T> = (0..cols).map(|j| if j < n { T::zero() } else { -T::one() }).collect();
    tab.optimize(&phase1, cols)?;
    let infeasibility = (0..m)
        .filter(|&r| tab.basis[r] >= n)
        .fold(T::zero(), |acc, r| acc + tab.rhs(r));
    let scale = problem.rhs.iter().fold(T::one(), |acc, &b| acc.max(b.abs()));
    if infeasibility > settings.pivot_tol * scale * T::from_count(m as u64 + 1) {
        return Err(Error::Infeasible);
    }
    // drive zero-level artificials out of the basis where possible
    for r in 0..m {
        if tab.basis[r] < n {
            continue;
        }
        if let Some(c) = (0..n).find(|&j| tab.t[r][j].abs() > settings.pivot_tol && !tab.basis.contains(&j)) {
            tab.pivot(r, c);
        }
    }
    // redundant rows keep an artificial basic at zero; freeze them
    let redundant: Vec<usize> = (0..m).filter(|&r| tab.basis[r] >= n).collect();
    for &r in &redundant {
        for j in 0..n {
            tab.t[r][j] = T::zero();
        }
        tab.t[r][cols] = T::zero();
    }

    let mut phase2 = problem.objective.clone();
    phase2.extend((0..m).map(|_| T::zero()));
    tab.optimize(&phase2, n)?;

    let mut x = vec![T::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rhs(r).max(T::zero());
        }
    }
    let value = x
        .iter()
        .zip(&problem.objective)
        .fold(T::zero(), |acc, (&xi, &ci)| acc + xi * ci);
    Ok(Solution { x, value, iterations: tab.iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lp() {
        // max x + 2y s.t. x + y + s1 = 4, x + 3y + s2 = 6
        let p = Problem {
            objective: vec![1.0f64, 2.0, 0.0, 0.0],
            rows: vec![vec![1.0, 1.0, 1.0, 0.0], vec![1.0, 3.0, 0.0, 1.0]],
            rhs: vec![4.0, 6.0],
        };
        let s = solve(&p, &Settings::default()).unwrap();
        assert!((s.value - 5.0).abs() < 1e-12);
        assert!((s.x[0] - 3.0).abs() < 1e-12 && (s.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        // -x - y = -2 twice, max x
        let p = Problem {
            objective: vec![1.0f32, 0.0],
            rows: vec![vec![-1.0, -1.0], vec![-1.0, -1.0]],
            rhs: vec![-2.0, -2.0],
        };
        let s = solve(&p, &Settings::default()).unwrap();
        assert!((s.value - 2.0).abs() < 1e-5);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let p = Problem { objective: vec![1.0, 0.0], rows: vec![vec![1.0, 1.0]], rhs: vec![-1.0] };
        assert_eq!(solve(&p, &Settings::default()).unwrap_err(), Error::Infeasible);
        let p = Problem { objective: vec![1.0, 0.0], rows: vec![vec![-1.0, 1.0]], rhs: vec![1.0] };
        assert_eq!(solve(&p, &Settings::default()).unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn iteration_cap() {
        let p = Problem {
            objective: vec![1.0f64, 2.0, 0.0, 0.0],
            rows: vec![vec![1.0, 1.0, 1.0, 0.0], vec![1.0, 3.0, 0.0, 1.0]],
            rhs: vec![4.0, 6.0],
        };
        let s = Settings { pivot_tol: 1e-9, max_iterations: 1 };
        assert!(matches!(solve(&p, &s), Err(Error::NonConvergence(_))));
    }
}
