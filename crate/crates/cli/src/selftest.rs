//! Seeded spot checks of solver results against brute-force oracles.

use std::sync::Arc;

use cayley_capacity::{
    alpha_exact, is_linear_independent_set, lovasz_theta, rho_lin_exponent, CayleyGraph, FieldCtx,
    FieldElem, LinearCode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIELDS: [(u64, u32); 5] = [(5, 1), (7, 1), (2, 3), (3, 2), (11, 1)];

pub fn run(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields: Vec<Arc<FieldCtx>> = FIELDS
        .iter()
        .map(|&(p, m)| Arc::new(FieldCtx::new(p, m, None).expect("small field")))
        .collect();
    let mut checks = 0usize;
    for case in 0..cases {
        let f = fields[rng.gen_range(0..fields.len())].clone();
        let orbits = CayleyGraph::negation_orbits(&f).len();
        let mask = rng.gen_range(0..1u64 << orbits);
        let g = CayleyGraph::from_orbit_mask(f.clone(), mask).map_err(|e| e.to_string())?;
        let ctx = |what: &str| format!("case {case}, {} S = {:?}: {what}", f.spec_string(), g.set_indices());

        let (e, ec) = (rho_lin_exponent(&g), rho_lin_exponent(&g.complement()));
        if e.0 + ec.0 != 1.into() {
            return Err(ctx("rho_lin exponents of G and its complement do not sum to 1"));
        }

        let n = rng.gen_range(2..=3usize);
        let m = rng.gen_range(1..n);
        let a: Vec<FieldElem> = (0..(n - m) * m)
            .map(|_| FieldElem::from_index_unchecked(rng.gen_range(0..f.q())))
            .collect();
        let code = LinearCode::new(n, m, a).map_err(|e| e.to_string())?;
        let fast = is_linear_independent_set(&g, &code).map_err(|e| e.to_string())?;
        if fast != pairwise_independent(&g, &code) {
            return Err(ctx("independence check disagrees with pairwise enumeration"));
        }

        let alpha = alpha_exact(&g, 1).map_err(|e| e.to_string())?.size;
        let naive = naive_alpha(&g);
        if alpha != naive {
            return Err(ctx(&format!("alpha = {alpha} but exhaustive search gives {naive}")));
        }

        let t = lovasz_theta::<f64>(&g, 1e-6).map_err(|e| e.to_string())?.value;
        let tc = lovasz_theta::<f64>(&g.complement(), 1e-6).map_err(|e| e.to_string())?.value;
        if (t * tc - f.q() as f64).abs() > 1e-4 {
            return Err(ctx(&format!("theta(G) theta(complement) = {} != q", t * tc)));
        }
        if (naive as f64) > t + 1e-6 {
            return Err(ctx("alpha exceeds theta"));
        }
        checks += 5;
    }
    println!("selftest   seed {seed}: {cases} graphs, {checks} checks passed");
    Ok(())
}

/// Every pair of codewords is checked; since the code is a group this is
/// redundant, which is the point.
fn pairwise_independent(g: &CayleyGraph, code: &LinearCode) -> bool {
    let q = g.q();
    let words: Vec<Vec<FieldElem>> = (0..(q as u64).pow(code.m() as u32))
        .map(|mut c| {
            let x: Vec<FieldElem> = (0..code.m())
                .map(|_| {
                    let d = (c % q as u64) as u32;
                    c /= q as u64;
                    FieldElem::from_index_unchecked(d)
                })
                .collect();
            code.encode(g, &x)
        })
        .collect();
    let f = g.field();
    words.iter().enumerate().all(|(i, u)| {
        words[i + 1..].iter().all(|v| !u.iter().zip(v).all(|(&a, &b)| g.in_closed_set(f.sub(a, b))))
    })
}

fn naive_alpha(g: &CayleyGraph) -> usize {
    let adj = g.adjacency_matrix();
    let q = adj.len();
    (0u32..1 << q)
        .filter(|&mask| {
            (0..q).all(|u| mask >> u & 1 == 0 || (u + 1..q).all(|v| mask >> v & 1 == 0 || !adj[u][v]))
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}
