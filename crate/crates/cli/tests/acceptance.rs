//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;
use std::time::{Duration, Instant};

use cayley_capacity::poly::MultiPoly;
use cayley_capacity::polycert::{build_p, grid_values, low_degree_extension, reduce_mod_ideal, ReductionBasis};
use cayley_capacity::{
    alpha_exact, alpha_lin_exact, certify_code, is_linear_independent_set, lovasz_theta, rho_lin,
    AlphaLinOptions, CayleyGraph, FieldCtx, FieldElem, LinearCode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cayley-capacity"))
}

fn run(args: &[&str]) -> Result<Output, String> {
    let out = bin().args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "`{}` exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out)
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn field(p: u64, m: u32) -> Arc<FieldCtx> {
    Arc::new(FieldCtx::new(p, m, None).unwrap())
}

fn e(i: u32) -> FieldElem {
    FieldElem::from_index_unchecked(i)
}

fn random_graph(f: &Arc<FieldCtx>, rng: &mut ChaCha8Rng) -> CayleyGraph {
    let orbits = CayleyGraph::negation_orbits(f).len();
    CayleyGraph::from_orbit_mask(f.clone(), rng.gen_range(0..1u64 << orbits)).unwrap()
}

/// Every pair of distinct codewords, checked coordinate by coordinate.
fn pairwise_independent(g: &CayleyGraph, code: &LinearCode) -> bool {
    let q = g.q() as u64;
    let words: Vec<Vec<FieldElem>> = (0..q.pow(code.m() as u32))
        .map(|mut c| {
            let x: Vec<FieldElem> = (0..code.m())
                .map(|_| {
                    let d = c % q;
                    c /= q;
                    e(d as u32)
                })
                .collect();
            code.encode(g, &x)
        })
        .collect();
    words.iter().enumerate().all(|(i, u)| {
        words[i + 1..]
            .iter()
            .all(|v| !u.iter().zip(v).all(|(&a, &b)| a == b || g.adjacent(a, b)))
    })
}

/// Include/exclude recursion over an explicit adjacency matrix.
fn naive_alpha(adj: &[Vec<bool>]) -> usize {
    fn go(adj: &[Vec<bool>], v: usize, chosen: &mut Vec<usize>, best: &mut usize) {
        if v == adj.len() {
            *best = (*best).max(chosen.len());
            return;
        }
        if chosen.iter().all(|&u| !adj[u][v]) {
            chosen.push(v);
            go(adj, v + 1, chosen, best);
            chosen.pop();
        }
        go(adj, v + 1, chosen, best);
    }
    let mut best = 0;
    go(adj, 0, &mut Vec::new(), &mut best);
    best
}

fn power_adjacency(g: &CayleyGraph, k: u32) -> Vec<Vec<bool>> {
    let q = g.q() as usize;
    let n = q.pow(k);
    let digits = |mut c: usize| -> Vec<FieldElem> {
        let mut d = vec![FieldElem::ZERO; k as usize];
        for slot in d.iter_mut().rev() {
            *slot = e((c % q) as u32);
            c /= q;
        }
        d
    };
    (0..n)
        .map(|u| {
            let du = digits(u);
            (0..n)
                .map(|v| u != v && du.iter().zip(digits(v)).all(|(&a, b)| a == b || g.adjacent(a, b)))
                .collect()
        })
        .collect()
}

/// All systematic codes `(x, Ax)` of block length n and dimension m < n.
fn all_codes(q: u32, n: usize, m: usize) -> impl Iterator<Item = LinearCode> {
    let entries = (n - m) * m;
    (0..(q as u64).pow(entries as u32)).map(move |mut idx| {
        let mut a = vec![FieldElem::ZERO; entries];
        for slot in a.iter_mut().rev() {
            *slot = e((idx % q as u64) as u32);
            idx /= q as u64;
        }
        LinearCode::new(n, m, a).unwrap()
    })
}

fn criterion_1() -> Check {
    let path = tmp("acceptance_c5.json");
    let p = path.to_str().unwrap();
    run(&["report", "--field", "5", "--set", "1,4", "--max-n", "2", "--json", p])?;
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let rho = v["rho_lin"]["value"].as_f64().ok_or("missing rho_lin")?;
    ensure!((rho - 5f64.sqrt()).abs() < 1e-12, "rho_lin = {rho}");
    ensure!(v["rho_lin"]["exponent"] == "1/2", "exponent {}", v["rho_lin"]["exponent"]);
    let lin = v["alpha_lin_by_power"]
        .as_array()
        .and_then(|a| a.iter().find(|x| x["n"] == 2))
        .ok_or("no alpha_lin entry for n = 2")?;
    ensure!(lin["size"] == 5 && lin["m"] == 1, "alpha_lin(C5^2) entry {lin}");
    ensure!(lin["witness"] == serde_json::json!([[2]]), "witness {}", lin["witness"]);
    ensure!(lin["exhaustive"] == true, "search not exhaustive");
    let lower = v["lower_bound_theta_lin"]["value"].as_f64().ok_or("missing lower bound")?;
    ensure!((lower - rho).abs() < 1e-12, "lower bound {lower} vs rho_lin {rho}");
    Ok(format!("rho_lin = {rho} = 5^(1/2), alpha_lin(C5^2) = 5 with A = [2], lower bound {lower}"))
}

fn criterion_2() -> Check {
    let out = run(&["certify", "--field", "5", "--set", "1,4", "--n", "2", "--m", "1", "--matrix", "2", "--json"])?;
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure!(v["verdict"]["status"] == "pass", "verdict {}", v["verdict"]);
    let stages = v["stages"].as_array().ok_or("no stage log")?;
    ensure!(stages.len() == 7 && stages.iter().all(|s| s["passed"] == true), "stages {stages:?}");
    // 4(z - 1)(z - 4) expanded over the integers, then reduced mod 5
    let expanded = [4 * 4 % 5, (4 * -5i64).rem_euclid(5), 4];
    let expect: Vec<Value> = expanded
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(d, &c)| serde_json::json!([[d], c]))
        .collect();
    ensure!(v["q_poly"]["terms"] == Value::Array(expect.clone()), "Q = {} vs {expect:?}", v["q_poly"]["terms"]);
    ensure!(v["c"] == 1 && v["c2"] == 4, "c = {}, c2 = {}", v["c"], v["c2"]);
    ensure!(v["inequality"] == serde_json::json!([2, 2]), "inequality {}", v["inequality"]);
    Ok("all 7 stages pass, Q = 4z^2 + 1 = 4(z-1)(z-4), c = 1, c2 = 4, 2 <= 2".into())
}

fn criterion_3() -> Check {
    let c5 = CayleyGraph::from_indices(field(5, 1), &[1, 4]).unwrap();
    let t5 = lovasz_theta::<f64>(&c5, 1e-6).map_err(|e| e.to_string())?.value;
    ensure!((t5 - 5f64.sqrt()).abs() < 1e-5, "theta(C5) = {t5}");
    let c7 = CayleyGraph::from_indices(field(7, 1), &[1, 6]).unwrap();
    let t7 = lovasz_theta::<f64>(&c7, 1e-6).map_err(|e| e.to_string())?.value;
    let c = (std::f64::consts::PI / 7.0).cos();
    ensure!((t7 - 7.0 * c / (1.0 + c)).abs() < 1e-5, "theta(C7) = {t7}");

    let mut graphs = Vec::new();
    for (p, m) in [(5, 1), (7, 1), (3, 2), (11, 1)] {
        graphs.extend(CayleyGraph::all_symmetric(&field(p, m)));
    }
    let f13 = field(13, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    graphs.extend((0..50).map(|_| random_graph(&f13, &mut rng)));
    let mut worst = 0f64;
    for g in &graphs {
        let a = lovasz_theta::<f64>(g, 1e-6).map_err(|e| format!("{g}: {e}"))?.value;
        let b = lovasz_theta::<f64>(&g.complement(), 1e-6).map_err(|e| format!("{g}: {e}"))?.value;
        let err = (a * b - g.q() as f64).abs();
        worst = worst.max(err);
        ensure!(err < 1e-4, "{g}: theta * theta(complement) = {}", a * b);
    }
    Ok(format!(
        "theta(C5) = {t5:.9}, theta(C7) = {t7:.9}, product identity on {} graphs (max error {worst:.1e})",
        graphs.len()
    ))
}

fn criterion_4() -> Check {
    for q in [5u64, 13, 17] {
        let g = CayleyGraph::paley(field(q, 1)).unwrap();
        ensure!(g.find_complementing_scalar().is_some(), "Paley({q}) has no complementing scalar");
        let r = alpha_lin_exact(&g, 2, &AlphaLinOptions::default()).map_err(|e| e.to_string())?;
        ensure!(r.exhaustive && r.size(g.q()) == q as u128, "alpha_lin(Paley({q})^2) = {}", r.size(g.q()));
        let sq = (q as f64).sqrt();
        let rho = rho_lin::<f64>(&g);
        let theta = lovasz_theta::<f64>(&g, 1e-6).map_err(|e| e.to_string())?.value;
        ensure!((rho - sq).abs() < 1e-5 && (theta - sq).abs() < 1e-5, "Paley({q}): rho {rho}, theta {theta}");
    }
    let mut found = Vec::new();
    for p in [5u64, 13] {
        let f = field(p, 1);
        for g in CayleyGraph::all_symmetric(&f).into_iter().filter(|g| g.s() as u64 == (p - 1) / 2) {
            if g.find_isomorphism(&g.complement()).is_some() {
                let w = g.find_complementing_scalar();
                ensure!(w.is_some(), "{g} is self-complementary without a complementing scalar");
                found.push(g.to_string());
            }
        }
    }
    ensure!(!found.is_empty(), "no self-complementary circulants found");
    Ok(format!(
        "Paley 5/13/17 tight; {} self-complementary circulants over p = 5, 13 all have a scalar",
        found.len()
    ))
}

fn criterion_5() -> Check {
    let mut lines = Vec::new();
    for p in [13u64, 17] {
        let path = tmp(&format!("acceptance_sep{p}.json"));
        run(&["separation", &p.to_string(), "--json", path.to_str().unwrap()])?;
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let bound = (p - 1) / 4 + 1;
        let rho = v["rho_lin"]["value"].as_f64().ok_or("missing rho_lin")?;
        ensure!(v["strict_gap"] == true, "p = {p}: no strict gap reported");
        ensure!(rho < bound as f64 && (rho - (p as f64).sqrt()).abs() < 1e-12, "p = {p}: rho_lin {rho}");
        let alpha = v["alpha"]["size"].as_u64().ok_or("missing alpha")?;
        ensure!(alpha >= bound && v["alpha"]["exhaustive"] == true, "p = {p}: alpha {alpha}");
        // re-check the interval witness against the graph directly
        let g = CayleyGraph::interval(p).unwrap();
        let w: Vec<u32> = serde_json::from_value(v["interval_witness"].clone()).map_err(|e| e.to_string())?;
        ensure!(w.len() as u64 == bound, "p = {p}: witness {w:?}");
        for (i, &a) in w.iter().enumerate() {
            for &b in &w[i + 1..] {
                ensure!(!g.adjacent(e(a), e(b)), "p = {p}: {a} ~ {b}");
            }
        }
        lines.push(format!("p = {p}: sqrt(p) = {rho:.4} < {bound} <= alpha = {alpha}"));
    }
    Ok(lines.join("; "))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let fields: Vec<Arc<FieldCtx>> =
        [(5, 1), (7, 1), (3, 2), (2, 3), (11, 1), (13, 1), (2, 2), (3, 1)].iter().map(|&(p, m)| field(p, m)).collect();

    let mut codes = 0;
    while codes < 200 {
        let f = &fields[rng.gen_range(0..fields.len())];
        let g = random_graph(f, &mut rng);
        let n = rng.gen_range(2..=4usize);
        let m = rng.gen_range(1..n);
        if (f.q() as u64).pow(m as u32) > 10_000 {
            continue;
        }
        let a = (0..(n - m) * m).map(|_| e(rng.gen_range(0..f.q()))).collect();
        let code = LinearCode::new(n, m, a).unwrap();
        let fast = is_linear_independent_set(&g, &code).map_err(|e| e.to_string())?;
        ensure!(fast == pairwise_independent(&g, &code), "{g} A = {:?}", code.rows_as_indices());
        codes += 1;
    }

    let shapes: Vec<((u64, u32), u32)> = vec![
        ((2, 1), 4), ((3, 1), 3), ((2, 2), 2), ((5, 1), 2), ((7, 1), 1), ((2, 3), 1), ((3, 2), 1),
        ((11, 1), 1), ((13, 1), 1), ((2, 4), 1), ((17, 1), 1), ((19, 1), 1), ((23, 1), 1),
        ((5, 2), 1), ((3, 3), 1), ((29, 1), 1),
    ];
    for _ in 0..100 {
        let ((p, m), kmax) = shapes[rng.gen_range(0..shapes.len())];
        let f = field(p, m);
        let g = random_graph(&f, &mut rng);
        let k = rng.gen_range(1..=kmax);
        let adj = power_adjacency(&g, k);
        ensure!(adj.len() <= 30, "graph too large");
        let a = alpha_exact(&g, k as usize).map_err(|e| e.to_string())?;
        ensure!(a.size == naive_alpha(&adj), "{g}^{k}: {} vs {}", a.size, naive_alpha(&adj));
    }

    let mut certified = 0;
    for (p, m) in [(5, 1), (7, 1), (3, 2), (13, 1)] {
        for g in CayleyGraph::all_symmetric(&field(p, m)) {
            for n in 2..=3 {
                let r = alpha_lin_exact(&g, n, &AlphaLinOptions::default()).map_err(|e| e.to_string())?;
                let Some(code) = r.witness.filter(|c| c.m() < c.n()) else { continue };
                let cert = certify_code(&g, &code).map_err(|e| e.to_string())?;
                if !cert.verdict.passed() {
                    continue;
                }
                let basis = ReductionBasis::for_graph(&g);
                let poly = build_p(&g, &code).map_err(|e| e.to_string())?;
                let lde = low_degree_extension(g.field(), code.m(), basis.nodes(), &grid_values(&poly, basis.nodes()))
                    .map_err(|e| e.to_string())?;
                ensure!(reduce_mod_ideal(&poly, &basis).map_err(|e| e.to_string())? == lde, "{g} n = {n}");
                certified += 1;
            }
        }
    }
    for _ in 0..100 {
        let f = &fields[rng.gen_range(0..fields.len())];
        let g = random_graph(f, &mut rng);
        let basis = ReductionBasis::for_graph(&g);
        let nvars = rng.gen_range(1..=3);
        let mut poly = MultiPoly::zero(f.clone(), nvars);
        for _ in 0..rng.gen_range(0..10) {
            let exps = (0..nvars).map(|_| rng.gen_range(0..=15)).collect();
            poly.add_term(exps, e(rng.gen_range(0..f.q())));
        }
        let lde = low_degree_extension(f, nvars, basis.nodes(), &grid_values(&poly, basis.nodes()))
            .map_err(|e| e.to_string())?;
        ensure!(reduce_mod_ideal(&poly, &basis).map_err(|e| e.to_string())? == lde, "{g}: {poly}");
    }
    Ok(format!(
        "200 codes vs pairwise check, 100 graphs vs naive alpha, {certified} certified codes + 100 random polynomials: 0 discrepancies"
    ))
}

fn criterion_7() -> Check {
    let mut graphs = 0;
    let mut codes = 0;
    let mut pairs = 0;
    for (p, m) in [(5, 1), (7, 1), (3, 2), (11, 1)] {
        for g in CayleyGraph::all_symmetric(&field(p, m)) {
            let q = g.q();
            let rho = rho_lin::<f64>(&g);
            for n in 2..=3usize {
                for m in 1..n {
                    for code in all_codes(q, n, m) {
                        if is_linear_independent_set(&g, &code).map_err(|e| e.to_string())? {
                            let v = (q as f64).powf(m as f64 / n as f64);
                            ensure!(v <= rho + 1e-9, "{g}: code rate {m}/{n} gives {v} > {rho}");
                            codes += 1;
                        }
                    }
                }
            }
            let mut size = [1u128; 4];
            for (n, slot) in size.iter_mut().enumerate().skip(1) {
                let r = alpha_lin_exact(&g, n, &AlphaLinOptions::default()).map_err(|e| e.to_string())?;
                ensure!(r.exhaustive, "{g}: n = {n} not exhaustive");
                ensure!((q as f64).powf(r.m as f64 / n as f64) <= rho + 1e-9, "{g}: dominance at n = {n}");
                *slot = r.size(q);
            }
            for (k, d) in [(1, 1), (1, 2), (2, 1)] {
                ensure!(size[k + d] >= size[k] * size[d], "{g}: alpha_lin not supermultiplicative at ({k}, {d})");
                pairs += 1;
            }
            graphs += 1;
        }
    }
    Ok(format!("{graphs} graphs, {codes} independent codes dominated by rho_lin, {pairs} supermultiplicative pairs"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("linear bound tight at C5 (report)", criterion_1, Duration::from_secs(1)),
        ("certificate replay for C5, A = [2]", criterion_2, Duration::from_millis(100)),
        ("theta closed forms and product identity", criterion_3, Duration::from_secs(120)),
        ("self-complementary suite", criterion_4, Duration::from_secs(60)),
        ("interval separation family", criterion_5, Duration::from_secs(5)),
        ("oracle equivalence", criterion_6, Duration::from_secs(120)),
        ("bound dominance sweep", criterion_7, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(detail) if elapsed <= *limit => format!("PASS  {detail}"),
            Ok(detail) => format!("FAIL  over time limit {limit:?}: {detail}"),
            Err(reason) => format!("FAIL  {reason}"),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!("criterion {} [{:.3} s] {name}: {verdict}", i + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
