//! Exact maximum independent set by branch and bound.
//!
//! The independent sets of a graph are the cliques of its complement, so the
//! solver runs a Tomita-style maximum clique search on complement bitsets,
//! bounding each branch by a greedy coloring of the candidate set.

/// Dense adjacency over `n` vertices stored as rows of 64-bit words.
#[derive(Clone, Debug)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitGraph { n, words, rows: vec![0; n * words] }
    }

    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = BitGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if adjacent(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    /// The complement graph (no loops).
    pub fn complement(&self) -> BitGraph {
        let mut c = BitGraph::new(self.n);
        for u in 0..self.n {
            for w in 0..self.words {
                c.rows[u * self.words + w] = !self.rows[u * self.words + w];
            }
            c.rows[u * self.words + u / 64] &= !(1 << (u % 64));
            mask_tail(&mut c.rows[u * self.words..(u + 1) * self.words], self.n);
        }
        c
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }
}

fn mask_tail(row: &mut [u64], n: usize) {
    let used = n % 64;
    if used != 0 {
        if let Some(last) = row.last_mut() {
            *last &= (1u64 << used) - 1;
        }
    }
    let full = n.div_ceil(64);
    for w in row.iter_mut().skip(full) {
        *w = 0;
    }
}

/// Outcome of a maximum independent set search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisResult {
    /// Vertices of the best independent set found, ascending.
    pub witness: Vec<usize>,
    /// Search nodes expanded.
    pub nodes: u64,
    /// False when the node budget ran out; the witness is then only a lower bound.
    pub exhaustive: bool,
}

impl MisResult {
    pub fn size(&self) -> usize {
        self.witness.len()
    }
}

/// Options for [`max_independent_set`].
#[derive(Clone, Debug, Default)]
pub struct MisOptions {
    /// Vertex forced into the solution, valid when the graph is
    /// vertex-transitive.
    pub anchor: Option<usize>,
    /// Cap on expanded nodes; `None` searches to completion.
    pub node_budget: Option<u64>,
}

struct Search<'a> {
    comp: &'a BitGraph,
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
    aborted: bool,
}

/// Exact maximum independent set of `g` (unless the node budget is hit).
pub fn max_independent_set(g: &BitGraph, opts: &MisOptions) -> MisResult {
    let n = g.len();
    if n == 0 {
        return MisResult { witness: Vec::new(), nodes: 0, exhaustive: true };
    }
    let comp = g.complement();
    let mut search = Search {
        comp: &comp,
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        budget: opts.node_budget,
        aborted: false,
    };
    let mut cand = vec![0u64; comp.words];
    match opts.anchor {
        Some(a) => {
            cand.copy_from_slice(comp.row(a));
            search.current.push(a);
            search.best = vec![a];
        }
        None => {
            cand.iter_mut().for_each(|w| *w = !0);
            mask_tail(&mut cand, n);
        }
    }
    search.seed_greedy(&cand);
    search.expand(cand);
    let mut witness = search.best;
    witness.sort_unstable();
    MisResult { witness, nodes: search.nodes, exhaustive: !search.aborted }
}

impl Search<'_> {
    /// Greedy clique in the complement as the initial incumbent.
    fn seed_greedy(&mut self, cand: &[u64]) {
        let mut p = cand.to_vec();
        let mut clique = self.current.clone();
        while let Some(v) = first_bit(&p) {
            clique.push(v);
            and_assign(&mut p, self.comp.row(v));
        }
        if clique.len() > self.best.len() {
            self.best = clique;
        }
    }

    fn expand(&mut self, mut cand: Vec<u64>) {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                self.aborted = true;
                return;
            }
        }
        let (order, colors) = self.color_sort(&cand);
        for i in (0..order.len()).rev() {
            if self.current.len() + colors[i] <= self.best.len() || self.aborted {
                return;
            }
            let v = order[i];
            self.current.push(v);
            let mut next = cand.clone();
            and_assign(&mut next, self.comp.row(v));
            if next.iter().all(|&w| w == 0) {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            cand[v / 64] &= !(1 << (v % 64));
        }
    }

    /// Greedy sequential coloring; returns vertices in nondecreasing color
    /// order with the color count seen so far at each position.
    fn color_sort(&self, cand: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut uncolored = cand.to_vec();
        let mut color = 0;
        while uncolored.iter().any(|&w| w != 0) {
            color += 1;
            let mut avail = uncolored.clone();
            while let Some(v) = first_bit(&avail) {
                avail[v / 64] &= !(1 << (v % 64));
                uncolored[v / 64] &= !(1 << (v % 64));
                for (a, r) in avail.iter_mut().zip(self.comp.row(v)) {
                    *a &= !r;
                }
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }
}

fn first_bit(set: &[u64]) -> Option<usize> {
    set.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn and_assign(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x &= y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> BitGraph {
        BitGraph::from_fn(n, |u, v| (u + 1) % n == v || (v + 1) % n == u)
    }

    #[test]
    fn cycles_and_trivial_graphs() {
        for n in 3..12 {
            let r = max_independent_set(&cycle(n), &MisOptions::default());
            assert_eq!(r.size(), n / 2);
            assert!(cycle(n).is_independent(&r.witness));
            assert!(r.exhaustive);
        }
        let empty = BitGraph::new(70);
        assert_eq!(max_independent_set(&empty, &MisOptions::default()).size(), 70);
        let complete = BitGraph::from_fn(70, |_, _| true);
        assert_eq!(max_independent_set(&complete, &MisOptions::default()).size(), 1);
        assert_eq!(max_independent_set(&BitGraph::new(0), &MisOptions::default()).size(), 0);
    }

    #[test]
    fn anchor_and_budget() {
        let g = cycle(9);
        let r = max_independent_set(&g, &MisOptions { anchor: Some(4), node_budget: None });
        assert_eq!(r.size(), 4);
        assert!(r.witness.contains(&4));
        let r = max_independent_set(&g, &MisOptions { anchor: None, node_budget: Some(0) });
        assert!(!r.exhaustive);
        assert!(g.is_independent(&r.witness));
    }

    #[test]
    fn complement_masks_tail_bits() {
        let g = BitGraph::new(65);
        let c = g.complement();
        assert!(c.has_edge(0, 64));
        assert!(!c.has_edge(3, 3));
        assert_eq!(c.row(0)[1], 1);
    }
}
