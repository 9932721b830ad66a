//! Exhaustive ground truth for small graphs: matching enumeration,
//! maximum-weight matching, the Lyapunov diagnostic and the lower bound on
//! the probability of producing a good schedule in one control part.

use crate::error::{Error, Result};
use crate::graph::{Graph, LinkId, Matching, QueueVector};

pub const DEFAULT_LINK_CAP: usize = 24;

#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    /// Graphs with more links than this are refused.
    pub link_cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { link_cap: DEFAULT_LINK_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub optimal_matching: Matching,
    pub optimal_weight: u64,
}

impl Oracle {
    pub fn with_cap(link_cap: usize) -> Self {
        Self { link_cap }
    }

    fn check_cap(&self, graph: &Graph) -> Result<()> {
        if graph.link_count() > self.link_cap {
            Err(Error::CapExceeded { links: graph.link_count(), cap: self.link_cap })
        } else {
            Ok(())
        }
    }

    /// Calls `visit` once for every matching of `graph` (including the empty
    /// one), passing member ids in ascending order. Matchings are produced in
    /// lexicographic order of their sorted id lists.
    pub fn for_each_matching(&self, graph: &Graph, mut visit: impl FnMut(&[LinkId])) -> Result<()> {
        self.check_cap(graph)?;
        let mut used = vec![false; graph.node_count()];
        let mut chosen = Vec::new();
        visit(&chosen);
        extend(graph, 0, &mut used, &mut chosen, &mut visit);
        Ok(())
    }

    pub fn enumerate_matchings(&self, graph: &Graph) -> Result<Vec<Matching>> {
        let mut out = Vec::new();
        self.for_each_matching(graph, |ids| {
            let mut m = Matching::empty(graph.link_count());
            for &l in ids {
                m.insert(l);
            }
            out.push(m);
        })?;
        Ok(out)
    }

    /// A maximum-weight matching. Among optimal matchings the one whose
    /// sorted id list is lexicographically smallest is returned.
    pub fn max_weight_matching(&self, graph: &Graph, q: &QueueVector) -> Result<OracleResult> {
        q.check_for(graph)?;
        let mut best_weight = 0u64;
        let mut best: Vec<LinkId> = Vec::new();
        // Enumeration is already in lexicographic order, so a strict
        // improvement test keeps the smallest optimal id list.
        self.for_each_matching(graph, |ids| {
            let w: u64 = ids.iter().map(|&l| q.get(l)).sum();
            if w > best_weight {
                best_weight = w;
                best = ids.to_vec();
            }
        })?;
        let optimal_matching = Matching::from_links(graph, &best)?;
        Ok(OracleResult { optimal_matching, optimal_weight: best_weight })
    }

    /// `Σ q(e)² + (max(0, β·W* − W(I)))²` where `W*` is the optimal weight.
    pub fn lyapunov_value(&self, graph: &Graph, q: &QueueVector, current: &Matching, beta: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::domain(format!("beta must lie in [0, 1], got {beta}")));
        }
        let opt = self.max_weight_matching(graph, q)?;
        let v1: f64 = q.as_slice().iter().map(|&x| (x as f64) * (x as f64)).sum();
        let shortfall = (beta * opt.optimal_weight as f64 - current.weight(q) as f64).max(0.0);
        Ok(v1 + shortfall * shortfall)
    }
}

fn extend(graph: &Graph, from: LinkId, used: &mut [bool], chosen: &mut Vec<LinkId>, visit: &mut impl FnMut(&[LinkId])) {
    for l in from..graph.link_count() {
        let (u, v) = graph.endpoints(l);
        if used[u] || used[v] {
            continue;
        }
        used[u] = true;
        used[v] = true;
        chosen.push(l);
        visit(chosen);
        extend(graph, l + 1, used, chosen, visit);
        chosen.pop();
        used[u] = false;
        used[v] = false;
    }
}

pub fn enumerate_matchings(graph: &Graph) -> Result<Vec<Matching>> {
    Oracle::default().enumerate_matchings(graph)
}

pub fn max_weight_matching(graph: &Graph, q: &QueueVector) -> Result<OracleResult> {
    Oracle::default().max_weight_matching(graph, q)
}

pub fn lyapunov_value(graph: &Graph, q: &QueueVector, current: &Matching, beta: f64) -> Result<f64> {
    Oracle::default().lyapunov_value(graph, q, current, beta)
}

/// Uniform lower bound on the probability that one control part produces a
/// schedule within `k/(k+2)` of the optimum weight:
/// `min{1, (p/(1−p))^n} · ((1−p)/(kΔ))^n`.
pub fn delta_lower_bound(p: f64, n: usize, k: usize, max_degree: usize) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("seed probability must lie in (0, 1), got {p}")));
    }
    if k == 0 || max_degree == 0 {
        return Err(Error::domain("k and max_degree must be at least 1"));
    }
    let n = i32::try_from(n).map_err(|_| Error::domain("node count too large"))?;
    let odds = (p / (1.0 - p)).powi(n).min(1.0);
    Ok(odds * ((1.0 - p) / (k as f64 * max_degree as f64)).powi(n))
}
