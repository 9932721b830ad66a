//! Centralized maximal matching, the comparison scheduler.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, LinkId, Matching, QueueVector};

/// Greedy maximal matching over the positive-queue links, visited in a
/// uniformly shuffled order.
pub fn maximal_matching<R: Rng + ?Sized>(graph: &Graph, q: &QueueVector, rng: &mut R) -> Matching {
    let mut order: Vec<LinkId> = (0..graph.link_count()).filter(|&l| q.get(l) > 0).collect();
    order.shuffle(rng);
    let mut busy = vec![false; graph.node_count()];
    let mut m = Matching::empty(graph.link_count());
    for l in order {
        let (u, v) = graph.endpoints(l);
        if !busy[u] && !busy[v] {
            busy[u] = true;
            busy[v] = true;
            m.insert(l);
        }
    }
    m
}

/// True iff `m` is a matching and no positive-queue link can be added to it.
pub fn is_maximal(graph: &Graph, q: &QueueVector, m: &Matching) -> bool {
    if !m.is_valid_for(graph) {
        return false;
    }
    let covered = m.node_links(graph);
    (0..graph.link_count()).all(|l| {
        let (u, v) = graph.endpoints(l);
        m.contains(l) || q.get(l) == 0 || covered[u].is_some() || covered[v].is_some()
    })
}
