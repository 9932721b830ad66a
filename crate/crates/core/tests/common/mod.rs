//! Shared fixtures: the two hand-worked control parts and random inputs.
#![allow(dead_code)]

use augsched::protocol::ScriptedChoices;
use augsched::{Graph, Matching, QueueVector};
use rand::seq::SliceRandom;
use rand::Rng;

pub const EXAMPLE1_TRACE: &str = "\
phase=1 kind=REQ from=0 to=1 link=0
phase=1 kind=ACK from=1 to=0 link=0
phase=2 kind=REQ from=1 to=2 link=1
phase=2 kind=ACK from=2 to=1 link=1
phase=3 kind=REQ from=2 to=3 link=2
phase=3 kind=ACK from=3 to=2 link=2
phase=4 kind=REQ from=3 to=4 link=3
phase=4 kind=ACK from=4 to=3 link=3
phase=6 kind=DEC from=4 to=3 link=3
phase=7 kind=DEC from=3 to=2 link=2
phase=8 kind=DEC from=2 to=1 link=1
phase=9 kind=DEC from=1 to=0 link=0
";

/// Path a-b-c-d-e with side links b-f and d-h; base schedule {ab, cd}.
pub fn example1() -> (Graph, Matching) {
    let (a, b, c, d, e, f, h) = (0, 1, 2, 3, 4, 5, 6);
    let g = Graph::from_links(7, &[(a, b), (b, c), (c, d), (d, e), (b, f), (d, h)]).unwrap();
    let base = Matching::from_links(&g, &[0, 2]).unwrap();
    (g, base)
}

pub fn example1_choices() -> ScriptedChoices {
    // seed a, intended size 2; b picks c, d picks e
    ScriptedChoices::new(&[0], 2).pick(1, 2).pick(3, 4)
}

pub const EXAMPLE2_TRACE: &str = "\
phase=1 kind=REQ from=0 to=1 link=0
phase=1 kind=REQ from=4 to=5 link=4
phase=1 kind=REQ from=9 to=10 link=8
phase=1 kind=REQ from=11 to=12 link=9
phase=1 kind=ACK from=1 to=0 link=0
phase=1 kind=ACK from=5 to=4 link=4
phase=1 kind=ACK from=10 to=9 link=8
phase=1 kind=ACK from=12 to=11 link=9
phase=2 kind=REQ from=1 to=2 link=1
phase=2 kind=REQ from=5 to=6 link=5
phase=2 kind=REQ from=10 to=13 link=10
phase=2 kind=REQ from=12 to=13 link=11
phase=2 kind=ACK from=2 to=1 link=1
phase=2 kind=ACK from=6 to=5 link=5
phase=3 kind=REQ from=2 to=3 link=2
phase=3 kind=REQ from=6 to=7 link=6
phase=3 kind=ACK from=3 to=2 link=2
phase=3 kind=ACK from=7 to=6 link=6
phase=4 kind=REQ from=3 to=0 link=3
phase=4 kind=REQ from=7 to=8 link=7
phase=4 kind=ACK from=8 to=7 link=7
phase=6 kind=DEC from=3 to=2 link=2
phase=6 kind=DEC from=8 to=7 link=7
phase=6 kind=DEC from=10 to=9 link=8
phase=6 kind=DEC from=12 to=11 link=9
phase=7 kind=DEC from=2 to=1 link=1
phase=7 kind=DEC from=7 to=6 link=6
phase=8 kind=DEC from=1 to=0 link=0
phase=8 kind=DEC from=6 to=5 link=5
phase=9 kind=DEC from=5 to=4 link=4
";

pub fn example2() -> (Graph, Matching, QueueVector) {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/example2.graph");
    let g = Graph::from_file(path).unwrap();
    let base = Matching::from_links(&g, &[0, 2, 5, 7, 8, 9]).unwrap();
    let q = QueueVector::new(vec![1, 5, 1, 5, 4, 2, 4, 2, 3, 3, 1, 1, 1, 1, 1, 1]);
    (g, base, q)
}

pub fn example2_choices() -> ScriptedChoices {
    ScriptedChoices::new(&[0, 4, 9, 11], 2).pick(4, 5).pick(1, 2).pick(10, 13).pick(12, 13).pick(6, 7).pick(3, 0)
}

/// Connected graph on `n` nodes: a random spanning tree plus each other
/// pair with probability `extra`.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, extra: f64) -> Graph {
    let mut g = Graph::new(n).unwrap();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        g.add_link(parent, order[i]).unwrap();
    }
    for u in 0..n {
        for v in u + 1..n {
            if g.link_between(u, v).is_none() && rng.gen_bool(extra) {
                g.add_link(u, v).unwrap();
            }
        }
    }
    g
}

/// Greedy matching over a random link order, keeping each candidate with
/// probability `keep`.
pub fn random_matching<R: Rng>(rng: &mut R, g: &Graph, keep: f64) -> Matching {
    let mut ids: Vec<usize> = (0..g.link_count()).collect();
    ids.shuffle(rng);
    let mut used = vec![false; g.node_count()];
    let mut chosen = Vec::new();
    for l in ids {
        let (u, v) = g.endpoints(l);
        if !used[u] && !used[v] && rng.gen_bool(keep) {
            used[u] = true;
            used[v] = true;
            chosen.push(l);
        }
    }
    Matching::from_links(g, &chosen).unwrap()
}

pub fn random_queues<R: Rng>(rng: &mut R, g: &Graph, max: u64) -> QueueVector {
    QueueVector::new((0..g.link_count()).map(|_| rng.gen_range(0..=max)).collect())
}
