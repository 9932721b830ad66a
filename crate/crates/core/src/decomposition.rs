//! Constructive decomposition of `I Δ I*` (current versus optimal matching)
//! into disjoint augmentations of size at most `k`.
//!
//! Every path component is cut into fragments by deleting every `(k+1)`-th
//! optimal link, trying each of the `k+1` starting offsets and keeping the
//! best. Cycles first drop their lightest optimal link and are then treated
//! as paths. The union over components, `𝒜*`, satisfies
//!
//! ```text
//! (k + 2) · weight(I ⊕ 𝒜*) ≥ k · weight(I*)
//! ```
//!
//! and each step asserts its bound with exact integer cross-multiplication.

use crate::error::{Error, Result};
use crate::graph::{
    apply_all, are_disjoint, augmentation_size, gain_unchecked, AugKind, Augmentation, Graph, LinkId, Matching, NodeId,
    QueueVector,
};
use crate::oracle::Oracle;

/// One connected component of the symmetric difference of two matchings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceComponent {
    pub kind: AugKind,
    /// Links in traversal order.
    pub links: Vec<LinkId>,
    /// Links belonging to the optimal matching.
    pub c1: Vec<LinkId>,
    /// Links belonging to the current matching.
    pub c2: Vec<LinkId>,
}

impl DifferenceComponent {
    pub fn size(&self) -> usize {
        self.c1.len()
    }

    pub fn c1_weight(&self, q: &QueueVector) -> i64 {
        self.c1.iter().map(|&l| q.get(l) as i64).sum()
    }

    pub fn c2_weight(&self, q: &QueueVector) -> i64 {
        self.c2.iter().map(|&l| q.get(l) as i64).sum()
    }

    pub fn as_augmentation(&self) -> Augmentation {
        match self.kind {
            AugKind::Path => Augmentation::path(self.links.clone()),
            AugKind::Cycle => Augmentation::cycle(self.links.clone()),
        }
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::domain("augmentation size bound k must be at least 1"))
    } else {
        Ok(())
    }
}

/// Splits `current Δ optimal` into alternating paths (oriented from the
/// endpoint with the lower node id) and even cycles (starting at the lowest
/// link id).
pub fn symmetric_difference_components(
    current: &Matching,
    optimal: &Matching,
    graph: &Graph,
) -> Result<Vec<DifferenceComponent>> {
    for m in [current, optimal] {
        if !m.is_valid_for(graph) {
            return Err(Error::domain("symmetric difference needs two matchings of the graph"));
        }
    }
    let diff: Vec<LinkId> = (0..graph.link_count()).filter(|&l| current.contains(l) != optimal.contains(l)).collect();
    let mut incident: Vec<Vec<LinkId>> = vec![Vec::new(); graph.node_count()];
    for &l in &diff {
        let (u, v) = graph.endpoints(l);
        incident[u].push(l);
        incident[v].push(l);
    }
    assert!(incident.iter().all(|ls| ls.len() <= 2), "symmetric difference of two matchings has a node of degree > 2");

    let mut visited = vec![false; graph.link_count()];
    let mut out = Vec::new();
    let classify = |links: Vec<LinkId>, kind: AugKind| {
        let (c1, c2) = links.iter().partition(|&&l| optimal.contains(l));
        DifferenceComponent { kind, links, c1, c2 }
    };

    // Paths first, started from their lower endpoint.
    for start in 0..graph.node_count() {
        if incident[start].len() != 1 || visited[incident[start][0]] {
            continue;
        }
        let links = walk(graph, &incident, &mut visited, start, incident[start][0]);
        out.push(classify(links, AugKind::Path));
    }
    // Whatever is left lies on cycles.
    for &l in &diff {
        if visited[l] {
            continue;
        }
        let (u, v) = graph.endpoints(l);
        let next_at = |node: NodeId| incident[node].iter().copied().find(|&x| x != l).unwrap();
        // Walk so the second link is the smaller of l's two cycle neighbours.
        let from = if next_at(v) <= next_at(u) { u } else { v };
        let links = walk(graph, &incident, &mut visited, from, l);
        out.push(classify(links, AugKind::Cycle));
    }
    Ok(out)
}

fn walk(graph: &Graph, incident: &[Vec<LinkId>], visited: &mut [bool], start: NodeId, first: LinkId) -> Vec<LinkId> {
    let mut links = Vec::new();
    let mut node = start;
    let mut link = first;
    loop {
        visited[link] = true;
        links.push(link);
        node = graph.other_end(link, node);
        match incident[node].iter().copied().find(|&x| !visited[x]) {
            Some(next) => link = next,
            None => break,
        }
    }
    links
}

/// Fragments left after deleting the optimal links at positions
/// `offset, offset + k + 1, offset + 2(k + 1), …` (1-based, counted along the
/// path's link order).
fn cut_path(
    graph: &Graph,
    c: &DifferenceComponent,
    optimal: impl Fn(LinkId) -> bool,
    k: usize,
    offset: usize,
) -> Result<Vec<Augmentation>> {
    let mut fragments = Vec::new();
    let mut current = Vec::new();
    let mut position = 0usize;
    for &l in &c.links {
        if optimal(l) {
            position += 1;
            if position >= offset && (position - offset).is_multiple_of(k + 1) {
                if !current.is_empty() {
                    fragments.push(std::mem::take(&mut current));
                }
                continue;
            }
        }
        current.push(l);
    }
    if !current.is_empty() {
        fragments.push(current);
    }
    fragments.into_iter().map(|f| Augmentation::path_from_lower_endpoint(graph, f)).collect()
}

/// The `k + 1` candidate fragment sets for a path component, indexed by
/// offset `1..=k+1`.
pub fn path_offset_sets(graph: &Graph, c: &DifferenceComponent, k: usize) -> Result<Vec<Vec<Augmentation>>> {
    check_k(k)?;
    if c.kind != AugKind::Path {
        return Err(Error::domain("offset sets are defined for path components"));
    }
    let opt: std::collections::HashSet<LinkId> = c.c1.iter().copied().collect();
    (1..=k + 1).map(|offset| cut_path(graph, c, |l| opt.contains(&l), k, offset)).collect()
}

/// Gain of a set of augmentations of the current matching: optimal-side
/// weight minus current-side weight.
pub fn set_gain(augs: &[Augmentation], current: &Matching, q: &QueueVector) -> i64 {
    augs.iter().map(|a| gain_unchecked(a.links(), current, q)).sum()
}

/// Disjoint size-≤k augmentations inside a path component whose total gain is
/// at least `k/(k+1) · C1 − C2`.
pub fn decompose_path(
    graph: &Graph,
    c: &DifferenceComponent,
    current: &Matching,
    q: &QueueVector,
    k: usize,
) -> Result<Vec<Augmentation>> {
    check_k(k)?;
    if c.kind != AugKind::Path {
        return Err(Error::domain("decompose_path needs a path component"));
    }
    if c.size() <= k {
        return Ok(vec![c.as_augmentation()]);
    }
    let sets = path_offset_sets(graph, c, k)?;
    let mut best: Option<(i64, Vec<Augmentation>)> = None;
    for set in sets {
        let gain = set_gain(&set, current, q);
        if best.as_ref().is_none_or(|(g, _)| gain > *g) {
            best = Some((gain, set));
        }
    }
    let (gain, set) = best.expect("k + 1 ≥ 2 candidate sets");
    let (k_i, c1, c2) = (k as i128, c.c1_weight(q) as i128, c.c2_weight(q) as i128);
    assert!(
        (k_i + 1) * gain as i128 >= k_i * c1 - (k_i + 1) * c2,
        "path decomposition gain {gain} below k/(k+1)·{c1} − {c2}"
    );
    Ok(set)
}

/// Disjoint size-≤k augmentations inside a cycle component whose total gain
/// is at least `k/(k+2) · C1 − C2`.
pub fn decompose_cycle(
    graph: &Graph,
    c: &DifferenceComponent,
    current: &Matching,
    q: &QueueVector,
    k: usize,
) -> Result<Vec<Augmentation>> {
    check_k(k)?;
    if c.kind != AugKind::Cycle {
        return Err(Error::domain("decompose_cycle needs a cycle component"));
    }
    if c.size() <= k {
        return Ok(vec![c.as_augmentation()]);
    }
    let dropped = lightest_optimal_link(c, q);
    let pos = c.links.iter().position(|&l| l == dropped).unwrap();
    let mut rest = c.links.clone();
    rest.rotate_left(pos + 1);
    rest.pop();
    let path = Augmentation::path_from_lower_endpoint(graph, rest)?;
    let path_component = DifferenceComponent {
        kind: AugKind::Path,
        links: path.links().to_vec(),
        c1: c.c1.iter().copied().filter(|&l| l != dropped).collect(),
        c2: c.c2.clone(),
    };
    let set = decompose_path(graph, &path_component, current, q, k)?;
    let gain = set_gain(&set, current, q) as i128;
    let (k_i, c1, c2) = (k as i128, c.c1_weight(q) as i128, c.c2_weight(q) as i128);
    assert!((k_i + 2) * gain >= k_i * c1 - (k_i + 2) * c2, "cycle decomposition gain {gain} below k/(k+2)·{c1} − {c2}");
    Ok(set)
}

/// The minimum-weight optimal link of a component; ties go to the lowest id.
pub fn lightest_optimal_link(c: &DifferenceComponent, q: &QueueVector) -> LinkId {
    *c.c1.iter().min_by_key(|&&l| (q.get(l), l)).expect("component has optimal links")
}

/// Builds the target set `𝒜*` for `current` under queue weights `q`.
pub fn build_target_set(
    oracle: &Oracle,
    graph: &Graph,
    current: &Matching,
    q: &QueueVector,
    k: usize,
) -> Result<Vec<Augmentation>> {
    check_k(k)?;
    let opt = oracle.max_weight_matching(graph, q)?;
    let mut target = Vec::new();
    for c in symmetric_difference_components(current, &opt.optimal_matching, graph)? {
        match c.kind {
            AugKind::Path => target.extend(decompose_path(graph, &c, current, q, k)?),
            AugKind::Cycle => target.extend(decompose_cycle(graph, &c, current, q, k)?),
        }
    }

    for (i, a) in target.iter().enumerate() {
        debug_assert!(a.validate(graph, current).is_ok(), "invalid augmentation {a}");
        assert!(augmentation_size(a, current) <= k, "augmentation {a} exceeds size {k}");
        for b in &target[i + 1..] {
            assert!(are_disjoint(graph, a, b, current), "{a} and {b} are not disjoint");
        }
    }
    let augmented = apply_all(graph, current, &target)?.weight(q) as u128;
    assert!(
        (k as u128 + 2) * augmented >= k as u128 * opt.optimal_weight as u128,
        "augmented weight {augmented} below k/(k+2) of optimum {}",
        opt.optimal_weight
    );
    Ok(target)
}
