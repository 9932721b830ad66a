//! Graphs, matchings, queue vectors and augmentations.
//!
//! Links carry dense ids in insertion order and every per-link vector in the
//! crate is indexed by link id. Weights are queue lengths, so all weight and
//! gain arithmetic is exact integer arithmetic.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type LinkId = usize;

/// Undirected simple graph describing which links interfere (share a node).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    links: Vec<(NodeId, NodeId)>,
    adjacency: Vec<Vec<(NodeId, LinkId)>>,
}

impl Graph {
    pub fn new(node_count: usize) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidGraph("graph needs at least one node".into()));
        }
        Ok(Self { node_count, links: Vec::new(), adjacency: vec![Vec::new(); node_count] })
    }

    pub fn from_links(node_count: usize, links: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut g = Self::new(node_count)?;
        for &(u, v) in links {
            g.add_link(u, v)?;
        }
        Ok(g)
    }

    /// Adds the link `(u, v)` and returns its id.
    pub fn add_link(&mut self, u: NodeId, v: NodeId) -> Result<LinkId> {
        for node in [u, v] {
            if node >= self.node_count {
                return Err(Error::InvalidNode { node, node_count: self.node_count });
            }
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
        }
        if self.link_between(u, v).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate link ({u}, {v})")));
        }
        let id = self.links.len();
        self.links.push((u, v));
        self.adjacency[u].push((v, id));
        self.adjacency[v].push((u, id));
        Ok(id)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> &[(NodeId, NodeId)] {
        &self.links
    }

    pub fn endpoints(&self, link: LinkId) -> (NodeId, NodeId) {
        self.links[link]
    }

    /// `(neighbor, link)` pairs incident to `node`, in link insertion order.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, LinkId)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn link_between(&self, u: NodeId, v: NodeId) -> Option<LinkId> {
        self.adjacency.get(u)?.iter().find(|&&(w, _)| w == v).map(|&(_, l)| l)
    }

    /// The endpoint of `link` that is not `node`.
    pub fn other_end(&self, link: LinkId, node: NodeId) -> NodeId {
        let (u, v) = self.links[link];
        if u == node {
            v
        } else {
            debug_assert_eq!(v, node, "node {node} is not an endpoint of link {link}");
            u
        }
    }

    pub fn check_link(&self, link: LinkId) -> Result<()> {
        if link < self.links.len() {
            Ok(())
        } else {
            Err(Error::InvalidLink { link, link_count: self.links.len() })
        }
    }

    /// Verifies that the adjacency lists and the link list describe the same graph.
    pub fn check_consistency(&self) -> Result<()> {
        let mut seen = vec![0usize; self.links.len()];
        for (node, adj) in self.adjacency.iter().enumerate() {
            for &(nbr, link) in adj {
                let (u, v) = *self
                    .links
                    .get(link)
                    .ok_or_else(|| Error::InvalidGraph(format!("adjacency of {node} names unknown link {link}")))?;
                if !((u == node && v == nbr) || (v == node && u == nbr)) {
                    return Err(Error::InvalidGraph(format!(
                        "adjacency entry ({node}, {nbr}) disagrees with link {link} = ({u}, {v})"
                    )));
                }
                seen[link] += 1;
            }
        }
        if let Some(link) = seen.iter().position(|&c| c != 2) {
            return Err(Error::InvalidGraph(format!("link {link} appears {} times in adjacency", seen[link])));
        }
        Ok(())
    }

    /// Parses the line-oriented graph format:
    ///
    /// ```text
    /// # comment
    /// nodes 5
    /// link 0 1
    /// link 1 2
    /// ```
    ///
    /// Link ids are assigned in file order.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse { path: origin.to_string(), line, msg };
        let mut graph: Option<Graph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let keyword = parts.next().unwrap_or_default();
            let nums: Vec<usize> = parts
                .map(|s| {
                    s.parse::<usize>().map_err(|_| err(lineno, format!("expected a nonnegative integer, got `{s}`")))
                })
                .collect::<Result<_>>()?;
            match (keyword, nums.as_slice(), graph.as_mut()) {
                ("nodes", &[n], None) => graph = Some(Graph::new(n).map_err(|e| err(lineno, e.to_string()))?),
                ("nodes", _, Some(_)) => return Err(err(lineno, "duplicate `nodes` header".into())),
                ("link", &[u, v], Some(g)) => {
                    g.add_link(u, v).map_err(|e| err(lineno, e.to_string()))?;
                }
                ("link", _, None) => return Err(err(lineno, "`link` before `nodes` header".into())),
                _ => return Err(err(lineno, format!("unrecognized declaration `{line}`"))),
            }
        }
        graph.ok_or_else(|| err(0, "missing `nodes` header".into()))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Serializes to the format accepted by [`Graph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("nodes {}\n", self.node_count);
        for &(u, v) in &self.links {
            out.push_str(&format!("link {u} {v}\n"));
        }
        out
    }
}

/// Per-link packet backlog.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QueueVector(Vec<u64>);

impl QueueVector {
    pub fn new(q: Vec<u64>) -> Self {
        Self(q)
    }

    pub fn zeros(link_count: usize) -> Self {
        Self(vec![0; link_count])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, link: LinkId) -> u64 {
        self.0[link]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn check_for(&self, graph: &Graph) -> Result<()> {
        if self.0.len() == graph.link_count() {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected: graph.link_count(), actual: self.0.len() })
        }
    }
}

impl From<Vec<u64>> for QueueVector {
    fn from(q: Vec<u64>) -> Self {
        Self(q)
    }
}

/// A set of links, no two sharing a node. Stored as a membership mask over
/// the links of one graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    members: Vec<bool>,
    len: usize,
}

impl Matching {
    pub fn empty(link_count: usize) -> Self {
        Self { members: vec![false; link_count], len: 0 }
    }

    pub fn from_links(graph: &Graph, links: &[LinkId]) -> Result<Self> {
        for &l in links {
            graph.check_link(l)?;
        }
        if let Some((a, b)) = first_conflict(graph, links.iter().copied()) {
            return Err(Error::NotAMatching(a, b));
        }
        let mut m = Self::empty(graph.link_count());
        for &l in links {
            m.insert(l);
        }
        Ok(m)
    }

    /// Builds from a 0/1 mask, validating the matching property.
    pub fn from_mask(graph: &Graph, mask: &[bool]) -> Result<Self> {
        if mask.len() != graph.link_count() {
            return Err(Error::LengthMismatch { expected: graph.link_count(), actual: mask.len() });
        }
        let links: Vec<LinkId> = (0..mask.len()).filter(|&l| mask[l]).collect();
        Self::from_links(graph, &links)
    }

    pub(crate) fn insert(&mut self, link: LinkId) {
        if !self.members[link] {
            self.members[link] = true;
            self.len += 1;
        }
    }

    pub(crate) fn remove(&mut self, link: LinkId) {
        if self.members[link] {
            self.members[link] = false;
            self.len -= 1;
        }
    }

    pub fn contains(&self, link: LinkId) -> bool {
        self.members.get(link).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of links in the underlying graph.
    pub fn universe(&self) -> usize {
        self.members.len()
    }

    /// Member link ids in ascending order.
    pub fn links(&self) -> impl Iterator<Item = LinkId> + '_ {
        self.members.iter().enumerate().filter_map(|(l, &m)| m.then_some(l))
    }

    pub fn to_vec(&self) -> Vec<LinkId> {
        self.links().collect()
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    /// For each node, the member link incident to it, if any.
    pub fn node_links(&self, graph: &Graph) -> Vec<Option<LinkId>> {
        let mut out = vec![None; graph.node_count()];
        for l in self.links() {
            let (u, v) = graph.endpoints(l);
            debug_assert!(out[u].is_none() && out[v].is_none());
            out[u] = Some(l);
            out[v] = Some(l);
        }
        out
    }

    pub fn weight(&self, q: &QueueVector) -> u64 {
        self.links().map(|l| q.get(l)).sum()
    }

    pub fn is_valid_for(&self, graph: &Graph) -> bool {
        self.members.len() == graph.link_count() && first_conflict(graph, self.links()).is_none()
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.links()).finish()
    }
}

fn first_conflict(graph: &Graph, links: impl Iterator<Item = LinkId>) -> Option<(LinkId, LinkId)> {
    let mut owner: Vec<Option<LinkId>> = vec![None; graph.node_count()];
    for l in links {
        let (u, v) = graph.endpoints(l);
        for node in [u, v] {
            match owner[node] {
                Some(prev) if prev != l => return Some((prev, l)),
                _ => owner[node] = Some(l),
            }
        }
    }
    None
}

/// True iff no two of `links` share a node.
pub fn is_matching(graph: &Graph, links: &[LinkId]) -> Result<bool> {
    for &l in links {
        graph.check_link(l)?;
    }
    Ok(first_conflict(graph, links.iter().copied()).is_none())
}

pub fn matching_weight(m: &Matching, q: &QueueVector) -> u64 {
    m.weight(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AugKind {
    Path,
    Cycle,
}

/// An alternating path or cycle relative to some base matching.
///
/// The base matching is not stored; every operation takes it explicitly.
/// Cycles are kept in canonical form: rotated to start at their lowest link
/// id and oriented so the second link is the smaller of its two neighbours.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Augmentation {
    kind: AugKind,
    links: Vec<LinkId>,
}

impl Augmentation {
    pub fn empty() -> Self {
        Self { kind: AugKind::Path, links: Vec::new() }
    }

    pub fn path(links: Vec<LinkId>) -> Self {
        Self { kind: AugKind::Path, links }
    }

    /// A path oriented to start from the endpoint with the lower node id.
    pub fn path_from_lower_endpoint(graph: &Graph, mut links: Vec<LinkId>) -> Result<Self> {
        if links.len() >= 2 {
            let walk = node_walk(graph, &links)?;
            if walk[walk.len() - 1] < walk[0] {
                links.reverse();
            }
        }
        Ok(Self::path(links))
    }

    pub fn cycle(links: Vec<LinkId>) -> Self {
        Self { kind: AugKind::Cycle, links: canonical_cycle(links) }
    }

    pub fn kind(&self) -> AugKind {
        self.kind
    }

    pub fn links(&self) -> &[LinkId] {
        &self.links
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Links of the augmentation not in `base` (the ones switched on).
    pub fn added<'a>(&'a self, base: &'a Matching) -> impl Iterator<Item = LinkId> + 'a {
        self.links.iter().copied().filter(|&l| !base.contains(l))
    }

    /// Links of the augmentation in `base` (the ones switched off).
    pub fn removed<'a>(&'a self, base: &'a Matching) -> impl Iterator<Item = LinkId> + 'a {
        self.links.iter().copied().filter(|&l| base.contains(l))
    }

    /// The node sequence traversed by the augmentation. For a cycle the
    /// start node is repeated at the end.
    pub fn nodes(&self, graph: &Graph) -> Result<Vec<NodeId>> {
        node_walk(graph, &self.links)
    }

    fn check_alternation(&self, base: &Matching) -> Result<()> {
        let n = self.links.len();
        for i in 1..n {
            if base.contains(self.links[i - 1]) == base.contains(self.links[i]) {
                return Err(Error::InvalidAugmentation(format!(
                    "links {} and {} do not alternate with respect to the base matching",
                    self.links[i - 1],
                    self.links[i]
                )));
            }
        }
        if self.kind == AugKind::Cycle && n > 0 && base.contains(self.links[0]) == base.contains(self.links[n - 1]) {
            return Err(Error::InvalidAugmentation("cycle closure does not alternate".into()));
        }
        Ok(())
    }

    /// Full structural check: simple path or cycle, alternation, and that
    /// switching it on `base` leaves a matching.
    pub fn validate(&self, graph: &Graph, base: &Matching) -> Result<()> {
        for &l in &self.links {
            graph.check_link(l)?;
        }
        let distinct: HashSet<_> = self.links.iter().collect();
        if distinct.len() != self.links.len() {
            return Err(Error::InvalidAugmentation("repeated link".into()));
        }
        let walk = node_walk(graph, &self.links)?;
        let interior = match self.kind {
            AugKind::Path => &walk[..],
            AugKind::Cycle => {
                if self.links.len() < 4 || !self.links.len().is_multiple_of(2) {
                    return Err(Error::InvalidAugmentation(format!(
                        "alternating cycle needs an even length of at least 4, got {}",
                        self.links.len()
                    )));
                }
                if walk.first() != walk.last() {
                    return Err(Error::InvalidAugmentation("cycle does not close".into()));
                }
                &walk[..walk.len() - 1]
            }
        };
        let nodes: HashSet<_> = interior.iter().collect();
        if nodes.len() != interior.len() {
            return Err(Error::InvalidAugmentation("node visited twice".into()));
        }
        self.check_alternation(base)?;
        apply_augmentation(graph, base, self).map(|_| ())
    }
}

impl fmt::Display for Augmentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            AugKind::Path => "path",
            AugKind::Cycle => "cycle",
        };
        write!(f, "{kind}{:?}", self.links)
    }
}

fn canonical_cycle(mut links: Vec<LinkId>) -> Vec<LinkId> {
    let n = links.len();
    if n < 2 {
        return links;
    }
    let start = (0..n).min_by_key(|&i| links[i]).unwrap();
    links.rotate_left(start);
    if links[n - 1] < links[1] {
        links[1..].reverse();
    }
    links
}

/// Node sequence along consecutive links; errors if consecutive links do not
/// share exactly one node.
fn node_walk(graph: &Graph, links: &[LinkId]) -> Result<Vec<NodeId>> {
    match links {
        [] => return Ok(Vec::new()),
        [l] => {
            let (u, v) = graph.endpoints(*l);
            return Ok(vec![u, v]);
        }
        _ => {}
    }
    let (a, b) = graph.endpoints(links[0]);
    let (c, d) = graph.endpoints(links[1]);
    let start = if b == c || b == d {
        a
    } else if a == c || a == d {
        b
    } else {
        return Err(Error::InvalidAugmentation(format!("links {} and {} are not adjacent", links[0], links[1])));
    };
    let mut walk = Vec::with_capacity(links.len() + 1);
    walk.push(start);
    let mut cur = start;
    for &l in links {
        let (u, v) = graph.endpoints(l);
        cur = if u == cur {
            v
        } else if v == cur {
            u
        } else {
            return Err(Error::InvalidAugmentation(format!("link {l} does not continue the walk at node {cur}")));
        };
        walk.push(cur);
    }
    Ok(walk)
}

/// Change in matching weight from switching `a` on `base`:
/// weight of `a \ base` minus weight of `a ∩ base`.
pub fn augmentation_gain(a: &Augmentation, base: &Matching, q: &QueueVector) -> Result<i64> {
    a.check_alternation(base)?;
    Ok(gain_unchecked(a.links(), base, q))
}

pub(crate) fn gain_unchecked(links: &[LinkId], base: &Matching, q: &QueueVector) -> i64 {
    links
        .iter()
        .map(|&l| {
            let w = q.get(l) as i64;
            if base.contains(l) {
                -w
            } else {
                w
            }
        })
        .sum()
}

/// `base ⊕ a`: drop the augmentation's base links, add its other links.
pub fn apply_augmentation(graph: &Graph, base: &Matching, a: &Augmentation) -> Result<Matching> {
    apply_all(graph, base, std::iter::once(a))
}

/// Applies several augmentations. For pairwise disjoint augmentations the
/// order does not matter.
pub fn apply_all<'a>(
    graph: &Graph,
    base: &Matching,
    augs: impl IntoIterator<Item = &'a Augmentation>,
) -> Result<Matching> {
    let mut out = base.clone();
    let mut added = Vec::new();
    for a in augs {
        for &l in a.links() {
            graph.check_link(l)?;
            if base.contains(l) {
                out.remove(l);
            } else {
                added.push(l);
            }
        }
    }
    for l in added {
        out.insert(l);
    }
    if let Some((x, y)) = first_conflict(graph, out.links()) {
        return Err(Error::InvalidAugmentation(format!("result is not a matching: links {x} and {y} share a node")));
    }
    Ok(out)
}

/// `|a \ base|`, the number of links switched on.
pub fn augmentation_size(a: &Augmentation, base: &Matching) -> usize {
    let size = a.added(base).count();
    let max_links = match a.kind() {
        AugKind::Path => 2 * size + 1,
        AugKind::Cycle => 2 * size,
    };
    assert!(a.links().len() <= max_links, "augmentation of size {size} has {} links", a.links().len());
    size
}

/// True iff no link of `a1 \ base` shares a node with a link of `a2 \ base`.
/// Sharing a base link is allowed.
pub fn are_disjoint(graph: &Graph, a1: &Augmentation, a2: &Augmentation, base: &Matching) -> bool {
    let touched: HashSet<NodeId> = a1
        .added(base)
        .flat_map(|l| {
            let (u, v) = graph.endpoints(l);
            [u, v]
        })
        .collect();
    a2.added(base).all(|l| {
        let (u, v) = graph.endpoints(l);
        !touched.contains(&u) && !touched.contains(&v)
    })
}
