use std::collections::HashMap;

use rand::Rng;

use crate::graph::{LinkId, NodeId};

/// Source of every random decision a control part makes.
///
/// The engine queries it in a fixed order: seed decisions for nodes
/// `0..n`, then intended sizes for the seeds in ascending id order, then
/// neighbour picks phase by phase in ascending id of the active node.
pub trait ChoiceSource {
    fn is_seed(&mut self, node: NodeId) -> bool;

    /// Intended size in `1..=k`.
    fn intended_size(&mut self, seed: NodeId, k: usize) -> usize;

    /// Index into `candidates` of the neighbour `node` sends its REQ to.
    /// `candidates` is never empty.
    fn pick_neighbor(&mut self, node: NodeId, candidates: &[(NodeId, LinkId)]) -> usize;
}

/// Independent coin flips with probability `p`, uniform intended sizes and
/// uniform neighbour picks.
pub struct RandomChoices<'a, R: Rng + ?Sized> {
    rng: &'a mut R,
    p: f64,
}

impl<'a, R: Rng + ?Sized> RandomChoices<'a, R> {
    /// `p` must already be validated to lie in `(0, 1)`.
    pub fn new(rng: &'a mut R, p: f64) -> Self {
        Self { rng, p }
    }
}

impl<R: Rng + ?Sized> ChoiceSource for RandomChoices<'_, R> {
    fn is_seed(&mut self, _node: NodeId) -> bool {
        self.rng.gen_bool(self.p)
    }

    fn intended_size(&mut self, _seed: NodeId, k: usize) -> usize {
        self.rng.gen_range(1..=k)
    }

    fn pick_neighbor(&mut self, _node: NodeId, candidates: &[(NodeId, LinkId)]) -> usize {
        self.rng.gen_range(0..candidates.len())
    }
}

/// Fixed decisions, for replaying hand-worked scenarios.
///
/// Nodes without an explicit intended size use `default_size`; nodes
/// without a scripted neighbour take the first candidate.
#[derive(Clone, Debug, Default)]
pub struct ScriptedChoices {
    pub seeds: Vec<NodeId>,
    pub intended_sizes: HashMap<NodeId, usize>,
    pub default_size: usize,
    pub neighbor_picks: HashMap<NodeId, NodeId>,
}

impl ScriptedChoices {
    pub fn new(seeds: &[NodeId], default_size: usize) -> Self {
        Self { seeds: seeds.to_vec(), default_size, ..Default::default() }
    }

    pub fn pick(mut self, node: NodeId, neighbor: NodeId) -> Self {
        self.neighbor_picks.insert(node, neighbor);
        self
    }

    pub fn size(mut self, seed: NodeId, size: usize) -> Self {
        self.intended_sizes.insert(seed, size);
        self
    }
}

impl ChoiceSource for ScriptedChoices {
    fn is_seed(&mut self, node: NodeId) -> bool {
        self.seeds.contains(&node)
    }

    fn intended_size(&mut self, seed: NodeId, k: usize) -> usize {
        self.intended_sizes.get(&seed).copied().unwrap_or(self.default_size).clamp(1, k)
    }

    fn pick_neighbor(&mut self, node: NodeId, candidates: &[(NodeId, LinkId)]) -> usize {
        self.neighbor_picks.get(&node).and_then(|want| candidates.iter().position(|&(n, _)| n == *want)).unwrap_or(0)
    }
}
