//! Phase-by-phase simulation of one control part of the distributed
//! augmentation scheduler.
//!
//! A control part takes the previous schedule `I_prev` and the current
//! queues and spends `2k + 1` phases growing disjoint augmentations from
//! randomly elected seeds, then `2k + 1` more phases relaying each
//! terminus's switch decision back to its seed. The simulator resolves all
//! REQs of a phase against the node states at the start of that phase.
//!
//! Links of `I_prev` are added to an augmentation before their REQ is sent
//! and stay in it whether or not the REQ is acknowledged. Links outside
//! `I_prev` are added only on ACK. This asymmetry is what keeps every
//! augmentation consistent with `I_prev`.

pub mod choices;
pub mod trace;

use std::collections::HashSet;

use rand::Rng;

pub use self::choices::{ChoiceSource, RandomChoices, ScriptedChoices};
pub use self::trace::{ControlTrace, MessageKind, PhaseMessage, PhaseRecord};
use crate::error::{Error, Result};
use crate::graph::{
    apply_all, are_disjoint, augmentation_size, gain_unchecked, Augmentation, Graph, LinkId, Matching, NodeId,
    QueueVector,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Role {
    /// Not part of any augmentation.
    #[default]
    Inactive,
    /// Extends its augmentation this phase.
    Active,
    /// Part of an augmentation, no longer extending it.
    Used,
    /// Where its augmentation stopped growing.
    Terminus,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NodeState {
    pub role: Role,
    pub aug_id: Option<usize>,
    pub intended_size: Option<usize>,
    pub is_seed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildStatus {
    Growing,
    Terminated,
}

/// An augmentation as grown by the protocol, seed first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentationBuild {
    pub seed: NodeId,
    pub links: Vec<LinkId>,
    /// Links outside `I_prev`, i.e. the current size.
    pub nonbase_count: usize,
    pub intended_size: usize,
    pub running_gain: i64,
    pub status: BuildStatus,
    pub terminus: Option<NodeId>,
    /// Closed into a cycle by the seed–terminus link.
    pub closed: bool,
    pub switch: Option<bool>,
    /// Nodes that joined, in order; the seed is first.
    pub members: Vec<NodeId>,
    began_with_base: bool,
    needs_base: bool,
    /// The last link is an `I_prev` link whose far end never acknowledged.
    dangling: bool,
}

impl AugmentationBuild {
    fn new(seed: NodeId, intended_size: usize, seed_has_base: bool) -> Self {
        Self {
            seed,
            links: Vec::new(),
            nonbase_count: 0,
            intended_size,
            running_gain: 0,
            status: BuildStatus::Growing,
            terminus: None,
            closed: false,
            switch: None,
            members: vec![seed],
            began_with_base: seed_has_base,
            needs_base: seed_has_base,
            dangling: false,
        }
    }

    fn push(&mut self, link: LinkId, base: bool, q: &QueueVector) {
        let w = q.get(link) as i64;
        self.links.push(link);
        if base {
            self.running_gain -= w;
        } else {
            self.running_gain += w;
            self.nonbase_count += 1;
        }
    }

    pub fn augmentation(&self) -> Augmentation {
        if self.closed {
            Augmentation::cycle(self.links.clone())
        } else {
            Augmentation::path(self.links.clone())
        }
    }

    pub fn switched(&self) -> bool {
        self.switch == Some(true)
    }
}

#[derive(Clone, Debug)]
pub struct ControlOutcome {
    pub augmentations: Vec<AugmentationBuild>,
    pub new_matching: Matching,
    pub nodes: Vec<NodeState>,
    pub trace: ControlTrace,
}

impl ControlOutcome {
    pub fn switched(&self) -> impl Iterator<Item = &AugmentationBuild> {
        self.augmentations.iter().filter(|a| a.switched())
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("seed probability must lie in (0, 1), got {p}")))
    }
}

/// Each node independently becomes a seed with probability `p`.
pub fn elect_seeds<R: Rng + ?Sized>(graph: &Graph, p: f64, rng: &mut R) -> Result<Vec<NodeId>> {
    check_p(p)?;
    Ok((0..graph.node_count()).filter(|_| rng.gen_bool(p)).collect())
}

/// Runs one control part with random seeds, sizes and neighbour picks.
pub fn run_control_part<R: Rng + ?Sized>(
    graph: &Graph,
    q: &QueueVector,
    prev: &Matching,
    k: usize,
    p: f64,
    rng: &mut R,
) -> Result<ControlOutcome> {
    check_p(p)?;
    run_control_part_with(graph, q, prev, k, &mut RandomChoices::new(rng, p))
}

struct Req {
    from: NodeId,
    to: NodeId,
    link: LinkId,
    aug: usize,
    base: bool,
}

/// Runs one control part, drawing every decision from `choices`.
pub fn run_control_part_with(
    graph: &Graph,
    q: &QueueVector,
    prev: &Matching,
    k: usize,
    choices: &mut impl ChoiceSource,
) -> Result<ControlOutcome> {
    if k == 0 {
        return Err(Error::domain("augmentation size bound k must be at least 1"));
    }
    q.check_for(graph)?;
    if !prev.is_valid_for(graph) {
        return Err(Error::domain("previous schedule is not a matching of this graph"));
    }

    let n = graph.node_count();
    let base_link = prev.node_links(graph);
    let mut nodes = vec![NodeState::default(); n];
    let mut augs: Vec<AugmentationBuild> = Vec::new();

    let seeds: Vec<NodeId> = (0..n).filter(|&v| choices.is_seed(v)).collect();
    for &s in &seeds {
        let size = choices.intended_size(s, k);
        assert!((1..=k).contains(&size), "intended size {size} outside 1..={k}");
        nodes[s] = NodeState { role: Role::Active, aug_id: Some(augs.len()), intended_size: Some(size), is_seed: true };
        augs.push(AugmentationBuild::new(s, size, base_link[s].is_some()));
    }

    let control_phases = 2 * k + 1;
    let mut trace = ControlTrace { phases: Vec::with_capacity(4 * k + 2) };
    let mut active = seeds;
    let mut hits = vec![0u32; n];

    let terminate = |v: NodeId, nodes: &mut [NodeState], augs: &mut [AugmentationBuild], rec: &mut PhaseRecord| {
        let a = nodes[v].aug_id.expect("terminus belongs to an augmentation");
        nodes[v].role = Role::Terminus;
        augs[a].terminus = Some(v);
        augs[a].status = BuildStatus::Terminated;
        rec.terminated.push(v);
    };

    for phase in 1..=control_phases {
        let mut rec = PhaseRecord { phase, ..Default::default() };
        let mut reqs: Vec<Req> = Vec::with_capacity(active.len());
        for &v in &active {
            let a = nodes[v].aug_id.expect("active node belongs to an augmentation");
            let build = &mut augs[a];
            if build.needs_base {
                match base_link[v] {
                    Some(l) if !build.links.contains(&l) => {
                        let u = graph.other_end(l, v);
                        build.push(l, true, q);
                        build.needs_base = false;
                        build.dangling = true;
                        reqs.push(Req { from: v, to: u, link: l, aug: a, base: true });
                    }
                    _ => terminate(v, &mut nodes, &mut augs, &mut rec),
                }
            } else if build.nonbase_count >= build.intended_size {
                terminate(v, &mut nodes, &mut augs, &mut rec);
            } else {
                let candidates: Vec<(NodeId, LinkId)> =
                    graph.neighbors(v).iter().copied().filter(|(_, l)| !build.links.contains(l)).collect();
                if candidates.is_empty() {
                    terminate(v, &mut nodes, &mut augs, &mut rec);
                } else {
                    let pick = choices.pick_neighbor(v, &candidates);
                    let (u, l) = candidates[pick];
                    reqs.push(Req { from: v, to: u, link: l, aug: a, base: false });
                }
            }
        }

        for r in &reqs {
            hits[r.to] += 1;
            rec.messages.push(PhaseMessage { kind: MessageKind::Req, from: r.from, to: r.to, link: r.link, phase });
        }
        let mut next_active = Vec::with_capacity(reqs.len());
        for r in &reqs {
            if hits[r.to] > 1 {
                rec.collided.push(r.from);
                terminate(r.from, &mut nodes, &mut augs, &mut rec);
            } else if nodes[r.to].role != Role::Inactive {
                rec.rejected.push(r.from);
                terminate(r.from, &mut nodes, &mut augs, &mut rec);
            } else {
                rec.messages.push(PhaseMessage { kind: MessageKind::Ack, from: r.to, to: r.from, link: r.link, phase });
                let build = &mut augs[r.aug];
                if r.base {
                    build.dangling = false;
                } else {
                    build.push(r.link, false, q);
                    build.needs_base = true;
                }
                build.members.push(r.to);
                nodes[r.from].role = Role::Used;
                nodes[r.to] =
                    NodeState { role: Role::Active, aug_id: Some(r.aug), intended_size: None, is_seed: false };
                next_active.push(r.to);
            }
        }
        for r in &reqs {
            hits[r.to] = 0;
        }
        next_active.sort_unstable();
        rec.active_after = next_active.clone();
        trace.phases.push(rec);
        active = next_active;
    }

    // Phase budget exhausted: anyone still active stops here.
    if let Some(last) = trace.phases.last_mut() {
        for &v in &active {
            terminate(v, &mut nodes, &mut augs, last);
        }
        last.active_after.clear();
    }

    for build in &mut augs {
        close_cycle(graph, prev, q, build);
        build.switch = Some(build.running_gain > 0);
        debug_assert_eq!(build.running_gain, gain_unchecked(&build.links, prev, q));
        debug_assert!(build.nonbase_count <= build.intended_size);
    }

    // Decisions travel terminus → seed along the augmentation, one hop per phase.
    for hop in 0..=2 * k {
        let phase = control_phases + 1 + hop;
        let mut rec = PhaseRecord { phase, ..Default::default() };
        for build in &augs {
            let route = relay_route(build);
            assert!(route.len() <= 2 * k + 2, "relay route longer than the phase budget");
            if hop + 1 < route.len() {
                let (from, to) = (route[hop], route[hop + 1]);
                rec.messages.push(PhaseMessage {
                    kind: MessageKind::Decision,
                    from,
                    to,
                    link: graph.link_between(from, to).expect("consecutive members are adjacent"),
                    phase,
                });
            }
        }
        trace.phases.push(rec);
    }

    let new_matching = apply_switch_decisions(graph, prev, &augs)?;
    Ok(ControlOutcome { augmentations: augs, new_matching, nodes, trace })
}

/// Adds the seed–terminus link when the augmentation began and ended with
/// `I_prev` links at its seed and terminus and is still below its intended size.
fn close_cycle(graph: &Graph, prev: &Matching, q: &QueueVector, build: &mut AugmentationBuild) {
    let Some(w) = build.terminus else { return };
    let ends_with_base_at_terminus =
        !build.dangling && build.members.last() == Some(&w) && build.links.last().is_some_and(|&l| prev.contains(l));
    if w == build.seed
        || !build.began_with_base
        || !ends_with_base_at_terminus
        || build.nonbase_count >= build.intended_size
    {
        return;
    }
    let Some(l) = graph.link_between(build.seed, w) else { return };
    if prev.contains(l) || build.links.contains(&l) {
        return;
    }
    build.push(l, false, q);
    build.closed = true;
}

fn relay_route(build: &AugmentationBuild) -> Vec<NodeId> {
    let Some(w) = build.terminus else { return Vec::new() };
    let end = build.members.iter().position(|&m| m == w).expect("terminus is a member");
    build.members[..=end].iter().rev().copied().collect()
}

/// `I_prev` with every switched augmentation applied.
pub fn apply_switch_decisions(graph: &Graph, prev: &Matching, augs: &[AugmentationBuild]) -> Result<Matching> {
    let switched: Vec<Augmentation> = augs.iter().filter(|a| a.switched()).map(|a| a.augmentation()).collect();
    let m = apply_all(graph, prev, &switched)?;
    assert!(m.is_valid_for(graph), "switching produced a non-matching");
    Ok(m)
}

/// Links that actually transmit: members of the schedule with a positive queue.
pub fn mask_zero_queues(schedule: &Matching, q: &QueueVector) -> Vec<bool> {
    schedule.mask().iter().enumerate().map(|(l, &m)| m && q.get(l) > 0).collect()
}

/// Checks every soundness contract of a control-part outcome, returning a
/// description of the first violation.
pub fn verify_outcome(
    graph: &Graph,
    q: &QueueVector,
    prev: &Matching,
    k: usize,
    outcome: &ControlOutcome,
) -> std::result::Result<(), String> {
    if !outcome.new_matching.is_valid_for(graph) {
        return Err("new schedule is not a matching".into());
    }
    let augs: Vec<Augmentation> = outcome.augmentations.iter().map(|b| b.augmentation()).collect();
    let base_link = prev.node_links(graph);
    for (b, a) in outcome.augmentations.iter().zip(&augs) {
        a.validate(graph, prev).map_err(|e| format!("augmentation {a}: {e}"))?;
        let size = augmentation_size(a, prev);
        if size > k || size != b.nonbase_count {
            return Err(format!("augmentation {a} has size {size} (k = {k}, counted {})", b.nonbase_count));
        }
        let gain = gain_unchecked(a.links(), prev, q);
        if gain != b.running_gain {
            return Err(format!("running gain {} differs from recomputed gain {gain}", b.running_gain));
        }
        if b.switched() != (gain > 0) {
            return Err(format!("augmentation {a} switch decision disagrees with gain {gain}"));
        }
        let members: HashSet<LinkId> = a.links().iter().copied().collect();
        for l in a.added(prev) {
            let (u, v) = graph.endpoints(l);
            for node in [u, v] {
                if let Some(bl) = base_link[node] {
                    if !members.contains(&bl) {
                        return Err(format!("link {l} of {a} is inconsistent: base link {bl} missing"));
                    }
                }
            }
        }
    }
    for i in 0..augs.len() {
        for j in i + 1..augs.len() {
            if !are_disjoint(graph, &augs[i], &augs[j], prev) {
                return Err(format!("{} and {} are not disjoint", augs[i], augs[j]));
            }
        }
    }
    let before = prev.weight(q) as i128;
    let after = outcome.new_matching.weight(q) as i128;
    let gains: i128 = outcome.switched().map(|b| b.running_gain as i128).sum();
    if after < before + gains {
        return Err(format!("weight {after} below {before} + switched gains {gains}"));
    }
    if outcome.switched().next().is_some() && after <= before {
        return Err("switching did not increase the weight".into());
    }
    if outcome.trace.phase_count() != 4 * k + 2 {
        return Err(format!("trace spans {} phases", outcome.trace.phase_count()));
    }
    if let Some((node, count)) =
        outcome.trace.transmissions_per_node(graph.node_count()).into_iter().enumerate().find(|&(_, c)| c > 3)
    {
        return Err(format!("node {node} transmitted {count} control messages"));
    }
    Ok(())
}
