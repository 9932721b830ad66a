use std::fmt;

use crate::graph::{LinkId, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MessageKind {
    Req,
    Ack,
    /// Switch decision relayed from terminus towards the seed.
    Decision,
}

impl MessageKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MessageKind::Req => "REQ",
            MessageKind::Ack => "ACK",
            MessageKind::Decision => "DEC",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhaseMessage {
    pub kind: MessageKind,
    pub from: NodeId,
    pub to: NodeId,
    pub link: LinkId,
    pub phase: usize,
}

impl fmt::Display for PhaseMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "phase={} kind={} from={} to={} link={}",
            self.phase,
            self.kind.as_str(),
            self.from,
            self.to,
            self.link
        )
    }
}

/// What happened in one phase.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhaseRecord {
    pub phase: usize,
    pub messages: Vec<PhaseMessage>,
    /// Nodes whose REQ was lost to a collision at the target.
    pub collided: Vec<NodeId>,
    /// Nodes whose REQ reached an already used target.
    pub rejected: Vec<NodeId>,
    /// Nodes that became terminus during this phase.
    pub terminated: Vec<NodeId>,
    /// Nodes active at the start of the next phase.
    pub active_after: Vec<NodeId>,
}

/// Complete log of a control part: one record per phase, `4k + 2` in all.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ControlTrace {
    pub phases: Vec<PhaseRecord>,
}

impl ControlTrace {
    pub fn phase_count(&self) -> usize {
        self.phases.len()
    }

    pub fn messages(&self) -> impl Iterator<Item = &PhaseMessage> {
        self.phases.iter().flat_map(|p| p.messages.iter())
    }

    /// Number of messages each node transmitted.
    pub fn transmissions_per_node(&self, node_count: usize) -> Vec<usize> {
        let mut out = vec![0; node_count];
        for m in self.messages() {
            out[m.from] += 1;
        }
        out
    }

    /// One line per message: `phase=<n> kind=<REQ|ACK|DEC> from=<u> to=<v> link=<id>`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for m in self.messages() {
            s.push_str(&m.to_string());
            s.push('\n');
        }
        s
    }
}
