//! The depth-limited subgame built by determinized queries.
//!
//! Nodes are identified by their parent, the action taken and the joint
//! observation it produced, so two paths with the same signature always
//! share a node. Each node remembers which sampled worlds reached it and
//! with what exploration probability; solvers derive belief weights and
//! chance transitions from that.

use std::collections::{BTreeMap, HashMap};

use crate::game::{Action, InfostateKey, JointObservation, PlayerId};

pub type NodeId = usize;
pub type InfosetId = usize;

#[derive(Debug, Clone)]
pub struct SubgameNode {
    pub parent: Option<NodeId>,
    pub action: Option<Action>,
    pub observations: JointObservation,
    /// Acting player, `None` at terminal states.
    pub actor: Option<PlayerId>,
    /// Each player's key at this node. The searcher's key is complete; the
    /// opponent's covers only what happened since the subgame root.
    pub keys: [InfostateKey; 2],
    pub is_frontier: bool,
    /// Sum of leaf values, from the searcher's point of view.
    pub value_sum: f64,
    pub visit_count: u64,
    pub children: BTreeMap<Action, Vec<NodeId>>,
    /// World index to the uniform-prior probability of this node's path in
    /// that world.
    pub reach: BTreeMap<usize, f64>,
}

impl SubgameNode {
    pub fn mean(&self) -> Option<f64> {
        (self.visit_count > 0).then(|| self.value_sum / self.visit_count as f64)
    }

    pub fn available(&self) -> impl Iterator<Item = Action> + '_ {
        self.children.keys().copied()
    }
}

#[derive(Debug, Clone)]
pub struct SubgameTree {
    nodes: Vec<SubgameNode>,
    roots: Vec<NodeId>,
    searcher: PlayerId,
    world_weight: Vec<f64>,
    total_weight: f64,
    depth: usize,
}

impl SubgameTree {
    pub fn new(searcher: PlayerId, depth: usize) -> Self {
        SubgameTree {
            nodes: Vec::new(),
            roots: Vec::new(),
            searcher,
            world_weight: Vec::new(),
            total_weight: 0.0,
            depth,
        }
    }

    pub fn searcher(&self) -> PlayerId {
        self.searcher
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[SubgameNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &SubgameNode {
        &self.nodes[id]
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn root(&self) -> Option<NodeId> {
        self.roots.first().copied()
    }

    /// Registers a world with an initial weight and returns its index.
    pub fn add_world(&mut self, weight: f64) -> usize {
        self.world_weight.push(weight);
        self.total_weight += weight;
        self.world_weight.len() - 1
    }

    pub fn add_world_weight(&mut self, world: usize, weight: f64) {
        self.world_weight[world] += weight;
        self.total_weight += weight;
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn num_worlds(&self) -> usize {
        self.world_weight.len()
    }

    /// Share of the total world weight held by `world`.
    pub fn world_mass(&self, world: usize) -> f64 {
        if self.total_weight > 0.0 {
            self.world_weight[world] / self.total_weight
        } else {
            0.0
        }
    }

    pub fn add_root(&mut self, keys: [InfostateKey; 2], actor: Option<PlayerId>) -> NodeId {
        let id = self.push(SubgameNode {
            parent: None,
            action: None,
            observations: Default::default(),
            actor,
            keys,
            is_frontier: false,
            value_sum: 0.0,
            visit_count: 0,
            children: BTreeMap::new(),
            reach: BTreeMap::new(),
        });
        self.roots.push(id);
        id
    }

    /// The child reached from `parent` by `action` with observations
    /// `obs`, created on first use.
    pub fn child(&mut self, parent: NodeId, action: Action, obs: &JointObservation, actor: Option<PlayerId>) -> NodeId {
        if let Some(ids) = self.nodes[parent].children.get(&action) {
            if let Some(&id) = ids.iter().find(|&&c| self.nodes[c].observations == *obs) {
                debug_assert_eq!(self.nodes[id].actor, actor);
                return id;
            }
        }
        let p = &self.nodes[parent];
        let mover = p.actor.expect("children hang off decision nodes");
        let keys = [p.keys[0].recorded(mover, action, obs), p.keys[1].recorded(mover, action, obs)];
        let id = self.push(SubgameNode {
            parent: Some(parent),
            action: Some(action),
            observations: obs.clone(),
            actor,
            keys,
            is_frontier: false,
            value_sum: 0.0,
            visit_count: 0,
            children: BTreeMap::new(),
            reach: BTreeMap::new(),
        });
        self.nodes[parent].children.entry(action).or_default().push(id);
        id
    }

    pub fn set_reach(&mut self, node: NodeId, world: usize, prob: f64) {
        self.nodes[node].reach.insert(world, prob);
    }

    /// Adds one leaf evaluation to a frontier node.
    pub fn add_value(&mut self, node: NodeId, value: f64) {
        let n = &mut self.nodes[node];
        n.is_frontier = true;
        n.value_sum += value;
        n.visit_count += 1;
    }

    /// Belief weight of a node: world mass times path probability, summed
    /// over the worlds that reached it.
    pub fn node_weight(&self, node: NodeId) -> f64 {
        self.nodes[node].reach.iter().map(|(&r, &p)| self.world_mass(r) * p).sum()
    }

    /// Children of `node` under `action` with their transition
    /// probabilities.
    pub fn transitions(&self, node: NodeId, action: Action) -> Vec<(NodeId, f64)> {
        let parent = &self.nodes[node];
        let Some(ids) = parent.children.get(&action) else { return Vec::new() };
        let weights: Vec<f64> = ids
            .iter()
            .map(|&c| {
                self.nodes[c]
                    .reach
                    .keys()
                    .map(|r| self.world_mass(*r) * parent.reach.get(r).copied().unwrap_or(0.0))
                    .sum()
            })
            .collect();
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            let u = 1.0 / ids.len() as f64;
            return ids.iter().map(|&c| (c, u)).collect();
        }
        ids.iter().zip(weights).map(|(&c, w)| (c, w / total)).collect()
    }

    fn push(&mut self, node: SubgameNode) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }
}

#[derive(Debug, Clone)]
pub struct InfosetInfo {
    pub player: PlayerId,
    pub key: InfostateKey,
    pub nodes: Vec<NodeId>,
    /// Union of the actions available at the member nodes.
    pub actions: Vec<Action>,
}

/// Decision nodes grouped by the acting player's key.
#[derive(Debug, Clone)]
pub struct InfosetView {
    pub infosets: Vec<InfosetInfo>,
    pub node_infoset: Vec<Option<InfosetId>>,
    index: HashMap<(PlayerId, InfostateKey), InfosetId>,
}

impl InfosetView {
    pub fn new(tree: &SubgameTree) -> Self {
        let mut infosets: Vec<InfosetInfo> = Vec::new();
        let mut node_infoset = vec![None; tree.len()];
        let mut index = HashMap::new();
        for (id, n) in tree.nodes().iter().enumerate() {
            let Some(actor) = n.actor else { continue };
            if n.is_frontier || n.children.is_empty() {
                continue;
            }
            let key = n.keys[actor.index()].clone();
            let i = *index.entry((actor, key.clone())).or_insert_with(|| {
                infosets.push(InfosetInfo { player: actor, key, nodes: Vec::new(), actions: Vec::new() });
                infosets.len() - 1
            });
            infosets[i].nodes.push(id);
            for a in n.available() {
                if let Err(pos) = infosets[i].actions.binary_search(&a) {
                    infosets[i].actions.insert(pos, a);
                }
            }
            node_infoset[id] = Some(i);
        }
        InfosetView { infosets, node_infoset, index }
    }

    pub fn get(&self, player: PlayerId, key: &InfostateKey) -> Option<InfosetId> {
        self.index.get(&(player, key.clone())).copied()
    }

    pub fn len(&self) -> usize {
        self.infosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.infosets.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Observation;

    fn obs(a: &[u8], b: &[u8]) -> JointObservation {
        [Observation::from_bytes(a), Observation::from_bytes(b)]
    }

    #[test]
    fn identical_signatures_share_a_node() {
        let mut t = SubgameTree::new(PlayerId::P0, 2);
        let r = t.add_root([InfostateKey::new(PlayerId::P0), InfostateKey::new(PlayerId::P1)], Some(PlayerId::P0));
        let a = t.child(r, Action(1), &obs(b"", b"x"), Some(PlayerId::P1));
        let b = t.child(r, Action(1), &obs(b"", b"x"), Some(PlayerId::P1));
        let c = t.child(r, Action(1), &obs(b"", b"y"), Some(PlayerId::P1));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(t.len(), 3);
        assert_eq!(t.node(a).keys[0].len(), 1);
        assert_eq!(t.node(a).keys[1].trace()[0].action, None);
    }

    #[test]
    fn transition_probabilities_follow_world_mass() {
        let mut t = SubgameTree::new(PlayerId::P0, 1);
        let w0 = t.add_world(3.0);
        let w1 = t.add_world(1.0);
        let r = t.add_root([InfostateKey::new(PlayerId::P0), InfostateKey::new(PlayerId::P1)], Some(PlayerId::P0));
        t.set_reach(r, w0, 1.0);
        t.set_reach(r, w1, 1.0);
        let a = t.child(r, Action(0), &obs(b"a", b""), None);
        let b = t.child(r, Action(0), &obs(b"b", b""), None);
        t.set_reach(a, w0, 0.5);
        t.set_reach(b, w1, 0.5);
        let q = t.transitions(r, Action(0));
        assert_eq!(q, vec![(a, 0.75), (b, 0.25)]);
        assert!((t.node_weight(a) - 0.375).abs() < 1e-12);
        assert!(t.transitions(r, Action(5)).is_empty());
    }
}
