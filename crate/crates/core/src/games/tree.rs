//! Explicit perfect-information game trees, used for evaluator and
//! search tests.

use rand::Rng;

use crate::game::{Action, Game, GameError, JointObservation, Observation, PlayerId, Returns};

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Decision {
        player: PlayerId,
        children: Vec<usize>,
    },
    /// Payoff of the first player.
    Leaf(f64),
}

#[derive(Debug, Clone)]
pub struct TreeGame {
    nodes: Vec<TreeNode>,
}

impl TreeGame {
    /// Builds a game from nodes; node 0 is the root.
    pub fn new(nodes: Vec<TreeNode>) -> Result<Self, GameError> {
        if nodes.is_empty() {
            return Err(GameError::InvalidConfig("empty tree".into()));
        }
        for n in &nodes {
            if let TreeNode::Decision { children, .. } = n {
                if children.is_empty() || children.iter().any(|&c| c >= nodes.len() || c == 0) {
                    return Err(GameError::InvalidConfig("bad child index".into()));
                }
            }
        }
        Ok(TreeGame { nodes })
    }

    /// A one-ply game where the first player picks one of `payoffs`.
    pub fn bandit(payoffs: &[f64]) -> Self {
        let mut nodes = vec![TreeNode::Decision { player: PlayerId::P0, children: (1..=payoffs.len()).collect() }];
        nodes.extend(payoffs.iter().map(|&v| TreeNode::Leaf(v)));
        TreeGame { nodes }
    }

    /// Random tree with integer leaf payoffs in `-5..=5`, depth at most
    /// `max_depth` and branching in `1..=max_branching`. Players alternate.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_depth: usize, max_branching: usize) -> Self {
        fn grow<R: Rng + ?Sized>(
            rng: &mut R,
            nodes: &mut Vec<TreeNode>,
            depth: usize,
            max_depth: usize,
            max_b: usize,
        ) -> usize {
            let id = nodes.len();
            let leaf = depth == max_depth || (depth > 0 && rng.gen_bool(0.2));
            if leaf {
                nodes.push(TreeNode::Leaf(rng.gen_range(-5..=5) as f64));
                return id;
            }
            nodes.push(TreeNode::Leaf(0.0));
            let b = rng.gen_range(1..=max_b);
            let children = (0..b).map(|_| grow(rng, nodes, depth + 1, max_depth, max_b)).collect();
            nodes[id] = TreeNode::Decision { player: PlayerId((depth % 2) as u8), children };
            id
        }
        let mut nodes = Vec::new();
        grow(rng, &mut nodes, 0, max_depth.max(1), max_branching.max(1));
        TreeGame { nodes }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }
}

impl Game for TreeGame {
    type State = u32;

    fn name(&self) -> &str {
        "tree"
    }

    fn initial_state<R: Rng + ?Sized>(&self, _rng: &mut R) -> u32 {
        0
    }

    fn root_observation(&self, _state: &u32, _player: PlayerId) -> Observation {
        Observation::empty()
    }

    fn current_player(&self, state: &u32) -> Option<PlayerId> {
        match &self.nodes[*state as usize] {
            TreeNode::Decision { player, .. } => Some(*player),
            TreeNode::Leaf(_) => None,
        }
    }

    fn legal_actions(&self, state: &u32) -> Vec<Action> {
        match &self.nodes[*state as usize] {
            TreeNode::Decision { children, .. } => (0..children.len() as u16).map(Action).collect(),
            TreeNode::Leaf(_) => Vec::new(),
        }
    }

    fn apply(&self, state: &u32, action: Action) -> Result<(u32, JointObservation), GameError> {
        match &self.nodes[*state as usize] {
            TreeNode::Decision { children, .. } => {
                let child = *children
                    .get(action.0 as usize)
                    .ok_or_else(|| GameError::IllegalAction { action, state: state.to_string() })?;
                let obs = Observation::from_bytes(&(action.0).to_le_bytes());
                Ok((child as u32, [obs.clone(), obs]))
            }
            TreeNode::Leaf(_) => Err(GameError::TerminalState),
        }
    }

    fn returns(&self, state: &u32) -> Result<Returns, GameError> {
        match &self.nodes[*state as usize] {
            TreeNode::Leaf(v) => Ok(Returns::zero_sum(*v)),
            _ => Err(GameError::NotTerminal),
        }
    }

    fn horizon(&self) -> usize {
        fn depth(nodes: &[TreeNode], i: usize) -> usize {
            match &nodes[i] {
                TreeNode::Leaf(_) => 0,
                TreeNode::Decision { children, .. } => 1 + children.iter().map(|&c| depth(nodes, c)).max().unwrap_or(0),
            }
        }
        depth(&self.nodes, 0)
    }

    fn chance_roots(&self) -> Option<Vec<(u32, f64)>> {
        Some(vec![(0, 1.0)])
    }

    fn consistent_roots(&self, _player: PlayerId, _root_obs: &Observation) -> Option<Vec<u32>> {
        Some(vec![0])
    }

    fn sample_consistent_root<R: Rng + ?Sized>(
        &self,
        _player: PlayerId,
        _root_obs: &Observation,
        _rng: &mut R,
    ) -> Option<u32> {
        Some(0)
    }
}
