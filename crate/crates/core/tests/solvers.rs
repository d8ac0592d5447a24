mod common;

use common::two_level::TwoLevel;
use epimc::determinize::{BeliefSampler, SamplingStrategy};
use epimc::game::{History, InfostateKey, PlayerId};
use epimc::games::{rps, RpsState, RpsVariant, TreeGame, TreeNode};
use epimc::leaf_eval::{AlphaBeta, LeafEvaluator};
use epimc::search::epimc::build_subgame;
use epimc::search::{Budget, EpimcConfig, SubgameTree};
use epimc::solvers::{cfrplus_solve, iss_solve, CfrPlusSolver, SubgamePolicy};
use epimc::Action;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn iss_matches_brute_force_max_min() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..100 {
        let inst = TwoLevel::random(&mut rng);
        let tree = inst.tree();
        let sol = iss_solve(&tree).unwrap();
        let (a, v) = inst.max_min();
        assert!((sol.root_value - v).abs() < 1e-9, "instance {i}: iss {} oracle {v}", sol.root_value);
        assert_eq!(sol.root_action, Some(Action(a as u16)), "instance {i}");
    }
}

fn assert_infoset_consistent(tree: &SubgameTree, policy: &SubgamePolicy) {
    for (id, n) in tree.nodes().iter().enumerate() {
        let Some(actor) = n.actor else { continue };
        if n.is_frontier || n.children.is_empty() {
            continue;
        }
        let at_node = policy.at_node(tree, id).expect("decision node has a policy");
        assert_eq!(Some(at_node), policy.get(actor, &n.keys[actor.index()]));
        let total: f64 = at_node.iter().map(|p| p.1).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}

#[test]
fn solver_policies_are_shared_within_infosets() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let tree = TwoLevel::random(&mut rng).tree();
        assert_infoset_consistent(&tree, &iss_solve(&tree).unwrap().policy);
        assert_infoset_consistent(&tree, &cfrplus_solve(&tree, 50).unwrap().policy);
    }
}

#[test]
fn cfr_regrets_stay_non_negative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let tree = TwoLevel::random(&mut rng).tree();
        let mut solver = CfrPlusSolver::new(&tree).unwrap();
        for _ in 0..100 {
            solver.iterate().unwrap();
            assert!(solver.regrets().iter().flatten().all(|&r| r >= 0.0));
        }
    }
}

#[test]
fn cfr_exploitability_shrinks() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..30 {
        let inst = TwoLevel::random(&mut rng);
        let tree = inst.tree();
        let early = inst.exploitability(&cfrplus_solve(&tree, 10).unwrap().policy);
        let late = inst.exploitability(&cfrplus_solve(&tree, 1000).unwrap().policy);
        assert!(early >= -1e-9 && late >= -1e-9);
        assert!(late <= early + 1e-9, "instance {i}: {late} > {early}");
    }
}

fn leave_or_play_subgame() -> SubgameTree {
    let g = RpsVariant::new();
    let cfg = EpimcConfig { depth: 2, evaluator: LeafEvaluator::exact(), ..Default::default() };
    let mut s = BeliefSampler::new(SamplingStrategy::Enumerate);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    build_subgame(&g, &InfostateKey::new(PlayerId::P0), Budget::Iterations(4000), &mut s, &cfg, &mut rng).unwrap()
}

#[test]
fn leave_or_play_cfr_second_player_is_uniform() {
    let g = RpsVariant::new();
    let tree = leave_or_play_subgame();
    let sol = cfrplus_solve(&tree, 1000).unwrap();
    let key = History::new(RpsState::Start).with(&g, rps::ROCK).unwrap().infostate(&g, PlayerId::P1);
    let dist = sol.policy.get(PlayerId::P1, &key).unwrap();
    assert_eq!(dist.len(), 3);
    for (_, p) in dist {
        assert!((p - 1.0 / 3.0).abs() < 0.05, "{dist:?}");
    }
    assert_ne!(sol.root_action, Some(rps::LEAVE));
    assert_infoset_consistent(&tree, &sol.policy);
}

#[test]
fn leave_or_play_iss_second_player_is_indifferent() {
    let tree = leave_or_play_subgame();
    let sol = iss_solve(&tree).unwrap();
    assert!(sol.root_value.abs() < 1e-9);
    assert_infoset_consistent(&tree, &sol.policy);
}

fn minimax(nodes: &[TreeNode], i: usize) -> f64 {
    match &nodes[i] {
        TreeNode::Leaf(v) => *v,
        TreeNode::Decision { player, children } => {
            let vals = children.iter().map(|&c| minimax(nodes, c));
            if *player == PlayerId::P0 {
                vals.fold(f64::NEG_INFINITY, f64::max)
            } else {
                vals.fold(f64::INFINITY, f64::min)
            }
        }
    }
}

#[test]
fn alpha_beta_matches_minimax_on_random_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let g = TreeGame::random(&mut rng, 6, 4);
        let expected = minimax(g.nodes(), 0);
        for tt in [false, true] {
            let mut ab = AlphaBeta::new(1_000_000, tt);
            assert_eq!(ab.value(&g, &0).unwrap(), expected);
        }
    }
}
