//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary. Set `EPIMC_ACCEPTANCE_STRICT=1` to exit with a
//! failure status when any criterion fails, and `EPIMC_ACCEPTANCE_EXTENDED=1`
//! to add slower match runs as INFO lines.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use common::two_level::TwoLevel;
use common::{actor_key, chi_square_uniform, history_label, random_prefix};
use epimc::determinize::{BeliefSampler, SamplingStrategy};
use epimc::fusion::{verify_propositions, PropositionReport};
use epimc::game::{History, InfostateKey, PlayerId};
use epimc::games::{
    rps, Battleship, BattleshipConfig, CardConfig, CardGame, DarkHex, GameSpec, PhantomTicTacToe, RpsState, RpsVariant,
    TreeGame, TreeNode,
};
use epimc::harness::{run_match, AgentSpec, MatchConfig, ResultSummary};
use epimc::leaf_eval::{AlphaBeta, LeafEvaluator};
use epimc::search::epimc::build_subgame;
use epimc::search::{epimc_choose, pimc_choose, pimc_scores, Budget, EpimcConfig, Explore};
use epimc::solvers::{cfrplus_solve, iss_solve, SolverKind};
use epimc::{Action, Game};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

const MATCH_SEED: u64 = 20261014;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn leave_or_play() -> (RpsVariant, InfostateKey, Vec<Action>) {
    let g = RpsVariant::new();
    let legal = g.legal_actions(&RpsState::Start);
    (g, InfostateKey::new(PlayerId::P0), legal)
}

fn leave_or_play_exact() -> Verdict {
    let (g, key, legal) = leave_or_play();
    let exact = LeafEvaluator::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut s = BeliefSampler::new(SamplingStrategy::Enumerate);
    let scores = pimc_scores(&g, &key, &legal, Budget::Iterations(10), &mut s, &exact, &mut rng).unwrap();
    let pimc = pimc_choose(&g, &key, &legal, Budget::Iterations(10), &mut s, &exact, &mut rng).unwrap();
    let leave = scores.mean_of(rps::LEAVE).unwrap();
    let play_means: Vec<f64> =
        [rps::ROCK, rps::PAPER, rps::SCISSORS].iter().map(|&a| scores.mean_of(a).unwrap()).collect();
    let pimc_ok = pimc == rps::LEAVE && (leave + 0.6).abs() < 1e-9 && play_means.iter().all(|m| (m + 1.0).abs() < 1e-9);

    let cfg = EpimcConfig { depth: 2, explore: Explore::All, evaluator: exact, solver: SolverKind::Iss };
    let tree = build_subgame(&g, &key, Budget::Iterations(20), &mut s, &cfg, &mut rng).unwrap();
    let iss = iss_solve(&tree).unwrap();
    let cfr = cfrplus_solve(&tree, 1000).unwrap();
    let iss_choice = epimc_choose(&g, &key, &legal, Budget::Iterations(20), &mut s, &cfg, &mut rng).unwrap();
    let cfr_cfg = EpimcConfig { solver: SolverKind::CfrPlus { iterations: 1000 }, ..cfg };
    let cfr_choice = epimc_choose(&g, &key, &legal, Budget::Iterations(20), &mut s, &cfr_cfg, &mut rng).unwrap();
    let ok = pimc_ok
        && iss_choice != rps::LEAVE
        && iss.root_action != Some(rps::LEAVE)
        && iss.root_value.abs() <= 1e-9
        && cfr_choice != rps::LEAVE
        && cfr.root_value.abs() <= 0.02;
    verdict(
        ok,
        format!(
            "pimc {pimc} (leave {leave:.3}, play {play_means:?}); iss {iss_choice} value {:.2e}; cfr+ {cfr_choice} value {:.4}",
            iss.root_value, cfr.root_value
        ),
    )
}

fn depth_properties() -> Verdict {
    let describe = |name: &str, r: &PropositionReport| {
        format!("{name}: T={} depths {:?} SF {:?} at T {}", r.horizon, r.depths, r.sf, r.sf_at_horizon)
    };
    let rps_report = verify_propositions(&RpsVariant::new(), &[1, 2]).unwrap();
    let card = CardGame::new(CardConfig::toy()).unwrap();
    let card_report = verify_propositions(&card, &(1..=card.horizon()).collect::<Vec<_>>()).unwrap();
    let three = CardGame::new(CardConfig { suits: 2, ranks: 4, public: 8, hidden: 2, hand: 3 }).unwrap();
    let three_report = verify_propositions(&three, &(1..=three.horizon()).collect::<Vec<_>>()).unwrap();
    let ok = rps_report.all_hold()
        && card_report.all_hold()
        && three_report.all_hold()
        && three_report.sf[0] > 0
        && rps_report.sf == [1, 0];
    verdict(
        ok,
        format!(
            "{}; {}; {}",
            describe("leave_or_play", &rps_report),
            describe("toy card", &card_report),
            describe("three-trick card", &three_report)
        ),
    )
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

fn solver_oracles() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let ab_ok = (0..100).all(|_| {
        let g = TreeGame::random(&mut rng, 6, 4);
        AlphaBeta::new(1_000_000, false).value(&g, &0).unwrap() == minimax(g.nodes(), 0)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let iss_ok = (0..100).all(|_| {
        let inst = TwoLevel::random(&mut rng);
        let sol = iss_solve(&inst.tree()).unwrap();
        let (a, v) = inst.max_min();
        (sol.root_value - v).abs() < 1e-9 && sol.root_action == Some(Action(a as u16))
    });
    let (g, key, _) = leave_or_play();
    let cfg =
        EpimcConfig { depth: 2, explore: Explore::All, evaluator: LeafEvaluator::exact(), solver: SolverKind::Iss };
    let mut s = BeliefSampler::new(SamplingStrategy::Enumerate);
    let tree =
        build_subgame(&g, &key, Budget::Iterations(20), &mut s, &cfg, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let sol = cfrplus_solve(&tree, 1000).unwrap();
    let p2 = History::new(RpsState::Start).with(&g, rps::ROCK).unwrap().infostate(&g, PlayerId::P1);
    let dist: Vec<f64> = sol.policy.get(PlayerId::P1, &p2).unwrap().iter().map(|p| p.1).collect();
    let gap = dist.iter().map(|p| (p - 1.0 / 3.0).abs()).fold(0.0, f64::max);
    verdict(
        ab_ok && iss_ok && dist.len() == 3 && gap <= 0.05,
        format!("alpha-beta {ab_ok}, iss {iss_ok}, cfr+ second player {dist:.3?} (max gap {gap:.4})"),
    )
}

fn epimc_d3() -> AgentSpec {
    AgentSpec::new("epimc").with("depth", 3).with("solver", "iss").with("eval", "rollout")
}

fn play(game: GameSpec, budget: usize, games: usize) -> ResultSummary {
    play_with(epimc_d3(), game, budget, games)
}

fn play_with(agent_a: AgentSpec, game: GameSpec, budget: usize, games: usize) -> ResultSummary {
    let cfg = MatchConfig {
        game,
        agent_a,
        agent_b: AgentSpec::new("pimc"),
        num_games: games,
        budget: Budget::Iterations(budget),
        seed: MATCH_SEED,
        out: None,
    };
    run_match(&cfg).unwrap().summary
}

fn describe(s: &ResultSummary) -> String {
    format!(
        "{} vs {} over {} games: {}W {}D {}L, win rate {:.2}% [{:.2}, {:.2}]",
        s.agent_a, s.agent_b, s.games, s.wins, s.draws, s.losses, s.win_rate, s.ci_low, s.ci_high
    )
}

fn phantom_match() -> Verdict {
    let s = play(GameSpec::PhantomTicTacToe, 1000, 300);
    let p = s.win_rate / 100.0;
    let z = (p - 0.5) / (0.25 / s.games as f64).sqrt();
    let p_value = 1.0 - Normal::new(0.0, 1.0).unwrap().cdf(z);
    verdict(s.win_rate >= 55.0 && p_value < 0.01, format!("{}, one-sided p {p_value:.4}", describe(&s)))
}

fn card_match() -> Verdict {
    let s = play(GameSpec::Card(CardConfig::default()), 1000, 300);
    let contains = s.ci_low <= 50.0 && 50.0 <= s.ci_high;
    let inside = s.ci_low >= 45.0 && s.ci_high <= 60.0;
    verdict(contains || inside, describe(&s))
}

fn depth_one_equivalence() -> Verdict {
    let (g, key, legal) = leave_or_play();
    let exact =
        EpimcConfig { depth: 1, explore: Explore::All, evaluator: LeafEvaluator::exact(), solver: SolverKind::Iss };
    let mut agree = 0;
    for seed in 0..200 {
        let b = Budget::Iterations(50);
        let mut s = BeliefSampler::new(SamplingStrategy::Enumerate);
        let e = epimc_choose(&g, &key, &legal, b, &mut s, &exact, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let mut s = BeliefSampler::new(SamplingStrategy::Enumerate);
        let p =
            pimc_choose(&g, &key, &legal, b, &mut s, &exact.evaluator, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        agree += (e == p) as usize;
    }
    let leave_or_play_agree = agree;

    let g = PhantomTicTacToe::new();
    let cfg = EpimcConfig { evaluator: LeafEvaluator::rollout(1), ..exact };
    let mut decisions = 0;
    agree = 0;
    for seed in 0u64.. {
        let h = random_prefix(&g, seed as usize % 4, &mut ChaCha8Rng::seed_from_u64(seed));
        let Some(key) = actor_key(&g, &h) else { continue };
        let legal = g.legal_actions(h.current());
        let b = Budget::Iterations(100);
        let mut s = BeliefSampler::for_game(&g);
        let e = epimc_choose(&g, &key, &legal, b, &mut s, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let mut s = BeliefSampler::for_game(&g);
        let p = pimc_choose(&g, &key, &legal, b, &mut s, &cfg.evaluator, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        agree += (e == p) as usize;
        decisions += 1;
        if decisions == 200 {
            break;
        }
    }
    verdict(
        leave_or_play_agree == 200 && agree == 200,
        format!("aligned streams: leave_or_play {leave_or_play_agree}/200, phantom openings {agree}/{decisions}"),
    )
}

fn uniformity<G: Game>(game: &G, key: &InfostateKey, seed: u64) -> (f64, f64, usize) {
    let mut s = BeliefSampler::new(SamplingStrategy::Enumerate);
    let support = s.enumerate_consistent(game, key).unwrap().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..10_000 {
        *counts.entry(history_label(&s.sample(game, key, &mut rng).unwrap())).or_insert(0u64) += 1;
    }
    let (stat, crit) = chi_square_uniform(&counts, support);
    (stat, crit, support)
}

fn violations<G: Game>(game: &G, calls: usize, max_steps: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = BeliefSampler::for_game(game);
    let mut bad = 0;
    let mut done = 0;
    while done < calls {
        let h = random_prefix(game, done % (max_steps + 1), &mut rng);
        let Some(key) = actor_key(game, &h) else { continue };
        for _ in 0..10 {
            match sampler.sample(game, &key, &mut rng) {
                Ok(w) if w.infostate(game, key.player()) == key && !game.is_terminal(w.current()) => {}
                _ => bad += 1,
            }
            done += 1;
        }
    }
    bad
}

fn sampler_soundness() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    let g = RpsVariant::new();
    let p2 = History::new(RpsState::Start).with(&g, rps::PAPER).unwrap().infostate(&g, PlayerId::P1);
    let (stat, crit, n) = uniformity(&g, &p2, 1);
    ok &= stat < crit;
    parts.push(format!("leave_or_play chi2 {stat:.2} < {crit:.2} over {n}"));

    let ph = PhantomTicTacToe::new();
    let start = History::new(ph.initial_state(&mut ChaCha8Rng::seed_from_u64(0)));
    let first = start.with(&ph, Action(4)).unwrap();
    let second = first.clone().with(&ph, Action(0)).unwrap();
    for (i, (h, who)) in [(&first, PlayerId::P1), (&second, PlayerId::P0)].into_iter().enumerate() {
        let (stat, crit, n) = uniformity(&ph, &h.infostate(&ph, who), 7 + i as u64);
        ok &= stat < crit;
        parts.push(format!("phantom chi2 {stat:.2} < {crit:.2} over {n}"));
    }

    let per_game = 20_000;
    let bad = [
        violations(&RpsVariant::new(), per_game, 1, 1),
        violations(&PhantomTicTacToe::new(), per_game, 8, 2),
        violations(&DarkHex::new(4).unwrap(), per_game, 10, 3),
        violations(&CardGame::new(CardConfig::default()).unwrap(), per_game, 15, 4),
        violations(&Battleship::new(BattleshipConfig::default()).unwrap(), per_game, 12, 5),
    ];
    let total: usize = bad.iter().sum();
    ok &= total == 0;
    parts.push(format!("{total} violations in {} calls", 5 * per_game));
    verdict(ok, parts.join("; "))
}

type Criterion = (&'static str, fn() -> Verdict, Option<f64>);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("leave_or_play exact oracle", leave_or_play_exact, Some(1.0)),
        ("fusion depth properties", depth_properties, Some(30.0)),
        ("solver oracles", solver_oracles, Some(60.0)),
        ("phantom ttt epimc d=3 vs pimc", phantom_match, None),
        ("card game epimc d=3 vs pimc", card_match, None),
        ("depth one equals pimc", depth_one_equivalence, None),
        ("belief sampler soundness and uniformity", sampler_soundness, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = run();
        let secs = t.elapsed().as_secs_f64();
        let in_time = limit.is_none_or(|l| secs < l);
        let pass = v.pass && in_time;
        failed += (!pass) as usize;
        let timing = match limit {
            Some(l) => format!("{secs:.2}s, limit {l}s"),
            None => format!("{secs:.2}s"),
        };
        println!("{} {} {name}: {} ({timing})", if pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    if std::env::var_os("EPIMC_ACCEPTANCE_EXTENDED").is_some() {
        for (label, game) in
            [("phantom ttt", GameSpec::PhantomTicTacToe), ("card game", GameSpec::Card(CardConfig::default()))]
        {
            println!("INFO {label} at 10000 iterations: {}", describe(&play(game, 10_000, 300)));
        }
        let all = play_with(epimc_d3().with("explore", "all"), GameSpec::PhantomTicTacToe, 1000, 300);
        println!("INFO phantom ttt exploring every action: {}", describe(&all));
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 && std::env::var_os("EPIMC_ACCEPTANCE_STRICT").is_some() {
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
