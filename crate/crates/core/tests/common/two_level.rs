use epimc::game::{InfostateKey, Observation, PlayerId};
use epimc::search::SubgameTree;
use epimc::solvers::SubgamePolicy;
use epimc::Action;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A searcher decision followed by an opponent decision. Each world
/// gives the searcher a private bit and the opponent a signal; the
/// opponent also sees the searcher's action.
pub struct TwoLevel {
    actions: usize,
    replies: usize,
    mass: Vec<u32>,
    /// `[world][action]` -> (searcher bit, opponent signal)
    signals: Vec<Vec<(u8, u8)>>,
    /// `[world][action][reply]`
    values: Vec<Vec<Vec<f64>>>,
}

impl TwoLevel {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        let worlds = rng.gen_range(2..=4);
        let actions = rng.gen_range(2..=3);
        let replies = rng.gen_range(2..=3);
        let n_signals = rng.gen_range(1..=2);
        TwoLevel {
            actions,
            replies,
            mass: (0..worlds).map(|_| rng.gen_range(1..=3)).collect(),
            signals: (0..worlds)
                .map(|_| (0..actions).map(|_| (rng.gen_range(0..2), rng.gen_range(0..n_signals))).collect())
                .collect(),
            values: (0..worlds)
                .map(|_| (0..actions).map(|_| (0..replies).map(|_| rng.gen_range(-3..=3) as f64).collect()).collect())
                .collect(),
        }
    }

    pub fn obs(a: usize, (bit, sig): (u8, u8)) -> [Observation; 2] {
        [Observation::from_bytes(&[bit]), Observation::from_bytes(&[a as u8, sig])]
    }

    pub fn tree(&self) -> SubgameTree {
        let mut t = SubgameTree::new(PlayerId::P0, 2);
        let root = t.add_root([InfostateKey::new(PlayerId::P0), InfostateKey::new(PlayerId::P1)], Some(PlayerId::P0));
        for (w, &m) in self.mass.iter().enumerate() {
            let wid = t.add_world(m as f64);
            t.set_reach(root, wid, 1.0);
            for a in 0..self.actions {
                let n = t.child(root, Action(a as u16), &Self::obs(a, self.signals[w][a]), Some(PlayerId::P1));
                t.set_reach(n, wid, 1.0 / self.actions as f64);
                for b in 0..self.replies {
                    let leaf = t.child(n, Action(b as u16), &[Observation::empty(), Observation::empty()], None);
                    t.set_reach(leaf, wid, 1.0 / (self.actions * self.replies) as f64);
                    for _ in 0..m {
                        t.add_value(leaf, self.values[w][a][b]);
                    }
                }
            }
        }
        t
    }

    /// Opponent infosets of action `a`: its distinct signals.
    pub fn opponent_signals(&self, a: usize) -> Vec<u8> {
        let mut s: Vec<u8> = self.signals.iter().map(|row| row[a].1).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Probability and mean value of each (bit, signal) cell after `a`
    /// and reply `b`.
    pub fn cells(&self, a: usize, b: usize) -> Vec<((u8, u8), f64, f64)> {
        let total: u32 = self.mass.iter().sum();
        let mut keys: Vec<(u8, u8)> = self.signals.iter().map(|row| row[a]).collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .map(|k| {
                let members: Vec<usize> = (0..self.mass.len()).filter(|&w| self.signals[w][a] == k).collect();
                let m: u32 = members.iter().map(|&w| self.mass[w]).sum();
                let v: f64 =
                    members.iter().map(|&w| self.mass[w] as f64 * self.values[w][a][b]).sum::<f64>() / m as f64;
                (k, m as f64 / total as f64, v)
            })
            .collect()
    }

    /// Expected value of `a` when the opponent answers signal `s` with
    /// `reply(s)`.
    pub fn value_against(&self, a: usize, reply: impl Fn(u8) -> usize) -> f64 {
        let mut v = 0.0;
        for (k, p, _) in self.cells(a, 0) {
            let b = reply(k.1);
            let mean = self.cells(a, b).into_iter().find(|c| c.0 == k).unwrap().2;
            v += p * mean;
        }
        v
    }

    /// max over searcher actions of the min over every pure opponent
    /// strategy, enumerated.
    pub fn max_min(&self) -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for a in 0..self.actions {
            let sigs = self.opponent_signals(a);
            let strategies = self.replies.pow(sigs.len() as u32);
            let mut worst = f64::INFINITY;
            for code in 0..strategies {
                let reply = |s: u8| {
                    let i = sigs.iter().position(|&x| x == s).unwrap();
                    (code / self.replies.pow(i as u32)) % self.replies
                };
                worst = worst.min(self.value_against(a, reply));
            }
            if worst > best.1 + 1e-9 {
                best = (a, worst);
            }
        }
        best
    }

    pub fn opponent_key(a: usize, sig: u8) -> InfostateKey {
        InfostateKey::new(PlayerId::P1).recorded(PlayerId::P0, Action(a as u16), &Self::obs(a, (0, sig)))
    }

    /// Best-response gap of a profile.
    pub fn exploitability(&self, policy: &SubgamePolicy) -> f64 {
        let root = InfostateKey::new(PlayerId::P0);
        let mixed_value = |a: usize, k: (u8, u8), pick: Option<usize>| -> f64 {
            let key = Self::opponent_key(a, k.1);
            (0..self.replies)
                .map(|b| {
                    let pb = match pick {
                        Some(x) => (x == b) as u8 as f64,
                        None => policy.prob(PlayerId::P1, &key, Action(b as u16)),
                    };
                    pb * self.cells(a, b).into_iter().find(|c| c.0 == k).unwrap().2
                })
                .sum()
        };
        let mut br_searcher = f64::NEG_INFINITY;
        let mut br_opponent = 0.0;
        for a in 0..self.actions {
            let cells = self.cells(a, 0);
            let v: f64 = cells.iter().map(|(k, p, _)| p * mixed_value(a, *k, None)).sum();
            br_searcher = br_searcher.max(v);
            let pa = policy.prob(PlayerId::P0, &root, Action(a as u16));
            for s in self.opponent_signals(a) {
                let best = (0..self.replies)
                    .map(|b| {
                        cells
                            .iter()
                            .filter(|c| c.0 .1 == s)
                            .map(|(k, p, _)| p * mixed_value(a, *k, Some(b)))
                            .sum::<f64>()
                    })
                    .fold(f64::INFINITY, f64::min);
                br_opponent += pa * best;
            }
        }
        br_searcher - br_opponent
    }
}
