//! Seeded Monte Carlo play-out of whole shootouts.
//!
//! Trials are cut into fixed-size chunks; chunk `i` draws from the ChaCha8
//! stream `i` of the master seed. Chunks run in parallel and their integer
//! tallies are summed in chunk order, so the output depends only on
//! (seed, trials, inputs) and never on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::model::ScoringModel;
use super::sudden_death::expected_sudden_death_rounds;
use crate::error::{Error, Result};
use crate::mechanisms::{regular_phase_winner, KickResult, Mechanism, RoundRecord, TeamId};

pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.9), one stream per chunk";
pub const CHUNK_TRIALS: u64 = 1 << 15;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub a_wins: u64,
    pub b_wins: u64,
    /// Shootouts level after the regular phase.
    pub ties: u64,
    pub tie_a_first: u64,
    pub tie_b_first: u64,
    pub kicks: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.a_wins += other.a_wins;
        self.b_wins += other.b_wins;
        self.ties += other.ties;
        self.tie_a_first += other.tie_a_first;
        self.tie_b_first += other.tie_b_first;
        self.kicks += other.kicks;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub mechanism: Mechanism,
    pub rounds: u32,
    pub seed: u64,
    pub trials: u64,
    pub rng: &'static str,
    pub chunk_trials: u64,
    pub tally: Tally,
    /// A wins overall, sudden death included.
    pub p_a_win: f64,
    pub p_b_win: f64,
    /// Reached sudden death.
    pub p_tie: f64,
    pub p_tie_a_first: f64,
    pub p_tie_b_first: f64,
    pub mean_kicks: f64,
}

impl SimulationReport {
    /// Binomial standard error of an estimated proportion `x`.
    pub fn std_error(&self, x: f64) -> f64 {
        (x * (1.0 - x) / self.trials as f64).sqrt()
    }
}

struct Sampler {
    regular: Vec<(f64, f64)>,
    sudden_death: (f64, f64),
}

impl Sampler {
    fn play(&self, mech: &Mechanism, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        let n = self.regular.len() as u32;
        let (mut a, mut b) = (0u32, 0u32);
        let mut prev: Option<RoundRecord> = None;

        for (r, &(p, q)) in (1..=n).zip(&self.regular) {
            let first = mech.next_first_kicker(r, prev.as_ref(), n);
            let x = rng.random::<f64>() < p;
            tally.kicks += 1;
            if x {
                *score(first, &mut a, &mut b) += 1;
            }
            let (ka, kb) = if first == TeamId::A {
                (r, r - 1)
            } else {
                (r - 1, r)
            };
            if let Some(w) = regular_phase_winner(a, b, ka, kb, n) {
                return record_win(tally, w);
            }
            let y = rng.random::<f64>() < q;
            tally.kicks += 1;
            if y {
                *score(first.other(), &mut a, &mut b) += 1;
            }
            if let Some(w) = regular_phase_winner(a, b, r, r, n) {
                return record_win(tally, w);
            }
            prev = Some(RoundRecord::new(first, x.into(), y.into()));
        }

        tally.ties += 1;
        let (p, q) = self.sudden_death;
        let mut round = n + 1;
        loop {
            let first = mech.next_first_kicker(round, prev.as_ref(), n);
            if round == n + 1 {
                match first {
                    TeamId::A => tally.tie_a_first += 1,
                    TeamId::B => tally.tie_b_first += 1,
                }
            }
            let x = rng.random::<f64>() < p;
            let y = rng.random::<f64>() < q;
            tally.kicks += 2;
            if x != y {
                let winner = if x { first } else { first.other() };
                return record_win(tally, winner);
            }
            prev = Some(RoundRecord::new(
                first,
                KickResult::from(x),
                KickResult::from(y),
            ));
            round += 1;
        }
    }
}

fn score<'a>(team: TeamId, a: &'a mut u32, b: &'a mut u32) -> &'a mut u32 {
    match team {
        TeamId::A => a,
        TeamId::B => b,
    }
}

fn record_win(tally: &mut Tally, winner: TeamId) {
    match winner {
        TeamId::A => tally.a_wins += 1,
        TeamId::B => tally.b_wins += 1,
    }
}

/// Plays `trials` shootouts with sudden death and tallies the results.
pub fn simulate(
    mech: &Mechanism,
    rounds: u32,
    model: &ScoringModel,
    seed: u64,
    trials: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial is needed".into()));
    }
    let regular = model.round_scalars::<f64>(rounds)?;
    let sudden_death = model.sudden_death.scalars::<f64>();
    // Rejects models whose sudden death would never end.
    expected_sudden_death_rounds(&sudden_death.0, &sudden_death.1)?;
    let sampler = Sampler {
        regular,
        sudden_death,
    };

    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let tallies: Vec<Tally> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let len = CHUNK_TRIALS.min(trials - chunk * CHUNK_TRIALS);
            let mut tally = Tally::default();
            for _ in 0..len {
                sampler.play(mech, &mut rng, &mut tally);
            }
            tally
        })
        .collect();
    let tally = tallies.into_iter().fold(Tally::default(), Tally::merge);

    let n = trials as f64;
    Ok(SimulationReport {
        mechanism: mech.clone(),
        rounds,
        seed,
        trials,
        rng: RNG_ALGORITHM,
        chunk_trials: CHUNK_TRIALS,
        tally,
        p_a_win: tally.a_wins as f64 / n,
        p_b_win: tally.b_wins as f64 / n,
        p_tie: tally.ties as f64 / n,
        p_tie_a_first: tally.tie_a_first as f64 / n,
        p_tie_b_first: tally.tie_b_first as f64 / n,
        mean_kicks: tally.kicks as f64 / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_output() {
        let m = ScoringModel::brams();
        let a = simulate(&Mechanism::CatchUp, 5, &m, 7, 50_000).unwrap();
        let b = simulate(&Mechanism::CatchUp, 5, &m, 7, 50_000).unwrap();
        assert_eq!(a, b);
        let c = simulate(&Mechanism::CatchUp, 5, &m, 8, 50_000).unwrap();
        assert_ne!(a.tally, c.tally);
    }

    #[test]
    fn tallies_are_consistent() {
        let r = simulate(
            &Mechanism::AdjustedCatchUp,
            5,
            &ScoringModel::brams(),
            1,
            20_000,
        )
        .unwrap();
        let t = r.tally;
        assert_eq!(t.a_wins + t.b_wins, 20_000);
        assert_eq!(t.tie_a_first, 0);
        assert_eq!(t.tie_a_first + t.tie_b_first, t.ties);
    }

    #[test]
    fn independent_of_thread_count() {
        let m = ScoringModel::brams();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate(&Mechanism::Alternating, 5, &m, 99, 100_000).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(simulate(&Mechanism::Standard, 5, &ScoringModel::brams(), 0, 0).is_err());
    }
}
