use serde::Serialize;

use super::{KickResult, Mechanism, RoundRecord, TeamId};
use crate::error::{Error, Result};

/// One round of a replayed shootout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScheduledRound {
    pub round: u32,
    pub first_kicker: TeamId,
    pub first_result: KickResult,
    pub second_result: KickResult,
    pub score_a: u32,
    pub score_b: u32,
}

impl ScheduledRound {
    pub fn record(&self) -> RoundRecord {
        RoundRecord::new(self.first_kicker, self.first_result, self.second_result)
    }
}

/// Parses `SS.MM.SM` style kick strings: two kicks per round in kick
/// order, `S` scored, `M` missed, rounds separated by `.`.
pub fn parse_kick_string(s: &str) -> Result<Vec<KickResult>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut kicks = Vec::new();
    for (i, group) in s.split('.').enumerate() {
        let mut n = 0;
        for c in group.chars() {
            kicks.push(match c {
                'S' | 's' => KickResult::Scored,
                'M' | 'm' => KickResult::Missed,
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected {other:?} in round {}",
                        i + 1
                    )))
                }
            });
            n += 1;
        }
        if n != 2 {
            return Err(Error::Domain(format!(
                "round {} has {n} kicks, expected 2",
                i + 1
            )));
        }
    }
    Ok(kicks)
}

pub fn format_kick_string(kicks: &[KickResult]) -> String {
    let mut out = String::with_capacity(kicks.len() * 3 / 2);
    for (i, k) in kicks.iter().enumerate() {
        if i > 0 && i % 2 == 0 {
            out.push('.');
        }
        out.push(k.symbol());
    }
    out
}

/// Assigns kick results, in kick order, to the kickers the mechanism
/// schedules. The replay does not stop at a decision.
pub fn replay_schedule(
    mech: &Mechanism,
    kicks: &[KickResult],
    regular_rounds: u32,
) -> Result<Vec<ScheduledRound>> {
    if !kicks.len().is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "kick sequence has odd length {}",
            kicks.len()
        )));
    }
    let pairs = kicks.chunks_exact(2).map(|c| (c[0], c[1]));
    Ok(replay(mech, regular_rounds, pairs, |_, first, second| {
        (first, second)
    }))
}

/// Replays per-team results: each pair is (A's kick, B's kick) for a
/// round, whatever order the mechanism puts them in.
pub fn replay_team_results(
    mech: &Mechanism,
    results: &[(KickResult, KickResult)],
    regular_rounds: u32,
) -> Vec<ScheduledRound> {
    replay(
        mech,
        regular_rounds,
        results.iter().copied(),
        |first, a, b| match first {
            TeamId::A => (a, b),
            TeamId::B => (b, a),
        },
    )
}

fn replay(
    mech: &Mechanism,
    regular_rounds: u32,
    rounds: impl Iterator<Item = (KickResult, KickResult)>,
    order: impl Fn(TeamId, KickResult, KickResult) -> (KickResult, KickResult),
) -> Vec<ScheduledRound> {
    let mut out: Vec<ScheduledRound> = Vec::new();
    let (mut sa, mut sb) = (0, 0);
    for (i, (x, y)) in rounds.enumerate() {
        let round = i as u32 + 1;
        let prev = out.last().map(ScheduledRound::record);
        let first = mech.next_first_kicker(round, prev.as_ref(), regular_rounds);
        let (first_result, second_result) = order(first, x, y);
        let rec = RoundRecord::new(first, first_result, second_result);
        let (ga, gb) = rec.goals();
        sa += ga;
        sb += gb;
        out.push(ScheduledRound {
            round,
            first_kicker: first,
            first_result,
            second_result,
            score_a: sa,
            score_b: sb,
        });
    }
    out
}
