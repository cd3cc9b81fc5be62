//! Local hidden variables: deterministic strategies, the classical bound of
//! the inequality family, the coverage argument behind it, and the
//! three-party nonlocal game.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bell::{projector_tilted, projector_z};
use crate::error::{Error, Result};
use crate::linalg::kron_all;
use crate::states::{MeasurementSet, PureState};

/// Largest party count accepted by [`classical_value`].
pub const MAX_ENUM_PARTIES: usize = 10;
/// Largest party count accepted by [`proof_check`].
pub const MAX_PROOF_PARTIES: usize = 12;

/// Outcome `±1`.
pub type Outcome = i8;

/// Predetermined outcomes `(setting 1, setting 2)` for every party.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    outcomes: Vec<(Outcome, Outcome)>,
}

impl DeterministicStrategy {
    pub fn new(outcomes: Vec<(Outcome, Outcome)>) -> Result<Self> {
        if outcomes.iter().any(|&(a, b)| a.abs() != 1 || b.abs() != 1) {
            return Err(Error::InvalidArgument("outcomes must be +1 or -1".into()));
        }
        Ok(Self { outcomes })
    }

    /// Decodes strategy `index ∈ [0, 4^n)`: two bits per party, low bit for
    /// setting 1, a set bit meaning outcome `−1`.
    pub fn from_index(n: usize, index: u64) -> Self {
        let bit = |b: u64| if b == 0 { 1 } else { -1 };
        let outcomes = (0..n)
            .map(|l| {
                let pair = (index >> (2 * l)) & 0b11;
                (bit(pair & 1), bit(pair >> 1))
            })
            .collect();
        Self { outcomes }
    }

    pub fn n(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcomes(&self) -> &[(Outcome, Outcome)] {
        &self.outcomes
    }
}

/// Iterates over all `4^n` deterministic strategies exactly once.
pub fn all_strategies(n: usize) -> impl Iterator<Item = DeterministicStrategy> {
    (0..4u64.pow(n as u32)).map(move |i| DeterministicStrategy::from_index(n, i))
}

/// LHS − RHS of the inequality with every probability replaced by the
/// indicator of its event under `strategy`.
pub fn bell_functional(strategy: &DeterministicStrategy) -> f64 {
    let o = strategy.outcomes();
    let all_first_up = o.iter().all(|&(a, _)| a == 1);
    let all_second_up = o.iter().all(|&(_, b)| b == 1);
    let flips = (0..o.len())
        .filter(|&l| o[l].1 == -1 && o.iter().enumerate().all(|(m, &(a, _))| m == l || a == 1))
        .count();
    f64::from(u8::from(all_first_up)) - f64::from(u8::from(all_second_up)) - flips as f64
}

/// Best value of [`bell_functional`] together with its first witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalBound {
    pub n: usize,
    pub value: f64,
    pub witness: DeterministicStrategy,
    pub strategies: u64,
}

/// Maximum of the Bell functional over every deterministic strategy.
pub fn classical_value(n: usize) -> Result<ClassicalBound> {
    if !(2..=MAX_ENUM_PARTIES).contains(&n) {
        return Err(Error::PartyCount(n, "2 <= n <= 10"));
    }
    let mut best: Option<(f64, DeterministicStrategy)> = None;
    let mut count = 0u64;
    for s in all_strategies(n) {
        count += 1;
        let v = bell_functional(&s);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, s));
        }
    }
    let (value, witness) = best.expect("at least one strategy");
    Ok(ClassicalBound {
        n,
        value,
        witness,
        strategies: count,
    })
}

/// Coverage of the left-hand-side sequences by right-hand-side terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub n: usize,
    pub sequences: usize,
    /// number of right-hand-side terms covering a sequence → how many sequences
    pub multiplicity: BTreeMap<usize, usize>,
    /// right-hand-side term index → how many sequences it covers; term 0 is
    /// the all-setting-2 probability, term `l` the flip of party `l − 1`
    pub per_term: Vec<usize>,
    /// term index covering the sequence whose second half is all `+1`
    pub all_up_covered_by: Vec<usize>,
}

/// Checks that every `2n`-outcome sequence counted on the left-hand side is
/// counted by at least one right-hand-side probability.
pub fn proof_check(n: usize) -> Result<ProofReport> {
    if !(2..=MAX_PROOF_PARTIES).contains(&n) {
        return Err(Error::PartyCount(n, "2 <= n <= 12"));
    }
    // sequence layout: first[l] = a_{l1}, second[l] = a_{l2}
    let first = vec![1i8; n];
    // term 0 is the all-setting-2 probability, term l + 1 the flip of party l
    let covers = |term: usize, f: &[i8], s: &[i8]| match term {
        0 => s.iter().all(|&v| v == 1),
        t => {
            let l = t - 1;
            s[l] == -1 && f.iter().enumerate().all(|(m, &v)| m == l || v == 1)
        }
    };
    let terms = n + 1;

    let mut multiplicity = BTreeMap::new();
    let mut per_term = vec![0usize; terms];
    let mut all_up_covered_by = Vec::new();
    for mask in 0..(1u32 << n) {
        let second: Vec<i8> = (0..n)
            .map(|l| if mask >> l & 1 == 1 { -1 } else { 1 })
            .collect();
        let covering: Vec<usize> = (0..terms).filter(|&t| covers(t, &first, &second)).collect();
        if covering.is_empty() {
            let mut seq = first.clone();
            seq.extend(&second);
            return Err(Error::UncoveredSequence(seq));
        }
        if mask == 0 {
            all_up_covered_by = covering.clone();
        }
        for &i in &covering {
            per_term[i] += 1;
        }
        *multiplicity.entry(covering.len()).or_insert(0) += 1;
    }
    Ok(ProofReport {
        n,
        sequences: 1 << n,
        multiplicity,
        per_term,
        all_up_covered_by,
    })
}

/// The five equiprobable instruction triples of the three-party game.
pub const INSTRUCTIONS: [[u8; 3]; 5] = [[0, 0, 0], [1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]];

/// Win predicate of the three-party game.
pub fn game_wins(instruction: [u8; 3], replies: [u8; 3]) -> bool {
    match instruction.iter().map(|&b| b as usize).sum::<usize>() {
        0 => replies == [0, 0, 0],
        3 => replies != [0, 0, 0],
        1 => {
            let p = instruction.iter().position(|&b| b == 1).expect("one-hot");
            let lose = (0..3).all(|l| replies[l] == u8::from(l == p));
            !lose
        }
        _ => panic!("instruction {instruction:?} is not part of the game"),
    }
}

/// Per-party reply functions `bit → bit`, stored as `[reply(0), reply(1)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameStrategy(pub [[u8; 2]; 3]);

impl GameStrategy {
    pub fn constant(bit: u8) -> Self {
        Self([[bit; 2]; 3])
    }

    pub fn win_probability(&self) -> f64 {
        let wins = INSTRUCTIONS
            .iter()
            .filter(|ins| {
                let replies = [0, 1, 2].map(|l| self.0[l][ins[l] as usize]);
                game_wins(**ins, replies)
            })
            .count();
        wins as f64 / INSTRUCTIONS.len() as f64
    }
}

/// Optimal classical winning probability with its first witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameClassical {
    pub value: f64,
    pub witness: GameStrategy,
    pub strategies: usize,
}

/// Enumerates the 64 deterministic reply strategies.
pub fn game_classical_value() -> GameClassical {
    let mut best = (f64::NEG_INFINITY, GameStrategy::constant(0));
    let mut count = 0;
    for code in 0..64u32 {
        let mut f = [[0u8; 2]; 3];
        for (l, reply) in f.iter_mut().enumerate() {
            let bits = (code >> (2 * l)) & 0b11;
            *reply = [(bits & 1) as u8, (bits >> 1) as u8];
        }
        count += 1;
        let s = GameStrategy(f);
        let p = s.win_probability();
        if p > best.0 {
            best = (p, s);
        }
    }
    GameClassical {
        value: best.0,
        witness: best.1,
        strategies: count,
    }
}

/// Quantum winning probability `4/5 + Δ/5` for a violation `Δ`.
pub fn game_quantum_value(delta: f64) -> f64 {
    0.8 + delta / 5.0
}

/// Winning probability from direct simulation: on instruction bit `b` each
/// party measures setting `b + 1` and replies `0` for outcome `+1`, `1` for
/// outcome `−1`.
pub fn game_quantum_simulated(state: &PureState, meas: &MeasurementSet) -> Result<f64> {
    if state.n() != 3 || meas.n() != 3 {
        return Err(Error::PartyCount(state.n(), "3 parties"));
    }
    let amps = state.amplitudes();
    let mut total = 0.0;
    for ins in INSTRUCTIONS {
        for code in 0..8u8 {
            let replies = [code >> 2 & 1, code >> 1 & 1, code & 1];
            if !game_wins(ins, replies) {
                continue;
            }
            let factors: Vec<_> = (0..3)
                .map(|l| {
                    let p = meas.projector(l, ins[l] as usize);
                    if replies[l] == 0 {
                        p.matrix().clone()
                    } else {
                        p.complement()
                    }
                })
                .collect();
            total += kron_all(factors.iter()).sandwich(amps, amps).re;
        }
    }
    Ok(total / INSTRUCTIONS.len() as f64)
}

/// Setting-1 `σ_z` and setting-2 tilted projectors with overlap `x` for all
/// three parties.
pub fn game_measurements(x: f64) -> Result<MeasurementSet> {
    let second = projector_tilted(x)?;
    MeasurementSet::new(vec![[projector_z(), second]; 3])
}
