//! Disk Pile: the classic top-insertion puzzle with repeated disk sizes.
//!
//! Equal disks may rest on each other, so the `n_i` disks of size `i` travel
//! together in `n_i` consecutive moves and the optimal cost is
//! `sum n_i * 2^(s - i)`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::rules::{Move, MoveTrace, PegId};

/// Default largest total disk count accepted by [`diskpile_oracle`].
pub const DEFAULT_PILE_CAP: u64 = 9;

/// Largest number of distinct sizes; keeps every count inside `u128`.
pub const MAX_SIZES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiskPileError {
    #[error("a size profile needs at least one size")]
    EmptyProfile,
    #[error("size {size} has a zero count")]
    ZeroCount { size: usize },
    #[error("{0} distinct sizes exceed the supported {MAX_SIZES}")]
    TooManySizes(usize),
    #[error("malformed size profile {0:?}")]
    MalformedProfile(String),
    #[error("cannot have {sizes} distinct sizes among {disks} disks")]
    SizesExceedDisks { disks: u64, sizes: u64 },
    #[error("{total} disks exceed the pile oracle cap of {cap}")]
    CapExceeded { total: u64, cap: u64 },
    #[error("from, via and to must be three distinct pegs")]
    DuplicatePegs,
    #[error("peg {0} is empty")]
    EmptySource(PegId),
    #[error("cannot put size {size} on size {below} at peg {peg}")]
    IllegalPlacement { size: u32, below: u32, peg: PegId },
}

/// Multiplicities `(n_1, ..., n_s)`, smallest size first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SizeProfile {
    counts: Vec<u32>,
}

impl SizeProfile {
    pub fn new(counts: Vec<u32>) -> Result<Self, DiskPileError> {
        if counts.is_empty() {
            return Err(DiskPileError::EmptyProfile);
        }
        if counts.len() > MAX_SIZES {
            return Err(DiskPileError::TooManySizes(counts.len()));
        }
        if let Some(i) = counts.iter().position(|&c| c == 0) {
            return Err(DiskPileError::ZeroCount { size: i + 1 });
        }
        Ok(SizeProfile { counts })
    }

    /// `n` disks of pairwise distinct sizes.
    pub fn distinct(n: usize) -> Result<Self, DiskPileError> {
        SizeProfile::new(vec![1; n])
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn distinct_sizes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    /// Every profile with exactly `total` disks (the compositions of
    /// `total`), in lexicographic order of the count vectors.
    pub fn all_with_total(total: u32) -> Vec<SizeProfile> {
        fn go(left: u32, prefix: &mut Vec<u32>, out: &mut Vec<SizeProfile>) {
            if left == 0 {
                out.push(SizeProfile {
                    counts: prefix.clone(),
                });
                return;
            }
            for c in 1..=left {
                prefix.push(c);
                go(left - c, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if total > 0 {
            go(total, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for SizeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for SizeProfile {
    type Err = DiskPileError;

    /// Comma-separated counts, smallest size first, e.g. `"3,1,2"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let counts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| DiskPileError::MalformedProfile(s.to_string()))?;
        SizeProfile::new(counts)
    }
}

/// Sizes on each peg, bottom to top; sizes never increase going up.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PileConfiguration {
    pegs: [Vec<u32>; 3],
}

impl PileConfiguration {
    /// The whole pile on `peg`, largest sizes at the bottom.
    pub fn tower(profile: &SizeProfile, peg: PegId) -> Self {
        let mut pegs: [Vec<u32>; 3] = Default::default();
        for (i, &c) in profile.counts.iter().enumerate().rev() {
            let size = i as u32 + 1;
            pegs[peg.index()].extend(std::iter::repeat_n(size, c as usize));
        }
        PileConfiguration { pegs }
    }

    pub fn stack(&self, peg: PegId) -> &[u32] {
        &self.pegs[peg.index()]
    }

    pub fn is_tower_on(&self, peg: PegId) -> bool {
        PegId::ALL
            .iter()
            .all(|&p| p == peg || self.pegs[p.index()].is_empty())
    }

    pub fn apply(&mut self, m: Move) -> Result<(), DiskPileError> {
        let size = *self.pegs[m.from().index()]
            .last()
            .ok_or(DiskPileError::EmptySource(m.from()))?;
        if let Some(&below) = self.pegs[m.to().index()].last() {
            if below < size {
                return Err(DiskPileError::IllegalPlacement {
                    size,
                    below,
                    peg: m.to(),
                });
            }
        }
        self.pegs[m.from().index()].pop();
        self.pegs[m.to().index()].push(size);
        Ok(())
    }

    /// Applies `trace` in order; on failure returns the index of the
    /// offending move.
    pub fn replay(&mut self, trace: &MoveTrace) -> Result<(), (usize, DiskPileError)> {
        for (i, m) in trace.iter().enumerate() {
            self.apply(*m).map_err(|e| (i, e))?;
        }
        Ok(())
    }
}

/// Moves the whole pile from `from` to `to`, size class by size class.
pub fn solve_diskpile(
    p: &SizeProfile,
    from: PegId,
    via: PegId,
    to: PegId,
) -> Result<MoveTrace, DiskPileError> {
    fn go(counts: &[u32], a: PegId, b: PegId, c: PegId, out: &mut MoveTrace) {
        if let Some((&largest, rest)) = counts.split_last() {
            go(rest, a, c, b, out);
            for _ in 0..largest {
                out.push(Move::between(a, c));
            }
            go(rest, b, a, c, out);
        }
    }
    if from == via || via == to || from == to {
        return Err(DiskPileError::DuplicatePegs);
    }
    let mut out = MoveTrace::new();
    go(&p.counts, from, via, to, &mut out);
    Ok(out)
}

/// `sum n_i * 2^(s - i)`.
pub fn count_diskpile(p: &SizeProfile) -> u128 {
    let s = p.counts.len();
    p.counts
        .iter()
        .enumerate()
        .map(|(i, &c)| u128::from(c) << (s - 1 - i))
        .sum()
}

/// `2^(s-1) * (n - s + 2) - 1`, the largest cost over all profiles with `n`
/// disks of `s` sizes.
pub fn worst_case_count(n: u64, s: u64) -> Result<u128, DiskPileError> {
    if s == 0 || s > n {
        return Err(DiskPileError::SizesExceedDisks { disks: n, sizes: s });
    }
    if s as usize > MAX_SIZES {
        return Err(DiskPileError::TooManySizes(s as usize));
    }
    Ok((1u128 << (s - 1)) * u128::from(n - s + 2) - 1)
}

/// Exact optimum by BFS, with equal disks treated as indistinguishable.
pub fn diskpile_oracle(p: &SizeProfile) -> Result<u64, DiskPileError> {
    diskpile_oracle_with_cap(p, DEFAULT_PILE_CAP)
}

pub fn diskpile_oracle_with_cap(p: &SizeProfile, cap: u64) -> Result<u64, DiskPileError> {
    if p.total() > cap {
        return Err(DiskPileError::CapExceeded {
            total: p.total(),
            cap,
        });
    }
    // A state stores, for each size, how many of its disks sit on each peg;
    // the order on a peg is then forced.
    let s = p.counts.len();
    let start: Vec<[u32; 3]> = p.counts.iter().map(|&c| [c, 0, 0]).collect();
    let goal: Vec<[u32; 3]> = p.counts.iter().map(|&c| [0, 0, c]).collect();
    let top = |state: &[[u32; 3]], peg: usize| (0..s).find(|&i| state[i][peg] > 0);

    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0u64)]);
    while let Some((state, d)) = queue.pop_front() {
        if state == goal {
            return Ok(d);
        }
        for from in 0..3 {
            let Some(size) = top(&state, from) else {
                continue;
            };
            for to in (0..3).filter(|&t| t != from) {
                if top(&state, to).is_some_and(|below| below < size) {
                    continue;
                }
                let mut next = state.clone();
                next[size][from] -= 1;
                next[size][to] += 1;
                if seen.insert(next.clone()) {
                    queue.push_back((next, d + 1));
                }
            }
        }
    }
    unreachable!("the goal is always reachable")
}
