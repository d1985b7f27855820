//! Puzzle state, the parametric insertion/removal geometry and move legality.
//!
//! Disks are identified by their size, `1` being the smallest. A peg holding
//! `k` disks exposes exactly one removable disk, the one of rank
//! `floor(alpha * k) + 1` counted from the top, and accepts a new disk only at
//! depth `floor(alpha * (k + 1))`, i.e. with that many disks left above it.
//! `alpha = 0` is the classic Tower of Hanoi, `alpha = 1/2` the Bouncing
//! Tower.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest number of disks a [`Configuration`] can hold.
pub const MAX_DISKS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("alpha must be written as p/q, got {0:?}")]
    MalformedAlpha(String),
    #[error("alpha denominator must be at least 1")]
    ZeroDenominator,
    #[error("alpha {num}/{den} lies outside [0, 1/2]")]
    AlphaOutOfRange { num: u32, den: u32 },
    #[error("cannot remove a disk from an empty peg")]
    EmptyPeg,
    #[error("cannot move {moving} disks off a peg holding {total}")]
    MovingExceedsPeg { total: usize, moving: usize },
    #[error("a move must change pegs, got {0}->{0}")]
    SelfMove(PegId),
    #[error("unknown peg letter {0:?}")]
    UnknownPeg(char),
    #[error("{0} disks exceed the supported maximum of {MAX_DISKS}")]
    TooManyDisks(usize),
    #[error("peg stack {0:?} is not strictly decreasing from bottom to top")]
    UnsortedStack(Vec<u32>),
    #[error("parity bits must be 0 or 1, got {0:?}")]
    MalformedParity(String),
    #[error("the first {moving} disks removed from a {total}-disk tower are not contiguous")]
    NonContiguousBlock { total: usize, moving: usize },
}

/// Why a move could not be applied.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum MoveError {
    #[error("peg {peg} is empty")]
    EmptySource { peg: PegId },
    #[error("disk {disk} cannot be inserted on peg {peg} at depth {depth}")]
    IllegalInsertion { disk: u32, peg: PegId, depth: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PegId {
    A,
    B,
    C,
}

impl PegId {
    pub const ALL: [PegId; 3] = [PegId::A, PegId::B, PegId::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<PegId> {
        Self::ALL.get(i).copied()
    }

    pub fn letter(self) -> char {
        match self {
            PegId::A => 'A',
            PegId::B => 'B',
            PegId::C => 'C',
        }
    }

    pub fn from_letter(c: char) -> Result<PegId, RuleError> {
        match c {
            'A' => Ok(PegId::A),
            'B' => Ok(PegId::B),
            'C' => Ok(PegId::C),
            other => Err(RuleError::UnknownPeg(other)),
        }
    }

    /// The peg that is neither `self` nor `other` (`self` if they are equal).
    pub fn third(self, other: PegId) -> PegId {
        PegId::from_index(3 - self.index() - other.index()).unwrap_or(self)
    }
}

impl fmt::Display for PegId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for PegId {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => PegId::from_letter(c),
            (Some(c), Some(_)) => Err(RuleError::UnknownPeg(c)),
            (None, _) => Err(RuleError::UnknownPeg(' ')),
        }
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The variant parameter `alpha`, an exact rational in `[0, 1/2]`.
///
/// Stored in lowest terms so that equal values compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleSet {
    num: u32,
    den: u32,
}

impl RuleSet {
    /// Classic Tower of Hanoi (`alpha = 0`).
    pub const HANOI: RuleSet = RuleSet { num: 0, den: 1 };
    /// Bouncing Tower (`alpha = 1/2`).
    pub const BOUNCING: RuleSet = RuleSet { num: 1, den: 2 };

    pub fn new(num: u32, den: u32) -> Result<RuleSet, RuleError> {
        if den == 0 {
            return Err(RuleError::ZeroDenominator);
        }
        if u64::from(num) * 2 > u64::from(den) {
            return Err(RuleError::AlphaOutOfRange { num, den });
        }
        let g = gcd(num, den).max(1);
        Ok(RuleSet {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numerator(&self) -> u32 {
        self.num
    }

    pub fn denominator(&self) -> u32 {
        self.den
    }

    fn floor_times(&self, k: usize) -> usize {
        // k <= MAX_DISKS + 1 in practice, but stay exact for any usize.
        ((self.num as u128 * k as u128) / self.den as u128) as usize
    }

    /// Rank, counted from the top, of the only disk that may leave a peg
    /// holding `n` disks.
    pub fn removal_rank(&self, n: usize) -> Result<usize, RuleError> {
        if n == 0 {
            return Err(RuleError::EmptyPeg);
        }
        Ok(self.floor_times(n) + 1)
    }

    /// Number of disks of an `n`-disk peg that stay above a newly inserted disk.
    pub fn insertion_depth(&self, n: usize) -> usize {
        self.floor_times(n + 1)
    }

    /// Sizes of the disks in the order they leave a full `n`-disk tower under
    /// repeated removals. Reversed, it is the order that rebuilds the tower.
    pub fn removal_order(&self, n: usize) -> Vec<u32> {
        // Sizes still on the peg, smallest (top) first.
        let mut peg: Vec<u32> = (1..=n as u32).collect();
        let mut order = Vec::with_capacity(n);
        while !peg.is_empty() {
            let rank = self.floor_times(peg.len()) + 1;
            order.push(peg.remove(rank - 1));
        }
        order
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for RuleSet {
    type Err = RuleError;

    /// Only `p/q` with decimal integers is accepted; `0.5` is rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || RuleError::MalformedAlpha(s.to_string());
        let (p, q) = s.trim().split_once('/').ok_or_else(malformed)?;
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(p) || !digits(q) {
            return Err(malformed());
        }
        let p: u32 = p.parse().map_err(|_| malformed())?;
        let q: u32 = q.parse().map_err(|_| malformed())?;
        RuleSet::new(p, q)
    }
}

/// Parity of the number of fixed disks on a peg holding `total_on_peg`
/// disks of which the first `moving` in removal order are in play.
pub fn fixed_disk_parity(total_on_peg: usize, moving: usize) -> Result<u8, RuleError> {
    if moving > total_on_peg {
        return Err(RuleError::MovingExceedsPeg {
            total: total_on_peg,
            moving,
        });
    }
    Ok(((total_on_peg - moving) % 2) as u8)
}

/// Fixed-disk parities `(x, y, z)` of the source, intermediate and target
/// pegs of a recursive call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParityContext {
    pub x: bool,
    pub y: bool,
    pub z: bool,
}

impl ParityContext {
    pub const fn new(x: bool, y: bool, z: bool) -> Self {
        ParityContext { x, y, z }
    }

    pub fn from_bits(x: u8, y: u8, z: u8) -> Result<Self, RuleError> {
        let bit = |b: u8| match b {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(RuleError::MalformedParity(format!("{x}{y}{z}"))),
        };
        Ok(ParityContext::new(bit(x)?, bit(y)?, bit(z)?))
    }

    /// All eight contexts, in binary order `000, 001, ..., 111`.
    pub fn all() -> impl Iterator<Item = ParityContext> {
        (0u8..8).map(|b| ParityContext::new(b & 4 != 0, b & 2 != 0, b & 1 != 0))
    }

    /// Every parity flipped.
    pub fn mirrored(self) -> Self {
        ParityContext::new(!self.x, !self.y, !self.z)
    }

    pub fn ones(self) -> u32 {
        self.x as u32 + self.y as u32 + self.z as u32
    }

    /// Whether a configuration has these parities for a call moving `moving`
    /// disks from `a` with `b` as intermediate and `c` as target.
    pub fn holds_for(
        self,
        config: &Configuration,
        moving: usize,
        a: PegId,
        b: PegId,
        c: PegId,
    ) -> bool {
        let parity = |p: PegId, m: usize| fixed_disk_parity(config.peg_len(p), m).ok();
        parity(a, moving) == Some(self.x as u8)
            && parity(b, 0) == Some(self.y as u8)
            && parity(c, 0) == Some(self.z as u8)
    }
}

impl fmt::Display for ParityContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.x as u8, self.y as u8, self.z as u8)
    }
}

impl FromStr for ParityContext {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits: Vec<u8> = s.bytes().map(|b| b.wrapping_sub(b'0')).collect();
        match bits.as_slice() {
            [x, y, z] => ParityContext::from_bits(*x, *y, *z)
                .map_err(|_| RuleError::MalformedParity(s.to_string())),
            _ => Err(RuleError::MalformedParity(s.to_string())),
        }
    }
}

/// The disks of one peg, bottom to top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PegStack(Vec<u32>);

impl PegStack {
    pub fn new(disks: Vec<u32>) -> Result<Self, RuleError> {
        if disks.windows(2).any(|w| w[0] <= w[1]) || disks.contains(&0) {
            return Err(RuleError::UnsortedStack(disks));
        }
        Ok(PegStack(disks))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> Option<u32> {
        self.0.last().copied()
    }
}

/// A single step: take the removable disk of `from` and insert it on `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    from: PegId,
    to: PegId,
}

impl Move {
    pub fn new(from: PegId, to: PegId) -> Result<Move, RuleError> {
        if from == to {
            return Err(RuleError::SelfMove(from));
        }
        Ok(Move { from, to })
    }

    /// Callers guarantee `from != to`.
    pub(crate) const fn between(from: PegId, to: PegId) -> Move {
        Move { from, to }
    }

    pub fn from(&self) -> PegId {
        self.from
    }

    pub fn to(&self) -> PegId {
        self.to
    }

    pub fn reversed(&self) -> Move {
        Move {
            from: self.to,
            to: self.from,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

impl FromStr for Move {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (from, to) = s
            .split_once("->")
            .ok_or_else(|| RuleError::UnknownPeg(s.chars().next().unwrap_or(' ')))?;
        Move::new(from.parse()?, to.parse()?)
    }
}

/// A finite sequence of moves. Legality is a property of a trace together
/// with an initial configuration and is checked on replay, not here.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MoveTrace(Vec<Move>);

impl MoveTrace {
    pub fn new() -> Self {
        MoveTrace(Vec::new())
    }

    pub fn push(&mut self, m: Move) {
        self.0.push(m);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn moves(&self) -> &[Move] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Move> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<Move> {
        self.0
    }

    /// Applies every move in turn, stopping at the first illegal one.
    pub fn replay(
        &self,
        start: &Configuration,
        rules: RuleSet,
    ) -> Result<Configuration, (usize, MoveError)> {
        let mut state = start.clone();
        for (i, m) in self.0.iter().enumerate() {
            state = state.apply_move(*m, rules).map_err(|e| (i, e))?;
        }
        Ok(state)
    }
}

impl From<Vec<Move>> for MoveTrace {
    fn from(moves: Vec<Move>) -> Self {
        MoveTrace(moves)
    }
}

impl FromIterator<Move> for MoveTrace {
    fn from_iter<I: IntoIterator<Item = Move>>(iter: I) -> Self {
        MoveTrace(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a MoveTrace {
    type Item = &'a Move;
    type IntoIter = std::slice::Iter<'a, Move>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Which peg each of the disks `1..=n` stands on.
///
/// Each peg is kept as a bitmask (bit `d - 1` set when disk `d` is there);
/// the stacking order on a peg is forced by the sizes, so every assignment
/// of disks to pegs is a legal state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    n: usize,
    pegs: [u64; 3],
}

impl Configuration {
    /// `n` disks all stacked on `peg`.
    pub fn tower(n: usize, peg: PegId) -> Result<Self, RuleError> {
        if n > MAX_DISKS {
            return Err(RuleError::TooManyDisks(n));
        }
        let mut pegs = [0u64; 3];
        pegs[peg.index()] = full_mask(n);
        Ok(Configuration { n, pegs })
    }

    /// `placement[i]` is the peg of disk `i + 1`.
    pub fn from_placement(placement: &[PegId]) -> Result<Self, RuleError> {
        if placement.len() > MAX_DISKS {
            return Err(RuleError::TooManyDisks(placement.len()));
        }
        let mut pegs = [0u64; 3];
        for (i, p) in placement.iter().enumerate() {
            pegs[p.index()] |= 1 << i;
        }
        Ok(Configuration {
            n: placement.len(),
            pegs,
        })
    }

    /// Parses the canonical word: letter `i` names the peg of the
    /// `(i + 1)`-th largest disk.
    pub fn from_word(word: &str) -> Result<Self, RuleError> {
        let mut placement = word
            .chars()
            .map(PegId::from_letter)
            .collect::<Result<Vec<_>, _>>()?;
        placement.reverse();
        Configuration::from_placement(&placement)
    }

    pub fn to_word(&self) -> String {
        (1..=self.n as u32)
            .rev()
            .map(|d| self.peg_of(d).letter())
            .collect()
    }

    pub fn disk_count(&self) -> usize {
        self.n
    }

    /// Peg of disk `disk` (`1..=n`).
    ///
    /// # Panics
    /// If `disk` is not in `1..=n`.
    pub fn peg_of(&self, disk: u32) -> PegId {
        assert!(disk >= 1 && disk as usize <= self.n, "no disk {disk}");
        let bit = 1u64 << (disk - 1);
        PegId::ALL
            .into_iter()
            .find(|p| self.pegs[p.index()] & bit != 0)
            .expect("every disk sits on a peg")
    }

    pub fn placement(&self) -> Vec<PegId> {
        (1..=self.n as u32).map(|d| self.peg_of(d)).collect()
    }

    pub fn peg_len(&self, peg: PegId) -> usize {
        self.pegs[peg.index()].count_ones() as usize
    }

    pub fn peg_mask(&self, peg: PegId) -> u64 {
        self.pegs[peg.index()]
    }

    /// The disks on `peg`, bottom to top.
    pub fn stack(&self, peg: PegId) -> PegStack {
        let mask = self.pegs[peg.index()];
        PegStack(
            (1..=self.n as u32)
                .rev()
                .filter(|d| mask & (1 << (d - 1)) != 0)
                .collect(),
        )
    }

    pub fn is_tower_on(&self, peg: PegId) -> bool {
        self.pegs[peg.index()] == full_mask(self.n)
    }

    /// The disk that a move out of `peg` would take, if any.
    pub fn removal_disk(&self, peg: PegId, rules: RuleSet) -> Option<u32> {
        let mut mask = self.pegs[peg.index()];
        let rank = rules.removal_rank(mask.count_ones() as usize).ok()?;
        for _ in 1..rank {
            mask &= mask - 1;
        }
        Some(mask.trailing_zeros() + 1)
    }

    /// Whether `disk`, currently not on `peg`, may be inserted there.
    pub fn accepts(&self, peg: PegId, disk: u32, rules: RuleSet) -> bool {
        let mask = self.pegs[peg.index()] & !(1u64 << (disk - 1));
        let smaller = (mask & ((1u64 << (disk - 1)) - 1)).count_ones() as usize;
        smaller == rules.insertion_depth(mask.count_ones() as usize)
    }

    fn check_move(&self, m: Move, rules: RuleSet) -> Result<u32, MoveError> {
        let disk = self
            .removal_disk(m.from, rules)
            .ok_or(MoveError::EmptySource { peg: m.from })?;
        if !self.accepts(m.to, disk, rules) {
            return Err(MoveError::IllegalInsertion {
                disk,
                peg: m.to,
                depth: rules.insertion_depth(self.peg_len(m.to)),
            });
        }
        Ok(disk)
    }

    /// All legal moves, ordered by `(from, to)`.
    pub fn legal_moves(&self, rules: RuleSet) -> Vec<Move> {
        let mut moves = Vec::with_capacity(6);
        for from in PegId::ALL {
            let Some(disk) = self.removal_disk(from, rules) else {
                continue;
            };
            for to in PegId::ALL {
                if to != from && self.accepts(to, disk, rules) {
                    moves.push(Move::between(from, to));
                }
            }
        }
        moves
    }

    pub fn is_legal(&self, m: Move, rules: RuleSet) -> bool {
        self.check_move(m, rules).is_ok()
    }

    /// Moves `disk` to `to` without checking any rule.
    pub(crate) fn relocate(&self, disk: u32, to: PegId) -> Configuration {
        let bit = 1u64 << (disk - 1);
        let mut pegs = self.pegs;
        for p in &mut pegs {
            *p &= !bit;
        }
        pegs[to.index()] |= bit;
        Configuration { n: self.n, pegs }
    }

    pub fn apply_move(&self, m: Move, rules: RuleSet) -> Result<Configuration, MoveError> {
        let disk = self.check_move(m, rules)?;
        Ok(self.relocate(disk, m.to))
    }

    /// Undoes `m`, given the configuration reached right after it.
    pub fn inverse_move(&self, m: Move, rules: RuleSet) -> Result<Configuration, MoveError> {
        self.apply_move(m.reversed(), rules)
    }

    /// Builds a state for a recursive call moving `moving` disks from `A` to
    /// `C` while `fixed[p]` disks stay put on peg `p`.
    ///
    /// The moving disks are the first `moving` in the removal order of `A`,
    /// and the fixed disks of `B` and `C` straddle their insertion points so
    /// that every moving disk can be inserted there. Returns the state and
    /// the moving disks in removal order.
    pub fn staged(
        moving: usize,
        fixed: [usize; 3],
        rules: RuleSet,
    ) -> Result<(Configuration, Vec<u32>), RuleError> {
        let total = moving + fixed.iter().sum::<usize>();
        if total > MAX_DISKS {
            return Err(RuleError::TooManyDisks(total));
        }
        let a_len = moving + fixed[0];
        let order = rules.removal_order(a_len);
        let block = &order[..moving];
        let (lo, hi) = match (block.iter().min(), block.iter().max()) {
            (Some(&lo), Some(&hi)) => (lo as usize, hi as usize),
            _ => (a_len + 1, a_len),
        };
        if moving > 0 && hi + 1 - lo != moving {
            return Err(RuleError::NonContiguousBlock {
                total: a_len,
                moving,
            });
        }
        let a_small = if moving > 0 { lo - 1 } else { fixed[0] };
        let a_large = fixed[0] - a_small;
        let b_small = rules.insertion_depth(fixed[1]);
        let c_small = rules.insertion_depth(fixed[2]);

        // Sizes from smallest up: fixed disks below the moving block, the
        // block itself, then fixed disks above it.
        let mut placement = Vec::with_capacity(total);
        placement.extend(std::iter::repeat_n(PegId::B, b_small));
        placement.extend(std::iter::repeat_n(PegId::C, c_small));
        placement.extend(std::iter::repeat_n(PegId::A, a_small));
        placement.extend(std::iter::repeat_n(PegId::A, moving));
        placement.extend(std::iter::repeat_n(PegId::A, a_large));
        placement.extend(std::iter::repeat_n(PegId::B, fixed[1] - b_small));
        placement.extend(std::iter::repeat_n(PegId::C, fixed[2] - c_small));

        let config = Configuration::from_placement(&placement)?;
        // Relative rank r on A maps to absolute size offset by the disks of
        // B and C below the block.
        let shift = (b_small + c_small) as u32;
        let moving_disks = block.iter().map(|&r| r + shift).collect();
        Ok((config, moving_disks))
    }

    /// Disk moved by `m`, if the move is legal here.
    pub fn moved_disk(&self, m: Move, rules: RuleSet) -> Result<u32, MoveError> {
        self.check_move(m, rules)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_word())
    }
}

impl FromStr for Configuration {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Configuration::from_word(s)
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}
