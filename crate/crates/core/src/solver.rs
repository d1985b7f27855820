//! Optimal move generation for Hanoi (`alpha = 0`) and Bouncing
//! (`alpha = 1/2`) towers, the non-optimal alternative strategy, and the
//! step-count recurrences with their closed forms.
//!
//! The Bouncing solver is a family of mutually recursive functions indexed
//! by a [`ParityContext`]: `000` is the root call, `100`/`001` move two disks
//! in two steps between pegs of opposite parity, and `010` handles source
//! and target of equal parity. The four contexts with two or more odd pegs
//! are served by their mirror image (every parity flipped), which emits the
//! same peg sequence.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::rules::{Move, MoveTrace, ParityContext, PegId, RuleSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("pegs must be pairwise distinct, got {0}, {1}, {2}")]
    DuplicatePegs(PegId, PegId, PegId),
    #[error("{function}({n}) does not fit in 128 bits")]
    CountOverflow { function: CountFunction, n: usize },
    #[error("unknown solver variant {0:?}")]
    UnknownVariant(String),
    #[error("unknown count function {0:?}")]
    UnknownFunction(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverVariant {
    Hanoi,
    Bouncing,
    /// The Bouncing solver with the `010`/`101` functions replaced by the
    /// two-call, one-step alternative.
    BouncingAlternative,
}

impl SolverVariant {
    pub fn rules(self) -> RuleSet {
        match self {
            SolverVariant::Hanoi => RuleSet::HANOI,
            SolverVariant::Bouncing | SolverVariant::BouncingAlternative => RuleSet::BOUNCING,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SolverVariant::Hanoi => "hanoi",
            SolverVariant::Bouncing => "bouncing",
            SolverVariant::BouncingAlternative => "alt",
        }
    }
}

impl fmt::Display for SolverVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SolverVariant {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hanoi" => Ok(SolverVariant::Hanoi),
            "bouncing" => Ok(SolverVariant::Bouncing),
            "alt" => Ok(SolverVariant::BouncingAlternative),
            other => Err(SolverError::UnknownVariant(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountFunction {
    F000,
    F100,
    F001,
    F010,
    Hanoi,
}

impl CountFunction {
    pub const ALL: [CountFunction; 5] = [
        CountFunction::F000,
        CountFunction::F100,
        CountFunction::F001,
        CountFunction::F010,
        CountFunction::Hanoi,
    ];
}

impl fmt::Display for CountFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountFunction::F000 => "f000",
            CountFunction::F100 => "f100",
            CountFunction::F001 => "f001",
            CountFunction::F010 => "f010",
            CountFunction::Hanoi => "hanoi",
        })
    }
}

impl FromStr for CountFunction {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CountFunction::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| SolverError::UnknownFunction(s.to_string()))
    }
}

fn distinct(a: PegId, b: PegId, c: PegId) -> Result<(), SolverError> {
    if a == b || b == c || a == c {
        return Err(SolverError::DuplicatePegs(a, b, c));
    }
    Ok(())
}

/// Classic recursion `h(n-1, a, c, b); a->c; h(n-1, b, a, c)`.
pub fn solve_hanoi(n: usize, from: PegId, via: PegId, to: PegId) -> Result<MoveTrace, SolverError> {
    distinct(from, via, to)?;
    let mut trace = MoveTrace::new();
    hanoi(n, from, via, to, &mut |m| trace.push(m));
    Ok(trace)
}

fn hanoi(n: usize, a: PegId, b: PegId, c: PegId, sink: &mut impl FnMut(Move)) {
    if n == 0 {
        return;
    }
    hanoi(n - 1, a, c, b, sink);
    sink(Move::between(a, c));
    hanoi(n - 1, b, a, c, sink);
}

struct Emitter<'s, S> {
    alternative: bool,
    sink: &'s mut S,
}

const C000: ParityContext = ParityContext::new(false, false, false);
const C100: ParityContext = ParityContext::new(true, false, false);
const C001: ParityContext = ParityContext::new(false, false, true);
const C010: ParityContext = ParityContext::new(false, true, false);
const C101: ParityContext = ParityContext::new(true, false, true);

impl<S: FnMut(Move)> Emitter<'_, S> {
    fn step(&mut self, a: PegId, c: PegId) {
        (self.sink)(Move::between(a, c));
    }

    fn run(&mut self, ctx: ParityContext, n: usize, a: PegId, b: PegId, c: PegId) {
        let ctx = if ctx.ones() >= 2 { ctx.mirrored() } else { ctx };
        match (ctx.x, ctx.y, ctx.z) {
            (false, false, false) => self.move000(n, a, b, c),
            (true, false, false) => self.move100(n, a, b, c),
            (false, false, true) => self.move001(n, a, b, c),
            _ if self.alternative => self.alt010(n, a, b, c),
            _ => self.move010(n, a, b, c),
        }
    }

    fn move000(&mut self, n: usize, a: PegId, b: PegId, c: PegId) {
        if n > 0 {
            self.run(C100, n - 1, a, c, b);
            self.step(a, c);
            self.run(C001, n - 1, b, a, c);
        }
    }

    fn move100(&mut self, n: usize, a: PegId, b: PegId, c: PegId) {
        match n {
            0 => {}
            1 => self.step(a, c),
            _ => {
                self.run(C100, n - 2, a, c, b);
                self.step(a, c);
                self.step(a, c);
                self.run(C010, n - 2, b, a, c);
            }
        }
    }

    fn move001(&mut self, n: usize, a: PegId, b: PegId, c: PegId) {
        match n {
            0 => {}
            1 => self.step(a, c),
            _ => {
                self.run(C010, n - 2, a, c, b);
                self.step(a, c);
                self.step(a, c);
                self.run(C001, n - 2, b, a, c);
            }
        }
    }

    fn move010(&mut self, n: usize, a: PegId, b: PegId, c: PegId) {
        match n {
            0 => {}
            1 => self.step(a, c),
            2 => {
                self.step(a, b);
                self.step(a, c);
                self.step(b, c);
            }
            _ => {
                self.run(C010, n - 2, a, b, c);
                self.step(a, b);
                self.step(a, b);
                self.run(C010, n - 2, c, b, a);
                self.step(b, c);
                self.step(b, c);
                self.run(C010, n - 2, a, b, c);
            }
        }
    }

    /// `alt010(n) = alt101(n-1, a, c, b); a->c; alt101(n-1, b, a, c)`, and
    /// `alt101` is the same body with the roles of `010` and `101` swapped.
    fn alt010(&mut self, n: usize, a: PegId, b: PegId, c: PegId) {
        match n {
            0 => {}
            1 => self.step(a, c),
            _ => {
                self.run(C101, n - 1, a, c, b);
                self.step(a, c);
                self.run(C101, n - 1, b, a, c);
            }
        }
    }
}

/// Streams the moves of the Bouncing function for `ctx` into `sink`.
///
/// The caller is responsible for the precondition: the fixed-disk parities
/// of `a`, `b`, `c` match `ctx` and the first `n` disks removable from `a`
/// can be inserted on `b` and `c`.
pub fn emit_xyz(
    ctx: ParityContext,
    n: usize,
    a: PegId,
    b: PegId,
    c: PegId,
    sink: &mut impl FnMut(Move),
) -> Result<(), SolverError> {
    distinct(a, b, c)?;
    Emitter {
        alternative: false,
        sink,
    }
    .run(ctx, n, a, b, c);
    Ok(())
}

/// Moves the first `n` removable disks of `a` onto `c`, for the parity
/// context `ctx`. See [`emit_xyz`] for the precondition.
pub fn move_xyz(
    ctx: ParityContext,
    n: usize,
    a: PegId,
    b: PegId,
    c: PegId,
) -> Result<MoveTrace, SolverError> {
    let mut trace = MoveTrace::new();
    emit_xyz(ctx, n, a, b, c, &mut |m| trace.push(m))?;
    Ok(trace)
}

/// The non-optimal take on the `010` context: two recursive calls of size
/// `n - 1` around a single step, alternating between `010` and `101`.
pub fn solve_alternative_010(
    n: usize,
    a: PegId,
    b: PegId,
    c: PegId,
) -> Result<MoveTrace, SolverError> {
    distinct(a, b, c)?;
    let mut trace = MoveTrace::new();
    let mut sink = |m| trace.push(m);
    Emitter {
        alternative: true,
        sink: &mut sink,
    }
    .alt010(n, a, b, c);
    Ok(trace)
}

/// Moves a full tower of `n` disks from `A` to `C` via `B`.
pub fn solve(variant: SolverVariant, n: usize) -> MoveTrace {
    let (a, b, c) = (PegId::A, PegId::B, PegId::C);
    let mut trace = MoveTrace::new();
    let mut sink = |m| trace.push(m);
    match variant {
        SolverVariant::Hanoi => hanoi(n, a, b, c, &mut sink),
        SolverVariant::Bouncing | SolverVariant::BouncingAlternative => Emitter {
            alternative: variant == SolverVariant::BouncingAlternative,
            sink: &mut sink,
        }
        .run(C000, n, a, b, c),
    }
    trace
}

/// Step counts from iterating the recurrences with their base cases.
#[derive(Debug, Clone, Default)]
pub struct CountTable {
    pub f000: Vec<u128>,
    pub f100: Vec<u128>,
    pub f001: Vec<u128>,
    pub f010: Vec<u128>,
}

impl CountTable {
    /// Values for `0..=max_n`, or the first function that overflows.
    pub fn up_to(max_n: usize) -> Result<CountTable, SolverError> {
        let mut t = CountTable::default();
        let overflow = |function, n| SolverError::CountOverflow { function, n };
        for n in 0..=max_n {
            let (f010, f100, f001, f000) = match n {
                0 => (0, 0, 0, 0),
                1 => (1, 1, 1, 1),
                _ => {
                    let f010 = if n == 2 {
                        3
                    } else {
                        t.f010[n - 2]
                            .checked_mul(3)
                            .and_then(|v| v.checked_add(4))
                            .ok_or(overflow(CountFunction::F010, n))?
                    };
                    let f100 = t.f100[n - 2]
                        .checked_add(2)
                        .and_then(|v| v.checked_add(t.f010[n - 2]))
                        .ok_or(overflow(CountFunction::F100, n))?;
                    let f001 = t.f010[n - 2]
                        .checked_add(2)
                        .and_then(|v| v.checked_add(t.f001[n - 2]))
                        .ok_or(overflow(CountFunction::F001, n))?;
                    let f000 = t.f100[n - 1]
                        .checked_add(1)
                        .and_then(|v| v.checked_add(t.f001[n - 1]))
                        .ok_or(overflow(CountFunction::F000, n))?;
                    (f010, f100, f001, f000)
                }
            };
            t.f010.push(f010);
            t.f100.push(f100);
            t.f001.push(f001);
            t.f000.push(f000);
        }
        Ok(t)
    }
}

/// Exact value of `f(n)` from the recurrences.
pub fn count_recurrence(f: CountFunction, n: usize) -> Result<u128, SolverError> {
    if f == CountFunction::Hanoi {
        let mut h: u128 = 0;
        for _ in 0..n {
            h = h
                .checked_mul(2)
                .and_then(|v| v.checked_add(1))
                .ok_or(SolverError::CountOverflow { function: f, n })?;
        }
        return Ok(h);
    }
    let t = CountTable::up_to(n).map_err(|_| SolverError::CountOverflow { function: f, n })?;
    Ok(match f {
        CountFunction::F000 => t.f000[n],
        CountFunction::F100 => t.f100[n],
        CountFunction::F001 => t.f001[n],
        CountFunction::F010 => t.f010[n],
        CountFunction::Hanoi => unreachable!(),
    })
}

/// Exact value of `f(n)` from the closed forms.
///
/// For `f100` at even `n >= 4` this is `(5 * 3^(n/2 - 1) - 1) / 2`, and for
/// `f000` at odd `n >= 5` it is `5 * 3^((n-3)/2)`; both agree with the
/// recurrences (`f100(4) = 7`, `f000(5) = 15`).
pub fn count_closed_form(f: CountFunction, n: usize) -> Result<u128, SolverError> {
    let overflow = SolverError::CountOverflow { function: f, n };
    let pow3 = |k: usize| -> Result<u128, SolverError> {
        u32::try_from(k)
            .ok()
            .and_then(|k| 3u128.checked_pow(k))
            .ok_or(overflow.clone())
    };
    let times = |a: u128, b: u128| a.checked_mul(b).ok_or(overflow.clone());
    let value = match f {
        CountFunction::Hanoi => {
            let p = u32::try_from(n)
                .ok()
                .and_then(|k| 2u128.checked_pow(k))
                .ok_or(overflow.clone())?;
            p - 1
        }
        CountFunction::F010 => match n {
            0 => 0,
            1 => 1,
            2 => 3,
            _ if n % 2 == 1 => pow3(n.div_ceil(2))? - 2,
            _ => times(5, pow3(n / 2 - 1)?)? - 2,
        },
        CountFunction::F100 | CountFunction::F001 => match n {
            0 => 0,
            1 => 1,
            2 => 2,
            3 => 4,
            _ if n % 2 == 1 => (pow3(n.div_ceil(2))? - 1) / 2,
            _ => (times(5, pow3(n / 2 - 1)?)? - 1) / 2,
        },
        CountFunction::F000 => match n {
            0 => 0,
            1 => 1,
            2 => 3,
            3 => 5,
            _ if n.is_multiple_of(2) => pow3(n / 2)?,
            _ => times(5, pow3((n - 3) / 2)?)?,
        },
    };
    Ok(value)
}

/// Length of the alternative `010` strategy: `g(n) = 2 g(n-1) + 1`,
/// `g(0) = 0`.
pub fn alternative_count(n: usize) -> Option<u128> {
    (0..n).try_fold(0u128, |g, _| g.checked_mul(2)?.checked_add(1))
}
