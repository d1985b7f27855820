//! Brute-force cross-checks on the configuration graph.
//!
//! Vertices are the `3^n` placements of `n` disks, encoded densely in base 3
//! with disk `d` as digit `d - 1` (so the largest disk is the most
//! significant digit and numeric order equals lexicographic word order).
//! Edges join states one legal move apart; moves are reversible, so the graph
//! is undirected.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::rules::{Configuration, Move, MoveTrace, PegId, RuleError, RuleSet};
use crate::solver::{self, SolverVariant};

/// Default largest `n` for which a full graph is built (`3^12 = 531441`).
pub const DEFAULT_SCALE_CAP: usize = 12;

/// Hard ceiling regardless of overrides; vertex ids are `u32`.
pub const MAX_SCALE: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("n = {n} exceeds the oracle scale cap of {cap}")]
    ScaleCapExceeded { n: usize, cap: usize },
    #[error("malformed word {word:?}: {reason}")]
    MalformedWord { word: String, reason: String },
    #[error("unsupported graph format {0:?}")]
    UnsupportedFormat(String),
    #[error("constraint pins disk {disk} on {expected} but it stands on {actual}")]
    InconsistentConstraint {
        disk: u32,
        expected: PegId,
        actual: PegId,
    },
    #[error(transparent)]
    Rule(#[from] RuleError),
}

pub struct StateGraph {
    n: usize,
    rules: RuleSet,
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

fn pow3(k: usize) -> u32 {
    3u32.pow(k as u32)
}

fn decode(n: usize, mut code: u32) -> Configuration {
    let placement: Vec<PegId> = (0..n)
        .map(|_| {
            let p = PegId::from_index((code % 3) as usize).expect("base-3 digit");
            code /= 3;
            p
        })
        .collect();
    Configuration::from_placement(&placement).expect("n within MAX_SCALE")
}

fn encode(config: &Configuration) -> u32 {
    config
        .placement()
        .iter()
        .rev()
        .fold(0, |acc, p| acc * 3 + p.index() as u32)
}

/// Builds the configuration graph, refusing `n` above [`DEFAULT_SCALE_CAP`].
pub fn build_graph(n: usize, rules: RuleSet) -> Result<StateGraph, OracleError> {
    build_graph_with_cap(n, rules, DEFAULT_SCALE_CAP)
}

pub fn build_graph_with_cap(
    n: usize,
    rules: RuleSet,
    cap: usize,
) -> Result<StateGraph, OracleError> {
    let cap = cap.min(MAX_SCALE);
    if n > cap {
        return Err(OracleError::ScaleCapExceeded { n, cap });
    }
    let count = pow3(n);
    let neighbors: Vec<Vec<u32>> = (0..count)
        .into_par_iter()
        .map(|code| {
            let config = decode(n, code);
            let mut out: Vec<u32> = config
                .legal_moves(rules)
                .into_iter()
                .map(|m| {
                    let disk = config.moved_disk(m, rules).expect("legal move");
                    let weight = pow3(disk as usize - 1);
                    code - m.from().index() as u32 * weight + m.to().index() as u32 * weight
                })
                .collect();
            out.sort_unstable();
            out
        })
        .collect();
    let mut offsets = Vec::with_capacity(count as usize + 1);
    let mut targets = Vec::new();
    offsets.push(0);
    for list in neighbors {
        targets.extend_from_slice(&list);
        offsets.push(targets.len() as u32);
    }
    Ok(StateGraph {
        n,
        rules,
        offsets,
        targets,
    })
}

impl StateGraph {
    pub fn disk_count(&self) -> usize {
        self.n
    }

    pub fn rules(&self) -> RuleSet {
        self.rules
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        let (lo, hi) = (self.offsets[v as usize], self.offsets[v as usize + 1]);
        &self.targets[lo as usize..hi as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.neighbors(v).len()
    }

    /// Undirected edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.vertex_count() as u32).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    pub fn vertex_of(&self, word: &str) -> Result<u32, OracleError> {
        let malformed = |reason: String| OracleError::MalformedWord {
            word: word.to_string(),
            reason,
        };
        if word.chars().count() != self.n {
            return Err(malformed(format!("expected {} letters", self.n)));
        }
        let config = Configuration::from_word(word).map_err(|e| malformed(e.to_string()))?;
        Ok(encode(&config))
    }

    pub fn configuration(&self, v: u32) -> Configuration {
        decode(self.n, v)
    }

    pub fn word(&self, v: u32) -> String {
        decode(self.n, v).to_word()
    }

    /// Distances from `source` to every vertex (`None` when unreachable).
    pub fn distances_from(&self, source: u32) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source as usize] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u as usize].map(|d| d + 1);
            for &v in self.neighbors(u) {
                if dist[v as usize].is_none() {
                    dist[v as usize] = next;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Move taking vertex `u` to its neighbor `v`.
    fn move_between(&self, u: u32, v: u32) -> Move {
        let (mut a, mut b) = (u, v);
        loop {
            let (da, db) = (a % 3, b % 3);
            if da != db {
                let from = PegId::from_index(da as usize).expect("digit");
                let to = PegId::from_index(db as usize).expect("digit");
                return Move::new(from, to).expect("distinct digits");
            }
            a /= 3;
            b /= 3;
        }
    }
}

/// Length of a shortest move sequence from `s` to `t`, `None` if `t` cannot
/// be reached.
pub fn bfs_distance(g: &StateGraph, s: &str, t: &str) -> Result<Option<usize>, OracleError> {
    let (s, t) = (g.vertex_of(s)?, g.vertex_of(t)?);
    if s == t {
        return Ok(Some(0));
    }
    // Bidirectional search: expand the smaller frontier one full layer at a
    // time; the first layer that touches the other side fixes the distance.
    let len = g.vertex_count();
    let mut seen = [vec![u32::MAX; len], vec![u32::MAX; len]];
    let mut frontier = [vec![s], vec![t]];
    seen[0][s as usize] = 0;
    seen[1][t as usize] = 0;
    let mut depth = [0u32, 0u32];
    while !frontier[0].is_empty() && !frontier[1].is_empty() {
        let side = usize::from(frontier[1].len() < frontier[0].len());
        let other = 1 - side;
        depth[side] += 1;
        let mut best: Option<u32> = None;
        let mut next = Vec::new();
        for &u in &frontier[side] {
            for &v in g.neighbors(u) {
                if seen[other][v as usize] != u32::MAX {
                    let total = depth[side] + seen[other][v as usize];
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                if seen[side][v as usize] == u32::MAX {
                    seen[side][v as usize] = depth[side];
                    next.push(v);
                }
            }
        }
        if let Some(b) = best {
            return Ok(Some(b as usize));
        }
        frontier[side] = next;
    }
    Ok(None)
}

/// Number of distinct shortest paths from `s` to `t` (zero if unreachable).
pub fn shortest_path_count(g: &StateGraph, s: &str, t: &str) -> Result<BigUint, OracleError> {
    let (s, t) = (g.vertex_of(s)?, g.vertex_of(t)?);
    let dist = g.distances_from(s);
    let Some(target) = dist[t as usize] else {
        return Ok(BigUint::ZERO);
    };
    // Process vertices layer by layer; each count is the sum over neighbors
    // one layer closer to the source.
    let mut layers: Vec<Vec<u32>> = vec![Vec::new(); target as usize + 1];
    for (v, d) in dist.iter().enumerate() {
        if let Some(d) = *d {
            if d <= target {
                layers[d as usize].push(v as u32);
            }
        }
    }
    let mut count: Vec<BigUint> = vec![BigUint::ZERO; g.vertex_count()];
    count[s as usize] = BigUint::from(1u32);
    for layer in layers.iter().skip(1) {
        for &v in layer {
            let d = dist[v as usize].expect("layered");
            let mut total = BigUint::ZERO;
            for &u in g.neighbors(v) {
                if dist[u as usize] == Some(d - 1) {
                    total += &count[u as usize];
                }
            }
            count[v as usize] = total;
        }
    }
    Ok(count[t as usize].clone())
}

/// A shortest move sequence from `s` to `t`; at every step the successor
/// with the smallest vertex id is taken, so the result is deterministic.
pub fn shortest_path(g: &StateGraph, s: &str, t: &str) -> Result<Option<MoveTrace>, OracleError> {
    let (s, t) = (g.vertex_of(s)?, g.vertex_of(t)?);
    let to_target = g.distances_from(t);
    let Some(mut remaining) = to_target[s as usize] else {
        return Ok(None);
    };
    let mut trace = MoveTrace::new();
    let mut at = s;
    while remaining > 0 {
        let next = *g
            .neighbors(at)
            .iter()
            .find(|&&v| to_target[v as usize] == Some(remaining - 1))
            .expect("BFS layers are consistent");
        trace.push(g.move_between(at, next));
        at = next;
        remaining -= 1;
    }
    Ok(Some(trace))
}

/// Outcome of checking a solver against the configuration graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverReport {
    pub n: usize,
    pub variant: SolverVariant,
    pub trace_len: usize,
    pub bfs_len: Option<usize>,
    pub shortest_paths: BigUint,
    pub legal: bool,
    pub terminal: bool,
}

impl SolverReport {
    pub fn optimal(&self) -> bool {
        self.bfs_len == Some(self.trace_len)
    }

    pub fn unique(&self) -> bool {
        self.shortest_paths == BigUint::from(1u32)
    }

    pub fn passed(&self) -> bool {
        self.legal && self.terminal && self.optimal() && self.unique()
    }
}

/// Runs the solver for `variant` on `n` disks and compares it with BFS.
pub fn verify_solver(n: usize, variant: SolverVariant) -> Result<SolverReport, OracleError> {
    verify_solver_with_cap(n, variant, DEFAULT_SCALE_CAP)
}

pub fn verify_solver_with_cap(
    n: usize,
    variant: SolverVariant,
    cap: usize,
) -> Result<SolverReport, OracleError> {
    let rules = variant.rules();
    let g = build_graph_with_cap(n, rules, cap)?;
    let trace = solver::solve(variant, n);
    let start = Configuration::tower(n, PegId::A)?;
    let (legal, terminal) = match trace.replay(&start, rules) {
        Ok(end) => (true, end.is_tower_on(PegId::C)),
        Err(_) => (false, false),
    };
    let (s, t) = ("A".repeat(n), "C".repeat(n));
    Ok(SolverReport {
        n,
        variant,
        trace_len: trace.len(),
        bfs_len: bfs_distance(&g, &s, &t)?,
        shortest_paths: shortest_path_count(&g, &s, &t)?,
        legal,
        terminal,
    })
}

/// Disks pinned to given pegs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixedDiskConstraint {
    pins: BTreeMap<u32, PegId>,
}

impl FixedDiskConstraint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pin(mut self, disk: u32, peg: PegId) -> Self {
        self.pins.insert(disk, peg);
        self
    }

    pub fn is_fixed(&self, disk: u32) -> bool {
        self.pins.contains_key(&disk)
    }

    pub fn pins(&self) -> impl Iterator<Item = (u32, PegId)> + '_ {
        self.pins.iter().map(|(&d, &p)| (d, p))
    }
}

/// All states reachable from `start` by legal moves that neither move a
/// fixed disk nor touch a forbidden peg.
///
/// Explores states on the fly, so it is not bounded by the graph scale cap;
/// the reachable set is what limits it.
pub fn restricted_reachability(
    start: &Configuration,
    rules: RuleSet,
    constraint: &FixedDiskConstraint,
    forbidden_pegs: &[PegId],
) -> Result<HashSet<Configuration>, OracleError> {
    for (disk, peg) in constraint.pins() {
        if disk as usize > start.disk_count() || disk == 0 {
            continue;
        }
        let actual = start.peg_of(disk);
        if actual != peg {
            return Err(OracleError::InconsistentConstraint {
                disk,
                expected: peg,
                actual,
            });
        }
    }
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start.clone());
    while let Some(state) = queue.pop_front() {
        for m in state.legal_moves(rules) {
            if forbidden_pegs.contains(&m.from()) || forbidden_pegs.contains(&m.to()) {
                continue;
            }
            let disk = state.moved_disk(m, rules).expect("legal move");
            if constraint.is_fixed(disk) {
                continue;
            }
            let next = state.relocate(disk, m.to());
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

impl FromStr for GraphFormat {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(GraphFormat::Dot),
            "json" => Ok(GraphFormat::Json),
            other => Err(OracleError::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Serialize)]
struct JsonGraph {
    n: usize,
    alpha: String,
    nodes: Vec<String>,
    edges: Vec<[u32; 2]>,
}

/// Serializes the graph with vertices in lexicographic word order. JSON
/// edges index into `nodes`.
pub fn export_graph(g: &StateGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Dot => {
            let mut out = String::from("graph G {\n");
            for v in 0..g.vertex_count() as u32 {
                let _ = writeln!(out, "  \"{}\";", g.word(v));
            }
            for (u, v) in g.edges() {
                let _ = writeln!(out, "  \"{}\" -- \"{}\";", g.word(u), g.word(v));
            }
            out.push_str("}\n");
            out
        }
        GraphFormat::Json => {
            let doc = JsonGraph {
                n: g.disk_count(),
                alpha: g.rules().to_string(),
                nodes: (0..g.vertex_count() as u32).map(|v| g.word(v)).collect(),
                edges: g.edges().map(|(u, v)| [u, v]).collect(),
            };
            let mut out = serde_json::to_string(&doc).expect("plain data");
            out.push('\n');
            out
        }
    }
}
