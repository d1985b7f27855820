//! End-to-end acceptance checks, one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that every line is printed even when
//! the criterion holds; the process exits non-zero if any criterion fails.

use std::collections::HashSet;
use std::process::Command;
use std::time::Instant;

use bouncing_tower::diskpile::{self, PileConfiguration, SizeProfile};
use bouncing_tower::oracle::{self, FixedDiskConstraint};
use bouncing_tower::solver::{self, CountTable};
use bouncing_tower::trace_io::{self, TraceDocument, TraceFormat, TraceHeader, TraceVariant};
use bouncing_tower::{
    Configuration, CountFunction, Move, MoveTrace, ParityContext, PegId, RuleSet, SolverVariant,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const RANDOM_CASES: u32 = 1000;

fn main() {
    let criteria: [Criterion; 10] = [
        ("golden three-disk traces", golden_traces),
        ("table reproduction", table_reproduction),
        ("oracle optimality and uniqueness", oracle_optimality),
        ("hanoi baseline", hanoi_baseline),
        ("closed-form reconciliation", closed_forms),
        ("non-optimal strategy separation", strategy_separation),
        ("two-peg transfer limits", two_peg_limits),
        ("reachability partition", reachability_partition),
        ("disk pile", disk_pile),
        ("property suite", property_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_bouncing-tower"))
        .args(args)
        .env_remove("BOUNCING_TOWER_ORACLE_CAP")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("`{}` exited with {}", args.join(" "), out.status)
    })?;
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn words_along(trace: &MoveTrace, n: usize, rules: RuleSet) -> Result<Vec<String>, String> {
    let mut state = Configuration::tower(n, PegId::A).map_err(|e| e.to_string())?;
    let mut words = Vec::new();
    for m in trace {
        state = state.apply_move(*m, rules).map_err(|e| e.to_string())?;
        words.push(state.to_word());
    }
    Ok(words)
}

fn golden_traces() -> Outcome {
    let cases = [
        (
            "bouncing",
            include_str!("golden/bouncing_n3.txt"),
            RuleSet::BOUNCING,
            &["ABA", "BBA", "BBC", "CBC", "CCC"][..],
        ),
        (
            "hanoi",
            include_str!("golden/hanoi_n3.txt"),
            RuleSet::HANOI,
            &["AAC", "ABC", "ABB", "CBB", "CBA", "CCA", "CCC"][..],
        ),
    ];
    for (variant, golden, rules, states) in cases {
        let out = cli(&[
            "solve",
            "--variant",
            variant,
            "--n",
            "3",
            "--format",
            "text",
        ])?;
        ensure(out == golden, || format!("{variant}: got {out:?}"))?;
        // intermediate states, largest disk first
        let trace = trace_io::parse_text_moves(&out).map_err(|e| e.to_string())?;
        let words = words_along(&trace, 3, rules)?;
        ensure(words == states, || format!("{variant}: states {words:?}"))?;
    }
    Ok("5-move bouncing and 7-move hanoi traces byte-identical to golden files".into())
}

fn table_reproduction() -> Outcome {
    let out = cli(&["table", "--max-n", "15", "--csv"])?;
    let golden = include_str!("golden/table_15.csv");
    ensure(out == golden, || format!("table differs:\n{out}"))?;
    let t = CountTable::up_to(15).map_err(|e| e.to_string())?;
    ensure(
        (t.f010[15], t.f100[15], t.f000[15]) == (6559, 3280, 3645),
        || "n = 15 column".into(),
    )?;
    Ok("all 80 entries match, f010(15)=6559 f100(15)=3280 f000(15)=3645".into())
}

fn oracle_optimality() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    for n in 0..=8 {
        let r = oracle::verify_solver(n, SolverVariant::Bouncing).map_err(|e| e.to_string())?;
        ensure(r.legal && r.terminal, || format!("n={n}: trace not legal"))?;
        if !r.optimal() || !r.unique() {
            problems.push(format!(
                "n={n}: trace {} bfs {:?} shortest paths {}",
                r.trace_len, r.bfs_len, r.shortest_paths
            ));
        }
    }
    let secs = start.elapsed().as_secs();
    ensure(secs < 30, || format!("took {secs}s"))?;
    ensure(problems.is_empty(), || problems.join("; "))?;
    Ok("bfs = trace length with a unique shortest path for n <= 8".into())
}

fn hanoi_baseline() -> Outcome {
    for n in 0..=8 {
        let r = oracle::verify_solver(n, SolverVariant::Hanoi).map_err(|e| e.to_string())?;
        let want = (1usize << n) - 1;
        ensure(r.bfs_len == Some(want) && r.trace_len == want, || {
            format!("n={n}: bfs {:?} trace {}", r.bfs_len, r.trace_len)
        })?;
        ensure(r.unique() && r.legal && r.terminal, || {
            format!("n={n}: {} shortest paths", r.shortest_paths)
        })?;
    }
    Ok("bfs = 2^n - 1 with a unique shortest path for n <= 8".into())
}

fn closed_forms() -> Outcome {
    use CountFunction::{F000, F001, F010, F100};
    for f in [F000, F100, F001, F010] {
        for n in 0..=40 {
            let rec = solver::count_recurrence(f, n).map_err(|e| e.to_string())?;
            let closed = solver::count_closed_form(f, n).map_err(|e| e.to_string())?;
            ensure(rec == closed, || {
                format!("{f}({n}): recurrence {rec} closed {closed}")
            })?;
        }
    }
    for n in (4..=40).step_by(2) {
        let v = solver::count_recurrence(F000, n).map_err(|e| e.to_string())?;
        ensure(v == 3u128.pow(n as u32 / 2), || format!("f000({n}) = {v}"))?;
    }
    let note = include_str!("../../../book/src/counting.md");
    for needle in [
        "f100(4) = 7",
        "f000(5) = 15",
        "`9.5` at `n = 4`",
        "`20` at `n = 5`",
    ] {
        ensure(note.contains(needle), || {
            format!("discrepancy note lacks {needle:?}")
        })?;
    }
    Ok("closed forms = recurrences for n <= 40, f000(2k) = 3^k, misprint note present".into())
}

fn strategy_separation() -> Outcome {
    let (a, b, c) = (PegId::A, PegId::B, PegId::C);
    let ctx: ParityContext = "010".parse().map_err(|e| format!("{e}"))?;
    let mut problems = Vec::new();
    for n in 3..=14 {
        let alt = solver::solve_alternative_010(n, a, b, c)
            .map_err(|e| e.to_string())?
            .len() as u128;
        let best = solver::move_xyz(ctx, n, a, b, c)
            .map_err(|e| e.to_string())?
            .len() as u128;
        let f010 = solver::count_recurrence(CountFunction::F010, n).map_err(|e| e.to_string())?;
        ensure(best == f010, || {
            format!("n={n}: move010 emits {best}, f010 = {f010}")
        })?;
        ensure(alt == (1u128 << n) - 1, || {
            format!("n={n}: alternative length {alt}")
        })?;
        if alt <= f010 {
            problems.push(format!(
                "n={n}: alternative {alt} is not longer than f010 = {f010}"
            ));
        }
    }
    ensure(problems.is_empty(), || {
        format!("{}; lengths are 2^n - 1 throughout", problems.join("; "))
    })?;
    Ok("alternative 2^n - 1 > f010(n) for 3 <= n <= 14".into())
}

/// Whether the `moving` disks staged on `A` can reach `C` with `B` off
/// limits and every other disk pinned.
fn two_peg_transfer(moving: usize, on_a: usize, on_c: usize) -> Result<Option<bool>, String> {
    let rules = RuleSet::BOUNCING;
    let Ok((start, disks)) = Configuration::staged(moving, [on_a, 0, on_c], rules) else {
        return Ok(None);
    };
    let mut pins = FixedDiskConstraint::new();
    let mut goal = start.placement();
    for d in 1..=start.disk_count() as u32 {
        if disks.contains(&d) {
            goal[d as usize - 1] = PegId::C;
        } else {
            pins = pins.pin(d, start.peg_of(d));
        }
    }
    let goal = Configuration::from_placement(&goal).map_err(|e| e.to_string())?;
    let seen = oracle::restricted_reachability(&start, rules, &pins, &[PegId::B])
        .map_err(|e| e.to_string())?;
    Ok(Some(seen.contains(&goal)))
}

fn two_peg_limits() -> Outcome {
    let mut checked = 0;
    let mut attained = HashSet::new();
    for height in 1..=6 {
        for moving in 1..=height {
            for on_a in 0..=height - moving {
                let on_c = height - moving - on_a;
                let Some(reached) = two_peg_transfer(moving, on_a, on_c)? else {
                    continue;
                };
                let same = on_a % 2 == on_c % 2;
                let bound = if same { 1 } else { 2 };
                ensure(!reached || moving <= bound, || {
                    format!(
                        "{moving} disks crossed between pegs with {on_a} and {on_c} fixed disks"
                    )
                })?;
                if reached {
                    attained.insert((same, moving));
                }
                checked += 1;
            }
        }
    }
    ensure(
        attained.contains(&(true, 1)) && attained.contains(&(false, 2)),
        || format!("bounds never attained: {attained:?}"),
    )?;
    Ok(format!(
        "{checked} staged two-peg transfers: same parity <= 1 disk, opposite parity <= 2 disks"
    ))
}

fn reachability_partition() -> Outcome {
    let rules = RuleSet::BOUNCING;
    for n in 5..=8 {
        let g = oracle::build_graph(n, rules).map_err(|e| e.to_string())?;
        let start = "A".repeat(n);
        let mid = n - 3;
        for word in [
            format!("B{}AA", "C".repeat(mid)),
            format!("C{}AA", "B".repeat(mid)),
        ] {
            let d = oracle::bfs_distance(&g, &start, &word).map_err(|e| e.to_string())?;
            ensure(d.is_none(), || format!("n={n}: {word} reachable in {d:?}"))?;
        }

        let pins = FixedDiskConstraint::new()
            .pin(1, PegId::A)
            .pin(2, PegId::B)
            .pin(n as u32, PegId::C);
        let left = Configuration::from_word(&format!("C{}BA", "A".repeat(mid)))
            .map_err(|e| e.to_string())?;
        let right = Configuration::from_word(&format!("C{}A", "B".repeat(mid + 1)))
            .map_err(|e| e.to_string())?;
        let from_left =
            oracle::restricted_reachability(&left, rules, &pins, &[]).map_err(|e| e.to_string())?;
        ensure(!from_left.contains(&right), || {
            format!("n={n}: {left} reaches {right}")
        })?;
    }
    Ok("for 5 <= n <= 8 both isolated states are unreachable and the pinned part splits".into())
}

fn disk_pile() -> Outcome {
    let (a, b, c) = (PegId::A, PegId::B, PegId::C);
    let mut profiles = 0;
    for total in 1..=9 {
        for p in SizeProfile::all_with_total(total) {
            let t = diskpile::solve_diskpile(&p, a, b, c).map_err(|e| e.to_string())?;
            let formula = count_formula(&p);
            ensure(
                t.len() as u128 == formula && diskpile::count_diskpile(&p) == formula,
                || format!("{p}: trace {} formula {formula}", t.len()),
            )?;
            let mut cfg = PileConfiguration::tower(&p, a);
            cfg.replay(&t)
                .map_err(|(i, e)| format!("{p}: move {i}: {e}"))?;
            ensure(cfg.is_tower_on(c), || format!("{p}: not on C"))?;
            if total <= 8 {
                let best = diskpile::diskpile_oracle(&p).map_err(|e| e.to_string())?;
                ensure(u128::from(best) == formula, || {
                    format!("{p}: bfs {best} formula {formula}")
                })?;
            }
            profiles += 1;
        }
    }
    for n in 1..=8u32 {
        for s in 1..=n {
            let with_s: Vec<SizeProfile> = SizeProfile::all_with_total(n)
                .into_iter()
                .filter(|p| p.distinct_sizes() == s as usize)
                .collect();
            let max = with_s.iter().map(count_formula).max().unwrap_or(0);
            let worst = diskpile::worst_case_count(u64::from(n), u64::from(s))
                .map_err(|e| e.to_string())?;
            ensure(max == worst, || {
                format!("n={n} s={s}: max {max} formula {worst}")
            })?;
            let mut counts = vec![1; s as usize];
            counts[0] = n - s + 1;
            let extreme = SizeProfile::new(counts).map_err(|e| e.to_string())?;
            ensure(count_formula(&extreme) == worst, || {
                format!("n={n} s={s}: {extreme} is not a worst case")
            })?;
        }
    }
    Ok(format!(
        "{profiles} profiles: length = sum n_i 2^(s-i), bfs agrees up to 8 disks, worst case matches for n <= 8"
    ))
}

/// `sum n_i 2^(s - i)` evaluated directly.
fn count_formula(p: &SizeProfile) -> u128 {
    let s = p.distinct_sizes() as u32;
    p.counts()
        .iter()
        .zip(1..)
        .map(|(&c, i)| u128::from(c) * 2u128.pow(s - i))
        .sum()
}

fn small_alphas() -> Vec<RuleSet> {
    let mut out: Vec<RuleSet> = Vec::new();
    for q in 1..=12 {
        for p in 0..=q / 2 {
            let r = RuleSet::new(p, q).expect("p/q <= 1/2");
            if !out.contains(&r) {
                out.push(r);
            }
        }
    }
    out
}

fn all_configurations(n: usize) -> Vec<Configuration> {
    (0..3usize.pow(n as u32))
        .map(|mut code| {
            let placement: Vec<PegId> = (0..n)
                .map(|_| {
                    let p = PegId::from_index(code % 3).unwrap();
                    code /= 3;
                    p
                })
                .collect();
            Configuration::from_placement(&placement).unwrap()
        })
        .collect()
}

fn check_reversible(cfg: &Configuration, rules: RuleSet) -> Result<(), String> {
    for m in cfg.legal_moves(rules) {
        let next = cfg.apply_move(m, rules).map_err(|e| e.to_string())?;
        let back = next
            .apply_move(m.reversed(), rules)
            .map_err(|e| format!("{cfg} {m} under {rules}: undo rejected: {e}"))?;
        ensure(&back == cfg, || {
            format!("{cfg} {m} under {rules}: undo gave {back}")
        })?;
    }
    Ok(())
}

fn check_contiguous(n: usize, rules: RuleSet) -> Result<(), String> {
    let order = rules.removal_order(n);
    let mut sorted = order.clone();
    sorted.sort_unstable();
    ensure(sorted == (1..=n as u32).collect::<Vec<_>>(), || {
        format!("n={n} {rules}: {order:?} is not a permutation")
    })?;
    for k in 1..=n {
        let lo = *order[..k].iter().min().unwrap();
        let hi = *order[..k].iter().max().unwrap();
        ensure((hi - lo) as usize + 1 == k, || {
            format!("n={n} {rules}: first {k} removed {:?}", &order[..k])
        })?;
    }
    Ok(())
}

/// The disk a peg gives up is exactly the one it would take back.
fn check_duality(cfg: &Configuration, rules: RuleSet) -> Result<(), String> {
    for p in PegId::ALL {
        let Some(d) = cfg.removal_disk(p, rules) else {
            continue;
        };
        let mut placement = cfg.placement();
        placement[d as usize - 1] = PegId::from_index((p.index() + 1) % 3).unwrap();
        let without = Configuration::from_placement(&placement).map_err(|e| e.to_string())?;
        ensure(without.accepts(p, d, rules), || {
            format!("{cfg} {rules}: {p} does not take disk {d} back")
        })?;
        let others: Vec<u32> = (1..=cfg.disk_count() as u32)
            .filter(|&e| e != d && without.peg_of(e) != p)
            .collect();
        for e in others {
            let mut with_e = without.placement();
            with_e[e as usize - 1] = p;
            let grown = Configuration::from_placement(&with_e).map_err(|err| err.to_string())?;
            if without.accepts(p, e, rules) {
                ensure(grown.removal_disk(p, rules) == Some(e), || {
                    format!("{without} {rules}: {p} accepts {e} but would not release it")
                })?;
            }
        }
    }
    Ok(())
}

fn check_round_trip(doc: &TraceDocument) -> Result<(), String> {
    for format in [TraceFormat::Text, TraceFormat::Json] {
        let text = trace_io::serialize_trace(doc, format);
        let header = (format == TraceFormat::Text).then(|| doc.header.clone());
        let back = trace_io::parse_trace(&text, format, header).map_err(|e| e.to_string())?;
        ensure(&back == doc, || {
            format!("{format:?} round trip changed the document")
        })?;
        ensure(trace_io::serialize_trace(&back, format) == text, || {
            format!("{format:?} reserialization differs")
        })?;
    }
    Ok(())
}

fn arb_alpha() -> impl Strategy<Value = RuleSet> {
    (1u32..=64)
        .prop_flat_map(|q| (0..=q / 2, Just(q)))
        .prop_map(|(p, q)| RuleSet::new(p, q).unwrap())
}

fn arb_configuration() -> impl Strategy<Value = Configuration> {
    prop::collection::vec(0usize..3, 7..=64).prop_map(|v| {
        let placement: Vec<PegId> = v
            .into_iter()
            .map(|i| PegId::from_index(i).unwrap())
            .collect();
        Configuration::from_placement(&placement).unwrap()
    })
}

fn arb_trace() -> impl Strategy<Value = MoveTrace> {
    prop::collection::vec((0usize..3, 1usize..3), 0..200).prop_map(|v| {
        v.into_iter()
            .map(|(f, d)| {
                let from = PegId::from_index(f).unwrap();
                Move::new(from, PegId::from_index((f + d) % 3).unwrap()).unwrap()
            })
            .collect()
    })
}

fn random<S: Strategy>(
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), String>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: RANDOM_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, |v| check(v).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())
}

fn property_suite() -> Outcome {
    let alphas = small_alphas();
    let mut exhaustive = 0usize;
    for n in 0..=6 {
        let configs = all_configurations(n);
        for &rules in &alphas {
            check_contiguous(n, rules)?;
            for cfg in &configs {
                check_reversible(cfg, rules)?;
                check_duality(cfg, rules)?;
                exhaustive += 1;
            }
        }
        for v in [
            SolverVariant::Hanoi,
            SolverVariant::Bouncing,
            SolverVariant::BouncingAlternative,
        ] {
            check_round_trip(&TraceDocument::from_solver(v, n).map_err(|e| e.to_string())?)?;
        }
        for cfg in &configs {
            let header = TraceHeader::new(TraceVariant::Levitating, alphas[3], cfg.clone())
                .map_err(|e| e.to_string())?;
            let moves: MoveTrace = cfg.legal_moves(alphas[3]).into_iter().collect();
            check_round_trip(&TraceDocument::new(header, moves))?;
        }
    }

    random((arb_configuration(), arb_alpha()), |(cfg, rules)| {
        check_reversible(&cfg, rules)?;
        check_duality(&cfg, rules)
    })?;
    random((7usize..=64, arb_alpha()), |(n, rules)| {
        check_contiguous(n, rules)
    })?;
    random(
        (arb_configuration(), arb_alpha(), arb_trace()),
        |(cfg, rules, moves)| {
            let header = TraceHeader::new(TraceVariant::Levitating, rules, cfg)
                .map_err(|e| e.to_string())?;
            check_round_trip(&TraceDocument::new(header, moves))
        },
    )?;
    Ok(format!(
        "{exhaustive} exhaustive (state, alpha) pairs for n <= 6 over {} alphas, {RANDOM_CASES} random cases per property",
        alphas.len()
    ))
}
