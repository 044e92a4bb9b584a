//! Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.
//! Run with `cargo test --test acceptance -- --nocapture --test-threads 1` to see them in order.

mod common;

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rpq_escape::automata::Color;
use rpq_escape::escape::{
    explore, explore_words, replay, run_play, step, Caps, ExploreReport, GuidedStrategy, PlayTrace, Position,
    RoundRecord, ScriptedStrategy, ShortestStrategy, Strategy, Verdict,
};
use rpq_escape::gadget::{build_grid, check_counterexample, decorate, iso_shadeless};
use rpq_escape::graphs::LabeledGraph;
use rpq_escape::instance::{Instance, Views};
use rpq_escape::ogtp::{compile_reduction, sigma, solve_bruteforce, GridTiling, OgtpInstance, BLACK};
use rpq_escape::rpq::eval;
use rpq_escape::{Alphabet, Nfa, Regex, Word};

use common::{matches, random_graph, random_regex, relational_eval, satisfied_by_relations, sym, walk_eval};

// Budgets, pinned per criterion.
const C1_BUDGET: Duration = Duration::from_secs(10);
const C2_BUDGET: Duration = Duration::from_secs(30);
const C4_BUDGET: Duration = Duration::from_secs(10);
const C6_BUDGET: Duration = Duration::from_secs(60);
const C7_BUDGET: Duration = Duration::from_secs(300);
const C8_BUDGET: Duration = Duration::from_secs(60);
const C9_BUDGET: Duration = Duration::from_secs(30);

const C1_GRAPHS: usize = 200;
const C2_PLAYS: usize = 50;
const C2_MAX_ROUNDS: usize = 8;

fn report(n: usize, title: &str, ok: bool, detail: String) {
    println!("criterion {n:>2} {} {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn within(t: Instant, budget: Duration) -> (bool, String) {
    let e = t.elapsed();
    (e <= budget, format!("{:.2}s of {}s", e.as_secs_f64(), budget.as_secs()))
}

fn solvable() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| {
        compile_reduction(&OgtpInstance::new(&[BLACK], vec![]).unwrap())
            .unwrap()
            .instance()
            .unwrap()
    })
}

fn blocked_ogtp() -> OgtpInstance {
    OgtpInstance::new(&[BLACK], OgtpInstance::all_pairs(&[BLACK])).unwrap()
}

/// Odd moves may add only red edges, even moves only green ones.
fn parity_errors(rounds: &[RoundRecord]) -> usize {
    rounds
        .iter()
        .map(|r| {
            let ink = if r.round % 2 == 1 { Color::Red } else { Color::Green };
            r.added_edges.iter().filter(|e| e.label.color() != Some(ink)).count()
        })
        .sum()
}

// ---------------------------------------------------------------------------
// 1. Query evaluation against an independent oracle.

#[test]
fn criterion_01_rpq_oracle_equivalence() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let pool = ["alpha", "beta", "omega", "A-H-W"].map(sym);
    let mut mismatches = Vec::new();
    let mut walks_checked = 0usize;
    for case in 0..C1_GRAPHS {
        let nlabels = rng.gen_range(1..=4);
        let labels = &pool[..nlabels];
        let n = rng.gen_range(1..=8);
        let edges = rng.gen_range(0..=2 * n);
        let g = random_graph(&mut rng, n, edges, labels);
        let r = random_regex(&mut rng, 4, labels);
        let alphabet = Arc::new(Alphabet::new(labels.iter().copied()).unwrap());
        let nfa = Nfa::compile(&r, alphabet).unwrap();
        let got = eval(&nfa, &g);
        if got != relational_eval(&r, &g) {
            mismatches.push(case);
            continue;
        }
        // Walks up to |V| * |states|, merged on (end vertex, residual language).
        let bound = g.vertex_count() * nfa.state_count();
        let (walked, states) = walk_eval(&r, &g, bound);
        walks_checked += states;
        if walked != got {
            mismatches.push(case);
        }
    }
    let (fast, time) = within(t, C1_BUDGET);
    report(
        1,
        "RPQ oracle equivalence",
        mismatches.is_empty() && fast,
        format!("{C1_GRAPHS} graphs, {walks_checked} walk states, mismatches {mismatches:?}, {time}"),
    );
}

// ---------------------------------------------------------------------------
// 2. Fixpoints of the chase satisfy every constraint.

struct FuzzPlay {
    inst: Instance,
    word: Word,
    rounds: Vec<RoundRecord>,
    fixpoint: Option<LabeledGraph>,
}

fn fuzz_plays() -> &'static Vec<FuzzPlay> {
    static P: OnceLock<Vec<FuzzPlay>> = OnceLock::new();
    P.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        let base = Alphabet::from_tokens(&["alpha", "beta", "omega"]).unwrap();
        let letters: Vec<_> = base.symbols().to_vec();
        let mut out = Vec::new();
        let mut attempts = 0;
        while out.iter().filter(|p: &&FuzzPlay| p.fixpoint.is_some()).count() < C2_PLAYS && attempts < 20_000 {
            attempts += 1;
            let nviews = rng.gen_range(1..=3);
            let good: Vec<Regex> = (0..nviews).map(|_| random_regex(&mut rng, 3, &letters)).collect();
            let len = rng.gen_range(1..=4);
            let word = Word::new((0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect());
            let q0 = Regex::concat_all(word.iter().map(|&s| Regex::lit(s)));
            let views = Views {
                good,
                bad: vec![],
                ugly: vec![],
            };
            let Ok(inst) = Instance::new(base.clone(), views, None, q0) else {
                continue;
            };
            let mut p = Position::initial(&word).unwrap();
            let mut rounds = Vec::new();
            let mut fixpoint = None;
            loop {
                if inst.constraints().requests(&p.graph).is_empty() {
                    fixpoint = Some(p.graph.clone());
                    break;
                }
                if p.round >= C2_MAX_ROUNDS {
                    break;
                }
                let (next, record) = step(&p, inst.constraints(), &mut ShortestStrategy).unwrap();
                rounds.push(record);
                p = next;
            }
            // Fixpoints at round 0 say nothing about the chase.
            if fixpoint.is_some() && rounds.is_empty() {
                continue;
            }
            out.push(FuzzPlay {
                inst,
                word,
                rounds,
                fixpoint,
            });
        }
        out
    })
}

#[test]
fn criterion_02_fixpoints_satisfy_constraints() {
    let t = Instant::now();
    let plays = fuzz_plays();
    let fixpoints: Vec<_> = plays.iter().filter_map(|p| p.fixpoint.as_ref().map(|g| (p, g))).collect();
    let bad: Vec<usize> = fixpoints
        .iter()
        .enumerate()
        .filter(|(_, (p, g))| !satisfied_by_relations(p.inst.constraints(), g))
        .map(|(i, _)| i)
        .collect();
    let max_rounds = fixpoints.iter().map(|(p, _)| p.rounds.len()).max().unwrap_or(0);
    let (fast, time) = within(t, C2_BUDGET);
    report(
        2,
        "chase fixpoints satisfy all constraints",
        fixpoints.len() >= C2_PLAYS && bad.is_empty() && fast,
        format!(
            "{} fixpoints (longest {max_rounds} rounds), violations at {bad:?}, {time}",
            fixpoints.len()
        ),
    );
}

// ---------------------------------------------------------------------------
// 3. Color parity of moves, over the plays of criteria 2 and 5 to 8.

#[test]
fn criterion_03_move_parity() {
    let fuzz: usize = fuzz_plays().iter().map(|p| parity_errors(&p.rounds)).sum();
    let fuzz_edges: usize = fuzz_plays()
        .iter()
        .flat_map(|p| &p.rounds)
        .map(|r| r.added_edges.len())
        .sum();
    let guided = parity_errors(&guided_play().trace.rounds);
    let searches = [&c6_report().0, &c7_report().0, c8_report()];
    let search: usize = searches.iter().map(|r| r.stats.parity_violations).sum();
    report(
        3,
        "odd moves red, even moves green",
        fuzz == 0 && guided == 0 && search == 0,
        format!("fuzz {fuzz} of {fuzz_edges} edges, guided {guided}, searches {search} violations"),
    );
}

// ---------------------------------------------------------------------------
// 4 and 5. The guided play on the solvable m = 2 instance.

const M: usize = 2;

struct GuidedRun {
    trace: PlayTrace,
    result: rpq_escape::escape::PlayResult,
    final_graph: LabeledGraph,
    homomorphism_every_round: bool,
    elapsed: Duration,
}

fn diagonal_word(m: usize) -> Word {
    let mut s = String::from("alpha");
    for _ in 0..m {
        s.push_str(" A-H-C-black B-V-C-black");
    }
    s.push_str(" omega");
    Word::parse(&s).unwrap()
}

fn guided_play() -> &'static GuidedRun {
    static G: OnceLock<GuidedRun> = OnceLock::new();
    G.get_or_init(|| {
        let t = Instant::now();
        let inst = solvable();
        let target = decorate(&build_grid(M), &GridTiling::uniform(M, BLACK)).unwrap();
        let word = diagonal_word(M);
        let mut p = Position::initial(&word).unwrap();
        let mut guide = GuidedStrategy::from_position(target.graph.clone(), &p).unwrap();
        let mut ok = guide.verify(&p) && edge_map_holds(&guide, &p.graph, &target.graph);
        let mut trace = PlayTrace::new(word.clone(), &p.graph);
        let result = loop {
            if inst.is_lost(&p.graph, p.a, p.b).unwrap() {
                break rpq_escape::escape::PlayResult::Lost(p.round);
            }
            if inst.constraints().requests(&p.graph).is_empty() {
                break rpq_escape::escape::PlayResult::WonFixpoint(p.round);
            }
            if p.round >= 10 {
                break rpq_escape::escape::PlayResult::Exhausted(p.round);
            }
            let (next, record) = step(&p, inst.constraints(), &mut guide as &mut dyn Strategy).unwrap();
            trace.rounds.push(record);
            p = next;
            ok &= guide.verify(&p) && edge_map_holds(&guide, &p.graph, &target.graph);
        };
        GuidedRun {
            trace,
            result,
            final_graph: p.graph,
            homomorphism_every_round: ok,
            elapsed: t.elapsed(),
        }
    })
}

/// Independent check that every edge lands on an edge under the guide's map.
fn edge_map_holds(guide: &GuidedStrategy, d: &LabeledGraph, m: &LabeledGraph) -> bool {
    let h = guide.map();
    d.edges().iter().all(|e| match (h.get(&e.src), h.get(&e.dst)) {
        (Some(&x), Some(&y)) => m.contains_edge(&rpq_escape::graphs::Edge::new(x, e.label, y)),
        _ => false,
    })
}

#[test]
fn criterion_04_guided_play_universality() {
    let g = guided_play();
    let won = matches!(g.result, rpq_escape::escape::PlayResult::WonFixpoint(_));
    report(
        4,
        "guided play keeps a homomorphism and wins",
        g.homomorphism_every_round && won && g.elapsed <= C4_BUDGET,
        format!(
            "{}, homomorphism verified each round: {}, {:.2}s",
            g.result,
            g.homomorphism_every_round,
            g.elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_05_forced_grid() {
    let g = guided_play();
    let grid = build_grid(M).graph;
    let f = &g.final_graph;
    let labels: BTreeSet<_> = f.strip_shades().labels();
    // Counting oracle: (m+1)^2 + 2 vertices, 4m(m+1) + 4 edges.
    let (nv, ne) = ((M + 1) * (M + 1) + 2, 4 * M * (M + 1) + 4);
    let ok = g.result == rpq_escape::escape::PlayResult::WonFixpoint(M + 1)
        && f.vertex_count() == nv
        && f.edge_count() == ne
        && labels.len() == 12
        && iso_shadeless(f, &grid)
        && g.elapsed <= C4_BUDGET;
    report(
        5,
        "fixpoint at round m+1 is the grid",
        ok,
        format!(
            "{}, {} vertices, {} edges, {} labels, isomorphic: {}",
            g.result,
            f.vertex_count(),
            f.edge_count(),
            labels.len(),
            iso_shadeless(f, &grid)
        ),
    );
}

// ---------------------------------------------------------------------------
// 6. Bad and ugly initial words lose quickly.

fn bad_and_ugly_words(inst: &Instance, max_len: usize) -> Vec<Word> {
    let v = inst.views();
    let r = Regex::union_all(v.bad.iter().chain(&v.ugly).cloned());
    Nfa::compile(&r, inst.alphabet().clone()).unwrap().enumerate_words(max_len)
}

fn c6_report() -> &'static (ExploreReport, usize, Duration, bool) {
    static R: OnceLock<(ExploreReport, usize, Duration, bool)> = OnceLock::new();
    R.get_or_init(|| {
        let t = Instant::now();
        let words = bad_and_ugly_words(solvable(), 8);
        let report = explore_words(solvable(), &words, Caps::new(8, 3, 2, usize::MAX).unwrap(), None);
        let elapsed = t.elapsed();
        // Spot check with plain plays: every 997th word loses by round 2 under shortest witnesses.
        let sampled = words.iter().step_by(997).all(|w| {
            let r = run_play(solvable(), &mut ShortestStrategy, w, 2).unwrap().result;
            matches!(r, rpq_escape::escape::PlayResult::Lost(k) if k <= 2)
        });
        (report, words.len(), elapsed, sampled)
    })
}

#[test]
fn criterion_06_bad_and_ugly_starts_lose() {
    let (r, n, elapsed, sampled) = c6_report();
    let ok = matches!(r.verdict, Verdict::AllPlaysLose(_))
        && r.stats.lost == *n
        && r.stats.max_loss_round <= 2
        && *sampled
        && *elapsed <= C6_BUDGET;
    report(
        6,
        "bad and ugly starts lose by round 2",
        ok,
        format!(
            "{n} words, {}, max loss round {}, sampled plays agree: {sampled}, {:.2}s",
            r.verdict.keyword(),
            r.stats.max_loss_round,
            elapsed.as_secs_f64()
        ),
    );
}

// ---------------------------------------------------------------------------
// 7. Unsolvable tiling instance: every bounded play loses.

fn c7_report() -> &'static (ExploreReport, Duration, bool) {
    static R: OnceLock<(ExploreReport, Duration, bool)> = OnceLock::new();
    R.get_or_init(|| {
        let ogtp = blocked_ogtp();
        let none = solve_bruteforce(&ogtp, 3).unwrap().is_none();
        let inst = compile_reduction(&ogtp).unwrap().instance().unwrap();
        let t = Instant::now();
        let report = explore(&inst, Caps::new(8, 3, 6, 4).unwrap());
        (report, t.elapsed(), none)
    })
}

#[test]
fn criterion_07_no_tiling_means_all_plays_lose() {
    let (r, elapsed, none) = c7_report();
    let ok = *none && matches!(r.verdict, Verdict::AllPlaysLose(_)) && *elapsed <= C7_BUDGET;
    report(
        7,
        "unsolvable instance gives ALL_PLAYS_LOSE",
        ok,
        format!(
            "solver NONE up to n=3: {none}, {} over {} words, {:.2}s",
            r.verdict,
            r.stats.initial_words,
            elapsed.as_secs_f64()
        ),
    );
}

// ---------------------------------------------------------------------------
// 8. Solvable tiling instance: search finds a counterexample.

fn c8_report() -> &'static ExploreReport {
    static R: OnceLock<ExploreReport> = OnceLock::new();
    R.get_or_init(|| explore(solvable(), Caps::new(8, 3, 6, 4).unwrap()))
}

#[test]
fn criterion_08_tiling_gives_counterexample() {
    let t = Instant::now();
    let r = c8_report();
    let Verdict::Nondeterminate(cert) = &r.verdict else {
        report(8, "solvable instance gives a counterexample", false, r.verdict.to_string());
        return;
    };
    let check = check_counterexample(&cert.graph, solvable(), cert.a, cert.b).unwrap();
    // The certificate is reproducible as an ordinary play.
    let mut script = ScriptedStrategy::new(cert.choices.concat());
    let replayed = run_play(solvable(), &mut script, &cert.initial_word, cert.rounds).unwrap();
    let same = replayed.position.graph == cert.graph
        && replayed.result == rpq_escape::escape::PlayResult::WonFixpoint(cert.rounds);
    let grid = decorate(&build_grid(M), &GridTiling::uniform(M, BLACK)).unwrap();
    let direct = check_counterexample(&grid.graph, solvable(), grid.a, grid.b).unwrap();
    let (fast, time) = within(t, C8_BUDGET);
    report(
        8,
        "solvable instance gives a counterexample",
        check.passed() && same && direct.passed() && fast,
        format!("{}, certificate {check}, replay agrees: {same}, decorated grid {direct}, {time}", r.verdict),
    );
}

// ---------------------------------------------------------------------------
// 9. Shape of the reduction.

#[test]
fn criterion_09_reduction_well_formed() {
    let t = Instant::now();
    let mut problems = Vec::new();
    for shades in [vec![BLACK], vec![BLACK, "grey"], vec![BLACK, "grey", "white"]] {
        for nf in 0..=2 {
            let forbidden = OgtpInstance::all_pairs(&shades).into_iter().take(nf).collect();
            let out = compile_reduction(&OgtpInstance::new(&shades, forbidden).unwrap()).unwrap();
            let (good, bad, ugly) = (out.views.good.len(), out.views.bad.len(), out.views.ugly.len());
            // |Sigma0| = 2 parities * 2 directions * 2 temperatures * |S|.
            let sigma0 = 2 * 2 * 2 * shades.len();
            if good != 8 || bad != 2 + nf || ugly != 2 || out.alphabet.len() != 3 + sigma0 {
                problems.push(format!("{shades:?}/{nf}: {good} {bad} {ugly} {}", out.alphabet.len()));
            }
        }
    }
    // Every bad or ugly word up to length 8 is a word of Q0.
    let inst = compile_reduction(&blocked_ogtp()).unwrap().instance().unwrap();
    let q0 = inst.q0_nfa();
    let mut words = 0usize;
    for (i, view) in inst.views().all().enumerate().skip(8) {
        let nfa = Nfa::compile(view, inst.alphabet().clone()).unwrap();
        for (k, w) in nfa.enumerate_words(8).iter().enumerate() {
            words += 1;
            let ok = q0.accepts(w).unwrap() && (k % 4001 != 0 || matches(inst.q0(), w));
            if !ok {
                problems.push(format!("{} word {w} not in Q0", inst.views().name(i)));
                break;
            }
        }
    }
    let sigma_ok = sigma(Some(&["black".to_string()])).len() == 11;
    let (fast, time) = within(t, C9_BUDGET);
    report(
        9,
        "reduction counts and Q0 coverage",
        problems.is_empty() && sigma_ok && fast,
        format!("{words} bad/ugly words checked, problems {problems:?}, {time}"),
    );
}

// ---------------------------------------------------------------------------
// 10. Replay determinism.

#[test]
fn criterion_10_replay_is_byte_identical() {
    let mut traces: Vec<(&Instance, PlayTrace)> = Vec::new();
    traces.push((solvable(), guided_play().trace.clone()));
    for w in solvable().q0_nfa().enumerate_limited(6, 12) {
        traces.push((solvable(), run_play(solvable(), &mut ShortestStrategy, &w, 4).unwrap().trace));
    }
    for p in fuzz_plays().iter().take(40) {
        traces.push((&p.inst, run_play(&p.inst, &mut ShortestStrategy, &p.word, C2_MAX_ROUNDS).unwrap().trace));
    }
    let mut differing = Vec::new();
    for (i, (inst, trace)) in traces.iter().enumerate() {
        let text = trace.to_jsonl();
        let reread = PlayTrace::from_jsonl(&text).unwrap();
        let again = replay(inst, &reread).unwrap();
        if again.trace.to_jsonl() != text || again.trace != *trace {
            differing.push(i);
        }
    }
    report(
        10,
        "scripted replay reproduces saved traces",
        differing.is_empty(),
        format!("{} traces, differing {differing:?}", traces.len()),
    );
}
