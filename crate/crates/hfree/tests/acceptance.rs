//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; the process fails if any criterion does.

mod common;

use common::{conflict_instance, labeled, pairs};

use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use hfree::certify::{
    verify_embedding, verify_hole, verify_injective_distance2, verify_star_colouring, TerminalSpec,
};
use hfree::harness::{random_subcubic, run_harness, Problem};
use hfree::oracles::{Bounds, Oracle};
use hfree::patterns::{build_pattern, contains_subgraph, find_embedding, is_family_free, Family, PatternId};
use hfree::reductions::{
    build_hole_certificate, c5_walk, gen_2idp_sat, gen_bipartite_star_gadget, build_gadget_star_colouring,
    reduce_3col_to_star3col, reduce_5col_to_c5col, star_colour_subdivision, CnfFormula,
};
use hfree::solvers::{apply_merge_rule, solve_star3col_bipartite, MergeRule, PromiseMode};
use hfree::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |w| w.get())
}

/// Runs `f` on `0..total` across threads; returns the number of indices
/// for which it answered true.
fn par_count(total: u64, f: impl Fn(u64) -> bool + Sync) -> u64 {
    let hits = AtomicUsize::new(0);
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..workers() {
            s.spawn(|| loop {
                let start = next.fetch_add(4096, Ordering::Relaxed) as u64;
                if start >= total {
                    break;
                }
                let n = (start..(start + 4096).min(total)).filter(|&i| f(i)).count();
                hits.fetch_add(n, Ordering::Relaxed);
            });
        }
    });
    hits.into_inner() as u64
}

fn isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.m() == b.m() && find_embedding(a, b).is_some()
}

fn c1_catalog() -> Verdict {
    use PatternId::*;
    let o = Oracle::default();
    let cases = [
        (K(3), true),
        (E1, true),
        (E2, true),
        (E3, true),
        (Flower(3), true),
        (Flower(5), true),
        (Flower(4), false),
        (Flower(6), false),
        (C(5), false),
    ];
    let mut bad = Vec::new();
    for (id, want) in cases {
        let g = build_pattern(id).unwrap();
        if o.c5_critical(&g) != Ok(want) {
            bad.push(id.to_string());
        }
    }
    verdict(bad.is_empty(), format!("{}/9 exact, wrong: {bad:?}", 9 - bad.len()))
}

fn harness_line(problem: Problem, trials: usize, size: usize, seed: u64, bounds: Bounds) -> (bool, String, usize) {
    let r = run_harness(problem, trials, size, seed, &Oracle::new(bounds));
    let detail = format!(
        "{problem} {}/{} agree ({} yes, {} case exhaustions){}",
        r.agree,
        r.trials,
        r.yes,
        r.exhausted,
        r.failures.first().map_or(String::new(), |f| format!(", first failure trial {}: {:?}", f.trial, f.outcome))
    );
    (r.all_agree(), detail, r.exhausted)
}

fn c2_c5() -> Verdict {
    let (ok, d, _) = harness_line(Problem::C5colH3, 500, 12, 2, Bounds::default());
    verdict(ok, d)
}

fn c3_hamilton() -> Verdict {
    let (ok, d, exhausted) = harness_line(Problem::HamiltonH1, 500, 14, 3, Bounds::default());
    verdict(ok && exhausted == 0, d)
}

fn c4_kidp() -> Verdict {
    let (ok1, d1, _) = harness_line(Problem::KidpH1, 300, 12, 4, Bounds::default());
    let (ok2, d2, _) = harness_line(Problem::KidpH2, 300, 12, 5, Bounds::default());
    verdict(ok1 && ok2, format!("{d1}; {d2}"))
}

fn c5_rules() -> Verdict {
    let o = Oracle::default();
    let h2 = Family::of(&[PatternId::H(2)]);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut good, mut yes) = (0, 0);
    let mut rules = [0usize; 2];
    let mut failures = Vec::new();
    for trial in 0..200 {
        let (g, t, site) = conflict_instance(&mut rng, 12);
        let merged = match apply_merge_rule(&g, &site) {
            Ok(m) => m,
            Err(e) => {
                failures.push(format!("trial {trial}: {e}"));
                continue;
            }
        };
        rules[usize::from(merged.rule == MergeRule::Two)] += 1;
        let mt = TerminalSpec::new(t.pairs.iter().map(|&(s, e)| (merged.map[s], merged.map[e])).collect());
        let before = o.disjoint_paths(&g, &t, true).unwrap().is_some();
        let after = o.disjoint_paths(&merged.graph, &mt, true).unwrap().is_some();
        let free = is_family_free(&merged.graph, &h2).is_none();
        yes += usize::from(before);
        if before == after && free {
            good += 1;
        } else {
            failures.push(format!("trial {trial}: verdict {before}->{after}, H2-free {free}\n{}{:?}", g.to_text(), t));
        }
    }
    verdict(
        good == 200,
        format!(
            "{good}/200 preserved ({yes} yes, rule one {}, rule two {}){}",
            rules[0],
            rules[1],
            failures.first().map_or(String::new(), |f| format!(", first failure {f}"))
        ),
    )
}

fn c6_walks() -> Verdict {
    let mut ok = 0;
    for x in 0..5 {
        for y in 0..5 {
            for steps in 4..=12 {
                let Some(w) = c5_walk(x, y, steps) else { continue };
                let stepwise = w.len() == steps + 1
                    && w[0] == x
                    && w[steps] == y
                    && w.windows(2).all(|p| p[0] < 5 && p[1] < 5 && ((p[0] + 1) % 5 == p[1] || (p[1] + 1) % 5 == p[0]));
                ok += usize::from(stepwise);
            }
        }
    }
    let absent = (0..5).filter(|&x| c5_walk(x, x, 3).is_none()).count();
    verdict(ok == 225 && absent == 5, format!("{ok}/225 walks verified, {absent}/5 closed 3-walks absent"))
}

/// Connected graphs on at most four vertices up to isomorphism, plus the
/// graph with no vertices.
fn small_connected() -> Vec<Graph> {
    let mut reps = vec![Graph::empty(0)];
    for n in 1..=4 {
        let mut seen: Vec<Graph> = Vec::new();
        for mask in 0..1u64 << pairs(n) {
            let g = labeled(n, mask);
            if g.is_connected() && !seen.iter().any(|h| isomorphic(h, &g)) {
                seen.push(g);
            }
        }
        reps.extend(seen);
    }
    reps
}

fn c7_subdivision() -> Verdict {
    let graphs = small_connected();
    let mut ok = 0;
    let mut total = 0;
    for g in &graphs {
        for k in 3..=5 {
            total += 1;
            let good = star_colour_subdivision(g, k)
                .is_ok_and(|c| verify_star_colouring(&g.k_subdivide(k), &c, 3).unwrap_or(false));
            ok += usize::from(good);
        }
    }
    verdict(ok == 33 && total == 33, format!("{ok}/{total} over {} graphs (null graph included)", graphs.len()))
}

fn c8_reductions() -> Verdict {
    let o = Oracle::new(Bounds::uniform(40));
    let swept = AtomicUsize::new(0);
    let mismatches = Mutex::new(Vec::new());
    for n in 0..=5 {
        par_count(1 << pairs(n), |mask| {
            let g = labeled(n, mask);
            let five = o.k_colouring(&g, 5).unwrap().is_some();
            let c5 = o.c5_colouring(&reduce_5col_to_c5col(&g)).unwrap().is_some();
            let three = o.k_colouring(&g, 3).unwrap().is_some();
            let star = o.star3col(&reduce_3col_to_star3col(&g)).unwrap().is_some();
            swept.fetch_add(1, Ordering::Relaxed);
            if five != c5 || three != star {
                mismatches.lock().unwrap().push((n, mask));
            }
            false
        });
    }
    let bad = mismatches.into_inner().unwrap();
    let swept = swept.into_inner();
    verdict(bad.is_empty(), format!("{swept} labeled graphs on 0..=5 vertices, {} mismatches {bad:?}", bad.len()))
}

fn c9_gadget() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut lines = Vec::new();
    let mut all = true;
    let mut sat = 0;
    let h4 = Family::of(&[PatternId::H(4)]);
    for _ in 0..5 {
        let phi = CnfFormula::random(rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen());
        let (g, layout) = gen_2idp_sat(&phi, 5).unwrap();
        let (x, y) = (layout.get("x"), layout.get("y"));
        let shape = g.is_subcubic() && g.degree(x) == 2 && g.degree(y) == 2;
        let h4_free = is_family_free(&g, &h4).is_none();
        let has = (1..=3).all(|l| contains_subgraph(&g, PatternId::H(l)).is_some());
        let hole = match phi.brute_force() {
            Some(xi) => {
                sat += 1;
                build_hole_certificate(&phi, &xi, &g, &layout).is_ok_and(|h| verify_hole(&g, x, y, &h))
            }
            None => true,
        };
        all &= shape && h4_free && has && hole;
        lines.push(format!("n{} m{}:{}", phi.n, phi.m(), if shape && h4_free && has && hole { "ok" } else { "bad" }));
    }
    verdict(all, format!("{} ({sat} satisfiable)", lines.join(" ")))
}

fn c10_bipartite_star() -> Verdict {
    let (ok, d, _) = harness_line(Problem::Star3Bip, 300, 14, 10, Bounds::default());
    let mut witnesses = 0;
    for id in [PatternId::AGraph, PatternId::Theta { alpha: 2, i: 4, beta: 3, j: 6 }] {
        let g = build_pattern(id).unwrap();
        if let Ok(d) = solve_star3col_bipartite(&g, PromiseMode::Verify) {
            let w_ok = d.witness.as_ref().is_some_and(|w| {
                w.pattern == id && verify_embedding(&build_pattern(w.pattern).unwrap(), &g, &w.map)
            });
            witnesses += usize::from(!d.yes && w_ok);
        }
    }
    verdict(ok && witnesses == 2, format!("{d}; {witnesses}/2 obstructions answered NO with witness"))
}

fn c11_girth_gadget() -> Verdict {
    let k3 = Graph::complete(3);
    let (out, layout) = gen_bipartite_star_gadget(&k3, 4).unwrap();
    let girth = out.girth();
    let shape = out.is_bipartite() && out.is_subcubic() && girth.is_none_or(|g| g >= 4);
    let base: Vec<usize> = Oracle::default().k_colouring(&k3, 3).unwrap().unwrap().iter().map(|c| c - 1).collect();
    let star = build_gadget_star_colouring(&k3, &base, &out, &layout)
        .is_ok_and(|c| verify_star_colouring(&out, &c, 3).unwrap_or(false));
    verdict(
        shape && star,
        format!("{} vertices, girth {girth:?}, bipartite/subcubic {shape}, star colouring {star}", out.n()),
    )
}

fn c12_injective() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut ok = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=50);
        let g = random_subcubic(n, &mut rng);
        let good = hfree::solvers::greedy_injective_10col(&g).is_ok_and(|c| {
            c.iter().all(|&x| (1..=10).contains(&x)) && verify_injective_distance2(&g, &c).unwrap_or(false)
        });
        ok += usize::from(good);
    }
    verdict(ok == 100, format!("{ok}/100"))
}

fn c13_characterization() -> Verdict {
    let o = Oracle::default();
    let h3 = Family::of(&[PatternId::H(3)]);
    let flowers: Vec<Graph> = (3..=7).step_by(2).map(|k| build_pattern(PatternId::Flower(k)).unwrap()).collect();
    let found = Mutex::new(Vec::new());
    let counter = Mutex::new(Vec::new());
    let mut connected = 0;
    for n in 1..=7 {
        connected += par_count(1 << pairs(n), |mask| {
            let g = labeled(n, mask);
            if !g.is_connected() {
                return false;
            }
            if is_family_free(&g, &h3).is_none() && o.c5_critical(&g).unwrap() {
                let known = isomorphic(&Graph::complete(3), &g) || flowers.iter().any(|f| isomorphic(f, &g));
                found.lock().unwrap().push((n, mask));
                if !known {
                    counter.lock().unwrap().push((n, mask));
                }
            }
            true
        });
    }
    let found = found.into_inner().unwrap();
    let counter = counter.into_inner().unwrap();
    verdict(
        counter.is_empty(),
        format!(
            "{connected} connected labeled graphs, {} critical (all K3 copies: {}), {} counterexamples {counter:?}",
            found.len(),
            found.iter().all(|&(n, _)| n == 3),
            counter.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(usize, fn() -> Verdict); 13] = [
        (1, c1_catalog),
        (2, c2_c5),
        (3, c3_hamilton),
        (4, c4_kidp),
        (5, c5_rules),
        (6, c6_walks),
        (7, c7_subdivision),
        (8, c8_reductions),
        (9, c9_gadget),
        (10, c10_bipartite_star),
        (11, c11_girth_gadget),
        (12, c12_injective),
        (13, c13_characterization),
    ];
    let only: Vec<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect())
        .unwrap_or_default();
    let mut failed = 0;
    for (id, run) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let v = run();
        let secs = start.elapsed().as_secs_f64();
        failed += usize::from(!v.pass);
        println!("criterion {id}: {} [{secs:.1}s] {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
