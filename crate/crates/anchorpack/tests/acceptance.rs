//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! All comparisons are exact rationals unless a line says otherwise. A
//! criterion that cannot hold as stated keeps a FAIL line marked
//! "unattainable" with its counterexample; the run itself fails only on
//! unexpected FAIL lines or if such a counterexample stops reproducing.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anchorpack::algos::Algo;
use anchorpack::cli;
use anchorpack::generators::{default_eps, gen, Family, GenParams};
use anchorpack::geometry::{format_rational, int, rat, to_f64, validate_packing, Rational};
use anchorpack::greedy::{greedy_pack, GreedyMode};
use anchorpack::io::{parse_instance, parse_packing, write_instance, write_packing};
use anchorpack::oracle::{
    brute_force_mwis, exact_mwis, exact_opt_rect, hanan_candidates, square_candidates_eps, DEFAULT_POINT_LIMIT,
};
use anchorpack::quadtree::{pack_quadtree_with_stats, QuadtreeStats, Rule};
use anchorpack::reach::{check_triple_cover, reach_ll_squares};
use anchorpack::strip::{basic_guarantee, pack_strips_712, pack_strips_basic, paired_guarantee};
use anchorpack::svg::render_svg;
use anchorpack::two_point::{best_two_point_packing, verify_lemma3_grid};
use anchorpack::{Mode, Point, Rect};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Oracle quantization used wherever a criterion names `OPT_eps` without one.
const ORACLE_EPS: (i64, i64) = (1, 10);
const LEMMA3_LIMIT: Duration = Duration::from_secs(60);
const GREEDY_LIMIT: Duration = Duration::from_secs(300);
const SUITE_LIMIT: Duration = Duration::from_secs(15 * 60);

struct Outcome {
    pass: bool,
    detail: String,
    /// Expected red: the criterion is unattainable as stated.
    known_red: bool,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { pass: true, detail: detail.into(), known_red: false }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { pass: false, detail: detail.into(), known_red: false }
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn random(n: usize, seed: u64, den: u32) -> Vec<Point> {
    let params = GenParams { n: Some(n), seed, denominator: den, ..Default::default() };
    gen(Family::Random, &params).expect("random instance").points
}

/// Every family at the sizes it accepts up to `max_n`.
fn family_instances(max_n: usize) -> Vec<(String, Vec<Point>)> {
    let mut out = Vec::new();
    for family in Family::ALL {
        if family == Family::Random {
            continue;
        }
        let epss: Vec<Option<Rational>> = match family {
            Family::Fig2 => vec![Some(rat(1, 16)), Some(rat(1, 5))],
            Family::Fig6 => vec![Some(rat(1, 8)), Some(rat(1, 20))],
            _ => vec![default_eps(family)],
        };
        let sizes: Vec<Option<usize>> = if family.takes_n() { (1..=max_n).map(Some).collect() } else { vec![None] };
        for eps in &epss {
            for n in &sizes {
                let params = GenParams { n: *n, eps: eps.clone(), ..Default::default() };
                if let Ok(inst) = gen(family, &params) {
                    if inst.len() <= max_n.max(12) {
                        out.push((format!("{family}/{}", inst.len()), inst.points));
                    }
                }
            }
        }
    }
    out
}

fn c1_lemma3() -> Outcome {
    let t = Instant::now();
    let fine = verify_lemma3_grid(&rat(1, 48)).expect("step");
    let coarse = verify_lemma3_grid(&rat(1, 6)).expect("step");
    let el = t.elapsed();
    let tight = (rat(1, 3), rat(1, 2), rat(1, 2));
    let ok = fine.min_value >= rat(7, 12)
        && coarse.min_value == rat(7, 12)
        && coarse.argmin == tight
        && el < LEMMA3_LIMIT;
    check(
        ok,
        format!(
            "grid 1/48 min {} over {} points; grid 1/6 min {} at ({}, {}, {}); {:.1?}",
            format_rational(&fine.min_value),
            fine.points_checked,
            format_rational(&coarse.min_value),
            format_rational(&coarse.argmin.0),
            format_rational(&coarse.argmin.1),
            format_rational(&coarse.argmin.2),
            el
        ),
    )
}

fn c2_strips() -> Outcome {
    let mut cases: Vec<Vec<Point>> = family_instances(9).into_iter().map(|(_, p)| p).collect();
    for n in 1..=9 {
        for seed in 0..100 {
            cases.push(random(n, seed, 1 << 16));
        }
    }
    let mut bad = Vec::new();
    for p in &cases {
        let n = p.len();
        let b = pack_strips_basic(p);
        let s = pack_strips_712(p);
        let valid = validate_packing(p, &b, Mode::RectAny).unwrap().is_valid()
            && validate_packing(p, &s, Mode::RectAny).unwrap().is_valid();
        if !valid || b.total_area < basic_guarantee(n) || s.total_area < paired_guarantee(n) {
            bad.push(n);
        }
    }
    check(bad.is_empty(), format!("{} instances, {} below a guarantee", cases.len(), bad.len()))
}

fn c3_upper_bounds() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 1..=3usize {
        let p = gen(Family::Prop1, &GenParams::n(n)).unwrap().points;
        let opt = exact_opt_rect(&p, Mode::RectAny, DEFAULT_POINT_LIMIT).unwrap().value;
        let bound = rat(2, 3) - rat(1, 1 << n) + rat(1, 3 * (1 << (2 * n)));
        ok &= opt <= bound;
        notes.push(format!("prop1 n={n} OPT {}", format_rational(&opt)));
    }
    let center = exact_opt_rect(&[Point::from_ratios((1, 2), (1, 2))], Mode::RectAny, 6).unwrap().value;
    let thirds = gen(Family::Thirds, &GenParams::default()).unwrap().points;
    let th = exact_opt_rect(&thirds, Mode::RectAny, 6).unwrap().value;
    ok &= center == rat(1, 4) && th == rat(4, 9);
    let eps = rat(1, 20);
    let mut sq = Vec::new();
    for n in 1..=4 {
        let p = gen(Family::Prop2, &GenParams::n(n)).unwrap().points;
        let c = square_candidates_eps(&p, &eps, Mode::SquareAny).unwrap();
        sq.push(exact_mwis(&c, usize::MAX).unwrap().value);
    }
    let bound = rat(7, 27);
    ok &= sq[1..].iter().all(|v| *v <= bound);
    // One point at (2/3, 2/3) takes a square of area 4/9 > 7/27, so the
    // square bound cannot hold for n = 1.
    let n1_counterexample = sq[0] > bound;
    ok &= n1_counterexample;
    let detail = format!(
        "{}; OPT center {}, thirds {}; prop2 OPT_eps(1/20) n=1..4: {}; n=1 exceeds 7/27 (single point (2/3,2/3) admits area 4/9), bound holds for n=2..4",
        notes.join(", "),
        format_rational(&center),
        format_rational(&th),
        sq.iter().map(|v| format!("{:.4}", to_f64(v))).collect::<Vec<_>>().join(", ")
    );
    Outcome { pass: false, detail, known_red: ok }
}

fn c4_quadtree() -> Outcome {
    let mut stats = QuadtreeStats::default();
    let mut below = 0usize;
    let mut count = 0usize;
    let mut worst = (int(1), int(1));
    let mut run = |p: &[Point], stats: &mut QuadtreeStats| {
        count += 1;
        for refined in [false, true] {
            let (pk, st) = pack_quadtree_with_stats(p, refined);
            let bound = if refined { rat(5, 32) } else { rat(1, 8) };
            let valid = validate_packing(p, &pk, Mode::SquareAny).unwrap().is_valid();
            if !valid || pk.total_area < bound {
                below += 1;
            }
            let w = if refined { &mut worst.1 } else { &mut worst.0 };
            if pk.total_area < *w {
                *w = pk.total_area.clone();
            }
            if refined {
                stats.merge(&st);
            }
        }
    };
    let dens = [16u32, 64, 256, 1 << 16];
    for i in 0..1000u64 {
        let den = dens[(i % 4) as usize];
        let n = (1 + (i as usize * 7) % 50).min(den as usize + 1);
        run(&random(n, i, den), &mut stats);
    }
    for (_, p) in family_instances(12) {
        run(&p, &mut stats);
    }
    let mut witnesses = 0;
    let mut witness_misses: Vec<String> = Vec::new();
    for entry in fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        if name.starts_with("witness_") {
            let inst = parse_instance(&fs::read_to_string(&path).unwrap(), true).unwrap();
            run(&inst.points, &mut stats);
            witnesses += 1;
            let named = inst.params.get("rule").cloned().unwrap_or_default();
            let (_, own) = pack_quadtree_with_stats(&inst.points, true);
            if !own.rules.iter().any(|(r, s)| r.name() == named && s.fired > 0) {
                witness_misses.push(named);
            }
        }
    }
    let unfired: Vec<&str> = stats.unfired().iter().map(|r| r.name()).collect();
    let ok = below == 0
        && stats.failures() == 0
        && unfired.is_empty()
        && witness_misses.is_empty()
        && stats.truncated_searches == 0;
    check(
        ok,
        format!(
            "{count} instances ({witnesses} rule witnesses); min basic {:.4}, min refined {:.4}; {} of {} table rules fired, {} guarantee misses{}",
            to_f64(&worst.0),
            to_f64(&worst.1),
            Rule::TABLE.len() - unfired.len(),
            Rule::TABLE.len(),
            stats.failures(),
            if unfired.is_empty() { String::new() } else { format!("; unfired {unfired:?}") }
        ) + &if witness_misses.is_empty() { String::new() } else { format!("; witnesses not firing their rule {witness_misses:?}") },
    )
}

fn opt_eps(p: &[Point], eps: &Rational, mode: Mode) -> Rational {
    let c = square_candidates_eps(p, eps, mode).unwrap();
    exact_mwis(&c, usize::MAX).unwrap().value
}

fn c5_greedy_ratios() -> Outcome {
    let t = Instant::now();
    let eps = rat(ORACLE_EPS.0, ORACLE_EPS.1);
    let mut bad = 0;
    let mut min = (f64::MAX, f64::MAX);
    for seed in 0..50u64 {
        let n = 1 + (seed as usize % 5);
        let p = random(n, 1000 + seed, 1 << 16);
        let sq = greedy_pack(&p, GreedyMode::AnyCorner).packing.total_area;
        let ll = greedy_pack(&p, GreedyMode::LowerLeft).packing.total_area;
        let o_sq = opt_eps(&p, &eps, Mode::SquareAny);
        let o_ll = opt_eps(&p, &eps, Mode::SquareLl);
        if sq < rat(9, 47) * &o_sq || ll < rat(1, 3) * &o_ll {
            bad += 1;
        }
        let ratio = |a: &Rational, o: &Rational| if *o > int(0) { to_f64(&(a / o)) } else { f64::MAX };
        min.0 = min.0.min(ratio(&sq, &o_sq));
        min.1 = min.1.min(ratio(&ll, &o_ll));
    }
    let el = t.elapsed();
    check(
        bad == 0 && el < GREEDY_LIMIT,
        format!("50 instances; min greedy-sq/OPT_eps {:.4}, min greedy-ll/OPT_ll,eps {:.4}; {:.1?}", min.0, min.1, el),
    )
}

fn fig6_ratio(eps: Rational) -> (Rational, Rational) {
    let p = gen(Family::Fig6, &GenParams::eps(eps)).unwrap().points;
    let g = greedy_pack(&p, GreedyMode::LowerLeft).packing.total_area;
    let o = opt_eps(&p, &rat(ORACLE_EPS.0, ORACLE_EPS.1), Mode::SquareLl);
    (g, o)
}

fn c6_tightness() -> Outcome {
    let p = gen(Family::Fig2, &GenParams::eps(rat(1, 16))).unwrap().points;
    let g = greedy_pack(&p, GreedyMode::AnyCorner).packing.total_area;
    let o = opt_eps(&p, &rat(ORACLE_EPS.0, ORACLE_EPS.1), Mode::SquareAny);
    let fig2_ok = g == rat(81, 256) && o >= rat(4, 5) && &g / &o <= rat(36, 100);
    let (g6, o6) = fig6_ratio(rat(1, 20));
    let fig6_ok = g6 <= rat(30, 100) && o6 >= rat(65, 100) && &g6 / &o6 <= rat(47, 100);
    let ratios: Vec<Rational> = [8, 16, 32]
        .into_iter()
        .map(|k| {
            let (g, o) = fig6_ratio(rat(1, k));
            g / o
        })
        .collect();
    let monotone = ratios.windows(2).all(|w| w[1] < w[0]) && ratios.iter().all(|r| *r > rat(1, 3));
    check(
        fig2_ok && fig6_ok && monotone,
        format!(
            "fig2: greedy {} OPT_eps {:.4} ratio {:.4}; fig6(1/20): greedy {:.4} OPT_ll,eps {:.4} ratio {:.4}; fig6 ratios at 1/8, 1/16, 1/32: {}",
            format_rational(&g),
            to_f64(&o),
            to_f64(&(&g / &o)),
            to_f64(&g6),
            to_f64(&o6),
            to_f64(&(&g6 / &o6)),
            ratios.iter().map(|r| format!("{:.4}", to_f64(r))).collect::<Vec<_>>().join(" > ")
        ),
    )
}

fn c7_reach() -> Outcome {
    let mut bad_area = 0;
    let mut bad_cover = 0;
    let mut min_ratio = f64::MAX;
    for seed in 0..500u64 {
        let n = 1 + (seed as usize % 20);
        let p = random(n, 5000 + seed, if seed % 2 == 0 { 64 } else { 1 << 16 });
        let g = greedy_pack(&p, GreedyMode::LowerLeft).packing;
        let w = reach_ll_squares(&p);
        if g.total_area.clone() * int(9) < w.area {
            bad_area += 1;
        }
        if !check_triple_cover(&p, &g).holds {
            bad_cover += 1;
        }
        min_ratio = min_ratio.min(to_f64(&(&g.total_area / &w.area)));
    }
    let diag = gen(Family::Diagonal, &GenParams::n(4)).unwrap().points;
    let wd = reach_ll_squares(&diag).area;
    check(
        bad_area == 0 && bad_cover == 0 && wd == rat(1, 4),
        format!(
            "500 instances: {bad_area} below area(W_sq)/9 (min greedy/W_sq {min_ratio:.4}), {bad_cover} triple-cover failures; diagonal n=4 area(W_sq) = {}",
            format_rational(&wd)
        ),
    )
}

fn c8_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut compared = 0;
    let mut mismatch = 0;
    let mut tries = 0;
    while compared < 300 && tries < 5000 {
        tries += 1;
        let n = rng.gen_range(1..=3);
        let den = [4i64, 6, 8, 12][rng.gen_range(0..4)];
        let mut p: Vec<Point> = Vec::new();
        while p.len() < n {
            let q = Point::new(rat(rng.gen_range(0..=den), den), rat(rng.gen_range(0..=den), den));
            if !p.contains(&q) {
                p.push(q);
            }
        }
        let mode = Mode::ALL[rng.gen_range(0..4)];
        let cands = if mode.squares() {
            square_candidates_eps(&p, &rat(rng.gen_range(1..=3), 2), mode).unwrap()
        } else {
            hanan_candidates(&p, mode).unwrap()
        };
        if cands.len() > 18 {
            continue;
        }
        compared += 1;
        if exact_mwis(&cands, usize::MAX).unwrap().value != brute_force_mwis(&cands) {
            mismatch += 1;
        }
    }
    let mut two = 0;
    let mut two_bad = 0;
    for _ in 0..200 {
        let den = [8i64, 12, 60, 97][rng.gen_range(0..4)];
        let p1 = Point::new(rat(rng.gen_range(0..=den), den), int(0));
        let p2 = Point::new(rat(rng.gen_range(0..=den), den), rat(rng.gen_range(0..=den), den));
        if p1 == p2 {
            continue;
        }
        two += 1;
        let best = best_two_point_packing(&Rect::unit(), &p1, &p2).unwrap().packing.total_area;
        let opt = exact_opt_rect(&[p1, p2], Mode::RectAny, 2).unwrap().value;
        if best != opt {
            two_bad += 1;
        }
    }
    check(
        compared >= 300 && mismatch == 0 && two_bad == 0,
        format!(
            "{compared} candidate sets with <= 18 candidates: {mismatch} brute-force mismatches; {two} two-point instances: {two_bad} disagreements with the eight packings"
        ),
    )
}

fn call(args: &[&str], input: &str) -> (i32, String) {
    let mut out = Vec::new();
    let mut argv = vec!["anchorpack"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut input.as_bytes(), &mut out, &mut std::io::sink());
    (code, String::from_utf8(out).unwrap())
}

fn c9_plumbing(started: Instant) -> Outcome {
    let mut files = 0;
    let mut round_trip_bad = Vec::new();
    let mut svg_bad = 0;
    for entry in fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        files += 1;
        let back = if text.contains("\"boxes\"") {
            let f = parse_packing(&text, true).unwrap();
            if render_svg(&f.points, &f.packing) != render_svg(&f.points, &f.packing) {
                svg_bad += 1;
            }
            write_packing(&f)
        } else {
            write_instance(&parse_instance(&text, true).unwrap())
        };
        if back != text {
            round_trip_bad.push(path.file_name().unwrap().to_string_lossy().to_string());
        }
    }
    let fig1 = fs::read_to_string(fixtures().join("fig1.greedy.json")).unwrap();
    let (c1, svg1) = call(&["render"], &fig1);
    let (c2, svg2) = call(&["render"], &fig1);
    let svg_ok = svg_bad == 0 && c1 == 0 && c2 == 0 && svg1 == svg2;

    let (_, inst) = call(&["gen", "--family", "prop1", "--n", "3"], "");
    let (_, pk) = call(&["pack", "--algo", "strip712"], &inst);
    let (valid_code, _) = call(&["verify"], &pk);
    let mut broken = parse_packing(&pk, true).unwrap();
    let grown = broken.packing.boxes[0].rect.dilate(&int(3));
    broken.packing.boxes[0].rect = grown;
    broken.packing = anchorpack::Packing::new(broken.packing.mode, broken.packing.boxes.clone());
    broken.stated_total = broken.packing.total_area.clone();
    let (bad_code, _) = call(&["verify"], &write_packing(&broken));
    let verify_ok = valid_code == cli::EXIT_OK && bad_code == cli::EXIT_VIOLATION;

    // Every algorithm's output goes through verify cleanly.
    let algos_ok = Algo::ALL.iter().all(|a| {
        let (c, out) = call(&["pack", "--algo", a.name()], &inst);
        c == 0 && call(&["verify"], &out).0 == cli::EXIT_OK
    });
    let el = started.elapsed();
    check(
        round_trip_bad.is_empty() && svg_ok && verify_ok && algos_ok && el < SUITE_LIMIT,
        format!(
            "{files} fixtures round-trip{}; SVG deterministic: {svg_ok}; verify exit codes valid={valid_code} broken={bad_code}; acceptance run {:.1?}",
            if round_trip_bad.is_empty() { String::new() } else { format!(" except {round_trip_bad:?}") },
            el
        ),
    )
}

fn main() -> ExitCode {
    let started = Instant::now();
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("lemma3 grid sweep", c1_lemma3),
        ("strip guarantees", c2_strips),
        ("upper-bound constructions", c3_upper_bounds),
        ("quadtree guarantees and rule coverage", c4_quadtree),
        ("greedy ratios", c5_greedy_ratios),
        ("greedy tightness witnesses", c6_tightness),
        ("reach theorems", c7_reach),
        ("oracle self-consistency", c8_oracle),
    ];
    let mut unexpected = 0;
    let mut report = |i: usize, name: &str, o: Outcome| {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let red = if o.known_red { " [unattainable as stated, documented]" } else { "" };
        println!("criterion {i} {name}: {tag}{red} - {}", o.detail);
        if !o.pass && !o.known_red {
            unexpected += 1;
        }
    };
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        report(i + 1, name, f());
    }
    report(9, "plumbing", c9_plumbing(started));
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
