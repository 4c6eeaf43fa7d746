//! Acceptance suite: one PASS/FAIL line per criterion, with the mismatches
//! listed under failing lines. Exits non-zero if any criterion fails.
//!
//! Run with `cargo test -p crcsel --test acceptance`; pass substrings after
//! `--` to select criteria, e.g. `-- table-iii determinism`.

use std::fmt::Debug;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use crcsel::cli::compare;
use crcsel::codec::CodeSpec;
use crcsel::metrics::{cumulative_scores, p_ue, p_ue_dual, p_ue_primal, ChannelModel, Scorecard};
use crcsel::oracle::{brute_force_spectrum, monte_carlo_pue, DEFAULT_SEED};
use crcsel::poly::Generator;
use crcsel::search::{all_generators, run_search, run_search_until, SearchConfig, SearchReport};
use crcsel::spectrum::{distance_profile, dual_weight_distribution, primal_from_dual, Run};

#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn eq<T: PartialEq + Debug>(&mut self, what: &str, got: T, want: T) {
        if got != want {
            self.failures.push(format!("{what}: computed {got:?}, expected {want:?}"));
        }
    }

    fn check(&mut self, what: &str, ok: bool, detail: String) {
        if !ok {
            self.failures.push(format!("{what}: {detail}"));
        }
    }

    fn within(&mut self, what: &str, took: Duration, budget: Duration) {
        self.check(what, took <= budget, format!("took {took:.1?}, budget {budget:?}"));
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }
}

struct Suite {
    filters: Vec<String>,
    passed: usize,
    failed: Vec<&'static str>,
}

impl Suite {
    fn criterion(&mut self, id: &'static str, summary: &str, f: impl FnOnce(&mut Checks)) {
        if !self.filters.is_empty() && !self.filters.iter().any(|s| id.contains(s.as_str())) {
            return;
        }
        let start = Instant::now();
        let mut c = Checks::default();
        f(&mut c);
        let status = if c.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} {id:<24} {summary} ({:.1?})", start.elapsed());
        for m in &c.failures {
            println!("     mismatch: {m}");
        }
        for n in &c.notes {
            println!("     note: {n}");
        }
        if c.failures.is_empty() {
            self.passed += 1;
        } else {
            self.failed.push(id);
        }
    }
}

fn gen(v: u64) -> Generator {
    Generator::new(v).unwrap()
}

fn scorecard(g: u64, l: usize, m: usize) -> (Scorecard, u64, Duration) {
    let start = Instant::now();
    let prof = distance_profile(gen(g), l, m).unwrap();
    (cumulative_scores(&prof), prof.order(), start.elapsed())
}

fn runs(spec: &[(usize, usize, u32)]) -> Vec<Run> {
    spec.iter().map(|&(start, end, d)| Run { start, end, d }).collect()
}

/// Parses printed run lists like `"4,916...8448; 6,60...915; 14,25"` into
/// runs ordered by length. Reversed ranges are read low to high.
fn parse_runs(text: &str) -> Vec<Run> {
    let mut v: Vec<Run> = text
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (d, range) = item.split_once(',').unwrap();
            let (a, b) = range.split_once("...").unwrap_or((range, range));
            let (a, b): (usize, usize) = (a.trim().parse().unwrap(), b.trim().parse().unwrap());
            Run { start: a.min(b), end: a.max(b), d: d.trim().parse().unwrap() }
        })
        .collect();
    v.sort_by_key(|r| r.start);
    v
}

fn row<'a>(report: &'a SearchReport, g: u64) -> Option<&'a crcsel::search::RankedEntry> {
    report
        .ranked
        .iter()
        .find(|e| e.generator.bits() == g || e.reciprocal.bits() == g)
}

fn degree_six_codes() -> Vec<(Generator, usize)> {
    let mut v = Vec::new();
    for g in all_generators(6) {
        let order = g.order().unwrap() as usize;
        for n in 7..=order.min(25) {
            v.push((g, n));
        }
    }
    v
}

fn table_iii(c: &mut Checks) {
    let mut cfg = SearchConfig::new(6, 18, 25);
    cfg.top_k = 32;
    let start = Instant::now();
    let r = run_search(&cfg).unwrap();
    c.within("runtime", start.elapsed(), Duration::from_secs(5));
    c.eq("order-qualified candidates", r.stats.after_order_filter, 8);
    let mut sd: Vec<u64> = r.ranked.iter().map(|e| e.s_d).collect();
    sd.sort();
    c.eq("S_d values", sd, vec![24, 24, 24, 32, 32, 32, 32, 32]);
    let expected = [
        (0x73, 63, None),
        (0x6d, 63, None),
        (0x61, 63, Some(173u64)),
        (0x47, 31, Some(1959)),
        (0x59, 31, Some(1956)),
        (0x7b, 31, Some(1966)),
        (0x7d, 30, Some(1962)),
        (0x4b, 28, Some(1959)),
    ];
    for (g, order, s_ad) in expected {
        match row(&r, g) {
            None => c.check(&format!("{g:x}"), false, "missing from the ranked list".into()),
            Some(e) => {
                c.eq(&format!("n_c({g:x})"), e.order, order);
                if let Some(want) = s_ad {
                    c.eq(&format!("S_Ad({g:x})"), e.s_ad.to_string(), want.to_string());
                }
            }
        }
    }
    let w = r.winner().unwrap();
    c.check("winner", w.generator.bits() == 0x59 || w.reciprocal.bits() == 0x59, format!("got {}", w.generator));
}

fn representative_count(c: &mut Checks) {
    let r = run_search(&SearchConfig::new(6, 18, 25)).unwrap();
    c.eq("representatives after reciprocal dedup", r.stats.after_reciprocal_dedup, 19);
    c.note(format!(
        "{} self-reciprocal of {}; ceil((32 + {})/2) = {}",
        r.stats.self_reciprocal,
        r.stats.total,
        r.stats.self_reciprocal,
        r.stats.after_reciprocal_dedup
    ));
}

fn table_iv(c: &mut Checks) {
    let mut reports = Vec::new();
    for (workers, budget) in [(1, 600), (8, 120)] {
        let mut cfg = SearchConfig::new(11, 31, 1717);
        cfg.workers = workers;
        let start = Instant::now();
        reports.push(run_search(&cfg).unwrap());
        c.within(&format!("runtime at {workers} workers"), start.elapsed(), Duration::from_secs(budget));
    }
    let w = reports[0].winner().unwrap();
    c.check("winner", w.generator.bits() == 0xe0f || w.reciprocal.bits() == 0xe0f, format!("got {}", w.generator));
    c.eq("n_c(e0f)", w.order, 1953);
    c.eq("S_d(e0f)", w.s_d, 5180);
    c.eq("runs(e0f)", w.runs.clone(), runs(&[(31, 149, 4), (150, 1717, 3)]));
    let (card, order, _) = scorecard(0xe21, 31, 1717);
    c.eq("n_c(e21)", order, 2047);
    c.eq("S_d(e21)", card.s_d, 5085);
    c.eq("runs(e21)", card.runs.clone(), runs(&[(31, 54, 4), (55, 1717, 3)]));
    let d54 = card.runs.iter().find(|r| (r.start..=r.end).contains(&54)).map(|r| r.d);
    c.note(format!("e21 d(54) = {d54:?}; the printed runs skip n=54"));
    c.eq("hash at 1 vs 8 workers", &reports[0].ranked_hash, &reports[1].ranked_hash);
}

fn table_v(c: &mut Checks) {
    let want = runs(&[(17, 18, 10), (19, 27, 8), (28, 109, 6), (110, 3840, 4)]);
    let parts: Vec<u64> = want.iter().map(|r| r.len() as u64 * u64::from(r.d)).collect();
    c.eq("20+72+492+14924", (parts.clone(), parts.iter().sum::<u64>()), (vec![20, 72, 492, 14924], 15508));
    let (card, order, took) = scorecard(0x1a2eb, 17, 3840);
    c.within("runtime(1a2eb)", took, Duration::from_secs(300));
    c.eq("n_c(1a2eb)", order, 32767);
    c.eq("S_d(1a2eb)", card.s_d, 15508);
    c.eq("S_d(1a2eb) from runs", card.s_d_from_runs(), 15508);
    c.eq("runs(1a2eb)", card.runs, want);
    let (card, _, took) = scorecard(0x11021, 17, 3840);
    c.within("runtime(11021)", took, Duration::from_secs(300));
    c.eq("S_d(11021)", card.s_d, 15296);
    c.eq("runs(11021)", card.runs, runs(&[(17, 3840, 4)]));
}

fn tables_vi_vii(c: &mut Checks) {
    let expected: [(u64, u64, u64, &str); 6] = [
        (0x118b933, 139230, 35584, "4,916...8448; 6,60...915;8,39...59; 10,29...38;12,25...28"),
        (0x125ae5d, 6241542, 35564, "4,896...8448; 6,64...895;8,43...63; 10,28...42;14,25...27"),
        (0x10f6f6d, 294903, 35548, "4,881...8448; 6,74...880;8,42...73; 10,27...41;14,25...26"),
        (0x1864cfb, 8388607, 34816, "4,542...8448; 6,55...541;8,34...54; 10,28...33;12,26...27;14,25"),
        (0x1800063, 8388607, 33704, "4,29...8448; 6,25...28"),
        (0x1b2b117, 28062, 31109, "3,5135...8448; 4,504...5134;5,503...182; 6,52...181;7,43...51;9,32...42;13,25...31"),
    ];
    for (g, order, s_d, printed) in expected {
        let (card, got_order, took) = scorecard(g, 25, 8448);
        c.within(&format!("runtime({g:x})"), took, Duration::from_secs(45 * 60));
        c.eq(&format!("n_c({g:x})"), got_order, order);
        c.eq(&format!("S_d({g:x})"), card.s_d, s_d);
        c.eq(&format!("runs({g:x})"), card.runs.clone(), parse_runs(printed));
        c.note(format!("{g:x}: n_c {got_order}, S_d {}, took {took:.1?}", card.s_d));
    }
}

fn crc24c_short_interval(c: &mut Checks) {
    for (g, want) in [(0x1b2b117u64, 924u64), (0x118b983, 802)] {
        let (card, _, _) = scorecard(g, 25, 164);
        c.eq(&format!("S_d({g:x}) over [25..164]"), card.s_d, want);
    }
}

fn oracle_equivalence(c: &mut Checks) {
    let start = Instant::now();
    let codes = degree_six_codes();
    for &(g, n) in &codes {
        let brute = brute_force_spectrum(&CodeSpec::new(g, n).unwrap()).unwrap();
        let derived = primal_from_dual(&dual_weight_distribution(g, n).unwrap()).unwrap();
        c.check(&format!("g={g} n={n}"), brute == derived, "spectra differ".into());
    }
    c.within("runtime", start.elapsed(), Duration::from_secs(60));
    c.note(format!("{} (g, n) pairs with n <= n_c", codes.len()));
}

fn pue_forms(c: &mut Checks) {
    let mut worst = 0f64;
    let mut worst_half = 0f64;
    for (g, n) in degree_six_codes() {
        let dual = dual_weight_distribution(g, n).unwrap();
        let primal = primal_from_dual(&dual).unwrap();
        for eps in [0.5, 0.3, 0.1, 0.01] {
            let ch = ChannelModel::new(eps).unwrap();
            let a = p_ue_primal(&primal, ch).unwrap();
            let b = p_ue_dual(&dual, ch).unwrap();
            let rel = ((a - b) / a).abs();
            worst = worst.max(rel);
            c.check(&format!("g={g} n={n} eps={eps}"), rel <= 1e-9, format!("A {a:e} vs B {b:e}"));
        }
        let half = ChannelModel::new(0.5).unwrap();
        let exact = 2f64.powi(-6) - 2f64.powi(-(n as i32));
        for v in [p_ue_primal(&primal, half).unwrap(), p_ue_dual(&dual, half).unwrap()] {
            let rel = ((v - exact) / exact).abs();
            worst_half = worst_half.max(rel);
            c.check(&format!("g={g} n={n} eps=1/2"), rel <= 1e-13, format!("{v:e} vs {exact:e}"));
        }
    }
    c.note(format!("largest A/B relative difference {worst:.2e}; at eps=1/2 {worst_half:.2e}"));
}

fn monte_carlo(c: &mut Checks) {
    let spec = CodeSpec::new(gen(0x61), 24).unwrap();
    let ch = ChannelModel::new(0.01).unwrap();
    let exact = p_ue(&brute_force_spectrum(&spec).unwrap(), ch).unwrap();
    let a = monte_carlo_pue(&spec, ch, 10_000_000, DEFAULT_SEED).unwrap();
    let b = monte_carlo_pue(&spec, ch, 10_000_000, DEFAULT_SEED).unwrap();
    let z = (a.estimate - exact) / a.stderr;
    c.check("within 3 stderr", z.abs() <= 3.0, format!("estimate {:e}, exact {exact:e}, z {z:.2}", a.estimate));
    c.eq("rerun count", b.undetected, a.undetected);
    c.note(format!("{} undetected of {}, estimate {:e}, exact {exact:e}, z {z:.2}", a.undetected, a.trials, a.estimate));
}

fn improvement_quotes(c: &mut Checks) {
    let eps = [ChannelModel::new(1e-12).unwrap()];
    let r = compare(gen(0xe0f), gen(0xe21), 31, 1717, &eps, &[]).unwrap();
    let imp = |n: usize| r.rows.iter().find(|row| row.n == n).unwrap().points[0].improvement_pct.unwrap();
    let low = (55..=149).map(imp).fold(f64::INFINITY, f64::min);
    c.check("about 100% on [55..149]", (low - 100.0).abs() <= 2.0, format!("minimum {low}"));
    let at300 = imp(300);
    c.check("about 50% at 300", (at300 - 50.0).abs() <= 2.0, format!("{at300}"));
    c.note(format!("min on [55..149] {low:.6}%, n=300 {at300:.4}%, n=1000 {:.4}%", imp(1000)));
}

fn kill_and_resume(bin: &Path, dir: &Path) -> Option<String> {
    let ck = dir.join("p11.jsonl");
    let mut child = Command::new(bin)
        .args(["search", "-p", "11", "--min-len", "31", "--max-len", "1717", "--format", "json", "--checkpoint"])
        .arg(&ck)
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .ok()?;
    // kill once at least one chunk is on disk
    let deadline = Instant::now() + Duration::from_secs(120);
    loop {
        let lines = std::fs::read_to_string(&ck).map(|t| t.lines().count()).unwrap_or(0);
        if lines > 1 || Instant::now() > deadline {
            break;
        }
        std::thread::sleep(Duration::from_millis(5));
    }
    child.kill().ok()?;
    child.wait().ok()?;
    let records = std::fs::read_to_string(&ck).ok()?.lines().count() - 1;
    let mut cfg = SearchConfig::new(11, 31, 1717);
    cfg.checkpoint = Some(ck);
    let r = run_search(&cfg).ok()?;
    Some(format!("{}|{records}|{}", r.ranked_hash, r.timings.resumed_candidates))
}

fn determinism(c: &mut Checks) {
    let mut p6 = SearchConfig::new(6, 18, 25);
    p6.chunk_size = 4;
    let p11 = SearchConfig::new(11, 31, 1717);
    for base in [p6.clone(), p11.clone()] {
        let hashes: Vec<String> = [1, 4, 8]
            .into_iter()
            .map(|w| {
                let mut cfg = base.clone();
                cfg.workers = w;
                run_search(&cfg).unwrap().ranked_hash
            })
            .collect();
        c.check(
            &format!("p={} workers 1/4/8", base.p),
            hashes.iter().all(|h| *h == hashes[0]),
            format!("{hashes:?}"),
        );
    }
    let dir = tempfile::tempdir().unwrap();
    let reference6 = run_search(&p6).unwrap().ranked_hash;
    let mut cfg = p6.clone();
    cfg.checkpoint = Some(dir.path().join("p6.jsonl"));
    run_search_until(&cfg, Some(2)).unwrap();
    cfg.workers = 4;
    let resumed = run_search(&cfg).unwrap();
    c.eq("p=6 resume after 2 chunks", resumed.ranked_hash, reference6);

    let reference11 = run_search(&p11).unwrap().ranked_hash;
    match kill_and_resume(Path::new(env!("CARGO_BIN_EXE_crcsel")), dir.path()) {
        None => c.check("p=11 kill/resume", false, "could not run the binary".into()),
        Some(s) => {
            let mut parts = s.split('|');
            let (hash, records, resumed) = (parts.next().unwrap(), parts.next().unwrap(), parts.next().unwrap());
            c.eq("p=11 hash after kill/resume", hash, reference11.as_str());
            c.note(format!("p=11 process killed with {records} records on disk; {resumed} reused"));
        }
    }
}

fn main() {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut s = Suite { filters, passed: 0, failed: Vec::new() };
    s.criterion("table-iii", "p=6 search over [18..25]", table_iii);
    s.criterion("representative-count", "p=6 candidates after reciprocal dedup", representative_count);
    s.criterion("table-iv", "p=11 search over [31..1717], e0f and e21", table_iv);
    s.criterion("table-v", "1a2eb and 11021 over [17..3840]", table_v);
    s.criterion("oracle-equivalence", "MacWilliams vs brute force, all degree-6 codes", oracle_equivalence);
    s.criterion("pue-forms", "A form vs B form and the eps=1/2 closed form", pue_forms);
    s.criterion("monte-carlo", "0x61, n=24, eps=0.01, 10^7 trials", monte_carlo);
    s.criterion("improvement-quotes", "e0f over e21 at eps=1e-12", improvement_quotes);
    s.criterion("determinism", "ranked-list hash across workers and kill/resume", determinism);
    s.criterion("crc24c-short-interval", "CRC24C and 118b983 over [25..164]", crc24c_short_interval);
    s.criterion("tables-vi-vii", "six p=24 generators over [25..8448]", tables_vi_vii);
    println!("\n{} passed, {} failed", s.passed, s.failed.len());
    if !s.failed.is_empty() {
        println!("failed: {}", s.failed.join(", "));
        std::process::exit(1);
    }
}
