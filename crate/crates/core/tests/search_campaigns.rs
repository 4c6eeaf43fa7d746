use std::fs;

use crcsel::search::{run_search, run_search_until, EarlyReject, SearchConfig, Status};
use crcsel::Error;

fn p6() -> SearchConfig {
    let mut c = SearchConfig::new(6, 18, 25);
    c.chunk_size = 4;
    c.top_k = 8;
    c
}

fn p11() -> SearchConfig {
    let mut c = SearchConfig::new(11, 31, 1717);
    c.top_k = 5;
    c
}

#[test]
fn hash_is_worker_invariant() {
    for base in [p6(), p11()] {
        let hashes: Vec<String> = [1, 4, 8]
            .into_iter()
            .map(|w| {
                let mut c = base.clone();
                c.workers = w;
                run_search(&c).unwrap().ranked_hash
            })
            .collect();
        assert!(hashes.windows(2).all(|h| h[0] == h[1]), "p={} {hashes:?}", base.p);
    }
}

#[test]
fn resume_at_every_boundary_reproduces_report() {
    let reference = run_search(&p6()).unwrap();
    let chunks = 20usize.div_ceil(4);
    for stop in 1..chunks {
        let dir = tempfile::tempdir().unwrap();
        let mut c = p6();
        c.checkpoint = Some(dir.path().join("ck.jsonl"));
        assert!(run_search_until(&c, Some(stop)).unwrap().is_none());
        c.workers = 3;
        let resumed = run_search(&c).unwrap();
        assert_eq!(resumed.ranked, reference.ranked, "stop after {stop}");
        assert_eq!(resumed.stats, reference.stats);
        assert_eq!(resumed.timings.resumed_candidates, 4 * stop as u64);
    }
}

#[test]
fn finished_checkpoint_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = p6();
    c.checkpoint = Some(dir.path().join("ck.jsonl"));
    let a = run_search(&c).unwrap();
    let b = run_search(&c).unwrap();
    assert_eq!(a.ranked_hash, b.ranked_hash);
    assert_eq!(b.timings.resumed_candidates, 20);
}

#[test]
fn torn_tail_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ck.jsonl");
    let mut c = p6();
    c.checkpoint = Some(path.clone());
    run_search_until(&c, Some(2)).unwrap();
    // drop the last record and half of the one before it
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.pop();
    let torn = lines.pop().unwrap();
    let cut = format!("{}\n{}", lines.join("\n"), &torn[..torn.len() / 2]);
    fs::write(&path, cut).unwrap();
    let r = run_search(&c).unwrap();
    assert_eq!(r.timings.resumed_candidates, 4);
    assert_eq!(r.ranked_hash, run_search(&p6()).unwrap().ranked_hash);
}

#[test]
fn corrupt_or_foreign_checkpoints_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ck.jsonl");
    let mut c = p6();
    c.checkpoint = Some(path.clone());
    run_search_until(&c, Some(2)).unwrap();
    let good = fs::read_to_string(&path).unwrap();

    let mut other = c.clone();
    other.max_len = 24;
    assert!(matches!(run_search(&other), Err(Error::Checkpoint(_))));

    let mut lines: Vec<String> = good.lines().map(String::from).collect();
    lines[2] = "{not json".into();
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    assert!(matches!(run_search(&c), Err(Error::Checkpoint(_))));

    let mut lines: Vec<String> = good.lines().map(String::from).collect();
    lines.swap(2, 3);
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    assert!(matches!(run_search(&c), Err(Error::Checkpoint(_))));

    fs::write(&path, "").unwrap();
    assert!(matches!(run_search(&c), Err(Error::Checkpoint(_))));
}

#[test]
fn early_rejection_keeps_the_top_k() {
    let cases = [
        (p6(), EarlyReject { length_threshold: 18, required_d: 4 }),
        (p11(), EarlyReject { length_threshold: 31 + (1717 - 31) / 8, required_d: 4 }),
    ];
    for (mut base, rule) in cases {
        base.top_k = 2;
        let plain = run_search(&base).unwrap();
        let mut c = base.clone();
        c.early_reject = Some(rule);
        let pruned = run_search(&c).unwrap();
        assert_eq!(plain.ranked, pruned.ranked, "p={}", base.p);
        assert_eq!(plain.ranked_hash, pruned.ranked_hash);
        assert!(pruned.stats.rejected_early > 0, "p={} rule never fired", base.p);
        assert_eq!(
            pruned.stats.evaluated + pruned.stats.rejected_early,
            plain.stats.evaluated
        );
    }
}

#[test]
fn statuses_cover_every_representative() {
    let r = run_search(&p6()).unwrap();
    assert_eq!(r.stats.total, 32);
    assert_eq!(r.stats.after_reciprocal_dedup, 20);
    assert_eq!(r.stats.after_order_filter, 8);
    assert_eq!(r.stats.evaluated, 8);
    let e = crcsel::search::evaluate_candidate("71".parse().unwrap(), &p6()).unwrap();
    assert_eq!(e.status, Status::RejectedReciprocal);
}
