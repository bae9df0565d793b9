//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use hexad_core::catalog;
use hexad_core::design::{develop, double, verify_twbd};
use hexad_core::{
    automorphism_group, canonical_certificate, classify, Classification, CoverMatrix, GdType, PermGroup, Permutation,
    SetSystem,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

type Check = std::result::Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn hexad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hexad")).args(args).output().expect("binary runs")
}

fn ensure(ok: bool, failures: &mut Vec<String>, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

fn verdict(failures: Vec<String>, summary: String) -> Check {
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(failures.join("; "))
    }
}

fn materialize(id: &str) -> SetSystem {
    catalog::materialize(id).unwrap_or_else(|e| panic!("{id}: {e}"))
}

fn cert_hex(s: &SetSystem) -> String {
    canonical_certificate(s).to_hex()
}

fn ids(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}_{i}")).collect()
}

// 1 ------------------------------------------------------------------------

fn catalog_integrity() -> Check {
    let start = Instant::now();
    let mut failures = Vec::new();
    let tetrads = BTreeMap::from([(16, 60), (20, 185), (22, 275), (26, 520), (28, 679)]);
    let reports = catalog::verify_all();
    ensure(reports.len() == 33, &mut failures, || format!("{} entries", reports.len()));
    for r in &reports {
        ensure(r.passed(), &mut failures, || format!("{} fails verification", r.id));
        ensure(r.balance.holds, &mut failures, || format!("{} is not a 3-(v,{{4,6}},1) design", r.id));
        ensure(r.hexad_count == r.v, &mut failures, || format!("{} has {} hexads", r.id, r.hexad_count));
        ensure(Some(&r.tetrad_count) == tetrads.get(&r.v), &mut failures, || {
            format!("{} has {} tetrads", r.id, r.tetrad_count)
        });
    }
    let o = hexad(&["catalog", "verify"]);
    ensure(o.status.success(), &mut failures, || format!("catalog verify exit {:?}", o.status.code()));
    ensure(String::from_utf8_lossy(&o.stdout).contains("33/33 entries pass"), &mut failures, || {
        "catalog verify did not report 33/33".into()
    });
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(60), &mut failures, || format!("took {elapsed:?}"));
    verdict(failures, format!("33/33 entries, tetrads 60/185/275/520/679, {:.1}s", elapsed.as_secs_f64()))
}

// 2 ------------------------------------------------------------------------

fn classification_reproduction() -> Check {
    let mut failures = Vec::new();
    let mut label = |id: &str, want: &str| -> Classification {
        let c = classify(&materialize(id).hexads());
        ensure(c.label() == want, &mut failures, || format!("{id}: {} (want {want})", c.label()));
        c
    };
    label("D16_1", "2-(16,6,2) biplane");
    label("D20_1", "sbp(20,6)");
    label("X20_2", "not a 2-class symmetric design");
    label("X20_3", "not a 2-class symmetric design");
    for id in ids("D22", 1..=3) {
        label(&id, "sbp(22,6)");
    }
    label("D26_1", "(26,6;1,2;1,2)");
    let d26: Vec<(String, Classification)> =
        ids("D26", 2..=7).into_iter().map(|id| (id.clone(), label(&id, "(26,6;1,6;0,2)"))).collect();
    let d28: Vec<(String, Classification)> =
        ids("D28", 1..=14).into_iter().map(|id| (id.clone(), label(&id, "(28,6;1,2;1,2)"))).collect();
    label("D28_15", "sbp(28,6)");

    // Mismatch text -> entries showing it, so one shared discrepancy is one message.
    let mut mismatches: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut scheme = |id: &str, c: &Classification, n: (usize, usize), p1: [[usize; 2]; 2], p2: [[usize; 2]; 2], gd| {
        let mut push = |msg: String| mismatches.entry(msg).or_default().push(id.to_string());
        match c.scheme {
            None => push("no association scheme".into()),
            Some(s) => {
                if (s.n1, s.n2) != n {
                    push(format!("n1,n2 = {},{} (printed {},{})", s.n1, s.n2, n.0, n.1));
                }
                if s.p1 != p1 {
                    push(format!("P1 = {:?} (printed {:?})", s.p1, p1));
                }
                if s.p2 != p2 {
                    push(format!("P2 = {:?} (printed {:?})", s.p2, p2));
                }
            }
        }
        if c.gd_type() != gd {
            push(format!("{} (printed {gd})", c.gd_type()));
        }
    };
    for (id, c) in &d26 {
        scheme(id, c, (24, 1), [[22, 1], [1, 0]], [[24, 0], [0, 0]], GdType::Singular);
    }
    for (id, c) in &d28 {
        scheme(id, c, (24, 3), [[20, 3], [3, 0]], [[24, 0], [2, 0]], GdType::Regular);
    }
    for (msg, who) in mismatches {
        failures.push(format!("{}: {msg}", who.join(",")));
    }
    verdict(failures, "all 33 hexad verdicts, schemes and GD types as printed".into())
}

// 3 ------------------------------------------------------------------------

fn automorphism_orders() -> Check {
    let start = Instant::now();
    let mut expect: Vec<(String, u64)> = vec![
        ("D16_1".into(), 11520),
        ("D20_1".into(), 60),
        ("X20_2".into(), 20),
        ("X20_3".into(), 80),
        ("D22_1".into(), 22),
        ("D22_2".into(), 22),
        ("D22_3".into(), 110),
    ];
    expect.extend(ids("X22", 4..=7).into_iter().map(|id| (id, 22)));
    expect.extend(ids("D26", 1..=4).into_iter().map(|id| (id, 26)));
    expect.extend(ids("D26", 5..=7).into_iter().map(|id| (id, 78)));
    expect.extend(ids("D28", 1..=10).into_iter().map(|id| (id, 28)));
    expect.extend(ids("D28", 11..=12).into_iter().map(|id| (id, 56)));
    expect.extend(ids("D28", 13..=14).into_iter().map(|id| (id, 168)));
    let mut failures = Vec::new();
    for (id, want) in &expect {
        match automorphism_group(&materialize(id)) {
            Ok((_, order)) => ensure(order == *want, &mut failures, || format!("{id}: {order} (want {want})")),
            Err(e) => failures.push(format!("{id}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(300), &mut failures, || format!("took {elapsed:?}"));
    verdict(failures, format!("{} orders exact, {:.1}s", expect.len(), elapsed.as_secs_f64()))
}

// 4, 5 ---------------------------------------------------------------------

struct Run {
    classes: Vec<Value>,
    elapsed: Duration,
    code: Option<i32>,
}

fn search(dir: &Path, name: &str, args: &[&str]) -> Run {
    let out = dir.join(name);
    let mut full = vec!["search", "--out", out.to_str().unwrap()];
    full.extend_from_slice(args);
    let start = Instant::now();
    let o = hexad(&full);
    let elapsed = start.elapsed();
    let classes = fs::read_to_string(out.join("classes.jsonl"))
        .map(|t| t.lines().map(|l| serde_json::from_str(l).unwrap()).collect())
        .unwrap_or_default();
    Run { classes, elapsed, code: o.status.code() }
}

fn run_certs(run: &Run) -> BTreeSet<String> {
    run.classes.iter().map(|c| c["certificate"].as_str().unwrap().to_string()).collect()
}

fn search_reproduction(dir: &Path) -> Check {
    let mut failures = Vec::new();
    let limit = Duration::from_secs(30 * 60);

    let a = search(dir, "v16", &["--catalog-group", "D16_1"]);
    ensure(a.code == Some(0) && a.classes.len() == 1, &mut failures, || {
        format!("(a) exit {:?}, {} classes", a.code, a.classes.len())
    });
    ensure(run_certs(&a).contains(&cert_hex(&materialize("D16_1"))), &mut failures, || "(a) not D16_1".into());

    let b = search(dir, "v26", &["--v", "26", "--two-class-only"]);
    let want: BTreeSet<String> = ids("D26", 1..=7).iter().map(|id| cert_hex(&materialize(id))).collect();
    ensure(b.code == Some(0) && b.classes.len() == 7, &mut failures, || {
        format!("(b) exit {:?}, {} classes", b.code, b.classes.len())
    });
    ensure(run_certs(&b) == want, &mut failures, || "(b) certificates differ from D26_1..7".into());

    let c = search(dir, "v22", &["--catalog-group", "d11"]);
    let two_class = c.classes.iter().filter(|j| j["hexads"] != "not a 2-class symmetric design").count();
    ensure(c.code == Some(0) && c.classes.len() == 7 && two_class == 3, &mut failures, || {
        format!("(c) exit {:?}, {} classes, {} two-class", c.code, c.classes.len(), two_class)
    });
    let d22: BTreeSet<String> = ["D22_1", "D22_2", "D22_3", "X22_4", "X22_5", "X22_6", "X22_7"]
        .iter()
        .map(|id| cert_hex(&materialize(id)))
        .collect();
    ensure(run_certs(&c) == d22, &mut failures, || "(c) certificates differ from D22_1..3, X22_4..7".into());

    for (tag, r) in [("a", &a), ("b", &b), ("c", &c)] {
        ensure(r.elapsed <= limit, &mut failures, || format!("({tag}) took {:?}", r.elapsed));
    }
    verdict(
        failures,
        format!(
            "(a) 1 class {:.1}s, (b) 7 classes = D26_1..7 {:.1}s, (c) 7 classes, 3 two-class {:.1}s",
            a.elapsed.as_secs_f64(),
            b.elapsed.as_secs_f64(),
            c.elapsed.as_secs_f64()
        ),
    )
}

fn v28_partial(dir: &Path) -> Check {
    let mut failures = Vec::new();
    let r = search(dir, "v28", &["--catalog-group", "c2xc14", "--hexad-params", "(28,6;1,2;1,2)"]);
    ensure(r.code == Some(0), &mut failures, || format!("exit {:?}", r.code));
    let found = run_certs(&r);
    for id in ids("D28", 1..=10) {
        ensure(found.contains(&cert_hex(&materialize(&id))), &mut failures, || format!("{id} not recovered"));
    }
    let d28_15 = catalog::get("D28_15").unwrap();
    let report = catalog::verify_entry(&d28_15);
    ensure(report.passed() && classify(&materialize("D28_15").hexads()).is_semibiplane, &mut failures, || {
        "D28_15 does not verify".into()
    });
    verdict(
        failures,
        format!("{} classes cover D28_1..10; D28_15 verifies; {:.1}s", r.classes.len(), r.elapsed.as_secs_f64()),
    )
}

// 6 ------------------------------------------------------------------------

fn exact_cover_oracle() -> Check {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let random = |rng: &mut ChaCha8Rng| {
        let rows = rng.gen_range(1..=6usize);
        let p = rng.gen_range(0.15..0.6);
        let cols: Vec<Vec<u32>> =
            (0..rng.gen_range(1..=12)).map(|_| (0..rows as u32).filter(|_| rng.gen_bool(p)).collect()).collect();
        (rows, cols)
    };
    for case in 0..1000 {
        let (rows, cols) = random(&mut rng);
        let mut expect = BTreeSet::new();
        for mask in 0u32..1 << cols.len() {
            let chosen: Vec<u32> = (0..cols.len() as u32).filter(|c| mask >> c & 1 == 1).collect();
            let mut hit = vec![0; rows];
            chosen.iter().flat_map(|&c| &cols[c as usize]).for_each(|&r| hit[r as usize] += 1);
            if chosen.iter().all(|&c| !cols[c as usize].is_empty()) && hit.iter().all(|&h| h == 1) {
                expect.insert(chosen);
            }
        }
        let mut m = CoverMatrix::from_columns(rows, &cols).unwrap();
        let got: BTreeSet<Vec<u32>> = m.solutions(None).collect();
        ensure(got == expect, &mut failures, || format!("matrix {case} differs"));
    }
    let mut ops = 0;
    while ops < 10_000 {
        let (rows, cols) = random(&mut rng);
        let mut m = CoverMatrix::from_columns(rows, &cols).unwrap();
        let mut stack = Vec::new();
        for _ in 0..16 {
            let active: Vec<usize> = (0..rows).filter(|&r| m.is_active(r)).collect();
            if !active.is_empty() && (stack.is_empty() || rng.gen_bool(0.5)) {
                let r = active[rng.gen_range(0..active.len())];
                stack.push((r, m.fingerprint()));
                m.cover(r);
            } else if let Some((r, fp)) = stack.pop() {
                m.uncover(r);
                ensure(m.fingerprint() == fp, &mut failures, || format!("fingerprint drift at op {ops}"));
            }
            ops += 1;
        }
        while let Some((r, fp)) = stack.pop() {
            m.uncover(r);
            ensure(m.fingerprint() == fp, &mut failures, || format!("fingerprint drift at op {ops}"));
            ops += 1;
        }
    }
    failures.truncate(5);
    verdict(failures, format!("1000 matrices match enumeration, {ops} cover/uncover ops restore fingerprints"))
}

// 7 ------------------------------------------------------------------------

fn relabel(s: &SetSystem, images: &[u32]) -> SetSystem {
    SetSystem::new(s.v(), s.blocks().iter().map(|b| b.iter().map(|&x| images[x as usize]).collect()).collect()).unwrap()
}

fn block_multiset(s: &SetSystem) -> Vec<Vec<u32>> {
    let mut v: Vec<Vec<u32>> = s
        .blocks()
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b
        })
        .collect();
    v.sort();
    v
}

fn brute_force_order(s: &SetSystem) -> u64 {
    let target = block_multiset(s);
    let n = s.v();
    let mut a: Vec<u32> = (0..n as u32).collect();
    let mut c = vec![0; n];
    let mut count = u64::from(block_multiset(&relabel(s, &a)) == target);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            count += u64::from(block_multiset(&relabel(s, &a)) == target);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}

fn canonicalization() -> Check {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut by_v: BTreeMap<usize, Vec<(String, String)>> = BTreeMap::new();
    for id in catalog::list() {
        let d = materialize(id);
        let cert = cert_hex(&d);
        let mut images: Vec<u32> = (0..d.v() as u32).collect();
        for _ in 0..100 {
            images.shuffle(&mut rng);
            if cert_hex(&relabel(&d, &images)) != cert {
                failures.push(format!("{id}: certificate changed under relabeling"));
                break;
            }
        }
        by_v.entry(d.v()).or_default().push((id.to_string(), cert));
    }
    for list in by_v.values() {
        for (i, (a, ca)) in list.iter().enumerate() {
            for (b, cb) in &list[i + 1..] {
                ensure(ca != cb, &mut failures, || format!("{a} and {b} share a certificate"));
            }
        }
    }
    let paley = develop(&[vec![1, 3, 4, 5, 9]], &PermGroup::cyclic(11)).unwrap();
    let doubled = cert_hex(&double(&paley).unwrap());
    for id in ids("D22", 1..=3) {
        ensure(cert_hex(&materialize(&id).hexads()) == doubled, &mut failures, || {
            format!("{id} hexads differ from double(Paley)")
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..200 {
        let v = rng.gen_range(3..=8usize);
        let mut blocks = Vec::new();
        for _ in 0..rng.gen_range(0..=9) {
            let mut pts: Vec<u32> = (0..v as u32).collect();
            pts.shuffle(&mut rng);
            pts.truncate(rng.gen_range(1..=v.min(5)));
            blocks.push(pts);
        }
        if rng.gen_bool(0.5) {
            // Close under a rotation to get non-trivial groups.
            let rot: Vec<Vec<u32>> = blocks.clone();
            let group =
                PermGroup::new(vec![
                    Permutation::from_images((0..v as u32).map(|x| (x + 1) % v as u32).collect()).unwrap()
                ])
                .unwrap();
            blocks = develop(&rot, &group).unwrap().into_blocks();
        }
        let s = SetSystem::from_blocks_dedup(v, blocks).unwrap();
        let got = automorphism_group(&s).map(|(_, o)| o);
        let want = brute_force_order(&s);
        ensure(got.as_ref().ok() == Some(&want), &mut failures, || format!("case {case}: {got:?} vs {want}"));
    }
    verdict(
        failures,
        "100 relabelings x 33 entries stable, same-v pairs distinct, D22 hexads = double(Paley), 200 brute-force orders"
            .into(),
    )
}

// 8 ------------------------------------------------------------------------

fn constructors() -> Check {
    let mut failures = Vec::new();
    let paley = develop(&[vec![1, 3, 4, 5, 9]], &PermGroup::cyclic(11)).unwrap();
    ensure(verify_twbd(&paley, 2, &[5], 2).holds && paley.len() == 11, &mut failures, || {
        "Paley develop is not a 2-(11,5,2) design".into()
    });
    let c = classify(&double(&paley).unwrap());
    let tc = c.two_class.map(|p| (p.v, p.k, p.lambda1, p.lambda2, p.delta1, p.delta2));
    ensure(tc == Some((22, 6, 0, 2, 0, 2)) && c.is_semibiplane, &mut failures, || {
        format!("double(Paley) classifies as {}", c.label())
    });
    verdict(failures, "2-(11,5,2) and (22,6;0,2;0,2) semi-biplane".into())
}

fn main() -> ExitCode {
    let dir = TempDir::new().unwrap();
    let criteria: Vec<Criterion> = vec![
        ("catalog integrity", Box::new(catalog_integrity)),
        ("classification reproduction", Box::new(classification_reproduction)),
        ("automorphism orders", Box::new(automorphism_orders)),
        ("search reproduction", Box::new(|| search_reproduction(dir.path()))),
        ("v=28 partial reproduction", Box::new(|| v28_partial(dir.path()))),
        ("exact-cover oracle", Box::new(exact_cover_oracle)),
        ("canonicalization", Box::new(canonicalization)),
        ("constructors", Box::new(constructors)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
