//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use peiffer::campaign::{fuzz_peiffer, lambda_word, FuzzConfig};
use peiffer::functors::{verify_sequences, FreeAbelian};
use peiffer::oracle::{lcs_degree, Shadow, DEFAULT_BUDGET};
use peiffer::random::{case_rng, random_move, random_relator_product, random_word, CaseRng, SequenceSampler};
use peiffer::wu::{sphere_generator_word, wu_bracket_generators, wu_presentation};
use peiffer::{cross_effect3, Alphabet, ColoredPresentation, IdentitySequence, Word};
use peiffer_cli::files::{parse_presentation_file, parse_sequence_file};

const SEED: u64 = 0x5EED_2024;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn load(name: &str) -> Arc<ColoredPresentation> {
    Arc::new(parse_presentation_file(&data(name)).expect("bundled presentation"))
}

fn peiffer_bin(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_peiffer"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

/// A random sequence from `sampler` followed by a few random Peiffer moves.
fn scrambled(sampler: &SequenceSampler, rng: &mut CaseRng) -> IdentitySequence {
    let mut s = sampler.sample(rng);
    for _ in 0..rng.gen_range(0..=4) {
        if let Some(mv) = random_move(rng, &s, 2, true) {
            s = s.apply(&mv).unwrap();
        }
    }
    s
}

fn shadows(pres: &Arc<ColoredPresentation>) -> Vec<Shadow> {
    [2, 3]
        .iter()
        .map(|&p| Shadow::new(pres.clone(), p, 3, DEFAULT_BUDGET).unwrap())
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let wu = wu_presentation(2).unwrap();
    let sampler = SequenceSampler::new(wu.presentation.clone());
    let mut parts = Vec::new();
    let mut ok = true;
    for shadow in shadows(&wu.presentation) {
        let cfg = FuzzConfig {
            count: 200,
            moves: 10,
            seed: SEED,
        };
        let r = fuzz_peiffer(&shadow, &sampler, cfg).unwrap();
        ok &= r.passed == 200;
        parts.push(format!("p={}: {}/200 ({} nontrivial)", r.p, r.passed, r.nontrivial));
    }
    let t = start.elapsed();
    ok &= t < Duration::from_secs(300);
    outcome(ok, format!("{} in {}", parts.join(", "), secs(t)))
}

fn criterion_2() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in ["2", "3"] {
        let (code, out) = peiffer_bin(&[
            "shadow",
            "data/wu-n2.pres",
            "--p",
            p,
            "--deg",
            "3",
            "--word",
            "commutator=[x1,x2]",
            "--json",
        ]);
        let expected = std::fs::read_to_string(fixture(&format!("wu-n2-p{p}-d3.json"))).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let order = v["quotient_order"].as_u64().unwrap();
        let exact = code == 0 && out == expected;
        let cyclic = v["quotient_cyclic"] == serde_json::json!(true);
        let generated = v["words"][0]["generates_quotient"] == serde_json::json!(true);
        ok &= exact && order > 1 && cyclic && generated;
        parts.push(format!(
            "p={p}: fixture {}, N/D order {order}, cyclic {cyclic}, generated by [x1,x2] {generated}",
            if exact { "matches" } else { "DIFFERS" }
        ));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_3() -> Outcome {
    let (code, out) = peiffer_bin(&["gamma-degree", "[x1,x2,x1]", "--deg", "5"]);
    let degree_ok = code == 0 && out == "3\n";
    let pres = load("nonsurj.pres");
    let mut failures = 0;
    let mut nontrivial = 0;
    for i in 0..100 {
        let mut rng = case_rng(SEED ^ 3, i);
        let k1 = rng.gen_range(1..=3);
        let k2 = rng.gen_range(1..=2);
        let r = random_relator_product(&mut rng, &pres, &[1], k1, 3);
        let u = random_relator_product(&mut rng, &pres, &[3], k2, 2);
        let c = Word::commutator(&r, &u).unwrap();
        if !c.is_empty() {
            nontrivial += 1;
        }
        if !lcs_degree(&c, 4).at_least(4) {
            failures += 1;
        }
    }
    outcome(
        degree_ok && failures == 0,
        format!(
            "gamma-degree printed {:?}; [r,u] samples: {failures} below degree 4 ({nontrivial}/100 nontrivial)",
            out.trim()
        ),
    )
}

fn criterion_4() -> Outcome {
    let wu = wu_presentation(2).unwrap();
    let pres = &wu.presentation;
    let sampler = SequenceSampler::new(pres.clone());
    let sh = shadows(pres);
    let congruent = |u: &Word, v: &Word| sh.iter().all(|s| s.congruent(u, v).unwrap());
    let (mut neg, mut bil, mut closed) = (0, 0, 0);
    for i in 0..100 {
        let mut rng = case_rng(SEED ^ 4, i);
        let a = scrambled(&sampler, &mut rng);
        let a2 = scrambled(&sampler, &mut rng);
        let b = scrambled(&sampler, &mut rng);
        let b2 = scrambled(&sampler, &mut rng);

        if congruent(&lambda_word(&a.inverse()).unwrap(), &lambda_word(&a).unwrap()) {
            neg += 1;
        }

        let cross = |x: &IdentitySequence, y: &IdentitySequence| cross_effect3(x, y).unwrap();
        let left = congruent(
            &cross(&a.juxtapose(&a2).unwrap(), &b),
            &(&cross(&a, &b) * &cross(&a2, &b)),
        );
        let right = congruent(
            &cross(&a, &b.juxtapose(&b2).unwrap()),
            &(&cross(&a, &b) * &cross(&a, &b2)),
        );
        if left && right {
            bil += 1;
        }

        // Single triples: conjugates of the generator sequence.
        let g1 = random_word(&mut rng, pres.alphabet(), 4);
        let g2 = random_word(&mut rng, pres.alphabet(), 4);
        let s1 = wu.generator_sequence().conjugate(&g1).unwrap();
        let s2 = wu.generator_sequence().conjugate(&g2).unwrap();
        let (x1, y1) = (s1.realize(0), s1.realize(1));
        let (x2, y2) = (s2.realize(0), s2.realize(1));
        let form = &Word::commutator(&y2.inverse(), &x1).unwrap()
            * &Word::commutator(&y1.inverse(), &x2).unwrap();
        if congruent(&cross(&s1, &s2), &form) {
            closed += 1;
        }
    }
    outcome(
        neg == 100 && bil == 100 && closed == 100,
        format!("(a) {neg}/100, (b) {bil}/100, (c) {closed}/100 at p=2,3"),
    )
}

/// A random identity sequence using only two classes: a bundled two-class
/// base, signed and conjugated, then moves that insert nothing.
fn two_class_sequence(bases: &[IdentitySequence], rng: &mut CaseRng) -> IdentitySequence {
    let pres = bases[0].presentation();
    let mut b = bases[rng.gen_range(0..bases.len())].clone();
    if rng.gen_bool(0.5) {
        b = b.inverse();
    }
    b = b.conjugate(&random_word(rng, pres.alphabet(), 3)).unwrap();
    for _ in 0..rng.gen_range(0..=4) {
        if let Some(mv) = random_move(rng, &b, 2, false) {
            b = b.apply(&mv).unwrap();
        }
    }
    b
}

fn criterion_5() -> Outcome {
    let pres = load("sew.pres");
    let bases: Vec<IdentitySequence> = ["sew-b12.seq", "sew-b23.seq"]
        .iter()
        .map(|f| parse_sequence_file(&data(f), &pres).unwrap())
        .collect();
    let sampler = SequenceSampler::new(pres.clone());
    let sh = shadows(&pres);
    let mut passed = 0;
    let mut nontrivial = 0;
    for i in 0..100 {
        let mut rng = case_rng(SEED ^ 5, i);
        let a = scrambled(&sampler, &mut rng);
        let b = two_class_sequence(&bases, &mut rng);
        let classes: std::collections::BTreeSet<usize> = b.items().iter().map(|it| it.class).collect();
        assert!(classes.len() <= 2);
        let la = lambda_word(&a).unwrap();
        let lab = lambda_word(&a.juxtapose(&b).unwrap()).unwrap();
        let lba = lambda_word(&b.juxtapose(&a).unwrap()).unwrap();
        if !sh[0].denominator().contains(sh[0].project(&la).unwrap()) {
            nontrivial += 1;
        }
        if sh
            .iter()
            .all(|s| s.congruent(&lab, &la).unwrap() && s.congruent(&lba, &la).unwrap())
        {
            passed += 1;
        }
    }
    outcome(
        passed == 100,
        format!("{passed}/100 at p=2,3 ({nontrivial} with nontrivial Λ(a))"),
    )
}

fn criterion_6() -> Outcome {
    let wu = wu_presentation(2).unwrap();
    let pres = &wu.presentation;
    let sampler = SequenceSampler::new(pres.clone());
    let sh = shadows(pres);
    let mut passed = 0;
    for i in 0..100 {
        let mut rng = case_rng(SEED ^ 6, i);
        let c = scrambled(&sampler, &mut rng);
        let w = random_word(&mut rng, pres.alphabet(), 6);
        let lhs = lambda_word(&c.conjugate(&w).unwrap()).unwrap();
        let rhs = lambda_word(&c).unwrap().conjugate(&w).unwrap();
        if sh.iter().all(|s| s.congruent(&lhs, &rhs).unwrap()) {
            passed += 1;
        }
    }
    outcome(passed == 100, format!("{passed}/100 at p=2,3"))
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["sphere-s2.pres", "comm2.pres"] {
        let pres = load(name);
        let sampler = SequenceSampler::new(pres.clone());
        for shadow in shadows(&pres) {
            let cfg = FuzzConfig {
                count: 100,
                moves: 10,
                seed: SEED ^ 7,
            };
            let r = fuzz_peiffer(&shadow, &sampler, cfg).unwrap();
            ok &= r.passed == 100;
            parts.push(format!("{name} p={}: {}/100", r.p, r.passed));
        }
    }
    outcome(ok, parts.join(", "))
}

fn criterion_8() -> Outcome {
    let wu = wu_presentation(2).unwrap();
    let shadow = Shadow::new(wu.presentation.clone(), 2, 3, DEFAULT_BUDGET).unwrap();
    let group = shadow.group().clone();
    let brackets = wu_bracket_generators(2, 5).unwrap();
    let images: Vec<u32> = brackets.iter().map(|w| shadow.project(w).unwrap()).collect();
    let inside = images
        .iter()
        .filter(|&&x| shadow.denominator().contains(x))
        .count();
    let span = group.subgroup_generated(&images);

    let text = std::fs::read_to_string(fixture("wu-n2-p2-d3.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let committed: Vec<u32> = v["denominator_generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| group.decode(s.as_str().unwrap()).expect("valid encoding"))
        .collect();
    let committed_span = group.subgroup_generated(&committed);
    let in_span = committed.iter().all(|&x| span.contains(x));
    let equal = span == committed_span && committed_span == *shadow.denominator();
    outcome(
        inside == brackets.len() && in_span && equal,
        format!(
            "{inside}/{} bracket images in D̄; committed generators in span: {in_span}; spans equal (order {}): {equal}",
            brackets.len(),
            span.order()
        ),
    )
}

/// Signed-letter free reduction, independent of the library's words.
fn reduce(letters: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn inv(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|l| -l).collect()
}

fn comm(a: &[i32], b: &[i32]) -> Vec<i32> {
    reduce(inv(a).into_iter().chain(inv(b)).chain(a.iter().copied()).chain(b.iter().copied()))
}

fn criterion_9() -> Outcome {
    // y0, y1, y2, y3 are the letter codes 1, 2, 3, 4.
    let (y0, y1, y2, y3) = (vec![1], vec![2], vec![3], vec![4]);
    let y0y1 = comm(&y0, &y1);
    let w4_expected = comm(&y0y1, &comm(&y0, &reduce([2, 3])));
    let w5_expected = comm(
        &w4_expected,
        &comm(&y0y1, &comm(&y0, &reduce([y1[0], y2[0], y3[0]]))),
    );
    let w4 = sphere_generator_word(4).unwrap();
    let w5 = sphere_generator_word(5).unwrap();
    let start = Instant::now();
    let d4 = lcs_degree(&w4, 4);
    let d5 = lcs_degree(&w5, 8);
    let ok = w4.to_signed() == w4_expected
        && w5.to_signed() == w5_expected
        && d4.at_least(4)
        && d5.at_least(8);
    outcome(
        ok,
        format!(
            "k=4: length {}, lcs {d4}; k=5: length {}, lcs {d5} ({})",
            w4.len(),
            w5.len(),
            secs(start.elapsed())
        ),
    )
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    for r in 0..=6usize {
        let rep = verify_sequences(&FreeAbelian::new(r)).unwrap();
        let tri = r * (r + 1) / 2;
        ok &= rep.exact
            && rep.o1.exact()
            && rep.o2.exact()
            && rep.sp2_rank == tri
            && rep.gamma_rank == tri
            && rep.p2_rank == r + tri
            && rep.cokernel_order == 1 << r;
    }
    let t = start.elapsed();
    ok &= t < Duration::from_secs(10);
    outcome(ok, format!("ranks 0..=6 exact with expected ranks in {}", secs(t)))
}

fn criterion_11() -> Outcome {
    let alphabet = Alphabet::numbered("x", 3);
    let start = Instant::now();
    let mut failures = 0;
    let checks = 10_000u64;
    for i in 0..checks {
        let mut rng = case_rng(SEED ^ 11, i);
        let u = random_word(&mut rng, &alphabet, 12);
        let v = random_word(&mut rng, &alphabet, 12);
        let w = random_word(&mut rng, &alphabet, 12);
        let (su, sv, sw) = (u.to_signed(), v.to_signed(), w.to_signed());
        let ok = match i % 4 {
            0 => {
                let l = &(&u * &v) * &w;
                l == &u * &(&v * &w)
                    && l.to_signed() == reduce(su.iter().chain(&sv).chain(&sw).copied())
            }
            1 => (&u * &u.inverse()).is_empty() && (&u.inverse() * &u).is_empty(),
            2 => {
                u.conjugate(&(&v * &w)).unwrap() == u.conjugate(&v).unwrap().conjugate(&w).unwrap()
                    && u.conjugate(&v).unwrap().to_signed()
                        == reduce(inv(&sv).into_iter().chain(su.iter().copied()).chain(sv.iter().copied()))
            }
            _ => Word::commutator(&u, &v).unwrap().to_signed() == comm(&su, &sv),
        };
        if !ok {
            failures += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        failures == 0 && t < Duration::from_secs(5),
        format!("{checks} checks, {failures} failures in {}", secs(t)),
    )
}

fn main() -> ExitCode {
    type Check = (&'static str, fn() -> Outcome);
    let criteria: [Check; 11] = [
        ("Peiffer invariance of lambda", criterion_1),
        ("Wu generator nontrivial in shadow", criterion_2),
        ("non-surjectivity degrees", criterion_3),
        ("quadraticity", criterion_4),
        ("two-class summands vanish", criterion_5),
        ("equivariance", criterion_6),
        ("two-class lambda invariance", criterion_7),
        ("Wu brackets span the denominator", criterion_8),
        ("sphere generator words", criterion_9),
        ("quadratic functor sequences", criterion_10),
        ("free group laws", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
