//! Acceptance run: one PASS/FAIL line per criterion, with its runtime.
//!
//! `cargo test --test acceptance`; set `RINGFORGE_STRETCH=1` to include the
//! order-8192 stretch criterion, or `RINGFORGE_CRITERIA=1,3` to run a subset.

mod common;

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;

use ringforge::construct::Presentation;
use ringforge::dsl::{self, RingExpr};
use ringforge::properties::{idempotent_shortcut, replay, Backend, Checker, PropertyKind};
use ringforge::report::{analyze, parse_elements, AnalyzeOptions, Report};
use ringforge::search::{read_checkpoint, read_findings, Fingerprint};
use ringforge::verify::{builtin_corpus, builtin_ring, statement_audit, verify_generated_map, Verdict};
use ringforge::FiniteRing;

const EX_FQ: &str = "F2<u,v>/(u^4, v^4, u^2+v^2, u^2+u*v+v*u+u*v*u)";
const EX_232: &str = "F2<u,v>/(u^3, v^3, u^2+v^2+v*u, v*u^2+u*v*u+v*u*v)";
const SEMICOMM16: &str = "F2<u,v>/(u^2, v^2, u*v)";
const SKEW16: &str = "F2<w,x>/(w^2+w+1, x^2, x*w+w*x+x)";
const MARKS: &str = "F2<x,y,z>/(x^2, y^2, z^2, x*y*z, y*z*x, z*x*y)";
const D232_CONFIG: &str = include_str!("../configs/d232.json");
const RANDOM_RINGS: usize = 500;

/// Named boolean checks gathered while running one criterion.
#[derive(Default)]
struct Checks {
    items: Vec<(String, bool)>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, what: impl Into<String>, ok: bool) -> bool {
        self.items.push((what.into(), ok));
        ok
    }

    fn within(&mut self, what: &str, elapsed: Duration, budget: Duration) {
        let ok = elapsed < budget;
        self.check(format!("{what} in {:.2} s (budget {} s)", elapsed.as_secs_f64(), budget.as_secs()), ok);
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn passed(&self) -> bool {
        self.items.iter().all(|(_, ok)| *ok)
    }
}

fn report(text: &str, backend: Backend) -> Result<(Report, Duration), String> {
    let start = Instant::now();
    let r = analyze(text, &AnalyzeOptions { backend, ..AnalyzeOptions::default() }).map_err(|e| e.to_string())?;
    Ok((r, start.elapsed()))
}

fn holds(r: &Report, kind: PropertyKind) -> bool {
    r.property(kind).holds
}

fn failing_witness_replays(r: &Report, kind: PropertyKind) -> bool {
    let p = r.property(kind);
    !p.holds && p.witness.as_ref().is_some_and(|w| w.replayed)
}

fn criterion_1(c: &mut Checks) -> Result<(), String> {
    for (backend, budget) in [(Backend::Exhaustive, 10), (Backend::Linear, 1)] {
        let (r, elapsed) = report("F2[Q8]", backend)?;
        let b = backend.name();
        c.check(format!("{b}: order 256"), r.order == 256);
        c.check(format!("{b}: local, residue field 2"), r.is_local && r.residue_field == Some(2));
        c.check(format!("{b}: D = (2,2,2,1)"), r.d_sequence.as_deref() == Some(&[2, 2, 2, 1][..]));
        c.check(format!("{b}: nilpotency index 5"), r.nilpotency_index == 5);
        c.check(format!("{b}: reversible"), holds(&r, PropertyKind::Reversible));
        c.check(format!("{b}: not symmetric, witness replays"), failing_witness_replays(&r, PropertyKind::Symmetric));
        c.check(
            format!("{b}: right and left duo"),
            holds(&r, PropertyKind::RightDuo) && holds(&r, PropertyKind::LeftDuo),
        );
        c.check(format!("{b}: backend used"), r.properties.values().all(|p| p.backend == b));
        c.within(b, elapsed, Duration::from_secs(budget));
    }
    Ok(())
}

fn criterion_2(c: &mut Checks) -> Result<(), String> {
    let (r, elapsed) = report(EX_232, Backend::Auto)?;
    let listed = ["1", "u", "v", "u^2", "uv", "v^2", "uvu", "vuv"];
    c.check(format!("order 256 (got {})", r.order), r.order == 256);
    c.check(format!("basis of 8 normal words {listed:?} (got {:?})", r.basis), {
        let mut got = r.basis.clone();
        let mut want: Vec<String> = listed.iter().map(|s| s.to_string()).collect();
        got.sort();
        want.sort();
        got == want
    });
    c.check(format!("D = (2,3,2) (got {:?})", r.d_sequence), r.d_sequence.as_deref() == Some(&[2, 3, 2][..]));
    c.check(format!("nilpotency index 4 (got {})", r.nilpotency_index), r.nilpotency_index == 4);
    c.check("reversible", holds(&r, PropertyKind::Reversible));
    c.check("not symmetric, witness replays", failing_witness_replays(&r, PropertyKind::Symmetric));
    c.check("not left duo", failing_witness_replays(&r, PropertyKind::LeftDuo));
    c.check("not right duo", failing_witness_replays(&r, PropertyKind::RightDuo));
    c.within("analysis", elapsed, Duration::from_secs(10));

    // The same claims against the literal relations plus u^2 v u = 0.
    let (t, _) = report(&EX_232.replace(")", ", u^2*v*u)"), Backend::Auto)?;
    c.note(format!(
        "with u^2*v*u added: order {}, D {:?}, nilpotency {}, reversible {}, symmetric {}, left duo {}, right duo {}",
        t.order,
        t.d_sequence,
        t.nilpotency_index,
        holds(&t, PropertyKind::Reversible),
        holds(&t, PropertyKind::Symmetric),
        holds(&t, PropertyKind::LeftDuo),
        holds(&t, PropertyKind::RightDuo),
    ));
    Ok(())
}

fn criterion_3(c: &mut Checks) -> Result<(), String> {
    let start = Instant::now();
    let RingExpr::FreeQuotient { p, gens, relations } = dsl::parse_ring_expr(EX_FQ).map_err(|e| e.to_string())? else {
        return Err("not a presentation".into());
    };
    let pres: Presentation = dsl::presentation(p, &gens, &relations, 12).map_err(|e| e.to_string())?;
    let target = dsl::build("F2[Q8]").map_err(|e| e.to_string())?;
    let images = parse_elements(&target, "1 + x_i, 1 + x_j").map_err(|e| e.to_string())?;
    let rep = verify_generated_map(&pres, &target.ring, &images).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    c.check("four relations vanish", rep.relations.len() == 4 && rep.relations_hold);
    c.check(format!("image spans ({} of {})", rep.image_size, rep.target_order), rep.is_surjective);
    c.check(format!("orders equal ({:?} and {})", rep.source_order, rep.target_order), rep.source_order == Some(256));
    c.check("isomorphism", rep.is_isomorphism);
    c.within("verification", elapsed, Duration::from_secs(5));
    Ok(())
}

fn criterion_4(c: &mut Checks) -> Result<(), String> {
    let budget = Duration::from_secs(2);

    let start = Instant::now();
    let s3 = dsl::build("F2[S3]").map_err(|e| e.to_string())?.ring;
    let reversible = Checker::new(&s3).check(PropertyKind::Reversible, Backend::Auto).map_err(|e| e.to_string())?;
    let shortcut = idempotent_shortcut(&s3);
    let elapsed = start.elapsed();
    c.check("F2[S3] not reversible", !reversible.holds);
    c.check(
        "F2[S3] idempotent shortcut (e, a) with e a = a, a e = 0",
        shortcut.as_ref().is_some_and(|(e, a)| {
            s3.mul(e, e) == *e
                && s3.mul(e, a) == *a
                && s3.mul(a, e).is_zero()
                && replay(&s3, PropertyKind::Reversible, &[a.clone(), e.clone()])
        }),
    );
    c.within("F2[S3]", elapsed, budget);

    let (r, elapsed) = report(SEMICOMM16, Backend::Auto)?;
    c.check("semicommutative ring: order 16", r.order == 16);
    c.check("semicommutative ring: semicommutative", holds(&r, PropertyKind::Semicommutative));
    c.check("semicommutative ring: not reversible", failing_witness_replays(&r, PropertyKind::Reversible));
    c.within("semicommutative ring", elapsed, budget);

    let (r, elapsed) = report(SKEW16, Backend::Auto)?;
    c.check("skew ring: order 16", r.order == 16);
    c.check("skew ring: symmetric", holds(&r, PropertyKind::Symmetric));
    c.check("skew ring: not reduced", failing_witness_replays(&r, PropertyKind::Reduced));
    c.check("skew ring: not commutative", failing_witness_replays(&r, PropertyKind::Commutative));
    c.within("skew ring", elapsed, budget);
    Ok(())
}

fn criterion_5(c: &mut Checks) -> Result<(), String> {
    let start = Instant::now();
    let corpus = builtin_corpus().map_err(|e| e.to_string())?;
    let audit = statement_audit(&corpus).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    c.check(format!("corpus of {} rings (at least 25)", corpus.len()), corpus.len() >= 25);
    c.check("corpus has products and opposites", {
        corpus.iter().any(|r| r.expr.starts_with("prod(")) && corpus.iter().any(|r| r.expr.starts_with("op("))
    });
    for id in [
        "local-iff-indecomposable",
        "cube-zero-radical-symmetric",
        "d2-one-commutative",
        "d-2ln-shape",
        "d-n21-symmetric",
        "d-2211-symmetric",
        "order-below-256",
        "reduced-implies-symmetric",
        "commutative-implies-symmetric",
        "symmetric-implies-reversible",
        "reversible-implies-semicommutative",
        "semicommutative-implies-two-primal",
        "reversible-iff-semicommutative-reflexive",
    ] {
        match audit.claim(id) {
            Some(claim) => c.check(
                format!("{id}: {:?} on {} rings", claim.verdict, claim.tested.len()),
                claim.verdict != Verdict::Fail,
            ),
            None => c.check(format!("{id}: audited"), false),
        };
    }
    c.check("no failures", !audit.has_failures());
    c.within("audit", elapsed, Duration::from_secs(120));
    Ok(())
}

fn criterion_6(c: &mut Checks) -> Result<(), String> {
    let start = Instant::now();
    let corpus = builtin_corpus().map_err(|e| e.to_string())?;
    let mut compared = 0;
    for entry in corpus.iter().filter(|r| r.ring.prime_field().is_some() && r.ring.order() <= 256) {
        let ring = &entry.ring;
        let ck = Checker::new(ring);
        for kind in PropertyKind::ALL {
            let ex = ck.check(kind, Backend::Exhaustive).map_err(|e| e.to_string())?;
            let lin = ck.check(kind, Backend::Linear).map_err(|e| e.to_string())?;
            if ex.holds != lin.holds {
                c.check(format!("{} {kind}: exhaustive {} vs linear {}", entry.name, ex.holds, lin.holds), false);
            }
            for res in [&ex, &lin] {
                if let Some(w) = &res.witness {
                    if !replay(ring, kind, w) {
                        c.check(format!("{} {kind}: {} witness replays", entry.name, res.backend.name()), false);
                    }
                }
            }
        }
        compared += 1;
    }
    c.check(format!("{compared} rings compared on all nine properties"), compared > 0);
    c.within("cross-validation", start.elapsed(), Duration::from_secs(300));
    Ok(())
}

fn ringforge(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ringforge"));
    cmd.args(args);
    cmd
}

fn run_ok(args: &[&str]) -> Result<(), String> {
    let out = ringforge(args).output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("ringforge {} failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr)))
    }
}

fn criterion_7(c: &mut Checks) -> Result<(), String> {
    let start = Instant::now();
    let work = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = work.path().join("d232.json");
    std::fs::write(&config, D232_CONFIG).map_err(|e| e.to_string())?;
    let config = config.to_str().unwrap();
    let path = |dir: &Path| dir.to_str().unwrap().to_string();
    let single = work.path().join("single");
    let sharded = work.path().join("sharded");

    run_ok(&["search", "--config", config, "--out", &path(&single)])?;
    let single_findings = single.join("shard-0-of-1.findings.jsonl");
    let findings = read_findings(&single_findings).map_err(|e| e.to_string())?;
    let ex232 = builtin_ring("ex232-j4").ok_or("missing corpus ring")?.map_err(|e| e.to_string())?;
    let expected = Fingerprint::compute(&ex232).map_err(|e| e.to_string())?;
    let matching = findings.iter().filter(|f| f.fingerprint == expected).count();
    c.check(format!("{} findings, {matching} with the (2,3,2) example's fingerprint", findings.len()), matching >= 1);

    // Shard 1/4 holds the findings; it is killed mid-batch and resumed.
    for index in [0, 2, 3] {
        run_ok(&["search", "--config", config, "--out", &path(&sharded), "--shard", &format!("{index}/4")])?;
    }
    let victim = ["search", "--config", config, "--out", &path(&sharded), "--shard", "1/4"];
    let mut child = ringforge(&victim).spawn().map_err(|e| e.to_string())?;
    let victim_findings = sharded.join("shard-1-of-4.findings.jsonl");
    let victim_checkpoint = sharded.join("shard-1-of-4.checkpoint.jsonl");
    while std::fs::metadata(&victim_findings).map_or(true, |m| m.len() == 0) {
        if child.try_wait().map_err(|e| e.to_string())?.is_some() {
            break;
        }
        std::thread::sleep(Duration::from_millis(20));
    }
    std::thread::sleep(Duration::from_secs(2));
    let killed = child.try_wait().map_err(|e| e.to_string())?.is_none();
    child.kill().map_err(|e| e.to_string())?;
    child.wait().map_err(|e| e.to_string())?;
    let cp = read_checkpoint(&victim_checkpoint).map_err(|e| e.to_string())?.ok_or("no checkpoint after kill")?;
    let partial = read_findings(&victim_findings).map_err(|e| e.to_string())?.len();
    c.check(
        format!(
            "shard 1/4 killed at checkpoint {} of [{}, {}) with {partial} findings",
            cp.next_index, cp.start, cp.end
        ),
        killed && !cp.complete() && partial > 0,
    );
    run_ok(&[&victim[..], &["--resume"]].concat())?;
    let in_shard: Vec<_> = findings.iter().filter(|f| f.index >= cp.start && f.index < cp.end).collect();
    let resumed = read_findings(&victim_findings).map_err(|e| e.to_string())?;
    c.check(
        format!("resumed shard has the uninterrupted run's {} findings", in_shard.len()),
        resumed.len() == in_shard.len() && resumed.iter().zip(&in_shard).all(|(a, b)| a == *b),
    );

    run_ok(&["search", "--config", config, "--out", &path(&sharded), "--merge", "4"])?;
    let merged = std::fs::read(sharded.join("merged.findings.jsonl")).map_err(|e| e.to_string())?;
    let whole = std::fs::read(&single_findings).map_err(|e| e.to_string())?;
    c.check(format!("4-way merge equals the single run byte for byte ({} bytes)", whole.len()), merged == whole);
    c.within("search, shards, kill and resume", start.elapsed(), Duration::from_secs(30 * 60));
    Ok(())
}

fn criterion_8(c: &mut Checks) -> Result<(), String> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0256);
    let mut pool: Vec<FiniteRing> = builtin_corpus()
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|r| r.ring)
        .filter(|r| r.order() <= common::MAX_ORDER)
        .collect();
    let mut violations = Vec::new();
    let (mut local, mut fp_algebras) = (0, 0);
    let mut orders = std::collections::BTreeMap::new();
    for i in 0..RANDOM_RINGS {
        let ring = common::random_ring(&mut rng, &pool);
        *orders.entry(ring.order()).or_insert(0) += 1;
        local +=
            usize::from(ringforge::structure::StructureProfile::compute(&ring).map_err(|e| e.to_string())?.is_local());
        fp_algebras += usize::from(ring.prime_field().is_some());
        violations.extend(common::ring_violations(&format!("random ring {i} (order {})", ring.order()), &ring));
        pool.push(ring);
    }
    c.check("zero violations", violations.is_empty());
    c.note(format!("{RANDOM_RINGS} rings, {local} local, {fp_algebras} over a prime field"));
    for v in violations.iter().take(10) {
        c.check(v.clone(), false);
    }
    c.note(format!("orders {orders:?}; {:.1} s", start.elapsed().as_secs_f64()));
    Ok(())
}

fn criterion_9(c: &mut Checks) -> Result<(), String> {
    let start = Instant::now();
    let r = match report(MARKS, Backend::Linear) {
        Ok((r, _)) => r,
        Err(e) => {
            c.check(format!("build: {e}"), false);
            return Ok(());
        }
    };
    c.check(format!("order 8192 (got {})", r.order), r.order == 8192);
    c.check("reversible", holds(&r, PropertyKind::Reversible));
    c.check("not symmetric", failing_witness_replays(&r, PropertyKind::Symmetric));
    c.check("neither left nor right duo", !holds(&r, PropertyKind::LeftDuo) && !holds(&r, PropertyKind::RightDuo));
    c.within("analysis", start.elapsed(), Duration::from_secs(30 * 60));
    Ok(())
}

type Criterion = (u32, &'static str, fn(&mut Checks) -> Result<(), String>);

fn main() -> ExitCode {
    let stretch = std::env::var("RINGFORGE_STRETCH").is_ok_and(|v| v == "1");
    let criteria: [Criterion; 9] = [
        (1, "F2[Q8] analysis on both backends", criterion_1),
        (2, "(2,3,2) presentation analysis", criterion_2),
        (3, "presentation isomorphic to F2[Q8]", criterion_3),
        (4, "order-64 and order-16 fixtures", criterion_4),
        (5, "statement audit of the shipped corpus", criterion_5),
        (6, "exhaustive and linear backends agree", criterion_6),
        (7, "search reproduction, sharding, kill and resume", criterion_7),
        (8, "random small rings satisfy every invariant", criterion_8),
        (9, "order-8192 stretch ring (RINGFORGE_STRETCH=1)", criterion_9),
    ];
    let only: Option<Vec<u32>> =
        std::env::var("RINGFORGE_CRITERIA").ok().map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect());
    let mut failed = 0;
    for (n, title, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            continue;
        }
        if n == 9 && !stretch {
            println!("criterion {n} SKIP {title}");
            continue;
        }
        let start = Instant::now();
        let mut c = Checks::default();
        if let Err(e) = run(&mut c) {
            c.check(format!("error: {e}"), false);
        }
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        println!("criterion {n} {verdict} {title} ({:.1} s)", start.elapsed().as_secs_f64());
        for (what, ok) in &c.items {
            if !ok {
                println!("    failed: {what}");
            }
        }
        for note in &c.notes {
            println!("    note: {note}");
        }
        failed += usize::from(!c.passed());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
