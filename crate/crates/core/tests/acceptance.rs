//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.
//!
//! Uses a plain `main` so the lines are always printed by `cargo test`.

use std::time::{Duration, Instant};

use partsemi::harness::{build_catalog, Harness, Report, Verdict};

const SEED: u64 = 0;

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn line(&mut self, label: &str, ok: bool, detail: String) {
        println!("{} {label}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failures.push(label.to_string());
        }
    }
}

fn summary(reports: &[&Report]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in reports {
        let fails = r.count(Verdict::Fail);
        ok &= fails == 0 && r.count(Verdict::Pass) > 0;
        parts.push(format!(
            "{} {} instances, {} checks, {} failing",
            r.suite,
            r.count(Verdict::Pass) + fails,
            r.checks(),
            fails
        ));
        if let Some(f) = r.failures().next() {
            let cx = f
                .counterexample
                .as_ref()
                .map(|c| c.detail.clone())
                .unwrap_or_default();
            parts.push(format!("first failure on {}: {cx}", f.instance));
        }
    }
    (ok, parts.join("; "))
}

fn main() {
    let mut out = Outcome {
        failures: Vec::new(),
    };

    let start = Instant::now();
    let harness = Harness::new(build_catalog(4, SEED).expect("catalog")).expect("ensembles");
    let built = start.elapsed();
    println!(
        "catalog max_n=4 seed={SEED}: {} instances, enumerated in {:.2?}",
        harness.catalog().len(),
        built
    );

    let run = |id: &str| harness.run_suite(id).expect("known suite");
    let timed = |id: &str| {
        let t = Instant::now();
        let r = run(id);
        (r, t.elapsed())
    };

    let (homo, homo_time) = timed("character-homomorphism");
    let (ok, detail) = summary(&[&homo]);
    let elapsed = built + homo_time;
    out.line(
        "1 character homomorphism",
        ok && elapsed < Duration::from_secs(60),
        format!("{detail}; {elapsed:.2?}"),
    );

    let (ok, detail) = summary(&[
        &run("regular-element-equivalence"),
        &run("inner-inverse-construction"),
    ]);
    out.line("2 regular-element equivalence", ok, detail);

    let (ok, detail) = summary(&[
        &run("regular-semigroup-equivalence"),
        &run("subgroup-regular"),
        &run("txp-regular-iff-trivial"),
    ]);
    out.line("3 regular-semigroup equivalence", ok, detail);

    let (ok, detail) = summary(&[&run("idempotent-equivalence")]);
    out.line("4 idempotent equivalence", ok, detail);

    let (ok, detail) = summary(&[&run("inverse-semigroup-equivalence")]);
    out.line("5 inverse-semigroup equivalence", ok, detail);

    let (ok, detail) = summary(&[
        &run("unit-regular-element-equivalence"),
        &run("unit-inverse-construction"),
    ]);
    out.line("6 unit-regular element equivalence", ok, detail);

    let (ok, detail) = summary(&[
        &run("unit-regular-semigroup-equivalence"),
        &run("txp-unit-regular-iff-trivial"),
    ]);
    out.line("7 unit-regular semigroup equivalence", ok, detail);

    let characterizations: Vec<Report> = [
        "greens-L-equivalence",
        "greens-R-equivalence",
        "greens-D-equivalence",
        "greens-J-equivalence",
    ]
    .into_iter()
    .map(run)
    .collect();
    let structural = [
        run("greens-D-equals-LcircR"),
        run("greens-D-within-J"),
        run("greens-full-tx"),
    ];
    let capped: u64 = characterizations.iter().map(Report::capped).sum();
    let pairs: u64 = characterizations
        .iter()
        .map(|r| r.checks() + r.capped())
        .sum();
    let rate = capped as f64 / pairs.max(1) as f64;
    let refs: Vec<&Report> = characterizations.iter().chain(&structural).collect();
    let (ok, detail) = summary(&refs);
    out.line(
        "8 Green's relations",
        ok && rate < 0.05,
        format!(
            "{detail}; capped {capped} of {pairs} pairs ({:.3}%)",
            rate * 100.0
        ),
    );

    let (ok, detail) = summary(&[&run("unit-set-identity")]);
    out.line("9 unit-set identity", ok, detail);

    let (ok, detail) = summary(&[&run("counting")]);
    out.line("10 counting", ok, detail);

    let (ok, detail) = summary(&[&run("transversal-lemma")]);
    out.line("11 transversal lemma", ok, detail);

    for (max_n, budget) in [(3, Duration::from_secs(30)), (4, Duration::from_secs(600))] {
        let t = Instant::now();
        let h = Harness::new(build_catalog(max_n, SEED).expect("catalog")).expect("ensembles");
        let reports = h.run_all();
        let elapsed = t.elapsed();
        let fails: usize = reports.iter().map(|r| r.count(Verdict::Fail)).sum();
        out.line(
            &format!("timing verify --max-n {max_n}"),
            fails == 0 && elapsed < budget,
            format!(
                "{} suites, {fails} failing records, {elapsed:.2?} (budget {budget:?})",
                reports.len()
            ),
        );
    }

    if out.failures.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing {}", out.failures.join(", "));
        std::process::exit(1);
    }
}
