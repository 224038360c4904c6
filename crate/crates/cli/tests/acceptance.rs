//! One pass/fail line per acceptance criterion. The process fails when a
//! criterion's outcome differs from the recorded expectation.

use std::time::Instant;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use e3_core::arith::int;
use e3_core::bott::{check_generic, run_oracles, total_degree};
use e3_core::flags::{enumerate_fixed_flags, WeightVector, DEFAULT_WEIGHTS, DEFAULT_WEIGHTS2};
use e3_core::tower::{
    build_chart, enumerate_fixed_loci, ChartPath, REFERENCE_CHOICES, REFERENCE_Y,
};
use e3_core::verify::{self, Report};
use e3_core::Error;

const DEGREE: i64 = 168208;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn report_outcome(r: &Report) -> Outcome {
    match r.failures().next() {
        None => outcome(true, format!("{} checks", r.checks.len())),
        Some(c) => outcome(false, format!("{}: {:?}", c.name, c.witness)),
    }
}

fn degree_at(w: [i64; 4]) -> Result<BigInt, Error> {
    total_degree(&WeightVector::new(w)?).map(|r| r.degree)
}

/// Returns the outcome and whether it is the known failure mode of the
/// second default vector.
fn criterion1() -> (Outcome, bool) {
    let start = Instant::now();
    let a = degree_at(DEFAULT_WEIGHTS);
    let b = degree_at(DEFAULT_WEIGHTS2);
    let secs = start.elapsed().as_secs_f64();
    let target = BigInt::from(DEGREE);
    match (&a, &b) {
        (Ok(x), Ok(y)) => (
            outcome(
                *x == target && *y == target,
                format!("{x} at {DEFAULT_WEIGHTS:?}, {y} at {DEFAULT_WEIGHTS2:?}, {secs:.2}s"),
            ),
            false,
        ),
        (Ok(x), Err(e @ Error::NonGeneric { .. })) => (
            outcome(
                false,
                format!(
                    "{x} at {DEFAULT_WEIGHTS:?}; {DEFAULT_WEIGHTS2:?} is not generic for Y4: {e}"
                ),
            ),
            *x == target,
        ),
        _ => (outcome(false, format!("{a:?} / {b:?}")), false),
    }
}

fn criterion2() -> Outcome {
    let w = WeightVector::new(DEFAULT_WEIGHTS).unwrap();
    for f in enumerate_fixed_flags() {
        match enumerate_fixed_loci(&f, &w) {
            Ok(loci) => {
                let points = loci.iter().filter(|l| l.is_point()).count();
                if (points, loci.len() - points) != (72, 5) {
                    return outcome(false, format!("flag {}: {points} points", f.label()));
                }
            }
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    match total_degree(&w) {
        Ok(r) => outcome(
            (r.isolated, r.lines) == (1728, 120),
            format!(
                "72 + 5 per flag; {} points and {} lines over {} flags",
                r.isolated, r.lines, r.flags
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion3() -> Outcome {
    let res = run_oracles(&WeightVector::new(DEFAULT_WEIGHTS).unwrap());
    let bad: Vec<String> = res
        .iter()
        .filter(|o| !o.pass)
        .map(|o| format!("{} = {}", o.name, o.value))
        .collect();
    let components = res
        .iter()
        .filter(|o| {
            o.name.starts_with("P2 (1,1,2): isolated") || o.name.starts_with("P2 (1,1,2): fixed")
        })
        .map(|o| o.value.clone())
        .collect::<Vec<_>>();
    let split = components == [int(4), int(-3)];
    outcome(
        bad.is_empty() && split,
        if bad.is_empty() {
            format!("{} oracles, P2 split 4 + (-3)", res.len())
        } else {
            bad.join("; ")
        },
    )
}

fn criterion4() -> Outcome {
    let mut path = ChartPath {
        y: REFERENCE_Y,
        choices: REFERENCE_CHOICES.iter().map(|&k| Some(k)).collect(),
    };
    path.choices.push(Some(0));
    if let Err(e) = build_chart(&path) {
        return outcome(
            false,
            format!("engine centers along the reference charts: {e}"),
        );
    }
    report_outcome(&verify::indeterminacy_pipeline())
}

fn criterion7(rng: &mut StdRng) -> Outcome {
    let base = WeightVector::new(DEFAULT_WEIGHTS).unwrap();
    let target = BigInt::from(DEGREE);
    let mut log = Vec::new();
    for kind in ["permutation", "translation", "scaling"] {
        for _ in 0..3 {
            let w = loop {
                let w = match kind {
                    "permutation" => {
                        let mut p = [0, 1, 2, 3];
                        p.shuffle(rng);
                        base.permuted(p)
                    }
                    "translation" => base.translated(rng.gen_range(-1000..=1000)),
                    _ => match base.scaled(rng.gen_range(2..=50) * [-1, 1][rng.gen_range(0..2)]) {
                        Ok(w) => w,
                        Err(_) => continue,
                    },
                };
                if check_generic(&w).is_ok() {
                    break w;
                }
            };
            match total_degree(&w) {
                Ok(r) if r.degree == target => log.push(w.to_string()),
                Ok(r) => return outcome(false, format!("{kind} {w}: {}", r.degree)),
                Err(e) => return outcome(false, format!("{kind} {w}: {e}")),
            }
        }
    }
    outcome(true, format!("{DEGREE} at {}", log.join(" ")))
}

fn main() {
    let seed: u64 = std::env::var("E3_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or_else(rand::random);
    let mut rng = StdRng::seed_from_u64(seed);
    println!("acceptance (seed {seed})");

    let (c1, known) = criterion1();
    let results = [
        (1, c1, known),
        (2, criterion2(), false),
        (3, criterion3(), false),
        (4, criterion4(), false),
        (
            5,
            report_outcome(&verify::divisibility_equivalence()),
            false,
        ),
        (6, report_outcome(&verify::omega0_geometry()), false),
        (7, criterion7(&mut rng), false),
    ];
    let mut unexpected = 0;
    for (n, o, known_failure) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n}: {tag} - {}", o.detail);
        if !o.pass && !known_failure {
            unexpected += 1;
        }
    }
    let passed = results.iter().filter(|r| r.1.pass).count();
    println!(
        "{passed}/{} criteria pass; {unexpected} unexpected failures",
        results.len()
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
