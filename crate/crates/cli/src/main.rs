use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use e3_core::arith::{MPoly, Vars};
use e3_core::bott::{run_oracles, suggest_generic, total_degree, DegreeReport};
use e3_core::flags::{FixedFlag, WeightVector};
use e3_core::omega::{omega_of_pair, X_NAMES};
use e3_core::tower::enumerate_fixed_loci;
use e3_core::verify;
use e3_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "e3",
    version,
    about = "Degree of the exceptional component E(3) by Bott's formula"
)]
struct Cli {
    /// First torus weight vector, four distinct integers.
    #[arg(long, global = true, value_parser = parse_weights, default_value = "0,1,4,13")]
    weights: [i64; 4],

    /// Second weight vector for the `degree` cross-check.
    #[arg(long, global = true, value_parser = parse_weights, default_value = "3,17,5,41")]
    weights2: [i64; 4],

    /// Worker threads; 0 lets rayon decide.
    #[arg(long, global = true, env = "E3_JOBS", default_value_t = 0)]
    jobs: usize,

    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Skip the symbolic verification suite before `degree`.
    #[arg(long, global = true)]
    skip_verify: bool,

    /// Report progress on standard error.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify, run the oracles, then compute the degree at both weight vectors.
    Degree,
    /// Fixed loci of Y4 over one fixed flag, with weights and W classes.
    FixedLoci {
        /// Flag label: a permutation of 0123.
        #[arg(long, default_value = "0123")]
        flag: String,
    },
    /// The symbolic verification suite.
    Verify,
    /// Bott's formula on spaces with known answers.
    Oracles,
    /// ω = (3f·dg − 2g·df)/h for polynomials in x0..x3.
    Omega {
        #[arg(long, num_args = 3, value_names = ["F", "G", "H"])]
        pair: Vec<String>,
    },
}

fn parse_weights(s: &str) -> Result<[i64; 4], String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|v: Vec<i64>| format!("expected 4 weights, got {}", v.len()))
}

/// Outcome of a command: JSON payload plus exit status.
struct Outcome {
    value: Value,
    code: u8,
}

impl Outcome {
    fn ok(value: impl Serialize) -> Self {
        Outcome {
            value: serde_json::to_value(value).expect("serializable"),
            code: 0,
        }
    }

    fn fail(value: Value) -> Self {
        Outcome { value, code: 1 }
    }
}

fn log(cli: &Cli, start: Instant, msg: &str) {
    if cli.verbose {
        eprintln!("[{:>7.2}s] {msg}", start.elapsed().as_secs_f64());
    }
}

fn weight_vector(w: [i64; 4]) -> Result<WeightVector, Outcome> {
    WeightVector::new(w).map_err(|e| Outcome::fail(json!({ "error": e.to_string() })))
}

fn error_outcome(e: Error, w: &WeightVector) -> Outcome {
    let mut v = json!({ "error": e.to_string(), "weights": w.get() });
    if matches!(e, Error::NonGeneric { .. }) {
        v["suggested_weights"] = json!(suggest_generic(w).get());
    }
    Outcome::fail(v)
}

fn degree(cli: &Cli, start: Instant) -> Outcome {
    if !cli.skip_verify {
        let reports = verify::run_all();
        log(cli, start, "verification suite done");
        if reports.iter().any(|r| !r.passed()) {
            return Outcome::fail(json!({ "error": "verification failed", "verify": reports }));
        }
    }
    let oracles = run_oracles(&match weight_vector(cli.weights) {
        Ok(w) => w,
        Err(o) => return o,
    });
    log(cli, start, "oracle suite done");
    if oracles.iter().any(|o| !o.pass) {
        return Outcome::fail(json!({ "error": "oracle failed", "oracles": oracles }));
    }
    let mut runs: Vec<DegreeReport> = Vec::new();
    for w in [cli.weights, cli.weights2] {
        let w = match weight_vector(w) {
            Ok(w) => w,
            Err(o) => return o,
        };
        match total_degree(&w) {
            Ok(r) => runs.push(r),
            Err(e) => return error_outcome(e, &w),
        }
        log(cli, start, &format!("degree at {w} done"));
    }
    if runs[0].degree != runs[1].degree {
        let pairs: Vec<Value> = runs
            .iter()
            .map(|r| json!({ "weights": r.weights, "degree": r.degree.to_string() }))
            .collect();
        return Outcome::fail(json!({ "error": "weight vectors disagree", "runs": pairs }));
    }
    let r = &runs[0];
    let mut v = serde_json::to_value(r).expect("serializable");
    v["weights"] = json!([cli.weights, cli.weights2]);
    Outcome { value: v, code: 0 }
}

fn fixed_loci(cli: &Cli, flag: &str) -> Outcome {
    let w = match weight_vector(cli.weights) {
        Ok(w) => w,
        Err(o) => return o,
    };
    let flag = match FixedFlag::parse(flag) {
        Ok(f) => f,
        Err(e) => return Outcome::fail(json!({ "error": e.to_string() })),
    };
    match enumerate_fixed_loci(&flag, &w) {
        Ok(loci) => {
            let points = loci.iter().filter(|l| l.is_point()).count();
            Outcome::ok(json!({
                "flag": flag.label(),
                "weights": w.get(),
                "isolated": points,
                "lines": loci.len() - points,
                "loci": loci,
            }))
        }
        Err(e) => error_outcome(e, &w),
    }
}

fn omega(pair: &[String]) -> Outcome {
    let vars = Vars::new(X_NAMES);
    let parsed: Result<Vec<MPoly>, Error> = pair.iter().map(|s| MPoly::parse(&vars, s)).collect();
    let form = parsed.and_then(|p| omega_of_pair(&p[0], &p[1], &p[2]));
    match form {
        Ok(form) => {
            let mut v = serde_json::Map::new();
            for (i, c) in form.coeffs().iter().enumerate() {
                v.insert(format!("dx{i}"), json!(c.to_string()));
            }
            v.insert("form".into(), json!(form.to_string()));
            Outcome::ok(Value::Object(v))
        }
        Err(Error::NotDivisible {
            divisor,
            index,
            coeff,
        }) => Outcome::fail(json!({
            "error": "not divisible",
            "divisor": divisor,
            "index": index,
            "coefficient": coeff,
        })),
        Err(e) => Outcome::fail(json!({ "error": e.to_string() })),
    }
}

fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    match &cli.command {
        Command::Degree => degree(cli, start),
        Command::FixedLoci { flag } => fixed_loci(cli, flag),
        Command::Verify => {
            let reports = verify::run_all();
            let code = u8::from(reports.iter().any(|r| !r.passed()));
            Outcome {
                value: serde_json::to_value(reports).expect("serializable"),
                code,
            }
        }
        Command::Oracles => {
            let w = match weight_vector(cli.weights) {
                Ok(w) => w,
                Err(o) => return o,
            };
            let res = run_oracles(&w);
            let code = u8::from(res.iter().any(|o| !o.pass));
            Outcome {
                value: serde_json::to_value(res).expect("serializable"),
                code,
            }
        }
        Command::Omega { pair } => omega(pair),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
        {
            eprintln!("cannot size the worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    let out = run(&cli);
    let text = serde_json::to_string_pretty(&out.value).expect("serializable") + "\n";
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if out.code != 0 {
        if let Some(e) = out.value.get("error") {
            eprintln!("error: {}", e.as_str().unwrap_or_default());
        }
        if let Some(s) = out.value.get("suggested_weights") {
            let w: Vec<String> = s
                .as_array()
                .map(|a| a.iter().map(|x| x.to_string()).collect())
                .unwrap_or_default();
            eprintln!("try a fresh weight vector, e.g. {}", w.join(","));
        }
    }
    ExitCode::from(out.code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use e3_core::flags::{DEFAULT_WEIGHTS, DEFAULT_WEIGHTS2};

    #[test]
    fn defaults_match_core() {
        let cli = Cli::parse_from(["e3", "verify"]);
        assert_eq!(cli.weights, DEFAULT_WEIGHTS);
        assert_eq!(cli.weights2, DEFAULT_WEIGHTS2);
    }

    #[test]
    fn weight_parsing() {
        assert_eq!(parse_weights("1, 2,3,-4"), Ok([1, 2, 3, -4]));
        assert!(parse_weights("1,2,3").is_err());
        assert!(parse_weights("1,2,x,4").is_err());
    }
}
