use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use loewylab::certify::{
    build_certificate, certified_bound, verify_certificate, CertificateOutcome, CertifyConfig, LiftCertificate,
};
use loewylab::graded::{is_cohen_macaulay, GradedView};
use loewylab::harness::{corpus, corpus_ring, verify, InvariantReport, VerifyConfig};
use loewylab::koszul::regularity;
use loewylab::localring::gll_estimate;
use loewylab::oracle::{oracle_suite, OracleConfig};
use loewylab::ring_core::parse_ring;
use loewylab::stdbasis::Limits;
use loewylab::{Error, RingSpec};

const SCHEMA: u32 = 1;
const EXIT_COMPUTATION: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "loewylab", version, about = "Loewy-theoretic invariants of local rings over prime fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Replace the characteristic of the input ring.
    #[arg(long = "char", global = true, value_name = "P")]
    characteristic: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Samples per parameter order for gll estimates.
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 3)]
    max_param_order: u32,
    /// Abort standard-basis computations beyond this degree.
    #[arg(long, global = true)]
    degree_cap: Option<u32>,
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Wall-clock budget in seconds (per ring for `verify`).
    #[arg(long, global = true, value_name = "SECONDS")]
    time_budget: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension, orders, regularity, strict CM and gll of a ring.
    Invariants { input: String },
    /// Castelnuovo-Mumford regularity of the tangent cone.
    Regularity { input: String },
    /// Sampled generalized Loewy length.
    Gll { input: String },
    /// Build (or re-verify) a lifting certificate.
    Certify {
        /// Ring to certify; omit together with `--certificate`.
        input: Option<String>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        target_n: Option<u32>,
        /// Re-verify the certificate independently after building it.
        #[arg(long)]
        verify: bool,
        /// Write the certificate document to this file.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Verify an existing certificate document instead of building one.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["input", "out", "target_n"])]
        certificate: Option<PathBuf>,
    },
    /// Full report with bound checks on sampled test modules R/(x).
    Verify {
        /// A ring, or `corpus:all`.
        input: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Number of sampled test modules.
        #[arg(long, default_value_t = 50)]
        modules: usize,
    },
    /// List the built-in rings.
    Corpus,
    /// Cross-check against brute-force linear algebra.
    Oracle {
        input: String,
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
        #[arg(long, default_value_t = 8)]
        probe_degree: u32,
        #[arg(long, default_value_t = 40)]
        probes: usize,
    },
}

enum Failure {
    Usage(String),
    Computation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Computation(e.to_string())
    }
}

struct Outcome {
    doc: Value,
    code: u8,
}

impl Global {
    fn limits(&self) -> Limits {
        Limits {
            degree_cap: self.degree_cap,
            deadline: self.budget().map(|b| Instant::now() + b),
        }
    }

    fn budget(&self) -> Option<Duration> {
        self.time_budget.map(Duration::from_secs_f64)
    }

    fn validate(&self) -> Result<(), Failure> {
        if let Some(t) = self.time_budget {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Failure::Usage(format!("--time-budget must be a non-negative number, got {t}")));
            }
        }
        if self.samples == 0 {
            return Err(Failure::Usage("--samples must be positive".into()));
        }
        if self.max_param_order == 0 {
            return Err(Failure::Usage("--max-param-order must be positive".into()));
        }
        Ok(())
    }
}

fn load_ring(input: &str, g: &Global) -> Result<(String, RingSpec), Failure> {
    let (id, spec) = match input.strip_prefix("corpus:") {
        Some(id) => {
            let spec = corpus_ring(id).ok_or_else(|| Failure::Usage(format!("unknown corpus ring `{id}`")))?;
            (id.to_string(), spec)
        }
        None => {
            let text =
                fs::read_to_string(input).map_err(|e| Failure::Usage(format!("cannot read `{input}`: {e}")))?;
            let spec = parse_ring(&text).map_err(|e| Failure::Usage(format!("{input}: {e}")))?;
            (input.to_string(), spec)
        }
    };
    let spec = match g.characteristic {
        Some(p) => spec.with_char(p).map_err(|e| Failure::Usage(e.to_string()))?,
        None => spec,
    };
    Ok((id, spec))
}

fn verify_config(g: &Global, depth: usize, modules: usize, certificate: bool) -> VerifyConfig {
    VerifyConfig {
        seed: g.seed,
        samples: g.samples,
        max_param_order: g.max_param_order,
        modules,
        certificate,
        depth,
        degree_cap: g.degree_cap,
        time_budget: g.budget(),
    }
}

fn report_code(r: &InvariantReport) -> u8 {
    if r.failed() {
        EXIT_VIOLATION
    } else if !r.errors.is_empty() {
        EXIT_COMPUTATION
    } else {
        0
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(cmd: Command, g: &Global) -> Result<Outcome, Failure> {
    g.validate()?;
    match cmd {
        Command::Invariants { input } => {
            let (id, spec) = load_ring(&input, g)?;
            let r = verify(&id, &spec, verify_config(g, 0, 0, false));
            let mut doc = to_value(&r);
            if let Value::Object(m) = &mut doc {
                m.remove("modules");
                m.remove("certificate");
            }
            Ok(Outcome {
                doc,
                code: report_code(&r),
            })
        }
        Command::Regularity { input } => {
            let (id, spec) = load_ring(&input, g)?;
            let limits = g.limits();
            let view = GradedView::tangent_cone(&spec, limits)?;
            let reg = regularity(&view, g.seed, limits)?;
            let cm = is_cohen_macaulay(&view, g.seed, limits)?;
            let hf: Vec<i64> = (0..=reg.cutoff as usize + 1).map(|j| view.hilbert_function(j)).collect();
            Ok(Outcome {
                doc: json!({
                    "ring": id,
                    "dim": view.dim,
                    "regularity": reg.value,
                    "strict_cm": cm.is_cm,
                    "hilbert_function": hf,
                    "report": to_value(&reg),
                }),
                code: 0,
            })
        }
        Command::Gll { input } => {
            let (id, spec) = load_ring(&input, g)?;
            let est = gll_estimate(&spec, g.samples, g.max_param_order, g.seed, g.limits())?;
            let mut doc = to_value(&est);
            doc["ring"] = json!(id);
            Ok(Outcome { doc, code: 0 })
        }
        Command::Certify {
            input,
            depth,
            target_n,
            verify: recheck,
            out,
            certificate,
        } => {
            if let Some(path) = certificate {
                return verify_document(&path, g);
            }
            let input = input.ok_or_else(|| Failure::Usage("certify needs a ring or --certificate".into()))?;
            let (id, spec) = load_ring(&input, g)?;
            let cfg = CertifyConfig {
                depth,
                seed: g.seed,
                target_n,
                limits: g.limits(),
            };
            let outcome = build_certificate(&spec, cfg)?;
            let mut doc = json!({ "ring": id, "outcome": to_value(&outcome) });
            let cert = match &outcome {
                CertificateOutcome::Success(c) => c,
                CertificateOutcome::Failure { .. } => return Ok(Outcome { doc, code: EXIT_COMPUTATION }),
            };
            let text = serde_json::to_string_pretty(cert).expect("serializable");
            if let Some(path) = out {
                fs::write(&path, &text).map_err(|e| Failure::Computation(format!("cannot write {path:?}: {e}")))?;
            }
            let mut code = 0;
            if recheck {
                let parsed: LiftCertificate = serde_json::from_str(&text).expect("round trip");
                match certified_bound(&parsed, g.limits()) {
                    Ok(b) => doc["verified"] = to_value(&b),
                    Err(e) => {
                        doc["verified"] = json!({ "error": e.to_string() });
                        code = EXIT_VIOLATION;
                    }
                }
            }
            Ok(Outcome { doc, code })
        }
        Command::Verify { input, depth, modules } => {
            let cfg = verify_config(g, depth, modules, true);
            let reports: Vec<InvariantReport> = if input == "corpus:all" {
                corpus().iter().map(|r| verify(r.id, &r.spec, cfg)).collect()
            } else {
                let (id, spec) = load_ring(&input, g)?;
                vec![verify(&id, &spec, cfg)]
            };
            let code = reports.iter().map(report_code).max().unwrap_or(0);
            let doc = if reports.len() == 1 {
                to_value(&reports[0])
            } else {
                json!({ "reports": to_value(&reports) })
            };
            Ok(Outcome { doc, code })
        }
        Command::Corpus => {
            let rings: Vec<Value> = corpus()
                .iter()
                .map(|r| json!({ "id": r.id, "description": r.description, "ring": r.spec.to_text() }))
                .collect();
            Ok(Outcome {
                doc: json!({ "rings": rings }),
                code: 0,
            })
        }
        Command::Oracle {
            input,
            max_degree,
            probe_degree,
            probes,
        } => {
            let (id, spec) = load_ring(&input, g)?;
            let cfg = OracleConfig {
                max_degree,
                probe_degree,
                probes,
                seed: g.seed,
                limits: g.limits(),
            };
            let rep = oracle_suite(&spec, cfg)?;
            let code = if rep.ok() { 0 } else { EXIT_VIOLATION };
            let mut doc = to_value(&rep);
            doc["ring"] = json!(id);
            doc["ok"] = json!(rep.ok());
            Ok(Outcome { doc, code })
        }
    }
}

fn verify_document(path: &PathBuf, g: &Global) -> Result<Outcome, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path:?}: {e}")))?;
    let cert: LiftCertificate =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{path:?} is not a certificate: {e}")))?;
    Ok(match verify_certificate(&cert, g.limits()) {
        Ok(()) => Outcome {
            doc: json!({ "certificate": path, "valid": true, "bound": to_value(&certified_bound(&cert, g.limits())?) }),
            code: 0,
        },
        Err(Error::TimeBudget) => return Err(Failure::Computation(Error::TimeBudget.to_string())),
        Err(e) => Outcome {
            doc: json!({ "certificate": path, "valid": false, "reason": e.to_string() }),
            code: EXIT_VIOLATION,
        },
    })
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => render_map(m, indent, out),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{pad}[{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                out.push_str(&format!("{pad}- [{i}]\n"));
                render(x, indent + 1, out);
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn render_map(m: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    for (k, v) in m {
        match v {
            Value::Object(_) => {
                out.push_str(&format!("{pad}{k}:\n"));
                render(v, indent + 1, out);
            }
            Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
                out.push_str(&format!("{pad}{k}:\n"));
                render(v, indent + 1, out);
            }
            _ => {
                let mut line = String::new();
                render(v, 0, &mut line);
                out.push_str(&format!("{pad}{k}: {}", line));
            }
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let g = cli.global.clone();
    match run(cli.command, &g) {
        Ok(Outcome { mut doc, code }) => {
            doc["schema"] = json!(SCHEMA);
            if g.json {
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                let mut out = String::new();
                render(&doc, 0, &mut out);
                print!("{out}");
            }
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Computation(msg)) => {
            if g.json {
                println!("{}", json!({ "schema": SCHEMA, "error": msg }));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(EXIT_COMPUTATION)
        }
    }
}
