//! Built-in ring corpus and the per-ring verification report.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{build_certificate, verify_certificate, CertificateOutcome, CertifyConfig};
use crate::error::{Error, Result};
use crate::graded::{is_cohen_macaulay, random_linear_sop, GradedView};
use crate::koszul::regularity;
use crate::localring::{cohen_presentation, gll_estimate, sample_parameters, ArtinAlgebra};
use crate::ring_core::parse_ring;
use crate::stdbasis::Limits;
use crate::RingSpec;

pub const REPORT_SCHEMA: u32 = 1;

/// Stream used for the linear sop behind `minimal_regularity`.
const MINREG_STREAM: u64 = 0x6d69_6e72;
/// Offset separating test-module samples from `gll` samples.
const MODULE_INDEX_BASE: u64 = 1 << 40;

#[derive(Clone, Debug)]
pub struct CorpusRing {
    pub id: &'static str,
    pub description: &'static str,
    pub spec: RingSpec,
}

fn e3_text(n: u32) -> String {
    format!("ring {{ vars = [a, b, x, y, z]; ideal = [\"a^2 - x^{n}\", \"a*b - y^{n}\", \"b^2 - z^{n}\"] }}")
}

/// The built-in rings, all over `F_32003`.
pub fn corpus() -> Vec<CorpusRing> {
    let table: Vec<(&'static str, &'static str, String)> = vec![
        ("E1", "k[x]/(x^3)", "ring { vars = [x]; ideal = [\"x^3\"] }".into()),
        (
            "E2",
            "k[[x,y,z]]/(x^2 - y^5, x*y^2 + y*z^3 - z^5)",
            "ring { vars = [x, y, z]; ideal = [\"x^2 - y^5\", \"x*y^2 + y*z^3 - z^5\"] }".into(),
        ),
        ("E3n2", "k[[a,b,x,y,z]]/(a^2 - x^2, ab - y^2, b^2 - z^2)", e3_text(2)),
        ("E3n3", "k[[a,b,x,y,z]]/(a^2 - x^3, ab - y^3, b^2 - z^3)", e3_text(3)),
        (
            "E4",
            "k[x,y]/(x^2 + y^2), graded",
            "ring { vars = [x, y]; model = graded; ideal = [\"x^2 + y^2\"] }".into(),
        ),
        ("E5", "k[[x,y]]", "ring { vars = [x, y]; ideal = [] }".into()),
        ("E6", "k[x,y]/(x,y)^2", "ring { vars = [x, y]; ideal = [\"x^2\", \"x*y\", \"y^2\"] }".into()),
        ("H1", "k[[x,y]]/(x^2 - y^3)", "ring { vars = [x, y]; ideal = [\"x^2 - y^3\"] }".into()),
    ];
    table
        .into_iter()
        .map(|(id, description, text)| CorpusRing {
            id,
            description,
            spec: parse_ring(&text).expect("corpus ring parses"),
        })
        .collect()
}

pub fn corpus_ring(id: &str) -> Option<RingSpec> {
    corpus().into_iter().find(|r| r.id.eq_ignore_ascii_case(id)).map(|r| r.spec)
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Samples per parameter order for the `gll` estimate.
    pub samples: usize,
    pub max_param_order: u32,
    /// Test modules `R/(x)` per ring.
    pub modules: usize,
    pub certificate: bool,
    pub depth: usize,
    pub degree_cap: Option<u32>,
    pub time_budget: Option<Duration>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 1,
            samples: 200,
            max_param_order: 3,
            modules: 50,
            certificate: true,
            depth: 4,
            degree_cap: None,
            time_budget: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GllSummary {
    pub value: u32,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleRow {
    pub sop: Vec<String>,
    pub ll: u32,
    /// Set when only `ℓℓ(M) >= ll` was established (the computation is
    /// truncated above every asserted bound).
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub ll_at_least: bool,
    pub checks: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateSummary {
    pub n: u32,
    pub d: usize,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub schema: u32,
    pub ring: String,
    pub char: u32,
    pub dim: Option<usize>,
    pub ord: Option<u32>,
    pub maxord: Option<u32>,
    pub is_ci: Option<bool>,
    pub t_mark_bound: Option<u32>,
    pub regularity: Option<u32>,
    pub strict_cm: Option<bool>,
    pub minimal_regularity: Option<bool>,
    pub gll: Option<GllSummary>,
    pub modules: Vec<ModuleRow>,
    pub certificate: Option<CertificateSummary>,
    pub seeds: Vec<u64>,
    pub violations: Vec<String>,
    pub errors: BTreeMap<String, String>,
}

impl InvariantReport {
    /// Violations are fatal on strict Cohen-Macaulay rings; elsewhere only
    /// the unconditional bounds are asserted, so any recorded violation is too.
    pub fn failed(&self) -> bool {
        !self.violations.is_empty()
    }
}

fn capture<T>(errors: &mut BTreeMap<String, String>, key: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            errors.insert(key.to_string(), e.to_string());
            None
        }
    }
}

/// Loewy lengths of sampled test modules `R/(x)`; each entry is
/// `(sop, ℓℓ, exact)`, where inexact means `ℓℓ >= cap`.
fn sample_modules(
    spec: &RingSpec,
    dim: usize,
    cap: u32,
    cfg: &VerifyConfig,
    limits: Limits,
) -> Result<Vec<(Vec<String>, u32, bool)>> {
    if dim == 0 {
        let a = ArtinAlgebra::from_ring(spec, &[], limits)?;
        return Ok(vec![(Vec::new(), a.loewy_length(), true)]);
    }
    let levels = cfg.max_param_order.max(1);
    let attempts = (cfg.modules * 4).max(cfg.modules + 8) as u64;
    let rows: Vec<Result<Option<(Vec<String>, u32, bool)>>> = (0..attempts)
        .into_par_iter()
        .map(|k| {
            let level = 1 + (k % levels as u64) as u32;
            let params = sample_parameters(spec, dim, cfg.seed, MODULE_INDEX_BASE + k, level);
            let sop = params.iter().map(|f| spec.fmt_poly(f)).collect();
            match ArtinAlgebra::below(spec, &params, cap, limits) {
                Ok(Some(a)) => Ok(Some((sop, a.loewy_length(), true))),
                Ok(None) => Ok(Some((sop, cap, false))),
                Err(Error::InvalidSop(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut out = Vec::new();
    for r in rows {
        if let Some(row) = r? {
            out.push(row);
            if out.len() == cfg.modules {
                break;
            }
        }
    }
    if out.len() < cfg.modules {
        return Err(Error::SamplingFailed {
            attempts: attempts as usize,
        });
    }
    Ok(out)
}

/// Computes every invariant of `spec` and checks the lower bounds on
/// sampled test modules `R/(x)`. Errors are recorded per field.
pub fn verify(id: &str, spec: &RingSpec, cfg: VerifyConfig) -> InvariantReport {
    let limits = Limits {
        degree_cap: cfg.degree_cap,
        deadline: cfg.time_budget.map(|b| Instant::now() + b),
    };
    let mut errors = BTreeMap::new();
    let mut violations = Vec::new();

    let view = capture(&mut errors, "tangent_cone", GradedView::tangent_cone(spec, limits));
    let dim = view.as_ref().map(|v| v.dim);
    let pres = capture(&mut errors, "presentation", cohen_presentation(spec, limits));
    let (ord, maxord, is_ci, t_mark) = match &pres {
        Some(p) => (p.ord, p.maxord, Some(p.is_ci), p.t_mark_bound),
        None => (None, None, None, None),
    };
    let (reg, strict_cm, minimal_regularity) = match &view {
        Some(v) => {
            let reg = capture(&mut errors, "regularity", regularity(v, cfg.seed, limits).map(|r| r.value));
            let cm = capture(&mut errors, "strict_cm", is_cohen_macaulay(v, cfg.seed, limits).map(|w| w.is_cm));
            let lin = capture(
                &mut errors,
                "minimal_regularity",
                random_linear_sop(v, cfg.seed, MINREG_STREAM, limits)
                    .and_then(|x| ArtinAlgebra::from_ring(spec, &x, limits))
                    .map(|a| a.loewy_length()),
            );
            let minreg = match (reg, lin) {
                (Some(r), Some(l)) => Some(r + 1 == l),
                _ => None,
            };
            (reg, cm, minreg)
        }
        None => (None, None, None),
    };

    let gll = capture(
        &mut errors,
        "gll",
        gll_estimate(spec, cfg.samples, cfg.max_param_order, cfg.seed, limits).map(|g| GllSummary {
            value: g.value,
            certified: g.certified,
        }),
    );
    if let (Some(g), Some(m)) = (&gll, maxord) {
        if g.value < m {
            violations.push(format!("gll {} is below maxord {m}", g.value));
        }
    }

    let mut modules = Vec::new();
    if let Some(d) = dim.filter(|_| cfg.modules > 0) {
        let bounds = [maxord, t_mark, reg.filter(|_| strict_cm == Some(true)).map(|r| r + 1)];
        let cap = bounds.iter().flatten().copied().max().unwrap_or(1) + 1;
        if let Some(rows) = capture(&mut errors, "modules", sample_modules(spec, d, cap, &cfg, limits)) {
            for (sop, ll, exact) in rows {
                let mut checks = BTreeMap::new();
                if let Some(m) = maxord {
                    checks.insert("maxord".to_string(), ll >= m);
                }
                if is_ci == Some(true) {
                    if let Some(t) = t_mark {
                        checks.insert("t_mark".to_string(), ll >= t);
                    }
                }
                if strict_cm == Some(true) {
                    if let Some(r) = reg {
                        checks.insert("reg_plus_one".to_string(), ll > r);
                    }
                }
                for (name, ok) in &checks {
                    if !ok {
                        violations.push(format!("module R/({}) with Loewy length {ll} fails {name}", sop.join(", ")));
                    }
                }
                modules.push(ModuleRow {
                    sop,
                    ll,
                    ll_at_least: !exact,
                    checks,
                });
            }
        }
    }

    let certificate = if cfg.certificate {
        let target_n = if strict_cm == Some(true) { reg } else { None };
        let cc = CertifyConfig {
            depth: cfg.depth,
            seed: cfg.seed,
            target_n,
            limits,
        };
        let summary = build_certificate(spec, cc).map(|out| match out {
            CertificateOutcome::Success(cert) => {
                let check = verify_certificate(&cert, limits);
                CertificateSummary {
                    n: cert.n,
                    d: cert.d,
                    ok: check.is_ok(),
                    failure: check.err().map(|e| e.to_string()),
                }
            }
            CertificateOutcome::Failure { step, n, reason, .. } => CertificateSummary {
                n,
                d: cfg.depth,
                ok: false,
                failure: Some(format!("step {step}: {reason}")),
            },
        });
        let summary = capture(&mut errors, "certificate", summary);
        if strict_cm == Some(true) {
            match &summary {
                Some(s) if s.ok => {}
                Some(s) => violations.push(format!(
                    "certificate with n = {} failed on a strict Cohen-Macaulay ring: {}",
                    s.n,
                    s.failure.as_deref().unwrap_or("")
                )),
                None => {}
            }
        }
        summary
    } else {
        None
    };

    InvariantReport {
        schema: REPORT_SCHEMA,
        ring: id.to_string(),
        char: spec.field().characteristic(),
        dim,
        ord,
        maxord,
        is_ci,
        t_mark_bound: t_mark,
        regularity: reg,
        strict_cm,
        minimal_regularity,
        gll,
        modules,
        certificate,
        seeds: vec![cfg.seed],
        violations,
        errors,
    }
}

/// Verifies every corpus ring in parallel.
pub fn verify_corpus(cfg: VerifyConfig) -> Vec<InvariantReport> {
    corpus().par_iter().map(|r| verify(r.id, &r.spec, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyConfig {
        VerifyConfig {
            samples: 20,
            modules: 12,
            ..Default::default()
        }
    }

    #[test]
    fn corpus_ids_are_unique() {
        let ids: Vec<&str> = corpus().iter().map(|r| r.id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
        assert!(corpus_ring("e3n2").is_some());
        assert!(corpus_ring("E9").is_none());
    }

    #[test]
    fn corpus_generators_as_printed() {
        let e2 = corpus_ring("E2").unwrap();
        let printed: Vec<String> = e2.gens().iter().map(|g| e2.fmt_poly(g)).collect();
        assert_eq!(printed.len(), 2);
        assert_eq!(e2.gens()[0], e2.poly("x^2 - y^5").unwrap());
        assert_eq!(e2.gens()[1], e2.poly("x*y^2 + y*z^3 - z^5").unwrap());
        assert!(corpus_ring("E5").unwrap().gens().is_empty());
    }

    #[test]
    fn truncated_line_report() {
        let r = verify("E1", &corpus_ring("E1").unwrap(), quick());
        assert!(r.errors.is_empty(), "{:?}", r.errors);
        assert_eq!((r.dim, r.ord, r.maxord, r.t_mark_bound), (Some(0), Some(3), Some(3), Some(3)));
        assert_eq!(r.regularity, Some(2));
        assert_eq!(r.gll, Some(GllSummary { value: 3, certified: true }));
        assert_eq!(r.modules.len(), 1);
        assert_eq!(r.certificate.as_ref().map(|c| (c.n, c.ok)), Some((2, true)));
        assert!(!r.failed());
    }

    #[test]
    fn regular_ring_report() {
        let r = verify("E5", &corpus_ring("E5").unwrap(), quick());
        assert!(r.errors.is_empty(), "{:?}", r.errors);
        assert_eq!(r.regularity, Some(0));
        assert_eq!(r.gll.map(|g| g.value), Some(1));
        assert_eq!(r.maxord, None);
        assert_eq!(r.minimal_regularity, Some(true));
        assert!(r.modules.iter().all(|m| m.ll >= 1));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let spec = corpus_ring("H1").unwrap();
        assert_eq!(verify("H1", &spec, quick()), verify("H1", &spec, quick()));
    }

    #[test]
    fn budget_exhaustion_is_recorded() {
        let cfg = VerifyConfig {
            time_budget: Some(Duration::ZERO),
            ..quick()
        };
        let r = verify("E2", &corpus_ring("E2").unwrap(), cfg);
        assert!(!r.errors.is_empty());
        assert!(r.errors.values().any(|e| e.contains("time budget")));
    }
}
