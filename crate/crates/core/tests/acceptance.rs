//! Acceptance suite: one PASS/FAIL line per criterion. All tolerances are
//! exact integer equalities or inequalities.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use loewylab::certify::{
    build_certificate, certificate_sop, linearity_defect_check, verify_certificate, CertificateOutcome, CertifyConfig,
    LiftCertificate,
};
use loewylab::graded::{is_cohen_macaulay, random_linear_sop, GradedView};
use loewylab::harness::{corpus, corpus_ring, verify, InvariantReport, VerifyConfig};
use loewylab::koszul::regularity;
use loewylab::localring::{cohen_presentation, gll_estimate, ArtinAlgebra};
use loewylab::oracle::{betti_by_linear_algebra, oracle_suite, tor_with_residue_field, OracleConfig};
use loewylab::resolve::{complexity_probe, min_resolution};
use loewylab::ring_core::parse_ring;
use loewylab::stdbasis::{Limits, QuotientRing};
use loewylab::RingSpec;

type Check = Result<Vec<String>, String>;

struct Suite {
    failed: usize,
}

impl Suite {
    fn run(&mut self, id: u32, title: &str, budget: Duration, f: impl FnOnce() -> Check) {
        let t0 = Instant::now();
        let res = f();
        let took = t0.elapsed();
        let res = match res {
            Ok(notes) if took > budget => Err(format!("took {took:.1?}, budget {budget:?}; {}", notes.join("; "))),
            other => other,
        };
        match res {
            Ok(notes) => {
                println!("PASS {id} {title} [{took:.1?}]");
                for n in notes {
                    println!("     {n}");
                }
            }
            Err(why) => {
                self.failed += 1;
                println!("FAIL {id} {title} [{took:.1?}]: {why}");
            }
        }
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<String, String> {
    if got == want {
        Ok(format!("{what} = {got:?}"))
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn err(e: loewylab::Error) -> String {
    e.to_string()
}

fn strict_cm(spec: &RingSpec) -> Result<bool, String> {
    let view = GradedView::tangent_cone(spec, Limits::none()).map_err(err)?;
    Ok(is_cohen_macaulay(&view, 1, Limits::none()).map_err(err)?.is_cm)
}

fn reg(spec: &RingSpec, seed: u64) -> Result<u32, String> {
    let view = GradedView::tangent_cone(spec, Limits::none()).map_err(err)?;
    Ok(regularity(&view, seed, Limits::none()).map_err(err)?.value)
}

fn destefani() -> Check {
    let e2 = corpus_ring("E2").unwrap();
    let mut notes = vec![
        expect("regularity", reg(&e2, 1)?, 6)?,
        expect("strict_cm", strict_cm(&e2)?, false)?,
    ];
    let p = cohen_presentation(&e2, Limits::none()).map_err(err)?;
    notes.push(expect("maxord", p.maxord, Some(3))?);
    notes.push(expect("t_mark bound", p.t_mark_bound, Some(4))?);
    let g = gll_estimate(&e2, 200, 3, 1, Limits::none()).map_err(err)?;
    notes.push(expect("gll (200 samples, order <= 3)", g.value, 6)?);
    notes.push(expect("gll certified", g.certified, false)?);
    Ok(notes)
}

fn e3_family() -> Check {
    let mut notes = Vec::new();
    for n in [2u32, 3] {
        let spec = corpus_ring(&format!("E3n{n}")).unwrap();
        let t0 = Instant::now();
        let cut = [spec.poly("x").unwrap(), spec.poly("z").unwrap()];
        let red = ArtinAlgebra::from_ring(&spec, &cut, Limits::none()).map_err(err)?;
        notes.push(expect(&format!("n={n}: ll(R/(x,z))"), red.loewy_length(), 2 * n)?);
        notes.push(expect(&format!("n={n}: strict_cm"), strict_cm(&spec)?, true)?);
        notes.push(expect(&format!("n={n}: regularity"), reg(&spec, 1)?, 2 * n - 1)?);
        let g = gll_estimate(&spec, 50, 1, 1, Limits::none()).map_err(err)?;
        notes.push(expect(&format!("n={n}: gll (value, certified)"), (g.value, g.certified), (2 * n, true))?);
        let p = cohen_presentation(&spec, Limits::none()).map_err(err)?;
        notes.push(expect(&format!("n={n}: t_mark bound"), p.t_mark_bound, Some(4))?);
        if t0.elapsed() > Duration::from_secs(300) {
            return Err(format!("n={n} took {:?}", t0.elapsed()));
        }
    }
    Ok(notes)
}

fn strict_cm_corpus() -> Result<Vec<(&'static str, RingSpec)>, String> {
    let mut out = Vec::new();
    for r in corpus() {
        if strict_cm(&r.spec)? {
            out.push((r.id, r.spec));
        }
    }
    Ok(out)
}

fn perfect_modules() -> Check {
    let mut notes = Vec::new();
    for (id, spec) in strict_cm_corpus()? {
        let r = reg(&spec, 1)?;
        let view = GradedView::tangent_cone(&spec, Limits::none()).map_err(err)?;
        let mut lls = Vec::new();
        for seed in [1u64, 2] {
            let g = gll_estimate(&spec, 40, 2, seed, Limits::none()).map_err(err)?;
            if !g.certified || g.value != r + 1 {
                return Err(format!("{id} seed {seed}: gll {} certified {} but reg + 1 = {}", g.value, g.certified, r + 1));
            }
            for stream in 0..3u64 {
                let x = random_linear_sop(&view, seed, 100 + stream, Limits::none()).map_err(err)?;
                let ll = ArtinAlgebra::from_ring(&spec, &x, Limits::none()).map_err(err)?.loewy_length();
                if ll != r + 1 {
                    return Err(format!("{id} seed {seed} sop {stream}: ll(R/(x)) = {ll}, reg + 1 = {}", r + 1));
                }
                lls.push(ll);
            }
        }
        notes.push(format!("{id}: gll = reg + 1 = {} = ll(R/(x_lin)) over {} linear sops", r + 1, lls.len()));
    }
    Ok(notes)
}

fn certificates() -> Check {
    let mut notes = Vec::new();
    for (id, spec) in strict_cm_corpus()? {
        let n = reg(&spec, 1)?;
        let cfg = CertifyConfig {
            target_n: Some(n),
            ..CertifyConfig::default()
        };
        let cert = match build_certificate(&spec, cfg).map_err(err)? {
            CertificateOutcome::Success(c) => c,
            CertificateOutcome::Failure { step, reason, .. } => {
                return Err(format!("{id}: builder failed at step {step}: {reason}"))
            }
        };
        let text = serde_json::to_string(&cert).map_err(|e| e.to_string())?;
        let parsed: LiftCertificate = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        verify_certificate(&parsed, Limits::none()).map_err(|e| format!("{id}: {e}"))?;
        notes.push(format!("{id}: n = {} at d = {}, re-verified from {} bytes", parsed.n, parsed.d, text.len()));
    }
    let e2 = corpus_ring("E2").unwrap();
    let cfg = CertifyConfig {
        target_n: Some(6),
        ..CertifyConfig::default()
    };
    match build_certificate(&e2, cfg).map_err(err)? {
        CertificateOutcome::Failure { step, reason, .. } => {
            notes.push(format!("E2 target n = 6: FAILURE at step {step} ({reason})"))
        }
        CertificateOutcome::Success(_) => notes.push("E2 target n = 6: builder succeeded".into()),
    }
    Ok(notes)
}

fn bound_suite() -> Check {
    let reports: Vec<InvariantReport> = corpus()
        .iter()
        .map(|r| verify(r.id, &r.spec, VerifyConfig::default()))
        .collect();
    let mut notes = Vec::new();
    for r in &reports {
        if !r.errors.is_empty() {
            return Err(format!("{}: {:?}", r.ring, r.errors));
        }
        if !r.violations.is_empty() {
            return Err(format!("{}: {}", r.ring, r.violations.join("; ")));
        }
        let wanted = if r.dim == Some(0) { 1 } else { 50 };
        if r.modules.len() < wanted {
            return Err(format!("{}: only {} test modules", r.ring, r.modules.len()));
        }
        let checks: usize = r.modules.iter().map(|m| m.checks.len()).sum();
        let min_ll = r.modules.iter().map(|m| m.ll).min().unwrap();
        notes.push(format!("{}: {} modules, {checks} checks, min ll {min_ll}", r.ring, r.modules.len()));
    }
    Ok(notes)
}

fn linearity_defect() -> Check {
    let mut notes = Vec::new();
    for id in ["E3n2", "H1"] {
        let spec = corpus_ring(id).unwrap();
        let r = reg(&spec, 1)?;
        let q = QuotientRing::new(spec.field(), spec.nvars(), spec.gens(), Limits::none()).map_err(err)?;
        let sop = certificate_sop(&spec, 1, Limits::none()).map_err(err)?;
        for j in [r, r + 1] {
            let ok = linearity_defect_check(&q, &sop, 3, j).map_err(err)?;
            if ok.iter().any(|b| !b) {
                return Err(format!("{id}: j = {j}, per-i results {ok:?}"));
            }
            notes.push(format!("{id}: j = {j}, i = 0..=3 hold"));
        }
    }
    Ok(notes)
}

fn complexity() -> Check {
    let spec = parse_ring("ring { vars = [x, y]; ideal = [\"x^4\", \"y^4\"] }").unwrap();
    let (f, nv) = (spec.field(), spec.nvars());
    let q = QuotientRing::new(f, nv, spec.gens(), Limits::none()).map_err(err)?;
    let pres = vec![vec![spec.poly("x^2").unwrap()], vec![spec.poly("y^2").unwrap()]];
    let d = 6;
    let res = min_resolution(&q, &pres, 1, d).map_err(err)?;
    let alg = ArtinAlgebra::from_ring(&spec, &[], Limits::none()).map_err(err)?;
    let (lin, _) = betti_by_linear_algebra(&alg, &pres, 1, d).map_err(err)?;
    let tor = tor_with_residue_field(&alg, &pres, 1, d).map_err(err)?;
    if res.betti != lin || res.betti != tor {
        return Err(format!("betti {:?}, linear algebra {lin:?}, Tor {tor:?}", res.betti));
    }
    let quotient = [spec.poly("x^2").unwrap(), spec.poly("y^2").unwrap()];
    let ll = ArtinAlgebra::from_ring(&spec, &quotient, Limits::none()).map_err(err)?.loewy_length();
    let probe = complexity_probe(&q, &pres, 1, d, 2, ll, Some(4)).map_err(err)?;
    if !probe.applicable || !probe.ok {
        return Err(format!("probe {probe:?}"));
    }
    let mut notes = vec![format!("betti {:?} (resolution = linear algebra = Tor)", res.betti)];
    for row in &probe.rows {
        let want = row.m as u64 + 1;
        if row.bound != want || (row.beta as u64) < want {
            return Err(format!("m = {}: beta {} bound {} expected >= {want}", row.m, row.beta, row.bound));
        }
        notes.push(format!("beta_{} = {} >= {}", 2 * row.m, row.beta, row.bound));
    }
    Ok(notes)
}

fn oracle() -> Check {
    let mut notes = Vec::new();
    for r in corpus() {
        let cfg = OracleConfig {
            max_degree: 12,
            probe_degree: 8,
            seed: 1,
            ..OracleConfig::default()
        };
        let rep = oracle_suite(&r.spec, cfg).map_err(err)?;
        if !rep.ok() {
            let bad: Vec<String> = rep
                .checks
                .iter()
                .filter(|c| !c.ok)
                .map(|c| format!("{}: {} vs {}", c.name, c.computed, c.brute))
                .collect();
            return Err(format!("{}: {}", r.id, bad.join("; ")));
        }
        notes.push(format!("{}: {} checks, {} membership probes, 0 mismatches", r.id, rep.checks.len(), rep.probes));
    }
    Ok(notes)
}

fn main() -> ExitCode {
    let minutes = |m: u64| Duration::from_secs(60 * m);
    let mut suite = Suite { failed: 0 };
    suite.run(1, "DeStefani ring invariants", minutes(5), destefani);
    suite.run(2, "E3(n) reduction, regularity and gll for n = 2, 3", minutes(10), e3_family);
    suite.run(3, "gll = reg + 1 = ll(R/(x_lin)) on strict CM rings", minutes(10), perfect_modules);
    suite.run(4, "lifting certificates at n = reg, d = 4", minutes(10), certificates);
    suite.run(5, "module bounds over sampled sops", minutes(10), bound_suite);
    suite.run(6, "linearity defect at j = reg, reg + 1", minutes(5), linearity_defect);
    suite.run(7, "complexity probe on k[x,y]/(x^4,y^4)", minutes(5), complexity);
    suite.run(8, "oracle equivalence on the corpus", minutes(10), oracle);
    if suite.failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria fail", suite.failed);
        ExitCode::FAILURE
    }
}
