//! Chain-map certificates `σ: F -> A` from the minimal resolution of the
//! residue field to the Koszul complex on a superficial sop, with entries of
//! order at least `n`. A valid certificate gives the Loewy lower bound
//! `ℓℓ(M) >= n + 1` for modules of small flat dimension.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{random_linear_sop, GradedView};
use crate::localring::ArtinAlgebra;
use crate::resolve::{minimal_columns, residue_field_presentation};
use crate::ring_core::{parse_ring, Monomial, Polynomial, RingSpec};
use crate::stdbasis::{Column, Limits, QuotientRing};

pub const CERTIFICATE_SCHEMA: u32 = 1;
const SOP_STREAM: u64 = 0x4345_5254;

/// Size-`k` subsets of `0..d` in lexicographic order.
pub fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            go(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= d {
        go(0, d, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Columns of the Koszul differential `∂_i: Λ^i R^d -> Λ^{i-1} R^d` on `sop`,
/// with `∂(e_S) = Σ_k (-1)^k x_{S_k} e_{S - S_k}`.
pub fn koszul_differential(sop: &[Polynomial], field: crate::PrimeField, nvars: usize, i: usize) -> Vec<Column> {
    let d = sop.len();
    if i == 0 || i > d {
        return Vec::new();
    }
    let rows = subsets(d, i - 1);
    subsets(d, i)
        .into_iter()
        .map(|s| {
            let mut col = vec![Polynomial::zero(field, nvars); rows.len()];
            for (k, &v) in s.iter().enumerate() {
                let mut face = s.clone();
                face.remove(k);
                let r = rows.binary_search(&face).expect("face is a subset");
                col[r] = if k % 2 == 0 { sop[v].clone() } else { sop[v].neg() };
            }
            col
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn min_order(cols: &[Column]) -> Option<u32> {
    cols.iter().flatten().filter_map(|p| p.ord()).min()
}

/// A serialized chain-map certificate. Matrices are stored as lists of
/// columns of printed polynomials.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LiftCertificate {
    pub schema: u32,
    pub ring: String,
    pub char: u32,
    pub seed: u64,
    pub sop: Vec<String>,
    pub n: u32,
    pub d: usize,
    pub socle_elt: String,
    /// `resolution[i]` is `∂^F_{i+1}`.
    pub resolution: Vec<Vec<Vec<String>>>,
    /// `sigma[i]` is `σ_i: F_i -> A_i`.
    pub sigma: Vec<Vec<Vec<String>>>,
    pub min_entry_order: Vec<Option<u32>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum CertificateOutcome {
    Success(LiftCertificate),
    Failure {
        step: usize,
        n: u32,
        sop: Vec<String>,
        reason: String,
        residual: Vec<String>,
    },
}

impl CertificateOutcome {
    pub fn certificate(&self) -> Option<&LiftCertificate> {
        match self {
            CertificateOutcome::Success(c) => Some(c),
            CertificateOutcome::Failure { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyConfig {
    pub depth: usize,
    pub seed: u64,
    /// Order to certify; defaults to `ℓℓ(R/(x)) - 1`.
    pub target_n: Option<u32>,
    pub limits: Limits,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            depth: 4,
            seed: 0,
            target_n: None,
            limits: Limits::none(),
        }
    }
}

/// Generators `x^α * c` of `m^n * span(cols)`.
fn scaled_generators(cols: &[Column], nvars: usize, n: u32) -> Vec<Column> {
    let monos = Monomial::all_of_degree(nvars, n);
    let mut out = Vec::with_capacity(cols.len() * monos.len());
    for c in cols {
        for a in &monos {
            out.push(c.iter().map(|p| p.mul_monomial(a, 1)).collect());
        }
    }
    out
}

fn print_cols(spec: &RingSpec, cols: &[Column]) -> Vec<Vec<String>> {
    cols.iter()
        .map(|c| c.iter().map(|p| spec.fmt_poly(p)).collect())
        .collect()
}

/// The sop used for certificates: the first set of variables (in
/// lexicographic order of index sets) whose images form a system of
/// parameters of the tangent cone, falling back to random linear forms.
/// Either choice is superficial; variables keep every later standard-basis
/// computation sparse.
pub fn certificate_sop(spec: &RingSpec, seed: u64, limits: Limits) -> Result<Vec<Polynomial>> {
    let view = GradedView::tangent_cone(spec, limits)?;
    for set in subsets(spec.nvars(), view.dim) {
        let forms: Vec<Polynomial> = set.iter().map(|&v| spec.var(v)).collect();
        if view.quotient(&forms, limits)?.dim == 0 {
            return Ok(forms);
        }
    }
    random_linear_sop(&view, seed, SOP_STREAM, limits)
}

/// Builds `σ: F -> A` step by step. The resolution `F` of `k` is computed
/// alongside: when a lift only exists up to a unit `u`, the corresponding
/// basis vector of `F` is rescaled by `u` before the next syzygy step.
pub fn build_certificate(spec: &RingSpec, cfg: CertifyConfig) -> Result<CertificateOutcome> {
    let limits = cfg.limits;
    let (field, nv) = (spec.field(), spec.nvars());
    let sop = certificate_sop(spec, cfg.seed, limits)?;
    let sop_text: Vec<String> = sop.iter().map(|f| spec.fmt_poly(f)).collect();
    let dim = sop.len();
    let rbar = ArtinAlgebra::from_ring(spec, &sop, limits)?;
    let natural = rbar.loewy_length() - 1;
    let n = cfg.target_n.unwrap_or(natural);
    if n > natural {
        return Ok(CertificateOutcome::Failure {
            step: 0,
            n,
            sop: sop_text,
            reason: format!("R/(x) has Loewy length {}, so its socle has no element of order {n}", natural + 1),
            residual: Vec::new(),
        });
    }
    let (s, _) = rbar.socle_max_order_element();
    let ring = QuotientRing::new(field, nv, spec.gens(), limits)?;

    let mut betti = vec![1usize];
    let mut diffs: Vec<Vec<Column>> = Vec::new();
    let mut sigma: Vec<Vec<Column>> = vec![vec![vec![s.clone()]]];
    for i in 0..cfg.depth {
        limits.check_time()?;
        // ∂^F_{i+1}
        let next = if i == 0 {
            minimal_columns(&ring, residue_field_presentation(&ring), 1)?
        } else {
            let syz = ring.syzygies(&diffs[i - 1], betti[i - 1])?;
            minimal_columns(&ring, syz, betti[i])?
        };
        betti.push(next.len());
        diffs.push(next);

        let rank_a = binomial(dim, i);
        let map = koszul_differential(&sop, field, nv, i + 1);
        let targets: Vec<Column> = diffs[i]
            .iter()
            .map(|c| ring.apply(&sigma[i], rank_a, c))
            .collect();
        let lifts = ring.preimages_with_residuals(&map, rank_a, n, &targets)?;
        let mut cols = Vec::with_capacity(lifts.len());
        for (l, lift) in lifts.into_iter().enumerate() {
            let p = match lift {
                Ok(p) => p,
                Err(residual) => {
                    return Ok(CertificateOutcome::Failure {
                        step: i + 1,
                        n,
                        sop: sop_text,
                        reason: format!(
                            "column {l} of σ_{i}∂_{} has no preimage in ∂(m^{n} A_{})",
                            i + 1,
                            i + 1
                        ),
                        residual: residual.iter().map(|p| spec.fmt_poly(p)).collect(),
                    })
                }
            };
            if p.unit != Polynomial::one(field, nv) {
                diffs[i][l] = diffs[i][l].iter().map(|e| e.mul(&p.unit)).collect();
            }
            cols.push(p.v);
        }
        sigma.push(cols);
    }
    let cert = LiftCertificate {
        schema: CERTIFICATE_SCHEMA,
        ring: spec.to_text(),
        char: field.characteristic(),
        seed: cfg.seed,
        sop: sop_text,
        n,
        d: cfg.depth,
        socle_elt: spec.fmt_poly(&s),
        resolution: diffs.iter().map(|c| print_cols(spec, c)).collect(),
        min_entry_order: sigma.iter().map(|c| min_order(c)).collect(),
        sigma: sigma.iter().map(|c| print_cols(spec, c)).collect(),
    };
    Ok(CertificateOutcome::Success(cert))
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidCertificate(msg.into())
}

fn parse_cols(spec: &RingSpec, cols: &[Vec<String>], rows: usize, what: &str) -> Result<Vec<Column>> {
    cols.iter()
        .map(|c| {
            if c.len() != rows {
                return Err(invalid(format!("{what}: column of length {} where {rows} expected", c.len())));
            }
            c.iter().map(|t| spec.poly(t)).collect()
        })
        .collect()
}

/// Re-checks a certificate from its serialized data alone: the sop and socle
/// condition, that `F` is a minimal resolution of `k` through the recorded
/// depth, the chain-map law and the entry orders.
pub fn verify_certificate(cert: &LiftCertificate, limits: Limits) -> Result<()> {
    if cert.schema != CERTIFICATE_SCHEMA {
        return Err(invalid(format!("unsupported schema {}", cert.schema)));
    }
    let spec = parse_ring(&cert.ring)?;
    if spec.field().characteristic() != cert.char {
        return Err(invalid("characteristic does not match the ring"));
    }
    let (field, nv) = (spec.field(), spec.nvars());
    let n = cert.n;
    let d = cert.d;
    if cert.resolution.len() != d || cert.sigma.len() != d + 1 {
        return Err(invalid("matrix count does not match the depth"));
    }
    let sop: Vec<Polynomial> = cert.sop.iter().map(|t| spec.poly(t)).collect::<Result<_>>()?;
    let ring = QuotientRing::new(field, nv, spec.gens(), limits)?;

    // sop: dim R elements with R/(x) artinian
    let mut cut_gens = spec.gens().to_vec();
    cut_gens.extend(sop.iter().cloned());
    let rbar = QuotientRing::new(field, nv, &cut_gens, limits)?;
    let view = GradedView::tangent_cone(&spec, limits)?;
    if sop.len() != view.dim {
        return Err(invalid(format!("{} parameters for a ring of dimension {}", sop.len(), view.dim)));
    }
    if ArtinAlgebra::from_ring(&spec, &sop, limits).is_err() {
        return Err(invalid("the recorded sop does not cut out an artinian ring"));
    }

    // socle condition in R/(x)
    let s = spec.poly(&cert.socle_elt)?;
    let s_red = rbar.reduce(&s)?;
    if s_red.is_zero() {
        return Err(invalid("socle element vanishes in R/(x)"));
    }
    if s_red.ord().unwrap() < n {
        return Err(invalid(format!("socle element has order {} < {n} in R/(x)", s_red.ord().unwrap())));
    }
    for v in 0..nv {
        if !rbar.is_zero(&s.mul(&spec.var(v)))? {
            return Err(invalid(format!("variable {} does not annihilate the socle element", spec.vars()[v])));
        }
    }

    // F is a minimal resolution of k through F_d
    let mut betti = vec![1usize];
    let mut diffs = Vec::with_capacity(d);
    for (i, cols) in cert.resolution.iter().enumerate() {
        let parsed = parse_cols(&spec, cols, betti[i], &format!("∂^F_{}", i + 1))?;
        if parsed.iter().flatten().any(|p| p.constant_term() != 0) {
            return Err(invalid(format!("∂^F_{} has a unit entry", i + 1)));
        }
        betti.push(parsed.len());
        diffs.push(parsed);
    }
    if d > 0 {
        let image = ring.module(&diffs[0], 1)?;
        for v in 0..nv {
            if !image.contains(&vec![spec.var(v)])? {
                return Err(invalid("∂^F_1 does not generate the maximal ideal"));
            }
        }
    }
    for i in 1..d {
        let image = ring.module(&diffs[i], betti[i])?;
        for c in &diffs[i] {
            if !ring.column_is_zero(&ring.apply(&diffs[i - 1], betti[i - 1], c))? {
                return Err(invalid(format!("∂^F_{}∂^F_{} is not zero", i, i + 1)));
            }
        }
        for z in ring.syzygies(&diffs[i - 1], betti[i - 1])? {
            if !image.contains(&z)? {
                return Err(invalid(format!("F is not exact at F_{i}")));
            }
        }
    }

    // chain law and orders
    let dim = sop.len();
    let mut sigma = Vec::with_capacity(d + 1);
    for (i, cols) in cert.sigma.iter().enumerate() {
        let parsed = parse_cols(&spec, cols, binomial(dim, i), &format!("σ_{i}"))?;
        if parsed.len() != betti[i] {
            return Err(invalid(format!("σ_{i} has {} columns, F_{i} has rank {}", parsed.len(), betti[i])));
        }
        for p in parsed.iter().flatten() {
            if p.ord().map_or(false, |o| o < n) && !ring.is_zero(p)? {
                return Err(invalid(format!("σ_{i} has an entry of order {} < {n}", p.ord().unwrap())));
            }
        }
        if cert.min_entry_order.get(i) != Some(&min_order(&parsed)) {
            return Err(invalid(format!("recorded entry order of σ_{i} is wrong")));
        }
        sigma.push(parsed);
    }
    if sigma[0] != vec![vec![s]] {
        return Err(invalid("σ_0 is not multiplication by the socle element"));
    }
    for i in 1..=d {
        let map = koszul_differential(&sop, field, nv, i);
        let rank = binomial(dim, i - 1);
        for (l, col) in diffs[i - 1].iter().enumerate() {
            let left = ring.apply(&sigma[i - 1], rank, col);
            let right = ring.apply(&map, rank, &sigma[i][l]);
            let diff: Column = left.iter().zip(&right).map(|(a, b)| a.sub(b)).collect();
            if !ring.column_is_zero(&diff)? {
                return Err(invalid(format!("chain law fails at step {i}, column {l}")));
            }
        }
    }
    Ok(())
}

/// The machine-checked consequence of a valid certificate.
#[derive(Clone, Debug, Serialize)]
pub struct BoundStatement {
    pub bound: u32,
    pub depth: usize,
    pub statement: String,
    pub sop: Vec<String>,
    pub seed: u64,
    pub char: u32,
}

pub fn certified_bound(cert: &LiftCertificate, limits: Limits) -> Result<BoundStatement> {
    verify_certificate(cert, limits)?;
    let bound = cert.n + 1;
    Ok(BoundStatement {
        bound,
        depth: cert.d,
        statement: format!(
            "every nonzero R-module M with Tor^R_{}(M,k) = 0 satisfies ll_R(M) >= {bound}",
            cert.d + 1
        ),
        sop: cert.sop.clone(),
        seed: cert.seed,
        char: cert.char,
    })
}

/// For `i = 0..=i_max`, whether `∂(A_{i+1}) ∩ m^{j+1} A_i = ∂(m^j A_{i+1})`
/// for the Koszul complex `A` on `sop`, decided by mutual membership.
pub fn linearity_defect_check(ring: &QuotientRing, sop: &[Polynomial], i_max: usize, j: u32) -> Result<Vec<bool>> {
    let (field, nv) = (ring.field(), ring.nvars());
    let dim = sop.len();
    let mut out = Vec::with_capacity(i_max + 1);
    for i in 0..=i_max {
        ring.limits().check_time()?;
        let rank = binomial(dim, i);
        let map = koszul_differential(sop, field, nv, i + 1);
        if rank == 0 || map.is_empty() {
            out.push(true);
            continue;
        }
        let units: Vec<Column> = (0..rank)
            .map(|k| {
                let mut c = ring.zero_column(rank);
                c[k] = Polynomial::one(field, nv);
                c
            })
            .collect();
        let power = scaled_generators(&units, nv, j + 1);
        let left = ring.intersection(&map, &power, rank)?;
        let right = scaled_generators(&map, nv, j);
        let left_sb = ring.module(&left, rank)?;
        let right_sb = ring.module(&right, rank)?;
        let mut equal = true;
        for c in &left {
            if !right_sb.contains(c)? {
                equal = false;
                break;
            }
        }
        if equal {
            for c in &right {
                if !left_sb.contains(c)? {
                    equal = false;
                    break;
                }
            }
        }
        out.push(equal);
    }
    Ok(out)
}
