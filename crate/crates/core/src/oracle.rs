//! Brute-force linear-algebra oracles on truncated polynomial rings, used to
//! cross-check the standard-basis machinery.
//!
//! `(I + m^N)/m^N` is spanned by the truncated products `μ·g` with `μ` a
//! monomial and `g` a generator, so everything modulo a power of the maximal
//! ideal is decidable by Gaussian elimination alone.

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{random_linear_sop, GradedView};
use crate::linalg::{DenseMatrix, SparseEchelon, SparseRow};
use crate::localring::ArtinAlgebra;
use crate::ring_core::{Monomial, Polynomial, PrimeField, RingSpec, Scalar};
use crate::stdbasis::{Column, Limits, QuotientRing};
use crate::util::rng_for;

/// `(I + m^N)/m^N` inside `Q/m^N`, with columns ordered by increasing degree.
pub struct TruncatedIdeal {
    n: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    ech: SparseEchelon,
}

impl TruncatedIdeal {
    pub fn new(field: PrimeField, nvars: usize, gens: &[Polynomial], n: u32) -> Self {
        let monomials: Vec<Monomial> = (0..n).flat_map(|d| Monomial::all_of_degree(nvars, d)).collect();
        let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut t = TruncatedIdeal {
            n,
            monomials,
            index,
            ech: SparseEchelon::new(field),
        };
        for g in gens {
            let Some(o) = g.ord() else { continue };
            for d in 0..n.saturating_sub(o) {
                for mu in Monomial::all_of_degree(nvars, d) {
                    let row = t.row(&g.mul_monomial(&mu, 1));
                    t.ech.insert(row);
                }
            }
        }
        t
    }

    pub fn truncation(&self) -> u32 {
        self.n
    }

    fn row(&self, f: &Polynomial) -> SparseRow {
        let mut row: SparseRow = f
            .terms()
            .iter()
            .filter(|(m, _)| m.degree() < self.n)
            .map(|(m, c)| (self.index[m], *c))
            .collect();
        row.sort_unstable_by_key(|e| e.0);
        row
    }

    /// `dim_k (m^j + I)/(m^{j+1} + I)` for `j < N`.
    pub fn hilbert_function(&self, j: u32) -> usize {
        assert!(j < self.n);
        let total = self.monomials.iter().filter(|m| m.degree() == j).count();
        let pivots = self.ech.pivot_columns().filter(|&c| self.monomials[c].degree() == j).count();
        total - pivots
    }

    /// `dim_k Q/(I + m^j)` for `j <= N`.
    pub fn colength(&self, j: u32) -> usize {
        (0..j).map(|d| self.hilbert_function(d)).sum()
    }

    /// Whether `f ∈ I + m^j` for `j <= N`.
    pub fn contains_mod(&self, f: &Polynomial, j: u32) -> bool {
        assert!(j <= self.n);
        match self.ech.reduce(self.row(f)).first() {
            None => true,
            Some(&(c, _)) => self.monomials[c].degree() >= j,
        }
    }
}

/// Loewy length of `Q/(gens)` localized, by brute force; `None` if the
/// Hilbert function does not vanish below `max_n`.
pub fn loewy_length_brute(field: PrimeField, nvars: usize, gens: &[Polynomial], max_n: u32) -> Option<u32> {
    let mut n = 4;
    loop {
        let t = TruncatedIdeal::new(field, nvars, gens, n.min(max_n));
        if let Some(j) = (0..t.truncation()).find(|&j| t.hilbert_function(j) == 0) {
            return Some(j);
        }
        if n >= max_n {
            return None;
        }
        n *= 2;
    }
}

/// Krull dimension read off a Hilbert function tail: the least `k` such that
/// the `k`-th finite differences vanish.
pub fn dim_from_tail(tail: &[i64]) -> Option<usize> {
    let mut cur = tail.to_vec();
    for k in 0..tail.len() {
        if cur.iter().all(|&v| v == 0) {
            return Some(k);
        }
        cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
    }
    None
}

/// One oracle comparison.
#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub computed: String,
    pub brute: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
    pub probes: usize,
    pub mismatches: usize,
}

impl OracleReport {
    pub fn ok(&self) -> bool {
        self.mismatches == 0
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// Hilbert function degrees checked: `0..=max_degree`.
    pub max_degree: u32,
    /// Membership probes have degree at most this.
    pub probe_degree: u32,
    pub probes: usize,
    pub seed: u64,
    pub limits: Limits,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_degree: 12,
            probe_degree: 8,
            probes: 40,
            seed: 0,
            limits: Limits::none(),
        }
    }
}

fn check(checks: &mut Vec<OracleCheck>, name: String, computed: impl ToString, brute: impl ToString) {
    let (computed, brute) = (computed.to_string(), brute.to_string());
    checks.push(OracleCheck {
        ok: computed == brute,
        name,
        computed,
        brute,
    });
}

fn random_poly<R: Rng>(field: PrimeField, nvars: usize, max_deg: u32, terms: usize, rng: &mut R) -> Polynomial {
    let t = (0..terms)
        .map(|_| {
            let d = rng.gen_range(0..=max_deg);
            let choices = Monomial::all_of_degree(nvars, d);
            (choices[rng.gen_range(0..choices.len())].clone(), field.random_nonzero(rng))
        })
        .collect();
    Polynomial::from_terms(field, nvars, t)
}

/// Cross-checks Hilbert function, dimension, Loewy lengths and ideal
/// membership of a ring against truncated linear algebra.
pub fn oracle_suite(spec: &RingSpec, cfg: OracleConfig) -> Result<OracleReport> {
    let limits = cfg.limits;
    let (field, nv) = (spec.field(), spec.nvars());
    let view = GradedView::tangent_cone(spec, limits)?;
    let n = (cfg.max_degree + 1).max(cfg.probe_degree + 1);
    let trunc = TruncatedIdeal::new(field, nv, spec.gens(), n);
    let mut checks = Vec::new();

    let mut hf = Vec::new();
    for j in 0..=cfg.max_degree {
        let b = trunc.hilbert_function(j) as i64;
        hf.push(b);
        check(&mut checks, format!("hilbert_function({j})"), view.hilbert_function(j as usize), b);
    }
    let tail_start = hf.len().saturating_sub(5);
    let brute_dim = dim_from_tail(&hf[tail_start..]).map_or("undetermined".to_string(), |d| d.to_string());
    check(&mut checks, "dim".into(), view.dim, brute_dim);

    // Loewy lengths of artinian reductions by linear sops.
    for stream in 0..3u64 {
        let sop = random_linear_sop(&view, cfg.seed, 0x4f52_0000 + stream, limits)?;
        let alg = ArtinAlgebra::from_ring(spec, &sop, limits)?;
        let mut gens = spec.gens().to_vec();
        gens.extend(sop.iter().cloned());
        let brute = loewy_length_brute(field, nv, &gens, 64);
        let name = format!("loewy_length(R/(x)) sop {stream}");
        check(&mut checks, name.clone(), alg.loewy_length(), brute.map_or("none".into(), |v| v.to_string()));
        check(&mut checks, format!("{name} by products"), alg.loewy_length(), alg.loewy_length_by_products());
        let t = TruncatedIdeal::new(field, nv, &gens, alg.loewy_length() + 1);
        check(&mut checks, format!("dim_k R/(x) sop {stream}"), alg.dim(), t.colength(alg.loewy_length()));
        if view.dim == 0 {
            break;
        }
    }

    // Membership in I + m^N for probes of bounded degree: Mora decides it by
    // the order of the normal form.
    let q = QuotientRing::new(field, nv, spec.gens(), limits)?;
    let m = cfg.probe_degree + 1;
    let mut rng = rng_for(cfg.seed, 0x4d45_4d42);
    for k in 0..cfg.probes {
        let probe = if k % 2 == 0 || spec.gens().is_empty() {
            random_poly(field, nv, cfg.probe_degree, 4, &mut rng)
        } else {
            let mut f = Polynomial::zero(field, nv);
            for g in spec.gens() {
                let room = cfg.probe_degree.saturating_sub(g.max_degree().unwrap());
                f = f.add(&random_poly(field, nv, room, 2, &mut rng).mul(g));
            }
            if k % 4 == 3 {
                f = f.add(&random_poly(field, nv, 0, 1, &mut rng).mul_monomial(&Monomial::one(nv).with_exp(0, m as u16), 1));
            }
            f
        };
        let nf = q.reduce(&probe)?;
        let mora = nf.ord().map_or(true, |o| o >= m);
        check(
            &mut checks,
            format!("membership probe {k} in I + m^{m}"),
            mora,
            trunc.contains_mod(&probe, m),
        );
    }
    let mismatches = checks.iter().filter(|c| !c.ok).count();
    Ok(OracleReport {
        checks,
        probes: cfg.probes,
        mismatches,
    })
}

/// A finite-dimensional module over an artinian algebra, as a subspace
/// problem in `A^b = k^{b·dim A}`.
struct FreeSpace<'a> {
    alg: &'a ArtinAlgebra,
}

impl FreeSpace<'_> {
    fn n(&self) -> usize {
        self.alg.dim()
    }

    /// `x_v · w` for `w ∈ A^b`.
    fn act(&self, v: usize, w: &[Scalar]) -> Vec<Scalar> {
        let n = self.n();
        w.chunks(n).flat_map(|c| self.alg.mult[v].mul_vec(c)).collect()
    }

    /// `μ · w` for a standard monomial `μ`.
    fn act_mono(&self, mu: &Monomial, w: &[Scalar]) -> Vec<Scalar> {
        let mut out = w.to_vec();
        for (v, &e) in mu.exps().iter().enumerate() {
            for _ in 0..e {
                out = self.act(v, &out);
            }
        }
        out
    }

    fn sparse(w: &[Scalar]) -> SparseRow {
        w.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect()
    }

    /// Minimal generators of the submodule spanned (over k) by `basis`, which
    /// must be closed under the action.
    fn minimal_generators(&self, basis: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        let mut ech = SparseEchelon::new(self.alg.field());
        for w in basis {
            for v in 0..self.alg.nvars() {
                ech.insert(Self::sparse(&self.act(v, w)));
            }
        }
        basis
            .iter()
            .filter(|w| ech.insert(Self::sparse(w)))
            .cloned()
            .collect()
    }

    /// Kernel of `A^g -> A^b`, `e_i ↦ gens[i]`, as a k-basis.
    fn kernel_of(&self, gens: &[Vec<Scalar>], b: usize) -> Vec<Vec<Scalar>> {
        let n = self.n();
        let mut m = DenseMatrix::zeros(self.alg.field(), b * n, gens.len() * n);
        for (i, g) in gens.iter().enumerate() {
            for (k, mu) in self.alg.std_monomials.iter().enumerate() {
                for (r, x) in self.act_mono(mu, g).into_iter().enumerate() {
                    if x != 0 {
                        m.set(r, i * n + k, x);
                    }
                }
            }
        }
        m.kernel()
    }
}

fn column_vector(alg: &ArtinAlgebra, col: &Column) -> Vec<Scalar> {
    col.iter().flat_map(|p| alg.coords(p)).collect()
}

/// The k-span of `A·cols` in `A^rank`.
fn submodule_span(alg: &ArtinAlgebra, cols: &[Column]) -> Vec<Vec<Scalar>> {
    let fs = FreeSpace { alg };
    let mut ech = SparseEchelon::new(alg.field());
    let mut out = Vec::new();
    for c in cols {
        let w = column_vector(alg, c);
        for mu in &alg.std_monomials {
            let x = fs.act_mono(mu, &w);
            if ech.insert(FreeSpace::sparse(&x)) {
                out.push(x);
            }
        }
    }
    out
}

/// Betti numbers `β_0..β_d` of `coker(presentation)` over an artinian
/// algebra by linear algebra alone, with the differentials of the minimal
/// resolution as k-vectors (column `i` of `∂_{j+1}` is `diffs[j][i]`).
pub fn betti_by_linear_algebra(
    alg: &ArtinAlgebra,
    presentation: &[Column],
    rank: usize,
    d: usize,
) -> Result<(Vec<usize>, Vec<Vec<Vec<Scalar>>>)> {
    let fs = FreeSpace { alg };
    let n = alg.dim();
    let kernel0 = submodule_span(alg, presentation);
    // minimality: the relations lie in m·A^rank
    let socle_free: Vec<bool> = (0..rank * n).map(|i| alg.std_monomials[i % n].is_one()).collect();
    if kernel0.iter().any(|w| w.iter().zip(&socle_free).any(|(&x, &unit)| unit && x != 0)) {
        return Err(Error::NonMinimalPresentation("a relation has a unit entry".into()));
    }
    let mut betti = vec![rank];
    let mut diffs = Vec::new();
    let mut kernel = kernel0;
    let mut b = rank;
    while betti.len() <= d {
        let gens = fs.minimal_generators(&kernel);
        let next = fs.kernel_of(&gens, b);
        b = gens.len();
        betti.push(b);
        diffs.push(gens);
        kernel = next;
    }
    Ok((betti, diffs))
}

/// `dim_k Tor_i(k, M)` for `i <= d`, from the linear-algebra resolution of
/// `k` tensored with `M = coker(presentation)`.
pub fn tor_with_residue_field(alg: &ArtinAlgebra, presentation: &[Column], rank: usize, d: usize) -> Result<Vec<usize>> {
    let field = alg.field();
    let n = alg.dim();
    let nv = alg.nvars();
    let maximal: Vec<Column> = (0..nv).map(|v| vec![Polynomial::var(field, nv, v)]).collect();
    let (kb, kdiffs) = betti_by_linear_algebra(alg, &maximal, 1, d + 1)?;

    // M as a quotient space of A^rank with the induced action.
    let mut rel = SparseEchelon::new(field);
    for w in submodule_span(alg, presentation) {
        rel.insert(FreeSpace::sparse(&w));
    }
    let pivots: std::collections::HashSet<usize> = rel.pivot_columns().collect();
    let free: Vec<usize> = (0..rank * n).filter(|c| !pivots.contains(c)).collect();
    let dm = free.len();
    let project = |w: &[Scalar]| -> Vec<Scalar> {
        let r = rel.reduce(FreeSpace::sparse(w));
        let map: HashMap<usize, Scalar> = r.into_iter().collect();
        free.iter().map(|c| *map.get(c).unwrap_or(&0)).collect()
    };
    let fs = FreeSpace { alg };
    // multiplication by a standard monomial on M
    let mono_action: Vec<DenseMatrix> = alg
        .std_monomials
        .iter()
        .map(|mu| {
            let mut m = DenseMatrix::zeros(field, dm, dm);
            for (c, &col) in free.iter().enumerate() {
                let mut e = vec![0; rank * n];
                e[col] = 1;
                for (r, x) in project(&fs.act_mono(mu, &e)).into_iter().enumerate() {
                    m.set(r, c, x);
                }
            }
            m
        })
        .collect();
    // differential of F ⊗ M: entry (r, i) of ∂_{j+1} is the algebra element
    // kdiffs[j][i][r*n..(r+1)*n], acting on M.
    let tensor_diff = |j: usize| -> DenseMatrix {
        let (src, dst) = (kb[j + 1], kb[j]);
        let mut out = DenseMatrix::zeros(field, dst * dm, src * dm);
        for (i, g) in kdiffs[j].iter().enumerate() {
            for r in 0..dst {
                for (k, &a) in g[r * n..(r + 1) * n].iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    let act = &mono_action[k];
                    for x in 0..dm {
                        for y in 0..dm {
                            let v = act.get(x, y);
                            if v != 0 {
                                out.add_to(r * dm + x, i * dm + y, field.mul(a, v));
                            }
                        }
                    }
                }
            }
        }
        out
    };
    let ranks: Vec<usize> = (0..=d).map(|j| tensor_diff(j).rank()).collect();
    Ok((0..=d)
        .map(|i| {
            let outgoing = if i == 0 { 0 } else { ranks[i - 1] };
            kb[i] * dm - outgoing - ranks[i]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::parse_ring;

    fn ring(text: &str) -> RingSpec {
        parse_ring(text).unwrap()
    }

    #[test]
    fn truncated_hilbert_function_of_cusp() {
        let r = ring("ring { vars = [x, y]; ideal = [\"x^2-y^3\"] }");
        let t = TruncatedIdeal::new(r.field(), 2, r.gens(), 8);
        let hf: Vec<usize> = (0..8).map(|j| t.hilbert_function(j)).collect();
        assert_eq!(hf, vec![1, 2, 2, 2, 2, 2, 2, 2]);
        assert!(t.contains_mod(&r.poly("x^2").unwrap(), 3));
        assert!(!t.contains_mod(&r.poly("x^2").unwrap(), 4));
    }

    #[test]
    fn finite_differences() {
        assert_eq!(dim_from_tail(&[0, 0, 0]), Some(0));
        assert_eq!(dim_from_tail(&[2, 2, 2, 2]), Some(1));
        assert_eq!(dim_from_tail(&[5, 6, 7, 8]), Some(2));
        assert_eq!(dim_from_tail(&[1, 2, 4, 8, 16]), None);
    }

    #[test]
    fn brute_loewy_length() {
        let r = ring("ring { vars = [x, y]; ideal = [\"x^2\", \"y^3\"] }");
        assert_eq!(loewy_length_brute(r.field(), 2, r.gens(), 16), Some(4));
    }

    #[test]
    fn residue_field_betti_over_square_zero_pair() {
        let r = ring("ring { vars = [x, y]; ideal = [\"x^2\", \"y^2\"] }");
        let a = ArtinAlgebra::from_ring(&r, &[], Limits::none()).unwrap();
        let k = vec![vec![r.var(0)], vec![r.var(1)]];
        let (b, _) = betti_by_linear_algebra(&a, &k, 1, 4).unwrap();
        assert_eq!(b, vec![1, 2, 3, 4, 5]);
        assert_eq!(tor_with_residue_field(&a, &k, 1, 4).unwrap(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn tor_symmetric_for_quotient_module() {
        let r = ring("ring { vars = [x, y]; ideal = [\"x^4\", \"y^4\"] }");
        let a = ArtinAlgebra::from_ring(&r, &[], Limits::none()).unwrap();
        let m = vec![vec![r.poly("x^2").unwrap()], vec![r.poly("y^2").unwrap()]];
        let (b, _) = betti_by_linear_algebra(&a, &m, 1, 5).unwrap();
        assert_eq!(b, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(tor_with_residue_field(&a, &m, 1, 5).unwrap(), b);
    }

    #[test]
    fn suite_on_small_rings() {
        for text in [
            "ring { vars = [x]; ideal = [\"x^3\"] }",
            "ring { vars = [x, y]; ideal = [\"x^2-y^3\"] }",
            "ring { vars = [x, y]; ideal = [] }",
        ] {
            let rep = oracle_suite(&ring(text), OracleConfig::default()).unwrap();
            let bad: Vec<_> = rep.checks.iter().filter(|c| !c.ok).collect();
            assert!(bad.is_empty(), "{text}: {bad:?}");
        }
    }
}
