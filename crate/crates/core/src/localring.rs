//! Artinian reductions, Loewy lengths, socles, sampled generalized Loewy
//! length and minimal Cohen presentations.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{is_cohen_macaulay, GradedView};
use crate::koszul::regularity;
use crate::linalg::DenseMatrix;
use crate::ring_core::{Monomial, MonomialOrder, Polynomial, PrimeField, RingSpec, Scalar};
use crate::stdbasis::{minimalize_generators, Ctx, FreeElem, Limits, SbBuilder};
use crate::util::rng_for;

/// Finite-dimensional algebra `Q/(I + cut)` localized at the origin, with a
/// standard-monomial basis for the local order.
#[derive(Clone, Debug)]
pub struct ArtinAlgebra {
    ctx: Ctx,
    pub cut: Vec<Polynomial>,
    sb: Vec<FreeElem>,
    pub leading: Vec<Monomial>,
    /// Standard monomials, by increasing degree.
    pub std_monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    loewy: u32,
    /// `mult[v]`: multiplication by the `v`-th variable in the standard basis.
    pub mult: Vec<DenseMatrix>,
}

fn is_artinian(leading: &[Monomial], nvars: usize) -> bool {
    (0..nvars).all(|v| leading.iter().any(|m| m.pure_power_var() == Some(v)))
}

/// Truncation degrees tried before falling back to an untruncated basis.
const TRUNCATIONS: [u32; 3] = [8, 16, 32];

impl ArtinAlgebra {
    /// The algebra is first computed modulo `m^N` for increasing `N`. Once
    /// its Loewy length `L` is below `N`, Nakayama gives `m^L ⊆ I + cut`, so
    /// the truncated algebra is the algebra itself.
    pub fn new(field: PrimeField, nvars: usize, gens: &[Polynomial], cut: &[Polynomial], limits: Limits) -> Result<Self> {
        for n in TRUNCATIONS {
            if let Some(a) = Self::build(field, nvars, gens, cut, limits, n)? {
                return Ok(a);
            }
        }
        Ok(Self::build(field, nvars, gens, cut, limits, u32::MAX)?.expect("untruncated build is conclusive"))
    }

    fn build(
        field: PrimeField,
        nvars: usize,
        gens: &[Polynomial],
        cut: &[Polynomial],
        limits: Limits,
        trunc: u32,
    ) -> Result<Option<Self>> {
        let ctx = Ctx::new(field, nvars, MonomialOrder::Ds).truncated(trunc);
        let mut b = SbBuilder::new(ctx, limits);
        b.add_generators(gens.iter().chain(cut).map(|g| ctx.from_poly(g, 0)))?;
        let sb = b.minimal_basis();
        let leading: Vec<Monomial> = sb.iter().map(|e| e.lt().unwrap().mono.clone()).collect();
        if leading.iter().any(|m| m.is_one()) {
            return Err(Error::InvalidSop("the quotient is the zero ring".into()));
        }
        if trunc == u32::MAX && !is_artinian(&leading, nvars) {
            return Err(Error::InvalidSop("the quotient is not artinian".into()));
        }
        let mut std_monomials = Vec::new();
        let mut deg = 0;
        loop {
            if deg == trunc {
                return Ok(None);
            }
            let level: Vec<Monomial> = Monomial::all_of_degree(nvars, deg)
                .into_iter()
                .filter(|m| !leading.iter().any(|l| l.divides(m)))
                .collect();
            if level.is_empty() {
                break;
            }
            std_monomials.extend(level);
            deg += 1;
        }
        let loewy = deg;
        let index = std_monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut alg = ArtinAlgebra {
            ctx,
            cut: cut.to_vec(),
            sb,
            leading,
            std_monomials,
            index,
            loewy,
            mult: Vec::new(),
        };
        let n = alg.dim();
        let mut mult = Vec::with_capacity(nvars);
        for v in 0..nvars {
            let mut m = DenseMatrix::zeros(field, n, n);
            for (c, mono) in alg.std_monomials.iter().enumerate() {
                let prod = Polynomial::monomial(field, mono.mul(&Monomial::var(nvars, v)), 1);
                for (r, x) in alg.coords(&prod).into_iter().enumerate() {
                    if x != 0 {
                        m.set(r, c, x);
                    }
                }
            }
            mult.push(m);
        }
        alg.mult = mult;
        Ok(Some(alg))
    }

    pub fn from_ring(spec: &RingSpec, cut: &[Polynomial], limits: Limits) -> Result<Self> {
        Self::new(spec.field(), spec.nvars(), spec.gens(), cut, limits)
    }

    /// The algebra `R/(cut)` if its Loewy length is below `cap`, otherwise
    /// `None` (which includes quotients that are not artinian).
    pub fn below(spec: &RingSpec, cut: &[Polynomial], cap: u32, limits: Limits) -> Result<Option<Self>> {
        Self::build(spec.field(), spec.nvars(), spec.gens(), cut, limits, cap.max(1))
    }

    pub fn field(&self) -> PrimeField {
        self.ctx.field
    }

    pub fn nvars(&self) -> usize {
        self.ctx.nvars
    }

    /// `dim_k` of the algebra.
    pub fn dim(&self) -> usize {
        self.std_monomials.len()
    }

    pub fn loewy_length(&self) -> u32 {
        self.loewy
    }

    /// Coordinates of the class of `f` in the standard-monomial basis.
    ///
    /// Terms of degree at least the Loewy length vanish in the algebra, so
    /// reduction is carried out on the finitely many lower-degree terms only.
    pub fn coords(&self, f: &Polynomial) -> Vec<Scalar> {
        let ctx = &self.ctx;
        let cap = self.loewy;
        let trunc = |e: FreeElem| -> FreeElem {
            ctx.normalize(e.into_terms().into_iter().filter(|t| t.mono.degree() < cap).collect())
        };
        let mut h = trunc(ctx.from_poly(f, 0));
        let mut out = vec![0; self.dim()];
        while let Some(lt) = h.lt() {
            if let Some(&i) = self.index.get(&lt.mono) {
                out[i] = lt.coef;
                h = ctx.restrict_tail(&h);
                continue;
            }
            let g = self
                .sb
                .iter()
                .find(|g| g.lt().unwrap().mono.divides(&lt.mono))
                .expect("nonstandard monomial has a reducer");
            let g_lt = g.lt().unwrap();
            let c = ctx.field.div(lt.coef, g_lt.coef).unwrap();
            let m = g_lt.mono.quotient_of(&lt.mono).unwrap();
            h = trunc(ctx.add_mul(&h, ctx.field.neg(c), &m, g));
        }
        out
    }

    pub fn element(&self, coords: &[Scalar]) -> Polynomial {
        let terms = coords
            .iter()
            .zip(&self.std_monomials)
            .filter(|(c, _)| **c != 0)
            .map(|(c, m)| (m.clone(), *c))
            .collect();
        Polynomial::from_terms(self.ctx.field, self.ctx.nvars, terms)
    }

    pub fn is_zero(&self, f: &Polynomial) -> bool {
        self.coords(f).iter().all(|&c| c == 0)
    }

    /// m-adic order of the class with the given coordinates (`None` for zero).
    pub fn order_of(&self, coords: &[Scalar]) -> Option<u32> {
        coords
            .iter()
            .zip(&self.std_monomials)
            .filter(|(c, _)| **c != 0)
            .map(|(_, m)| m.degree())
            .min()
    }

    /// Basis of the socle, the common kernel of all variable multiplications.
    pub fn socle(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let mut stacked = DenseMatrix::zeros(self.ctx.field, n * self.mult.len(), n);
        for (k, m) in self.mult.iter().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    stacked.set(k * n + r, c, m.get(r, c));
                }
            }
        }
        stacked.kernel()
    }

    /// A socle element of the highest order `n = ℓℓ - 1`: a standard
    /// monomial of top degree.
    pub fn socle_max_order_element(&self) -> (Polynomial, u32) {
        let top = self.std_monomials.last().expect("nonzero algebra").clone();
        let n = top.degree();
        (Polynomial::monomial(self.ctx.field, top, 1), n)
    }

    /// Loewy length by repeated multiplication: the least `j` with every
    /// `j`-fold product of variable matrices zero.
    pub fn loewy_length_by_products(&self) -> u32 {
        let n = self.dim();
        let mut current = vec![DenseMatrix::identity(self.ctx.field, n)];
        let mut j = 0;
        while current.iter().any(|m| !m.is_zero()) {
            let mut next = Vec::new();
            for m in &current {
                for x in &self.mult {
                    let p = x.mul(m);
                    if !p.is_zero() {
                        next.push(p);
                    }
                }
            }
            // keep a spanning set of the products
            current = span_basis(next);
            j += 1;
        }
        j
    }
}

/// Linearly independent subset spanning the same space of matrices.
fn span_basis(mats: Vec<DenseMatrix>) -> Vec<DenseMatrix> {
    let Some(first) = mats.first() else {
        return mats;
    };
    let field = first.field();
    let size = first.rows() * first.cols();
    let mut ech = crate::linalg::SparseEchelon::new(field);
    let mut out = Vec::new();
    for m in mats {
        let row: Vec<(usize, Scalar)> = (0..size)
            .filter_map(|k| {
                let v = m.get(k / m.cols(), k % m.cols());
                (v != 0).then_some((k, v))
            })
            .collect();
        if ech.insert(row) {
            out.push(m);
        }
    }
    out
}

/// Minimal Cohen presentation data of the local ring.
#[derive(Clone, Debug, Serialize)]
pub struct CohenPresentation {
    pub min_gens: Vec<String>,
    pub orders: Vec<u32>,
    pub c: usize,
    pub codim: usize,
    pub is_ci: bool,
    pub ord: Option<u32>,
    pub maxord: Option<u32>,
    /// `Σ ord(f_i) - c + 1` for complete intersections (1 for a regular ring).
    pub t_mark_bound: Option<u32>,
}

pub fn cohen_presentation(spec: &RingSpec, limits: Limits) -> Result<CohenPresentation> {
    let min = minimalize_generators(spec.gens(), limits)?;
    let orders: Vec<u32> = min.iter().map(|f| f.ord().unwrap()).collect();
    if orders.iter().any(|&o| o < 2) {
        return Err(Error::Invalid(
            "a minimal generator has order one; eliminate that variable to obtain a minimal Cohen presentation".into(),
        ));
    }
    let dim = GradedView::tangent_cone(spec, limits)?.dim;
    let codim = spec.nvars() - dim;
    let c = min.len();
    let is_ci = c == codim;
    let t_mark_bound = if is_ci {
        Some(orders.iter().sum::<u32>() + 1 - c as u32)
    } else {
        None
    };
    Ok(CohenPresentation {
        min_gens: min.iter().map(|f| spec.fmt_poly(f)).collect(),
        ord: orders.iter().copied().min(),
        maxord: orders.iter().copied().max(),
        orders,
        c,
        codim,
        is_ci,
        t_mark_bound,
    })
}

/// Sampled parameter: a random polynomial without constant term whose terms
/// have degrees in `lo..=hi`.
fn random_parameter<R: Rng>(field: PrimeField, nvars: usize, level: u32, rng: &mut R) -> Polynomial {
    if level <= 1 {
        let terms = (0..nvars).map(|v| (Monomial::var(nvars, v), field.random(rng))).collect();
        return Polynomial::from_terms(field, nvars, terms);
    }
    let lo = rng.gen_range(1..=level);
    let mut terms = Vec::new();
    for d in lo..=level {
        for m in Monomial::all_of_degree(nvars, d) {
            if rng.gen_bool(0.5) {
                terms.push((m, field.random_nonzero(rng)));
            }
        }
    }
    if terms.is_empty() {
        let choices = Monomial::all_of_degree(nvars, lo);
        let m = choices[rng.gen_range(0..choices.len())].clone();
        terms.push((m, 1));
    }
    Polynomial::from_terms(field, nvars, terms)
}

/// A sampled sequence of `d` parameters for sample `index` at degree level `level`.
pub fn sample_parameters(spec: &RingSpec, d: usize, seed: u64, index: u64, level: u32) -> Vec<Polynomial> {
    let mut rng = rng_for(seed, (index << 8) | level as u64);
    (0..d)
        .map(|_| random_parameter(spec.field(), spec.nvars(), level, &mut rng))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct GllEstimate {
    pub value: u32,
    pub certified: bool,
    /// The best sampled parameters, printed.
    pub sop: Vec<String>,
    pub samples_tried: usize,
    /// Samples whose Loewy length was determined; the others were sops with
    /// Loewy length above the best linear value, or not sops at all.
    pub determined: usize,
}

/// Sampled upper bound for `gℓℓ(R)`: the minimum of `ℓℓ(R/(x))` over sampled
/// systems of parameters. Certified (exact) when `R^g` is Cohen-Macaulay, in
/// which case it is cross-checked against `reg(R^g) + 1`.
pub fn gll_estimate(
    spec: &RingSpec,
    samples: usize,
    max_param_order: u32,
    seed: u64,
    limits: Limits,
) -> Result<GllEstimate> {
    let view = GradedView::tangent_cone(spec, limits)?;
    let d = view.dim;
    let cm = is_cohen_macaulay(&view, seed, limits)?.is_cm;
    let (value, sop, tried, valid) = if d == 0 {
        let a = ArtinAlgebra::from_ring(spec, &[], limits)?;
        (a.loewy_length(), Vec::new(), 1, 1)
    } else {
        // Linear samples first; higher orders then only matter when their
        // Loewy length is below the best linear value, so they are computed
        // modulo a power of the maximal ideal.
        let linear: Vec<Result<Option<(u32, u64, u32)>>> = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let params = sample_parameters(spec, d, seed, i, 1);
                match ArtinAlgebra::from_ring(spec, &params, limits) {
                    Ok(a) => Ok(Some((a.loewy_length(), i, 1))),
                    Err(Error::InvalidSop(_)) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect();
        let mut found = Vec::new();
        for r in linear {
            found.extend(r?);
        }
        let cap = found.iter().map(|x| x.0).min().map(|v| v + 1);
        let jobs: Vec<(u64, u32)> = (0..samples as u64)
            .flat_map(|i| (2..=max_param_order).map(move |t| (i, t)))
            .collect();
        let higher: Vec<Result<Option<(u32, u64, u32)>>> = jobs
            .par_iter()
            .map(|&(i, t)| {
                let params = sample_parameters(spec, d, seed, i, t);
                let alg = match cap {
                    Some(c) => ArtinAlgebra::below(spec, &params, c, limits),
                    None => ArtinAlgebra::from_ring(spec, &params, limits).map(Some),
                };
                match alg {
                    Ok(a) => Ok(a.map(|a| (a.loewy_length(), i, t))),
                    Err(Error::InvalidSop(_)) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect();
        for r in higher {
            found.extend(r?);
        }
        let tried = samples + jobs.len();
        let valid = found.len();
        let best = found.into_iter().min();
        let (v, i, t) = best.ok_or(Error::SamplingFailed { attempts: tried })?;
        let sop = sample_parameters(spec, d, seed, i, t)
            .iter()
            .map(|f| spec.fmt_poly(f))
            .collect();
        (v, sop, tried, valid)
    };
    if cm {
        let reg = regularity(&view, seed, limits)?.value;
        if value != reg + 1 {
            return Err(Error::Assertion(format!(
                "strict Cohen-Macaulay ring with sampled gll {value} but reg(R^g) + 1 = {}",
                reg + 1
            )));
        }
    }
    Ok(GllEstimate {
        value,
        certified: cm,
        sop,
        samples_tried: tried,
        determined: valid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::parse_ring;

    fn ring(text: &str) -> RingSpec {
        parse_ring(text).unwrap()
    }

    fn e3(n: u32) -> RingSpec {
        ring(&format!(
            "ring {{ vars = [a, b, x, y, z]; ideal = [\"a^2-x^{n}\", \"a*b-y^{n}\", \"b^2-z^{n}\"] }}"
        ))
    }

    #[test]
    fn e3_reduction_by_x_z() {
        let r = e3(2);
        let cut = vec![r.poly("x").unwrap(), r.poly("z").unwrap()];
        let a = ArtinAlgebra::from_ring(&r, &cut, Limits::none()).unwrap();
        assert_eq!(a.loewy_length(), 4);
        assert_eq!(a.loewy_length_by_products(), 4);
        let (s, n) = a.socle_max_order_element();
        assert_eq!(n, 3);
        let c = a.coords(&s);
        for m in &a.mult {
            assert!(m.mul_vec(&c).iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn truncated_line() {
        let r = ring("ring { vars = [x]; ideal = [\"x^3\"] }");
        let a = ArtinAlgebra::from_ring(&r, &[], Limits::none()).unwrap();
        assert_eq!(a.loewy_length(), 3);
        assert_eq!(a.socle_max_order_element().1, 2);
        assert_eq!(a.socle().len(), 1);
    }

    #[test]
    fn field_has_loewy_length_one() {
        let r = ring("ring { vars = [x]; ideal = [] }");
        let a = ArtinAlgebra::from_ring(&r, &[r.poly("x").unwrap()], Limits::none()).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.loewy_length(), 1);
        assert_eq!(a.socle_max_order_element().1, 0);
    }

    #[test]
    fn positive_dimension_rejected() {
        let r = ring("ring { vars = [x, y]; ideal = [\"x^2\"] }");
        assert!(matches!(
            ArtinAlgebra::from_ring(&r, &[], Limits::none()),
            Err(Error::InvalidSop(_))
        ));
    }

    #[test]
    fn presentations() {
        let d = ring("ring { vars = [x, y, z]; ideal = [\"x^2-y^5\", \"x*y^2+y*z^3-z^5\"] }");
        let p = cohen_presentation(&d, Limits::none()).unwrap();
        assert_eq!(p.orders, vec![2, 3]);
        assert!(p.is_ci);
        assert_eq!(p.t_mark_bound, Some(4));
        let q = cohen_presentation(&e3(3), Limits::none()).unwrap();
        assert_eq!((q.orders.clone(), q.t_mark_bound), (vec![2, 2, 2], Some(4)));
        let reg = cohen_presentation(&ring("ring { vars = [x, y]; ideal = [] }"), Limits::none()).unwrap();
        assert_eq!((reg.c, reg.t_mark_bound, reg.maxord), (0, Some(1), None));
    }

    #[test]
    fn gll_of_e3_is_certified() {
        let g = gll_estimate(&e3(2), 4, 1, 3, Limits::none()).unwrap();
        assert_eq!((g.value, g.certified), (4, true));
        let r = gll_estimate(&ring("ring { vars = [x, y]; ideal = [] }"), 3, 2, 1, Limits::none()).unwrap();
        assert_eq!((r.value, r.certified), (1, true));
    }
}
