//! The associated graded ring `R^g = k[x]/in(I)`: Hilbert series, dimension,
//! standard-monomial bases per degree, generic linear forms and the
//! Cohen-Macaulay test.

pub mod hilbert;

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

pub use hilbert::{hilbert_numerator, HilbertSeries};

use crate::error::{Error, Result};
use crate::ring_core::{Monomial, MonomialOrder, Polynomial, PrimeField, RingSpec, Scalar};
use crate::stdbasis::{as_basis, reduce_full, BasisElem, Ctx, Limits, SbBuilder};
use crate::util::rng_for;

/// Sampling attempts before giving up on finding a system of parameters.
pub const SOP_ATTEMPTS: usize = 32;

/// A standard graded algebra `k[x]/J` with `J` homogeneous, given by a
/// grevlex Gröbner basis.
#[derive(Clone, Debug)]
pub struct GradedView {
    field: PrimeField,
    nvars: usize,
    /// Homogeneous generators of `J`.
    pub in_gens: Vec<Polynomial>,
    /// Minimal grevlex Gröbner basis of `J`.
    pub gb: Vec<Polynomial>,
    /// Leading monomials of `gb`.
    pub leading: Vec<Monomial>,
    pub hilbert: HilbertSeries,
    pub dim: usize,
    basis: Vec<BasisElem>,
}

impl GradedView {
    /// `k[x]/J` for homogeneous generators of `J`.
    pub fn from_homogeneous(field: PrimeField, nvars: usize, gens: Vec<Polynomial>, limits: Limits) -> Result<Self> {
        if let Some(i) = gens.iter().position(|g| !g.is_homogeneous()) {
            return Err(Error::NotHomogeneous { index: i });
        }
        let ctx = Ctx::new(field, nvars, MonomialOrder::Grevlex);
        let mut b = SbBuilder::new(ctx, limits);
        b.add_generators(gens.iter().filter(|g| !g.is_zero()).map(|g| ctx.from_poly(g, 0)))?;
        let elems = b.minimal_basis();
        let gb: Vec<Polynomial> = elems.iter().map(|e| ctx.to_poly(e)).collect();
        let leading: Vec<Monomial> = elems.iter().map(|e| e.lt().unwrap().mono.clone()).collect();
        let hilbert = hilbert_numerator(&leading, nvars);
        let dim = hilbert.dim();
        Ok(GradedView {
            field,
            nvars,
            in_gens: gens,
            gb,
            leading,
            hilbert,
            dim,
            basis: as_basis(&elems),
        })
    }

    /// Tangent cone of a local ring: `in(I)` generated by the initial forms
    /// of a ds standard basis of `I`.
    pub fn tangent_cone(spec: &RingSpec, limits: Limits) -> Result<Self> {
        let ctx = Ctx::new(spec.field(), spec.nvars(), MonomialOrder::Ds);
        let mut b = SbBuilder::new(ctx, limits);
        b.add_generators(spec.gens().iter().map(|g| ctx.from_poly(g, 0)))?;
        let sb = b.minimal_basis();
        let forms = sb
            .iter()
            .map(|e| ctx.to_poly(e).initial_form())
            .collect::<Result<Vec<_>>>()?;
        let view = Self::from_homogeneous(spec.field(), spec.nvars(), forms, limits)?;
        // grevlex leading monomials of in(I) coincide with ds leading monomials of I
        let mut ds_lead: Vec<Vec<u16>> = sb.iter().map(|e| e.lt().unwrap().mono.exps().to_vec()).collect();
        let mut gr_lead: Vec<Vec<u16>> = view.leading.iter().map(|m| m.exps().to_vec()).collect();
        ds_lead.sort();
        gr_lead.sort();
        if ds_lead != gr_lead {
            return Err(Error::Assertion(
                "leading ideal of the tangent cone differs from the local leading ideal".into(),
            ));
        }
        Ok(view)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn krull_dim(&self) -> usize {
        self.dim
    }

    pub fn hilbert_function(&self, j: usize) -> i64 {
        self.hilbert.hilbert_function(j)
    }

    /// Largest degree of a Gröbner basis element (0 if none).
    pub fn max_gb_degree(&self) -> u32 {
        self.leading.iter().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leading.iter().any(|l| l.divides(m))
    }

    /// Standard monomials of degree `j`, a basis of `(k[x]/J)_j`.
    pub fn standard_monomials(&self, j: u32) -> Vec<Monomial> {
        Monomial::all_of_degree(self.nvars, j)
            .into_iter()
            .filter(|m| self.is_standard(m))
            .collect()
    }

    /// Canonical representative: a combination of standard monomials.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let ctx = Ctx::new(self.field, self.nvars, MonomialOrder::Grevlex);
        ctx.to_poly(&reduce_full(&ctx, &ctx.from_poly(f, 0), &self.basis))
    }

    pub fn is_zero(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    /// `k[x]/(J + forms)`.
    pub fn quotient(&self, forms: &[Polynomial], limits: Limits) -> Result<GradedView> {
        let mut gens = self.gb.clone();
        gens.extend(forms.iter().cloned());
        Self::from_homogeneous(self.field, self.nvars, gens, limits)
    }

    /// Top degree of the (finite-dimensional) algebra, `None` if infinite.
    pub fn top_degree(&self) -> Option<u32> {
        if self.dim != 0 {
            return None;
        }
        let h = &self.hilbert;
        let bound = h.numerator.len() + 1;
        (0..=bound).rev().find(|&j| h.hilbert_function(j) != 0).map(|j| j as u32)
    }
}

/// Degree-indexed standard-monomial bases with coordinate lookup.
#[derive(Clone, Debug)]
pub struct DegreeBasis {
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeBasis {
    pub fn new(monomials: Vec<Monomial>) -> Self {
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        DegreeBasis { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a reduced polynomial supported on this basis.
    pub fn coords(&self, f: &Polynomial) -> Vec<Scalar> {
        let mut v = vec![0; self.len()];
        for (m, c) in f.terms() {
            if let Some(i) = self.position(m) {
                v[i] = *c;
            }
        }
        v
    }
}

/// A random linear form with coefficients in the whole field.
pub fn random_linear_form<R: Rng + ?Sized>(field: PrimeField, nvars: usize, rng: &mut R) -> Polynomial {
    let terms = (0..nvars)
        .map(|i| (Monomial::var(nvars, i), field.random(rng)))
        .collect();
    Polynomial::from_terms(field, nvars, terms)
}

/// `d = dim` random linear forms whose images form a system of parameters of
/// `view`, found by rejection sampling.
pub fn random_linear_sop(view: &GradedView, seed: u64, stream: u64, limits: Limits) -> Result<Vec<Polynomial>> {
    let d = view.dim;
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut rng = rng_for(seed, stream);
    for _ in 0..SOP_ATTEMPTS {
        let forms: Vec<Polynomial> = (0..d)
            .map(|_| random_linear_form(view.field, view.nvars, &mut rng))
            .collect();
        if view.quotient(&forms, limits)?.dim == 0 {
            return Ok(forms);
        }
    }
    Err(Error::SamplingFailed { attempts: SOP_ATTEMPTS })
}

/// Outcome of the Hilbert-series regular-sequence test.
#[derive(Clone, Debug, Serialize)]
pub struct CmWitness {
    pub is_cm: bool,
    pub sop: Vec<String>,
    pub series: HilbertSeries,
    pub quotient_series: HilbertSeries,
}

/// Whether `view` is Cohen-Macaulay: a linear sop is a regular sequence iff
/// `HS(view/(l)) = HS(view) * (1-t)^d`. Decided on two sampled sops.
pub fn is_cohen_macaulay(view: &GradedView, seed: u64, limits: Limits) -> Result<CmWitness> {
    let mut first: Option<CmWitness> = None;
    for stream in [0u64, 1] {
        let sop = random_linear_sop(view, seed, 0x434d_0000 + stream, limits)?;
        let w = cm_witness(view, &sop, limits)?;
        match &first {
            None => first = Some(w),
            Some(f) if f.is_cm != w.is_cm => {
                return Err(Error::Genericity(
                    "Cohen-Macaulay test disagrees between two sampled sops".into(),
                ))
            }
            Some(_) => {}
        }
    }
    Ok(first.unwrap())
}

/// Regular-sequence test for a given linear sop.
pub fn cm_witness(view: &GradedView, sop: &[Polynomial], limits: Limits) -> Result<CmWitness> {
    let q = view.quotient(sop, limits)?;
    if q.dim != 0 {
        return Err(Error::InvalidSop("forms are not a system of parameters".into()));
    }
    let expected = hilbert::poly_mul(&view.hilbert.numerator, &hilbert::one_minus_t_pow(sop.len()));
    let names: Vec<String> = (0..view.nvars).map(|i| format!("x{}", i + 1)).collect();
    Ok(CmWitness {
        is_cm: expected == q.hilbert.numerator,
        sop: sop.iter().map(|f| f.fmt_with(&names)).collect(),
        series: view.hilbert.clone(),
        quotient_series: q.hilbert,
    })
}

pub fn krull_dim(view: &GradedView) -> usize {
    view.dim
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::parse_ring;

    fn view(text: &str) -> GradedView {
        GradedView::tangent_cone(&parse_ring(text).unwrap(), Limits::none()).unwrap()
    }

    #[test]
    fn hypersurface_tangent_cone() {
        let v = view("ring { vars = [x, y]; ideal = [\"x^2 - y^3\"] }");
        assert_eq!(v.leading, vec![Monomial::from_exps(&[2, 0])]);
        assert_eq!(v.dim, 1);
    }

    #[test]
    fn zero_ideal_is_polynomial_ring() {
        let v = view("ring { vars = [x, y, z]; ideal = [] }");
        assert!(v.gb.is_empty());
        assert_eq!(v.dim, 3);
        assert_eq!(v.hilbert.numerator, vec![1]);
    }

    #[test]
    fn destefani_cone_has_dimension_one() {
        let v = view("ring { vars = [x, y, z]; ideal = [\"x^2-y^5\", \"x*y^2+y*z^3-z^5\"] }");
        assert_eq!(v.dim, 1);
        assert!(!is_cohen_macaulay(&v, 1, Limits::none()).unwrap().is_cm);
    }

    #[test]
    fn e3_is_cohen_macaulay() {
        let v = view("ring { vars = [a, b, x, y, z]; ideal = [\"a^2-x^2\", \"a*b-y^2\", \"b^2-z^2\"] }");
        assert_eq!(v.dim, 2);
        assert!(is_cohen_macaulay(&v, 7, Limits::none()).unwrap().is_cm);
    }

    #[test]
    fn artinian_is_cm_and_needs_no_forms() {
        let v = view("ring { vars = [x, y]; ideal = [\"x^2\", \"x*y\", \"y^2\"] }");
        assert_eq!(v.dim, 0);
        assert!(random_linear_sop(&v, 3, 0, Limits::none()).unwrap().is_empty());
        assert!(is_cohen_macaulay(&v, 3, Limits::none()).unwrap().is_cm);
        assert_eq!(v.top_degree(), Some(1));
    }

    #[test]
    fn sop_on_line_times_plane_uses_y() {
        let v = view("ring { vars = [x, y]; ideal = [\"x^2\"] }");
        let sop = random_linear_sop(&v, 11, 0, Limits::none()).unwrap();
        assert_eq!(sop.len(), 1);
        assert_ne!(sop[0].coeff(&Monomial::var(2, 1)), 0);
    }

    #[test]
    fn reduction_is_canonical() {
        let v = view("ring { vars = [x, y]; ideal = [\"x^2 - y^2\"] }");
        let r = v.reduce(&Polynomial::monomial(v.field(), Monomial::from_exps(&[2, 1]), 1));
        assert_eq!(r, Polynomial::monomial(v.field(), Monomial::from_exps(&[0, 3]), 1));
    }
}
