//! Standard bases for the local order `ds` (Mora) and Gröbner bases for
//! `grevlex` (Buchberger), for ideals and submodules of free modules.

pub mod elem;
pub mod engine;
pub mod module;

pub use elem::{Ctx, FreeElem, Term};
pub use engine::{as_basis, normal_form, reduce_full, BasisElem, Limits, NfResult, SbBuilder};
pub use module::{Column, ModuleSb, Preimage, QuotientRing};

use crate::error::{Error, Result};
use crate::ring_core::{Monomial, MonomialOrder, Polynomial};

/// A minimal standard basis together with its leading submodule.
#[derive(Clone, Debug)]
pub struct StdBasis {
    pub ctx: Ctx,
    pub rank: usize,
    pub gens: Vec<FreeElem>,
    /// Leading terms `(component, monomial)` of `gens`.
    pub leading: Vec<(u32, Monomial)>,
    /// Column `k` expresses `gens[k]` in the input generators, when tracked.
    pub transform: Option<Vec<Column>>,
}

impl StdBasis {
    fn from_elems(ctx: Ctx, rank: usize, gens: Vec<FreeElem>, transform: Option<Vec<Column>>) -> Self {
        let leading = gens
            .iter()
            .map(|e| {
                let t = e.lt().unwrap();
                (t.comp, t.mono.clone())
            })
            .collect();
        StdBasis {
            ctx,
            rank,
            gens,
            leading,
            transform,
        }
    }

    pub fn order(&self) -> MonomialOrder {
        self.ctx.order
    }

    pub fn basis_elems(&self) -> Vec<BasisElem> {
        engine::as_basis(&self.gens)
    }

    /// Normal form of `f` against this basis.
    pub fn nf(&self, f: &FreeElem, limits: &Limits) -> Result<FreeElem> {
        Ok(normal_form(&self.ctx, f, &self.basis_elems(), false, limits)?.rem)
    }

    pub fn contains(&self, f: &FreeElem) -> Result<bool> {
        Ok(self.nf(f, &Limits::none())?.is_zero())
    }

    /// Sorted leading terms, for comparisons across generator orderings.
    pub fn leading_sorted(&self) -> Vec<(u32, Vec<u16>)> {
        let mut v: Vec<(u32, Vec<u16>)> = self
            .leading
            .iter()
            .map(|(c, m)| (*c, m.exps().to_vec()))
            .collect();
        v.sort();
        v
    }

    pub fn polys(&self) -> Vec<Polynomial> {
        self.gens.iter().map(|e| self.ctx.to_poly(e)).collect()
    }
}

fn rank_of(gens: &[FreeElem]) -> usize {
    gens.iter()
        .flat_map(|g| g.terms().iter().map(|t| t.comp as usize + 1))
        .max()
        .unwrap_or(1)
}

/// Gröbner basis for a global order.
pub fn buchberger(gens: &[FreeElem], ctx: Ctx) -> Result<StdBasis> {
    if ctx.order.is_local() {
        return Err(Error::Invalid("buchberger needs a global order".into()));
    }
    standard_basis(gens, ctx, Limits::none())
}

/// Standard basis (Gröbner basis for global orders) of the submodule generated by `gens`.
pub fn standard_basis(gens: &[FreeElem], ctx: Ctx, limits: Limits) -> Result<StdBasis> {
    let mut b = SbBuilder::new(ctx, limits);
    b.add_generators(gens.iter().cloned())?;
    Ok(StdBasis::from_elems(ctx, rank_of(gens), b.minimal_basis(), None))
}

/// Standard basis with a transformation matrix: each basis element is an
/// explicit polynomial combination of the inputs (computed in an augmented
/// free module, so units arising from local reductions are absorbed).
pub fn standard_basis_with_transform(gens: &[FreeElem], ctx: Ctx, limits: Limits) -> Result<StdBasis> {
    let r = rank_of(gens) as u32;
    let s = gens.len();
    let aug: Vec<FreeElem> = gens
        .iter()
        .enumerate()
        .map(|(j, g)| ctx.add(g, &ctx.basis_vector(r + j as u32, Monomial::one(ctx.nvars))))
        .collect();
    let mut b = SbBuilder::new(ctx, limits);
    b.add_generators(aug)?;
    let mut out = Vec::new();
    let mut transform = Vec::new();
    for e in b.minimal_basis() {
        if e.lt().unwrap().comp < r {
            transform.push(ctx.to_column(&e, s, r));
            out.push(ctx.restrict(&e, 0, r));
        }
    }
    Ok(StdBasis::from_elems(ctx, r as usize, out, Some(transform)))
}

/// Weak normal form of `f` with respect to `g` (local order).
pub fn mora_nf(f: &FreeElem, g: &[FreeElem], ctx: Ctx) -> Result<FreeElem> {
    Ok(normal_form(&ctx, f, &engine::as_basis(g), false, &Limits::none())?.rem)
}

/// Generators of the syzygy module of `b.gens` over the ambient polynomial
/// ring (localized for local orders); one component per generator.
pub fn syzygies(b: &StdBasis, limits: Limits) -> Result<Vec<FreeElem>> {
    let ctx = b.ctx;
    let r = b.rank as u32;
    let aug: Vec<FreeElem> = b
        .gens
        .iter()
        .enumerate()
        .map(|(j, g)| ctx.add(g, &ctx.basis_vector(r + j as u32, Monomial::one(ctx.nvars))))
        .collect();
    let mut sb = SbBuilder::new(ctx, limits);
    sb.add_generators(aug)?;
    Ok(sb
        .minimal_basis()
        .into_iter()
        .filter(|e| e.lt().unwrap().comp >= r)
        .map(|e| ctx.shift(&e, -(r as i64)))
        .collect())
}

/// `v` with `map * v = unit * target` in `ring` and all entries of `v` in
/// `m^n`, or `None` when no such `v` exists.
pub fn preimage_in_submodule(
    ring: &QuotientRing,
    target: &Column,
    map: &[Column],
    n: u32,
) -> Result<Option<Preimage>> {
    let rank = target.len();
    if target.iter().all(|p| p.is_zero()) {
        return Ok(Some(Preimage {
            unit: Polynomial::one(ring.field(), ring.nvars()),
            v: ring.zero_column(map.len()),
        }));
    }
    Ok(ring.preimages(map, rank, n, std::slice::from_ref(target))?.pop().unwrap())
}

/// Standard basis of the intersection of two submodules of the same free module.
pub fn submodule_intersection(a: &StdBasis, b: &StdBasis, limits: Limits) -> Result<StdBasis> {
    if a.ctx != b.ctx {
        return Err(Error::Invalid("intersection needs a common order".into()));
    }
    let ctx = a.ctx;
    let r = a.rank.max(b.rank) as u32;
    let mut gens: Vec<FreeElem> = a.gens.iter().map(|e| ctx.add(e, &ctx.shift(e, r as i64))).collect();
    gens.extend(b.gens.iter().cloned());
    let mut sb = SbBuilder::new(ctx, limits);
    sb.add_generators(gens)?;
    let inter: Vec<FreeElem> = sb
        .minimal_basis()
        .into_iter()
        .filter(|e| e.lt().unwrap().comp >= r)
        .map(|e| ctx.shift(&e, -(r as i64)))
        .collect();
    standard_basis(&inter, ctx, limits).map(|mut s| {
        s.rank = r as usize;
        s
    })
}

/// A minimal generating subset of the ideal generated by `gens` in the local
/// ring at the origin (size `dim_k I/mI`).
pub fn minimalize_generators(gens: &[Polynomial], limits: Limits) -> Result<Vec<Polynomial>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let ring = QuotientRing::new(first.field(), first.nvars(), &[], limits)?;
    let mut order: Vec<usize> = (0..gens.len()).filter(|&i| !gens[i].is_zero()).collect();
    order.sort_by_key(|&i| gens[i].ord());
    let cols: Vec<Column> = order.iter().map(|&i| vec![gens[i].clone()]).collect();
    let keep = ring.minimal_indices(&cols, 1)?;
    let mut idx: Vec<usize> = keep.into_iter().map(|k| order[k]).collect();
    idx.sort();
    Ok(idx.into_iter().map(|i| gens[i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::{parse_polynomial, PrimeField};

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn polys(v: &[String], gens: &[&str]) -> Vec<Polynomial> {
        gens.iter()
            .map(|s| parse_polynomial(s, v, PrimeField::default()).unwrap())
            .collect()
    }

    fn elems(ctx: &Ctx, ps: &[Polynomial]) -> Vec<FreeElem> {
        ps.iter().map(|p| ctx.from_poly(p, 0)).collect()
    }

    #[test]
    fn mora_nf_examples() {
        let v = vars(&["x", "y"]);
        let ctx = Ctx::new(PrimeField::default(), 2, MonomialOrder::Ds);
        let g = elems(&ctx, &polys(&v, &["x - x^2"]));
        let f = elems(&ctx, &polys(&v, &["x", "y"]));
        assert!(mora_nf(&f[0], &g, ctx).unwrap().is_zero());
        let gx = elems(&ctx, &polys(&v, &["x"]));
        assert_eq!(mora_nf(&f[1], &gx, ctx).unwrap(), f[1]);
    }

    #[test]
    fn mora_nf_single_step() {
        let v = vars(&["x", "y"]);
        let ctx = Ctx::new(PrimeField::default(), 2, MonomialOrder::Ds);
        let g = elems(&ctx, &polys(&v, &["x^2 - y^5"]));
        let f = elems(&ctx, &polys(&v, &["x^2"]));
        let r = ctx.to_poly(&mora_nf(&f[0], &g, ctx).unwrap());
        assert_eq!(r, polys(&v, &["y^5"])[0]);
    }

    #[test]
    fn buchberger_examples() {
        let v = vars(&["x", "y"]);
        let ctx = Ctx::new(PrimeField::default(), 2, MonomialOrder::Grevlex);
        let b = buchberger(&elems(&ctx, &polys(&v, &["x^2 - y", "y^2"])), ctx).unwrap();
        // leading ideal (x^2, y^2): the ideal has colength 4
        let lts = b.leading_sorted();
        assert_eq!(lts, vec![(0, vec![0, 2]), (0, vec![2, 0])]);
        let single = buchberger(&elems(&ctx, &polys(&v, &["x*y + 1"])), ctx).unwrap();
        assert_eq!(single.gens.len(), 1);
        assert!(buchberger(&[], Ctx::new(PrimeField::default(), 2, MonomialOrder::Ds)).is_err());
    }

    #[test]
    fn syzygies_of_monomials() {
        let v = vars(&["x", "y"]);
        let ctx = Ctx::new(PrimeField::default(), 2, MonomialOrder::Ds);
        let g = elems(&ctx, &polys(&v, &["x^2", "x*y"]));
        let b = StdBasis::from_elems(ctx, 1, g.clone(), None);
        let syz = syzygies(&b, Limits::none()).unwrap();
        assert_eq!(syz.len(), 1);
        let col = ctx.to_column(&syz[0], 2, 0);
        let sum = col[0].mul(&ctx.to_poly(&g[0])).add(&col[1].mul(&ctx.to_poly(&g[1])));
        assert!(sum.is_zero());
        assert_eq!(col[0].ord(), Some(1));

        let one = StdBasis::from_elems(ctx, 1, elems(&ctx, &polys(&v, &["x"])), None);
        assert!(syzygies(&one, Limits::none()).unwrap().is_empty());
    }

    #[test]
    fn intersections() {
        let v = vars(&["x", "y"]);
        let ctx = Ctx::new(PrimeField::default(), 2, MonomialOrder::Ds);
        let sb = |g: &[&str]| standard_basis(&elems(&ctx, &polys(&v, g)), ctx, Limits::none()).unwrap();
        let c = submodule_intersection(&sb(&["x"]), &sb(&["y"]), Limits::none()).unwrap();
        assert_eq!(c.leading_sorted(), vec![(0, vec![1, 1])]);
        let d = submodule_intersection(&sb(&["x"]), &sb(&["x + x^2"]), Limits::none()).unwrap();
        assert_eq!(d.leading_sorted(), vec![(0, vec![1, 0])]);
        let m = sb(&["x^2", "y^3"]);
        let e = submodule_intersection(&m, &m, Limits::none()).unwrap();
        assert_eq!(e.leading_sorted(), m.leading_sorted());
    }

    #[test]
    fn minimalize_examples() {
        let v = vars(&["x", "y"]);
        let g = polys(&v, &["x^2", "x^2 + x^3*y", "y^3"]);
        let m = minimalize_generators(&g, Limits::none()).unwrap();
        assert_eq!(m.len(), 2);
        let w = vars(&["x", "y", "z"]);
        let d = polys(&w, &["x^2-y^5", "x*y^2+y*z^3-z^5"]);
        assert_eq!(minimalize_generators(&d, Limits::none()).unwrap(), d);
        assert!(minimalize_generators(&[], Limits::none()).unwrap().is_empty());
    }

    #[test]
    fn transform_expresses_basis() {
        let v = vars(&["x", "y"]);
        let ctx = Ctx::new(PrimeField::default(), 2, MonomialOrder::Ds);
        let g = polys(&v, &["x - y^2", "y^3 + x*y"]);
        let b = standard_basis_with_transform(&elems(&ctx, &g), ctx, Limits::none()).unwrap();
        let t = b.transform.as_ref().unwrap();
        for (k, e) in b.gens.iter().enumerate() {
            let combo = t[k][0].mul(&g[0]).add(&t[k][1].mul(&g[1]));
            assert_eq!(combo, ctx.to_poly(e));
        }
    }
}
