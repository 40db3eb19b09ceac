use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::time::Instant;

use super::elem::{Ctx, FreeElem};
use crate::error::{Error, Result};
use crate::ring_core::Monomial;

/// Resource limits shared by every standard-basis computation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    /// Abort when a basis element with a leading monomial above this degree appears.
    pub degree_cap: Option<u32>,
    pub deadline: Option<Instant>,
}

impl Limits {
    pub fn none() -> Self {
        Limits::default()
    }

    pub fn check_time(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::TimeBudget),
            _ => Ok(()),
        }
    }

    fn check_degree(&self, deg: u32) -> Result<()> {
        match self.degree_cap {
            Some(cap) if deg > cap => Err(Error::DegreeCap { cap, reached: deg }),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BasisElem {
    pub elem: FreeElem,
    pub ecart: u32,
    pub sugar: u32,
    single_comp: bool,
}

impl BasisElem {
    pub fn new(elem: FreeElem) -> Self {
        BasisElem {
            ecart: elem.ecart(),
            sugar: elem.max_degree(),
            single_comp: elem.components().count() <= 1,
            elem,
        }
    }

    #[inline]
    pub fn lt_comp(&self) -> u32 {
        self.elem.lt().unwrap().comp
    }

    #[inline]
    pub fn lt_mono(&self) -> &Monomial {
        &self.elem.lt().unwrap().mono
    }
}

/// Result of a normal-form computation: `unit * f = rem + (combination of the basis)`.
#[derive(Clone, Debug)]
pub struct NfResult {
    pub rem: FreeElem,
    /// Rank-one element with constant term one; identically one for global orders.
    pub unit: FreeElem,
}

struct Extra {
    elem: FreeElem,
    ecart: u32,
    unit: FreeElem,
}

/// Mora's normal form with ecart-driven reducer choice.
///
/// Returns a remainder whose leading term is not divisible by any leading
/// term of `basis`; it is zero exactly when `f` lies in the module generated
/// by `basis` (locally for local orders). For global orders every ecart is
/// zero and this is plain top reduction.
pub fn normal_form(
    ctx: &Ctx,
    f: &FreeElem,
    basis: &[BasisElem],
    track_unit: bool,
    limits: &Limits,
) -> Result<NfResult> {
    let mut h = f.clone();
    let mut unit = ctx.one();
    let mut extra: Vec<Extra> = Vec::new();
    let mut steps: u64 = 0;
    let local = ctx.order.is_local();
    while let Some(lt) = h.lt() {
        steps += 1;
        if steps % 128 == 0 {
            limits.check_time()?;
        }
        let (comp, mono) = (lt.comp, lt.mono.clone());
        // basis reducer of least ecart
        let mut best: Option<(u32, usize, bool)> = None;
        for (i, b) in basis.iter().enumerate() {
            if b.lt_comp() == comp && b.lt_mono().divides(&mono) {
                if best.map_or(true, |(e, _, _)| b.ecart < e) {
                    best = Some((b.ecart, i, false));
                    if b.ecart == 0 {
                        break;
                    }
                }
            }
        }
        if local && best.map_or(true, |(e, _, _)| e > 0) {
            for (i, x) in extra.iter().enumerate() {
                let l = x.elem.lt().unwrap();
                if l.comp == comp
                    && l.mono.divides(&mono)
                    && best.map_or(true, |(e, _, _)| x.ecart < e)
                {
                    best = Some((x.ecart, i, true));
                }
            }
        }
        let Some((g_ecart, gi, is_extra)) = best else {
            break;
        };
        let h_ecart = h.ecart();
        let (g, g_unit) = if is_extra {
            (&extra[gi].elem, Some(&extra[gi].unit))
        } else {
            (&basis[gi].elem, None)
        };
        let g_lt = g.lt().unwrap();
        let c = ctx.field.div(lt.coef, g_lt.coef).unwrap();
        let m = g_lt.mono.quotient_of(&mono).unwrap();
        let neg_c = ctx.field.neg(c);
        let new_h = ctx.add_mul(&h, neg_c, &m, g);
        let new_unit = match (track_unit, g_unit) {
            (true, Some(gu)) => Some(ctx.add_mul(&unit, neg_c, &m, gu)),
            _ => None,
        };
        if local && g_ecart > h_ecart {
            extra.push(Extra {
                elem: h,
                ecart: h_ecart,
                unit: unit.clone(),
            });
        }
        h = new_h;
        if let Some(u) = new_unit {
            unit = u;
        }
    }
    Ok(NfResult { rem: h, unit })
}

/// Complete reduction for a global order: every term of the result is
/// standard (not divisible by a leading term of `basis`).
pub fn reduce_full(ctx: &Ctx, f: &FreeElem, basis: &[BasisElem]) -> FreeElem {
    debug_assert!(!ctx.order.is_local());
    let mut h = f.clone();
    let mut rem = Vec::new();
    while let Some(lt) = h.lt() {
        let red = basis
            .iter()
            .find(|b| b.lt_comp() == lt.comp && b.lt_mono().divides(&lt.mono));
        match red {
            Some(b) => {
                let g_lt = b.elem.lt().unwrap();
                let c = ctx.field.div(lt.coef, g_lt.coef).unwrap();
                let m = g_lt.mono.quotient_of(&lt.mono).unwrap();
                h = ctx.add_mul(&h, ctx.field.neg(c), &m, &b.elem);
            }
            None => {
                let t = lt.clone();
                h = ctx.restrict_tail(&h);
                rem.push(t);
            }
        }
    }
    ctx.normalize(rem)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct PairKey {
    sugar: u32,
    lcm_deg: u32,
    j: u32,
    i: u32,
}

/// Incremental standard-basis builder (Buchberger for global orders, Mora
/// for local ones), pairs selected by sugar degree.
#[derive(Clone, Debug)]
pub struct SbBuilder {
    ctx: Ctx,
    limits: Limits,
    basis: Vec<BasisElem>,
    queue: BinaryHeap<Reverse<PairKey>>,
    pending: HashSet<(u32, u32)>,
    discard_from: Option<u32>,
}

impl SbBuilder {
    pub fn new(ctx: Ctx, limits: Limits) -> Self {
        SbBuilder {
            ctx,
            limits,
            basis: Vec::new(),
            queue: BinaryHeap::new(),
            pending: HashSet::new(),
            discard_from: None,
        }
    }

    /// Drops every element whose leading term lies in a component `>= comp`.
    /// Such elements vanish on the components before `comp` and never
    /// reduce anything that does not, so membership and normal forms on the
    /// leading block are unaffected.
    pub fn discarding_from(mut self, comp: u32) -> Self {
        self.discard_from = Some(comp);
        self
    }

    fn discarded(&self, g: &FreeElem) -> bool {
        matches!((self.discard_from, g.lt()), (Some(c), Some(lt)) if lt.comp >= c)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    /// Adds generators and completes the basis.
    pub fn add_generators<I: IntoIterator<Item = FreeElem>>(&mut self, gens: I) -> Result<()> {
        for g in gens {
            self.insert_raw(g)?;
        }
        self.complete()
    }

    /// Adds a single generator after reducing it; returns whether it was new.
    pub fn add_one(&mut self, g: FreeElem) -> Result<bool> {
        let r = normal_form(&self.ctx, &g, &self.basis, false, &self.limits)?.rem;
        if r.is_zero() || self.discarded(&r) {
            return Ok(false);
        }
        self.insert(r)?;
        self.complete()?;
        Ok(true)
    }

    fn insert_raw(&mut self, g: FreeElem) -> Result<()> {
        if g.is_zero() || self.discarded(&g) {
            return Ok(());
        }
        self.insert(g)
    }

    fn insert(&mut self, g: FreeElem) -> Result<()> {
        let g = self.ctx.monic(&g);
        self.limits.check_degree(g.lt().unwrap().mono.degree())?;
        let new = BasisElem::new(g);
        let j = self.basis.len() as u32;
        for (i, b) in self.basis.iter().enumerate() {
            if b.lt_comp() != new.lt_comp() {
                continue;
            }
            // product criterion, valid when both are multiples of one basis vector
            if b.single_comp && new.single_comp && b.lt_mono().is_coprime(new.lt_mono()) {
                continue;
            }
            let l = b.lt_mono().lcm(new.lt_mono());
            let ld = l.degree();
            let sugar = (ld - b.lt_mono().degree() + b.sugar).max(ld - new.lt_mono().degree() + new.sugar);
            self.queue.push(Reverse(PairKey {
                sugar,
                lcm_deg: ld,
                j,
                i: i as u32,
            }));
            self.pending.insert((i as u32, j));
        }
        self.basis.push(new);
        Ok(())
    }

    fn is_pending(&self, a: u32, b: u32) -> bool {
        self.pending.contains(&(a.min(b), a.max(b)))
    }

    fn chain_redundant(&self, i: u32, j: u32, lcm: &Monomial) -> bool {
        let comp = self.basis[i as usize].lt_comp();
        self.basis.iter().enumerate().any(|(k, b)| {
            let k = k as u32;
            k != i
                && k != j
                && b.lt_comp() == comp
                && b.lt_mono().divides(lcm)
                && !self.is_pending(i, k)
                && !self.is_pending(j, k)
        })
    }

    fn spoly(&self, i: usize, j: usize) -> FreeElem {
        let (a, b) = (&self.basis[i].elem, &self.basis[j].elem);
        let (la, lb) = (a.lt().unwrap(), b.lt().unwrap());
        let l = la.mono.lcm(&lb.mono);
        let ma = la.mono.quotient_of(&l).unwrap();
        let mb = lb.mono.quotient_of(&l).unwrap();
        let s = self.ctx.mul_term(a, &ma, 1);
        self.ctx.add_mul(&s, self.ctx.field.neg(1), &mb, b)
    }

    pub fn complete(&mut self) -> Result<()> {
        while let Some(Reverse(key)) = self.queue.pop() {
            self.limits.check_time()?;
            let (i, j) = (key.i, key.j);
            let lcm = self.basis[i as usize]
                .lt_mono()
                .lcm(self.basis[j as usize].lt_mono());
            let redundant = self.chain_redundant(i, j, &lcm);
            self.pending.remove(&(i, j));
            if redundant {
                continue;
            }
            let s = self.spoly(i as usize, j as usize);
            let r = normal_form(&self.ctx, &s, &self.basis, false, &self.limits)?.rem;
            if !r.is_zero() && !self.discarded(&r) {
                self.insert(r)?;
            }
        }
        Ok(())
    }

    /// Minimal standard basis: drop elements whose leading term is divisible
    /// by the leading term of another kept element.
    pub fn minimal_basis(&self) -> Vec<FreeElem> {
        minimal_subset(&self.basis)
            .into_iter()
            .map(|i| self.basis[i].elem.clone())
            .collect()
    }

    pub fn minimal_elems(&self) -> Vec<BasisElem> {
        minimal_subset(&self.basis)
            .into_iter()
            .map(|i| self.basis[i].clone())
            .collect()
    }

    pub fn nf(&self, f: &FreeElem, track_unit: bool) -> Result<NfResult> {
        normal_form(&self.ctx, f, &self.basis, track_unit, &self.limits)
    }
}

fn minimal_subset(basis: &[BasisElem]) -> Vec<usize> {
    let mut keep = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let dominated = basis.iter().enumerate().any(|(k, c)| {
            k != i
                && c.lt_comp() == b.lt_comp()
                && c.lt_mono().divides(b.lt_mono())
                && (c.lt_mono() != b.lt_mono() || k < i)
        });
        if !dominated {
            keep.push(i);
        }
    }
    keep
}

/// Wraps already-computed standard-basis elements for reduction.
pub fn as_basis(elems: &[FreeElem]) -> Vec<BasisElem> {
    elems.iter().filter(|e| !e.is_zero()).cloned().map(BasisElem::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::{parse_polynomial, MonomialOrder, Polynomial, PrimeField};

    fn setup(order: MonomialOrder, vars: &[&str]) -> (Ctx, Vec<String>) {
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        (Ctx::new(PrimeField::default(), v.len(), order), v)
    }

    fn poly(ctx: &Ctx, v: &[String], s: &str) -> Polynomial {
        parse_polynomial(s, v, ctx.field).unwrap()
    }

    #[test]
    fn local_unit_is_detected() {
        // x - x^2 = x(1-x) generates (x) locally
        let (ctx, v) = setup(MonomialOrder::Ds, &["x"]);
        let mut b = SbBuilder::new(ctx, Limits::none());
        b.add_generators([ctx.from_poly(&poly(&ctx, &v, "x - x^2"), 0)])
            .unwrap();
        let f = ctx.from_poly(&poly(&ctx, &v, "x"), 0);
        let r = b.nf(&f, true).unwrap();
        assert!(r.rem.is_zero());
        let u = ctx.to_poly(&r.unit);
        assert_eq!(u.constant_term(), 1);
        assert!(u.ord() == Some(0));
    }

    #[test]
    fn unit_identity_holds() {
        let (ctx, v) = setup(MonomialOrder::Ds, &["x", "y"]);
        let g = poly(&ctx, &v, "x - x*y - x^3");
        let mut b = SbBuilder::new(ctx, Limits::none());
        b.add_generators([ctx.from_poly(&g, 0)]).unwrap();
        let f = poly(&ctx, &v, "x");
        let r = b.nf(&ctx.from_poly(&f, 0), true).unwrap();
        assert!(r.rem.is_zero());
        // u*f is a polynomial multiple of g
        let uf = ctx.to_poly(&r.unit).mul(&f);
        let gctx = Ctx::new(ctx.field, 2, MonomialOrder::Grevlex);
        let mut gb = SbBuilder::new(gctx, Limits::none());
        gb.add_generators([gctx.from_poly(&g, 0)]).unwrap();
        assert!(gb.nf(&gctx.from_poly(&uf, 0), false).unwrap().rem.is_zero());
        assert_eq!(ctx.to_poly(&r.unit).constant_term(), 1);
    }

    #[test]
    fn grevlex_groebner_cyclic() {
        let (ctx, v) = setup(MonomialOrder::Grevlex, &["x", "y"]);
        let mut b = SbBuilder::new(ctx, Limits::none());
        b.add_generators([
            ctx.from_poly(&poly(&ctx, &v, "x^2 - y"), 0),
            ctx.from_poly(&poly(&ctx, &v, "x*y - 1"), 0),
        ])
        .unwrap();
        let mb = b.minimal_basis();
        // y^2 - x lies in the ideal
        let f = ctx.from_poly(&poly(&ctx, &v, "y^2 - x"), 0);
        assert!(b.nf(&f, false).unwrap().rem.is_zero());
        let g = ctx.from_poly(&poly(&ctx, &v, "y"), 0);
        assert!(!b.nf(&g, false).unwrap().rem.is_zero());
        assert!(mb.len() >= 2);
    }

    #[test]
    fn destefani_local_leading_ideal() {
        let (ctx, v) = setup(MonomialOrder::Ds, &["x", "y", "z"]);
        let mut b = SbBuilder::new(ctx, Limits::none());
        b.add_generators([
            ctx.from_poly(&poly(&ctx, &v, "x^2 - y^5"), 0),
            ctx.from_poly(&poly(&ctx, &v, "x*y^2 + y*z^3 - z^5"), 0),
        ])
        .unwrap();
        let lts: Vec<u32> = b
            .minimal_basis()
            .iter()
            .map(|e| e.lt().unwrap().mono.degree())
            .collect();
        assert!(lts.contains(&2) && lts.contains(&3));
        // x^2 - y^5 is in the ideal
        let f = ctx.from_poly(&poly(&ctx, &v, "x^2 - y^5"), 0);
        assert!(b.nf(&f, false).unwrap().rem.is_zero());
    }

    #[test]
    fn degree_cap_aborts() {
        let (ctx, v) = setup(MonomialOrder::Grevlex, &["x", "y"]);
        let lim = Limits {
            degree_cap: Some(2),
            deadline: None,
        };
        let mut b = SbBuilder::new(ctx, lim);
        let r = b.add_generators([
            ctx.from_poly(&poly(&ctx, &v, "x^2 - y"), 0),
            ctx.from_poly(&poly(&ctx, &v, "x*y^2 - 1"), 0),
        ]);
        assert!(matches!(r, Err(Error::DegreeCap { .. })));
    }
}
