use super::elem::{Ctx, FreeElem};
use super::engine::{normal_form, BasisElem, Limits, NfResult, SbBuilder};
use crate::error::Result;
use crate::ring_core::{Monomial, MonomialOrder, Polynomial, PrimeField};

/// A column vector of polynomials, an element of a free module `Q^r`.
pub type Column = Vec<Polynomial>;

/// Solution of a constrained lifting problem: `unit * target = map * v` modulo
/// the ideal, with `unit` a local unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preimage {
    pub unit: Polynomial,
    pub v: Column,
}

/// The local ring `Q/I` at the origin, with `Q` a polynomial ring, as the
/// setting for submodule computations. Submodules of `R^r` are handled as
/// submodules of `Q^r` containing `I * Q^r`.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    ctx: Ctx,
    limits: Limits,
    ideal_sb: Vec<FreeElem>,
}

/// Standard basis of a submodule `N + I*Q^r` of `Q^r`.
#[derive(Clone, Debug)]
pub struct ModuleSb {
    rank: usize,
    builder: SbBuilder,
}

impl ModuleSb {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nf(&self, col: &Column) -> Result<NfResult> {
        let ctx = self.builder.ctx();
        self.builder.nf(&ctx.from_column(col, 0), false)
    }

    pub fn contains(&self, col: &Column) -> Result<bool> {
        Ok(self.nf(col)?.rem.is_zero())
    }

    pub fn contains_elem(&self, e: &FreeElem) -> Result<bool> {
        Ok(self.builder.nf(e, false)?.rem.is_zero())
    }

    /// Adds a column; returns false when it was already a member.
    pub fn add(&mut self, col: &Column) -> Result<bool> {
        let e = self.builder.ctx().from_column(col, 0);
        self.builder.add_one(e)
    }

    /// Leading terms `(component, monomial)` of a minimal standard basis.
    pub fn leading(&self) -> Vec<(u32, Monomial)> {
        self.builder
            .minimal_basis()
            .iter()
            .map(|e| {
                let t = e.lt().unwrap();
                (t.comp, t.mono.clone())
            })
            .collect()
    }

    pub fn columns(&self) -> Vec<Column> {
        let ctx = *self.builder.ctx();
        self.builder
            .minimal_basis()
            .iter()
            .map(|e| ctx.to_column(e, self.rank, 0))
            .collect()
    }
}

impl QuotientRing {
    pub fn new(field: PrimeField, nvars: usize, gens: &[Polynomial], limits: Limits) -> Result<Self> {
        let ctx = Ctx::new(field, nvars, MonomialOrder::Ds);
        let mut b = SbBuilder::new(ctx, limits);
        b.add_generators(gens.iter().map(|g| ctx.from_poly(g, 0)))?;
        Ok(QuotientRing {
            ctx,
            limits,
            ideal_sb: b.minimal_basis(),
        })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn field(&self) -> PrimeField {
        self.ctx.field
    }

    pub fn nvars(&self) -> usize {
        self.ctx.nvars
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// Minimal standard basis of the defining ideal.
    pub fn ideal_sb(&self) -> Vec<Polynomial> {
        self.ideal_sb.iter().map(|e| self.ctx.to_poly(e)).collect()
    }

    pub fn ideal_elems(&self) -> &[FreeElem] {
        &self.ideal_sb
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.ctx.field, self.ctx.nvars)
    }

    pub fn zero_column(&self, rank: usize) -> Column {
        vec![self.zero(); rank]
    }

    fn ideal_block(&self, rank: usize, offset: u32) -> Vec<FreeElem> {
        let mut out = Vec::with_capacity(rank * self.ideal_sb.len());
        for k in 0..rank as u32 {
            for f in &self.ideal_sb {
                out.push(self.ctx.shift(f, (offset + k) as i64));
            }
        }
        out
    }

    /// Weak normal form modulo the ideal; zero exactly for members.
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        let b = super::engine::as_basis(&self.ideal_sb);
        let r = super::engine::normal_form(&self.ctx, &self.ctx.from_poly(p, 0), &b, false, &self.limits)?;
        Ok(self.ctx.to_poly(&r.rem))
    }

    pub fn is_zero(&self, p: &Polynomial) -> Result<bool> {
        if p.is_zero() {
            return Ok(true);
        }
        Ok(self.reduce(p)?.is_zero())
    }

    pub fn column_is_zero(&self, col: &[Polynomial]) -> Result<bool> {
        for p in col {
            if !self.is_zero(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Standard basis of `span(cols) + I*Q^rank`.
    pub fn module(&self, cols: &[Column], rank: usize) -> Result<ModuleSb> {
        let mut b = SbBuilder::new(self.ctx, self.limits);
        let mut gens = self.ideal_block(rank, 0);
        gens.extend(cols.iter().map(|c| self.ctx.from_column(c, 0)));
        b.add_generators(gens)?;
        Ok(ModuleSb { rank, builder: b })
    }

    /// Generators of the syzygies of `cols` (elements of `Q^rank`) over `R`:
    /// vectors `a` with `sum a_j cols_j` in `I*Q^rank`. Generators that vanish
    /// in `R` are dropped.
    pub fn syzygies(&self, cols: &[Column], rank: usize) -> Result<Vec<Column>> {
        let s = cols.len();
        let r = rank as u32;
        let mut gens = self.ideal_block(rank, 0);
        for (j, c) in cols.iter().enumerate() {
            let e = self.ctx.from_column(c, 0);
            let tag = self.ctx.basis_vector(r + j as u32, Monomial::one(self.ctx.nvars));
            gens.push(self.ctx.add(&e, &tag));
        }
        let mut b = SbBuilder::new(self.ctx, self.limits);
        b.add_generators(gens)?;
        let mut out = Vec::new();
        for e in b.minimal_basis() {
            if e.lt().unwrap().comp >= r {
                let col = self.ctx.to_column(&e, s, r);
                if !self.column_is_zero(&col)? {
                    out.push(col);
                }
            }
        }
        Ok(out)
    }

    /// Indices of a minimal generating subset of `span(cols)` in `R^rank`,
    /// chosen greedily in the given order: a column is kept iff it is not in
    /// the span of the kept ones plus `m * span(cols)` (Nakayama).
    pub fn minimal_indices(&self, cols: &[Column], rank: usize) -> Result<Vec<usize>> {
        let mut b = SbBuilder::new(self.ctx, self.limits);
        b.add_generators(self.ideal_block(rank, 0))?;
        let mut mn = Vec::with_capacity(cols.len() * self.ctx.nvars);
        for c in cols {
            let e = self.ctx.from_column(c, 0);
            for v in 0..self.ctx.nvars {
                mn.push(self.ctx.mul_term(&e, &Monomial::var(self.ctx.nvars, v), 1));
            }
        }
        b.add_generators(mn)?;
        let mut keep = Vec::new();
        for (j, c) in cols.iter().enumerate() {
            if b.add_one(self.ctx.from_column(c, 0))? {
                keep.push(j);
            }
        }
        Ok(keep)
    }

    /// Solves `unit * t = map * v (mod I)` with every entry of `v` in `m^n`,
    /// for each target `t`. `map` is given by its columns in `Q^rank`.
    ///
    /// First an unconstrained solution `v0` is found. The constrained
    /// problem then asks whether `v0 ∈ Syz(map) + m^n R^s`, decided with a
    /// term-over-position order on `R^s` under which a standard basis of
    /// `Syz(map) + I R^s` together with the degree-`n` monomials is a
    /// standard basis of the sum. Two tag blocks record the syzygy and
    /// monomial parts of the reduction; the monomial part is the lift.
    pub fn preimages(
        &self,
        map: &[Column],
        rank: usize,
        n: u32,
        targets: &[Column],
    ) -> Result<Vec<Option<Preimage>>> {
        Ok(self
            .preimages_with_residuals(map, rank, n, targets)?
            .into_iter()
            .map(|r| r.ok())
            .collect())
    }

    /// As [`QuotientRing::preimages`], reporting the irreducible residual of
    /// each failed target (a column in `Q^rank` for an unsolvable equation,
    /// or in `Q^s` for a solution that cannot be pushed into `m^n`).
    pub fn preimages_with_residuals(
        &self,
        map: &[Column],
        rank: usize,
        n: u32,
        targets: &[Column],
    ) -> Result<Vec<std::result::Result<Preimage, Column>>> {
        let s = map.len();
        let r = rank as u32;
        let nv = self.ctx.nvars;
        let one = Monomial::one(nv);
        let mut gens = self.ideal_block(rank, 0);
        for (j, c) in map.iter().enumerate() {
            let e = self.ctx.from_column(c, 0);
            gens.push(self.ctx.add(&e, &self.ctx.basis_vector(r + j as u32, one.clone())));
        }
        let mut b = SbBuilder::new(self.ctx, self.limits).discarding_from(r);
        b.add_generators(gens)?;

        let mut first = Vec::with_capacity(targets.len());
        for t in targets {
            let res = b.nf(&self.ctx.from_column(t, 0), true)?;
            if res.rem.lt().map_or(false, |lt| lt.comp < r) {
                first.push(Err(self.ctx.to_column(&res.rem, rank, 0)));
                continue;
            }
            let v0: Column = self.ctx.to_column(&res.rem, s, r).iter().map(|p| p.neg()).collect();
            first.push(Ok(Preimage {
                unit: self.ctx.to_poly(&res.unit),
                v: v0,
            }));
        }
        if n == 0 || s == 0 || first.iter().all(|x| x.is_err()) {
            return Ok(first);
        }

        // blocks: [0, s) the lift, [s, 2s) syzygy tag, [2s, 3s) monomial tag
        let su = s as u32;
        let ctx2 = self.ctx.with_block(su);
        let syz = self.syzygies(map, rank)?;
        let mut gens2: Vec<FreeElem> = Vec::new();
        for k in 0..su {
            for f in &self.ideal_sb {
                gens2.push(ctx2.shift(f, k as i64));
            }
        }
        for z in &syz {
            let e = ctx2.from_column(z, 0);
            gens2.push(ctx2.add(&e, &ctx2.shift(&e, su as i64)));
        }
        let mut b2 = SbBuilder::new(ctx2, self.limits).discarding_from(su);
        b2.add_generators(gens2)?;
        let mut reducers: Vec<BasisElem> = b2.basis().to_vec();
        for l in 0..su {
            for a in Monomial::all_of_degree(nv, n) {
                let m = ctx2.basis_vector(l, a.clone());
                let tag = ctx2.basis_vector(l + 2 * su, a);
                reducers.push(BasisElem::new(ctx2.add(&m, &tag)));
            }
        }

        let mut out = Vec::with_capacity(first.len());
        for item in first {
            let Ok(p) = item else {
                out.push(item);
                continue;
            };
            let v0 = ctx2.from_column(&p.v, 0);
            let res = normal_form(&ctx2, &v0, &reducers, true, &self.limits)?;
            if res.rem.lt().map_or(false, |lt| lt.comp < su) {
                out.push(Err(ctx2.to_column(&res.rem, s, 0)));
                continue;
            }
            let v: Column = ctx2.to_column(&res.rem, s, 2 * su).iter().map(|q| q.neg()).collect();
            let u1 = ctx2.to_poly(&res.unit);
            out.push(Ok(Preimage {
                unit: u1.mul(&p.unit),
                v,
            }));
        }
        Ok(out)
    }

    /// Generators of `(span(a) + I*Q^r) ∩ (span(b) + I*Q^r)`.
    pub fn intersection(&self, a: &[Column], b: &[Column], rank: usize) -> Result<Vec<Column>> {
        let r = rank as u32;
        let mut gens = self.ideal_block(rank, 0);
        for i in self.ideal_block(rank, 0) {
            gens.push(self.ctx.add(&i, &self.ctx.shift(&i, r as i64)));
        }
        for c in a {
            let e = self.ctx.from_column(c, 0);
            gens.push(self.ctx.add(&e, &self.ctx.shift(&e, r as i64)));
        }
        for c in b {
            gens.push(self.ctx.from_column(c, 0));
        }
        let mut sb = SbBuilder::new(self.ctx, self.limits);
        sb.add_generators(gens)?;
        let mut out = Vec::new();
        for e in sb.minimal_basis() {
            if e.lt().unwrap().comp >= r {
                let col = self.ctx.to_column(&e, rank, r);
                if !self.column_is_zero(&col)? {
                    out.push(col);
                }
            }
        }
        Ok(out)
    }

    /// `sum_j cols_j * coeffs_j` as polynomials.
    pub fn apply(&self, cols: &[Column], rank: usize, coeffs: &[Polynomial]) -> Column {
        let mut out = self.zero_column(rank);
        for (c, a) in cols.iter().zip(coeffs) {
            if a.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(c) {
                *o = o.add(&a.mul(p));
            }
        }
        out
    }
}
