use std::cmp::Ordering;

use crate::ring_core::{Monomial, MonomialOrder, Polynomial, PrimeField, Scalar};

/// One term `coef * mono * e_comp` of a free-module element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub comp: u32,
    pub mono: Monomial,
    pub coef: Scalar,
}

/// Sparse element of a free module `Q^r`, terms sorted decreasingly under the
/// position-over-term extension of the context's monomial order (component 0
/// is the largest position).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeElem {
    terms: Vec<Term>,
}

impl FreeElem {
    pub fn zero() -> Self {
        FreeElem { terms: Vec::new() }
    }

    #[inline]
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn lt(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.mono.degree()).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mono.degree()).min()
    }

    /// `max degree - degree of the leading monomial`.
    pub fn ecart(&self) -> u32 {
        match self.lt() {
            None => 0,
            Some(t) => self.max_degree() - t.mono.degree(),
        }
    }

    pub fn components(&self) -> impl Iterator<Item = u32> + '_ {
        let mut last = None;
        self.terms.iter().filter_map(move |t| {
            if last == Some(t.comp) {
                None
            } else {
                last = Some(t.comp);
                Some(t.comp)
            }
        })
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }
}

/// Arithmetic context: field, variable count and monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ctx {
    pub field: PrimeField,
    pub nvars: usize,
    pub order: MonomialOrder,
    /// Components `0..block` are compared term-over-position (monomial
    /// first); they stay above all later components, which are compared
    /// position-over-term. Zero means position-over-term throughout.
    pub block: u32,
    /// Terms of degree `>= trunc` are dropped, i.e. arithmetic happens
    /// modulo `m^trunc`. `u32::MAX` disables truncation.
    pub trunc: u32,
}

impl Ctx {
    pub fn new(field: PrimeField, nvars: usize, order: MonomialOrder) -> Self {
        Ctx {
            field,
            nvars,
            order,
            block: 0,
            trunc: u32::MAX,
        }
    }

    /// Same context with components `0..block` ordered term-over-position.
    pub fn with_block(self, block: u32) -> Self {
        Ctx { block, ..self }
    }

    /// Same context computing modulo `m^n`.
    pub fn truncated(self, n: u32) -> Self {
        Ctx { trunc: n, ..self }
    }

    #[inline]
    fn keeps(&self, m: &Monomial) -> bool {
        self.trunc == u32::MAX || m.degree() < self.trunc
    }

    #[inline]
    pub fn cmp_terms(&self, a_comp: u32, a: &Monomial, b_comp: u32, b: &Monomial) -> Ordering {
        if a_comp < self.block && b_comp < self.block {
            return self.order.cmp(a, b).then_with(|| b_comp.cmp(&a_comp));
        }
        b_comp
            .cmp(&a_comp)
            .then_with(|| self.order.cmp(a, b))
    }

    /// Sorts and merges arbitrary terms.
    pub fn normalize(&self, mut terms: Vec<Term>) -> FreeElem {
        terms.sort_by(|a, b| self.cmp_terms(b.comp, &b.mono, a.comp, &a.mono));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(l) if l.comp == t.comp && l.mono == t.mono => {
                    l.coef = self.field.add(l.coef, t.coef)
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coef != 0 && self.keeps(&t.mono));
        FreeElem { terms: out }
    }

    pub fn from_poly(&self, p: &Polynomial, comp: u32) -> FreeElem {
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| Term {
                comp,
                mono: m.clone(),
                coef: *c,
            })
            .collect();
        if self.order == MonomialOrder::Ds && self.trunc == u32::MAX {
            // polynomials are stored in ds order already
            FreeElem { terms }
        } else {
            self.normalize(terms)
        }
    }

    pub fn from_column(&self, col: &[Polynomial], offset: u32) -> FreeElem {
        let mut terms = Vec::new();
        for (i, p) in col.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(Term {
                    comp: offset + i as u32,
                    mono: m.clone(),
                    coef: *c,
                });
            }
        }
        if self.order == MonomialOrder::Ds && self.block == 0 && self.trunc == u32::MAX {
            FreeElem { terms }
        } else {
            self.normalize(terms)
        }
    }

    pub fn basis_vector(&self, comp: u32, mono: Monomial) -> FreeElem {
        FreeElem {
            terms: vec![Term {
                comp,
                mono,
                coef: 1,
            }],
        }
    }

    /// Entries `offset..offset+rank` as polynomials.
    pub fn to_column(&self, e: &FreeElem, rank: usize, offset: u32) -> Vec<Polynomial> {
        let mut buckets: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); rank];
        for t in &e.terms {
            if t.comp >= offset && ((t.comp - offset) as usize) < rank {
                buckets[(t.comp - offset) as usize].push((t.mono.clone(), t.coef));
            }
        }
        buckets
            .into_iter()
            .map(|ts| Polynomial::from_terms(self.field, self.nvars, ts))
            .collect()
    }

    pub fn to_poly(&self, e: &FreeElem) -> Polynomial {
        self.to_column(e, 1, 0).pop().unwrap()
    }

    /// `h + c * m * g`
    pub fn add_mul(&self, h: &FreeElem, c: Scalar, m: &Monomial, g: &FreeElem) -> FreeElem {
        if c == 0 || g.is_zero() {
            return h.clone();
        }
        let f = self.field;
        let mut out = Vec::with_capacity(h.terms.len() + g.terms.len());
        let mut i = 0;
        let mut gi = g
            .terms
            .iter()
            .map(|t| Term {
                comp: t.comp,
                mono: t.mono.mul(m),
                coef: f.mul(t.coef, c),
            })
            .filter(|t| self.keeps(&t.mono));
        let mut next_g = gi.next();
        while let Some(b) = next_g.take() {
            if i >= h.terms.len() {
                out.push(b);
                out.extend(gi.by_ref());
                break;
            }
            let a = &h.terms[i];
            match self.cmp_terms(a.comp, &a.mono, b.comp, &b.mono) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                    next_g = Some(b);
                }
                Ordering::Less => {
                    out.push(b);
                    next_g = gi.next();
                }
                Ordering::Equal => {
                    let s = f.add(a.coef, b.coef);
                    if s != 0 {
                        out.push(Term {
                            comp: a.comp,
                            mono: a.mono.clone(),
                            coef: s,
                        });
                    }
                    i += 1;
                    next_g = gi.next();
                }
            }
        }
        if i < h.terms.len() {
            out.extend_from_slice(&h.terms[i..]);
        }
        FreeElem { terms: out }
    }

    pub fn add(&self, a: &FreeElem, b: &FreeElem) -> FreeElem {
        self.add_mul(a, 1, &Monomial::one(self.nvars), b)
    }

    pub fn sub(&self, a: &FreeElem, b: &FreeElem) -> FreeElem {
        self.add_mul(a, self.field.neg(1), &Monomial::one(self.nvars), b)
    }

    pub fn scale(&self, e: &FreeElem, c: Scalar) -> FreeElem {
        if c == 0 {
            return FreeElem::zero();
        }
        FreeElem {
            terms: e
                .terms
                .iter()
                .map(|t| Term {
                    comp: t.comp,
                    mono: t.mono.clone(),
                    coef: self.field.mul(t.coef, c),
                })
                .collect(),
        }
    }

    pub fn mul_term(&self, e: &FreeElem, m: &Monomial, c: Scalar) -> FreeElem {
        if c == 0 {
            return FreeElem::zero();
        }
        FreeElem {
            terms: e
                .terms
                .iter()
                .map(|t| Term {
                    comp: t.comp,
                    mono: t.mono.mul(m),
                    coef: self.field.mul(t.coef, c),
                })
                .filter(|t| self.keeps(&t.mono))
                .collect(),
        }
    }

    /// Product of a rank-one element (a polynomial, component 0) with `g`.
    pub fn mul_poly(&self, p: &FreeElem, g: &FreeElem) -> FreeElem {
        let mut acc = FreeElem::zero();
        for t in &p.terms {
            acc = self.add_mul(&acc, t.coef, &t.mono, g);
        }
        acc
    }

    pub fn monic(&self, e: &FreeElem) -> FreeElem {
        match e.lt() {
            None => FreeElem::zero(),
            Some(t) if t.coef == 1 => e.clone(),
            Some(t) => self.scale(e, self.field.inv(t.coef).unwrap()),
        }
    }

    /// Moves every component by `delta`; terms that would become negative are dropped.
    pub fn shift(&self, e: &FreeElem, delta: i64) -> FreeElem {
        let terms = e
            .terms
            .iter()
            .filter(|t| t.comp as i64 + delta >= 0)
            .map(|t| Term {
                comp: (t.comp as i64 + delta) as u32,
                mono: t.mono.clone(),
                coef: t.coef,
            })
            .collect();
        if self.block == 0 {
            FreeElem { terms }
        } else {
            self.normalize(terms)
        }
    }

    /// Terms with component in `lo..hi`.
    pub fn restrict(&self, e: &FreeElem, lo: u32, hi: u32) -> FreeElem {
        FreeElem {
            terms: e
                .terms
                .iter()
                .filter(|t| t.comp >= lo && t.comp < hi)
                .cloned()
                .collect(),
        }
    }

    /// `e` without its leading term.
    pub fn restrict_tail(&self, e: &FreeElem) -> FreeElem {
        FreeElem {
            terms: e.terms.get(1..).map(|t| t.to_vec()).unwrap_or_default(),
        }
    }

    pub fn one(&self) -> FreeElem {
        self.basis_vector(0, Monomial::one(self.nvars))
    }
}
