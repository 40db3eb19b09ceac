use std::cmp::Ordering;
use std::fmt;

use super::field::{PrimeField, Scalar};
use super::monomial::{Monomial, MonomialOrder};
use crate::error::{Error, Result};

/// A sparse polynomial over a prime field.
///
/// Terms are kept sorted in decreasing `ds` order (lowest degree first), with
/// no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    field: PrimeField,
    nvars: usize,
    terms: Vec<(Monomial, Scalar)>,
}

const CANON: MonomialOrder = MonomialOrder::Ds;

impl Polynomial {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        Polynomial {
            field,
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: Scalar) -> Self {
        Self::monomial(field, Monomial::one(nvars), c)
    }

    pub fn one(field: PrimeField, nvars: usize) -> Self {
        Self::constant(field, nvars, 1)
    }

    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        Self::monomial(field, Monomial::var(nvars, i), 1)
    }

    pub fn monomial(field: PrimeField, m: Monomial, c: Scalar) -> Self {
        let nvars = m.nvars();
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Polynomial { field, nvars, terms }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(field: PrimeField, nvars: usize, mut terms: Vec<(Monomial, Scalar)>) -> Self {
        terms.sort_by(|a, b| CANON.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = field.add(*lc, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| *c != 0);
        Polynomial {
            field,
            nvars,
            terms: out,
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Scalar {
        match self.terms.first() {
            Some((m, c)) if m.is_one() => *c,
            _ => 0,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms
            .binary_search_by(|(t, _)| CANON.cmp(m, t))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    /// m-adic order: the lowest total degree of a term, `None` for zero.
    pub fn ord(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Lowest-degree homogeneous component.
    pub fn initial_form(&self) -> Result<Polynomial> {
        let d = self.ord().ok_or(Error::ZeroPolynomial)?;
        Ok(self.homogeneous_part(d))
    }

    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .cloned()
                .collect(),
        }
    }

    /// Terms of degree `< d`.
    pub fn truncate_below(&self, d: u32) -> Polynomial {
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < d)
                .cloned()
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.degree() == m0.degree()),
        }
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, Scalar)> {
        match order {
            MonomialOrder::Ds => self.terms.first().map(|(m, c)| (m, *c)),
            MonomialOrder::Grevlex => self
                .terms
                .iter()
                .max_by(|a, b| order.cmp(&a.0, &b.0))
                .map(|(m, c)| (m, *c)),
        }
    }

    pub fn scale(&self, c: Scalar) -> Polynomial {
        if c == 0 {
            return Self::zero(self.field, self.nvars);
        }
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(*a, c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: Scalar) -> Polynomial {
        if c == 0 {
            return Self::zero(self.field, self.nvars);
        }
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), self.field.mul(*a, c)))
                .collect(),
        }
    }

    /// `self + c * other`
    pub fn add_scaled(&self, other: &Polynomial, c: Scalar) -> Polynomial {
        let f = self.field;
        if c == 0 || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match CANON.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.0.clone(), f.mul(b.1, c)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = f.add(a.1, f.mul(b.1, c));
                    if s != 0 {
                        out.push((a.0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend(other.terms[j..].iter().map(|(m, b)| (m.clone(), f.mul(*b, c))));
        Polynomial {
            field: f,
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.add_scaled(other, 1)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add_scaled(other, self.field.neg(1))
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.field.neg(1))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut acc = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.push((ma.mul(mb), self.field.mul(*ca, *cb)));
            }
        }
        Polynomial::from_terms(self.field, self.nvars, acc)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one(self.field, self.nvars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Scale so the canonical leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(*c).expect("nonzero")),
        }
    }

    pub fn fmt_with(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let v = self.field.to_symmetric(*c);
            let (neg, a) = if v < 0 { (true, -v) } else { (false, v) };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&a.to_string());
            } else if a == 1 {
                s.push_str(&m.fmt_with(vars));
            } else {
                s.push_str(&format!("{}*{}", a, m.fmt_with(vars)));
            }
        }
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i + 1)).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::parse_polynomial;

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str, v: &[&str]) -> Polynomial {
        parse_polynomial(s, &vars(v), PrimeField::default()).unwrap()
    }

    #[test]
    fn initial_forms() {
        let v = ["x", "y", "z"];
        assert_eq!(p("x^2-y^5", &v).initial_form().unwrap(), p("x^2", &v));
        assert_eq!(
            p("x*y^2+y*z^3-z^5", &v).initial_form().unwrap(),
            p("x*y^2", &v)
        );
        let h = p("x^2+y*z-3z^2", &v);
        assert_eq!(h.initial_form().unwrap(), h);
        assert_eq!(
            Polynomial::zero(PrimeField::default(), 3).initial_form(),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn orders() {
        let v = ["x", "y", "z"];
        assert_eq!(p("x^2-y^5", &v).ord(), Some(2));
        assert_eq!(p("x*y^2+y*z^3-z^5", &v).ord(), Some(3));
        assert_eq!(Polynomial::zero(PrimeField::default(), 3).ord(), None);
    }

    #[test]
    fn arithmetic() {
        let v = ["x", "y"];
        let a = p("x+y", &v);
        let b = p("x-y", &v);
        assert_eq!(a.mul(&b), p("x^2-y^2", &v));
        assert_eq!(a.sub(&a), Polynomial::zero(PrimeField::default(), 2));
        assert_eq!(a.pow(2), p("x^2+2x*y+y^2", &v));
        assert_eq!(p("1+x", &v).constant_term(), 1);
    }

    #[test]
    fn display_symmetric() {
        let v = vars(&["x", "y"]);
        let f = p("x^2 - 3*x*y + 1", &["x", "y"]);
        assert_eq!(f.fmt_with(&v), "1 + x^2 - 3*x*y");
    }
}
