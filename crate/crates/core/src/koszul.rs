//! Graded Koszul complexes over `R^g` and regularity from their homology.
//!
//! For linear forms `l_1..l_d` the Koszul complex `A^g` has pieces
//! `A^g_{i,J} = Λ^i k^d ⊗ R^g_{J-i}`; the regularity of `R^g` is the largest
//! `J - i` with `H_i(A^g)_J ≠ 0` when the forms are a system of parameters.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{random_linear_sop, DegreeBasis, GradedView};
use crate::linalg::DenseMatrix;
use crate::ring_core::Polynomial;
use crate::stdbasis::Limits;

/// Materialized Koszul complex of linear forms on a graded algebra, for
/// internal degrees `0..=cutoff`.
#[derive(Clone, Debug)]
pub struct GradedComplexSlice {
    d: usize,
    cutoff: u32,
    /// Standard-monomial basis of `R^g_m` for `m <= cutoff`.
    bases: Vec<DegreeBasis>,
    /// `mult[m][k]`: multiplication by `l_k` from `R^g_m` to `R^g_{m+1}`.
    mult: Vec<Vec<DenseMatrix>>,
    /// Subsets of `{0..d}` grouped by size, as bitmasks.
    subsets: Vec<Vec<u32>>,
}

/// One nonzero homology group `H_i(A^g)_j` of dimension `dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyEntry {
    pub i: usize,
    pub j: u32,
    pub dim: usize,
}

impl GradedComplexSlice {
    pub fn new(view: &GradedView, forms: &[Polynomial], cutoff: u32) -> Result<Self> {
        let d = forms.len();
        if let Some(f) = forms.iter().find(|f| !f.is_homogeneous() || f.ord() != Some(1)) {
            return Err(Error::InvalidSop(format!("form of order {:?} is not linear", f.ord())));
        }
        let bases: Vec<DegreeBasis> = (0..=cutoff + 1)
            .map(|m| DegreeBasis::new(view.standard_monomials(m)))
            .collect();
        let field = view.field();
        let mut mult = Vec::with_capacity(cutoff as usize + 1);
        for m in 0..=cutoff as usize {
            let (src, dst) = (&bases[m], &bases[m + 1]);
            let mut per_form = Vec::with_capacity(d);
            for l in forms {
                let mut mat = DenseMatrix::zeros(field, dst.len(), src.len());
                for (c, mono) in src.monomials.iter().enumerate() {
                    let prod = view.reduce(&l.mul_monomial(mono, 1));
                    for (r, v) in dst.coords(&prod).into_iter().enumerate() {
                        if v != 0 {
                            mat.set(r, c, v);
                        }
                    }
                }
                per_form.push(mat);
            }
            mult.push(per_form);
        }
        let mut subsets = vec![Vec::new(); d + 1];
        for s in 0u32..(1 << d) {
            subsets[s.count_ones() as usize].push(s);
        }
        Ok(GradedComplexSlice {
            d,
            cutoff,
            bases,
            mult,
            subsets,
        })
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn length(&self) -> usize {
        self.d
    }

    fn piece(&self, m: i64) -> usize {
        if m < 0 || m as usize >= self.bases.len() {
            0
        } else {
            self.bases[m as usize].len()
        }
    }

    /// `dim_k A^g_{i,j}`.
    pub fn dim_a(&self, i: usize, j: u32) -> usize {
        if i > self.d {
            return 0;
        }
        self.subsets[i].len() * self.piece(j as i64 - i as i64)
    }

    /// Matrix of `∂: A^g_{i,j} -> A^g_{i-1,j}`.
    pub fn differential(&self, i: usize, j: u32) -> DenseMatrix {
        let field = self.mult.first().and_then(|m| m.first()).map(|m| m.field()).unwrap_or_default();
        let rows = if i == 0 { 0 } else { self.dim_a(i - 1, j) };
        let cols = self.dim_a(i, j);
        let mut out = DenseMatrix::zeros(field, rows, cols);
        if i == 0 || i > self.d || rows == 0 || cols == 0 {
            return out;
        }
        let m = (j as i64 - i as i64) as usize;
        let src = self.bases[m].len();
        let dst = self.bases[m + 1].len();
        let row_pos = |s: u32| self.subsets[i - 1].iter().position(|&t| t == s).unwrap();
        for (si, &s) in self.subsets[i].iter().enumerate() {
            let mut pos = 0;
            for k in 0..self.d {
                if s & (1 << k) == 0 {
                    continue;
                }
                let sign_neg = pos % 2 == 1;
                pos += 1;
                let r0 = row_pos(s & !(1 << k)) * dst;
                let c0 = si * src;
                let mat = &self.mult[m][k];
                for r in 0..dst {
                    for c in 0..src {
                        let v = mat.get(r, c);
                        if v != 0 {
                            let v = if sign_neg { field.neg(v) } else { v };
                            out.add_to(r0 + r, c0 + c, v);
                        }
                    }
                }
            }
        }
        out
    }

    /// `dim_k H_i(A^g)_j`.
    pub fn homology_rank(&self, i: usize, j: u32) -> usize {
        let a = self.dim_a(i, j);
        if a == 0 {
            return 0;
        }
        let out_rank = self.differential(i, j).rank();
        let in_rank = if i < self.d { self.differential(i + 1, j).rank() } else { 0 };
        a - out_rank - in_rank
    }

    /// Asserts `∂∂ = 0` and the Euler characteristic identity in degree `j`.
    pub fn check_degree(&self, j: u32) -> Result<()> {
        for i in 1..self.d {
            let comp = self.differential(i, j).mul(&self.differential(i + 1, j));
            if !comp.is_zero() {
                return Err(Error::Assertion(format!("Koszul differential does not square to zero at ({i}, {j})")));
            }
        }
        let mut chi_a = 0i64;
        let mut chi_h = 0i64;
        for i in 0..=self.d {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            chi_a += sign * self.dim_a(i, j) as i64;
            chi_h += sign * self.homology_rank(i, j) as i64;
        }
        if chi_a != chi_h {
            return Err(Error::Assertion(format!("Euler characteristic mismatch in degree {j}")));
        }
        Ok(())
    }

    /// All nonzero homology groups in internal degrees `0..=cutoff`.
    pub fn nonzero_homology(&self) -> Vec<HomologyEntry> {
        let mut out = Vec::new();
        for j in 0..=self.cutoff {
            for i in 0..=self.d.min(j as usize) {
                let h = self.homology_rank(i, j);
                if h > 0 {
                    out.push(HomologyEntry { i, j, dim: h });
                }
            }
        }
        out
    }
}

pub fn koszul_graded(view: &GradedView, forms: &[Polynomial], cutoff: u32) -> Result<GradedComplexSlice> {
    GradedComplexSlice::new(view, forms, cutoff)
}

pub fn graded_homology_rank(c: &GradedComplexSlice, i: usize, j: u32) -> usize {
    c.homology_rank(i, j)
}

/// Upper bound for `reg(R^g)`: regularity only grows when passing to the
/// leading ideal, and the Taylor resolution of a monomial ideal bounds it by
/// `deg lcm(generators) - 1`.
pub fn regularity_bound(view: &GradedView) -> u32 {
    let n = view.nvars();
    let mut lcm = vec![0u32; n];
    for m in &view.leading {
        for (v, &e) in m.exps().iter().enumerate() {
            lcm[v] = lcm[v].max(e as u32);
        }
    }
    lcm.iter().sum::<u32>().saturating_sub(1)
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub value: u32,
    pub cutoff: u32,
    pub sop: Vec<String>,
    pub homology: Vec<HomologyEntry>,
}

/// `max { j - i : H_i(A^g)_j ≠ 0 }` for the given linear sop.
pub fn regularity_with_sop(view: &GradedView, forms: &[Polynomial], limits: Limits) -> Result<RegularityReport> {
    if view.quotient(forms, limits)?.dim != 0 || forms.len() != view.dim {
        return Err(Error::InvalidSop("forms are not a system of parameters of R^g".into()));
    }
    let needed = regularity_bound(view) + forms.len() as u32;
    let mut cutoff = 2 * view.max_gb_degree() + view.dim as u32 + 2;
    while cutoff < needed {
        cutoff *= 2;
    }
    let slice = GradedComplexSlice::new(view, forms, cutoff)?;
    for j in 0..=cutoff {
        limits.check_time()?;
        slice.check_degree(j)?;
    }
    let homology = slice.nonzero_homology();
    let value = homology
        .iter()
        .map(|h| h.j as i64 - h.i as i64)
        .max()
        .unwrap_or(0)
        .max(0) as u32;
    let names: Vec<String> = (0..view.nvars()).map(|i| format!("x{}", i + 1)).collect();
    Ok(RegularityReport {
        value,
        cutoff,
        sop: forms.iter().map(|f| f.fmt_with(&names)).collect(),
        homology,
    })
}

/// Regularity of `R^g` from a sampled linear sop, confirmed on a second one.
pub fn regularity(view: &GradedView, seed: u64, limits: Limits) -> Result<RegularityReport> {
    let a = regularity_with_sop(view, &random_linear_sop(view, seed, 0x5245_0000, limits)?, limits)?;
    let b = regularity_with_sop(view, &random_linear_sop(view, seed, 0x5245_0001, limits)?, limits)?;
    if a.value != b.value {
        return Err(Error::Genericity(format!(
            "regularity {} vs {} for two sampled sops",
            a.value, b.value
        )));
    }
    Ok(a)
}
