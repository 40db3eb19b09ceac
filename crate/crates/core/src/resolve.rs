//! Minimal free resolutions over local rings `Q/I`, Betti numbers and the
//! divided-power complexity probe.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stdbasis::{Column, QuotientRing};

/// The first `d` differentials of a minimal free resolution.
#[derive(Clone, Debug)]
pub struct ResolutionSlice {
    pub betti: Vec<usize>,
    /// `diffs[i]` is `∂_{i+1}: F_{i+1} -> F_i`, given by its `betti[i+1]`
    /// columns of length `betti[i]`.
    pub diffs: Vec<Vec<Column>>,
}

fn column_order(col: &Column) -> u32 {
    col.iter().filter_map(|p| p.ord()).min().unwrap_or(u32::MAX)
}

/// A minimal generating subset of `cols` in `R^rank`, preferring low orders.
pub fn minimal_columns(ring: &QuotientRing, cols: Vec<Column>, rank: usize) -> Result<Vec<Column>> {
    let mut nonzero = Vec::new();
    for c in cols {
        if !ring.column_is_zero(&c)? {
            nonzero.push(c);
        }
    }
    nonzero.sort_by_key(column_order);
    let keep = ring.minimal_indices(&nonzero, rank)?;
    Ok(keep.into_iter().map(|i| nonzero[i].clone()).collect())
}

/// Minimal free resolution of `M = coker(presentation)` (columns in `R^rank`)
/// up to homological degree `d`.
///
/// The presentation must be minimal in the sense that no entry is a unit;
/// otherwise `NonMinimalPresentation` is returned.
pub fn min_resolution(ring: &QuotientRing, presentation: &[Column], rank: usize, d: usize) -> Result<ResolutionSlice> {
    for (j, c) in presentation.iter().enumerate() {
        if c.len() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: c.len(),
            });
        }
        if c.iter().any(|p| p.constant_term() != 0) {
            return Err(Error::NonMinimalPresentation(format!("column {j} has a unit entry")));
        }
    }
    let mut betti = vec![rank];
    let mut diffs: Vec<Vec<Column>> = Vec::new();
    if d == 0 {
        return Ok(ResolutionSlice { betti, diffs });
    }
    let first = minimal_columns(ring, presentation.to_vec(), rank)?;
    betti.push(first.len());
    diffs.push(first);
    while diffs.len() < d {
        ring.limits().check_time()?;
        let last = diffs.last().unwrap();
        let src_rank = *betti.last().unwrap();
        if src_rank == 0 {
            betti.push(0);
            diffs.push(Vec::new());
            continue;
        }
        let prev_rank = betti[betti.len() - 2];
        let syz = ring.syzygies(last, prev_rank)?;
        let next = minimal_columns(ring, syz, src_rank)?;
        betti.push(next.len());
        diffs.push(next);
    }
    Ok(ResolutionSlice { betti, diffs })
}

impl ResolutionSlice {
    /// `∂_i ∂_{i+1} ≡ 0` modulo the ideal and every entry in the maximal ideal.
    pub fn check(&self, ring: &QuotientRing) -> Result<()> {
        for (i, cols) in self.diffs.iter().enumerate() {
            for c in cols {
                if c.iter().any(|p| p.constant_term() != 0) {
                    return Err(Error::Assertion(format!("unit entry in differential {}", i + 1)));
                }
            }
            if i + 1 < self.diffs.len() {
                for c in &self.diffs[i + 1] {
                    let img = ring.apply(cols, self.betti[i], c);
                    if !ring.column_is_zero(&img)? {
                        return Err(Error::Assertion(format!(
                            "differentials {} and {} do not compose to zero",
                            i + 1,
                            i + 2
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn betti_numbers(ring: &QuotientRing, presentation: &[Column], rank: usize, d: usize) -> Result<Vec<usize>> {
    Ok(min_resolution(ring, presentation, rank, d)?.betti)
}

/// Presentation of the residue field: the row of variables.
pub fn residue_field_presentation(ring: &QuotientRing) -> Vec<Column> {
    let (f, n) = (ring.field(), ring.nvars());
    (0..n)
        .map(|v| vec![crate::ring_core::Polynomial::var(f, n, v)])
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    pub m: usize,
    pub beta: usize,
    pub bound: u64,
    pub margin: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub applicable: bool,
    pub reason: Option<String>,
    pub t: usize,
    pub betti: Vec<usize>,
    pub rows: Vec<ProbeRow>,
    pub ok: bool,
}

fn binom(n: u64, k: u64) -> u64 {
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Checks `β_{2m}(M) ≥ C(t-1+m, m) β_0(M)` for `2m ≤ d`, where `t` is the
/// number of minimal generators of the defining ideal. Applies only when
/// `ℓℓ(M) < ord(R)`.
pub fn complexity_probe(
    ring: &QuotientRing,
    presentation: &[Column],
    rank: usize,
    d: usize,
    t: usize,
    module_loewy: u32,
    ring_ord: Option<u32>,
) -> Result<ProbeReport> {
    let applicable = ring_ord.map_or(false, |o| module_loewy < o);
    if !applicable {
        return Ok(ProbeReport {
            applicable,
            reason: Some(format!(
                "probe not applicable: Loewy length {module_loewy} is not below ord(R) = {ring_ord:?}"
            )),
            t,
            betti: Vec::new(),
            rows: Vec::new(),
            ok: true,
        });
    }
    let betti = betti_numbers(ring, presentation, rank, d)?;
    let mut rows = Vec::new();
    for m in 0..=d / 2 {
        let beta = betti[2 * m];
        let bound = binom((t + m).saturating_sub(1) as u64, m as u64) * betti[0] as u64;
        rows.push(ProbeRow {
            m,
            beta,
            bound,
            margin: beta as i64 - bound as i64,
        });
    }
    let ok = rows.iter().all(|r| r.margin >= 0);
    Ok(ProbeReport {
        applicable,
        reason: None,
        t,
        betti,
        rows,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::{parse_polynomial, Polynomial, PrimeField};
    use crate::stdbasis::Limits;

    fn ring(vars: &[&str], gens: &[&str]) -> (QuotientRing, Vec<String>) {
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let f = PrimeField::default();
        let g: Vec<Polynomial> = gens.iter().map(|s| parse_polynomial(s, &v, f).unwrap()).collect();
        (QuotientRing::new(f, v.len(), &g, Limits::none()).unwrap(), v)
    }

    #[test]
    fn truncated_line_is_periodic() {
        let (q, _) = ring(&["x"], &["x^3"]);
        let res = min_resolution(&q, &residue_field_presentation(&q), 1, 5).unwrap();
        assert_eq!(res.betti, vec![1; 6]);
        res.check(&q).unwrap();
        let ords: Vec<u32> = res.diffs.iter().map(|d| d[0][0].ord().unwrap()).collect();
        assert_eq!(ords, vec![1, 2, 1, 2, 1]);
    }

    #[test]
    fn regular_ring_gives_koszul() {
        let (q, _) = ring(&["x", "y", "z"], &[]);
        let b = betti_numbers(&q, &residue_field_presentation(&q), 1, 4).unwrap();
        assert_eq!(b, vec![1, 3, 3, 1, 0]);
    }

    #[test]
    fn square_of_maximal_ideal() {
        let (q, _) = ring(&["x", "y"], &["x^2", "x*y", "y^2"]);
        let res = min_resolution(&q, &residue_field_presentation(&q), 1, 4).unwrap();
        assert_eq!(res.betti, vec![1, 2, 4, 8, 16]);
        res.check(&q).unwrap();
    }

    #[test]
    fn free_module_has_no_syzygies() {
        let (q, _) = ring(&["x", "y"], &["x^2"]);
        assert_eq!(betti_numbers(&q, &[], 2, 3).unwrap(), vec![2, 0, 0, 0]);
    }

    #[test]
    fn unit_entry_rejected() {
        let (q, v) = ring(&["x"], &["x^3"]);
        let one = parse_polynomial("1 + x", &v, q.field()).unwrap();
        assert!(matches!(
            min_resolution(&q, &[vec![one]], 1, 2),
            Err(Error::NonMinimalPresentation(_))
        ));
    }

    #[test]
    fn probe_gate() {
        let (q, v) = ring(&["x", "y"], &["x^4", "y^4"]);
        let pres = vec![
            vec![parse_polynomial("x^2", &v, q.field()).unwrap()],
            vec![parse_polynomial("y^2", &v, q.field()).unwrap()],
        ];
        let r = complexity_probe(&q, &pres, 1, 6, 2, 3, Some(4)).unwrap();
        assert!(r.applicable && r.ok);
        assert_eq!(r.rows.iter().map(|x| x.bound).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        let n = complexity_probe(&q, &pres, 1, 6, 2, 4, Some(4)).unwrap();
        assert!(!n.applicable);
    }
}
