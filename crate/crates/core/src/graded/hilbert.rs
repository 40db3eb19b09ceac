use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ring_core::Monomial;

/// `HS(t) = numerator(t) / (1 - t)^denom_power`, numerator coefficients listed
/// from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    pub numerator: Vec<i64>,
    pub denom_power: usize,
}

fn trim(mut p: Vec<i64>) -> Vec<i64> {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    if p.is_empty() {
        p.push(0);
    }
    p
}

fn padd(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] += v;
    }
    trim(out)
}

fn pmul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// `(1 - t)^k`
pub fn one_minus_t_pow(k: usize) -> Vec<i64> {
    let mut p = vec![1];
    for _ in 0..k {
        p = pmul(&p, &[1, -1]);
    }
    p
}

/// Polynomial product of integer coefficient lists.
pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    pmul(a, b)
}

fn shift(p: &[i64], k: usize) -> Vec<i64> {
    let mut out = vec![0; k];
    out.extend_from_slice(p);
    trim(out)
}

/// Divides by `(1 - t)` if exact.
fn div_one_minus_t(p: &[i64]) -> Option<Vec<i64>> {
    // p = (1 - t) q  <=>  q_i = sum_{k <= i} p_k, and the total sum is zero
    if p.iter().sum::<i64>() != 0 {
        return None;
    }
    let mut q = Vec::with_capacity(p.len());
    let mut acc = 0;
    for &c in &p[..p.len().saturating_sub(1)] {
        acc += c;
        q.push(acc);
    }
    Some(trim(q))
}

fn minimalize(gens: &[Monomial]) -> Vec<Monomial> {
    let mut g: Vec<Monomial> = gens.to_vec();
    g.sort_by_key(|m| m.degree());
    g.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in g {
        if !out.iter().any(|o| o.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Numerator of the Hilbert series of `k[x_1..x_n]/J`, `J` generated by `gens`.
pub fn hilbert_numerator(gens: &[Monomial], nvars: usize) -> HilbertSeries {
    HilbertSeries {
        numerator: numerator_rec(minimalize(gens)),
        denom_power: nvars,
    }
}

fn numerator_rec(gens: Vec<Monomial>) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.is_one()) {
        return vec![0];
    }
    // pairwise coprime generators: product of (1 - t^deg)
    let coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if coprime {
        let mut p = vec![1];
        for m in &gens {
            let mut f = vec![0; m.degree() as usize + 1];
            f[0] = 1;
            f[m.degree() as usize] -= 1;
            p = pmul(&p, &f);
        }
        return p;
    }
    // pivot on the variable occurring in the most generators
    let n = gens[0].nvars();
    let mut counts = vec![0usize; n];
    for m in &gens {
        for (v, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                counts[v] += 1;
            }
        }
    }
    let v = (0..n).max_by_key(|&v| counts[v]).unwrap();
    let x = Monomial::var(n, v);
    // J + (x)
    let mut plus: Vec<Monomial> = gens.iter().filter(|m| m.exps()[v] == 0).cloned().collect();
    plus.push(x.clone());
    // J : x
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|m| {
            let e = m.exps()[v];
            if e > 0 {
                m.with_exp(v, e - 1)
            } else {
                m.clone()
            }
        })
        .collect();
    let a = numerator_rec(minimalize(&plus));
    let b = numerator_rec(minimalize(&colon));
    padd(&a, &shift(&b, 1))
}

impl HilbertSeries {
    /// Cancels common `(1 - t)` factors: returns `(h, d)` with `h(1) != 0`
    /// (or `h = 0` for the zero ring).
    pub fn reduced(&self) -> (Vec<i64>, usize) {
        let mut h = trim(self.numerator.clone());
        let mut d = self.denom_power;
        if h == [0] {
            return (h, 0);
        }
        while d > 0 {
            match div_one_minus_t(&h) {
                Some(q) => {
                    h = q;
                    d -= 1;
                }
                None => break,
            }
        }
        (h, d)
    }

    /// Krull dimension: the pole order at `t = 1`.
    pub fn dim(&self) -> usize {
        self.reduced().1
    }

    /// Multiplicity: `h(1)` of the reduced numerator.
    pub fn multiplicity(&self) -> i64 {
        self.reduced().0.iter().sum()
    }

    /// Coefficient of `t^j` in the expansion.
    pub fn hilbert_function(&self, j: usize) -> i64 {
        // coefficient of t^m in (1-t)^{-n} is C(m+n-1, n-1)
        let n = self.denom_power;
        let mut total = 0i64;
        for (i, &c) in self.numerator.iter().enumerate() {
            if i > j || c == 0 {
                continue;
            }
            total += c * binom_multiset(n, j - i);
        }
        total
    }

    pub fn expansion(&self, upto: usize) -> Vec<i64> {
        (0..=upto).map(|j| self.hilbert_function(j)).collect()
    }

    pub fn numerator_string(&self) -> String {
        format_poly(&self.numerator)
    }
}

/// Number of monomials of degree `m` in `n` variables.
pub fn binom_multiset(n: usize, m: usize) -> i64 {
    if n == 0 {
        return if m == 0 { 1 } else { 0 };
    }
    let mut r: i128 = 1;
    for i in 1..n {
        r = r * (m + i) as i128 / i as i128;
    }
    r as i64
}

pub fn format_poly(p: &[i64]) -> String {
    let mut s = String::new();
    for (i, &c) in p.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mag = c.unsigned_abs();
        if s.is_empty() {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if c < 0 { " - " } else { " + " });
        }
        match (i, mag) {
            (0, _) => s.push_str(&mag.to_string()),
            (1, 1) => s.push('t'),
            (1, _) => s.push_str(&format!("{mag}t")),
            (_, 1) => s.push_str(&format!("t^{i}")),
            _ => s.push_str(&format!("{mag}t^{i}")),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / (1-t)^{}", format_poly(&self.numerator), self.denom_power)
    }
}
