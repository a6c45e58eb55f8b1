//! Exact Laplacian spectra.
//!
//! The characteristic polynomial `det(μI − L)` is computed with Berkowitz's
//! division-free algorithm. Arithmetic runs in checked `i128` and restarts in
//! `BigInt` on overflow, so results are exact for every supported order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Zero};

use crate::error::SpectrumError;
use crate::graph::Graph;

/// Sorted multiset of nonnegative integers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpectrumMultiset {
    entries: Vec<(usize, usize)>,
}

impl SpectrumMultiset {
    pub fn from_values<I: IntoIterator<Item = usize>>(values: I) -> Self {
        let mut counts = BTreeMap::new();
        for v in values {
            *counts.entry(v).or_insert(0) += 1;
        }
        SpectrumMultiset { entries: counts.into_iter().collect() }
    }

    /// `(value, multiplicity)` pairs, values strictly increasing.
    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// Total count with multiplicity.
    pub fn order(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Values in nondecreasing order, repeated by multiplicity.
    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().flat_map(|&(v, m)| std::iter::repeat_n(v, m))
    }

    pub fn multiplicity(&self, value: usize) -> usize {
        self.entries
            .binary_search_by_key(&value, |&(v, _)| v)
            .map(|k| self.entries[k].1)
            .unwrap_or(0)
    }

    pub fn contains(&self, value: usize) -> bool {
        self.multiplicity(value) > 0
    }

    pub fn max_value(&self) -> Option<usize> {
        self.entries.last().map(|&(v, _)| v)
    }

    pub fn sum(&self) -> usize {
        self.entries.iter().map(|&(v, m)| v * m).sum()
    }

    pub fn sum_of_squares(&self) -> usize {
        self.entries.iter().map(|&(v, m)| v * v * m).sum()
    }

    /// Second-smallest value with multiplicity.
    pub fn algebraic_connectivity(&self) -> Option<usize> {
        self.values().nth(1)
    }

    pub fn union(&self, other: &SpectrumMultiset) -> SpectrumMultiset {
        SpectrumMultiset::from_values(self.values().chain(other.values()))
    }

    /// Copy with one occurrence of `value` removed, if present.
    pub fn without_one(&self, value: usize) -> Option<SpectrumMultiset> {
        let k = self.entries.binary_search_by_key(&value, |&(v, _)| v).ok()?;
        let mut entries = self.entries.clone();
        if entries[k].1 == 1 {
            entries.remove(k);
        } else {
            entries[k].1 -= 1;
        }
        Some(SpectrumMultiset { entries })
    }

    /// `∏ (μ − v)` over the multiset.
    pub fn to_char_poly(&self) -> CharPoly {
        let mut coeffs = vec![BigInt::one()];
        for v in self.values() {
            let v = BigInt::from(v);
            let mut next = vec![BigInt::zero(); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &v;
            }
            coeffs = next;
        }
        CharPoly { coeffs }
    }
}

impl fmt::Display for SpectrumMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &(v, m)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            if m == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for SpectrumMultiset {
    type Err = SpectrumError;

    /// Parses `"0,1^2,4"`. Values must be strictly increasing.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut entries: Vec<(usize, usize)> = Vec::new();
        let mut position = 0;
        for item in s.split(',') {
            let err = |reason: &str| SpectrumError::Parse { position, reason: reason.to_string() };
            let (value, mult) = match item.split_once('^') {
                Some((v, m)) => (v, Some(m)),
                None => (item, None),
            };
            let value: usize = value.trim().parse().map_err(|_| err("expected a nonnegative integer"))?;
            let mult: usize = match mult {
                Some(m) => m.trim().parse().map_err(|_| err("expected a multiplicity after '^'"))?,
                None => 1,
            };
            if mult == 0 {
                return Err(err("multiplicity must be positive"));
            }
            if entries.last().is_some_and(|&(last, _)| last >= value) {
                return Err(err("values must be strictly increasing"));
            }
            entries.push((value, mult));
            position += item.len() + 1;
        }
        Ok(SpectrumMultiset { entries })
    }
}

/// `det(μI − L(G))`, coefficients indexed by power of `μ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    }

    /// Multiplicity of `k` as a root.
    pub fn root_multiplicity(&self, k: i64) -> usize {
        let k = BigInt::from(k);
        let mut p = self.coeffs.clone();
        let mut count = 0;
        while p.len() > 1 {
            match deflate(&p, &k).expect("BigInt arithmetic cannot overflow") {
                Some(q) => {
                    p = q;
                    count += 1;
                }
                None => break,
            }
        }
        count
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let abs = if neg { -c } else { c.clone() };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let unit = abs.is_one() && k > 0;
            if !unit {
                write!(f, "{abs}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("μ")?,
                _ => write!(f, "μ^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

trait Ring: Clone + Zero + One + CheckedAdd + CheckedSub + CheckedMul {}
impl<T: Clone + Zero + One + CheckedAdd + CheckedSub + CheckedMul> Ring for T {}

/// Berkowitz's algorithm; coefficients returned highest power first.
/// `None` on overflow of the ring.
fn berkowitz<T: Ring>(a: &[Vec<T>]) -> Option<Vec<T>> {
    let n = a.len();
    let mut p = vec![T::one()];
    for k in 0..n {
        // q = [1, -a_kk, -R C, -R M C, ..., -R M^{k-1} C]
        let mut q = Vec::with_capacity(k + 2);
        q.push(T::one());
        q.push(T::zero().checked_sub(&a[k][k])?);
        let mut v: Vec<T> = (0..k).map(|r| a[r][k].clone()).collect();
        for step in 0..k {
            let mut dot = T::zero();
            for c in 0..k {
                dot = dot.checked_add(&a[k][c].checked_mul(&v[c])?)?;
            }
            q.push(T::zero().checked_sub(&dot)?);
            if step + 1 < k {
                let mut next = Vec::with_capacity(k);
                for r in 0..k {
                    let mut s = T::zero();
                    for c in 0..k {
                        s = s.checked_add(&a[r][c].checked_mul(&v[c])?)?;
                    }
                    next.push(s);
                }
                v = next;
            }
        }
        let mut next = Vec::with_capacity(k + 2);
        for i in 0..k + 2 {
            let mut s = T::zero();
            for (j, pj) in p.iter().enumerate().take(i + 1) {
                s = s.checked_add(&q[i - j].checked_mul(pj)?)?;
            }
            next.push(s);
        }
        p = next;
    }
    Some(p)
}

fn laplacian<T: From<i64>>(g: &Graph) -> Vec<Vec<T>> {
    let n = g.order();
    (0..n)
        .map(|u| {
            (0..n)
                .map(|v| {
                    if u == v {
                        T::from(g.degree(u) as i64)
                    } else if g.has_edge(u, v) {
                        T::from(-1)
                    } else {
                        T::from(0)
                    }
                })
                .collect()
        })
        .collect()
}

fn small_char_poly(g: &Graph) -> Option<Vec<i128>> {
    let a: Vec<Vec<i128>> = laplacian::<i64>(g)
        .into_iter()
        .map(|row| row.into_iter().map(i128::from).collect())
        .collect();
    let mut p = berkowitz(&a)?;
    p.reverse();
    Some(p)
}

pub fn laplacian_char_poly(g: &Graph) -> CharPoly {
    let coeffs = match small_char_poly(g) {
        Some(p) => p.into_iter().map(BigInt::from).collect(),
        None => {
            let mut p = berkowitz(&laplacian::<BigInt>(g)).expect("BigInt arithmetic cannot overflow");
            p.reverse();
            p
        }
    };
    CharPoly { coeffs }
}

/// The characteristic polynomial has a factor that is not a product of
/// `(μ − k)` with `0 <= k <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotIntegral {
    pub residual_degree: usize,
}

impl fmt::Display for NotIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NotIntegral (residual degree {})", self.residual_degree)
    }
}

/// Divides `p` (lowest power first) by `(μ − k)` if `k` is a root.
fn deflate<T: Ring>(p: &[T], k: &T) -> Option<Option<Vec<T>>> {
    let d = p.len() - 1;
    let mut quotient = vec![T::zero(); d];
    let mut carry = T::zero();
    for i in (1..=d).rev() {
        carry = p[i].checked_add(&carry.checked_mul(k)?)?;
        quotient[i - 1] = carry.clone();
    }
    let remainder = p[0].checked_add(&carry.checked_mul(k)?)?;
    Some(remainder.is_zero().then_some(quotient))
}

fn integer_roots<T: Ring + From<i64>>(mut p: Vec<T>, bound: usize) -> Option<Result<Vec<usize>, NotIntegral>> {
    let mut roots = Vec::with_capacity(p.len());
    for k in 0..=bound {
        let kt = T::from(k as i64);
        while p.len() > 1 {
            match deflate(&p, &kt)? {
                Some(q) => {
                    p = q;
                    roots.push(k);
                }
                None => break,
            }
        }
    }
    if p.len() > 1 {
        Some(Err(NotIntegral { residual_degree: p.len() - 1 }))
    } else {
        Some(Ok(roots))
    }
}

/// Exact spectrum, found by deflating the characteristic polynomial by
/// `μ − k` for `k = 0..=n`.
pub fn integer_spectrum(g: &Graph) -> Result<SpectrumMultiset, NotIntegral> {
    let n = g.order();
    let small = small_char_poly(g).and_then(|p| integer_roots(p, n));
    let roots = match small {
        Some(r) => r,
        None => {
            let p = laplacian_char_poly(g).coeffs;
            integer_roots(p, n).expect("BigInt arithmetic cannot overflow")
        }
    }?;
    Ok(SpectrumMultiset::from_values(roots))
}

/// True when `g` has exactly the spectrum `target`.
pub fn has_spectrum(g: &Graph, target: &SpectrumMultiset) -> bool {
    target.order() == g.order() && laplacian_char_poly(g) == target.to_char_poly()
}

fn require_graph_spectrum(s: &SpectrumMultiset, what: &str) -> Result<(), SpectrumError> {
    if s.contains(0) {
        Ok(())
    } else {
        Err(SpectrumError::Domain(format!("{what} spectrum {s} lacks the eigenvalue 0")))
    }
}

/// `{0} ∪ {n − μ_k : k >= 2}`.
pub fn complement_spectrum(s: &SpectrumMultiset, n: usize) -> Result<SpectrumMultiset, SpectrumError> {
    require_graph_spectrum(s, "input")?;
    if s.order() != n {
        return Err(SpectrumError::Domain(format!("spectrum {s} has order {}, expected {n}", s.order())));
    }
    if s.max_value().unwrap_or(0) > n {
        return Err(SpectrumError::Domain(format!("spectrum {s} exceeds the bound {n}")));
    }
    let rest = s.without_one(0).expect("contains 0");
    Ok(SpectrumMultiset::from_values(std::iter::once(0).chain(rest.values().map(|mu| n - mu))))
}

/// Spectrum of `G ∨ H` from the spectra of `G` and `H`.
pub fn join_spectrum(sg: &SpectrumMultiset, sh: &SpectrumMultiset) -> Result<SpectrumMultiset, SpectrumError> {
    require_graph_spectrum(sg, "left")?;
    require_graph_spectrum(sh, "right")?;
    let (n, m) = (sg.order(), sh.order());
    let g_rest = sg.without_one(0).expect("contains 0");
    let h_rest = sh.without_one(0).expect("contains 0");
    let values = std::iter::once(0)
        .chain(g_rest.values().map(|mu| m + mu))
        .chain(h_rest.values().map(|la| n + la))
        .chain(std::iter::once(n + m));
    Ok(SpectrumMultiset::from_values(values))
}

pub fn union_spectrum(sg: &SpectrumMultiset, sh: &SpectrumMultiset) -> SpectrumMultiset {
    sg.union(sh)
}

/// Floating-point eigenvalue oracle shared by the tests of this crate.
#[cfg(test)]
pub(crate) fn float_eigenvalues(g: &Graph) -> Vec<f64> {
    let n = g.order();
    let lap = laplacian::<i64>(g);
    let m = nalgebra::DMatrix::from_fn(n, n, |r, c| lap[r][c] as f64);
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
