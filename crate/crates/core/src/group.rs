//! `GL_k(F₂)` acting on polynomials by linear substitution.
//!
//! A group element is a `k x k` bit matrix; row `i` is the image of `x_{i+1}`
//! as a linear form. With this convention substitution is a right action:
//! `substitute(g * h, p) = substitute(h, substitute(g, p))`.

use std::collections::HashSet;
use std::fmt;
use std::hash::BuildHasherDefault;

use fnv::FnvHasher;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::monomial::{check_rank, Exponents, Monomial, Polynomial};

type FnvSet<T> = HashSet<T, BuildHasherDefault<FnvHasher>>;

/// Largest rank for which [`enumerate_group`] is allowed.
pub const MAX_ENUMERATED_RANK: usize = 4;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    rows: SmallVec<[u32; 6]>,
}

impl GroupElement {
    /// Builds an element from row bitmasks (bit `j` of row `i` is entry `(i, j)`).
    /// Returns `None` if the matrix is singular or an entry lies outside `k x k`.
    pub fn from_rows(rows: &[u32]) -> Option<Self> {
        let k = rows.len();
        if k > 31 || rows.iter().any(|&r| r >> k != 0) {
            return None;
        }
        let g = GroupElement { rows: rows.into() };
        g.is_invertible().then_some(g)
    }

    pub fn identity(k: usize) -> Self {
        GroupElement {
            rows: (0..k).map(|i| 1u32 << i).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    fn is_invertible(&self) -> bool {
        let mut rows = self.rows.clone();
        let k = rows.len();
        let mut r = 0;
        for c in 0..k {
            let Some(p) = (r..k).find(|&i| (rows[i] >> c) & 1 == 1) else {
                return false;
            };
            rows.swap(r, p);
            for i in 0..k {
                if i != r && (rows[i] >> c) & 1 == 1 {
                    rows[i] ^= rows[r];
                }
            }
            r += 1;
        }
        true
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.rank(), other.rank(), "rank mismatch in group product");
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                (0..self.rank())
                    .filter(|j| (row >> j) & 1 == 1)
                    .fold(0, |acc, j| acc ^ other.rows[j])
            })
            .collect();
        GroupElement { rows }
    }

    pub fn inverse(&self) -> GroupElement {
        let k = self.rank();
        let mut a = self.rows.clone();
        let mut inv: SmallVec<[u32; 6]> = (0..k).map(|i| 1u32 << i).collect();
        for c in 0..k {
            let p = (c..k).find(|&i| (a[i] >> c) & 1 == 1).expect("group elements are invertible");
            a.swap(c, p);
            inv.swap(c, p);
            for i in 0..k {
                if i != c && (a[i] >> c) & 1 == 1 {
                    a[i] ^= a[c];
                    inv[i] ^= inv[c];
                }
            }
        }
        GroupElement { rows: inv }
    }

    pub fn transpose(&self) -> GroupElement {
        let k = self.rank();
        let rows = (0..k)
            .map(|i| (0..k).filter(|&j| self.entry(j, i)).fold(0, |acc, j| acc | (1 << j)))
            .collect();
        GroupElement { rows }
    }

    /// `Some(perm)` when every row is a single variable, `perm[i]` being its index.
    fn as_permutation(&self) -> Option<SmallVec<[usize; 6]>> {
        self.rows
            .iter()
            .map(|&r| (r.count_ones() == 1).then(|| r.trailing_zeros() as usize))
            .collect()
    }

    pub fn substitute_monomial(&self, m: &Monomial) -> Result<Polynomial> {
        check_rank(self.rank(), m.rank())?;
        let mut out = Polynomial::zero(self.rank());
        for t in self.image_terms(m, None) {
            out.toggle(Monomial::from_exps(t));
        }
        Ok(out)
    }

    /// Terms of the image of `m`, each exponent capped at `cap` when given
    /// (terms exceeding it are dropped, i.e. the image in the truncated ring).
    pub(crate) fn image_terms(&self, m: &Monomial, cap: Option<u32>) -> Vec<Exponents> {
        if let Some(perm) = self.as_permutation() {
            let mut exps: Exponents = SmallVec::from_elem(0, self.rank());
            for (i, &a) in m.exponents().iter().enumerate() {
                exps[perm[i]] += a;
            }
            if cap.is_some_and(|c| exps.iter().any(|&e| e > c)) {
                return Vec::new();
            }
            return vec![exps];
        }
        let factors: Vec<(u32, u32)> = m
            .exponents()
            .iter()
            .enumerate()
            .map(|(i, &a)| (self.rows[i], a))
            .collect();
        expand_linear_powers(self.rank(), &factors, cap)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, _) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            for j in 0..self.rank() {
                f.write_str(if self.entry(i, j) { "1" } else { "0" })?;
            }
        }
        f.write_str("]")
    }
}

/// Expands `Π_i L_i^{e_i}` over F₂ where `L_i` is the linear form with
/// variable mask `factors[i].0` and `e_i = factors[i].1`.
///
/// Each power is split into Frobenius twists, `L^(2^b) = Σ x_j^(2^b)`, and the
/// twists are multiplied from the largest down. With a cap every exponent
/// must stay `<= cap`; since the final degree `D` is fixed, each exponent of
/// a surviving term is at least `D - (k-1) cap`, so partial terms that can no
/// longer reach that floor are discarded early.
pub(crate) fn expand_linear_powers(k: usize, factors: &[(u32, u32)], cap: Option<u32>) -> Vec<Exponents> {
    let mut twists: Vec<(u32, u64)> = factors
        .iter()
        .flat_map(|&(mask, e)| {
            (0..32).filter(move |b| (e >> b) & 1 == 1).map(move |b| (mask, 1u64 << b))
        })
        .collect();
    twists.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    if twists.iter().any(|&(mask, _)| mask == 0) {
        return Vec::new();
    }

    let total: u64 = twists.iter().map(|t| t.1).sum();
    let floor = cap.map_or(0, |c| total.saturating_sub((k as u64 - 1) * u64::from(c)));
    // reach[t][j]: the most variable j can still gain from twists t..
    let mut reach = vec![vec![0u64; k]; twists.len() + 1];
    for t in (0..twists.len()).rev() {
        let (mask, p) = twists[t];
        for j in 0..k {
            reach[t][j] = reach[t + 1][j] + if (mask >> j) & 1 == 1 { p } else { 0 };
        }
    }

    let mut terms: FnvSet<Exponents> = FnvSet::default();
    terms.insert(SmallVec::from_elem(0, k));
    for (t, &(mask, p)) in twists.iter().enumerate() {
        let mut next: FnvSet<Exponents> = FnvSet::default();
        let p = p as u32;
        for term in &terms {
            for j in (0..k).filter(|j| (mask >> j) & 1 == 1) {
                let mut e = term.clone();
                e[j] += p;
                if let Some(c) = cap {
                    if e[j] > c {
                        continue;
                    }
                    if (0..k).any(|i| u64::from(e[i]) + reach[t + 1][i] < floor) {
                        continue;
                    }
                }
                if !next.remove(&e) {
                    next.insert(e);
                }
            }
        }
        terms = next;
    }
    let mut out: Vec<Exponents> = terms.into_iter().collect();
    out.sort_unstable();
    out
}

pub fn substitute(g: &GroupElement, p: &Polynomial) -> Result<Polynomial> {
    check_rank(g.rank(), p.rank())?;
    let mut out = Polynomial::zero(p.rank());
    for m in p.terms() {
        for t in g.image_terms(m, None) {
            out.toggle(Monomial::from_exps(t));
        }
    }
    Ok(out)
}

/// `ρᵢ`: swaps `xᵢ` and `x_{i+1}` (1-based `i`).
pub fn transposition(k: usize, i: usize) -> Result<GroupElement> {
    if i == 0 || i >= k {
        return Err(Error::InvalidTransposition { k, index: i });
    }
    let mut g = GroupElement::identity(k);
    g.rows.swap(i - 1, i);
    Ok(g)
}

/// `ρ_k`: `x1 -> x1 + x2`, other variables fixed. Together with the
/// transpositions it generates `GL_k(F₂)`.
pub fn transvection(k: usize) -> Result<GroupElement> {
    if k < 2 {
        return Err(Error::UnsupportedRank {
            what: "transvection",
            k,
            min: 2,
            max: usize::MAX,
        });
    }
    let mut g = GroupElement::identity(k);
    g.rows[0] = 0b11;
    Ok(g)
}

/// The generators `ρ1, ..., ρ_{k-1}` of `Σ_k`.
pub fn symmetric_generators(k: usize) -> Vec<GroupElement> {
    (1..k).map(|i| transposition(k, i).expect("index in range")).collect()
}

/// `Π_{0<=i<k} (2^k - 2^i)`.
pub fn group_order(k: usize) -> u64 {
    (0..k).map(|i| (1u64 << k) - (1u64 << i)).product()
}

/// Every invertible `k x k` matrix, ordered by the integer whose `k`-bit
/// digits are the rows (row 0 least significant).
pub fn enumerate_group(k: usize) -> Result<Vec<GroupElement>> {
    if k == 0 || k > MAX_ENUMERATED_RANK {
        return Err(Error::UnsupportedRank {
            what: "group enumeration",
            k,
            min: 1,
            max: MAX_ENUMERATED_RANK,
        });
    }
    let mask = (1u32 << k) - 1;
    let elems = (0u32..1 << (k * k))
        .filter_map(|code| {
            let rows: SmallVec<[u32; 6]> = (0..k).map(|i| (code >> (k * i)) & mask).collect();
            GroupElement::from_rows(&rows)
        })
        .collect();
    Ok(elems)
}
