//! Monomials, F₂-polynomials, weight vectors and the Kameko maps.
//!
//! Monomials are ordered by degree first; within one degree the order is
//! graded reverse lexicographic with `x1 > x2 > ... > xk`, listed from the
//! grevlex-largest monomial down. This is the column order of every matrix
//! built over a degree, so it is frozen: changing it changes cache files and
//! the representatives chosen for cohit bases.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) type Exponents = SmallVec<[u32; 6]>;

/// A monomial `x1^a1 * ... * xk^ak`; the rank `k` is the exponent count.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Exponents,
}

impl Monomial {
    pub fn new(exponents: impl IntoIterator<Item = u32>) -> Self {
        Monomial {
            exps: exponents.into_iter().collect(),
        }
    }

    /// The constant monomial `1` in `k` variables.
    pub fn one(k: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, k),
        }
    }

    /// The single variable `x_{i+1}` (zero-based index `i`).
    pub fn variable(k: usize, i: usize) -> Self {
        let mut m = Monomial::one(k);
        m.exps[i] = 1;
        m
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn multiply(&self, other: &Monomial) -> Result<Monomial> {
        check_rank(self.rank(), other.rank())?;
        Ok(Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        })
    }

    /// `ωⱼ` counts the exponents whose bit `j-1` is set. Trailing zeros are trimmed.
    pub fn weight(&self) -> WeightVector {
        let top = self.exps.iter().copied().max().unwrap_or(0);
        let bits = (u32::BITS - top.leading_zeros()) as usize;
        let entries = (0..bits)
            .map(|j| self.exps.iter().filter(|&&a| (a >> j) & 1 == 1).count() as u32)
            .collect();
        WeightVector::new(entries)
    }

    /// Kameko's map on monomials: halves `(a-1)` when every exponent is odd.
    pub fn kameko_down(&self) -> Option<Monomial> {
        if self.exps.iter().all(|a| a & 1 == 1) {
            Some(Monomial {
                exps: self.exps.iter().map(|a| (a - 1) / 2).collect(),
            })
        } else {
            None
        }
    }

    /// `ψ(u) = x1...xk * u^2`, a section of [`Monomial::kameko_down`].
    pub fn psi_lift(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|a| 2 * a + 1).collect(),
        }
    }

    pub(crate) fn from_exps(exps: Exponents) -> Self {
        Monomial { exps }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| {
                // smaller exponent on the last differing variable is grevlex-larger, so it comes first
                for (a, b) in self.exps.iter().zip(&other.exps).rev() {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

/// Kameko's order: by weight vector (lexicographic from `ω_1`), then by
/// exponent vector (lexicographic from `x1`). A monomial is admissible when
/// it is not congruent modulo hits to a sum of monomials smaller in this
/// order. Only meaningful within one degree and rank.
pub fn admissible_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    a.weight().cmp(&b.weight()).then_with(|| a.exps.cmp(&b.exps))
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.exps.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if a == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, a)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// All monomials of degree `n` in `k` variables, in the fixed monomial order.
pub fn enumerate_monomials(k: usize, n: u32) -> Vec<Monomial> {
    fn fill(out: &mut Vec<Monomial>, exps: &mut Exponents, idx: usize, left: u32) {
        if idx + 1 == exps.len() {
            exps[idx] = left;
            out.push(Monomial::from_exps(exps.clone()));
            return;
        }
        for a in (0..=left).rev() {
            exps[idx] = a;
            fill(out, exps, idx + 1, left - a);
        }
    }
    if k == 0 {
        return if n == 0 { vec![Monomial::one(0)] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut exps: Exponents = SmallVec::from_elem(0, k);
    fill(&mut out, &mut exps, 0, n);
    out.sort_unstable();
    out
}

/// Number of monomials of degree `n` in `k` variables, `C(n+k-1, k-1)`.
pub fn monomial_count(k: usize, n: u32) -> u64 {
    if k == 0 {
        return u64::from(n == 0);
    }
    let top = u64::from(n) + k as u64 - 1;
    let r = (k - 1) as u64;
    (0..r).fold(1u64, |acc, i| acc * (top - i) / (i + 1))
}

/// Weight vector `(ω1, ..., ωr)` with trailing zeros trimmed.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<u32>);

impl WeightVector {
    pub fn new(mut entries: Vec<u32>) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        WeightVector(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `Σⱼ 2^(j-1) ωⱼ`, the degree of any monomial with this weight.
    pub fn degree(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &w)| u64::from(w) << j)
            .sum()
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str(")")
    }
}

/// A polynomial over F₂: a set of monomials of one rank.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    rank: usize,
    terms: BTreeSet<Monomial>,
}

impl Polynomial {
    pub fn zero(k: usize) -> Self {
        Polynomial {
            rank: k,
            terms: BTreeSet::new(),
        }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let rank = m.rank();
        Polynomial {
            rank,
            terms: BTreeSet::from([m]),
        }
    }

    /// Builds a polynomial from a list of terms; repeated terms cancel in pairs.
    pub fn from_terms(k: usize, terms: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut p = Polynomial::zero(k);
        for m in terms {
            check_rank(k, m.rank())?;
            p.toggle(m);
        }
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// Terms in the fixed monomial order.
    pub fn terms(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.iter()
    }

    /// Adds a single monomial (over F₂ this toggles its presence).
    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Polynomial) -> Result<()> {
        check_rank(self.rank, other.rank)?;
        for m in &other.terms {
            self.toggle(m.clone());
        }
        Ok(())
    }

    /// The common degree of all terms; `None` for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else {
            return Ok(None);
        };
        let d = first.degree();
        if it.any(|m| m.degree() != d) {
            return Err(Error::NotHomogeneous);
        }
        Ok(Some(d))
    }

    pub fn multiply(&self, other: &Polynomial) -> Result<Polynomial> {
        check_rank(self.rank, other.rank)?;
        let mut out = Polynomial::zero(self.rank);
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.multiply(b)?);
            }
        }
        Ok(out)
    }

    /// `ψ` extended linearly; distinct monomials stay distinct, so nothing cancels.
    pub fn psi_lift(&self) -> Polynomial {
        Polynomial {
            rank: self.rank,
            terms: self.terms.iter().map(Monomial::psi_lift).collect(),
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

pub(crate) fn check_rank(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::RankMismatch { expected, found })
    }
}
