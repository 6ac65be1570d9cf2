//! Coinvariants of the primitive homology via orbits of Boardman symbols.
//!
//! For `k = 2, 3` and the generic degrees, the homology degree `n` fixes
//! parameters `(s, t[, u])`. The symbol
//! `x1^(2^l - 2^u) x2^(2^l - 2^(t+u)) x3^(2^l - 2^(s+t+u))` (for `k = 3`; the
//! `k = 2` symbol drops the first factor and shifts) is moved around by all of
//! `GL_k(F₂)` inside `F₂[x1..xk] / (x_i^(2^l))`. The span of the orbit is `W`,
//! the span of all `w - g w` is `D`, and `dim W - dim D` is the coinvariant
//! dimension.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::group::{enumerate_group, expand_linear_powers, GroupElement};
use crate::monomial::{Monomial, Polynomial};

/// Default offset added to the parameter sum to get the truncation level.
pub const DEFAULT_LEVEL_OFFSET: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum OrbitParams {
    Rank2 { s: u32, t: u32 },
    Rank3 { s: u32, t: u32, u: u32 },
}

impl OrbitParams {
    pub fn k(&self) -> usize {
        match self {
            OrbitParams::Rank2 { .. } => 2,
            OrbitParams::Rank3 { .. } => 3,
        }
    }

    /// `s + t` or `s + t + u`: the largest power of two in the symbol exponents.
    pub fn top(&self) -> u32 {
        match *self {
            OrbitParams::Rank2 { s, t } => s + t,
            OrbitParams::Rank3 { s, t, u } => s + t + u,
        }
    }

    pub fn default_level(&self) -> u32 {
        self.top() + DEFAULT_LEVEL_OFFSET
    }

    /// The powers `a_i` in the symbol exponents `2^l - 2^(a_i)`.
    fn exponent_powers(&self) -> Vec<u32> {
        match *self {
            OrbitParams::Rank2 { s, t } => vec![t, s + t],
            OrbitParams::Rank3 { s, t, u } => vec![u, t + u, s + t + u],
        }
    }

    pub fn as_vec(&self) -> Vec<u32> {
        match *self {
            OrbitParams::Rank2 { s, t } => vec![s, t],
            OrbitParams::Rank3 { s, t, u } => vec![s, t, u],
        }
    }
}

impl fmt::Display for OrbitParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitParams::Rank2 { s, t } => write!(f, "({s}, {t})"),
            OrbitParams::Rank3 { s, t, u } => write!(f, "({s}, {t}, {u})"),
        }
    }
}

fn check_supported(k: usize) -> Result<()> {
    if k == 2 || k == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedRank {
            what: "the orbit method",
            k,
            min: 2,
            max: 3,
        })
    }
}

/// Orbit parameters for homology degree `n` by the closed-form rules: for
/// `k = 3`, `n + 3` is split into its binary digits and the shape of that
/// split picks the branch. An empty list means no branch applies.
///
/// This yields one orbit per degree. [`h_orbits`] lists all of them.
pub fn identify_params(k: usize, n: u32) -> Result<Vec<OrbitParams>> {
    check_supported(k)?;
    if k == 2 {
        // n + 2 = 2^t (1 + 2^s)
        let v = u64::from(n) + 2;
        let params = if v.is_power_of_two() {
            Some(OrbitParams::Rank2 { s: 0, t: v.trailing_zeros() - 1 })
        } else {
            let t = v.trailing_zeros();
            let rest = (v >> t) - 1;
            rest.is_power_of_two().then(|| OrbitParams::Rank2 { s: rest.trailing_zeros(), t })
        };
        return Ok(params.into_iter().collect());
    }
    let val = u64::from(n) + 3;
    let powers: Vec<u32> = (0..64).rev().filter(|b| (val >> b) & 1 == 1).collect();
    let params = match powers[..] {
        [a, b, c] => {
            let (u, t, s) = (c, b - c, a - b);
            if s == 0 && u > 0 {
                Some(OrbitParams::Rank3 { s: t + 2, t: 0, u: u - 1 })
            } else {
                Some(OrbitParams::Rank3 { s, t, u })
            }
        }
        // b = 0 would need u = -1
        [a, b] if b >= 1 => Some(OrbitParams::Rank3 { s: a - b + 1, t: 0, u: b - 1 }),
        [a] if a >= 2 => Some(OrbitParams::Rank3 { s: 0, t: 0, u: a - 1 }),
        _ => None,
    };
    Ok(params.into_iter().collect())
}

/// Every orbit type contributing to degree `n`: all `(s, t)` with
/// `n + 2 = 2^(s+t) + 2^t`, or all `(s, t, u)` with
/// `n + 3 = 2^(s+t+u) + 2^(t+u) + 2^u`. Sorted by decreasing top power, so
/// for `k = 3` the orbit from the two-power branch of [`identify_params`]
/// comes first.
///
/// ```
/// use cohit::boardman::{h_orbits, OrbitParams};
///
/// // 31 + 3 = 32 + 1 + 1 = 16 + 16 + 2
/// assert_eq!(
///     h_orbits(3, 31).unwrap(),
///     vec![OrbitParams::Rank3 { s: 5, t: 0, u: 0 }, OrbitParams::Rank3 { s: 0, t: 3, u: 1 }]
/// );
/// ```
pub fn h_orbits(k: usize, n: u32) -> Result<Vec<OrbitParams>> {
    check_supported(k)?;
    let val = u64::from(n) + k as u64;
    let mut out = Vec::new();
    // a >= b >= c are the powers of two in the split
    for a in (0..63u32).rev() {
        for b in (0..=a).rev() {
            if k == 2 {
                if (1u64 << a) + (1u64 << b) == val {
                    out.push(OrbitParams::Rank2 { s: a - b, t: b });
                }
                continue;
            }
            for c in (0..=b).rev() {
                if (1u64 << a) + (1u64 << b) + (1u64 << c) == val {
                    out.push(OrbitParams::Rank3 { s: a - b, t: b - c, u: c });
                }
            }
        }
    }
    Ok(out)
}

/// A polynomial in `F₂[x1..xk] / (x1^(2^l), ..., xk^(2^l))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedPolynomial {
    level: u32,
    poly: Polynomial,
}

impl TruncatedPolynomial {
    /// Drops every term with an exponent `>= 2^level`.
    pub fn new(level: u32, poly: &Polynomial) -> Self {
        let cap = cap_for(level);
        let terms = poly.terms().filter(|m| m.exponents().iter().all(|&e| e <= cap)).cloned();
        TruncatedPolynomial {
            level,
            poly: Polynomial::from_terms(poly.rank(), terms).expect("terms share the rank"),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn rank(&self) -> usize {
        self.poly.rank()
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Termwise product followed by truncation.
    pub fn mul(&self, other: &TruncatedPolynomial) -> Result<TruncatedPolynomial> {
        assert_eq!(self.level, other.level, "truncation levels differ");
        Ok(TruncatedPolynomial::new(self.level, &self.poly.multiply(&other.poly)?))
    }

    pub fn add(&self, other: &TruncatedPolynomial) -> Result<TruncatedPolynomial> {
        assert_eq!(self.level, other.level, "truncation levels differ");
        Ok(TruncatedPolynomial {
            level: self.level,
            poly: self.poly.add(&other.poly)?,
        })
    }

    /// `g · self` by substitution, computed directly in the truncated ring.
    pub fn substitute(&self, g: &GroupElement) -> Result<TruncatedPolynomial> {
        let mut memo = HashMap::new();
        self.substitute_memo(g, &mut memo)
    }

    fn substitute_memo(
        &self,
        g: &GroupElement,
        memo: &mut HashMap<Monomial, Vec<Monomial>>,
    ) -> Result<TruncatedPolynomial> {
        crate::monomial::check_rank(g.rank(), self.rank())?;
        let cap = cap_for(self.level);
        let mut out = Polynomial::zero(self.rank());
        for m in self.poly.terms() {
            let image = memo.entry(m.clone()).or_insert_with(|| {
                g.image_terms(m, Some(cap)).into_iter().map(Monomial::from_exps).collect()
            });
            for t in image.iter() {
                out.toggle(t.clone());
            }
        }
        Ok(TruncatedPolynomial {
            level: self.level,
            poly: out,
        })
    }
}

impl fmt::Debug for TruncatedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Display for TruncatedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

fn cap_for(level: u32) -> u32 {
    assert!(level < 32, "truncation level {level} too large");
    (1u32 << level) - 1
}

/// The symbol of `params` transported by `g`: the product of the forms
/// `((g⁻¹)ᵀ x)_i` raised to `2^l - 2^(a_i)`, expanded in the truncated ring.
pub fn build_symbol(params: &OrbitParams, g: &GroupElement, level: u32) -> Result<TruncatedPolynomial> {
    let k = params.k();
    crate::monomial::check_rank(k, g.rank())?;
    if level <= params.top() {
        return Err(Error::LevelTooSmall {
            level,
            min: params.top(),
        });
    }
    let forms = g.inverse().transpose();
    let factors: Vec<(u32, u32)> = params
        .exponent_powers()
        .iter()
        .enumerate()
        .map(|(i, &a)| (forms.rows()[i], (1u32 << level) - (1u32 << a)))
        .collect();
    let terms = expand_linear_powers(k, &factors, Some(cap_for(level)));
    let poly = Polynomial::from_terms(k, terms.into_iter().map(Monomial::from_exps))?;
    Ok(TruncatedPolynomial { level, poly })
}

/// Coordinate rows of `polys` over their joint support in monomial order.
fn coordinate_matrix<'a>(polys: impl IntoIterator<Item = &'a Polynomial> + Clone) -> (Vec<Monomial>, BitMatrix) {
    let support: BTreeSet<&Monomial> = polys.clone().into_iter().flat_map(|p| p.terms()).collect();
    let support: Vec<Monomial> = support.into_iter().cloned().collect();
    let column: HashMap<&Monomial, usize> = support.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows: Vec<Vec<usize>> = polys
        .into_iter()
        .map(|p| p.terms().map(|m| column[m]).collect())
        .collect();
    let matrix = BitMatrix::from_rows(support.len(), rows).expect("support covers every term");
    (support, matrix)
}

/// Reduced basis of the span of `polys`.
fn span_basis<'a>(polys: impl IntoIterator<Item = &'a Polynomial> + Clone) -> Vec<Polynomial> {
    let Some(first) = polys.clone().into_iter().next() else {
        return Vec::new();
    };
    let k = first.rank();
    let (support, matrix) = coordinate_matrix(polys);
    matrix
        .rref()
        .row_space_basis()
        .iter()
        .map(|v| Polynomial::from_terms(k, v.ones().map(|i| support[i].clone())).expect("rank is fixed"))
        .collect()
}

/// Rank of the orbit of the symbol and a basis of its span.
pub fn dim_w(params: &OrbitParams, level: u32, group: &[GroupElement]) -> Result<(usize, Vec<TruncatedPolynomial>)> {
    let orbit: Vec<TruncatedPolynomial> = group
        .par_iter()
        .map(|g| build_symbol(params, g, level))
        .collect::<Result<_>>()?;
    let basis: Vec<TruncatedPolynomial> = span_basis(orbit.iter().map(|p| &p.poly))
        .into_iter()
        .map(|poly| TruncatedPolynomial { level, poly })
        .collect();
    Ok((basis.len(), basis))
}

/// Result of the difference stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceSpace {
    pub dim: usize,
    /// Pairs `(w, g)` with `g w != w`.
    pub pairs: usize,
    /// Distinct polynomials `w - g w`.
    pub distinct: usize,
    /// A basis of `D`.
    pub basis: Vec<Polynomial>,
}

/// Rank of the span of `w - g w` over `w` in the basis and `g` in the group.
pub fn dim_d(w_basis: &[TruncatedPolynomial], group: &[GroupElement]) -> Result<DifferenceSpace> {
    let per_g: Vec<Vec<Polynomial>> = group
        .par_iter()
        .map(|g| -> Result<Vec<Polynomial>> {
            let mut memo = HashMap::new();
            let mut diffs = Vec::new();
            for w in w_basis {
                let gw = w.substitute_memo(g, &mut memo)?;
                if gw != *w {
                    diffs.push(w.poly.add(&gw.poly)?);
                }
            }
            Ok(diffs)
        })
        .collect::<Result<_>>()?;
    let pairs = per_g.iter().map(Vec::len).sum();
    let mut seen = HashSet::new();
    let distinct: Vec<Polynomial> = per_g.into_iter().flatten().filter(|d| seen.insert(d.clone())).collect();
    let basis = span_basis(distinct.iter());
    Ok(DifferenceSpace {
        dim: basis.len(),
        pairs,
        distinct: distinct.len(),
        basis,
    })
}

/// One orbit's contribution.
#[derive(Clone, Debug)]
pub struct OrbitAnalysis {
    pub params: OrbitParams,
    pub level: u32,
    pub dim_w: usize,
    pub dim_d: usize,
    pub coinvariant_dim: usize,
    pub w_basis: Vec<TruncatedPolynomial>,
    pub differences: DifferenceSpace,
}

/// How the truncation level is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// `l` = the largest parameter sum over the orbits + offset.
    Offset(u32),
    /// A fixed `l`.
    Level(u32),
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Offset(DEFAULT_LEVEL_OFFSET)
    }
}

impl Truncation {
    pub fn level_for<'a>(&self, orbits: impl IntoIterator<Item = &'a OrbitParams>) -> u32 {
        match *self {
            Truncation::Offset(off) => orbits.into_iter().map(OrbitParams::top).max().unwrap_or(0) + off,
            Truncation::Level(l) => l,
        }
    }
}

pub fn analyze_orbit(params: OrbitParams, level: u32, group: &[GroupElement]) -> Result<OrbitAnalysis> {
    let (dim_w, w_basis) = dim_w(&params, level, group)?;
    let differences = dim_d(&w_basis, group)?;
    Ok(OrbitAnalysis {
        params,
        level,
        dim_w,
        dim_d: differences.dim,
        coinvariant_dim: dim_w - differences.dim,
        w_basis,
        differences,
    })
}

/// Coinvariants in one degree. `W` is the span of all orbits together;
/// orbits of different types can overlap, so `total` is computed on that
/// joint span and need not equal the sum of the per-orbit values.
#[derive(Clone, Debug)]
pub struct CoinvariantResult {
    pub k: usize,
    pub n: u32,
    /// The closed-form parameters from [`identify_params`].
    pub params: Vec<OrbitParams>,
    /// Every orbit type in this degree, analyzed on its own.
    pub orbits: Vec<OrbitAnalysis>,
    pub level: u32,
    pub dim_w: usize,
    pub dim_d: usize,
    pub total: usize,
}

impl CoinvariantResult {
    /// No orbit exists in this degree.
    pub fn is_invalid_degree(&self) -> bool {
        self.orbits.is_empty()
    }

    /// The orbit named by [`identify_params`], if any.
    pub fn principal(&self) -> Option<&OrbitAnalysis> {
        let p = self.params.first()?;
        self.orbits.iter().find(|o| o.params == *p)
    }
}

/// `dim W - dim D` in homology degree `n`.
///
/// ```
/// use cohit::boardman::{coinvariant_dim, Truncation};
///
/// let r = coinvariant_dim(2, 3, Truncation::default()).unwrap();
/// assert_eq!((r.dim_w, r.dim_d, r.total), (3, 2, 1));
/// ```
pub fn coinvariant_dim(k: usize, n: u32, truncation: Truncation) -> Result<CoinvariantResult> {
    let params = identify_params(k, n)?;
    let types = h_orbits(k, n)?;
    let level = truncation.level_for(&types);
    let group = if types.is_empty() { Vec::new() } else { enumerate_group(k)? };
    let orbits: Vec<OrbitAnalysis> = types
        .iter()
        .map(|p| analyze_orbit(*p, level, &group))
        .collect::<Result<_>>()?;
    let dim_w = span_basis(orbits.iter().flat_map(|o| o.w_basis.iter().map(|w| &w.poly))).len();
    let dim_d = span_basis(orbits.iter().flat_map(|o| o.differences.basis.iter())).len();
    Ok(CoinvariantResult {
        k,
        n,
        params,
        orbits,
        level,
        dim_w,
        dim_d,
        total: dim_w - dim_d,
    })
}
