//! The Kameko homomorphism `(QP_k)_n -> (QP_k)_{(n-k)/2}`, sending `[m]` to
//! `[u]` when `m = x1...xk u^2` and to zero otherwise.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::reducer::CohitBasis;

/// Degree `(n - k) / 2` of the target, or an error unless `n >= k` and
/// `n - k` is even.
pub fn target_degree(k: usize, n: u32) -> Result<u32> {
    let k32 = u32::try_from(k).map_err(|_| Error::KamekoParity { k, n })?;
    if n < k32 || !(n - k32).is_multiple_of(2) {
        return Err(Error::KamekoParity { k, n });
    }
    Ok((n - k32) / 2)
}

/// The map written in the two cohit bases.
#[derive(Clone, Debug)]
pub struct KamekoMap {
    pub k: usize,
    pub n: u32,
    pub target_degree: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    /// Row `i` is the image of source basis element `i` over the target basis.
    pub matrix: BitMatrix,
    pub rank: usize,
}

impl KamekoMap {
    pub fn is_epimorphism(&self) -> bool {
        self.rank == self.target_dim
    }

    pub fn kernel_dim(&self) -> usize {
        self.source_dim - self.rank
    }
}

/// Builds the matrix of the Kameko map between two already-built bases.
///
/// ```
/// use cohit::kameko::kameko_map;
/// use cohit::reducer::build_cohit_basis;
///
/// let map = kameko_map(&build_cohit_basis(2, 2), &build_cohit_basis(2, 0)).unwrap();
/// assert_eq!((map.target_degree, map.target_dim, map.rank), (0, 1, 1));
/// ```
pub fn kameko_map(source: &CohitBasis, target: &CohitBasis) -> Result<KamekoMap> {
    let (k, n) = (source.k(), source.n());
    crate::monomial::check_rank(k, target.k())?;
    let degree = target_degree(k, n)?;
    if target.n() != degree {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: target.n(),
        });
    }
    let rows: Vec<BitVec> = source
        .basis()
        .iter()
        .map(|m| match m.kameko_down() {
            Some(u) => target.reduce_monomial(&u),
            None => Ok(BitVec::zeros(target.dim())),
        })
        .collect::<Result<_>>()?;
    let matrix = BitMatrix::from_bitvecs(target.dim(), &rows);
    let rank = matrix.rank();
    Ok(KamekoMap {
        k,
        n,
        target_degree: degree,
        source_dim: source.dim(),
        target_dim: target.dim(),
        matrix,
        rank,
    })
}
