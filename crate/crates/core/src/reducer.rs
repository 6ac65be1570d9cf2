//! The admissible basis `B_n` of `(QP_k)_n` and the reducer `φ` onto it.
//!
//! The hit matrix has one row per hit generator `Sq^(2^s)(g)` and one column
//! per degree-`n` monomial. After Gauss-Jordan elimination the non-pivot
//! columns form `B_n`; each pivot monomial is congruent modulo hits to the
//! non-pivot part of its echelon row.

use std::collections::HashMap;

use log::debug;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::monomial::{admissible_cmp, check_rank, enumerate_monomials, Monomial, Polynomial};
use crate::steenrod::{hit_tasks, HitTask};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohitBasis {
    k: usize,
    n: u32,
    monomial_order: Vec<Monomial>,
    basis: Vec<Monomial>,
    /// Pivot monomials with their coordinates over `basis`, in monomial order.
    reducer: Vec<(Monomial, BitVec)>,
    index: HashMap<Monomial, Slot>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Basis(usize),
    Pivot(usize),
}

/// Statistics from a fresh build, for reporting.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub hit_tasks: usize,
    pub hit_rank: usize,
}

impl CohitBasis {
    pub(crate) fn from_parts(
        k: usize,
        n: u32,
        monomial_order: Vec<Monomial>,
        basis: Vec<Monomial>,
        reducer: Vec<(Monomial, BitVec)>,
    ) -> Self {
        let mut index = HashMap::with_capacity(monomial_order.len());
        for (i, m) in basis.iter().enumerate() {
            index.insert(m.clone(), Slot::Basis(i));
        }
        for (i, (m, _)) in reducer.iter().enumerate() {
            index.insert(m.clone(), Slot::Pivot(i));
        }
        CohitBasis {
            k,
            n,
            monomial_order,
            basis,
            reducer,
            index,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `dim (QP_k)_n`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn monomial_order(&self) -> &[Monomial] {
        &self.monomial_order
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn reducer_entries(&self) -> &[(Monomial, BitVec)] {
        &self.reducer
    }

    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        match self.index.get(m) {
            Some(Slot::Basis(i)) => Some(*i),
            _ => None,
        }
    }

    /// Coordinates of a single degree-`n` monomial over `B_n`.
    pub fn reduce_monomial(&self, m: &Monomial) -> Result<BitVec> {
        let mut out = BitVec::zeros(self.dim());
        self.accumulate(m, &mut out)?;
        Ok(out)
    }

    fn accumulate(&self, m: &Monomial, acc: &mut BitVec) -> Result<()> {
        check_rank(self.k, m.rank())?;
        match self.index.get(m) {
            Some(Slot::Basis(i)) => acc.flip(*i),
            Some(Slot::Pivot(i)) => acc.xor_assign(&self.reducer[*i].1),
            None => {
                return Err(Error::DegreeMismatch {
                    expected: self.n,
                    found: m.degree(),
                })
            }
        }
        Ok(())
    }

    /// `φ(p)`: coordinates `c` with `p + Σ cᵢ bᵢ` hit.
    pub fn reduce(&self, p: &Polynomial) -> Result<BitVec> {
        check_rank(self.k, p.rank())?;
        let mut out = BitVec::zeros(self.dim());
        for m in p.terms() {
            self.accumulate(m, &mut out)?;
        }
        Ok(out)
    }

    pub fn is_hit(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }

    /// `Σ cᵢ bᵢ` for a coordinate vector over `B_n`.
    pub fn polynomial_of(&self, coords: &BitVec) -> Polynomial {
        assert_eq!(coords.len(), self.dim(), "coordinate length mismatch");
        let mut p = Polynomial::zero(self.k);
        for i in coords.ones() {
            p.toggle(self.basis[i].clone());
        }
        p
    }
}

/// Builds the hit matrix for `(k, n)`: rows are evaluated in parallel, one
/// per hit task, columns follow `monomial_order`.
pub fn hit_matrix(k: usize, n: u32, monomial_order: &[Monomial]) -> BitMatrix {
    let column: HashMap<&Monomial, usize> = monomial_order.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let tasks: Vec<HitTask> = if n == 0 { Vec::new() } else { hit_tasks(k, n).collect() };
    let rows: Vec<Vec<usize>> = tasks
        .par_iter()
        .map(|t| t.evaluate().terms().map(|m| column[m]).collect())
        .collect();
    BitMatrix::from_rows(monomial_order.len(), rows).expect("hit rows index known columns")
}

pub fn build_cohit_basis(k: usize, n: u32) -> CohitBasis {
    build_cohit_basis_with_stats(k, n).0
}

/// Columns are eliminated in decreasing [`admissible_cmp`] order, so each
/// pivot is the largest monomial of a hit relation and the non-pivot
/// monomials are exactly the admissible ones. `B_n` and the reducer are then
/// listed in the monomial order.
pub fn build_cohit_basis_with_stats(k: usize, n: u32) -> (CohitBasis, BuildStats) {
    let order = enumerate_monomials(k, n);
    debug!("k={k} n={n}: {} monomials", order.len());
    let mut columns = order.clone();
    columns.sort_by(|a, b| admissible_cmp(b, a));
    let matrix = hit_matrix(k, n, &columns);
    let tasks = matrix.rows();
    debug!("k={k} n={n}: hit matrix {}x{}", matrix.rows(), matrix.cols());
    let ech = matrix.into_echelon();
    let mut basis: Vec<Monomial> = ech.free_cols().iter().map(|&c| columns[c].clone()).collect();
    basis.sort();
    let basis_pos: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let reduced = ech.reduced_rows();
    let mut reducer: Vec<(Monomial, BitVec)> = ech
        .pivot_cols()
        .par_iter()
        .enumerate()
        .map(|(row, &pc)| {
            let coords = BitVec::from_indices(
                basis.len(),
                reduced.row(row).ones().filter(|&c| c != pc).map(|c| basis_pos[&columns[c]]),
            )
            .expect("non-pivot entries map into the basis");
            (columns[pc].clone(), coords)
        })
        .collect();
    reducer.sort_by(|a, b| a.0.cmp(&b.0));
    let stats = BuildStats {
        hit_tasks: tasks,
        hit_rank: ech.rank(),
    };
    (CohitBasis::from_parts(k, n, order, basis, reducer), stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steenrod::sq_monomial;
    use proptest::prelude::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.iter().copied())
    }

    #[test]
    fn peterson_k2_n3() {
        let cb = build_cohit_basis(2, 3);
        assert_eq!(cb.dim(), 3);
        assert_eq!(cb.basis(), &[mono(&[3, 0]), mono(&[1, 2]), mono(&[0, 3])]);
        assert_eq!(cb.reducer_entries().len(), 1);
        assert!(!cb.is_hit(&Polynomial::from_monomial(mono(&[3, 0]))).unwrap());
        assert!(cb.is_hit(&Polynomial::zero(2)).unwrap());
    }

    #[test]
    fn degree_two_reductions() {
        let cb = build_cohit_basis(2, 2);
        assert_eq!(cb.basis(), &[mono(&[1, 1])]);
        let sq = Polynomial::from_terms(2, [mono(&[2, 0]), mono(&[0, 2])]).unwrap();
        assert!(cb.reduce(&sq).unwrap().is_zero());
        assert_eq!(cb.reduce_monomial(&mono(&[1, 1])).unwrap(), BitVec::unit(1, 0));
    }

    #[test]
    fn pivots_rewrite_to_smaller_admissibles() {
        for (k, n) in [(3, 7), (3, 10), (4, 9)] {
            let cb = build_cohit_basis(k, n);
            for (m, coords) in cb.reducer_entries() {
                for i in coords.ones() {
                    assert_eq!(admissible_cmp(&cb.basis()[i], m), std::cmp::Ordering::Less, "{m}");
                }
            }
        }
    }

    #[test]
    fn degree_zero() {
        let cb = build_cohit_basis(3, 0);
        assert_eq!(cb.basis(), &[Monomial::one(3)]);
        assert!(cb.reducer_entries().is_empty());
    }

    #[test]
    fn hit_rows_reduce_to_zero() {
        let cb = build_cohit_basis(3, 7);
        for t in hit_tasks(3, 7) {
            assert!(cb.is_hit(&t.evaluate()).unwrap(), "{t:?}");
        }
        for (i, b) in cb.basis().iter().enumerate() {
            assert_eq!(cb.reduce_monomial(b).unwrap(), BitVec::unit(cb.dim(), i));
        }
        let sq2 = sq_monomial(2, &mono(&[1, 1]));
        assert!(build_cohit_basis(2, 4).is_hit(&sq2).unwrap());
    }

    #[test]
    fn reduce_rejects_bad_input() {
        let cb = build_cohit_basis(2, 3);
        assert!(matches!(
            cb.reduce(&Polynomial::from_monomial(mono(&[1, 1]))),
            Err(Error::DegreeMismatch { expected: 3, found: 2 })
        ));
        assert!(matches!(
            cb.reduce(&Polynomial::from_monomial(mono(&[1, 1, 1]))),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn known_dimensions() {
        for (k, n, dim) in [(2, 3, 3), (2, 7, 3), (2, 15, 3), (2, 10, 2), (2, 4, 2), (3, 3, 7), (3, 7, 10), (3, 15, 13), (3, 31, 14)] {
            assert_eq!(build_cohit_basis(k, n).dim(), dim, "k={k} n={n}");
        }
    }

    #[test]
    fn reducer_rows_are_hit() {
        // m + Σ cᵢ bᵢ must already lie in the hit row space
        for (k, n) in [(3, 5), (3, 7), (4, 6)] {
            let cb = build_cohit_basis(k, n);
            let order = cb.monomial_order().to_vec();
            let ech = hit_matrix(k, n, &order).into_echelon();
            let column: HashMap<&Monomial, usize> = order.iter().enumerate().map(|(i, m)| (m, i)).collect();
            for (m, coords) in cb.reducer_entries() {
                let mut p = cb.polynomial_of(coords);
                p.toggle(m.clone());
                let v = BitVec::from_indices(order.len(), p.terms().map(|t| column[t])).unwrap();
                assert!(ech.contains(&v));
            }
            assert_eq!(order.len(), cb.dim() + cb.reducer_entries().len());
        }
    }

    fn arb_poly(k: usize, n: u32) -> impl Strategy<Value = Polynomial> {
        let ms = enumerate_monomials(k, n);
        prop::collection::vec(prop::sample::select(ms), 0..10)
            .prop_map(move |ts| Polynomial::from_terms(k, ts).unwrap())
    }

    proptest! {
        #[test]
        fn reduce_is_linear(p in arb_poly(3, 9), q in arb_poly(3, 9)) {
            let cb = build_cohit_basis(3, 9);
            let mut lhs = cb.reduce(&p).unwrap();
            lhs.xor_assign(&cb.reduce(&q).unwrap());
            prop_assert_eq!(lhs, cb.reduce(&p.add(&q).unwrap()).unwrap());
        }
    }
}
