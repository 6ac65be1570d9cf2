use cohit::gf2::BitMatrix;
use cohit::group::{enumerate_group, substitute};
use cohit::invariants::analyze;
use cohit::monomial::{enumerate_monomials, Monomial, Polynomial};
use cohit::reducer::{build_cohit_basis, hit_matrix};
use cohit::steenrod::sq_monomial;
use std::collections::HashMap;

/// Image of every `Sq^i`, `i >= 1`, on every monomial of degree `n - i`.
fn all_squares_matrix(k: usize, n: u32) -> BitMatrix {
    let order = enumerate_monomials(k, n);
    let column: HashMap<&Monomial, usize> = order.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for i in 1..=n {
        for m in enumerate_monomials(k, n - i) {
            let image = sq_monomial(i, &m);
            rows.push(image.terms().map(|t| column[t]).collect::<Vec<_>>());
        }
    }
    BitMatrix::from_rows(order.len(), rows).unwrap()
}

#[test]
fn power_of_two_squares_span_all_hits() {
    for k in 1..=3 {
        for n in 0..=10 {
            let order = enumerate_monomials(k, n);
            let restricted = hit_matrix(k, n, &order).rref();
            let full = all_squares_matrix(k, n);
            assert_eq!(restricted.rank(), full.rank(), "k={k} n={n}");
            for r in 0..full.rows() {
                assert!(restricted.contains(&full.row(r)), "k={k} n={n} row {r}");
            }
        }
    }
}

#[test]
fn gl_invariants_hold_for_the_whole_group() {
    let group = enumerate_group(3).unwrap();
    for n in 2..=12 {
        let cb = build_cohit_basis(3, n);
        let a = analyze(&cb, false).unwrap();
        assert!(a.gl_dim() <= a.sigma_dim());
        for (p, _) in a.gl_invariants() {
            for g in &group {
                let mut d = substitute(g, p).unwrap();
                d.add_assign(p).unwrap();
                assert!(cb.is_hit(&d).unwrap(), "n={n} {p} under {:?}", g.rows());
            }
        }
    }
}

/// Brute force over all of `GL_2`: the coboundary kernel on the whole space.
#[test]
fn gl2_invariants_match_full_group_kernel() {
    let group = enumerate_group(2).unwrap();
    for n in 1..=20 {
        let cb = build_cohit_basis(2, n);
        let mut columns = Vec::new();
        for b in cb.basis() {
            let p = Polynomial::from_monomial(b.clone());
            let mut col = Vec::new();
            for (gi, g) in group.iter().enumerate() {
                let mut d = substitute(g, &p).unwrap();
                d.add_assign(&p).unwrap();
                col.extend(cb.reduce(&d).unwrap().ones().map(|r| gi * cb.dim() + r));
            }
            columns.push(col);
        }
        let rows = group.len() * cb.dim();
        let columns: Vec<_> = columns
            .into_iter()
            .map(|c| cohit::gf2::BitVec::from_indices(rows, c).unwrap())
            .collect();
        let kernel = cohit::gf2::kernel_basis(&BitMatrix::from_columns(rows, &columns));
        assert_eq!(analyze(&cb, false).unwrap().gl_dim(), kernel.len(), "n={n}");
    }
}
