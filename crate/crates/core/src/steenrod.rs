//! Steenrod squares acting on F₂[x1, ..., xk] and the hit generators of a degree.

use smallvec::SmallVec;

use crate::monomial::{enumerate_monomials, monomial_count, Exponents, Monomial, Polynomial};

/// `C(d, i) mod 2` by Lucas: odd iff `i` and `d - i` share no binary digit.
pub fn binomial_mod2(d: u32, i: u32) -> bool {
    i <= d && (i & (d - i)) == 0
}

/// `Sq^i(m)` by the Cartan formula with `Sq^i(x^d) = C(d, i) x^(d+i)`.
pub fn sq_monomial(i: u32, m: &Monomial) -> Polynomial {
    let k = m.rank();
    let mut out = Polynomial::zero(k);
    if i > m.degree() {
        return out;
    }
    let exps = m.exponents();
    // suffix[j] = exponent total of variables j.. ; bounds how much square is still placeable
    let mut suffix: SmallVec<[u32; 8]> = SmallVec::from_elem(0, k + 1);
    for j in (0..k).rev() {
        suffix[j] = suffix[j + 1] + exps[j];
    }
    let mut cur: Exponents = exps.iter().copied().collect();
    cartan(exps, &suffix, 0, i, &mut cur, &mut out);
    out
}

fn cartan(
    exps: &[u32],
    suffix: &[u32],
    j: usize,
    left: u32,
    cur: &mut Exponents,
    out: &mut Polynomial,
) {
    if j == exps.len() {
        if left == 0 {
            // distinct splittings give distinct monomials, so no cancellation here
            out.toggle(Monomial::from_exps(cur.clone()));
        }
        return;
    }
    if left > suffix[j] {
        return;
    }
    let a = exps[j];
    // submasks of a are exactly the i_j with C(a, i_j) odd
    let mut sub = a;
    loop {
        if sub <= left && left - sub <= suffix[j + 1] {
            cur[j] = a + sub;
            cartan(exps, suffix, j + 1, left - sub, cur, out);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & a;
    }
    cur[j] = a;
}

/// Linear extension of [`sq_monomial`].
pub fn sq_polynomial(i: u32, p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero(p.rank());
    for m in p.terms() {
        for t in sq_monomial(i, m).terms() {
            out.toggle(t.clone());
        }
    }
    out
}

/// One hit generator: `Sq^(2^s)` applied to a monomial of degree `n - 2^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitTask {
    pub s: u32,
    pub source: Monomial,
}

impl HitTask {
    pub fn square(&self) -> u32 {
        1 << self.s
    }

    pub fn evaluate(&self) -> Polynomial {
        sq_monomial(self.square(), &self.source)
    }
}

/// Every `(s, g)` with `2^s <= n` and `g` of degree `n - 2^s`, in increasing `s`
/// and then the fixed monomial order.
pub fn hit_tasks(k: usize, n: u32) -> impl Iterator<Item = HitTask> {
    square_exponents(n).flat_map(move |s| {
        enumerate_monomials(k, n - (1 << s))
            .into_iter()
            .map(move |source| HitTask { s, source })
    })
}

/// `Σ_{s: 2^s <= n} C(n - 2^s + k - 1, k - 1)` without enumerating anything.
pub fn hit_task_count(k: usize, n: u32) -> u64 {
    square_exponents(n)
        .map(|s| monomial_count(k, n - (1 << s)))
        .sum()
}

pub fn evaluate_hit_task(task: &HitTask) -> Polynomial {
    task.evaluate()
}

fn square_exponents(n: u32) -> impl Iterator<Item = u32> {
    (0..32u32).take_while(move |&s| n >= 1 && (1u64 << s) <= u64::from(n))
}
