//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;
use std::hash::Hash;

use proptest::test_runner::{Config, RngSeed};
use sl12gen::{Field, FieldElement, Matrix, Permutation};

pub const SEED: u64 = 0x2323_0512;

/// At least 200 cases, fixed seed, no persistence files.
pub fn config(cases: u32) -> Config {
    Config { cases: cases.max(200), rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

/// Every element of the group generated by `gens`, by breadth-first
/// multiplication (the group is finite, so the monoid closure is the group).
pub fn closure<T: Clone + Eq + Hash>(gens: &[T], identity: T, mul: impl Fn(&T, &T) -> T) -> HashSet<T> {
    let mut seen = HashSet::from([identity.clone()]);
    let mut frontier = vec![identity];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = mul(&g, s);
            if seen.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    seen
}

pub fn perm_closure(gens: &[Permutation]) -> HashSet<Permutation> {
    let degree = gens.first().map(|g| g.degree()).unwrap_or(0);
    closure(gens, Permutation::identity(degree), |a, b| a.compose(b))
}

pub fn matrix_closure(field: &Field, n: usize, gens: &[Matrix]) -> HashSet<Matrix> {
    closure(gens, Matrix::identity(field, n), |a, b| a.try_mul(b).unwrap())
}

/// All `n x n` matrices over a small field with determinant one, by
/// enumerating every entry tuple and expanding the determinant by permutations.
pub fn brute_sl(field: &Field, n: usize) -> Vec<Matrix> {
    let q = field.q();
    let total = q.pow((n * n) as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut entries = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            entries.push(code % q);
            code /= q;
        }
        let m = Matrix::from_codes(field, n, entries).unwrap();
        if leibniz_det(&m).is_one() {
            out.push(m);
        }
    }
    out
}

/// Determinant as the signed sum over all permutations.
pub fn leibniz_det(m: &Matrix) -> FieldElement {
    let n = m.n();
    let field = m.field();
    let mut total = field.zero();
    for images in permutations(n) {
        let p = Permutation::from_images(images.clone()).unwrap();
        let mut term = if p.is_even() { field.one() } else { field.from_int(-1) };
        for (i, &j) in images.iter().enumerate() {
            term = term * m.entry(i + 1, j + 1);
        }
        total = total + term;
    }
    total
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

/// Size of the subfield `F_p(t)`: the set of `F_p`-combinations of powers of `t`.
pub fn generated_subfield_size(field: &Field, t: &FieldElement) -> usize {
    let powers: Vec<FieldElement> = (0..field.a()).map(|k| t.pow(k as u128)).collect();
    let mut span = HashSet::from([field.zero().code()]);
    for pw in &powers {
        let current: Vec<u64> = span.iter().copied().collect();
        for c in 0..field.p() {
            let term = field.from_int(c as i64) * pw.clone();
            for &s in &current {
                span.insert((field.element(s) + term.clone()).code());
            }
        }
    }
    span.len()
}
