//! Engine results against exhaustive enumeration.

mod common;

use sl12gen::action::{
    alt_order, alternating_generators, normal_closure, orbit, sl_order, BigCount, ChainOptions, PointSpace,
    StabilizerChain, VectorSpace, DEFAULT_GUARD,
};
use sl12gen::certify::alt5_matrices;
use sl12gen::gens::{build_y, lemma5_involution};
use sl12gen::{make_field, Matrix, Permutation};

use common::{brute_sl, matrix_closure, perm_closure};

fn sl2_generators(p: u64) -> (sl12gen::Field, Vec<Matrix>) {
    let f = make_field(p, 1, None).unwrap();
    let gens = vec![
        Matrix::from_int_rows(&f, &[vec![1, 1], vec![0, 1]]).unwrap(),
        Matrix::from_int_rows(&f, &[vec![1, 0], vec![1, 1]]).unwrap(),
    ];
    (f, gens)
}

#[test]
fn sl_order_formula_matches_enumeration() {
    for (p, expected) in [(2u64, 6usize), (3, 24)] {
        let f = make_field(p, 1, None).unwrap();
        let all = brute_sl(&f, 2);
        assert_eq!(all.len(), expected);
        assert_eq!(sl_order(2, &f), BigCount::from(expected));
    }
    assert_eq!(alt_order(12), BigCount::from(239_500_800u64));
}

#[test]
fn sl2_chains_match_closure() {
    for (p, expected) in [(2u64, 6usize), (3, 24), (5, 120)] {
        let (f, gens) = sl2_generators(p);
        let elements = matrix_closure(&f, 2, &gens);
        assert_eq!(elements.len(), expected);
        if p <= 3 {
            let all: std::collections::HashSet<Matrix> = brute_sl(&f, 2).into_iter().collect();
            assert_eq!(elements, all);
        }
        let space = VectorSpace::new(2, &f, DEFAULT_GUARD).unwrap();
        for randomized in [false, true] {
            let chain = StabilizerChain::new(&space, &gens, &ChainOptions::default().randomized(randomized)).unwrap();
            assert_eq!(chain.order(), BigCount::from(expected), "SL_2({p}) randomized={randomized}");
            assert!(elements.iter().all(|g| chain.contains(g)));
        }
    }
}

#[test]
fn alternating_chains_match_closure() {
    for (m, expected) in [(5usize, 60usize), (8, 20_160)] {
        let gens = alternating_generators(m);
        let elements = perm_closure(&gens);
        assert_eq!(elements.len(), expected);
        let chain = StabilizerChain::new(&PointSpace::new(m), &gens, &ChainOptions::default()).unwrap();
        assert_eq!(chain.order(), BigCount::from(expected));
        assert_eq!(chain.order(), alt_order(m as u32));
    }
}

#[test]
fn alt5_permutation_matrices_have_order_60() {
    let f = make_field(3, 1, None).unwrap();
    let gens = alt5_matrices(&f);
    assert_eq!(matrix_closure(&f, 5, &gens).len(), 60);
    let space = VectorSpace::new(5, &f, DEFAULT_GUARD).unwrap();
    let chain = StabilizerChain::new(&space, &gens, &ChainOptions::default()).unwrap();
    assert_eq!(chain.order(), BigCount::from(60u32));
}

#[test]
fn sign_diagonal_closure_has_order_32() {
    // t = 0 makes w = diag(1,1,1,1,-1); its Alt(5)-conjugates are the five
    // sign changes, which generate the 2^5 sign-diagonal matrices
    let f = make_field(3, 1, None).unwrap();
    let w = lemma5_involution(&f, &f.zero());
    let ambient = alt5_matrices(&f);
    let conjugates: Vec<Matrix> = matrix_closure(&f, 5, &ambient)
        .iter()
        .map(|h| h.inverse().unwrap().try_mul(&w).unwrap().try_mul(h).unwrap())
        .collect();
    let oracle = matrix_closure(&f, 5, &conjugates);
    assert_eq!(oracle.len(), 32);
    assert!(oracle.iter().all(|m| m.as_signed_permutation().map(|s| s.permutation().is_identity()).unwrap_or(false)));
    let space = VectorSpace::new(5, &f, DEFAULT_GUARD).unwrap();
    let chain = normal_closure(&space, &ambient, &[w], &ChainOptions::default()).unwrap();
    assert_eq!(chain.order(), BigCount::from(32u32));
}

#[test]
fn trivial_normal_closure() {
    let f = make_field(3, 1, None).unwrap();
    let space = VectorSpace::new(5, &f, DEFAULT_GUARD).unwrap();
    let chain =
        normal_closure(&space, &alt5_matrices(&f), &[Matrix::identity(&f, 5)], &ChainOptions::default()).unwrap();
    assert_eq!(chain.order(), BigCount::from(1u32));
}

#[test]
fn y_orbit_of_e1() {
    let f = make_field(2, 1, None).unwrap();
    let space = VectorSpace::new(12, &f, DEFAULT_GUARD).unwrap();
    let o = orbit(&space, &[build_y(&f)], space.basis_point(1)).unwrap();
    let mut pts: Vec<usize> = o.points().collect();
    pts.sort_unstable();
    assert_eq!(pts, vec![space.basis_point(1), space.basis_point(2), space.basis_point(3)]);
}

#[test]
fn sym3_order() {
    let gens = [Permutation::from_cycles(3, &[&[1, 2, 3]]), Permutation::from_cycles(3, &[&[1, 2]])];
    let chain = StabilizerChain::new(&PointSpace::new(3), &gens, &ChainOptions::default()).unwrap();
    assert_eq!(chain.order(), BigCount::from(6u32));
    assert_eq!(perm_closure(&gens).len(), 6);
}
