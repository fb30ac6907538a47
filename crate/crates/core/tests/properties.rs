//! Randomized invariants for fields, matrices, permutations, words and the
//! action engine. Each suite runs at least 200 cases from a fixed seed.

mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use sl12gen::action::{
    all_orbits, alternating_generators, normal_closure, orbit, ActionSpace, BigCount, ChainOptions, PointSpace,
    StabilizerChain, VectorSpace, DEFAULT_GUARD,
};
use sl12gen::ff::make_field_untabled;
use sl12gen::gens::{build_words, valid_parameters, GeneratorPair, Variant};
use sl12gen::{commutator, conjugate, generates_field, make_field, Field, Matrix, Permutation};

use common::{config, generated_subfield_size, leibniz_det, perm_closure};

const FIELDS: [(u64, u32); 10] = [(2, 1), (3, 1), (5, 1), (7, 1), (101, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 4)];

fn fields() -> &'static [Field] {
    static CELL: OnceLock<Vec<Field>> = OnceLock::new();
    CELL.get_or_init(|| FIELDS.iter().map(|&(p, a)| make_field(p, a, None).unwrap()).collect())
}

fn untabled() -> &'static [Field] {
    static CELL: OnceLock<Vec<Field>> = OnceLock::new();
    CELL.get_or_init(|| FIELDS.iter().map(|&(p, a)| make_field_untabled(p, a, None).unwrap()).collect())
}

/// A field index and three element codes in it.
fn field_triple() -> impl Strategy<Value = (usize, u64, u64, u64)> {
    (0..FIELDS.len()).prop_flat_map(|i| {
        let q = fields()[i].q();
        (Just(i), 0..q, 0..q, 0..q)
    })
}

fn small_field() -> impl Strategy<Value = usize> {
    // indices of fields with q <= 9
    prop::sample::select(vec![0usize, 1, 2, 3, 5, 6])
}

fn square_matrix(max_n: usize) -> impl Strategy<Value = Matrix> {
    (small_field(), 1..=max_n).prop_flat_map(|(i, n)| {
        let q = fields()[i].q();
        prop::collection::vec(0..q, n * n).prop_map(move |codes| Matrix::from_codes(&fields()[i], n, codes).unwrap())
    })
}

fn matrix_pair(max_n: usize) -> impl Strategy<Value = (Matrix, Matrix)> {
    (small_field(), 1..=max_n).prop_flat_map(|(i, n)| {
        let q = fields()[i].q();
        let m = move || {
            prop::collection::vec(0..q, n * n)
                .prop_map(move |codes| Matrix::from_codes(&fields()[i], n, codes).unwrap())
        };
        (m(), m())
    })
}

/// Two pairs of blocks (sizes up to 3 and 2) over one field.
fn block_pairs() -> impl Strategy<Value = (Matrix, Matrix, Matrix, Matrix)> {
    (small_field(), 1..=3usize, 1..=2usize).prop_flat_map(|(i, n, k)| {
        let q = fields()[i].q();
        let m = move |n: usize| {
            prop::collection::vec(0..q, n * n)
                .prop_map(move |codes| Matrix::from_codes(&fields()[i], n, codes).unwrap())
        };
        (m(n), m(n), m(k), m(k))
    })
}

fn permutation(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn field_axioms((i, a, b, c) in field_triple()) {
        let f = &fields()[i];
        let (x, y, z) = (f.element(a), f.element(b), f.element(c));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &f.zero(), x.clone());
        prop_assert_eq!(&x * &f.one(), x.clone());
        prop_assert!((&x + &(-&x)).is_zero());
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        } else {
            prop_assert!(x.inv().is_err());
        }
    }

    #[test]
    fn tables_agree_with_polynomial_arithmetic((i, a, b, _c) in field_triple()) {
        let (t, u) = (&fields()[i], &untabled()[i]);
        prop_assert_eq!(t.mul(a, b), u.mul(a, b));
        prop_assert_eq!(t.add(a, b), u.add(a, b));
        prop_assert_eq!(t.mul_poly(a, b), t.mul(a, b));
        prop_assert_eq!(t.inv(a), u.inv(a));
    }

    #[test]
    fn lagrange_and_frobenius((i, a, b, _c) in field_triple()) {
        let f = &fields()[i];
        let (x, y) = (f.element(a), f.element(b));
        let q = f.q() as u128;
        prop_assert_eq!(x.pow(q), x.clone());
        if !x.is_zero() {
            prop_assert!(x.pow(q - 1).is_one());
        }
        let p = f.p() as u128;
        prop_assert_eq!((&x + &y).pow(p), &x.pow(p) + &y.pow(p));
        prop_assert_eq!((&x * &y).pow(p), &x.pow(p) * &y.pow(p));
        prop_assert_eq!(x.in_prime_subfield(), x.pow(p) == x);
    }

    #[test]
    fn generates_field_matches_subfield_span((i, a, _b, _c) in field_triple()) {
        let f = &fields()[i];
        prop_assume!(f.q() <= 81);
        let t = f.element(a);
        let spanned = generated_subfield_size(f, &t) as u64;
        prop_assert_eq!(generates_field(&t, f).unwrap(), spanned == f.q());
        prop_assert_eq!(f.p().pow(t.minimal_degree()), spanned);
    }

    #[test]
    fn inverse_and_determinant((a, b) in matrix_pair(4)) {
        prop_assert_eq!(a.det(), leibniz_det(&a));
        let ab = a.try_mul(&b).unwrap();
        prop_assert_eq!(ab.det(), &a.det() * &b.det());
        prop_assert_eq!(a.transpose().det(), a.det());
        match a.inverse() {
            Ok(inv) => {
                prop_assert!(!a.det().is_zero());
                prop_assert!(a.try_mul(&inv).unwrap().is_identity());
                prop_assert!(inv.try_mul(&a).unwrap().is_identity());
            }
            Err(_) => prop_assert!(a.det().is_zero()),
        }
    }

    #[test]
    fn element_order_is_least_power(a in square_matrix(3)) {
        prop_assume!(!a.det().is_zero());
        let order = a.element_order(10_000).unwrap();
        let mut power = a.clone();
        for k in 1..order {
            prop_assert!(!power.is_identity(), "a^{} = I before the order {}", k, order);
            power = power.try_mul(&a).unwrap();
        }
        prop_assert!(power.is_identity());
        prop_assert!(a.pow(order as u128).is_identity());
    }

    #[test]
    fn restriction_is_multiplicative((a, b, c, d) in block_pairs()) {
        let (m1, m2) = (a.direct_sum(&c), b.direct_sum(&d));
        let n = a.n();
        let first: Vec<usize> = (1..=n).collect();
        let second: Vec<usize> = (n + 1..=n + c.n()).collect();
        let prod = m1.try_mul(&m2).unwrap();
        prop_assert_eq!(prod.restrict(&first).unwrap(), a.try_mul(&b).unwrap());
        prop_assert_eq!(prod.restrict(&second).unwrap(), c.try_mul(&d).unwrap());
        prop_assert!(prod.block_diagonal_check(&[first, second]).unwrap());
    }

    #[test]
    fn commutator_and_conjugate_identities((a, b) in matrix_pair(3)) {
        prop_assume!(!a.det().is_zero() && !b.det().is_zero());
        let ai = a.inverse().unwrap();
        let lhs = commutator(&a, &b).unwrap();
        prop_assert_eq!(lhs, ai.try_mul(&conjugate(&a, &b).unwrap()).unwrap());
        let bb = b.try_mul(&b).unwrap();
        prop_assert_eq!(conjugate(&a, &bb).unwrap(), conjugate(&conjugate(&a, &b).unwrap(), &b).unwrap());
    }

    #[test]
    fn permutation_matrices_are_a_homomorphism(p in permutation(6), q in permutation(6), v in prop::collection::vec(0u64..3, 6)) {
        let f = &fields()[1];
        let (mp, mq) = (Matrix::from_permutation(f, &p), Matrix::from_permutation(f, &q));
        prop_assert_eq!(mp.try_mul(&mq).unwrap(), Matrix::from_permutation(f, &p.compose(&q)));
        // e_i -> e_{p(i)}: coordinate i of v moves to p(i)
        let w = mp.apply_codes(&v);
        for i in 0..6 {
            prop_assert_eq!(w[p.apply(i)], v[i]);
        }
        prop_assert_eq!(mp.det(), if p.is_even() { f.one() } else { f.from_int(-1) });
    }

    #[test]
    fn permutation_algebra(p in permutation(7), q in permutation(7), r in permutation(7)) {
        prop_assert_eq!(p.compose(&q).compose(&r), p.compose(&q.compose(&r)));
        prop_assert!(p.compose(&p.inverse()).is_identity());
        prop_assert_eq!(p.compose(&q).is_even(), p.is_even() == q.is_even());
        let cycles = p.cycles();
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        prop_assert_eq!(Permutation::from_cycles(7, &refs), p.clone());
    }
}

proptest! {
    #![proptest_config(config(200))]

    /// `g^x = (e_3, e_10, e_8)` for every valid parameter, which pins down
    /// the right-action and conjugation conventions.
    #[test]
    fn conjugation_convention_is_locked(cell in 0usize..FIELDS.len(), k in 0usize..3) {
        let f = &fields()[cell];
        prop_assume!(f.p() != 5);
        let ts: Vec<_> = valid_parameters(f).take(3).collect();
        let t = &ts[k % ts.len()];
        let pair = GeneratorPair::new(f, t, Variant::Standard).unwrap();
        let words = build_words(&pair).unwrap();
        let gx = words.get("g_x").as_signed_permutation().unwrap().plain_permutation().unwrap();
        prop_assert_eq!(gx.to_string(), "(3,10,8)");
    }

    #[test]
    fn chain_order_matches_closure(gens in prop::collection::vec(permutation(6), 1..4)) {
        let chain = StabilizerChain::new(&PointSpace::new(6), &gens, &ChainOptions::default()).unwrap();
        let elements = perm_closure(&gens);
        prop_assert_eq!(chain.order(), BigCount::from(elements.len()));
        for g in elements.iter().take(50) {
            prop_assert!(chain.contains(g));
        }
    }

    #[test]
    fn random_words_sift_to_identity(gens in prop::collection::vec(permutation(9), 2..4), word in prop::collection::vec((0usize..4, any::<bool>()), 100)) {
        let space = PointSpace::new(9);
        for randomized in [false, true] {
            let opts = ChainOptions::default().randomized(randomized);
            let chain = StabilizerChain::new(&space, &gens, &opts).unwrap();
            // 100 prefixes of one random word: 100 random products of the generators
            let mut g = space.identity();
            for &(k, inverse) in &word {
                let s = &gens[k % gens.len()];
                g = space.mul(&g, &if inverse { s.inverse() } else { s.clone() });
                prop_assert!(chain.contains(&g));
            }
        }
    }

    #[test]
    fn alternating_chain_rejects_odd_permutations(m in 3usize..9, p in permutation(8)) {
        let chain = StabilizerChain::new(&PointSpace::new(m), &alternating_generators(m), &ChainOptions::default()).unwrap();
        let pm = if m == 8 { p } else { Permutation::identity(m) };
        prop_assert_eq!(chain.contains(&pm), pm.is_even());
        let transposition = Permutation::from_cycles(m, &[&[1, m]]);
        prop_assert!(!chain.contains(&transposition));
    }

    #[test]
    fn orbits_partition_the_space(cell in small_field(), n in 1usize..4, seeds in prop::collection::vec(prop::collection::vec(0u64..9, 9), 1..3)) {
        let f = &fields()[cell];
        let q = f.q();
        let gens: Vec<Matrix> = seeds
            .iter()
            .map(|s| Matrix::from_codes(f, n, s[..n * n].iter().map(|c| c % q).collect()).unwrap())
            .filter(|m| !m.det().is_zero())
            .collect();
        prop_assume!(!gens.is_empty());
        let space = VectorSpace::new(n, f, DEFAULT_GUARD).unwrap();
        let orbits = all_orbits(&space, &gens).unwrap();
        prop_assert_eq!(orbits.iter().map(|o| o.len()).sum::<usize>(), space.size());
        for o in &orbits {
            let single = orbit(&space, &gens, o[0]).unwrap();
            prop_assert_eq!(single.len(), o.len());
            for &pt in o {
                for g in &gens {
                    prop_assert!(single.contains(space.image(g, pt)));
                }
                // the stored path really leads from the root to pt
                let mut img = single.root();
                for k in single.path(pt).unwrap() {
                    img = space.image(&gens[k], img);
                }
                prop_assert_eq!(img, pt);
            }
        }
    }

    #[test]
    fn vector_action_is_a_right_action(cell in small_field(), codes in prop::collection::vec(0u64..9, 18), pt in 0usize..1000) {
        let f = &fields()[cell];
        let q = f.q();
        let a = Matrix::from_codes(f, 3, codes[..9].iter().map(|c| c % q).collect()).unwrap();
        let b = Matrix::from_codes(f, 3, codes[9..].iter().map(|c| c % q).collect()).unwrap();
        prop_assume!(!a.det().is_zero() && !b.det().is_zero());
        let space = VectorSpace::new(3, f, DEFAULT_GUARD).unwrap();
        let pt = pt % space.size();
        let ab = a.try_mul(&b).unwrap();
        prop_assert_eq!(space.image(&ab, pt), space.image(&b, space.image(&a, pt)));
        prop_assert_eq!(space.point(&a.apply_codes(&space.vector(pt))), Some(space.image(&a, pt)));
    }

    #[test]
    fn normal_closure_is_normalized(seed in permutation(5), extra in permutation(5)) {
        let space = PointSpace::new(5);
        let ambient = vec![Permutation::from_cycles(5, &[&[1, 2]]), Permutation::from_cycles(5, &[&[1, 2, 3, 4, 5]])];
        let chain = normal_closure(&space, &ambient, &[seed.clone(), extra.clone()], &ChainOptions::default()).unwrap();
        for s in chain.strong_generators() {
            for a in &ambient {
                prop_assert!(chain.contains(&a.inverse().compose(s).compose(a)));
            }
        }
        // oracle: close the seeds and all their Sym(5)-conjugates
        let sym5 = perm_closure(&ambient);
        let mut conjugates = Vec::new();
        for h in &sym5 {
            for s in [&seed, &extra] {
                conjugates.push(h.inverse().compose(s).compose(h));
            }
        }
        prop_assert_eq!(chain.order(), BigCount::from(perm_closure(&conjugates).len()));
    }
}
