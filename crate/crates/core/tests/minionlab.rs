use num_bigint::BigInt;
use pcsp_core::exactmath::Rational;
use pcsp_core::minionlab::{
    enumerate_c_d, random_c_d, regime_n, tiebreak, xi_blocks, xi_map, EvcMatrix, MinionElement, MinionError, MinorMap,
};
use pcsp_core::polymorph::{
    example_template, example_tie_matrix, is_polymorphism, tie_count, ExamplePolymorphism, Operation, TieMatrix,
    DEFAULT_BUDGET,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn unit(rows: usize, j: usize) -> Vec<Rational> {
    (0..rows).map(|r| q(i64::from(r == j), 1)).collect()
}

fn halves() -> EvcMatrix {
    EvcMatrix::new(2, vec![vec![q(1, 2), q(1, 2)], unit(2, 0), unit(2, 1)]).unwrap()
}

/// `H M v` computed entry by entry.
fn hmv(h: &TieMatrix, m: &EvcMatrix, v: &[Rational]) -> Vec<Rational> {
    let mut mv = vec![Rational::zero(); m.rows()];
    for (c, vc) in v.iter().enumerate() {
        for (r, x) in mv.iter_mut().enumerate() {
            *x += &(m.get(r, c) * vc);
        }
    }
    (0..h.num_rows())
        .map(|i| (0..h.num_cols()).map(|j| Rational::from(h.entry(i, j)) * &mv[j]).sum())
        .collect()
}

#[test]
fn defining_conditions() {
    let el = MinionElement::new(halves(), vec![1, 0]).unwrap();
    assert!(el.is_minion_element());
    // width 3 with halves: the smallest level is 4
    assert!(el.in_c_d(4));
    assert!(!el.in_c_d(3));
    assert!(!el.in_c_d(2));
    let signed = MinionElement::new(halves(), vec![2, -1]).unwrap();
    assert!(signed.in_c_d(4));
    assert!(!MinionElement::new(halves(), vec![3, -2]).unwrap().in_c_d(4));
    assert!(!MinionElement::new(EvcMatrix::new(2, vec![vec![q(1, 2), q(1, 2)]]).unwrap(), vec![1, 0])
        .unwrap()
        .is_minion_element());
    let off = MinionElement::new(EvcMatrix::constant_unit(2, 0), vec![0, 1]).unwrap();
    assert_eq!(off.violation(), Some("mu is not supported inside the first column"));
    let heavy = MinionElement::new(EvcMatrix::constant_unit(2, 0), vec![1, 1]).unwrap();
    assert_eq!(heavy.violation(), Some("mu does not sum to 1"));
    assert!(MinionElement::new(EvcMatrix::constant_unit(2, 0), vec![1]).is_err());
}

#[test]
fn minor_examples() {
    let el = MinionElement::new(halves(), vec![1, 0]).unwrap();
    assert_eq!(el.minor(&[0, 1], 2).unwrap(), el);
    let collapsed = el.minor(&[0, 0], 1).unwrap();
    assert_eq!(collapsed.m, EvcMatrix::constant_unit(1, 0));
    assert_eq!(collapsed.mu, vec![1]);
    let swapped = el.minor(&[1, 0], 2).unwrap();
    assert_eq!(swapped.mu, vec![0, 1]);
    assert_eq!(swapped.m.column(1), unit(2, 1).as_slice());
    let wider = el.minor(&[2, 0], 3).unwrap();
    assert!(wider.m.row_is_zero(1));
    assert!(wider.is_minion_element());
}

#[test]
fn all_level_counts() {
    assert_eq!(enumerate_c_d(7, 1, DEFAULT_BUDGET).unwrap().len(), 7);
    assert_eq!(enumerate_c_d(7, 2, DEFAULT_BUDGET).unwrap().len(), 49);
    assert!(matches!(enumerate_c_d(7, 6, 1000), Err(MinionError::TooLarge(1000))));
    for el in enumerate_c_d(3, 3, DEFAULT_BUDGET).unwrap() {
        assert!(el.in_c_d(3), "{el:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn minors_compose_and_stay_canonical(seed in any::<u64>(), d in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = rng.gen_range(1..=5);
        let l2 = rng.gen_range(1..=4);
        let l3 = rng.gen_range(1..=4);
        let el = random_c_d(&mut rng, l, d);
        prop_assert!(el.in_c_d(d));
        prop_assert!(el.m.is_canonical());
        prop_assert_eq!(&EvcMatrix::new(l, el.m.head().to_vec()).unwrap(), &el.m);
        let a = MinorMap::new((0..l).map(|_| rng.gen_range(0..l2)).collect(), l2).unwrap();
        let b = MinorMap::new((0..l2).map(|_| rng.gen_range(0..l3)).collect(), l3).unwrap();
        let once = el.minor_by(&a).unwrap();
        prop_assert!(once.m.is_canonical());
        prop_assert!(once.in_c_d(d));
        prop_assert_eq!(once.minor_by(&b).unwrap(), el.minor_by(&a.compose(&b).unwrap()).unwrap());
        prop_assert_eq!(MinionElement::parse(&el.serialize()).unwrap(), el);
    }
}

#[test]
fn tiebreak_small_cases() {
    let id2 = TieMatrix::diag(&[1, 1]).unwrap();
    let r = tiebreak(&[EvcMatrix::constant_unit(2, 0)], &id2).unwrap();
    assert_eq!(r.v, vec![Rational::one()]);
    assert_eq!(r.iterations, 0);
    let m = EvcMatrix::new(2, vec![unit(2, 0), unit(2, 1)]).unwrap();
    let r = tiebreak(std::slice::from_ref(&m), &id2).unwrap();
    assert_eq!(r.initial_ties, 2);
    assert_ne!(r.v[0], r.v[1]);
    assert_eq!(r.v.iter().sum::<Rational>(), Rational::one());
}

#[test]
fn tiebreak_on_random_seven_row_families() {
    let h = example_tie_matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..15 {
        let d = rng.gen_range(1..=3);
        let ms: Vec<EvcMatrix> = (0..rng.gen_range(1..=6)).map(|_| random_c_d(&mut rng, 7, d).m).collect();
        let r = tiebreak(&ms, &h).unwrap();
        assert!(r.v.iter().all(|x| !x.is_negative()));
        assert_eq!(r.v.iter().sum::<Rational>(), Rational::one());
        for m in &ms {
            assert_eq!(tie_count(&hmv(&h, m, &r.v)), 0, "{m:?}");
        }
    }
}

#[test]
fn unary_element_gives_the_diagonal() {
    let h = example_tie_matrix();
    let el = MinionElement::new(EvcMatrix::constant_unit(1, 0), vec![1]).unwrap();
    let v = vec![Rational::one()];
    let n = regime_n(&h, &v, 1);
    let f = ExamplePolymorphism { arity: 36 };
    let g = xi_map(&el, &f, &h, &v, 1, &n).unwrap();
    for a in 0..7 {
        assert_eq!(g.eval(&[a]), f.eval(&[a; 36]));
        assert_eq!(g.eval(&[a]), a);
    }
}

#[test]
fn zero_remainder_ignores_mu() {
    let el = MinionElement::new(halves(), vec![1, 0]).unwrap();
    let other = MinionElement::new(halves(), vec![2, -1]).unwrap();
    let v = vec![q(1, 3); 3];
    let n = BigInt::from(54);
    let square = &n * &n;
    assert_eq!(xi_blocks(&el, &v, &n, &square).unwrap(), xi_blocks(&other, &v, &n, &square).unwrap());
    let plus = &square + BigInt::from(1);
    assert_ne!(xi_blocks(&el, &v, &n, &plus).unwrap(), xi_blocks(&other, &v, &n, &plus).unwrap());
    let blocks = xi_blocks(&el, &v, &n, &plus).unwrap();
    assert_eq!(blocks.iter().sum::<BigInt>(), plus);
}

#[test]
fn images_are_polymorphisms_and_commute_on_full_tables() {
    let t = example_template();
    let h = example_tie_matrix();
    let family = enumerate_c_d(7, 1, DEFAULT_BUDGET).unwrap();
    let ms: Vec<EvcMatrix> = family.iter().map(|e| e.m.clone()).collect();
    let v = tiebreak(&ms, &h).unwrap().v;
    let n = regime_n(&h, &v, 1);
    assert_eq!(n, BigInt::from(6));
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for c in [36usize, 41] {
        let f = ExamplePolymorphism { arity: c };
        for el in enumerate_c_d(3, 1, DEFAULT_BUDGET).unwrap() {
            let g = xi_map(&el, &f, &h, &v, 1, &n).unwrap().materialize("g", DEFAULT_BUDGET).unwrap();
            assert!(is_polymorphism(&g, &t.a, &t.b, DEFAULT_BUDGET).unwrap());
            for _ in 0..4 {
                let l2 = rng.gen_range(1..=3);
                let pi: Vec<usize> = (0..3).map(|_| rng.gen_range(0..l2)).collect();
                let lhs = xi_map(&el.minor(&pi, l2).unwrap(), &f, &h, &v, 1, &n).unwrap();
                let lhs = lhs.materialize("lhs", DEFAULT_BUDGET).unwrap();
                assert_eq!(lhs.table(), g.minor(&pi, l2).unwrap().table());
            }
        }
    }
}

#[test]
fn regime_checks() {
    let h = example_tie_matrix();
    let el = MinionElement::new(EvcMatrix::constant_unit(1, 0), vec![1]).unwrap();
    let v = vec![Rational::one()];
    let f = ExamplePolymorphism { arity: 36 };
    assert!(matches!(xi_map(&el, &f, &h, &v, 1, &BigInt::from(5)), Err(MinionError::Regime(_))));
    let halfway = vec![q(1, 2), q(1, 2)];
    assert!(matches!(xi_map(&el, &f, &h, &halfway, 1, &BigInt::from(6)), Err(MinionError::Regime(_))));
    let outside = MinionElement::new(halves(), vec![1, 0]).unwrap();
    assert!(matches!(xi_map(&outside, &f, &h, &v, 1, &BigInt::from(6)), Err(MinionError::NotInMinion(_))));
}
