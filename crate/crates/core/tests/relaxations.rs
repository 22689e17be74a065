use pcsp_core::exactmath::{InteriorStrategy, Rational};
use pcsp_core::polymorph::example_template;
use pcsp_core::relaxations::{
    aip_accepts, blp_accepts, blp_aip_accepts, build_aip, check_blp_point, marginal_matrix, Fixing, Skeleton,
};
use pcsp_core::reproduce::{planted_instance, random_instance};
use pcsp_core::structures::{
    complete_graph, directed_cycle, find_homomorphism, nae, one_in_three, undirected_cycle, with_unary,
    RelationalStructure,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn single_constraint(tuple: [usize; 3], n: usize) -> RelationalStructure {
    let mut x = RelationalStructure::new("x", one_in_three().signature().clone(), n);
    x.add_tuple(0, tuple.to_vec()).unwrap();
    x
}

#[test]
fn marginal_matrix_examples() {
    let e = marginal_matrix(&[vec![0, 1]], 2, 0).unwrap();
    assert_eq!(e.entries, vec![vec![1], vec![0]]);
    let r = one_in_three();
    let third = marginal_matrix(r.relation(0), 2, 2).unwrap();
    assert_eq!(third.entries, vec![vec![0, 1, 1], vec![1, 0, 0]]);
    let first = marginal_matrix(r.relation(0), 2, 0).unwrap();
    let xi = vec![Rational::new(1, 3); 3];
    assert_eq!(first.apply(&xi), vec![Rational::new(2, 3), Rational::new(1, 3)]);
    assert!(marginal_matrix(r.relation(0), 2, 3).is_err());
}

#[test]
fn five_cycle_uniform_point() {
    let t = example_template();
    let x = directed_cycle(5, t.signature(), "R2");
    let sk = Skeleton::new(&x, &t.a).unwrap();
    // R2 edges take weight 1/5 each, unary on {2..6} takes 1/5, the rest 0
    let point: Vec<Rational> = sk
        .labels()
        .iter()
        .map(|l| {
            let sym = sk.x().signature().name(l.symbol);
            match sym {
                "R2" => Rational::new(1, 5),
                "__u" if l.assignment >= 2 => Rational::new(1, 5),
                _ => Rational::zero(),
            }
        })
        .collect();
    assert!(check_blp_point(sk.x(), sk.a(), sk.labels(), &point, &[]));
    assert!(sk.blp(&[]).unwrap().is_satisfied_by(&point));
    assert!(blp_accepts(&x, &t.a).unwrap());
    assert!(blp_aip_accepts(&x, &t.a, &[]).unwrap());
    assert!(find_homomorphism(&x, &t.b).unwrap().is_none());
}

#[test]
fn fixing_one_gives_an_indicator() {
    let x = single_constraint([0, 1, 2], 3);
    let sk = Skeleton::new(&x, &one_in_three()).unwrap();
    let fix = [Fixing::one(0, 0, 0)];
    let point = sk.blp_point(&fix).unwrap().unwrap();
    assert_eq!(&point[..3], &[Rational::one(), Rational::zero(), Rational::zero()]);
    assert!(check_blp_point(sk.x(), sk.a(), sk.labels(), &point, &fix));
    assert!(blp_aip_accepts(&x, &one_in_three(), &fix).unwrap());
}

#[test]
fn strict_relaxation_examples() {
    assert!(blp_accepts(&undirected_cycle(5), &complete_graph(2)).unwrap());
    assert!(find_homomorphism(&undirected_cycle(5), &complete_graph(2)).unwrap().is_none());
    let diagonal = single_constraint([0, 0, 0], 1);
    assert!(blp_accepts(&diagonal, &one_in_three()).unwrap());
    assert!(!aip_accepts(&diagonal, &one_in_three()).unwrap());
    let empty = RelationalStructure::new("empty", one_in_three().signature().clone(), 0);
    assert!(aip_accepts(&empty, &one_in_three()).unwrap());
    assert!(blp_accepts(&empty, &one_in_three()).unwrap());
}

#[test]
fn build_aip_zero_set_kills_a_constraint() {
    let x = single_constraint([0, 1, 2], 3);
    let s = build_aip(&x, &one_in_three(), &[(0, 0, 0), (0, 0, 1), (0, 0, 2)]).unwrap();
    assert!(pcsp_core::exactmath::integer_solve(&s).is_none());
    assert!(build_aip(&x, &one_in_three(), &[(0, 0, 3)]).is_err());
}

fn templates() -> Vec<(RelationalStructure, RelationalStructure)> {
    let t = example_template();
    vec![(t.a, t.b), (one_in_three(), nae())]
}

#[test]
fn planted_instances_are_accepted() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (a, _) in templates() {
        for _ in 0..60 {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(0..=5);
            let (x, _) = planted_instance(&mut rng, &a, n, m);
            assert!(blp_accepts(&x, &a).unwrap());
            assert!(aip_accepts(&x, &a).unwrap());
            assert!(blp_aip_accepts(&x, &a, &[]).unwrap());
        }
    }
}

#[test]
fn ladder_and_interior_choice() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (a, _) in templates() {
        for _ in 0..60 {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=5);
            let x = random_instance(&mut rng, a.signature(), n, m);
            let sk = Skeleton::new(&x, &a).unwrap();
            let plain = sk.blp_aip(&[]).unwrap();
            assert_eq!(plain, sk.blp_aip_with(&[], InteriorStrategy::PerVariable).unwrap());
            if plain {
                assert!(sk.blp_feasible(&[]).unwrap());
            }
            // a random fixing only restricts
            let s = rng.gen_range(0..x.signature().len());
            if !x.relation(s).is_empty() && !a.relation(s).is_empty() {
                let c = rng.gen_range(0..x.relation(s).len());
                let t = rng.gen_range(0..a.relation(s).len());
                let fixed = sk.blp_aip(&[Fixing::one(s, c, t)]).unwrap();
                assert!(!fixed || plain);
                assert_eq!(fixed, sk.blp_aip_with(&[Fixing::one(s, c, t)], InteriorStrategy::PerVariable).unwrap());
            }
        }
    }
}

#[test]
fn aip_decides_one_in_three_versus_nae() {
    let (a, b) = (one_in_three(), nae());
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..300 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=4);
        let x = random_instance(&mut rng, a.signature(), n, m);
        let aip = aip_accepts(&x, &a).unwrap();
        if find_homomorphism(&x, &a).unwrap().is_some() {
            assert!(aip);
        }
        if aip {
            assert!(find_homomorphism(&x, &b).unwrap().is_some());
        }
    }
}

#[test]
fn audited_solves_resubstitute() {
    let t = example_template();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..30 {
        let (x, _) = planted_instance(&mut rng, &t.a, 4, 4);
        let sk = Skeleton::new(&x, &t.a).unwrap();
        sk.set_audit(true);
        sk.blp_aip(&[]).unwrap();
        assert!(sk.counters().audited() >= 2);
        assert_eq!(sk.counters().audit_failures(), 0);
    }
    let x = with_unary(&undirected_cycle(3));
    assert!(Skeleton::new(&x, &complete_graph(2)).is_err());
}
