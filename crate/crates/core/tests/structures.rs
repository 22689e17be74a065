use pcsp_core::polymorph::example_template;
use pcsp_core::structures::{
    augment_with_unary, directed_cycle, find_homomorphism, nae, one_in_three, parse_instance, parse_structure,
    serialize_instance, serialize_structure, validate_template, with_unary, Homomorphism, RelationalStructure,
    Signature, StructureError,
};
use proptest::prelude::*;

fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..m).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn structure(sig: &Signature, n: usize, tuples: &[(usize, Vec<usize>)]) -> RelationalStructure {
    let mut s = RelationalStructure::new("s", sig.clone(), n);
    for (sym, t) in tuples {
        s.add_tuple(*sym, t.iter().map(|&e| e % n).collect()).unwrap();
    }
    s
}

fn small_pair() -> impl Strategy<Value = (RelationalStructure, RelationalStructure)> {
    let sig = Signature::new(vec![("E".into(), 2), ("T".into(), 3)]).unwrap();
    let tuples = || proptest::collection::vec((0usize..2, proptest::collection::vec(0usize..3, 3)), 0..5);
    (1usize..=3, 1usize..=3, tuples(), tuples()).prop_map(move |(n, m, tx, ty)| {
        let fix = |ts: Vec<(usize, Vec<usize>)>| -> Vec<(usize, Vec<usize>)> {
            ts.into_iter().map(|(s, t)| (s, t[..sig.arity(s)].to_vec())).collect()
        };
        (structure(&sig, n, &fix(tx)), structure(&sig, m, &fix(ty)))
    })
}

proptest! {
    #[test]
    fn search_agrees_with_enumeration((x, y) in small_pair()) {
        let found = find_homomorphism(&x, &y).unwrap();
        let exists = all_maps(x.domain_size(), y.domain_size())
            .into_iter()
            .any(|map| Homomorphism { map }.validates(&x, &y));
        prop_assert_eq!(found.is_some(), exists);
        if let Some(h) = found {
            prop_assert!(h.validates(&x, &y));
        }
    }

    #[test]
    fn augmentation_preserves_homomorphisms((x, y) in small_pair()) {
        let before = find_homomorphism(&x, &y).unwrap().is_some();
        let after = find_homomorphism(&with_unary(&x), &with_unary(&y)).unwrap().is_some();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn text_round_trip((x, _) in small_pair()) {
        let again = parse_structure(&serialize_structure(&x)).unwrap();
        prop_assert_eq!(&again, &x);
        let inst = parse_instance(&serialize_instance(&x)).unwrap();
        for sym in 0..x.signature().len() {
            prop_assert_eq!(inst.relation(sym), x.relation(sym));
        }
    }
}

#[test]
fn five_cycle_has_no_map_into_b() {
    let t = example_template();
    let x = directed_cycle(5, t.signature(), "R2");
    assert!(find_homomorphism(&x, &t.b).unwrap().is_none());
    let x6 = directed_cycle(6, t.signature(), "R2");
    assert!(find_homomorphism(&x6, &t.b).unwrap().is_some());
}

#[test]
fn template_validation() {
    let t = validate_template(one_in_three(), nae()).unwrap();
    assert_eq!(t.witness.map, vec![0, 1]);
    let same = validate_template(nae(), nae()).unwrap();
    assert_eq!(same.witness.map, vec![0, 1]);
    assert!(matches!(validate_template(nae(), one_in_three()), Err(StructureError::NotATemplate)));
}

#[test]
fn unary_augmentation_shapes() {
    let sig = one_in_three().signature().clone();
    let mut x = RelationalStructure::new("x", sig, 4);
    x.add_tuple(0, vec![0, 1, 2]).unwrap();
    let (x2, a2, b2) = augment_with_unary(&x, &one_in_three(), &nae()).unwrap();
    assert_eq!(x2.relation_by_name("__u").unwrap().len(), 4);
    assert_eq!(a2.relation_by_name("__u").unwrap(), &[vec![0], vec![1]]);
    assert_eq!(b2.relation_by_name("__u").unwrap().len(), 2);
    let (x3, _, _) = augment_with_unary(&x2, &a2, &b2).unwrap();
    assert_eq!(x3, x2);
}
