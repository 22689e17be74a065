use pcsp_core::polymorph::example_template;
use pcsp_core::propagation::{
    cblp_fixpoint, cblp_run, clap_accepts, clap_run, sblp_accepts, sblp_run, SMap, Stage, SweepMode, TraceEvent,
    Verdict,
};
use pcsp_core::relaxations::{blp_accepts, Skeleton};
use pcsp_core::reproduce::{planted_instance, random_instance, small_ternary_instances};
use pcsp_core::structures::{
    complete_graph, directed_cycle, find_homomorphism, nae, one_in_three, undirected_cycle, RelationalStructure,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn template_as_instance_keeps_the_diagonal() {
    let t = example_template();
    let smap = cblp_fixpoint(&t.a, &t.a).unwrap();
    assert!(!smap.any_empty());
    for s in 0..t.a.signature().len() {
        for c in 0..t.a.relation(s).len() {
            assert!(smap.contains((s, c, c)));
        }
    }
    assert!(clap_accepts(&t.a, &t.a).unwrap().accepted());
}

#[test]
fn five_cycle_empties_a_set() {
    let t = example_template();
    let x = directed_cycle(5, t.signature(), "R2");
    assert!(cblp_fixpoint(&x, &t.a).unwrap().any_empty());
    let d = clap_accepts(&x, &t.a).unwrap();
    assert_eq!(d.verdict, Verdict::Reject);
    assert_eq!(d.trace.last(), Some(&TraceEvent::Reject { stage: Stage::Propagation }));
    let name = |s: usize| x.signature().name(s).to_string();
    let rendered = d.render_trace(name);
    assert!(rendered.lines().next().unwrap().starts_with("REMOVE "));
    assert!(rendered.contains("sweep=1"));
    assert_eq!(rendered.lines().last(), Some("REJECT stage=propagation"));
}

#[test]
fn single_one_in_three_constraint_keeps_everything() {
    let mut x = RelationalStructure::new("x", one_in_three().signature().clone(), 3);
    x.add_tuple(0, vec![0, 1, 2]).unwrap();
    let smap = cblp_fixpoint(&x, &one_in_three()).unwrap();
    assert_eq!(smap.set(0, 0), vec![0, 1, 2]);
    let d = clap_accepts(&x, &one_in_three()).unwrap();
    assert_eq!(d.trace, vec![TraceEvent::Cert { symbol: 0, constraint: 0, assignment: 0 }]);
    assert_eq!(d.render_trace(|_| "R1".into()), "CERT R1 0 0\n");
}

#[test]
fn empty_instance_is_accepted() {
    let x = RelationalStructure::new("empty", one_in_three().signature().clone(), 0);
    assert!(clap_accepts(&x, &one_in_three()).unwrap().accepted());
    assert!(sblp_accepts(&x, &one_in_three()).unwrap());
}

#[test]
fn singleton_blp_examples() {
    // pinning one vertex of the triangle forces the other two deterministically
    assert!(blp_accepts(&undirected_cycle(3), &complete_graph(2)).unwrap());
    assert!(!sblp_accepts(&undirected_cycle(3), &complete_graph(2)).unwrap());
    let sk = Skeleton::new(&undirected_cycle(4), &complete_graph(2)).unwrap();
    assert!(sblp_run(&sk).unwrap());
    let mut none = RelationalStructure::new("none", one_in_three().signature().clone(), 2);
    none.add_tuple(0, vec![0, 0, 1]).unwrap();
    none.add_tuple(0, vec![1, 1, 0]).unwrap();
    let mut a = RelationalStructure::new("a", one_in_three().signature().clone(), 2);
    a.add_tuple(0, vec![0, 0, 1]).unwrap();
    assert!(!blp_accepts(&none, &a).unwrap());
    assert!(!sblp_accepts(&none, &a).unwrap());
}

#[test]
fn completeness_on_small_instances() {
    let a = one_in_three();
    for x in small_ternary_instances(a.signature(), 3, 2) {
        if find_homomorphism(&x, &a).unwrap().is_some() {
            assert!(clap_accepts(&x, &a).unwrap().accepted(), "{x:?}");
        }
    }
}

fn mixed(rng: &mut ChaCha8Rng, i: usize) -> (RelationalStructure, RelationalStructure, RelationalStructure) {
    let t = example_template();
    let (a, b) = if i.is_multiple_of(2) { (t.a, t.b) } else { (one_in_three(), nae()) };
    let n = rng.gen_range(2..=5);
    let m = rng.gen_range(1..=4);
    let x = if rng.gen_bool(0.5) { planted_instance(rng, &a, n, m).0 } else { random_instance(rng, a.signature(), n, m) };
    (x, a, b)
}

#[test]
fn fixpoint_ignores_schedule() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..20 {
        let (x, a, _) = mixed(&mut rng, i);
        let sk = Skeleton::new(&x, &a).unwrap();
        let reference = cblp_run(&sk, &SweepMode::Sequential).unwrap().0;
        let mut order: Vec<_> = SMap::full(&sk).triples().collect();
        for _ in 0..5 {
            order.shuffle(&mut rng);
            assert_eq!(cblp_run(&sk, &SweepMode::Ordered(order.clone())).unwrap().0, reference);
        }
        assert_eq!(cblp_run(&sk, &SweepMode::Jacobi).unwrap().0, reference);
    }
}

#[test]
fn soundness_ladder_and_call_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut disagreements = 0;
    for i in 0..40 {
        let (x, a, b) = mixed(&mut rng, i);
        let sk = Skeleton::new(&x, &a).unwrap();
        let d = clap_run(&sk, &SweepMode::Sequential).unwrap();
        let g = sk.g();
        assert!(d.blp_calls <= 2 * g * g, "{} calls for g = {g}", d.blp_calls);
        if d.accepted() {
            assert!(find_homomorphism(&x, &b).unwrap().is_some());
            assert!(sk.blp_aip(&[]).unwrap());
        }
        let cblp = !cblp_run(&sk, &SweepMode::Sequential).unwrap().0.any_empty();
        let sblp = sblp_run(&sk).unwrap();
        assert!(!cblp || sblp);
        disagreements += usize::from(cblp != sblp);
    }
    eprintln!("CBLP and SBLP disagree on {disagreements} of 40 instances");
}
