use num_bigint::BigInt;
use pcsp_core::exactmath::{
    hnf, integer_solve, lp_feasible, lp_maximize, relative_interior_point, relative_interior_point_with,
    InteriorStrategy, IntMatrix, IntegerSystem, LpProblem, Rational,
};
use pcsp_core::relaxations::{check_blp_point, Skeleton};
use pcsp_core::structures::{complete_graph, undirected_cycle, with_unary};
use proptest::prelude::*;

/// Solves `a x = b` by Gauss-Jordan elimination; `Some` only when the
/// solution exists and is unique.
fn unique_solution(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>, n: usize) -> Option<Vec<Rational>> {
    let mut row = 0;
    for col in 0..n {
        let p = (row..a.len()).find(|&r| !a[r][col].is_zero())?;
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        b[row] = &b[row] * &inv;
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let delta = &f * &a[row][c];
                    a[r][c] -= delta;
                }
                let delta = &f * &b[row];
                b[r] -= delta;
            }
        }
        row += 1;
    }
    if b[row..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(b[..n].to_vec())
}

/// Every vertex of `{A x = b, 0 <= x <= 1}`: fix each variable at 0, at 1,
/// or leave it free, and keep unique solutions inside the box.
fn vertices(a: &[Vec<i64>], b: &[i64], n: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut state = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            state.push(c % 3);
            c /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&j| state[j] == 2).collect();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (r, &br) in a.iter().zip(b) {
            let mut v = Rational::from(br);
            for j in 0..n {
                if state[j] == 1 {
                    v -= Rational::from(r[j]);
                }
            }
            rows.push(free.iter().map(|&j| Rational::from(r[j])).collect());
            rhs.push(v);
        }
        let sol = if free.is_empty() {
            rhs.iter().all(Rational::is_zero).then(Vec::new)
        } else {
            unique_solution(rows, rhs, free.len())
        };
        let Some(sol) = sol else { continue };
        if sol.iter().any(|x| x.is_negative() || *x > Rational::one()) {
            continue;
        }
        let mut point: Vec<Rational> = state.iter().map(|&s| Rational::from(i64::from(s == 1))).collect();
        for (&j, x) in free.iter().zip(sol) {
            point[j] = x;
        }
        out.push(point);
    }
    out
}

fn problem(a: &[Vec<i64>], b: &[i64], n: usize) -> LpProblem {
    let mut p = LpProblem::new(n);
    for (r, &br) in a.iter().zip(b) {
        p.add_equality(
            r.iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j, Rational::from(c))).collect(),
            Rational::from(br),
        );
    }
    p
}

fn small_lp() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>, usize)> {
    (1usize..=6, 0usize..=3).prop_flat_map(|(n, m)| {
        (
            proptest::collection::vec(proptest::collection::vec(-2i64..=2, n), m),
            proptest::collection::vec(-1i64..=3, m),
            Just(n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn simplex_agrees_with_vertex_enumeration((a, b, n) in small_lp()) {
        let p = problem(&a, &b, n);
        let verts = vertices(&a, &b, n);
        let found = lp_feasible(&p);
        prop_assert_eq!(found.is_some(), !verts.is_empty());
        if let Some(x) = found {
            prop_assert!(p.is_satisfied_by(&x));
        }
        for var in 0..n {
            match lp_maximize(&p, var) {
                Ok((opt, point)) => {
                    let best = verts.iter().map(|v| v[var].clone()).max().unwrap();
                    prop_assert_eq!(&opt, &best);
                    prop_assert!(p.is_satisfied_by(&point));
                    prop_assert_eq!(&point[var], &opt);
                }
                Err(_) => prop_assert!(verts.is_empty()),
            }
        }
    }

    #[test]
    fn interior_support_is_maximal((a, b, n) in small_lp()) {
        let p = problem(&a, &b, n);
        for strategy in [InteriorStrategy::Covering, InteriorStrategy::PerVariable] {
            let Some(x) = relative_interior_point_with(&p, strategy) else {
                prop_assert!(lp_feasible(&p).is_none());
                continue;
            };
            prop_assert!(p.is_satisfied_by(&x));
            for var in 0..n {
                let (opt, _) = lp_maximize(&p, var).unwrap();
                prop_assert_eq!(x[var].is_zero(), opt.is_zero());
            }
        }
    }

    #[test]
    fn integer_solutions_match_box_search(
        rows in proptest::collection::vec((proptest::collection::vec(-3i64..=3, 3), -3i64..=3), 1..=3),
        zero in proptest::collection::vec(any::<bool>(), 3),
    ) {
        let mut s = IntegerSystem::new(3);
        for (coeffs, rhs) in &rows {
            s.add_equality(coeffs.iter().enumerate().map(|(j, &c)| (j, BigInt::from(c))).collect(), BigInt::from(*rhs));
        }
        for (j, &z) in zero.iter().enumerate() {
            if z {
                s.force_zero(j);
            }
        }
        let found = integer_solve(&s);
        if let Some(tau) = &found {
            prop_assert!(s.is_satisfied_by(tau));
        } else {
            let range = -5i64..=5;
            for t0 in range.clone() {
                for t1 in range.clone() {
                    for t2 in range.clone() {
                        let tau = [t0, t1, t2].map(BigInt::from);
                        prop_assert!(!s.is_satisfied_by(&tau));
                    }
                }
            }
        }
    }
}

#[test]
fn hnf_examples() {
    let m = IntMatrix::from_rows(&[vec![2i64, 4]]);
    let (h, u) = hnf(&m);
    assert_eq!(h, IntMatrix::from_rows(&[vec![2i64, 0]]));
    assert_eq!(m.mul(&u), h);
    assert_eq!(u.determinant().magnitude(), &num_bigint::BigUint::from(1u32));
    let (z, _) = hnf(&IntMatrix::from_rows(&[vec![0i64]]));
    assert_eq!(z, IntMatrix::from_rows(&[vec![0i64]]));
    let id = IntMatrix::identity(3);
    assert_eq!(hnf(&id), (id.clone(), id));
}

#[test]
fn three_equal_parts_have_no_integer_solution() {
    let mut s = IntegerSystem::new(3);
    let one = BigInt::from(1);
    s.add_equality(vec![(0, one.clone()), (1, -one.clone())], BigInt::from(0));
    s.add_equality(vec![(1, one.clone()), (2, -one.clone())], BigInt::from(0));
    s.add_equality(vec![(0, one.clone()), (1, one.clone()), (2, one)], BigInt::from(1));
    assert!(integer_solve(&s).is_none());
}

fn triangle_vs_k2() -> Skeleton {
    Skeleton::new(&undirected_cycle(3), &complete_graph(2)).unwrap()
}

#[test]
fn triangle_blp_is_fractional() {
    let sk = triangle_vs_k2();
    let p = sk.blp(&[]).unwrap();
    let half = vec![Rational::new(1, 2); sk.num_vars()];
    assert!(p.is_satisfied_by(&half));
    let x = with_unary(&undirected_cycle(3));
    let a = with_unary(&complete_graph(2));
    assert!(check_blp_point(&x, &a, sk.labels(), &half, &[]));
    let interior = relative_interior_point(&p).unwrap();
    assert!(interior.iter().all(Rational::is_positive));
}

#[test]
fn triangle_edge_weight_is_at_most_half() {
    // a deterministic edge forces the other two edges onto a monochromatic pair
    let sk = triangle_vs_k2();
    let p = sk.blp(&[]).unwrap();
    let (opt, point) = lp_maximize(&p, 0).unwrap();
    assert_eq!(opt, Rational::new(1, 2));
    assert!(p.is_satisfied_by(&point));
    let mut above = p.clone();
    above.set_bounds(0, Rational::new(51, 100), Rational::one());
    assert!(lp_feasible(&above).is_none());
    let mut at = p;
    at.set_bounds(0, Rational::new(1, 2), Rational::one());
    assert!(lp_feasible(&at).is_some());
}
