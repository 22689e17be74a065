//! Seeded generators for instances, skeletal matrices and tie matrices.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::exactmath::Rational;
use crate::minionlab::EvcMatrix;
use crate::polymorph::{is_tieless, TieMatrix};
use crate::structures::{RelationalStructure, Signature};

/// Uniform constraints over `n` variables; symbols are drawn uniformly.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Signature,
    n: usize,
    constraints: usize,
) -> RelationalStructure {
    let mut x = RelationalStructure::new("random", sig.clone(), n);
    for _ in 0..constraints {
        let s = rng.gen_range(0..sig.len());
        let t = (0..sig.arity(s)).map(|_| rng.gen_range(0..n)).collect();
        x.add_tuple(s, t).expect("in range");
    }
    x
}

/// Instance with a homomorphism into `a`: each constraint copies a random
/// tuple of `a`, choosing for each entry a variable already mapped there or
/// a fresh one. The hidden map is returned alongside.
pub fn planted_instance<R: Rng + ?Sized>(
    rng: &mut R,
    a: &RelationalStructure,
    n: usize,
    constraints: usize,
) -> (RelationalStructure, Vec<usize>) {
    let sig = a.signature();
    let mut x = RelationalStructure::new("planted", sig.clone(), n);
    let mut h: Vec<Option<usize>> = vec![None; n];
    let symbols: Vec<usize> = (0..sig.len()).filter(|&s| !a.relation(s).is_empty()).collect();
    for _ in 0..constraints {
        let Some(&s) = symbols.choose(rng) else { break };
        let t = a.relation(s).choose(rng).expect("nonempty relation");
        let mut xt = Vec::with_capacity(t.len());
        for &val in t {
            let options: Vec<usize> = (0..n).filter(|&v| h[v].is_none() || h[v] == Some(val)).collect();
            let Some(&v) = options.choose(rng) else { break };
            h[v] = Some(val);
            xt.push(v);
        }
        if xt.len() == t.len() {
            x.add_tuple(s, xt).expect("in range");
        }
    }
    let map = h.into_iter().map(|v| v.unwrap_or(0)).collect();
    (x, map)
}

/// Skeletal matrix with `rows` rows: a random support, one unit column per
/// support row, and further columns that are random distributions on the
/// support with denominators up to `max_den`.
pub fn random_skeletal<R: Rng + ?Sized>(rng: &mut R, rows: usize, max_width: usize, max_den: i64) -> EvcMatrix {
    let k = rng.gen_range(1..=rows.min(max_width));
    let t = rng.gen_range(k..=max_width);
    let mut perm: Vec<usize> = (0..rows).collect();
    perm.shuffle(rng);
    let support = &perm[..k];
    let mut slots: Vec<usize> = (0..t).collect();
    slots.shuffle(rng);
    let mut cols: Vec<Option<Vec<Rational>>> = vec![None; t];
    for (&j, &slot) in support.iter().zip(&slots) {
        cols[slot] = Some((0..rows).map(|r| Rational::from(i64::from(r == j))).collect());
    }
    let cols = cols
        .into_iter()
        .map(|c| {
            c.unwrap_or_else(|| {
                let den = rng.gen_range(1..=max_den);
                let mut w = vec![0i64; rows];
                for _ in 0..den {
                    w[*support.choose(rng).expect("nonempty")] += 1;
                }
                w.into_iter().map(|x| Rational::new(x, den)).collect()
            })
        })
        .collect();
    EvcMatrix::new(rows, cols).expect("well-formed")
}

/// Tie matrix with `m` rows and `p` columns, entries in `0..=max_entry`;
/// columns are resampled until tieless.
pub fn random_tie_matrix<R: Rng + ?Sized>(rng: &mut R, m: usize, p: usize, max_entry: i64) -> TieMatrix {
    let mut cols = Vec::with_capacity(p);
    while cols.len() < p {
        let c: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=max_entry)).collect();
        if is_tieless(&c) {
            cols.push(c);
        }
    }
    TieMatrix::new((0..m).map(|i| cols.iter().map(|c| c[i]).collect()).collect()).expect("tieless columns")
}

/// Random map `[from] -> [to]`.
pub fn random_map<R: Rng + ?Sized>(rng: &mut R, from: usize, to: usize) -> Vec<usize> {
    (0..from).map(|_| rng.gen_range(0..to)).collect()
}

/// Every instance of the single ternary relation `R1` with at most
/// `max_vars` variables and `max_constraints` constraints, up to renaming
/// variables. Variable counts are kept distinct (isolated variables count).
pub fn small_ternary_instances(sig: &Signature, max_vars: usize, max_constraints: usize) -> Vec<RelationalStructure> {
    let mut seen = std::collections::BTreeSet::new();
    for n in 1..=max_vars {
        let triples: Vec<[usize; 3]> = (0..n * n * n).map(|i| [i / (n * n), (i / n) % n, i % n]).collect();
        let perms = permutations(n);
        let mut chosen = Vec::new();
        subsets(&triples, max_constraints, 0, &mut chosen, &mut |set| {
            let canon = perms
                .iter()
                .map(|p| {
                    let mut c: Vec<[usize; 3]> = set.iter().map(|t| [p[t[0]], p[t[1]], p[t[2]]]).collect();
                    c.sort_unstable();
                    c
                })
                .min()
                .expect("at least the identity");
            seen.insert((n, canon));
        });
    }
    seen.into_iter()
        .map(|(n, cs)| {
            let mut x = RelationalStructure::new("small", sig.clone(), n);
            for t in cs {
                x.add_tuple(0, t.to_vec()).expect("in range");
            }
            x
        })
        .collect()
}

fn subsets<T: Copy>(items: &[T], max: usize, start: usize, cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
    f(cur);
    if cur.len() == max {
        return;
    }
    for i in start..items.len() {
        cur.push(items[i]);
        subsets(items, max, i + 1, cur, f);
        cur.pop();
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{find_homomorphism, one_in_three, Homomorphism};
    use rand::SeedableRng;

    #[test]
    fn planted_map_is_a_homomorphism() {
        let a = one_in_three();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (x, h) = planted_instance(&mut rng, &a, 4, 4);
            assert!(Homomorphism { map: h }.validates(&x, &a));
            assert!(find_homomorphism(&x, &a).unwrap().is_some());
        }
    }

    #[test]
    fn small_instance_counts() {
        let sig = one_in_three().signature().clone();
        // one variable: empty or {(0,0,0)}
        assert_eq!(small_ternary_instances(&sig, 1, 3).len(), 2);
        let all = small_ternary_instances(&sig, 3, 3);
        assert!(all.len() < 2000);
    }

    #[test]
    fn generated_matrices_are_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let m = random_skeletal(&mut rng, 7, 5, 6);
            assert!(m.is_skeletal() && m.is_nonnegative() && m.columns_sum_to_one());
            let h = random_tie_matrix(&mut rng, 3, 7, 4);
            assert_eq!((h.num_rows(), h.num_cols()), (3, 7));
        }
    }
}
