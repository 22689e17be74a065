//! Re-substitution of BLP points and AIP solutions into the defining
//! equalities, read straight off the structures.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Fixing;
use crate::exactmath::{Rational, VarLabel};
use crate::structures::{unary_symbol, RelationalStructure};

type Key = (usize, usize, usize);

/// Common shape of both relaxations: per-constraint sums equal 1 and
/// marginals agree with the unary variables.
fn equalities_hold<T, F>(
    x: &RelationalStructure,
    a: &RelationalStructure,
    labels: &[VarLabel],
    values: &[T],
    is_one: F,
) -> Option<HashMap<Key, T>>
where
    T: Clone + PartialEq + for<'a> std::iter::Sum<&'a T>,
    F: Fn(&T) -> bool,
{
    let u = unary_symbol(x)?;
    if unary_symbol(a) != Some(u) || labels.len() != values.len() {
        return None;
    }
    let map: HashMap<Key, T> = labels
        .iter()
        .zip(values)
        .map(|(l, v)| ((l.symbol, l.constraint, l.assignment), v.clone()))
        .collect();
    let expected: usize =
        (0..x.signature().len()).map(|s| x.relation(s).len() * a.relation(s).len()).sum();
    if map.len() != expected || expected != labels.len() {
        return None;
    }
    let unary_x = |v: usize| x.relation(u).iter().position(|t| t[0] == v);
    let unary_a = |v: usize| a.relation(u).iter().position(|t| t[0] == v);

    for s in 0..x.signature().len() {
        let ra = a.relation(s);
        for (ci, xt) in x.relation(s).iter().enumerate() {
            let vals: Vec<&T> = (0..ra.len()).map(|ai| map.get(&(s, ci, ai))).collect::<Option<_>>()?;
            let total: T = vals.iter().copied().sum();
            if !is_one(&total) {
                return None;
            }
            if s == u {
                continue;
            }
            for (i, &xi) in xt.iter().enumerate() {
                let uc = unary_x(xi)?;
                for val in 0..a.domain_size() {
                    let marginal: T = ra
                        .iter()
                        .zip(&vals)
                        .filter(|(at, _)| at[i] == val)
                        .map(|(_, v)| *v)
                        .sum();
                    let ua = unary_a(val)?;
                    if map.get(&(u, uc, ua))? != &marginal {
                        return None;
                    }
                }
            }
        }
    }
    Some(map)
}

/// Figure-1 feasibility of `point` (box, normalization, marginals, fixings).
pub fn check_blp_point(
    x: &RelationalStructure,
    a: &RelationalStructure,
    labels: &[VarLabel],
    point: &[Rational],
    fixings: &[Fixing],
) -> bool {
    if point.iter().any(|v| v.is_negative() || *v > Rational::one()) {
        return false;
    }
    let Some(map) = equalities_hold(x, a, labels, point, Rational::is_one) else {
        return false;
    };
    fixings.iter().all(|f| {
        let want = if f.value { Rational::one() } else { Rational::zero() };
        map.get(&(f.symbol, f.constraint, f.assignment)) == Some(&want)
    })
}

/// Figure-2 feasibility of `tau`, plus `tau = 0` on `zero_set` triples.
pub fn check_aip_solution(
    x: &RelationalStructure,
    a: &RelationalStructure,
    labels: &[VarLabel],
    tau: &[BigInt],
    zero_set: &[(usize, usize, usize)],
) -> bool {
    let Some(map) = equalities_hold(x, a, labels, tau, BigInt::is_one) else {
        return false;
    };
    zero_set.iter().all(|k| map.get(k).is_some_and(Zero::is_zero))
}
