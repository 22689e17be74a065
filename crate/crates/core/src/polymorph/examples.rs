//! The seven-element separating template and its polymorphism families.

use super::function::{FiniteFunction, Operation};
use super::ties::TieMatrix;
use super::PolyError;
use crate::structures::{validate_template, PcspTemplate, RelationalStructure, Signature};

/// Domain `{0..6}`: `R1` is 1-in-3 on `{0,1}` in A and not-all-equal in B;
/// `R2` is the disjoint 2-cycle `2<->3` and 3-cycle `4->5->6->4` on both sides.
pub fn example_template() -> PcspTemplate {
    let sig = Signature::new(vec![("R1".into(), 3), ("R2".into(), 2)]).expect("valid signature");
    let mut a = RelationalStructure::new("example_A", sig.clone(), 7);
    let mut b = RelationalStructure::new("example_B", sig, 7);
    for t in [[0, 0, 1], [0, 1, 0], [1, 0, 0]] {
        a.add_tuple(0, t.to_vec()).expect("R1 tuple");
    }
    for t in [[0, 0, 1], [0, 1, 0], [0, 1, 1], [1, 0, 0], [1, 0, 1], [1, 1, 0]] {
        b.add_tuple(0, t.to_vec()).expect("R1 tuple");
    }
    for e in [[2, 3], [3, 2], [4, 5], [5, 6], [6, 4]] {
        a.add_tuple(1, e.to_vec()).expect("R2 edge");
        b.add_tuple(1, e.to_vec()).expect("R2 edge");
    }
    validate_template(a, b).expect("identity is a homomorphism")
}

/// `diag(1, 2, 1, 1, 1, 1, 1)`.
pub fn example_tie_matrix() -> TieMatrix {
    TieMatrix::diag(&[1, 2, 1, 1, 1, 1, 1]).expect("tie matrix")
}

/// Lazy form of the example polymorphism family: on `{0,1}^L` compare the
/// count of 1s with `L/3` (ties go to the first argument); on `{2..6}^L`
/// take the unique most frequent element, else the first argument; every
/// other input maps to 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExamplePolymorphism {
    pub arity: usize,
}

impl ExamplePolymorphism {
    fn decide(&self, first: usize, counts: &[usize; 7]) -> usize {
        let l = self.arity;
        let boolean = counts[0] + counts[1];
        if boolean == l {
            let ones = 3 * counts[1];
            return match ones.cmp(&l) {
                std::cmp::Ordering::Less => 0,
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Equal => first,
            };
        }
        if boolean == 0 {
            let max = counts[2..].iter().copied().max().unwrap_or(0);
            let mut winners = (2..7).filter(|&a| counts[a] == max);
            let w = winners.next().expect("nonempty");
            return if winners.next().is_none() { w } else { first };
        }
        0
    }
}

impl Operation for ExamplePolymorphism {
    fn arity(&self) -> usize {
        self.arity
    }

    fn domain_size(&self) -> usize {
        7
    }

    fn codomain_size(&self) -> usize {
        7
    }

    fn eval(&self, args: &[usize]) -> usize {
        assert_eq!(args.len(), self.arity, "arity mismatch");
        let mut counts = [0usize; 7];
        for &a in args {
            counts[a] += 1;
        }
        self.decide(args.first().copied().unwrap_or(0), &counts)
    }

    fn eval_runs(&self, runs: &[(usize, usize)]) -> usize {
        let mut counts = [0usize; 7];
        for &(v, k) in runs {
            counts[v] += k;
        }
        assert_eq!(counts.iter().sum::<usize>(), self.arity, "arity mismatch");
        let first = runs.iter().find(|(_, k)| *k > 0).map_or(0, |(v, _)| *v);
        self.decide(first, &counts)
    }
}

pub fn example_polymorphism(arity: usize, budget: usize) -> Result<FiniteFunction, PolyError> {
    if arity == 0 {
        return Err(PolyError::SizeMismatch("arity must be positive".into()));
    }
    FiniteFunction::materialize(format!("example{arity}"), &ExamplePolymorphism { arity }, budget)
}

/// `[a_1 - a_2 + a_3 - ... + a_L > 0]` on `{0,1}^L`, `L` odd.
pub fn aip_polymorphism(arity: usize) -> Result<FiniteFunction, PolyError> {
    if arity.is_multiple_of(2) {
        return Err(PolyError::SizeMismatch(format!("arity {arity} is not odd")));
    }
    FiniteFunction::from_fn(format!("alt{arity}"), arity, 2, 2, usize::MAX, |t| {
        let s: i64 = t
            .iter()
            .enumerate()
            .map(|(i, &a)| if i % 2 == 0 { a as i64 } else { -(a as i64) })
            .sum();
        usize::from(s > 0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_shape() {
        let t = example_template();
        assert_eq!((t.a.domain_size(), t.b.domain_size()), (7, 7));
        assert_eq!(t.a.relation(0).len(), 3);
        assert_eq!(t.b.relation(0).len(), 6);
        assert_eq!(t.a.relation(1).len(), 5);
        assert_eq!(t.witness.map, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn example_values() {
        let f = ExamplePolymorphism { arity: 3 };
        assert_eq!(f.eval(&[0, 0, 1]), 0);
        assert_eq!(f.eval(&[1, 0, 0]), 1);
        assert_eq!(f.eval(&[4, 4, 5]), 4);
        assert_eq!(f.eval(&[5, 4, 6]), 5);
        assert_eq!(ExamplePolymorphism { arity: 2 }.eval(&[0, 3]), 0);
        assert_eq!(f.eval_runs(&[(4, 2), (5, 1)]), 4);
        assert_eq!(f.eval_runs(&[(1, 0), (0, 2), (1, 1)]), 0);
    }

    #[test]
    fn alternating_threshold() {
        let f = aip_polymorphism(3).unwrap();
        assert_eq!(f.eval(&[1, 0, 0]), 1);
        assert_eq!(f.eval(&[0, 1, 0]), 0);
        let id = aip_polymorphism(1).unwrap();
        assert_eq!(id.table(), &[0, 1]);
        assert!(aip_polymorphism(2).is_err());
    }
}
