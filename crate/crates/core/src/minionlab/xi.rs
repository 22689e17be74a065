use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{ToPrimitive, Zero};

use super::element::MinionElement;
use super::MinionError;
use crate::exactmath::{common_denominator, Rational};
use crate::polymorph::{FiniteFunction, Operation, PolyError, TieMatrix};

/// `ceil(sqrt(||H||_1 * ||H||_inf))`.
pub fn sigma_hat(h: &TieMatrix) -> u64 {
    let col_max = (0..h.num_cols())
        .map(|j| h.rows().iter().map(|r| r[j].unsigned_abs()).sum::<u64>())
        .max()
        .unwrap_or(0);
    let row_max = h.rows().iter().map(|r| r.iter().map(|x| x.unsigned_abs()).sum::<u64>()).max().unwrap_or(0);
    let p = col_max * row_max;
    let s = p.sqrt();
    if s * s == p { s } else { s + 1 }
}

/// Smallest admissible `N = 2 (sigma_hat + 1) d^2 N'` with `N' v` integral.
pub fn regime_n(h: &TieMatrix, v: &[Rational], d: usize) -> BigInt {
    let n_prime = common_denominator(v);
    BigInt::from(2 * (sigma_hat(h) + 1)) * BigInt::from(d * d) * n_prime
}

/// Block sizes `alpha N (M v)_i + beta mu_i` where `c = alpha N + beta`.
pub fn xi_blocks(el: &MinionElement, v: &[Rational], n: &BigInt, c: &BigInt) -> Result<Vec<BigInt>, MinionError> {
    let (alpha, beta) = c.div_rem(n);
    let an = Rational::from(alpha * n);
    let beta = Rational::from(beta);
    let mv = el.m.mul_vec(v);
    let mut blocks = Vec::with_capacity(mv.len());
    for (i, x) in mv.iter().enumerate() {
        let s = &an * x + &beta * &Rational::from(el.mu[i]);
        match s.to_integer() {
            Some(b) if b >= BigInt::zero() => blocks.push(b),
            _ => return Err(MinionError::Regime(format!("block {i} has size {s}"))),
        }
    }
    if &blocks.iter().sum::<BigInt>() != c {
        return Err(MinionError::Regime("block sizes do not add up to the arity".into()));
    }
    Ok(blocks)
}

/// `f` with consecutive argument blocks identified; evaluated through
/// run-length encoding so `f` is never tabulated.
pub struct XiFunction<'f> {
    f: &'f dyn Operation,
    blocks: Vec<usize>,
}

impl XiFunction<'_> {
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn materialize(&self, name: impl Into<String>, budget: usize) -> Result<FiniteFunction, PolyError> {
        FiniteFunction::materialize(name, self, budget)
    }
}

impl Operation for XiFunction<'_> {
    fn arity(&self) -> usize {
        self.blocks.len()
    }

    fn domain_size(&self) -> usize {
        self.f.domain_size()
    }

    fn codomain_size(&self) -> usize {
        self.f.codomain_size()
    }

    fn eval(&self, args: &[usize]) -> usize {
        assert_eq!(args.len(), self.blocks.len(), "arity mismatch");
        let runs: Vec<(usize, usize)> = args.iter().copied().zip(self.blocks.iter().copied()).collect();
        self.f.eval_runs(&runs)
    }
}

/// Image of `el` under the level-`d` map into polymorphisms of arity
/// `f.arity()`. Checks membership in the level-`d` subminion, that `n` is a
/// multiple of `2 (sigma_hat + 1) d^2` whose quotient clears the
/// denominators of `v`, and `f.arity() >= n^2`.
pub fn xi_map<'f>(
    el: &MinionElement,
    f: &'f dyn Operation,
    h: &TieMatrix,
    v: &[Rational],
    d: usize,
    n: &BigInt,
) -> Result<XiFunction<'f>, MinionError> {
    if !el.in_c_d(d) {
        return Err(MinionError::NotInMinion(format!("element is outside level {d}")));
    }
    if h.num_cols() != f.domain_size() {
        return Err(MinionError::Shape("H and f disagree on the domain size".into()));
    }
    let base = BigInt::from(2 * (sigma_hat(h) + 1)) * BigInt::from(d * d);
    let (n_prime, rem) = n.div_rem(&base);
    if !rem.is_zero() || n_prime.is_zero() {
        return Err(MinionError::Regime(format!("N = {n} is not a positive multiple of {base}")));
    }
    let scaled = Rational::from(&n_prime);
    if v.iter().any(|x| !(x * &scaled).is_integer()) {
        return Err(MinionError::Regime(format!("N' = {n_prime} does not clear the denominators of v")));
    }
    let c = BigInt::from(f.arity());
    if c < n * n {
        return Err(MinionError::Regime(format!("arity {c} is below N^2 = {}", n * n)));
    }
    let blocks = xi_blocks(el, v, n, &c)?
        .into_iter()
        .map(|b| b.to_usize().expect("block fits the arity"))
        .collect();
    Ok(XiFunction { f, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minionlab::{EvcMatrix, MinionElement};
    use crate::polymorph::{example_tie_matrix, ExamplePolymorphism};

    #[test]
    fn sigma_of_example() {
        assert_eq!(sigma_hat(&example_tie_matrix()), 2);
        assert_eq!(sigma_hat(&TieMatrix::ones(3)), 2);
        assert_eq!(sigma_hat(&TieMatrix::diag(&[1, 1]).unwrap()), 1);
    }

    #[test]
    fn unary_element_gives_constant_block() {
        let el = MinionElement::new(EvcMatrix::constant_unit(1, 0), vec![1]).unwrap();
        let h = example_tie_matrix();
        let v = vec![Rational::one()];
        let n = regime_n(&h, &v, 1);
        assert_eq!(n, BigInt::from(6));
        let f = ExamplePolymorphism { arity: 40 };
        let g = xi_map(&el, &f, &h, &v, 1, &n).unwrap();
        assert_eq!(g.blocks(), &[40]);
        assert_eq!(g.eval(&[3]), 3);
        let short = ExamplePolymorphism { arity: 35 };
        assert!(matches!(xi_map(&el, &short, &h, &v, 1, &n), Err(MinionError::Regime(_))));
    }
}
