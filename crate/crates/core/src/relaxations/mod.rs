//! BLP, AIP and BLP+AIP over an instance `X` and template side `A`.
//!
//! One variable per `(R, x in R^X, a in R^A)`, ordered lexicographically by
//! symbol, constraint index, assignment index. Every structure is augmented
//! with the unary domain relation `__u` on entry, so callers may pass plain
//! structures.

mod check;

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use num_bigint::BigInt;

use crate::exactmath::{
    integer_solve, lp_feasible, relative_interior_point_with, InteriorStrategy, IntegerSystem,
    LpProblem, Rational, VarLabel,
};
use crate::structures::{check_same_signature, unary_symbol, with_unary, RelationalStructure, StructureError};

pub use check::{check_aip_solution, check_blp_point};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelaxError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("fixing refers to unknown tuple: symbol {symbol}, constraint {constraint}, assignment {assignment}")]
    UnknownFixing { symbol: usize, constraint: usize, assignment: usize },
}

/// Pins `lambda_{x,R}(a)` to 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fixing {
    pub symbol: usize,
    pub constraint: usize,
    pub assignment: usize,
    pub value: bool,
}

impl Fixing {
    pub fn one(symbol: usize, constraint: usize, assignment: usize) -> Self {
        Fixing { symbol, constraint, assignment, value: true }
    }

    pub fn zero(symbol: usize, constraint: usize, assignment: usize) -> Self {
        Fixing { symbol, constraint, assignment, value: false }
    }
}

/// 0/1 matrix with a column per tuple of `U` holding a single 1 in the row
/// of the tuple's `i`-th entry (0-based `i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalMatrix {
    pub rows: usize,
    pub entries: Vec<Vec<u8>>,
}

impl MarginalMatrix {
    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn apply(&self, xi: &[Rational]) -> Vec<Rational> {
        assert_eq!(xi.len(), self.cols(), "dimension mismatch");
        self.entries
            .iter()
            .map(|row| row.iter().zip(xi).filter(|(e, _)| **e == 1).map(|(_, x)| x).sum())
            .collect()
    }
}

pub fn marginal_matrix(
    u: &[Vec<usize>],
    domain_size: usize,
    i: usize,
) -> Result<MarginalMatrix, String> {
    let mut entries = vec![vec![0u8; u.len()]; domain_size];
    for (col, t) in u.iter().enumerate() {
        let &c = t
            .get(i)
            .ok_or_else(|| format!("coordinate {i} out of range for a tuple of length {}", t.len()))?;
        if c >= domain_size {
            return Err(format!("element {c} outside domain of size {domain_size}"));
        }
        entries[c][col] = 1;
    }
    Ok(MarginalMatrix { rows: domain_size, entries })
}

/// Instrumented solve counts. With auditing on, every returned BLP point
/// and AIP solution is re-substituted into the original equalities.
#[derive(Debug, Default)]
pub struct Counters {
    blp: AtomicUsize,
    aip: AtomicUsize,
    audit: AtomicBool,
    audited: AtomicUsize,
    audit_failures: AtomicUsize,
}

impl Counters {
    pub fn blp_calls(&self) -> usize {
        self.blp.load(Ordering::Relaxed)
    }

    pub fn aip_calls(&self) -> usize {
        self.aip.load(Ordering::Relaxed)
    }

    pub fn audited(&self) -> usize {
        self.audited.load(Ordering::Relaxed)
    }

    pub fn audit_failures(&self) -> usize {
        self.audit_failures.load(Ordering::Relaxed)
    }

    fn auditing(&self) -> bool {
        self.audit.load(Ordering::Relaxed)
    }

    fn record_audit(&self, ok: bool) {
        self.audited.fetch_add(1, Ordering::Relaxed);
        if !ok {
            self.audit_failures.fetch_add(1, Ordering::Relaxed);
        }
    }

    fn bump_blp(&self) {
        self.blp.fetch_add(1, Ordering::Relaxed);
    }

    fn bump_aip(&self) {
        self.aip.fetch_add(1, Ordering::Relaxed);
    }
}

/// Variable layout and equality rows shared by BLP and AIP of one `(X, A)`.
#[derive(Debug)]
pub struct Skeleton {
    x: RelationalStructure,
    a: RelationalStructure,
    unary: usize,
    /// First variable of each `(symbol, constraint)`.
    offsets: Vec<Vec<usize>>,
    labels: Vec<VarLabel>,
    /// Integer rows: normalization then marginals.
    rows: Vec<(Vec<(usize, i64)>, i64)>,
    counters: Counters,
}

impl Skeleton {
    pub fn new(x: &RelationalStructure, a: &RelationalStructure) -> Result<Self, RelaxError> {
        check_same_signature(x, a)?;
        let x = with_unary(x);
        let a = with_unary(a);
        let unary = unary_symbol(&x).expect("augmented");
        let sig = x.signature().clone();

        let mut offsets = Vec::with_capacity(sig.len());
        let mut labels = Vec::new();
        for s in 0..sig.len() {
            let na = a.relation(s).len();
            let mut per = Vec::with_capacity(x.relation(s).len());
            for ci in 0..x.relation(s).len() {
                per.push(labels.len());
                labels.extend((0..na).map(|ai| VarLabel { symbol: s, constraint: ci, assignment: ai }));
            }
            offsets.push(per);
        }

        // __u^X lists (v) for v in order, __u^A lists (a) in order.
        let unary_var = |v: usize, val: usize| offsets[unary][v] + val;
        let mut rows = Vec::new();
        for s in 0..sig.len() {
            for &off in &offsets[s] {
                let na = a.relation(s).len();
                rows.push(((off..off + na).map(|j| (j, 1)).collect(), 1));
            }
        }
        for s in 0..sig.len() {
            if s == unary {
                continue;
            }
            let ra = a.relation(s);
            for (ci, xt) in x.relation(s).iter().enumerate() {
                let off = offsets[s][ci];
                for (i, &xi) in xt.iter().enumerate() {
                    for val in 0..a.domain_size() {
                        let mut coeffs: Vec<(usize, i64)> = ra
                            .iter()
                            .enumerate()
                            .filter(|(_, at)| at[i] == val)
                            .map(|(ai, _)| (off + ai, 1))
                            .collect();
                        coeffs.push((unary_var(xi, val), -1));
                        rows.push((coeffs, 0));
                    }
                }
            }
        }
        Ok(Skeleton { x, a, unary, offsets, labels, rows, counters: Counters::default() })
    }

    /// Augmented instance.
    pub fn x(&self) -> &RelationalStructure {
        &self.x
    }

    /// Augmented template side.
    pub fn a(&self) -> &RelationalStructure {
        &self.a
    }

    pub fn unary_symbol(&self) -> usize {
        self.unary
    }

    pub fn num_vars(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[VarLabel] {
        &self.labels
    }

    pub fn var(&self, symbol: usize, constraint: usize, assignment: usize) -> usize {
        self.offsets[symbol][constraint] + assignment
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    pub fn set_audit(&self, on: bool) {
        self.counters.audit.store(on, Ordering::Relaxed);
    }

    fn audit_blp(&self, point: &[Rational], fixings: &[Fixing]) {
        if self.counters.auditing() {
            self.counters.record_audit(check_blp_point(&self.x, &self.a, &self.labels, point, fixings));
        }
    }

    /// `g = sum_R |R^X| |R^A|`, the number of variables.
    pub fn g(&self) -> usize {
        self.num_vars()
    }

    fn check_fixing(&self, f: &Fixing) -> Result<usize, RelaxError> {
        let bad = RelaxError::UnknownFixing {
            symbol: f.symbol,
            constraint: f.constraint,
            assignment: f.assignment,
        };
        if f.symbol >= self.offsets.len()
            || f.constraint >= self.offsets[f.symbol].len()
            || f.assignment >= self.a.relation(f.symbol).len()
        {
            return Err(bad);
        }
        Ok(self.var(f.symbol, f.constraint, f.assignment))
    }

    pub fn blp(&self, fixings: &[Fixing]) -> Result<LpProblem, RelaxError> {
        let mut p = LpProblem::with_labels(self.labels.clone());
        for (coeffs, rhs) in &self.rows {
            p.add_equality(
                coeffs.iter().map(|&(j, c)| (j, Rational::from_int(c))).collect(),
                Rational::from_int(*rhs),
            );
        }
        for f in fixings {
            let j = self.check_fixing(f)?;
            p.fix(j, if f.value { Rational::one() } else { Rational::zero() });
        }
        Ok(p)
    }

    pub fn aip(&self, zero_set: &[usize]) -> IntegerSystem {
        let mut s = IntegerSystem::new(self.num_vars());
        s.labels = self.labels.clone();
        for (coeffs, rhs) in &self.rows {
            s.add_equality(coeffs.iter().map(|&(j, c)| (j, BigInt::from(c))).collect(), BigInt::from(*rhs));
        }
        for &j in zero_set {
            s.force_zero(j);
        }
        s
    }

    /// Variables of constraint `(symbol, constraint)` other than `assignment`.
    fn siblings(&self, symbol: usize, constraint: usize, assignment: usize) -> impl Iterator<Item = usize> + '_ {
        let off = self.offsets[symbol][constraint];
        (0..self.a.relation(symbol).len()).filter(move |&ai| ai != assignment).map(move |ai| off + ai)
    }

    pub fn blp_point(&self, fixings: &[Fixing]) -> Result<Option<Vec<Rational>>, RelaxError> {
        let p = self.blp(fixings)?;
        self.counters.bump_blp();
        let point = lp_feasible(&p);
        if let Some(pt) = &point {
            self.audit_blp(pt, fixings);
        }
        Ok(point)
    }

    pub fn blp_feasible(&self, fixings: &[Fixing]) -> Result<bool, RelaxError> {
        Ok(self.blp_point(fixings)?.is_some())
    }

    pub fn aip_solution(&self, zero_set: &[usize]) -> Option<Vec<BigInt>> {
        self.counters.bump_aip();
        let tau = integer_solve(&self.aip(zero_set));
        if let (Some(t), true) = (&tau, self.counters.auditing()) {
            let triples: Vec<(usize, usize, usize)> = zero_set
                .iter()
                .map(|&j| {
                    let l = &self.labels[j];
                    (l.symbol, l.constraint, l.assignment)
                })
                .collect();
            self.counters.record_audit(check_aip_solution(&self.x, &self.a, &self.labels, t, &triples));
        }
        tau
    }

    pub fn blp_aip(&self, fixings: &[Fixing]) -> Result<bool, RelaxError> {
        self.blp_aip_with(fixings, InteriorStrategy::default())
    }

    pub fn blp_aip_with(&self, fixings: &[Fixing], strategy: InteriorStrategy) -> Result<bool, RelaxError> {
        Ok(self.blp_aip_solution(fixings, strategy)?.is_some())
    }

    /// Relative-interior BLP point, then AIP on its support.
    pub fn blp_aip_solution(
        &self,
        fixings: &[Fixing],
        strategy: InteriorStrategy,
    ) -> Result<Option<Vec<BigInt>>, RelaxError> {
        let p = self.blp(fixings)?;
        self.counters.bump_blp();
        let Some(point) = relative_interior_point_with(&p, strategy) else {
            return Ok(None);
        };
        self.audit_blp(&point, fixings);
        let mut zero = vec![false; self.num_vars()];
        for (z, v) in zero.iter_mut().zip(&point) {
            *z = v.is_zero();
        }
        for f in fixings {
            if f.value {
                for j in self.siblings(f.symbol, f.constraint, f.assignment) {
                    zero[j] = true;
                }
            } else {
                zero[self.var(f.symbol, f.constraint, f.assignment)] = true;
            }
        }
        let zero_set: Vec<usize> = (0..zero.len()).filter(|&j| zero[j]).collect();
        Ok(self.aip_solution(&zero_set))
    }
}

pub fn build_blp(
    x: &RelationalStructure,
    a: &RelationalStructure,
    fixings: &[Fixing],
) -> Result<LpProblem, RelaxError> {
    Skeleton::new(x, a)?.blp(fixings)
}

/// `zero_set` holds `(symbol, constraint, assignment)` triples.
pub fn build_aip(
    x: &RelationalStructure,
    a: &RelationalStructure,
    zero_set: &[(usize, usize, usize)],
) -> Result<IntegerSystem, RelaxError> {
    let sk = Skeleton::new(x, a)?;
    let vars = zero_set
        .iter()
        .map(|&(s, c, v)| sk.check_fixing(&Fixing::zero(s, c, v)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(sk.aip(&vars))
}

pub fn blp_accepts(x: &RelationalStructure, a: &RelationalStructure) -> Result<bool, RelaxError> {
    Skeleton::new(x, a)?.blp_feasible(&[])
}

pub fn aip_accepts(x: &RelationalStructure, a: &RelationalStructure) -> Result<bool, RelaxError> {
    Ok(Skeleton::new(x, a)?.aip_solution(&[]).is_some())
}

pub fn blp_aip_accepts(
    x: &RelationalStructure,
    a: &RelationalStructure,
    fixings: &[Fixing],
) -> Result<bool, RelaxError> {
    Skeleton::new(x, a)?.blp_aip(fixings)
}
