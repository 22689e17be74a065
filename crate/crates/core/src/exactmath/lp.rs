//! Exact linear programs over box-bounded variables.

use std::fmt::Write as _;

use super::rational::Rational;
use super::simplex::{Presolved, Tableau};

/// Provenance of an LP/IP column: relation symbol, constraint tuple index in
/// the instance, assignment tuple index in the template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VarLabel {
    pub symbol: usize,
    pub constraint: usize,
    pub assignment: usize,
}

/// One sparse equality `sum coeff * x = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRow {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

impl LinearRow {
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, c)| c * &point[*j]).sum()
    }
}

/// Feasibility region `{x : lower <= x <= upper, rows hold}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub num_vars: usize,
    pub labels: Vec<VarLabel>,
    pub equalities: Vec<LinearRow>,
    pub lower: Vec<Rational>,
    pub upper: Vec<Rational>,
}

impl LpProblem {
    /// `num_vars` variables, each in `[0, 1]`, no equalities.
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            labels: vec![VarLabel::default(); num_vars],
            equalities: Vec::new(),
            lower: vec![Rational::zero(); num_vars],
            upper: vec![Rational::one(); num_vars],
        }
    }

    pub fn with_labels(labels: Vec<VarLabel>) -> Self {
        let mut p = Self::new(labels.len());
        p.labels = labels;
        p
    }

    pub fn add_equality(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.num_vars));
        self.equalities.push(LinearRow { coeffs, rhs });
    }

    pub fn fix(&mut self, var: usize, value: Rational) {
        self.lower[var] = value.clone();
        self.upper[var] = value;
    }

    pub fn set_bounds(&mut self, var: usize, lower: Rational, upper: Rational) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn is_fixed(&self, var: usize) -> bool {
        self.lower[var] == self.upper[var]
    }

    /// Exact membership test for a candidate point.
    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        point.len() == self.num_vars
            && point
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
            && self.equalities.iter().all(|r| r.evaluate(point) == r.rhs)
    }

    /// Plain-text dump; columns are labelled `R:constraint:assignment`.
    pub fn dump(&self, symbol_name: impl Fn(usize) -> String) -> String {
        let label = |j: usize| {
            let l = &self.labels[j];
            format!("{}:{}:{}", symbol_name(l.symbol), l.constraint, l.assignment)
        };
        let mut out = String::new();
        let _ = writeln!(out, "lp vars {} rows {}", self.num_vars, self.equalities.len());
        for j in 0..self.num_vars {
            let _ = writeln!(out, "var {} {} [{}, {}]", j, label(j), self.lower[j], self.upper[j]);
        }
        for row in &self.equalities {
            let terms: Vec<String> = row
                .coeffs
                .iter()
                .map(|(j, c)| format!("{} {}", c, label(*j)))
                .collect();
            let _ = writeln!(out, "eq {} = {}", terms.join(" + "), row.rhs);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("infeasible")]
    Infeasible,
    #[error("objective unbounded")]
    Unbounded,
}

/// A feasible point, or `None` when the polytope is empty.
pub fn lp_feasible(p: &LpProblem) -> Option<Vec<Rational>> {
    let pre = Presolved::new(p)?;
    let tab = Tableau::phase_one(&pre)?;
    Some(pre.expand(&tab.point()))
}

/// Maximum of coordinate `var` over the polytope and an attaining point.
pub fn lp_maximize(p: &LpProblem, var: usize) -> Result<(Rational, Vec<Rational>), LpError> {
    let pre = Presolved::new(p).ok_or(LpError::Infeasible)?;
    let mut tab = Tableau::phase_one(&pre).ok_or(LpError::Infeasible)?;
    let value = match pre.column_of(var) {
        None => pre.fixed_value(var).clone(),
        Some(col) => {
            tab.maximize_column(col)?;
            let pt = pre.expand(&tab.point());
            pt[var].clone()
        }
    };
    Ok((value, pre.expand(&tab.point())))
}

/// How the relative-interior point is assembled from optimal vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InteriorStrategy {
    /// One maximizer per variable that is not identically zero, plus one
    /// feasible point, averaged uniformly.
    PerVariable,
    /// Like `PerVariable`, but a variable already positive in a collected
    /// point is not maximized again.
    #[default]
    Covering,
}

/// A feasible point whose zero coordinates are exactly the coordinates that
/// vanish on the whole polytope; `None` when infeasible.
pub fn relative_interior_point(p: &LpProblem) -> Option<Vec<Rational>> {
    relative_interior_point_with(p, InteriorStrategy::default())
}

pub fn relative_interior_point_with(
    p: &LpProblem,
    strategy: InteriorStrategy,
) -> Option<Vec<Rational>> {
    let pre = Presolved::new(p)?;
    let mut tab = Tableau::phase_one(&pre)?;
    let mut points = vec![pre.expand(&tab.point())];
    let mut covered: Vec<bool> = points[0].iter().map(|x| !x.is_zero()).collect();
    for var in 0..p.num_vars {
        let col = match pre.column_of(var) {
            Some(c) => c,
            None => continue,
        };
        if strategy == InteriorStrategy::Covering && covered[var] {
            continue;
        }
        // A bounded box cannot be unbounded; treat it as a hard bug if it is.
        let opt = tab
            .maximize_column(col)
            .expect("coordinate objective over a bounded polytope");
        let lifted = pre.lift_column_value(var, &opt);
        if lifted.is_zero() {
            continue;
        }
        let pt = pre.expand(&tab.point());
        for (c, x) in covered.iter_mut().zip(&pt) {
            *c |= !x.is_zero();
        }
        points.push(pt);
    }
    let k = Rational::from(points.len());
    let mut avg = vec![Rational::zero(); p.num_vars];
    for pt in &points {
        for (a, x) in avg.iter_mut().zip(pt) {
            *a += x;
        }
    }
    for a in avg.iter_mut() {
        *a = &*a / &k;
    }
    Some(avg)
}
