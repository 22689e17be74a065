//! Presolve plus a dense two-phase primal simplex with Bland's rule.
//!
//! Presolve fixes every variable whose value is forced by bound propagation
//! on a single row (singleton rows, rows whose right-hand side equals the
//! row's minimum or maximum over the box). What remains is shifted to
//! `x >= 0`; upper bounds that are not implied by a nonnegative row get an
//! explicit slack row.

use super::lp::{LpError, LpProblem};
use super::rational::Rational;

pub(crate) struct Presolved {
    /// Fixed value for presolved variables.
    fixed: Vec<Option<Rational>>,
    /// Column for each free variable.
    column: Vec<Option<usize>>,
    /// Lower bound of each free variable (column value is offset from it).
    shift: Vec<Rational>,
    /// Original variable of each structural column that is not a slack.
    col_var: Vec<Option<usize>>,
    rows: Vec<Vec<(usize, Rational)>>,
    rhs: Vec<Rational>,
}

fn row_range(
    coeffs: &[(usize, Rational)],
    lower: &[Rational],
    upper: &[Rational],
) -> (Rational, Rational) {
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for (j, c) in coeffs {
        if c.is_positive() {
            lo += c * &lower[*j];
            hi += c * &upper[*j];
        } else {
            lo += c * &upper[*j];
            hi += c * &lower[*j];
        }
    }
    (lo, hi)
}

impl Presolved {
    pub(crate) fn new(p: &LpProblem) -> Option<Self> {
        let n = p.num_vars;
        let mut fixed: Vec<Option<Rational>> = vec![None; n];
        for j in 0..n {
            match p.lower[j].cmp(&p.upper[j]) {
                std::cmp::Ordering::Greater => return None,
                std::cmp::Ordering::Equal => fixed[j] = Some(p.lower[j].clone()),
                std::cmp::Ordering::Less => {}
            }
        }

        // Merge duplicate coefficients, drop zeros.
        let mut rows: Vec<(Vec<(usize, Rational)>, Rational)> = p
            .equalities
            .iter()
            .map(|r| {
                let mut coeffs = r.coeffs.clone();
                coeffs.sort_by_key(|(j, _)| *j);
                let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(coeffs.len());
                for (j, c) in coeffs {
                    match merged.last_mut() {
                        Some((k, acc)) if *k == j => *acc += c,
                        _ => merged.push((j, c)),
                    }
                }
                merged.retain(|(_, c)| !c.is_zero());
                (merged, r.rhs.clone())
            })
            .collect();

        loop {
            let mut changed = false;
            let mut kept = Vec::with_capacity(rows.len());
            for (coeffs, mut rhs) in rows {
                let mut live = Vec::with_capacity(coeffs.len());
                for (j, c) in coeffs {
                    match &fixed[j] {
                        Some(v) => rhs -= &c * v,
                        None => live.push((j, c)),
                    }
                }
                if live.is_empty() {
                    if !rhs.is_zero() {
                        return None;
                    }
                    changed = true;
                    continue;
                }
                if live.len() == 1 {
                    let (j, c) = &live[0];
                    let v = &rhs / c;
                    if v < p.lower[*j] || v > p.upper[*j] {
                        return None;
                    }
                    fixed[*j] = Some(v);
                    changed = true;
                    continue;
                }
                let (lo, hi) = row_range(&live, &p.lower, &p.upper);
                if rhs < lo || rhs > hi {
                    return None;
                }
                if rhs == lo || rhs == hi {
                    let at_min = rhs == lo;
                    for (j, c) in &live {
                        let take_lower = c.is_positive() == at_min;
                        let v = if take_lower { &p.lower[*j] } else { &p.upper[*j] };
                        fixed[*j] = Some(v.clone());
                    }
                    changed = true;
                    continue;
                }
                kept.push((live, rhs));
            }
            rows = kept;
            if !changed {
                break;
            }
        }

        let mut column = vec![None; n];
        let mut shift = vec![Rational::zero(); n];
        let mut col_var = Vec::new();
        for j in 0..n {
            if fixed[j].is_none() {
                column[j] = Some(col_var.len());
                shift[j] = p.lower[j].clone();
                col_var.push(Some(j));
            }
        }

        // Shift to x' = x - lower >= 0 and renumber.
        let mut out_rows: Vec<Vec<(usize, Rational)>> = Vec::with_capacity(rows.len());
        let mut out_rhs = Vec::with_capacity(rows.len());
        for (coeffs, mut rhs) in rows {
            let mut r = Vec::with_capacity(coeffs.len());
            for (j, c) in coeffs {
                rhs -= &c * &shift[j];
                r.push((column[j].unwrap(), c));
            }
            out_rows.push(r);
            out_rhs.push(rhs);
        }

        // Upper bounds: implied when some row with nonnegative coefficients
        // bounds the variable at or below its own upper bound.
        let mut implied = vec![false; col_var.len()];
        for (r, rhs) in out_rows.iter().zip(&out_rhs) {
            let sign = if r.iter().all(|(_, c)| c.is_positive()) {
                Rational::one()
            } else if r.iter().all(|(_, c)| c.is_negative()) {
                -Rational::one()
            } else {
                continue;
            };
            for (col, c) in r {
                let j = col_var[*col].unwrap();
                let cap = &(&sign * rhs) / &(&sign * c);
                if cap <= &p.upper[j] - &shift[j] {
                    implied[*col] = true;
                }
            }
        }
        let num_var_cols = col_var.len();
        for col in 0..num_var_cols {
            if !implied[col] {
                let j = col_var[col].unwrap();
                let slack = col_var.len();
                col_var.push(None);
                out_rows.push(vec![(col, Rational::one()), (slack, Rational::one())]);
                out_rhs.push(&p.upper[j] - &shift[j]);
            }
        }

        Some(Presolved { fixed, column, shift, col_var, rows: out_rows, rhs: out_rhs })
    }

    pub(crate) fn column_of(&self, var: usize) -> Option<usize> {
        self.column[var]
    }

    pub(crate) fn fixed_value(&self, var: usize) -> &Rational {
        self.fixed[var].as_ref().expect("variable is not fixed")
    }

    pub(crate) fn lift_column_value(&self, var: usize, col_value: &Rational) -> Rational {
        &self.shift[var] + col_value
    }

    pub(crate) fn num_columns(&self) -> usize {
        self.col_var.len()
    }

    /// Original-space point from column values.
    pub(crate) fn expand(&self, cols: &[Rational]) -> Vec<Rational> {
        (0..self.fixed.len())
            .map(|j| match (&self.fixed[j], self.column[j]) {
                (Some(v), _) => v.clone(),
                (None, Some(c)) => &self.shift[j] + &cols[c],
                (None, None) => unreachable!(),
            })
            .collect()
    }
}

/// Dense simplex tableau over `x >= 0` holding a feasible basis.
pub(crate) struct Tableau {
    ncols: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Basic column of each row; `ncols + i` marks the artificial of row `i`.
    basis: Vec<usize>,
    /// Reduced costs for the current objective (maximization).
    cost: Vec<Rational>,
}

impl Tableau {
    /// Runs phase one. `None` when the system is infeasible.
    pub(crate) fn phase_one(pre: &Presolved) -> Option<Self> {
        let ncols = pre.num_columns();
        let m = pre.rows.len();
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (r, b) in pre.rows.iter().zip(&pre.rhs) {
            let mut dense = vec![Rational::zero(); ncols];
            let flip = b.is_negative();
            for (c, v) in r {
                dense[*c] = if flip { -v } else { v.clone() };
            }
            rows.push(dense);
            rhs.push(if flip { -b } else { b.clone() });
        }
        let mut cost = vec![Rational::zero(); ncols];
        for row in &rows {
            for (c, v) in cost.iter_mut().zip(row) {
                if !v.is_zero() {
                    *c += v;
                }
            }
        }
        let basis = (0..m).map(|i| ncols + i).collect();
        let mut tab = Tableau { ncols, rows, rhs, basis, cost };
        tab.run().expect("phase one is bounded");

        if tab
            .basis
            .iter()
            .zip(&tab.rhs)
            .any(|(b, v)| *b >= ncols && !v.is_zero())
        {
            return None;
        }
        // Drive remaining (zero-valued) artificials out; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= ncols {
                match (0..ncols).find(|&c| !tab.rows[i][c].is_zero()) {
                    Some(c) => {
                        tab.pivot(i, c);
                        i += 1;
                    }
                    None => {
                        tab.rows.swap_remove(i);
                        tab.rhs.swap_remove(i);
                        tab.basis.swap_remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        Some(tab)
    }

    pub(crate) fn point(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.ncols];
        for (b, v) in self.basis.iter().zip(&self.rhs) {
            if *b < self.ncols {
                x[*b] = v.clone();
            }
        }
        x
    }

    /// Maximizes a single column from the current basis; returns its optimum.
    pub(crate) fn maximize_column(&mut self, col: usize) -> Result<Rational, LpError> {
        let mut cost = vec![Rational::zero(); self.ncols];
        cost[col] = Rational::one();
        for (i, b) in self.basis.iter().enumerate() {
            if *b == col {
                // c_B B^-1 A = row i for the basic target column
                for (c, v) in cost.iter_mut().zip(&self.rows[i]) {
                    if !v.is_zero() {
                        *c -= v;
                    }
                }
            }
        }
        self.cost = cost;
        self.run()?;
        Ok(self
            .basis
            .iter()
            .position(|b| *b == col)
            .map(|i| self.rhs[i].clone())
            .unwrap_or_else(Rational::zero))
    }

    /// Bland's rule: least entering index, least leaving basic index.
    fn run(&mut self) -> Result<(), LpError> {
        loop {
            let entering = match self.cost.iter().position(|c| c.is_positive()) {
                Some(j) => j,
                None => return Ok(()),
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][entering];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((i, _)) => self.pivot(i, entering),
                None => return Err(LpError::Unbounded),
            }
        }
    }

    fn pivot(&mut self, p: usize, col: usize) {
        let piv = self.rows[p][col].clone();
        if !piv.is_one() {
            let inv = piv.recip();
            for v in self.rows[p].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
            self.rhs[p] = &self.rhs[p] * &inv;
        }
        let nz: Vec<usize> = (0..self.ncols)
            .filter(|&c| !self.rows[p][c].is_zero())
            .collect();
        let prow = std::mem::take(&mut self.rows[p]);
        let prhs = self.rhs[p].clone();
        for i in 0..self.rows.len() {
            if i == p {
                continue;
            }
            let f = self.rows[i][col].clone();
            if f.is_zero() {
                continue;
            }
            let row = &mut self.rows[i];
            for &c in &nz {
                row[c].sub_mul_assign(&f, &prow[c]);
            }
            self.rhs[i].sub_mul_assign(&f, &prhs);
        }
        let f = self.cost[col].clone();
        if !f.is_zero() {
            for &c in &nz {
                self.cost[c].sub_mul_assign(&f, &prow[c]);
            }
        }
        self.rows[p] = prow;
        self.basis[p] = col;
    }
}
