//! Integer matrices, column-style Hermite normal form, and integer
//! feasibility of affine systems.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lp::VarLabel;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let data = rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Column-echelon check: each nonzero column's leading row strictly
    /// increases, leading entries are positive, and entries left of a pivot
    /// lie in `[0, pivot)`.
    pub fn is_column_hnf(&self) -> bool {
        let mut last_row: Option<usize> = None;
        let mut seen_zero_col = false;
        for c in 0..self.cols {
            let lead = (0..self.rows).find(|&r| !self.get(r, c).is_zero());
            match lead {
                None => seen_zero_col = true,
                Some(r) => {
                    if seen_zero_col || last_row.is_some_and(|l| r <= l) {
                        return false;
                    }
                    let p = self.get(r, c);
                    if !p.is_positive() {
                        return false;
                    }
                    if (0..c).any(|j| {
                        let v = self.get(r, j);
                        v.is_negative() || v >= p
                    }) {
                        return false;
                    }
                    last_row = Some(r);
                }
            }
        }
        true
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Column-major working copy for unimodular column operations.
struct Columns {
    h: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
}

impl Columns {
    /// `col[dst] -= q * col[src]` on both H and U.
    fn axpy(&mut self, dst: usize, q: &BigInt, src: usize) {
        if q.is_zero() {
            return;
        }
        for side in [&mut self.h, &mut self.u] {
            let (s, d) = if src < dst {
                let (a, b) = side.split_at_mut(dst);
                (&a[src], &mut b[0])
            } else {
                let (a, b) = side.split_at_mut(src);
                (&b[0], &mut a[dst])
            };
            for (x, y) in d.iter_mut().zip(s) {
                if !y.is_zero() {
                    *x -= q * y;
                }
            }
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.h.swap(a, b);
        self.u.swap(a, b);
    }

    fn negate(&mut self, c: usize) {
        for x in self.h[c].iter_mut().chain(self.u[c].iter_mut()) {
            *x = -std::mem::take(x);
        }
    }
}

/// Hermite decomposition `H = M U`, `U` unimodular.
#[derive(Debug, Clone)]
pub struct Hermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// `(row, column)` of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
}

/// Column-style Hermite normal form with pivot-row reduction of earlier
/// columns after each pivot.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let d = hermite(m);
    (d.h, d.u)
}

pub fn hermite(m: &IntMatrix) -> Hermite {
    let (rows, cols) = (m.rows, m.cols);
    let mut w = Columns {
        h: (0..cols).map(|c| (0..rows).map(|r| m.get(r, c).clone()).collect()).collect(),
        u: (0..cols)
            .map(|c| (0..cols).map(|r| if r == c { BigInt::one() } else { BigInt::zero() }).collect())
            .collect(),
    };
    let mut pivots = Vec::new();
    let mut k = 0;
    for r in 0..rows {
        if k == cols {
            break;
        }
        loop {
            let best = (k..cols)
                .filter(|&c| !w.h[c][r].is_zero())
                .min_by(|&a, &b| w.h[a][r].abs().cmp(&w.h[b][r].abs()));
            let Some(best) = best else { break };
            w.swap(k, best);
            let mut done = true;
            for c in k + 1..cols {
                if w.h[c][r].is_zero() {
                    continue;
                }
                let q = w.h[c][r].div_floor(&w.h[k][r]);
                w.axpy(c, &q, k);
                if !w.h[c][r].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if w.h.get(k).is_none_or(|col| col[r].is_zero()) {
            continue;
        }
        if w.h[k][r].is_negative() {
            w.negate(k);
        }
        for c in 0..k {
            let q = w.h[c][r].div_floor(&w.h[k][r]);
            w.axpy(c, &q, k);
        }
        pivots.push((r, k));
        k += 1;
    }
    let mut h = IntMatrix::zeros(rows, cols);
    let mut u = IntMatrix::zeros(cols, cols);
    for c in 0..cols {
        for r in 0..rows {
            h.set(r, c, std::mem::take(&mut w.h[c][r]));
        }
        for r in 0..cols {
            u.set(r, c, std::mem::take(&mut w.u[c][r]));
        }
    }
    Hermite { h, u, pivots }
}

/// Integer equality system `E tau = d` with some variables pinned to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSystem {
    pub num_vars: usize,
    pub labels: Vec<VarLabel>,
    pub equalities: Vec<(Vec<(usize, BigInt)>, BigInt)>,
    pub zero_set: Vec<bool>,
}

impl IntegerSystem {
    pub fn new(num_vars: usize) -> Self {
        IntegerSystem {
            num_vars,
            labels: vec![VarLabel::default(); num_vars],
            equalities: Vec::new(),
            zero_set: vec![false; num_vars],
        }
    }

    pub fn add_equality(&mut self, coeffs: Vec<(usize, BigInt)>, rhs: BigInt) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.num_vars));
        self.equalities.push((coeffs, rhs));
    }

    pub fn force_zero(&mut self, var: usize) {
        self.zero_set[var] = true;
    }

    pub fn is_satisfied_by(&self, tau: &[BigInt]) -> bool {
        tau.len() == self.num_vars
            && tau.iter().zip(&self.zero_set).all(|(t, z)| !*z || t.is_zero())
            && self.equalities.iter().all(|(coeffs, rhs)| {
                coeffs.iter().map(|(j, c)| c * &tau[*j]).sum::<BigInt>() == *rhs
            })
    }
}

/// One integer solution, or `None` when the right-hand side is outside the
/// column lattice of the system restricted to non-pinned variables.
pub fn integer_solve(s: &IntegerSystem) -> Option<Vec<BigInt>> {
    let free: Vec<usize> = (0..s.num_vars).filter(|&j| !s.zero_set[j]).collect();
    let mut col_of = vec![usize::MAX; s.num_vars];
    for (c, &j) in free.iter().enumerate() {
        col_of[j] = c;
    }
    let m = s.equalities.len();
    let mut e = IntMatrix::zeros(m, free.len());
    let mut d = Vec::with_capacity(m);
    for (r, (coeffs, rhs)) in s.equalities.iter().enumerate() {
        for (j, c) in coeffs {
            if col_of[*j] != usize::MAX {
                let cur = e.get(r, col_of[*j]) + c;
                e.set(r, col_of[*j], cur);
            }
        }
        d.push(rhs.clone());
    }
    let dec = hermite(&e);
    let y = solve_hermite(&dec, &d)?;
    let reduced = dec.u.mul_vec(&y);
    let mut tau = vec![BigInt::zero(); s.num_vars];
    for (c, &j) in free.iter().enumerate() {
        tau[j] = reduced[c].clone();
    }
    Some(tau)
}

/// Forward substitution on `H y = d`.
fn solve_hermite(dec: &Hermite, d: &[BigInt]) -> Option<Vec<BigInt>> {
    let h = &dec.h;
    let mut y = vec![BigInt::zero(); h.cols()];
    let mut next = dec.pivots.iter().peekable();
    let mut determined = 0;
    for (r, rhs) in d.iter().enumerate() {
        let mut val = rhs.clone();
        for (j, yj) in y.iter().enumerate().take(determined) {
            let a = h.get(r, j);
            if !a.is_zero() {
                val -= a * yj;
            }
        }
        match next.peek() {
            Some(&&(pr, pc)) if pr == r => {
                let (q, rem) = val.div_rem(h.get(r, pc));
                if !rem.is_zero() {
                    return None;
                }
                y[pc] = q;
                determined = pc + 1;
                next.next();
            }
            _ => {
                if !val.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(y)
}
