use std::fmt;

use super::MinionError;
use crate::exactmath::Rational;

/// `L x aleph_0` rational matrix stored as its head columns; every column
/// past the head equals the last head column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EvcMatrix {
    rows: usize,
    cols: Vec<Vec<Rational>>,
}

impl EvcMatrix {
    /// Builds from head columns and drops trailing duplicates of the tail.
    pub fn new(rows: usize, cols: Vec<Vec<Rational>>) -> Result<Self, MinionError> {
        if cols.is_empty() {
            return Err(MinionError::Shape("at least one column is required".into()));
        }
        if let Some(c) = cols.iter().find(|c| c.len() != rows) {
            return Err(MinionError::Shape(format!("column of length {} in a {rows}-row matrix", c.len())));
        }
        let mut m = EvcMatrix { rows, cols };
        m.canonicalize();
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self, MinionError> {
        let t = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != t) {
            return Err(MinionError::Shape("ragged rows".into()));
        }
        let cols = (0..t).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect();
        EvcMatrix::new(rows.len(), cols)
    }

    /// `e_j 1^T`.
    pub fn constant_unit(rows: usize, j: usize) -> Self {
        EvcMatrix { rows, cols: vec![unit(rows, j)] }
    }

    fn canonicalize(&mut self) {
        while self.cols.len() >= 2 && self.cols[self.cols.len() - 1] == self.cols[self.cols.len() - 2] {
            self.cols.pop();
        }
    }

    pub fn is_canonical(&self) -> bool {
        let mut c = self.clone();
        c.canonicalize();
        c.cols.len() == self.cols.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Head width `t`: columns `t, t+1, ...` (0-based `t-1, ...`) coincide.
    pub fn width(&self) -> usize {
        self.cols.len()
    }

    /// Column `i` (0-based), any `i`.
    pub fn column(&self, i: usize) -> &[Rational] {
        &self.cols[i.min(self.cols.len() - 1)]
    }

    pub fn head(&self) -> &[Vec<Rational>] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.column(c)[r]
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.cols.iter().all(|c| c[r].is_zero())
    }

    /// For each row, the first column equal to the matching unit vector.
    pub fn skeleton_witnesses(&self) -> Vec<Option<usize>> {
        let mut w = vec![None; self.rows];
        for (i, c) in self.cols.iter().enumerate() {
            if let Some(j) = unit_index(c) {
                if w[j].is_none() {
                    w[j] = Some(i);
                }
            }
        }
        w
    }

    /// Every row is zero or witnessed by a unit column.
    pub fn is_skeletal(&self) -> bool {
        let w = self.skeleton_witnesses();
        (0..self.rows).all(|r| w[r].is_some() || self.row_is_zero(r))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.cols.iter().flatten().all(|x| !x.is_negative())
    }

    pub fn columns_sum_to_one(&self) -> bool {
        self.cols.iter().all(|c| c.iter().sum::<Rational>().is_one())
    }

    /// `M v` for a finitely supported `v` (entries past `v.len()` are 0).
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.rows];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, m) in out.iter_mut().zip(self.column(i)) {
                if !m.is_zero() {
                    *o += &(m * vi);
                }
            }
        }
        out
    }

    /// `P_pi M` for `pi: [L] -> [new_rows]`: row `j` is the sum of rows in
    /// the fibre of `j`.
    pub fn minor(&self, pi: &[usize], new_rows: usize) -> Result<EvcMatrix, MinionError> {
        check_map(pi, self.rows, new_rows)?;
        let cols = self
            .cols
            .iter()
            .map(|c| {
                let mut out = vec![Rational::zero(); new_rows];
                for (i, x) in c.iter().enumerate() {
                    out[pi[i]] += x;
                }
                out
            })
            .collect();
        EvcMatrix::new(new_rows, cols)
    }
}

pub(crate) fn unit(rows: usize, j: usize) -> Vec<Rational> {
    (0..rows).map(|r| if r == j { Rational::one() } else { Rational::zero() }).collect()
}

pub(crate) fn unit_index(c: &[Rational]) -> Option<usize> {
    let mut found = None;
    for (i, x) in c.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        if !x.is_one() || found.is_some() {
            return None;
        }
        found = Some(i);
    }
    found
}

pub(crate) fn check_map(pi: &[usize], from: usize, to: usize) -> Result<(), MinionError> {
    if pi.len() != from || pi.iter().any(|&j| j >= to) {
        return Err(MinionError::Shape(format!("minor map must send {from} coordinates into 0..{to}")));
    }
    Ok(())
}

impl fmt::Debug for EvcMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EvcMatrix[")?;
        for r in 0..self.rows {
            let row: Vec<String> = self.cols.iter().map(|c| c[r].to_string()).collect();
            write!(f, "{}{} ..", if r == 0 { "" } else { "; " }, row.join(" "))?;
        }
        write!(f, "]")
    }
}
