use std::fmt::Write as _;

use num_traits::Zero;

use super::function::{for_each_tuple, FiniteFunction, Operation};
use super::PolyError;
use crate::textio::{Lines, ParseError};

/// Occurrence count of each element of `0..domain_size` in `tuple`.
pub fn multiplicity_vector(tuple: &[usize], domain_size: usize) -> Vec<usize> {
    let mut m = vec![0; domain_size];
    for &a in tuple {
        m[a] += 1;
    }
    m
}

/// No nonzero entry equals another entry.
pub fn is_tieless<T: Zero + PartialEq>(v: &[T]) -> bool {
    tie_count(v) == 0
}

/// Ordered pairs `(i, i')`, `i != i'`, with `v_i = v_i' != 0`.
pub fn tie_count<T: Zero + PartialEq>(v: &[T]) -> usize {
    let mut ties = 0;
    for (i, a) in v.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        ties += v.iter().enumerate().filter(|&(j, b)| j != i && b == a).count();
    }
    ties
}

/// Nonnegative integer matrix with tieless columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TieMatrix {
    rows: Vec<Vec<i64>>,
    cols: usize,
}

impl TieMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, PolyError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || rows.iter().any(|r| r.len() != cols) {
            return Err(PolyError::SizeMismatch("tie matrix must be a nonempty rectangle".into()));
        }
        let m = TieMatrix { rows, cols };
        if !is_tie_matrix(&m.rows) {
            return Err(PolyError::NotATieMatrix);
        }
        Ok(m)
    }

    pub fn diag(entries: &[i64]) -> Result<Self, PolyError> {
        let n = entries.len();
        TieMatrix::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect())
                .collect(),
        )
    }

    /// The single all-ones row.
    pub fn ones(p: usize) -> Self {
        TieMatrix { rows: vec![vec![1; p]], cols: p }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn apply_usize(&self, v: &[usize]) -> Vec<i64> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).map(|(h, &x)| h * x as i64).sum())
            .collect()
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("tiem {} {}\n", self.rows.len(), self.cols);
        for r in &self.rows {
            let entries: Vec<String> = r.iter().map(i64::to_string).collect();
            let _ = writeln!(out, "{}", entries.join(" "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<TieMatrix, ParseError> {
        let mut lines = Lines::new(text);
        let h = lines.next("`tiem` header")?;
        h[0].expect("tiem")?;
        if h.len() != 3 {
            return Err(h[0].error("expected `tiem <rows> <cols>`"));
        }
        let (m, p) = (h[1].number()?, h[2].number()?);
        let header = h[0];
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            let l = lines.next("tie matrix row")?;
            if l.len() != p {
                return Err(l[0].error(format!("expected {p} entries, found {}", l.len())));
            }
            rows.push(l.iter().map(|t| t.parse::<i64>("an integer")).collect::<Result<Vec<_>, _>>()?);
        }
        lines.finish()?;
        TieMatrix::new(rows).map_err(|e| header.error(e.to_string()))
    }
}

pub fn is_tie_matrix(rows: &[Vec<i64>]) -> bool {
    let cols = rows.first().map_or(0, Vec::len);
    rows.iter().all(|r| r.len() == cols && r.iter().all(|&x| x >= 0))
        && (0..cols).all(|j| is_tieless(&rows.iter().map(|r| r[j]).collect::<Vec<_>>()))
}

/// `H v` is tieless.
pub fn is_h_tieless(h: &TieMatrix, v: &[i64]) -> bool {
    assert_eq!(v.len(), h.num_cols(), "dimension mismatch");
    let hv: Vec<i64> = h.rows().iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
    is_tieless(&hv)
}

/// Permutation invariance on every input whose multiplicity vector is
/// H-tieless, checked against the sorted representative.
pub fn is_h_symmetric(f: &FiniteFunction, h: &TieMatrix) -> Result<bool, PolyError> {
    if h.num_cols() != f.domain_size() {
        return Err(PolyError::SizeMismatch(format!(
            "tie matrix has {} columns, function domain has {} elements",
            h.num_cols(),
            f.domain_size()
        )));
    }
    Ok(first_h_asymmetry(f, h).is_none())
}

/// An input breaking H-symmetry, if any.
pub fn first_h_asymmetry(f: &FiniteFunction, h: &TieMatrix) -> Option<Vec<usize>> {
    let n = f.domain_size();
    let mut witness = None;
    let mut sorted = Vec::with_capacity(f.arity());
    for_each_tuple(n, f.arity(), |t| {
        if witness.is_some() {
            return;
        }
        let hv = h.apply_usize(&multiplicity_vector(t, n));
        if !is_tieless(&hv) {
            return;
        }
        sorted.clear();
        sorted.extend_from_slice(t);
        sorted.sort_unstable();
        if f.eval(t) != f.eval(&sorted) {
            witness = Some(t.to_vec());
        }
    });
    witness
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity_vector(&[0, 1, 1], 7), vec![1, 2, 0, 0, 0, 0, 0]);
        assert_eq!(multiplicity_vector(&[5, 5, 5], 7)[5], 3);
    }

    #[test]
    fn tieless_examples() {
        assert!(is_tieless(&[5i64]));
        assert!(is_tieless(&[2i64, 4, 0, 0]));
        assert!(!is_tieless(&[2i64, 2, 0]));
        assert_eq!(tie_count(&[2i64, 2, 2, 0, 0]), 6);
        let h = TieMatrix::diag(&[1, 2, 1, 1, 1, 1, 1]).unwrap();
        assert!(is_h_tieless(&h, &[2, 2, 0, 0, 0, 0, 0]));
        let id = TieMatrix::diag(&[1; 7]).unwrap();
        assert!(!is_h_tieless(&id, &[2, 2, 0, 0, 0, 0, 0]));
        assert!(TieMatrix::new(vec![vec![1], vec![1]]).is_err());
        assert!(TieMatrix::new(vec![vec![-1]]).is_err());
    }

    #[test]
    fn tie_matrix_text() {
        let h = TieMatrix::diag(&[1, 2, 1]).unwrap();
        assert_eq!(TieMatrix::parse(&h.serialize()).unwrap(), h);
        assert!(TieMatrix::parse("tiem 2 1\n3\n3\n").is_err());
    }

    proptest! {
        #[test]
        fn multiplicity_is_permutation_invariant(t in proptest::collection::vec(0usize..7, 0..8),
                                                 seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut s = t.clone();
            s.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(multiplicity_vector(&t, 7), multiplicity_vector(&s, 7));
            prop_assert_eq!(multiplicity_vector(&t, 7).iter().sum::<usize>(), t.len());
        }
    }
}
