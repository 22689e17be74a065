use super::matrix::EvcMatrix;
use super::MinionError;
use crate::exactmath::Rational;
use crate::polymorph::{tie_count, TieMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiebreak {
    /// Stochastic vector on the head coordinates.
    pub v: Vec<Rational>,
    pub iterations: usize,
    /// Ordered tied pairs summed over all matrices at the start.
    pub initial_ties: usize,
}

fn h_apply(h: &TieMatrix, x: &[Rational]) -> Vec<Rational> {
    h.rows()
        .iter()
        .map(|r| {
            r.iter()
                .zip(x)
                .filter(|&(&a, b)| a != 0 && !b.is_zero())
                .map(|(&a, b)| Rational::from(a) * b)
                .sum()
        })
        .collect()
}

fn total_ties(images: &[Vec<Rational>]) -> usize {
    images.iter().map(|u| tie_count(u)).sum()
}

/// A stochastic `v` with `H M v` tieless for every `M` in `ms`, starting
/// from the uniform vector on the widest head.
pub fn tiebreak(ms: &[EvcMatrix], h: &TieMatrix) -> Result<Tiebreak, MinionError> {
    let t = ms.iter().map(EvcMatrix::width).max().unwrap_or(1);
    let start = vec![Rational::new(1, t as i64); t];
    tiebreak_from(ms, h, start)
}

/// Same procedure from a caller-chosen start. Fails with `NoAdmissibleStep`
/// when every blend would create a new tie between entries that are
/// currently zero.
pub fn tiebreak_from(ms: &[EvcMatrix], h: &TieMatrix, start: Vec<Rational>) -> Result<Tiebreak, MinionError> {
    for (g, m) in ms.iter().enumerate() {
        if m.rows() != h.num_cols() {
            return Err(MinionError::Shape(format!(
                "matrix {g} has {} rows, H has {} columns",
                m.rows(),
                h.num_cols()
            )));
        }
        if !m.is_skeletal() {
            return Err(MinionError::NotSkeletal(g));
        }
    }
    if start.iter().any(Rational::is_negative) || !start.iter().sum::<Rational>().is_one() {
        return Err(MinionError::Shape("start vector is not stochastic".into()));
    }
    let witnesses: Vec<Vec<Option<usize>>> = ms.iter().map(EvcMatrix::skeleton_witnesses).collect();
    let mut v = start;
    let mut images: Vec<Vec<Rational>> = ms.iter().map(|m| h_apply(h, &m.mul_vec(&v))).collect();
    let initial_ties = total_ties(&images);
    let mut ties = initial_ties;
    let mut iterations = 0;
    while ties > 0 {
        let (g, i) = first_tie(&images).expect("positive tie count");
        let mv = ms[g].mul_vec(&v);
        let beta = (0..mv.len())
            .find(|&b| h.entry(i, b) != 0 && !mv[b].is_zero())
            .expect("nonzero entry of H M v has a nonzero summand");
        let alpha = witnesses[g][beta].expect("skeletal row with nonzero mass");
        let pushed: Vec<Vec<Rational>> = ms.iter().map(|m| h_apply(h, m.column(alpha))).collect();

        let mut min_root: Option<Rational> = None;
        for (u, w) in images.iter().zip(&pushed) {
            for a in 0..u.len() {
                for b in a + 1..u.len() {
                    let d = &u[a] - &u[b];
                    let dw = &w[a] - &w[b];
                    if d.is_zero() {
                        if u[a].is_zero() && dw.is_zero() && !w[a].is_zero() {
                            return Err(MinionError::NoAdmissibleStep { iteration: iterations });
                        }
                        continue;
                    }
                    let denom = &d - &dw;
                    if denom.is_zero() {
                        continue;
                    }
                    let root = &d / &denom;
                    if root.is_positive() && root < Rational::one() && min_root.as_ref().is_none_or(|m| &root < m) {
                        min_root = Some(root);
                    }
                }
            }
        }
        let q = min_root.map_or_else(|| 1.into(), |r| r.recip().ceil());
        let eps = Rational::from(q * 2u32).recip();
        let keep = Rational::one() - &eps;
        for x in v.iter_mut() {
            *x = &*x * &keep;
        }
        if alpha >= v.len() {
            v.resize(alpha + 1, Rational::zero());
        }
        v[alpha] += &eps;
        images = ms.iter().map(|m| h_apply(h, &m.mul_vec(&v))).collect();
        let next = total_ties(&images);
        if next >= ties {
            return Err(MinionError::NoAdmissibleStep { iteration: iterations });
        }
        ties = next;
        iterations += 1;
    }
    Ok(Tiebreak { v, iterations, initial_ties })
}

fn first_tie(images: &[Vec<Rational>]) -> Option<(usize, usize)> {
    images.iter().enumerate().find_map(|(g, u)| {
        (0..u.len()).find(|&i| !u[i].is_zero() && u.iter().enumerate().any(|(j, x)| j != i && x == &u[i])).map(|i| (g, i))
    })
}
