use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use super::matrix::{check_map, unit, EvcMatrix};
use super::MinionError;
use crate::exactmath::Rational;
use crate::textio::{Lines, ParseError};

/// A pair `(M, mu)` of arity `L = M.rows()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinionElement {
    pub m: EvcMatrix,
    pub mu: Vec<i64>,
}

/// `pi: [L] -> [target]`, 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorMap {
    pub pi: Vec<usize>,
    pub target: usize,
}

impl MinorMap {
    pub fn new(pi: Vec<usize>, target: usize) -> Result<Self, MinionError> {
        check_map(&pi, pi.len(), target)?;
        Ok(MinorMap { pi, target })
    }

    pub fn compose(&self, then: &MinorMap) -> Result<MinorMap, MinionError> {
        check_map(&then.pi, then.pi.len(), then.target)?;
        if then.pi.len() != self.target {
            return Err(MinionError::Shape("minor maps do not compose".into()));
        }
        Ok(MinorMap { pi: self.pi.iter().map(|&j| then.pi[j]).collect(), target: then.target })
    }
}

impl MinionElement {
    pub fn new(m: EvcMatrix, mu: Vec<i64>) -> Result<Self, MinionError> {
        if mu.len() != m.rows() {
            return Err(MinionError::Shape(format!("mu has {} entries, M has {} rows", mu.len(), m.rows())));
        }
        Ok(MinionElement { m, mu })
    }

    pub fn arity(&self) -> usize {
        self.m.rows()
    }

    /// `(P_pi M, P_pi mu)`.
    pub fn minor(&self, pi: &[usize], target: usize) -> Result<MinionElement, MinionError> {
        let m = self.m.minor(pi, target)?;
        let mut mu = vec![0i64; target];
        for (i, &x) in self.mu.iter().enumerate() {
            mu[pi[i]] += x;
        }
        Ok(MinionElement { m, mu })
    }

    pub fn minor_by(&self, map: &MinorMap) -> Result<MinionElement, MinionError> {
        self.minor(&map.pi, map.target)
    }

    /// The first violated defining condition, if any.
    pub fn violation(&self) -> Option<&'static str> {
        let m = &self.m;
        if !m.is_nonnegative() {
            return Some("M has a negative entry");
        }
        if !m.columns_sum_to_one() {
            return Some("a column of M does not sum to 1");
        }
        if self.mu.iter().sum::<i64>() != 1 {
            return Some("mu does not sum to 1");
        }
        if self.mu.iter().enumerate().any(|(i, &x)| x != 0 && m.get(i, 0).is_zero()) {
            return Some("mu is not supported inside the first column");
        }
        if !m.is_skeletal() {
            return Some("M is not skeletal");
        }
        None
    }

    pub fn is_minion_element(&self) -> bool {
        self.violation().is_none()
    }

    /// Membership in the level-`d` subminion.
    pub fn in_c_d(&self, d: usize) -> bool {
        let dq = Rational::from(d);
        self.is_minion_element()
            && self.m.width() <= d
            && self.mu.iter().map(|x| x.unsigned_abs() as usize).sum::<usize>() <= d
            && self.m.head().iter().flatten().all(|x| (x * &dq).is_integer())
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("mel rows {} cols {}\n", self.m.rows(), self.m.width());
        for r in 0..self.m.rows() {
            let row: Vec<String> = self.m.head().iter().map(|c| c[r].to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        let mu: Vec<String> = self.mu.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "mu {}", mu.join(" "));
        out
    }

    pub fn parse(text: &str) -> Result<MinionElement, ParseError> {
        let mut lines = Lines::new(text);
        let h = lines.next("`mel` header")?;
        h[0].expect("mel")?;
        if h.len() != 5 {
            return Err(h[0].error("expected `mel rows <L> cols <t>`"));
        }
        h[1].expect("rows")?;
        h[3].expect("cols")?;
        let (l, t) = (h[2].number()?, h[4].number()?);
        if t == 0 {
            return Err(h[4].error("at least one column is required"));
        }
        let mut rows = Vec::with_capacity(l);
        for _ in 0..l {
            let r = lines.next("matrix row")?;
            if r.len() != t {
                return Err(r[0].error(format!("expected {t} entries, found {}", r.len())));
            }
            rows.push(r.iter().map(|x| x.parse::<Rational>("a rational")).collect::<Result<Vec<_>, _>>()?);
        }
        let mu_line = lines.next("`mu` line")?;
        mu_line[0].expect("mu")?;
        if mu_line.len() != l + 1 {
            return Err(mu_line[0].error(format!("expected {l} entries after `mu`")));
        }
        let mu = mu_line[1..].iter().map(|x| x.parse::<i64>("an integer")).collect::<Result<Vec<_>, _>>()?;
        lines.finish()?;
        let cols = (0..t).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect();
        let m = EvcMatrix::new(l, cols).map_err(|e| h[0].error(e.to_string()))?;
        MinionElement::new(m, mu).map_err(|e| h[0].error(e.to_string()))
    }
}

/// Random element of the level-`d` subminion of arity `l`: unit columns
/// witness a support set, the other head columns are `1/d`-grid points on
/// it, and `mu` is `e_r` plus cancelling pairs inside the first column's
/// support.
pub fn random_c_d<R: Rng + ?Sized>(rng: &mut R, l: usize, d: usize) -> MinionElement {
    assert!(l >= 1 && d >= 1, "arity and level must be positive");
    let t = rng.gen_range(1..=d);
    let k = rng.gen_range(1..=t.min(l));
    let mut rows: Vec<usize> = (0..l).collect();
    rows.shuffle(rng);
    let support = &rows[..k];
    let mut slots: Vec<usize> = (0..t).collect();
    slots.shuffle(rng);
    let mut cols: Vec<Option<Vec<Rational>>> = vec![None; t];
    for (&j, &slot) in support.iter().zip(&slots) {
        cols[slot] = Some(unit(l, j));
    }
    let cols: Vec<Vec<Rational>> = cols
        .into_iter()
        .map(|c| {
            c.unwrap_or_else(|| {
                let mut counts = vec![0i64; l];
                for _ in 0..d {
                    counts[*support.choose(rng).expect("nonempty")] += 1;
                }
                counts.iter().map(|&x| Rational::new(x, d as i64)).collect()
            })
        })
        .collect();
    let m = EvcMatrix::new(l, cols).expect("well-formed columns");
    let first: Vec<usize> = (0..l).filter(|&i| !m.get(i, 0).is_zero()).collect();
    let mut mu = vec![0i64; l];
    mu[*first.choose(rng).expect("first column is stochastic")] = 1;
    while rng.gen_bool(0.5) {
        let (p, q) = (*first.choose(rng).expect("nonempty"), *first.choose(rng).expect("nonempty"));
        let mut next = mu.clone();
        next[p] += 1;
        next[q] -= 1;
        if next.iter().map(|x| x.unsigned_abs() as usize).sum::<usize>() > d {
            break;
        }
        mu = next;
    }
    MinionElement { m, mu }
}

/// Every element of arity `n` in the level-`d` subminion, or an error when
/// the column choices exceed `budget`.
pub fn enumerate_c_d(n: usize, d: usize, budget: usize) -> Result<Vec<MinionElement>, MinionError> {
    let mut grid = Vec::new();
    compositions(n, d, &mut vec![0; n], 0, &mut grid);
    let mut total: usize = 1;
    for _ in 0..d {
        total = total
            .checked_mul(grid.len())
            .filter(|&x| x <= budget)
            .ok_or(MinionError::TooLarge(budget))?;
    }
    let grid: Vec<Vec<Rational>> = grid
        .into_iter()
        .map(|c| c.iter().map(|&x| Rational::new(x, d as i64)).collect())
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; d];
    loop {
        let cols: Vec<Vec<Rational>> = choice.iter().map(|&i| grid[i].clone()).collect();
        let m = EvcMatrix::new(n, cols)?;
        // distinct choices give distinct matrices once the tail is extended to width d
        if m.is_skeletal() {
            let first: Vec<usize> = (0..n).filter(|&i| !m.get(i, 0).is_zero()).collect();
            let mut mus = Vec::new();
            signed_vectors(&first, d as i64, &mut vec![0; first.len()], 0, &mut mus);
            for mu_s in mus {
                if mu_s.iter().sum::<i64>() != 1 {
                    continue;
                }
                let mut mu = vec![0i64; n];
                for (&i, &x) in first.iter().zip(&mu_s) {
                    mu[i] = x;
                }
                out.push(MinionElement { m: m.clone(), mu });
            }
        }
        let mut pos = d;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < grid.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

fn compositions(n: usize, left: usize, cur: &mut Vec<i64>, i: usize, out: &mut Vec<Vec<i64>>) {
    if i + 1 == n {
        cur[i] = left as i64;
        out.push(cur.clone());
        return;
    }
    for x in (0..=left).rev() {
        cur[i] = x as i64;
        compositions(n, left - x, cur, i + 1, out);
    }
}

fn signed_vectors(support: &[usize], budget: i64, cur: &mut Vec<i64>, i: usize, out: &mut Vec<Vec<i64>>) {
    if i == support.len() {
        out.push(cur.clone());
        return;
    }
    for x in -budget..=budget {
        cur[i] = x;
        signed_vectors(support, budget - x.abs(), cur, i + 1, out);
    }
    cur[i] = 0;
}
