use std::fmt::Write as _;

use super::PolyError;
use crate::textio::{Lines, ParseError};

/// Operation `A^L -> B` on dense ids, evaluated on demand.
pub trait Operation: Sync {
    fn arity(&self) -> usize;
    fn domain_size(&self) -> usize;
    fn codomain_size(&self) -> usize;
    fn eval(&self, args: &[usize]) -> usize;

    /// Evaluates on the concatenation of `count` copies of each `value`,
    /// in order. Counts must sum to the arity.
    fn eval_runs(&self, runs: &[(usize, usize)]) -> usize {
        let mut args = Vec::with_capacity(self.arity());
        for &(v, k) in runs {
            args.extend(std::iter::repeat_n(v, k));
        }
        self.eval(&args)
    }
}

/// Dense table indexed big-endian: the first argument is most significant,
/// so table order is lexicographic order of input tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteFunction {
    pub name: String,
    arity: usize,
    domain_size: usize,
    codomain_size: usize,
    table: Vec<u32>,
}

pub(crate) fn table_len(domain_size: usize, arity: usize, budget: usize) -> Result<usize, PolyError> {
    let mut len: usize = 1;
    for _ in 0..arity {
        len = len
            .checked_mul(domain_size)
            .filter(|&l| l <= budget)
            .ok_or(PolyError::TooLarge { what: "function table", budget })?;
    }
    if len > budget {
        return Err(PolyError::TooLarge { what: "function table", budget });
    }
    Ok(len)
}

/// Calls `f` on every tuple of `0..n` of length `len`, in lexicographic order.
pub(crate) fn for_each_tuple(n: usize, len: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 && len > 0 {
        return;
    }
    let mut t = vec![0usize; len];
    loop {
        f(&t);
        let mut k = len;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            t[k] += 1;
            if t[k] < n {
                break;
            }
            t[k] = 0;
        }
    }
}

impl FiniteFunction {
    pub fn from_table(
        name: impl Into<String>,
        arity: usize,
        domain_size: usize,
        codomain_size: usize,
        table: Vec<u32>,
    ) -> Result<Self, PolyError> {
        let len = table_len(domain_size, arity, usize::MAX)?;
        if table.len() != len {
            return Err(PolyError::SizeMismatch(format!(
                "table has {} entries, expected {len}",
                table.len()
            )));
        }
        if let Some(v) = table.iter().find(|&&v| v as usize >= codomain_size) {
            return Err(PolyError::SizeMismatch(format!(
                "value {v} outside codomain of size {codomain_size}"
            )));
        }
        Ok(FiniteFunction { name: name.into(), arity, domain_size, codomain_size, table })
    }

    /// Materializes `op` within `budget` table entries.
    pub fn materialize(
        name: impl Into<String>,
        op: &dyn Operation,
        budget: usize,
    ) -> Result<Self, PolyError> {
        let len = table_len(op.domain_size(), op.arity(), budget)?;
        let mut table = Vec::with_capacity(len);
        for_each_tuple(op.domain_size(), op.arity(), |t| table.push(op.eval(t) as u32));
        FiniteFunction::from_table(name, op.arity(), op.domain_size(), op.codomain_size(), table)
    }

    pub fn from_fn(
        name: impl Into<String>,
        arity: usize,
        domain_size: usize,
        codomain_size: usize,
        budget: usize,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self, PolyError> {
        let len = table_len(domain_size, arity, budget)?;
        let mut table = Vec::with_capacity(len);
        for_each_tuple(domain_size, arity, |t| table.push(f(t) as u32));
        FiniteFunction::from_table(name, arity, domain_size, codomain_size, table)
    }

    pub fn projection(arity: usize, domain_size: usize, coord: usize) -> Self {
        FiniteFunction::from_fn(format!("proj{coord}"), arity, domain_size, domain_size, usize::MAX, |t| t[coord])
            .expect("projection table")
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn index(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        args.iter().fold(0, |acc, &a| acc * self.domain_size + a)
    }

    /// `f_{/pi}(b_1..b_{L'}) = f(b_{pi(1)}, ..., b_{pi(L)})` for
    /// `pi: [L] -> [L']`, materialized.
    pub fn minor(&self, pi: &[usize], new_arity: usize) -> Result<FiniteFunction, PolyError> {
        if pi.len() != self.arity || pi.iter().any(|&j| j >= new_arity) {
            return Err(PolyError::SizeMismatch(format!(
                "minor map must send {} coordinates into 0..{new_arity}",
                self.arity
            )));
        }
        let mut args = vec![0; self.arity];
        FiniteFunction::from_fn(
            format!("{}_minor", self.name),
            new_arity,
            self.domain_size,
            self.codomain_size,
            usize::MAX,
            |b| {
                for (i, &j) in pi.iter().enumerate() {
                    args[i] = b[j];
                }
                self.table[self.index(&args)] as usize
            },
        )
    }

    pub fn serialize(&self) -> String {
        let mut out = format!(
            "fn {} arity {} dom {} cod {}\n",
            if self.name.is_empty() { "f" } else { &self.name },
            self.arity,
            self.domain_size,
            self.codomain_size
        );
        for v in &self.table {
            let _ = writeln!(out, "v {v}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<FiniteFunction, ParseError> {
        let mut lines = Lines::new(text);
        let h = lines.next("`fn` header")?;
        h[0].expect("fn")?;
        if h.len() != 8 {
            return Err(h[0].error("expected `fn <name> arity <L> dom <n> cod <m>`"));
        }
        let name = h[1].text.to_string();
        h[2].expect("arity")?;
        let arity = h[3].number()?;
        h[4].expect("dom")?;
        let dom = h[5].number()?;
        h[6].expect("cod")?;
        let cod = h[7].number()?;
        let len = table_len(dom, arity, usize::MAX).map_err(|e| h[3].error(e.to_string()))?;
        let mut table = Vec::with_capacity(len);
        while let Some(l) = lines.peek() {
            l[0].expect("v")?;
            if l.len() != 2 {
                return Err(l[0].error("`v` takes one value"));
            }
            let v = l[1].number()?;
            if v >= cod {
                return Err(l[1].error(format!("value {v} outside codomain of size {cod}")));
            }
            if table.len() == len {
                return Err(l[0].error(format!("more than {len} table entries")));
            }
            table.push(v as u32);
            lines.pos += 1;
        }
        if table.len() != len {
            return Err(h[0].error(format!("expected {len} table entries, found {}", table.len())));
        }
        Ok(FiniteFunction { name, arity, domain_size: dom, codomain_size: cod, table })
    }
}

impl Operation for FiniteFunction {
    fn arity(&self) -> usize {
        self.arity
    }

    fn domain_size(&self) -> usize {
        self.domain_size
    }

    fn codomain_size(&self) -> usize {
        self.codomain_size
    }

    fn eval(&self, args: &[usize]) -> usize {
        self.table[self.index(args)] as usize
    }
}
