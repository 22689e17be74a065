use rayon::prelude::*;

use super::function::{for_each_tuple, table_len, FiniteFunction, Operation};
use super::PolyError;
use crate::structures::{check_same_signature, RelationalStructure};

fn pow_within(base: usize, exp: usize, budget: usize) -> Result<usize, PolyError> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base)
            .filter(|&x| x <= budget)
            .ok_or(PolyError::TooLarge { what: "relation power", budget })?;
    }
    Ok(acc)
}

/// Every choice of `L` rows of `R^A` maps column-wise into `R^B`.
pub fn is_polymorphism(
    f: &dyn Operation,
    a: &RelationalStructure,
    b: &RelationalStructure,
    budget: usize,
) -> Result<bool, PolyError> {
    Ok(polymorphism_violation(f, a, b, budget)?.is_none())
}

/// First violating `(symbol, row indices)`, if any.
pub fn polymorphism_violation(
    f: &dyn Operation,
    a: &RelationalStructure,
    b: &RelationalStructure,
    budget: usize,
) -> Result<Option<(usize, Vec<usize>)>, PolyError> {
    check_same_signature(a, b).map_err(|e| PolyError::SizeMismatch(e.to_string()))?;
    if f.domain_size() != a.domain_size() || f.codomain_size() != b.domain_size() {
        return Err(PolyError::SizeMismatch(format!(
            "function is {} -> {}, template is {} -> {}",
            f.domain_size(),
            f.codomain_size(),
            a.domain_size(),
            b.domain_size()
        )));
    }
    let l = f.arity();
    let mut total = 0usize;
    for s in 0..a.signature().len() {
        total = total
            .checked_add(pow_within(a.relation(s).len(), l, budget)?)
            .filter(|&t| t <= budget)
            .ok_or(PolyError::TooLarge { what: "relation power", budget })?;
    }
    let sets = b.tuple_sets();
    for s in 0..a.signature().len() {
        let ra = a.relation(s);
        let k = a.signature().arity(s);
        if ra.is_empty() {
            continue;
        }
        // split on the first row for parallelism
        let bad = (0..ra.len()).into_par_iter().find_map_first(|first| {
            let mut found = None;
            let mut args = vec![0usize; l];
            let mut image = vec![0usize; k];
            for_each_tuple(ra.len(), l.saturating_sub(1), |rest| {
                if found.is_some() || l == 0 {
                    return;
                }
                for j in 0..k {
                    args[0] = ra[first][j];
                    for (i, &r) in rest.iter().enumerate() {
                        args[i + 1] = ra[r][j];
                    }
                    image[j] = f.eval(&args);
                }
                if !sets[s].contains(image.as_slice()) {
                    let mut rows = vec![first];
                    rows.extend_from_slice(rest);
                    found = Some(rows);
                }
            });
            found
        });
        if let Some(rows) = bad {
            return Ok(Some((s, rows)));
        }
        if l == 0 {
            let image: Vec<usize> = vec![f.eval(&[]); k];
            if !sets[s].contains(image.as_slice()) {
                return Ok(Some((s, vec![])));
            }
        }
    }
    Ok(None)
}

/// All polymorphisms of arity `arity`, in lexicographic table order.
/// Backtracks over table entries; each row choice is checked once its last
/// column entry is assigned.
pub fn enumerate_polymorphisms(
    a: &RelationalStructure,
    b: &RelationalStructure,
    arity: usize,
    budget: usize,
) -> Result<Vec<FiniteFunction>, PolyError> {
    check_same_signature(a, b).map_err(|e| PolyError::SizeMismatch(e.to_string()))?;
    let n = a.domain_size();
    let m = b.domain_size();
    let len = table_len(n, arity, budget)?;
    let sets = b.tuple_sets();

    // closing[e]: (symbol, column entries) with e as greatest entry
    let mut closing: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); len];
    let mut total = 0usize;
    for s in 0..a.signature().len() {
        let ra = a.relation(s);
        let k = a.signature().arity(s);
        total += pow_within(ra.len(), arity, budget)?;
        if total > budget {
            return Err(PolyError::TooLarge { what: "relation power", budget });
        }
        let mut seen = std::collections::HashSet::new();
        for_each_tuple(ra.len(), arity, |rows| {
            let cols: Vec<usize> = (0..k)
                .map(|j| rows.iter().fold(0, |acc, &r| acc * n + ra[r][j]))
                .collect();
            if seen.insert(cols.clone()) {
                let last = *cols.iter().max().expect("positive arity");
                closing[last].push((s, cols));
            }
        });
    }

    let mut out = Vec::new();
    let mut table = vec![0u32; len];
    let mut next = vec![0usize; len + 1];
    let mut depth = 0usize;
    let mut image = Vec::new();
    'search: loop {
        if depth == len {
            out.push(FiniteFunction::from_table(
                format!("pol{}", out.len()),
                arity,
                n,
                m,
                table.clone(),
            )?);
            if depth == 0 {
                return Ok(out);
            }
            depth -= 1;
            continue;
        }
        while next[depth] < m {
            table[depth] = next[depth] as u32;
            next[depth] += 1;
            let ok = closing[depth].iter().all(|(s, cols)| {
                image.clear();
                image.extend(cols.iter().map(|&c| table[c] as usize));
                sets[*s].contains(image.as_slice())
            });
            if ok {
                depth += 1;
                next[depth] = 0;
                continue 'search;
            }
        }
        if depth == 0 {
            return Ok(out);
        }
        depth -= 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryClass {
    Symmetric,
    Alternating,
    TwoBlockSymmetric,
}

/// Exhaustive check of a symmetry class. Blocks are the odd positions
/// (1st, 3rd, ...) and the even positions; the alternating cancellation law
/// acts on the last two positions.
pub fn check_symmetry_class(f: &dyn Operation, class: SymmetryClass) -> bool {
    let n = f.domain_size();
    let l = f.arity();
    if class == SymmetryClass::Alternating && l.is_multiple_of(2) {
        return false;
    }
    let mut ok = true;
    let mut canon = vec![0usize; l];
    let mut odd = Vec::with_capacity(l);
    let mut even = Vec::with_capacity(l);
    for_each_tuple(n, l, |t| {
        if !ok {
            return;
        }
        match class {
            SymmetryClass::Symmetric => {
                canon.copy_from_slice(t);
                canon.sort_unstable();
            }
            SymmetryClass::Alternating | SymmetryClass::TwoBlockSymmetric => {
                odd.clear();
                even.clear();
                for (i, &x) in t.iter().enumerate() {
                    if i % 2 == 0 { odd.push(x) } else { even.push(x) }
                }
                odd.sort_unstable();
                even.sort_unstable();
                for (i, c) in canon.iter_mut().enumerate() {
                    *c = if i % 2 == 0 { odd[i / 2] } else { even[i / 2] };
                }
            }
        }
        let v = f.eval(t);
        if f.eval(&canon) != v {
            ok = false;
            return;
        }
        if class == SymmetryClass::Alternating && l >= 3 && t[l - 1] == t[l - 2] {
            canon.copy_from_slice(t);
            canon[l - 1] = 0;
            canon[l - 2] = 0;
            if f.eval(&canon) != v {
                ok = false;
            }
        }
    });
    ok
}
