use super::{check_same_signature, RelationalStructure, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn identity(n: usize) -> Self {
        Homomorphism { map: (0..n).collect() }
    }

    /// Checks every constraint of `x` lands in `y`.
    pub fn validates(&self, x: &RelationalStructure, y: &RelationalStructure) -> bool {
        if self.map.len() != x.domain_size()
            || self.map.iter().any(|&v| v >= y.domain_size())
            || x.signature() != y.signature()
        {
            return false;
        }
        let sets = y.tuple_sets();
        (0..x.signature().len()).all(|s| {
            x.relation(s).iter().all(|t| {
                let img: Vec<usize> = t.iter().map(|&e| self.map[e]).collect();
                sets[s].contains(img.as_slice())
            })
        })
    }
}

/// Backtracking search for `x -> y`. Variables are tried in order of
/// descending constraint degree (ties by id), values ascending, so the result
/// is the least homomorphism in that order.
pub fn find_homomorphism(
    x: &RelationalStructure,
    y: &RelationalStructure,
) -> Result<Option<Homomorphism>, StructureError> {
    check_same_signature(x, y)?;
    let n = x.domain_size();
    let m = y.domain_size();
    let sets = y.tuple_sets();

    let mut degree = vec![0usize; n];
    for s in 0..x.signature().len() {
        for t in x.relation(s) {
            for &e in t {
                degree[e] += 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&u, &v| degree[v].cmp(&degree[u]).then(u.cmp(&v)));
    let mut position = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    // Constraints checked when their last variable (in search order) is set.
    let mut closing: Vec<Vec<(usize, &[usize])>> = vec![Vec::new(); n];
    for s in 0..x.signature().len() {
        for t in x.relation(s) {
            let last = t.iter().map(|&e| position[e]).max().expect("positive arity");
            closing[last].push((s, t));
        }
    }
    if m == 0 {
        return Ok(if n == 0 { Some(Homomorphism { map: vec![] }) } else { None });
    }

    let mut map = vec![0usize; n];
    let mut buf = Vec::new();
    let mut depth = 0usize;
    let mut next_value = vec![0usize; n + 1];
    'search: loop {
        if depth == n {
            return Ok(Some(Homomorphism { map }));
        }
        let var = order[depth];
        while next_value[depth] < m {
            map[var] = next_value[depth];
            next_value[depth] += 1;
            let ok = closing[depth].iter().all(|(s, t)| {
                buf.clear();
                buf.extend(t.iter().map(|&e| map[e]));
                sets[*s].contains(buf.as_slice())
            });
            if ok {
                depth += 1;
                next_value[depth] = 0;
                continue 'search;
            }
        }
        if depth == 0 {
            return Ok(None);
        }
        depth -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{complete_graph, nae, one_in_three, undirected_cycle};

    #[test]
    fn identity_on_self() {
        let a = one_in_three();
        assert_eq!(find_homomorphism(&a, &a).unwrap(), Some(Homomorphism::identity(2)));
    }

    #[test]
    fn one_in_three_to_nae() {
        let h = find_homomorphism(&one_in_three(), &nae()).unwrap().unwrap();
        assert_eq!(h, Homomorphism::identity(2));
        assert_eq!(find_homomorphism(&nae(), &one_in_three()).unwrap(), None);
    }

    #[test]
    fn odd_cycle_not_bipartite() {
        assert_eq!(find_homomorphism(&undirected_cycle(5), &complete_graph(2)).unwrap(), None);
        let h = find_homomorphism(&undirected_cycle(6), &complete_graph(2)).unwrap().unwrap();
        assert!(h.validates(&undirected_cycle(6), &complete_graph(2)));
    }
}
