use super::{RelationalStructure, Signature};

/// Structure with a single relation `name` listing `tuples`.
pub fn single_relation(
    struct_name: &str,
    name: &str,
    domain: usize,
    tuples: &[&[usize]],
) -> RelationalStructure {
    let arity = tuples.first().map_or(1, |t| t.len());
    let sig = Signature::new(vec![(name.to_string(), arity)]).expect("valid signature");
    let mut s = RelationalStructure::new(struct_name, sig, domain);
    for t in tuples {
        s.add_tuple(0, t.to_vec()).expect("fixture tuple");
    }
    s
}

/// `{(0,0,1), (0,1,0), (1,0,0)}` on `{0,1}`, relation `R1`.
pub fn one_in_three() -> RelationalStructure {
    single_relation("one_in_three", "R1", 2, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])
}

/// Not-all-equal on `{0,1}`, relation `R1`, tuples in lexicographic order.
pub fn nae() -> RelationalStructure {
    single_relation(
        "nae",
        "R1",
        2,
        &[&[0, 0, 1], &[0, 1, 0], &[0, 1, 1], &[1, 0, 0], &[1, 0, 1], &[1, 1, 0]],
    )
}

/// Clique `K_k` with symmetric edge relation `E`.
pub fn complete_graph(k: usize) -> RelationalStructure {
    let sig = Signature::new(vec![("E".to_string(), 2)]).expect("valid signature");
    let mut s = RelationalStructure::new(format!("K{k}"), sig, k);
    for u in 0..k {
        for v in 0..k {
            if u != v {
                s.add_tuple(0, vec![u, v]).expect("edge");
            }
        }
    }
    s
}

/// Cycle on `n` vertices with both edge directions in `E`.
pub fn undirected_cycle(n: usize) -> RelationalStructure {
    let sig = Signature::new(vec![("E".to_string(), 2)]).expect("valid signature");
    let mut s = RelationalStructure::new(format!("C{n}"), sig, n);
    for u in 0..n {
        let v = (u + 1) % n;
        s.add_tuple(0, vec![u, v]).expect("edge");
        s.add_tuple(0, vec![v, u]).expect("edge");
    }
    s
}

/// Directed cycle `0 -> 1 -> ... -> n-1 -> 0` in relation `symbol` of a
/// structure over `sig`; other relations are empty.
pub fn directed_cycle(n: usize, sig: &Signature, symbol: &str) -> RelationalStructure {
    let mut s = RelationalStructure::new(format!("dicycle{n}"), sig.clone(), n);
    for u in 0..n {
        s.add_tuple_by_name(symbol, vec![u, (u + 1) % n]).expect("cycle edge");
    }
    s
}
