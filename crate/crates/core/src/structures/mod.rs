//! Relational signatures and finite structures, homomorphisms, templates.

mod fixtures;
mod format;
mod homomorphism;

use std::collections::HashSet;

pub use fixtures::{
    complete_graph, directed_cycle, nae, one_in_three, single_relation, undirected_cycle,
};
pub use format::{
    parse_instance, parse_structure, parse_template, serialize_instance, serialize_structure,
    serialize_template, ParseError,
};
pub use homomorphism::{find_homomorphism, Homomorphism};

/// Name of the unary relation holding the whole domain.
pub const UNARY: &str = "__u";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("duplicate relation name `{0}`")]
    DuplicateSymbol(String),
    #[error("relation `{0}` must have positive arity")]
    ZeroArity(String),
    #[error("unknown relation `{0}`")]
    UnknownSymbol(String),
    #[error("tuple of length {got} for relation `{symbol}` of arity {arity}")]
    ArityMismatch { symbol: String, arity: usize, got: usize },
    #[error("element id {id} out of range for domain {size}")]
    ElementOutOfRange { id: usize, size: usize },
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("not a PCSP template: no homomorphism from A to B")]
    NotATemplate,
}

/// Ordered list of relation symbols with arities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    symbols: Vec<(String, usize)>,
}

impl Signature {
    pub fn new(symbols: Vec<(String, usize)>) -> Result<Self, StructureError> {
        let mut sig = Signature::default();
        for (name, arity) in symbols {
            sig.push(name, arity)?;
        }
        Ok(sig)
    }

    pub fn push(&mut self, name: impl Into<String>, arity: usize) -> Result<usize, StructureError> {
        let name = name.into();
        if arity == 0 {
            return Err(StructureError::ZeroArity(name));
        }
        if self.index_of(&name).is_some() {
            return Err(StructureError::DuplicateSymbol(name));
        }
        self.symbols.push((name, arity));
        Ok(self.symbols.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn name(&self, sym: usize) -> &str {
        &self.symbols[sym].0
    }

    pub fn arity(&self, sym: usize) -> usize {
        self.symbols[sym].1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|(n, _)| n == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.symbols.iter().map(|(n, a)| (n.as_str(), *a))
    }
}

/// Finite structure over `0..domain_size`. Tuples keep insertion order; the
/// position of a tuple in its relation is its constraint/assignment index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalStructure {
    pub name: String,
    signature: Signature,
    domain_size: usize,
    relations: Vec<Vec<Vec<usize>>>,
}

impl RelationalStructure {
    pub fn new(name: impl Into<String>, signature: Signature, domain_size: usize) -> Self {
        let relations = vec![Vec::new(); signature.len()];
        RelationalStructure { name: name.into(), signature, domain_size, relations }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn relation(&self, sym: usize) -> &[Vec<usize>] {
        &self.relations[sym]
    }

    pub fn relation_by_name(&self, name: &str) -> Option<&[Vec<usize>]> {
        self.signature.index_of(name).map(|s| self.relation(s))
    }

    pub fn num_tuples(&self) -> usize {
        self.relations.iter().map(Vec::len).sum()
    }

    /// Adds a tuple; returns `false` if it was already present.
    pub fn add_tuple(&mut self, sym: usize, tuple: Vec<usize>) -> Result<bool, StructureError> {
        let arity = self.signature.arity(sym);
        if tuple.len() != arity {
            return Err(StructureError::ArityMismatch {
                symbol: self.signature.name(sym).to_string(),
                arity,
                got: tuple.len(),
            });
        }
        if let Some(&id) = tuple.iter().find(|&&e| e >= self.domain_size) {
            return Err(StructureError::ElementOutOfRange { id, size: self.domain_size });
        }
        if self.relations[sym].contains(&tuple) {
            return Ok(false);
        }
        self.relations[sym].push(tuple);
        Ok(true)
    }

    pub fn add_tuple_by_name(&mut self, name: &str, tuple: Vec<usize>) -> Result<bool, StructureError> {
        let sym = self
            .signature
            .index_of(name)
            .ok_or_else(|| StructureError::UnknownSymbol(name.to_string()))?;
        self.add_tuple(sym, tuple)
    }

    /// Adds a new, empty relation symbol.
    pub fn add_symbol(&mut self, name: impl Into<String>, arity: usize) -> Result<usize, StructureError> {
        let sym = self.signature.push(name, arity)?;
        self.relations.push(Vec::new());
        Ok(sym)
    }

    /// Re-indexes relations to `sig`. Symbols of `sig` missing here become
    /// empty relations; symbols absent from `sig` are an error.
    pub fn align_to(&self, sig: &Signature) -> Result<Self, StructureError> {
        for (name, arity) in self.signature.iter() {
            match sig.index_of(name) {
                None => return Err(StructureError::UnknownSymbol(name.to_string())),
                Some(s) if sig.arity(s) != arity => {
                    return Err(StructureError::SignatureMismatch(format!(
                        "relation `{name}` has arity {arity}, expected {}",
                        sig.arity(s)
                    )))
                }
                Some(_) => {}
            }
        }
        let relations = sig
            .iter()
            .map(|(name, _)| self.relation_by_name(name).map(<[_]>::to_vec).unwrap_or_default())
            .collect();
        Ok(RelationalStructure {
            name: self.name.clone(),
            signature: sig.clone(),
            domain_size: self.domain_size,
            relations,
        })
    }

    pub fn tuple_sets(&self) -> Vec<HashSet<&[usize]>> {
        self.relations
            .iter()
            .map(|rel| rel.iter().map(Vec::as_slice).collect())
            .collect()
    }
}

pub fn check_same_signature(
    a: &RelationalStructure,
    b: &RelationalStructure,
) -> Result<(), StructureError> {
    if a.signature == b.signature {
        Ok(())
    } else {
        Err(StructureError::SignatureMismatch(format!(
            "`{}` and `{}` have different relation symbols",
            a.name, b.name
        )))
    }
}

/// Template `(A, B)` together with a witness `A -> B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcspTemplate {
    pub a: RelationalStructure,
    pub b: RelationalStructure,
    pub witness: Homomorphism,
}

impl PcspTemplate {
    pub fn signature(&self) -> &Signature {
        self.a.signature()
    }

    /// Both sides with the unary relation added.
    pub fn augmented(&self) -> PcspTemplate {
        PcspTemplate {
            a: with_unary(&self.a),
            b: with_unary(&self.b),
            witness: self.witness.clone(),
        }
    }
}

pub fn validate_template(
    a: RelationalStructure,
    b: RelationalStructure,
) -> Result<PcspTemplate, StructureError> {
    check_same_signature(&a, &b)?;
    let witness = find_homomorphism(&a, &b)?.ok_or(StructureError::NotATemplate)?;
    Ok(PcspTemplate { a, b, witness })
}

/// Copy of `s` whose `__u` relation holds every domain element.
pub fn with_unary(s: &RelationalStructure) -> RelationalStructure {
    let mut out = s.clone();
    let sym = match out.signature.index_of(UNARY) {
        Some(sym) => sym,
        None => out.add_symbol(UNARY, 1).expect("fresh unary symbol"),
    };
    out.relations[sym] = (0..out.domain_size).map(|e| vec![e]).collect();
    out
}

/// Adds the unary domain relation to instance and both template sides.
/// Idempotent.
pub fn augment_with_unary(
    x: &RelationalStructure,
    a: &RelationalStructure,
    b: &RelationalStructure,
) -> Result<(RelationalStructure, RelationalStructure, RelationalStructure), StructureError> {
    check_same_signature(x, a)?;
    check_same_signature(a, b)?;
    Ok((with_unary(x), with_unary(a), with_unary(b)))
}

/// Index of `__u`, which every algorithm in this crate expects.
pub fn unary_symbol(s: &RelationalStructure) -> Option<usize> {
    s.signature.index_of(UNARY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn augmentation_is_idempotent() {
        let a = one_in_three();
        let b = nae();
        let (x1, a1, b1) = augment_with_unary(&a, &a, &b).unwrap();
        let (x2, a2, b2) = augment_with_unary(&x1, &a1, &b1).unwrap();
        assert_eq!((x1, a1.clone(), b1), (x2, a2, b2));
        let u = unary_symbol(&a1).unwrap();
        assert_eq!(a1.relation(u), &[vec![0], vec![1]]);
    }

    #[test]
    fn align_fills_missing_symbols() {
        let sig = Signature::new(vec![("R".into(), 2), ("S".into(), 1)]).unwrap();
        let mut x = RelationalStructure::new("x", Signature::new(vec![("S".into(), 1)]).unwrap(), 2);
        x.add_tuple(0, vec![1]).unwrap();
        let y = x.align_to(&sig).unwrap();
        assert!(y.relation(0).is_empty());
        assert_eq!(y.relation(1), &[vec![1]]);
    }

    #[test]
    fn rejects_bad_tuples() {
        let mut s = one_in_three();
        assert!(matches!(s.add_tuple(0, vec![0, 1]), Err(StructureError::ArityMismatch { .. })));
        assert!(matches!(
            s.add_tuple(0, vec![0, 0, 2]),
            Err(StructureError::ElementOutOfRange { id: 2, size: 2 })
        ));
        assert_eq!(s.add_tuple(0, vec![0, 0, 1]), Ok(false));
    }
}
