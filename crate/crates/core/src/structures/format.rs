//! Line-oriented text format for structures, instances and templates.
//!
//! ```text
//! structure one_in_three   # or `instance <name>`
//! domain 2
//! rel R1 3
//! t 0 0 1
//! t 0 1 0
//! t 1 0 0
//! ```
//!
//! A template file is a `template [name]` line followed by two `structure`
//! blocks, A then B.

use std::fmt::Write as _;

use super::{RelationalStructure, Signature, StructureError};
pub use crate::textio::ParseError;
use crate::textio::Lines;

fn header<'a>(lines: &mut Lines<'a>, keyword: &str) -> Result<String, ParseError> {
    let l = lines.next(&format!("`{keyword}` header"))?;
    if l[0].text != keyword {
        return Err(l[0].error(format!("expected `{keyword}`, found `{}`", l[0].text)));
    }
    match l.len() {
        1 => Ok(String::new()),
        2 => Ok(l[1].text.to_string()),
        _ => Err(l[2].error("unexpected token after name")),
    }
}

fn block(lines: &mut Lines<'_>, keyword: &str) -> Result<RelationalStructure, ParseError> {
    let name = header(lines, keyword)?;
    let l = lines.next("`domain` line")?;
    if l[0].text != "domain" {
        return Err(l[0].error(format!("expected `domain`, found `{}`", l[0].text)));
    }
    if l.len() != 2 {
        return Err(l[0].error("`domain` takes exactly one argument"));
    }
    let n = l[1].number()?;
    if n == 0 {
        return Err(l[1].error("domain must be nonempty"));
    }
    let mut s = RelationalStructure::new(name, Signature::default(), n);
    let mut current: Option<usize> = None;
    while let Some(l) = lines.peek() {
        match l[0].text {
            "rel" => {
                if l.len() != 3 {
                    return Err(l[0].error("`rel` takes a name and an arity"));
                }
                let arity = l[2].number()?;
                let sym = s.add_symbol(l[1].text, arity).map_err(|e| match e {
                    StructureError::DuplicateSymbol(n) => {
                        l[1].error(format!("duplicate relation name `{n}`"))
                    }
                    other => l[2].error(other.to_string()),
                })?;
                current = Some(sym);
            }
            "t" => {
                let sym = current.ok_or_else(|| l[0].error("tuple before any `rel`"))?;
                let arity = s.signature().arity(sym);
                if l.len() - 1 != arity {
                    return Err(l[0].error(format!(
                        "arity mismatch: relation `{}` has arity {arity}, tuple has {} entries",
                        s.signature().name(sym),
                        l.len() - 1
                    )));
                }
                let mut tuple = Vec::with_capacity(arity);
                for tok in &l[1..] {
                    let id = tok.number()?;
                    if id >= n {
                        return Err(tok.error(format!(
                            "element id out of range: {id} is not below domain size {n}"
                        )));
                    }
                    tuple.push(id);
                }
                s.add_tuple(sym, tuple).expect("checked tuple");
            }
            _ => break,
        }
        lines.pos += 1;
    }
    Ok(s)
}

pub fn parse_structure(text: &str) -> Result<RelationalStructure, ParseError> {
    let mut lines = Lines::new(text);
    let s = block(&mut lines, "structure")?;
    lines.finish()?;
    Ok(s)
}

pub fn parse_instance(text: &str) -> Result<RelationalStructure, ParseError> {
    let mut lines = Lines::new(text);
    let s = block(&mut lines, "instance")?;
    lines.finish()?;
    Ok(s)
}

/// Returns `(A, B)`; the template name is stored nowhere but in the file.
pub fn parse_template(text: &str) -> Result<(RelationalStructure, RelationalStructure), ParseError> {
    let mut lines = Lines::new(text);
    header(&mut lines, "template")?;
    let a = block(&mut lines, "structure")?;
    let b = block(&mut lines, "structure")?;
    lines.finish()?;
    Ok((a, b))
}

fn write_block(out: &mut String, keyword: &str, s: &RelationalStructure) {
    if s.name.is_empty() {
        let _ = writeln!(out, "{keyword}");
    } else {
        let _ = writeln!(out, "{keyword} {}", s.name);
    }
    let _ = writeln!(out, "domain {}", s.domain_size());
    for (sym, (name, arity)) in s.signature().iter().enumerate() {
        let _ = writeln!(out, "rel {name} {arity}");
        for t in s.relation(sym) {
            let entries: Vec<String> = t.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "t {}", entries.join(" "));
        }
    }
}

pub fn serialize_structure(s: &RelationalStructure) -> String {
    let mut out = String::new();
    write_block(&mut out, "structure", s);
    out
}

pub fn serialize_instance(s: &RelationalStructure) -> String {
    let mut out = String::new();
    write_block(&mut out, "instance", s);
    out
}

pub fn serialize_template(name: &str, a: &RelationalStructure, b: &RelationalStructure) -> String {
    let mut out = if name.is_empty() { "template\n".to_string() } else { format!("template {name}\n") };
    write_block(&mut out, "structure", a);
    write_block(&mut out, "structure", b);
    out
}
