//! Graphviz renderings of frames, p-morphisms and countermodels. Posets are
//! drawn as Hasse diagrams, least elements at the bottom.

use std::fmt::Write;

use crate::logic::Countermodel;
use crate::morphism::PMorphism;
use crate::order::Poset;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn write_poset(
    out: &mut String,
    p: &Poset,
    prefix: &str,
    indent: &str,
    label: impl Fn(usize) -> String,
) {
    for x in 0..p.len() {
        let _ = writeln!(out, "{indent}{prefix}{x} [label={}];", quote(&label(x)));
    }
    for (x, y) in p.covers() {
        let _ = writeln!(out, "{indent}{prefix}{x} -> {prefix}{y};");
    }
}

pub fn frame_dot(p: &Poset) -> String {
    let mut out = String::from("digraph frame {\n  rankdir=BT;\n");
    write_poset(&mut out, p, "n", "  ", |x| p.label(x).to_owned());
    out.push_str("}\n");
    out
}

/// Source and target in separate clusters, with dashed edges from each
/// source point to its image.
pub fn pmorphism_dot(m: &PMorphism) -> String {
    let mut out = String::from("digraph pmorphism {\n  rankdir=BT;\n");
    for (name, p, prefix) in [("source", &m.source, "s"), ("target", &m.target, "t")] {
        let _ = writeln!(
            out,
            "  subgraph cluster_{name} {{\n    label={};",
            quote(name)
        );
        write_poset(&mut out, p, prefix, "    ", |x| p.label(x).to_owned());
        out.push_str("  }\n");
    }
    for (x, &y) in m.map.iter().enumerate() {
        let _ = writeln!(out, "  s{x} -> t{y} [style=dashed, constraint=false];");
    }
    out.push_str("}\n");
    out
}

/// Each point lists the atoms it forces; the refuting point is doubled.
pub fn countermodel_dot(cm: &Countermodel) -> String {
    let atoms = cm.forced_atoms();
    let mut out = String::from("digraph countermodel {\n  rankdir=BT;\n");
    write_poset(&mut out, &cm.frame, "n", "  ", |x| {
        format!("{}\n{{{}}}", cm.frame.label(x), atoms[x].join(","))
    });
    let _ = writeln!(out, "  n{} [peripheries=2];", cm.point);
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fork_frame() {
        let dot = frame_dot(&Poset::binary_tree(2));
        assert_eq!(dot.matches("label=").count(), 3);
        assert_eq!(dot.matches(" -> ").count(), 2);
    }

    #[test]
    fn chain_uses_covers_only() {
        let dot = frame_dot(&Poset::chain(["a", "b", "c"]));
        assert_eq!(dot.matches(" -> ").count(), 2);
        assert!(!dot.contains("n0 -> n2"));
    }

    #[test]
    fn labels_are_escaped() {
        assert_eq!(quote("a\"b\\"), r#""a\"b\\""#);
    }
}
