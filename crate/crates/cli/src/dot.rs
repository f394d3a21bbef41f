//! Graphviz output.

use std::fmt::Write;

use catv_core::variance::VarianceStruct;
use catv_core::Mor;

#[derive(Clone, Debug, Default)]
pub struct Digraph {
    pub name: String,
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: String,
    pub attrs: Vec<(String, String)>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl Digraph {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "digraph {} {{", quote(&self.name)).unwrap();
        for n in &self.nodes {
            writeln!(out, "  {};", quote(n)).unwrap();
        }
        for e in &self.edges {
            let mut attrs = vec![format!("label={}", quote(&e.label))];
            attrs.extend(e.attrs.iter().map(|(k, v)| format!("{k}={}", quote(v))));
            writeln!(
                out,
                "  {} -> {} [{}];",
                quote(&self.nodes[e.from]),
                quote(&self.nodes[e.to]),
                attrs.join(", ")
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// `e`, `m`, `em` (both, i.e. an identity) or `mixed`.
pub fn role(v: &VarianceStruct, f: Mor) -> &'static str {
    match (v.is_covariant(f), v.is_contravariant(f)) {
        (true, true) => "em",
        (true, false) => "e",
        (false, true) => "m",
        (false, false) => "mixed",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_quoted() {
        let g = Digraph {
            name: "R".into(),
            nodes: vec!["a".into(), "(1,2)".into()],
            edges: vec![Edge {
                from: 0,
                to: 1,
                label: "u\"".into(),
                attrs: vec![("color".into(), "red".into())],
            }],
        };
        assert_eq!(
            g.render(),
            "digraph \"R\" {\n  \"a\";\n  \"(1,2)\";\n  \"a\" -> \"(1,2)\" [label=\"u\\\"\", color=\"red\"];\n}\n"
        );
    }
}
