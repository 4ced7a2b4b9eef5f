//! Graphviz rendering of a network and, optionally, an outcome.

use std::fmt::Write;

use crate::model::{Outcome, TradingNetwork};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Deterministic DOT text: one node per firm (terminals drawn as double
/// circles), one edge per contract, solid if it belongs to `outcome` and
/// dashed otherwise. A network without firms yields only the header.
pub fn export_dot(net: &TradingNetwork, outcome: Option<&Outcome>) -> String {
    let mut out = String::from("digraph trading_network {\n  rankdir=LR;\n  node [shape=box];\n");
    for f in net.firms() {
        let shape = if net.is_terminal(f) { " [shape=doublecircle]" } else { "" };
        writeln!(out, "  {}{shape};", quote(net.firm_name(f))).unwrap();
    }
    for c in net.contracts() {
        let style = match outcome {
            Some(a) if a.contains(c.id) => "solid",
            _ => "dashed",
        };
        writeln!(
            out,
            "  {} -> {} [label={}, style={style}];",
            quote(net.firm_name(c.seller)),
            quote(net.firm_name(c.buyer)),
            quote(net.contract_name(c.id))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NetworkBuilder;
    use crate::reduce::{reduce_acyclic_bipartition, Digraph};

    #[test]
    fn empty_network_is_header_only() {
        let net = NetworkBuilder::new().build().unwrap();
        assert_eq!(export_dot(&net, None), "digraph trading_network {\n  rankdir=LR;\n  node [shape=box];\n}\n");
    }

    #[test]
    fn two_gadgets() {
        let d = Digraph::indexed(2, [(0, 1)]).unwrap();
        let (net, map) = reduce_acyclic_bipartition(&d).unwrap();
        let a: Outcome = [map.gadget_contracts[0].feed].into();
        let text = export_dot(&net, Some(&a));
        assert_eq!(text.lines().filter(|l| l.contains("->")).count(), 8 * 2 + 2);
        assert_eq!(text.lines().filter(|l| l.trim_end().ends_with(';') && !l.contains("->") && l.starts_with("  \"")).count(), 14);
        assert_eq!(text.matches("style=solid").count(), 1);
        assert_eq!(text.matches("doublecircle").count(), 2);
        assert_eq!(text, export_dot(&net, Some(&a)));
    }
}
