//! Graphviz export. Marked locations get a double border, the initial one
//! an arrow from an invisible node, uncontrollable events dashed edges and
//! forcible events underlined labels.

use std::fmt::Write as _;

use crate::model::{ClockConstraint, TimedAutomaton};
use crate::oracle::{Label, RegionAutomaton};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n"))
}

fn html(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn edge_label(event: &str, forcible: bool, rest: &[String]) -> String {
    if forcible {
        let tail: String = rest.iter().map(|r| format!(" / {}", html(r))).collect();
        format!("<<U>{}</U>{tail}>", html(event))
    } else {
        quote(&std::iter::once(event.to_string()).chain(rest.iter().cloned()).collect::<Vec<_>>().join(" / "))
    }
}

pub fn ta_to_dot(ta: &TimedAutomaton) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph {} {{", quote(&ta.name));
    s.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    s.push_str("  __init [shape=none, label=\"\", width=0, height=0];\n");
    for l in &ta.locations {
        let shape = if l.marked { "doublecircle" } else { "circle" };
        let label = if l.invariant == ClockConstraint::True {
            l.name.clone()
        } else {
            format!("{}\n{}", l.name, l.invariant)
        };
        let _ = writeln!(s, "  {} [shape={shape}, label={}];", quote(&l.name), quote(&label));
    }
    let _ = writeln!(s, "  __init -> {};", quote(&ta.locations[ta.initial].name));
    for e in &ta.edges {
        let ev = ta.event(&e.event).expect("declared event");
        let mut rest = Vec::new();
        if e.guard != ClockConstraint::True {
            rest.push(e.guard.to_string());
        }
        if !e.resets.is_empty() {
            rest.push(format!("{{{}}} := 0", e.resets.join(", ")));
        }
        let style = if ev.controllable { "solid" } else { "dashed" };
        let _ = writeln!(
            s,
            "  {} -> {} [label={}, style={style}];",
            quote(&ta.locations[e.source].name),
            quote(&ta.locations[e.target].name),
            edge_label(&e.event, ev.forcible, &rest)
        );
    }
    s.push_str("}\n");
    s
}

pub fn ra_to_dot(ra: &RegionAutomaton) -> String {
    let mut s = String::new();
    s.push_str("digraph region_automaton {\n  rankdir=LR;\n  node [shape=box];\n");
    s.push_str("  __init [shape=none, label=\"\", width=0, height=0];\n");
    for i in 0..ra.len() {
        let (loc, region) = ra.describe(i);
        let peripheries = if ra.is_marked(i) { 2 } else { 1 };
        let _ = writeln!(s, "  s{i} [peripheries={peripheries}, label={}];", quote(&format!("{loc}\n{region}")));
    }
    if let Some(i) = ra.initial {
        let _ = writeln!(s, "  __init -> s{i};");
    }
    for t in &ra.transitions {
        let attrs = match &t.label {
            Label::Tau => "label=\"τ\", style=dotted, color=gray40".to_string(),
            l => {
                let style = if ra.is_controllable(l) { "solid" } else { "dashed" };
                format!("label={}, style={style}", edge_label(l.name(), ra.is_forcible(l), &[]))
            }
        };
        let _ = writeln!(s, "  s{} -> s{} [{attrs}];", t.source, t.target);
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_model;
    use crate::model::product_all;
    use crate::oracle::region_automaton;

    #[test]
    fn bus_pedestrian_styles() {
        let g = product_all(&parse_model(include_str!("../../models/bus_pedestrian.ta")).unwrap()).unwrap();
        let d = ta_to_dot(&g);
        assert!(d.contains("\"a.r.s0\" -> \"g.r.bot\" [label=\"pass / x = 2\", style=dashed]"));
        assert!(d.contains("<<U>jump</U> / y &gt;= 1>, style=solid"));
        assert!(d.contains("\"g.c.s2\" [shape=doublecircle"));
        assert!(d.contains("__init -> \"a.r.s0\""));
        let ra = region_automaton(&g, &g.clock_ceiling()).unwrap();
        let r = ra_to_dot(&ra);
        assert!(r.contains("s0 -> s1 [label=\"τ\""));
        assert!(r.contains("y-x=0"));
    }

    #[test]
    fn single_location() {
        let t = parse_model("plant P { location l: initial; }").unwrap().remove(0);
        let d = ta_to_dot(&t);
        assert_eq!(d.matches(" -> ").count(), 1);
        assert!(d.contains("\"l\" [shape=circle, label=\"l\"]"));
    }
}
