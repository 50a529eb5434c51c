use std::fmt::Write;

use super::{validate, GoalModelError, GoalModelGraph};

/// Renders the graph as Graphviz DOT. Output is deterministic for a
/// canonical graph: nodes in natural id order, edges sorted by kind.
pub fn export_dot(graph: &GoalModelGraph) -> Result<String, GoalModelError> {
    let diags = validate(graph);
    if !diags.is_empty() {
        return Err(GoalModelError::Invalid(diags));
    }
    let mut g = graph.clone();
    g.canonicalize();

    let mut out = String::from("digraph goal_model {\n  rankdir=BT;\n  node [fontname=\"Helvetica\"];\n");
    node(&mut out, &g.root.id, &g.root.name, "root", "shape=parallelogram, peripheries=2");
    for goal in &g.goals {
        node(&mut out, &goal.id, &goal.name, "goal", "shape=parallelogram");
    }
    for obstacle in &g.obstacles {
        node(&mut out, &obstacle.id, &obstacle.name, "obstacle", "shape=invtrapezium");
    }
    for decision in &g.decisions {
        node(&mut out, &decision.id, &decision.name, "decision", "shape=hexagon");
    }
    for alt in &g.alternatives {
        node(&mut out, &alt.id, &alt.name, "alternative", "shape=box, style=rounded");
    }
    for edge in &g.edges {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            escape(&edge.from),
            escape(&edge.to),
            edge.kind.as_str()
        );
    }
    out.push_str("}\n");
    Ok(out)
}

fn node(out: &mut String, id: &str, name: &str, class: &str, attrs: &str) {
    let _ = writeln!(
        out,
        "  \"{}\" [label=\"{}\\n{}\", class=\"{class}\", {attrs}];",
        escape(id),
        escape(id),
        escape(name)
    );
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goal_model::test_support::*;
    use crate::goal_model::{Edge, EdgeKind};

    #[test]
    fn classes_and_edges() {
        let mut g = small();
        g.goals[0].name = "say \"hi\"".into();
        let dot = export_dot(&g).unwrap();
        assert!(dot.starts_with("digraph goal_model {"));
        assert!(dot.contains("\"g0\" [label=\"g0\\nroot\", class=\"root\""));
        assert!(dot.contains("say \\\"hi\\\""));
        assert_eq!(dot.matches("class=\"goal\"").count(), 2);
        assert_eq!(dot.matches("class=\"alternative\"").count(), 2);
        assert!(dot.contains("\"o1\" -> \"g2\" [label=\"obstructs\"];"));
        assert_eq!(dot.matches(" -> ").count(), g.edges.len());
    }

    #[test]
    fn deterministic_regardless_of_input_order() {
        let g = small();
        let mut shuffled = g.clone();
        shuffled.goals.reverse();
        shuffled.edges.reverse();
        assert_eq!(export_dot(&g).unwrap(), export_dot(&shuffled).unwrap());
    }

    #[test]
    fn rejects_invalid_graph() {
        let mut g = small();
        g.edges.push(Edge::new(EdgeKind::Refines, "g1", "g9"));
        assert!(matches!(export_dot(&g), Err(GoalModelError::Invalid(_))));
    }
}
