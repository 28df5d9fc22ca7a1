//! Graphviz output for categories, grids and `Gal/X`.

use petgraph::dot::{Config, Dot};
use petgraph::graph::DiGraph;

use crate::cat_core::FiniteCategory;
use crate::galois_coverings::GalOver;
use crate::grid_monoid::Grid;

fn render(graph: &DiGraph<String, String>) -> String {
    format!("{:?}", Dot::with_config(graph, &[Config::GraphContentOnly]))
        .lines()
        .map(|l| format!("{l}\n"))
        .fold("digraph {\n".to_string(), |acc, l| acc + &l)
        + "}\n"
}

/// Non-identity morphisms as labelled edges.
pub fn category_dot(c: &FiniteCategory) -> String {
    let mut graph = DiGraph::new();
    let nodes: Vec<_> = c
        .objects()
        .map(|x| graph.add_node(c.obj_name(x).to_string()))
        .collect();
    for f in c.morphisms().filter(|&f| !c.is_identity(f)) {
        graph.add_edge(nodes[c.src(f)], nodes[c.dst(f)], c.mor_name(f).to_string());
    }
    render(&graph)
}

/// Covering relations of the grid order, nodes labelled `x ↦ ι(x)`.
pub fn grid_dot(g: &Grid, c: &FiniteCategory) -> String {
    let mut graph = DiGraph::new();
    let nodes: Vec<_> = g
        .objects()
        .map(|x| graph.add_node(format!("{} ↦ {}", g.name(x), c.obj_name(g.image(x)))))
        .collect();
    for a in g.objects() {
        for b in g.objects() {
            let covers = a != b
                && g.le(a, b)
                && !g
                    .objects()
                    .any(|m| m != a && m != b && g.le(a, m) && g.le(m, b));
            if covers {
                let arrow = g
                    .image_arrow(a, b)
                    .expect("comparable objects have an arrow");
                graph.add_edge(nodes[a], nodes[b], c.mor_name(arrow).to_string());
            }
        }
    }
    render(&graph)
}

/// Objects of `Gal/X` labelled by their coverings, with one edge per
/// least transition morphism.
pub fn galois_dot(gal: &GalOver, c: &FiniteCategory) -> String {
    let mut graph = DiGraph::new();
    let nodes: Vec<_> = gal
        .coverings
        .iter()
        .map(|&f| graph.add_node(c.mor_name(f).to_string()))
        .collect();
    for a in 0..nodes.len() {
        for b in 0..nodes.len() {
            if a != b {
                if let Some(t) = gal.transition(c, a, b) {
                    graph.add_edge(nodes[a], nodes[b], c.mor_name(t).to_string());
                }
            }
        }
    }
    render(&graph)
}
