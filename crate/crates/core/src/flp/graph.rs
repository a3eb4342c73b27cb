use std::collections::HashMap;

use petgraph::algo::is_cyclic_directed;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::ground::{AtomId, AtomKind, GroundProgram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Atom(AtomId),
    /// Index into `GroundProgram::externals`.
    Instance(usize),
}

/// Positive body-to-head edges between ordinary atoms, plus
/// input atom -> external instance -> head edges for every external literal
/// of either sign. Inputs at positions tagged irrelevant contribute nothing.
#[derive(Debug, Clone)]
pub struct DependencyGraph {
    graph: DiGraph<Node, ()>,
    index: HashMap<Node, NodeIndex>,
}

impl DependencyGraph {
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn has_edge(&self, from: Node, to: Node) -> bool {
        match (self.index.get(&from), self.index.get(&to)) {
            (Some(&a), Some(&b)) => self.graph.contains_edge(a, b),
            _ => false,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        is_cyclic_directed(&self.graph)
    }
}

pub fn build_dependency_graph(gp: &GroundProgram) -> DependencyGraph {
    let mut graph = DiGraph::new();
    let mut index = HashMap::new();
    for a in gp.ordinary_atoms() {
        index.insert(Node::Atom(a), graph.add_node(Node::Atom(a)));
    }
    for i in 0..gp.externals.len() {
        index.insert(Node::Instance(i), graph.add_node(Node::Instance(i)));
    }
    for (i, inst) in gp.externals.iter().enumerate() {
        for a in &inst.relevant_input_atoms {
            graph.update_edge(index[&Node::Atom(*a)], index[&Node::Instance(i)], ());
        }
    }
    for rule in &gp.rules {
        for l in &rule.body {
            let from = match gp.table.kind(l.atom) {
                AtomKind::Ordinary if l.positive => Node::Atom(l.atom),
                AtomKind::Ordinary => continue,
                _ => Node::Instance(gp.instance_index(l.atom).expect("replacement atom")),
            };
            for h in &rule.head {
                graph.update_edge(index[&from], index[&Node::Atom(*h)], ());
            }
        }
    }
    DependencyGraph { graph, index }
}

/// True iff some candidate passing the compatibility check may still fail
/// minimality, which requires a cycle in the dependency graph.
pub fn needs_flp_check(graph: &DependencyGraph) -> bool {
    graph.is_cyclic()
}
