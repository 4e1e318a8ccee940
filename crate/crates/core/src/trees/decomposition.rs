//! Splitting a labelled tree into its reduced part and unilabelled forests.

use std::collections::{BTreeMap, BTreeSet};

use super::labels::{reduce_tuple, Label};
use super::tree::{EdgeId, LabelledTree};

/// A connected piece of `T_red`: vertices joined by non-unilabelled interior
/// edges, together with every non-unilabelled edge touching them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReducedComponent {
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeId>,
}

/// A connected set of unilabelled edges sharing one label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct UniComponent {
    /// Index of the label in the fundamental tuple.
    pub fundamental_index: usize,
    pub label: Label,
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub reduced_components: Vec<ReducedComponent>,
    pub uni_components: Vec<UniComponent>,
    /// `(i, j)` ↦ leaf index of `e^i_j(T_uni)`; 0 denotes the root edge.
    pub exterior_numbering: BTreeMap<(usize, usize), usize>,
}

impl TreeDecomposition {
    /// Components of `T_j^F` for the given fundamental index.
    pub fn forest(&self, j: usize) -> Vec<&UniComponent> {
        self.uni_components
            .iter()
            .filter(|c| c.fundamental_index == j)
            .collect()
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn fundamental_decomposition(t: &LabelledTree) -> TreeDecomposition {
    let tree = t.tree();
    let nv = tree.vertex_count();

    let f_vertices: BTreeSet<usize> = (0..nv)
        .filter(|&v| tree.incident_edges(v).iter().any(|e| !t.is_unilabelled(*e)))
        .collect();
    let mut vsets = DisjointSets::new(nv);
    for e in t.fundamental_interior_edges() {
        let ends = tree.edge_vertices(e);
        vsets.union(ends[0], ends[1]);
    }
    let mut by_root: BTreeMap<usize, ReducedComponent> = BTreeMap::new();
    for &v in &f_vertices {
        let comp = by_root.entry(vsets.find(v)).or_insert(ReducedComponent {
            vertices: Vec::new(),
            edges: Vec::new(),
        });
        comp.vertices.push(v);
        for e in tree.incident_edges(v) {
            if !t.is_unilabelled(e) && !comp.edges.contains(&e) {
                comp.edges.push(e);
            }
        }
    }
    let mut reduced_components: Vec<ReducedComponent> = by_root
        .into_values()
        .map(|mut c| {
            c.edges.sort();
            c
        })
        .collect();
    reduced_components.sort();

    let uni: Vec<EdgeId> = tree.edges().filter(|e| t.is_unilabelled(*e)).collect();
    let mut esets = DisjointSets::new(uni.len());
    for a in 0..uni.len() {
        for b in a + 1..uni.len() {
            let shares_vertex = tree
                .edge_vertices(uni[a])
                .iter()
                .any(|v| tree.edge_vertices(uni[b]).contains(v));
            if shares_vertex && t.edge_labels(uni[a]).0 == t.edge_labels(uni[b]).0 {
                esets.union(a, b);
            }
        }
    }
    let reduced = reduce_tuple(t.labels());
    let mut groups: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
    for (k, e) in uni.iter().enumerate() {
        groups.entry(esets.find(k)).or_default().push(*e);
    }
    let mut uni_components: Vec<UniComponent> = groups
        .into_values()
        .map(|mut edges| {
            edges.sort();
            let label = t.edge_labels(edges[0]).0.clone();
            UniComponent {
                fundamental_index: reduced
                    .fundamental_index(&label)
                    .expect("edge labels occur in the tuple"),
                label,
                edges,
            }
        })
        .collect();
    uni_components.sort();

    TreeDecomposition {
        reduced_components,
        uni_components,
        exterior_numbering: exterior_numbering(t),
    }
}

/// `e^i_j(T_uni) = e_{Σ_{k<i} m̄_k + j}(T)`, indices taken mod `d+1` so the
/// last run of `L_0` closes up through the root edge.
fn exterior_numbering(t: &LabelledTree) -> BTreeMap<(usize, usize), usize> {
    let r = reduce_tuple(t.labels());
    let d = t.d();
    let mut out = BTreeMap::new();
    if r.constant {
        for j in 1..=d + 1 {
            out.insert((0, j), j % (d + 1));
        }
        return out;
    }
    let bars = r.bar_multiplicities();
    let last = bars.len() - 1;
    let mut offset = 0;
    for (i, &m) in bars.iter().enumerate() {
        let top = if i == last { m } else { m.saturating_sub(1) };
        for j in 1..=top {
            out.insert((i, j), (offset + j) % (d + 1));
        }
        offset += m;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::labels::LagTuple;
    use crate::trees::tree::Tree;

    fn figure_tree() -> LabelledTree {
        LabelledTree::new(
            Tree::parse("(v (leaf 1) (v (leaf 2) (v (leaf 3) (leaf 4)) (leaf 5) (leaf 6)))").unwrap(),
            "(L0,L0,L2,L3,L2,L1,L0)".parse().unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn figure_tree_components() {
        let dec = fundamental_decomposition(&figure_tree());
        assert_eq!(
            dec.reduced_components,
            vec![
                ReducedComponent {
                    vertices: vec![1],
                    edges: vec![EdgeId::Leaf(2), EdgeId::Leaf(5), EdgeId::Leaf(6)],
                },
                ReducedComponent {
                    vertices: vec![2],
                    edges: vec![EdgeId::Leaf(3), EdgeId::Leaf(4)],
                },
            ]
        );
        let l0 = dec.forest(0);
        assert_eq!(l0.len(), 1);
        assert_eq!(
            l0[0].edges,
            vec![EdgeId::Root, EdgeId::Leaf(1), EdgeId::Interior(1)]
        );
        let l2 = dec.forest(1);
        assert_eq!(l2.len(), 1);
        assert_eq!(l2[0].edges, vec![EdgeId::Interior(2)]);
        assert_eq!(
            dec.exterior_numbering,
            BTreeMap::from([((0, 1), 1), ((5, 1), 0)])
        );
    }

    #[test]
    fn corolla_extremes() {
        let constant = LabelledTree::new(Tree::corolla(3), LagTuple::constant(3)).unwrap();
        let dec = fundamental_decomposition(&constant);
        assert!(dec.reduced_components.is_empty());
        assert_eq!(dec.uni_components.len(), 1);
        assert_eq!(dec.uni_components[0].edges.len(), 4);
        assert_eq!(dec.exterior_numbering.len(), 4);

        let distinct = LabelledTree::new(Tree::corolla(3), LagTuple::distinct(3)).unwrap();
        let dec = fundamental_decomposition(&distinct);
        assert_eq!(dec.reduced_components.len(), 1);
        assert_eq!(dec.reduced_components[0].edges.len(), 4);
        assert!(dec.uni_components.is_empty());
        assert!(dec.exterior_numbering.is_empty());
    }

    #[test]
    fn every_edge_lands_in_exactly_one_piece() {
        let t = figure_tree();
        let dec = fundamental_decomposition(&t);
        let mut seen: Vec<EdgeId> = dec
            .reduced_components
            .iter()
            .flat_map(|c| c.edges.clone())
            .chain(dec.uni_components.iter().flat_map(|c| c.edges.clone()))
            .collect();
        seen.sort();
        let mut all: Vec<EdgeId> = t.tree().edges().collect();
        all.sort();
        assert_eq!(seen, all);
    }
}
