//! Grafting the root of one labelled tree onto a leaf of another.

use thiserror::Error;

use super::labels::{LagTuple, Label};
use super::tree::{EdgeId, LabelledTree, Nested, Tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlueError {
    #[error("leaf {leaf} does not exist in a tree with {leaves} leaves")]
    NoSuchLeaf { leaf: usize, leaves: usize },
    #[error(
        "labels do not match: the grafted root sees ({root_left},{root_right}) but leaf {leaf} \
         sees ({leaf_left},{leaf_right})"
    )]
    Inadmissible {
        leaf: usize,
        root_left: Label,
        root_right: Label,
        leaf_left: Label,
        leaf_right: Label,
    },
}

/// Which input tree a vertex of the glued tree came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    First(usize),
    Second(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Glued {
    pub tree: LabelledTree,
    /// The new interior edge `e_g`, formerly `e_0(T_1)` and `e_i(T_2)`.
    pub glued_edge: EdgeId,
    /// Origin of every vertex of the result, in preorder.
    pub origin: Vec<Origin>,
}

impl Glued {
    /// Interior edge of the result corresponding to an interior edge of one
    /// of the inputs.
    pub fn image(&self, from: Origin) -> EdgeId {
        let v = self
            .origin
            .iter()
            .position(|o| *o == from)
            .expect("every input vertex survives gluing");
        EdgeId::Interior(v)
    }
}

/// Replaces leaf `i` of `t2` by the tree `t1`, identifying `e_0(T_1)` with
/// `e_i(T_2)`.
///
/// The edge `e_i(T_2)` separates regions `i-1` and `i` of `T_2`, and the
/// root of `T_1` separates regions `d_1` and `0` of `T_1`, so the gluing is
/// admissible iff `L^1_0 = L^2_{i-1}` and `L^1_{d_1} = L^2_i`. The result is
/// labelled `(L^2_0, …, L^2_{i-1}, L^1_1, …, L^1_{d_1-1}, L^2_i, …, L^2_{d_2})`.
pub fn glue_trees(t1: &LabelledTree, i: usize, t2: &LabelledTree) -> Result<Glued, GlueError> {
    let d1 = t1.d();
    let d2 = t2.d();
    if i == 0 || i > d2 {
        return Err(GlueError::NoSuchLeaf { leaf: i, leaves: d2 });
    }
    let l1 = t1.labels().labels();
    let l2 = t2.labels().labels();
    if l1[0] != l2[i - 1] || l1[d1] != l2[i] {
        return Err(GlueError::Inadmissible {
            leaf: i,
            root_left: l1[0].clone(),
            root_right: l1[d1].clone(),
            leaf_left: l2[i - 1].clone(),
            leaf_right: l2[i].clone(),
        });
    }
    let mut labels: Vec<Label> = l2[..i].to_vec();
    labels.extend_from_slice(&l1[1..d1]);
    labels.extend_from_slice(&l2[i..]);

    let host = t2.tree().to_nested().map(&mut Origin::Second);
    let graft = t1.tree().to_nested().map(&mut Origin::First);
    let mut counter = 0;
    let nested = replace_leaf(host, i, &graft, &mut counter);
    let (tree, origin) = Tree::from_nested(&nested).expect("gluing preserves well-formedness");
    let glued_vertex = origin
        .iter()
        .position(|o| *o == Origin::First(0))
        .expect("graft root present");
    let tree = LabelledTree::new(tree, LagTuple::new(labels).expect("length ≥ 2"))
        .expect("label count matches by construction");
    Ok(Glued {
        tree,
        glued_edge: EdgeId::Interior(glued_vertex),
        origin,
    })
}

fn replace_leaf(
    node: Nested<Origin>,
    target: usize,
    graft: &Nested<Origin>,
    seen: &mut usize,
) -> Nested<Origin> {
    match node {
        Nested::Leaf => {
            *seen += 1;
            if *seen == target {
                graft.clone()
            } else {
                Nested::Leaf
            }
        }
        Nested::Vertex(tag, cs) => Nested::Vertex(
            tag,
            cs.into_iter()
                .map(|c| replace_leaf(c, target, graft, seen))
                .collect(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corolla(labels: &str) -> LabelledTree {
        let l: LagTuple = labels.parse().unwrap();
        LabelledTree::new(Tree::corolla(l.d()), l).unwrap()
    }

    #[test]
    fn glues_two_corollas() {
        let g = glue_trees(&corolla("(L0,L1,L2)"), 1, &corolla("(L0,L2,L3)")).unwrap();
        assert_eq!(g.tree.labels().to_string(), "(L0,L1,L2,L3)");
        assert_eq!(g.tree.d(), 3);
        assert_eq!(g.tree.tree().serialize(), "(v (v (leaf 1) (leaf 2)) (leaf 3))");
        assert_eq!(g.glued_edge, EdgeId::Interior(1));
    }

    #[test]
    fn glue_at_last_leaf() {
        let g = glue_trees(&corolla("(L2,L3,L0)"), 2, &corolla("(L0,L1,L2,L0)")).unwrap_err();
        assert!(matches!(g, GlueError::Inadmissible { .. }));
        let g = glue_trees(&corolla("(L1,L3,L2)"), 2, &corolla("(L0,L1,L2)")).unwrap();
        assert_eq!(g.tree.labels().to_string(), "(L0,L1,L3,L2)");
        assert_eq!(g.tree.tree().serialize(), "(v (leaf 1) (v (leaf 2) (leaf 3)))");
    }

    #[test]
    fn rejects_label_mismatch_and_bad_leaf() {
        let e = glue_trees(&corolla("(L0,L1,L2)"), 1, &corolla("(L5,L6,L7)"));
        assert!(matches!(e, Err(GlueError::Inadmissible { .. })));
        let e = glue_trees(&corolla("(L0,L1,L2)"), 3, &corolla("(L0,L2,L3)"));
        assert!(matches!(e, Err(GlueError::NoSuchLeaf { .. })));
    }

    #[test]
    fn unilabelled_gluing() {
        let g = glue_trees(&corolla("(A,B,A)"), 2, &corolla("(C,A,A)")).unwrap();
        assert_eq!(g.tree.labels().to_string(), "(C,A,B,A)");
        assert!(g.tree.is_unilabelled(g.glued_edge));
    }
}
