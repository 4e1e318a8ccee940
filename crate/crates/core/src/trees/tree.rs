//! Planar rooted trees and their labelled versions.
//!
//! Vertices are stored in preorder; vertex 0 carries the root edge `e_0`.
//! Leaves are numbered `1..=d` in planar (clockwise) order, which is the
//! order a depth-first walk meets them. Region `i` sits between leaf `i`
//! and leaf `i+1`; region 0 and region `d` meet along the root edge.

use std::fmt;

use thiserror::Error;

use super::labels::{LagTuple, Label};

/// Nested form of a planar tree, used for construction and surgery.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nested<T> {
    Leaf,
    Vertex(T, Vec<Nested<T>>),
}

impl<T> Nested<T> {
    pub fn leaf_count(&self) -> usize {
        match self {
            Nested::Leaf => 1,
            Nested::Vertex(_, cs) => cs.iter().map(Nested::leaf_count).sum(),
        }
    }

    pub fn map<U>(self, f: &mut impl FnMut(T) -> U) -> Nested<U> {
        match self {
            Nested::Leaf => Nested::Leaf,
            Nested::Vertex(t, cs) => {
                let tag = f(t);
                Nested::Vertex(tag, cs.into_iter().map(|c| c.map(f)).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Child {
    Leaf(usize),
    Vertex(usize),
}

/// Edges of a tree. An interior edge is named by its lower vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeId {
    Root,
    Leaf(usize),
    Interior(usize),
}

impl EdgeId {
    pub fn is_interior(self) -> bool {
        matches!(self, EdgeId::Interior(_))
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeId::Root => f.write_str("root"),
            EdgeId::Leaf(i) => write!(f, "leaf{i}"),
            EdgeId::Interior(v) => write!(f, "e{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("tree has {leaves} leaves but {labels} labels (expected leaves + 1)")]
    LabelCount { leaves: usize, labels: usize },
    #[error("a tree needs at least one vertex")]
    NoVertex,
    #[error("vertex {0} has no children")]
    EmptyVertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    children: Vec<Vec<Child>>,
    parent: Vec<Option<usize>>,
    leaf_parent: Vec<usize>,
    span: Vec<(usize, usize)>,
}

impl Tree {
    /// Builds a tree from its nested form; returns the tags in preorder.
    pub fn from_nested<T: Clone>(nested: &Nested<T>) -> Result<(Tree, Vec<T>), TreeError> {
        let Nested::Vertex(..) = nested else {
            return Err(TreeError::NoVertex);
        };
        let mut tree = Tree {
            children: Vec::new(),
            parent: Vec::new(),
            leaf_parent: vec![usize::MAX],
            span: Vec::new(),
        };
        let mut tags = Vec::new();
        tree.push(nested, None, &mut tags)?;
        Ok((tree, tags))
    }

    fn push<T: Clone>(
        &mut self,
        node: &Nested<T>,
        parent: Option<usize>,
        tags: &mut Vec<T>,
    ) -> Result<usize, TreeError> {
        let Nested::Vertex(tag, cs) = node else {
            unreachable!("leaves are handled by the caller")
        };
        let v = self.children.len();
        if cs.is_empty() {
            return Err(TreeError::EmptyVertex(v));
        }
        self.children.push(Vec::new());
        self.parent.push(parent);
        self.span.push((0, 0));
        tags.push(tag.clone());
        let first = self.leaf_parent.len();
        for c in cs {
            let child = match c {
                Nested::Leaf => {
                    let i = self.leaf_parent.len();
                    self.leaf_parent.push(v);
                    Child::Leaf(i)
                }
                Nested::Vertex(..) => Child::Vertex(self.push(c, Some(v), tags)?),
            };
            self.children[v].push(child);
        }
        self.span[v] = (first, self.leaf_parent.len() - 1);
        Ok(v)
    }

    pub fn to_nested(&self) -> Nested<usize> {
        self.nested_at(0)
    }

    fn nested_at(&self, v: usize) -> Nested<usize> {
        Nested::Vertex(
            v,
            self.children[v]
                .iter()
                .map(|c| match c {
                    Child::Leaf(_) => Nested::Leaf,
                    Child::Vertex(w) => self.nested_at(*w),
                })
                .collect(),
        )
    }

    /// Single vertex with `d` leaves.
    pub fn corolla(d: usize) -> Tree {
        Tree::from_nested(&Nested::Vertex((), vec![Nested::Leaf; d]))
            .expect("corolla is well formed")
            .0
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_parent.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.children.len()
    }

    pub fn children(&self, v: usize) -> &[Child] {
        &self.children[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn leaf_parent(&self, i: usize) -> usize {
        self.leaf_parent[i]
    }

    /// Number of adjacent edges, counting the edge towards the root.
    pub fn valency(&self, v: usize) -> usize {
        self.children[v].len() + 1
    }

    /// First and last leaf below `v`.
    pub fn span(&self, v: usize) -> (usize, usize) {
        self.span[v]
    }

    pub fn is_stable(&self) -> bool {
        (0..self.vertex_count()).all(|v| self.valency(v) >= 3)
    }

    pub fn interior_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (1..self.vertex_count()).map(EdgeId::Interior)
    }

    pub fn exterior_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        std::iter::once(EdgeId::Root).chain((1..=self.leaf_count()).map(EdgeId::Leaf))
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.exterior_edges().chain(self.interior_edges())
    }

    /// Leaves `a..=b` lying below the edge.
    pub fn edge_span(&self, e: EdgeId) -> (usize, usize) {
        match e {
            EdgeId::Root => (1, self.leaf_count()),
            EdgeId::Leaf(i) => (i, i),
            EdgeId::Interior(v) => self.span[v],
        }
    }

    /// Endpoints of an edge among the vertices (exterior edges have one).
    pub fn edge_vertices(&self, e: EdgeId) -> Vec<usize> {
        match e {
            EdgeId::Root => vec![0],
            EdgeId::Leaf(i) => vec![self.leaf_parent[i]],
            EdgeId::Interior(v) => vec![self.parent[v].expect("interior edge"), v],
        }
    }

    /// Edges at `v`: the edge towards the root first, then children in order.
    pub fn incident_edges(&self, v: usize) -> Vec<EdgeId> {
        let mut out = vec![if v == 0 { EdgeId::Root } else { EdgeId::Interior(v) }];
        out.extend(self.children[v].iter().map(|c| match c {
            Child::Leaf(i) => EdgeId::Leaf(*i),
            Child::Vertex(w) => EdgeId::Interior(*w),
        }));
        out
    }

    /// Edges strictly between `v` and the root edge, nearest first.
    pub fn path_to_root(&self, v: usize) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            out.push(EdgeId::Interior(cur));
            cur = p;
        }
        out
    }

    /// Vertices from the parent of leaf `i` up to the root vertex.
    pub fn ancestors_of_leaf(&self, i: usize) -> Vec<usize> {
        let mut out = vec![self.leaf_parent[i]];
        while let Some(p) = self.parent[*out.last().unwrap()] {
            out.push(p);
        }
        out
    }

    /// S-expression form, `(v (leaf 1) (v (leaf 2) (leaf 3)))`; vertices in
    /// `marked` are written as `c` instead of `v`.
    pub fn serialize_marked(&self, marked: &dyn Fn(usize) -> bool) -> String {
        let mut out = String::new();
        self.write_sexpr(0, marked, &mut out);
        out
    }

    pub fn serialize(&self) -> String {
        self.serialize_marked(&|_| false)
    }

    fn write_sexpr(&self, v: usize, marked: &dyn Fn(usize) -> bool, out: &mut String) {
        out.push('(');
        out.push(if marked(v) { 'c' } else { 'v' });
        for c in &self.children[v] {
            out.push(' ');
            match c {
                Child::Leaf(i) => out.push_str(&format!("(leaf {i})")),
                Child::Vertex(w) => self.write_sexpr(*w, marked, out),
            }
        }
        out.push(')');
    }

    /// Parses the S-expression form; returns the tree and the set of
    /// vertices written as `c`.
    pub fn parse_marked(text: &str) -> Result<(Tree, Vec<bool>), TreeError> {
        let mut p = SexprParser {
            bytes: text.as_bytes(),
            pos: 0,
            next_leaf: 1,
        };
        p.skip_ws();
        let nested = p.node()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error("trailing input"));
        }
        Tree::from_nested(&nested)
    }

    pub fn parse(text: &str) -> Result<Tree, TreeError> {
        Ok(Self::parse_marked(text)?.0)
    }
}

struct SexprParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    next_leaf: usize,
}

impl SexprParser<'_> {
    fn error(&self, message: &str) -> TreeError {
        TreeError::Parse {
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), TreeError> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", b as char)))
        }
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or("")
    }

    fn node(&mut self) -> Result<Nested<bool>, TreeError> {
        self.expect(b'(')?;
        self.skip_ws();
        let head_pos = self.pos;
        let head = self.word().to_string();
        let node = match head.as_str() {
            "leaf" => {
                self.skip_ws();
                let n_pos = self.pos;
                let n: usize = self
                    .word()
                    .parse()
                    .map_err(|_| self.error("expected a leaf number"))?;
                if n != self.next_leaf {
                    self.pos = n_pos;
                    return Err(self.error(&format!(
                        "leaves must be numbered in planar order; expected {}",
                        self.next_leaf
                    )));
                }
                self.next_leaf += 1;
                Nested::Leaf
            }
            "v" | "c" => {
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.bytes.get(self.pos) {
                        Some(b'(') => children.push(self.node()?),
                        _ => break,
                    }
                }
                if children.is_empty() {
                    return Err(self.error("vertex without children"));
                }
                Nested::Vertex(head == "c", children)
            }
            _ => {
                self.pos = head_pos;
                return Err(self.error("expected `v`, `c` or `leaf`"));
            }
        };
        self.expect(b')')?;
        Ok(node)
    }
}

/// A planar tree whose regions carry Lagrangian labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelledTree {
    tree: Tree,
    labels: LagTuple,
}

impl LabelledTree {
    pub fn new(tree: Tree, labels: LagTuple) -> Result<Self, TreeError> {
        if labels.d() != tree.leaf_count() {
            return Err(TreeError::LabelCount {
                leaves: tree.leaf_count(),
                labels: labels.labels().len(),
            });
        }
        Ok(Self { tree, labels })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn labels(&self) -> &LagTuple {
        &self.labels
    }

    pub fn d(&self) -> usize {
        self.labels.d()
    }

    /// The two region labels on either side of `e`, left region first.
    pub fn edge_labels(&self, e: EdgeId) -> (&Label, &Label) {
        let (a, b) = self.tree.edge_span(e);
        (self.labels.get(a - 1), self.labels.get(b))
    }

    pub fn is_unilabelled(&self, e: EdgeId) -> bool {
        let (l, r) = self.edge_labels(e);
        l == r
    }

    /// Label tuple seen from vertex `v`, starting at the region left of the
    /// edge towards the root.
    pub fn vertex_labels(&self, v: usize) -> Vec<Label> {
        let (first, _) = self.tree.span(v);
        let mut out = vec![self.labels.get(first - 1).clone()];
        for c in self.tree.children(v) {
            let b = match c {
                Child::Leaf(i) => *i,
                Child::Vertex(w) => self.tree.span(*w).1,
            };
            out.push(self.labels.get(b).clone());
        }
        out
    }

    /// Interior edges separating distinct labels (`E_F^int`).
    pub fn fundamental_interior_edges(&self) -> Vec<EdgeId> {
        self.tree
            .interior_edges()
            .filter(|e| !self.is_unilabelled(*e))
            .collect()
    }

    /// Interior unilabelled edges (`E_U^int`).
    pub fn unilabelled_interior_edges(&self) -> Vec<EdgeId> {
        self.tree
            .interior_edges()
            .filter(|e| self.is_unilabelled(*e))
            .collect()
    }

    pub fn serialize(&self) -> String {
        format!("labels: {}\n{}\n", self.labels, self.tree.serialize())
    }

    /// Reads a `labels:` line followed by the tree S-expression.
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let (labels, rest) = split_labels_header(text)?;
        let tree = Tree::parse(rest.trim())?;
        Self::new(tree, labels)
    }
}

pub(crate) fn split_labels_header(text: &str) -> Result<(LagTuple, &str), TreeError> {
    let text = text.trim_start();
    let Some(rest) = text.strip_prefix("labels:") else {
        return Err(TreeError::Parse {
            column: 1,
            message: "expected a `labels:` header".into(),
        });
    };
    let (line, rest) = rest.split_once('\n').unwrap_or((rest, ""));
    let labels = line.parse::<LagTuple>().map_err(|e| TreeError::Parse {
        column: 8,
        message: e.to_string(),
    })?;
    Ok((labels, rest))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIGURE_TREE: &str = "(v (leaf 1) (v (leaf 2) (v (leaf 3) (leaf 4)) (leaf 5) (leaf 6)))";

    #[test]
    fn sexpr_round_trip() {
        let t = Tree::parse(FIGURE_TREE).unwrap();
        assert_eq!(t.leaf_count(), 6);
        assert_eq!(t.vertex_count(), 3);
        assert_eq!(t.serialize(), FIGURE_TREE);
        assert_eq!(t.span(1), (2, 6));
        assert_eq!(t.span(2), (3, 4));
    }

    #[test]
    fn parse_errors_are_located() {
        match Tree::parse("(v (leaf 2))") {
            Err(TreeError::Parse { column, .. }) => assert_eq!(column, 10),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Tree::parse("(v)").is_err());
        assert!(Tree::parse("(x (leaf 1))").is_err());
        assert!(Tree::parse("(v (leaf 1)) junk").is_err());
    }

    #[test]
    fn edge_count_identity() {
        let t = Tree::parse(FIGURE_TREE).unwrap();
        assert_eq!(t.edges().count(), t.vertex_count() + t.leaf_count());
    }

    #[test]
    fn labelled_edges_on_figure_tree() {
        let lt = LabelledTree::new(
            Tree::parse(FIGURE_TREE).unwrap(),
            "(L0,L0,L2,L3,L2,L1,L0)".parse().unwrap(),
        )
        .unwrap();
        assert!(lt.is_unilabelled(EdgeId::Root));
        assert!(lt.is_unilabelled(EdgeId::Leaf(1)));
        assert!(lt.is_unilabelled(EdgeId::Interior(1)));
        assert!(lt.is_unilabelled(EdgeId::Interior(2)));
        assert!(!lt.is_unilabelled(EdgeId::Leaf(2)));
        let names: Vec<String> = lt.vertex_labels(1).iter().map(|l| l.to_string()).collect();
        assert_eq!(names, ["L0", "L2", "L2", "L1", "L0"]);
    }

    #[test]
    fn label_count_mismatch() {
        let err = LabelledTree::new(Tree::corolla(2), LagTuple::distinct(3));
        assert!(matches!(err, Err(TreeError::LabelCount { .. })));
    }

    #[test]
    fn labelled_round_trip() {
        let text = "labels: (L0,L1,L2,L3)\n(v (v (leaf 1) (leaf 2)) (leaf 3))\n";
        assert_eq!(LabelledTree::parse(text).unwrap().serialize(), text);
    }
}
