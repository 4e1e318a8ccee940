//! Colored trees, their metric cones, and multiplihedron strata.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use super::stratum::Stratum;
use crate::exact::{extreme_rays, nonnegative_vertex, parse_rational, Feasibility, Matrix, Rat};
use crate::trees::{EdgeId, LabelledTree, LagTuple, Nested, Tree, TreeError};

/// A labelled tree (2-valent vertices allowed) with a set of colored
/// vertices and optionally some prescribed interior edge lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredTree {
    pub tree: LabelledTree,
    pub colored: BTreeSet<usize>,
    pub fixed_lengths: BTreeMap<EdgeId, Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringViolation {
    #[error("the path from leaf {leaf} to the root meets no colored vertex")]
    NoColoredVertex { leaf: usize },
    #[error("the path from leaf {leaf} to the root meets colored vertices {first} and {second}")]
    SeveralColored {
        leaf: usize,
        first: usize,
        second: usize,
    },
    #[error("vertex {vertex} has valency 2 but is not colored")]
    UncoloredTwoValent { vertex: usize },
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("prescribed length on {0} is negative or not on an interior edge")]
    BadFixedLength(EdgeId),
    #[error("colored vertices {first} and {second} cannot sit at equal distance from the root")]
    Infeasible { first: usize, second: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoredParseError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

impl ColoredTree {
    pub fn new(tree: LabelledTree, colored: BTreeSet<usize>) -> Self {
        Self {
            tree,
            colored,
            fixed_lengths: BTreeMap::new(),
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = format!(
            "labels: {}\n{}\n",
            self.tree.labels(),
            self.tree
                .tree()
                .serialize_marked(&|v| self.colored.contains(&v))
        );
        for (e, l) in &self.fixed_lengths {
            out.push_str(&format!("len {e} = {}\n", crate::exact::format_rational(l)));
        }
        out
    }

    /// Reads `labels:`, a tree with colored vertices written `(c …)`, and
    /// optional `len e<v> = p/q` lines prescribing lengths.
    pub fn parse(text: &str) -> Result<Self, ColoredParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let bad = |line: usize, message: &str| ColoredParseError::Line {
            line: line + 1,
            message: message.to_string(),
        };
        let (n, header) = lines.next().ok_or_else(|| bad(0, "empty input"))?;
        let labels: LagTuple = header
            .trim()
            .strip_prefix("labels:")
            .ok_or_else(|| bad(n, "expected a `labels:` header"))?
            .parse()
            .map_err(|e: crate::trees::TupleError| bad(n, &e.to_string()))?;
        let (_, tree_line) = lines.next().ok_or_else(|| bad(n + 1, "missing tree"))?;
        let (tree, marks) = Tree::parse_marked(tree_line.trim())?;
        let tree = LabelledTree::new(tree, labels)?;
        let colored = marks
            .iter()
            .enumerate()
            .filter(|(_, c)| **c)
            .map(|(v, _)| v)
            .collect();
        let mut fixed_lengths = BTreeMap::new();
        for (n, line) in lines {
            let body = line
                .trim()
                .strip_prefix("len ")
                .ok_or_else(|| bad(n, "expected `len e<v> = p/q`"))?;
            let (name, value) = body.split_once('=').ok_or_else(|| bad(n, "missing `=`"))?;
            let v: usize = name
                .trim()
                .strip_prefix('e')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(n, "edge names look like e<vertex>"))?;
            let value = parse_rational(value.trim()).map_err(|e| bad(n, &e.to_string()))?;
            fixed_lengths.insert(EdgeId::Interior(v), value);
        }
        Ok(Self {
            tree,
            colored,
            fixed_lengths,
        })
    }
}

/// Proof that a coloring is valid: an explicit metric placing every colored
/// vertex at the same distance from the root, plus a basis of the linear
/// span of all such metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoringCertificate {
    pub witness: BTreeMap<EdgeId, Rat>,
    pub family: Vec<BTreeMap<EdgeId, Rat>>,
    pub rank: usize,
    pub corank: usize,
}

fn edge_column(e: EdgeId) -> usize {
    match e {
        EdgeId::Interior(v) => v - 1,
        _ => unreachable!("only interior edges carry lengths"),
    }
}

/// Rows `dist(c_0) - dist(c_j) = 0` over the interior edge lengths, with
/// column `v - 1` holding the edge above vertex `v`.
pub fn equality_system(ct: &ColoredTree) -> Matrix {
    let tree = ct.tree.tree();
    let n = tree.vertex_count() - 1;
    let colored: Vec<usize> = ct.colored.iter().copied().collect();
    let mut rows = Vec::new();
    if let Some((&c0, rest)) = colored.split_first() {
        let base = tree.path_to_root(c0);
        for &c in rest {
            let mut row = vec![Rat::zero(); n];
            for e in &base {
                row[edge_column(*e)] += Rat::one();
            }
            for e in tree.path_to_root(c) {
                row[edge_column(e)] -= Rat::one();
            }
            rows.push(row);
        }
    }
    Matrix::from_rows(rows, n)
}

fn check_combinatorics(ct: &ColoredTree) -> Result<(), ColoringViolation> {
    let tree = ct.tree.tree();
    if let Some(&v) = ct.colored.iter().find(|&&v| v >= tree.vertex_count()) {
        return Err(ColoringViolation::NoSuchVertex(v));
    }
    for leaf in 1..=tree.leaf_count() {
        let hits: Vec<usize> = tree
            .ancestors_of_leaf(leaf)
            .into_iter()
            .filter(|v| ct.colored.contains(v))
            .collect();
        match hits.as_slice() {
            [] => return Err(ColoringViolation::NoColoredVertex { leaf }),
            [_] => {}
            [a, b, ..] => {
                return Err(ColoringViolation::SeveralColored {
                    leaf,
                    first: *b.min(a),
                    second: *b.max(a),
                })
            }
        }
    }
    if let Some(v) = (0..tree.vertex_count()).find(|&v| tree.valency(v) == 2 && !ct.colored.contains(&v)) {
        return Err(ColoringViolation::UncoloredTwoValent { vertex: v });
    }
    for (e, l) in &ct.fixed_lengths {
        let interior = matches!(e, EdgeId::Interior(v) if *v >= 1 && *v < tree.vertex_count());
        if !interior || l.is_negative() {
            return Err(ColoringViolation::BadFixedLength(*e));
        }
    }
    Ok(())
}

/// A strictly positive solution: every edge gets length 1 except the edge
/// just above each colored vertex, which absorbs the difference in depth.
fn interior_point(ct: &ColoredTree) -> Vec<Rat> {
    let tree = ct.tree.tree();
    let n = tree.vertex_count() - 1;
    let mut x = vec![Rat::one(); n];
    let depth = ct
        .colored
        .iter()
        .map(|&c| tree.path_to_root(c).len())
        .max()
        .unwrap_or(0);
    for &c in &ct.colored {
        let k = tree.path_to_root(c).len();
        if k > 0 {
            x[c - 1] = Rat::from_integer((depth - k + 1).into());
        }
    }
    x
}

fn to_metric(x: &[Rat]) -> BTreeMap<EdgeId, Rat> {
    x.iter()
        .enumerate()
        .map(|(k, v)| (EdgeId::Interior(k + 1), v.clone()))
        .collect()
}

fn with_fixed_rows(a: &Matrix, rows: usize, fixed: &BTreeMap<EdgeId, Rat>) -> (Matrix, Vec<Rat>) {
    let n = a.cols();
    let mut all: Vec<Vec<Rat>> = (0..rows).map(|i| a.row(i).to_vec()).collect();
    let mut rhs = vec![Rat::zero(); rows];
    for (e, l) in fixed {
        let mut row = vec![Rat::zero(); n];
        row[edge_column(*e)] = Rat::one();
        all.push(row);
        rhs.push(l.clone());
    }
    (Matrix::from_rows(all, n), rhs)
}

/// Checks the three coloring conditions and returns an explicit metric.
pub fn validate_coloring(ct: &ColoredTree) -> Result<ColoringCertificate, ColoringViolation> {
    check_combinatorics(ct)?;
    let a = equality_system(ct);
    let rank = a.rank();
    let corank = a.cols() - rank;
    let family = a.nullspace().iter().map(|v| to_metric(v)).collect();
    let witness = if ct.fixed_lengths.is_empty() {
        interior_point(ct)
    } else {
        let (m, rhs) = with_fixed_rows(&a, a.rows(), &ct.fixed_lengths);
        match nonnegative_vertex(&m, &rhs) {
            Feasibility::Vertex(x) => x,
            _ => return Err(locate_infeasibility(ct, &a)),
        }
    };
    Ok(ColoringCertificate {
        witness: to_metric(&witness),
        family,
        rank,
        corank,
    })
}

/// Finds the first colored vertex whose equation with the base colored
/// vertex, together with the prescribed lengths, has no solution.
fn locate_infeasibility(ct: &ColoredTree, a: &Matrix) -> ColoringViolation {
    let colored: Vec<usize> = ct.colored.iter().copied().collect();
    for rows in 1..=a.rows() {
        let (m, rhs) = with_fixed_rows(a, rows, &ct.fixed_lengths);
        if !matches!(nonnegative_vertex(&m, &rhs), Feasibility::Vertex(_)) {
            return ColoringViolation::Infeasible {
                first: colored[0],
                second: colored[rows],
            };
        }
    }
    ColoringViolation::Infeasible {
        first: colored[0],
        second: colored[0],
    }
}

/// `|E^int(T)| + 1 - |V^col(T)|`, the dimension of the metric cone.
pub fn coloring_cone_dim(ct: &ColoredTree) -> Result<usize, ColoringViolation> {
    check_combinatorics(ct)?;
    let e = ct.tree.tree().vertex_count() - 1;
    Ok(e + 1 - ct.colored.len())
}

/// Number of lengths minus the rank of the equidistance equations.
pub fn coloring_cone_corank(ct: &ColoredTree) -> usize {
    let a = equality_system(ct);
    a.cols() - a.rank()
}

/// Dimension of `{λ ≥ 0 : equidistance, λ(e) = 0 for e ∈ pinned}`.
///
/// Coordinates that vanish on every extreme ray are forced to zero; the
/// cone then spans the solution space of the remaining coordinates.
pub fn pinned_cone_dim(ct: &ColoredTree, pinned: &[EdgeId]) -> usize {
    let a = equality_system(ct);
    let free: Vec<usize> = (0..a.cols())
        .filter(|&c| !pinned.contains(&EdgeId::Interior(c + 1)))
        .collect();
    let sub = select_columns(&a, &free);
    let rays = extreme_rays(&sub);
    let live: Vec<usize> = (0..free.len())
        .filter(|&k| rays.iter().any(|r| !r[k].is_zero()))
        .collect();
    let live_sub = select_columns(&sub, &live);
    live.len() - live_sub.rank()
}

fn select_columns(a: &Matrix, cols: &[usize]) -> Matrix {
    let rows = (0..a.rows())
        .map(|i| cols.iter().map(|&c| a[(i, c)].clone()).collect())
        .collect();
    Matrix::from_rows(rows, cols.len())
}

/// Whether the metric cone has more extreme rays than its dimension.
pub fn is_generalized_corner(ct: &ColoredTree) -> bool {
    let a = equality_system(ct);
    let corank = a.cols() - a.rank();
    extreme_rays(&a).len() > corank
}

/// Nested shapes of colored trees with `n` leaves. The tag marks colored
/// vertices.
fn colored_shapes(n: usize) -> Vec<Nested<bool>> {
    let uncolored = stable_shapes_upto(n);
    let mut colored_rooted: Vec<Vec<Nested<bool>>> = vec![Vec::new()];
    for m in 1..=n {
        let mut here = Vec::new();
        for parts in all_compositions(m, 1) {
            let options: Vec<Vec<Nested<bool>>> = parts
                .iter()
                .map(|&p| {
                    if p == 1 {
                        vec![Nested::Leaf]
                    } else {
                        uncolored[p].clone()
                    }
                })
                .collect();
            for children in cartesian(&options) {
                here.push(Nested::Vertex(true, children));
            }
        }
        colored_rooted.push(here);
    }
    let mut upper: Vec<Vec<Nested<bool>>> = vec![Vec::new()];
    for (m, rooted) in colored_rooted.iter().enumerate().skip(1) {
        let mut here = rooted.clone();
        for parts in all_compositions(m, 2) {
            let options: Vec<Vec<Nested<bool>>> = parts.iter().map(|&p| upper[p].clone()).collect();
            for children in cartesian(&options) {
                here.push(Nested::Vertex(false, children));
            }
        }
        upper.push(here);
    }
    upper.swap_remove(n)
}

/// `out[m]`: uncolored stable shapes with `m ≥ 2` leaves.
fn stable_shapes_upto(n: usize) -> Vec<Vec<Nested<bool>>> {
    let mut memo: Vec<Vec<Nested<bool>>> = vec![Vec::new(), vec![Nested::Leaf]];
    for m in 2..=n {
        let mut here = Vec::new();
        for parts in all_compositions(m, 2) {
            let options: Vec<Vec<Nested<bool>>> = parts.iter().map(|&p| memo[p].clone()).collect();
            for children in cartesian(&options) {
                here.push(Nested::Vertex(false, children));
            }
        }
        memo.push(here);
    }
    memo[1] = Vec::new();
    memo
}

fn all_compositions(n: usize, min_parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << (n - 1)) {
        if (mask.count_ones() as usize) + 1 < min_parts {
            continue;
        }
        let mut parts = Vec::new();
        let mut run = 1;
        for bit in 0..n - 1 {
            if mask & (1 << bit) != 0 {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        parts.push(run);
        out.push(parts);
    }
    out
}

fn cartesian<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(acc.len() * opts.len());
        for prefix in &acc {
            for o in opts {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// All colored trees with `d` leaves labelled by `labels`.
pub fn enumerate_colored_trees(labels: &LagTuple) -> Vec<ColoredTree> {
    colored_shapes(labels.d())
        .iter()
        .map(|s| {
            let (tree, marks) = Tree::from_nested(s).expect("shapes have a root vertex");
            let colored = marks
                .iter()
                .enumerate()
                .filter(|(_, c)| **c)
                .map(|(v, _)| v)
                .collect();
            ColoredTree::new(
                LabelledTree::new(tree, labels.clone()).expect("leaf count matches"),
                colored,
            )
        })
        .collect()
}

fn stacked_stratum(ct: ColoredTree) -> Stratum {
    let tree = ct.tree.tree();
    let d = tree.leaf_count();
    // Σ_v (|v| - 3) over all vertices, plus one per colored vertex
    let base = d as i64 - 2 - (tree.vertex_count() as i64 - 1) + ct.colored.len() as i64;
    let pinned = ct.tree.fundamental_interior_edges();
    let metric = pinned_cone_dim(&ct, &pinned) as i64;
    let dim = (base + metric) as usize;
    let generalized_corner = is_generalized_corner(&ct);
    Stratum {
        dim,
        codim: d - 1 - dim,
        tree: ct.tree,
        broken: Vec::new(),
        colored: ct.colored.into_iter().collect(),
        generalized_corner,
    }
}

/// Strata of the compactified stacked-disc moduli space, one per colored
/// labelled tree. For cyclically different labels this is the face poset of
/// the multiplihedron; for other labels the unilabelled edge lengths add the
/// dimension of their (pinned) coloring cone.
pub fn enumerate_stacked_strata(labels: &LagTuple) -> Vec<Stratum> {
    let mut out: Vec<Stratum> = enumerate_colored_trees(labels)
        .into_iter()
        .map(stacked_stratum)
        .collect();
    out.sort();
    out
}

pub fn enumerate_stacked_strata_parallel(labels: &LagTuple) -> Vec<Stratum> {
    let mut out: Vec<Stratum> = enumerate_colored_trees(labels)
        .into_par_iter()
        .map(stacked_stratum)
        .collect();
    out.par_sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::strata::stratum::{euler_characteristic, f_vector};

    fn colored(text: &str, labels: &str) -> ColoredTree {
        ColoredTree::parse(&format!("labels: {labels}\n{text}\n")).unwrap()
    }

    #[test]
    fn corolla_with_colored_root() {
        let ct = colored("(c (leaf 1) (leaf 2))", "(L0,L1,L2)");
        let cert = validate_coloring(&ct).unwrap();
        assert!(cert.witness.is_empty());
        assert_eq!(coloring_cone_dim(&ct).unwrap(), 0);
    }

    #[test]
    fn example_tree_constraints() {
        // root r -> a (ρ0), a -> c1 (ρ1), a -> c2 (ρ2), r -> c3 (ρ3)
        let ct = colored(
            "(v (v (c (leaf 1)) (c (leaf 2))) (c (leaf 3)))",
            "(L0,L1,L2,L3)",
        );
        let cert = validate_coloring(&ct).unwrap();
        let w = |v: usize| cert.witness[&EdgeId::Interior(v)].clone();
        assert_eq!(w(2), w(3));
        assert_eq!(w(1) + w(2), w(4));
        assert!(cert.witness.values().all(|x| x.is_positive()));
        assert_eq!(coloring_cone_dim(&ct).unwrap(), 2);
        assert_eq!(cert.corank, 2);
        assert!(!is_generalized_corner(&ct));
    }

    #[test]
    fn path_and_valency_violations() {
        let ct = colored("(c (c (leaf 1) (leaf 2)) (leaf 3))", "(L0,L1,L2,L3)");
        assert_eq!(
            validate_coloring(&ct),
            Err(ColoringViolation::SeveralColored { leaf: 1, first: 0, second: 1 })
        );
        let ct = colored("(v (c (leaf 1) (leaf 2)) (leaf 3))", "(L0,L1,L2,L3)");
        assert_eq!(
            validate_coloring(&ct),
            Err(ColoringViolation::NoColoredVertex { leaf: 3 })
        );
        let ct = colored("(v (v (c (leaf 1)) (c (leaf 2))) (c (v (leaf 3))))", "(L0,L1,L2,L3)");
        assert_eq!(
            validate_coloring(&ct),
            Err(ColoringViolation::UncoloredTwoValent { vertex: 5 })
        );
    }

    #[test]
    fn prescribed_lengths() {
        let base = "labels: (L0,L1,L2,L3)\n(v (v (c (leaf 1)) (c (leaf 2))) (c (leaf 3)))\n";
        let ok = ColoredTree::parse(&format!("{base}len e1 = 1\nlen e4 = 3\n")).unwrap();
        let cert = validate_coloring(&ok).unwrap();
        assert_eq!(cert.witness[&EdgeId::Interior(2)], int(2));
        let bad = ColoredTree::parse(&format!("{base}len e1 = 4\nlen e4 = 3\n")).unwrap();
        assert_eq!(
            validate_coloring(&bad),
            Err(ColoringViolation::Infeasible { first: 2, second: 4 })
        );
        assert_eq!(ok.serialize(), format!("{base}len e1 = 1\nlen e4 = 3\n"));
    }

    #[test]
    fn singular_four_tree_is_a_generalized_corner() {
        let ct = colored(
            "(v (v (c (leaf 1)) (c (leaf 2))) (v (c (leaf 3)) (c (leaf 4))))",
            "(L0,L1,L2,L3,L4)",
        );
        assert_eq!(coloring_cone_dim(&ct).unwrap(), 3);
        assert_eq!(extreme_rays(&equality_system(&ct)).len(), 4);
        assert!(is_generalized_corner(&ct));
    }

    #[test]
    fn multiplihedron_f_vectors() {
        let expected: [&[usize]; 4] = [&[1], &[2, 1], &[6, 6, 1], &[21, 32, 13, 1]];
        for (k, f) in expected.iter().enumerate() {
            let strata = enumerate_stacked_strata(&LagTuple::distinct(k + 1));
            assert_eq!(&f_vector(&strata), f, "d = {}", k + 1);
            assert_eq!(euler_characteristic(f), 1);
        }
    }

    #[test]
    fn every_enumerated_coloring_is_valid() {
        for d in 1..=5 {
            for ct in enumerate_colored_trees(&LagTuple::distinct(d)) {
                assert!(validate_coloring(&ct).is_ok());
                assert_eq!(coloring_cone_dim(&ct).unwrap(), coloring_cone_corank(&ct));
                assert_eq!(pinned_cone_dim(&ct, &[]), coloring_cone_corank(&ct));
            }
        }
    }

    #[test]
    fn constant_labels_fill_the_top_dimension() {
        let strata = enumerate_stacked_strata(&LagTuple::constant(3));
        assert!(strata.iter().all(|s| s.dim == 2));
    }
}
