//! Strata of the compactified cluster moduli space (associahedron faces).

use rayon::prelude::*;

use super::stratum::Stratum;
use crate::trees::{enumerate_stable_trees, EdgeId, LabelledTree, LagTuple, Tree};

fn strata_of_tree(tree: Tree, labels: &LagTuple) -> Vec<Stratum> {
    let d = labels.d();
    let lt = LabelledTree::new(tree, labels.clone()).expect("leaf count matches");
    let fundamental = lt.fundamental_interior_edges().len();
    let uni = lt.unilabelled_interior_edges();
    let mut out = Vec::with_capacity(1 << uni.len());
    for mask in 0u32..(1u32 << uni.len()) {
        let broken: Vec<EdgeId> = uni
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, e)| *e)
            .collect();
        let codim = fundamental + broken.len();
        out.push(Stratum {
            dim: d - 2 - codim,
            codim,
            tree: lt.clone(),
            broken,
            colored: Vec::new(),
            generalized_corner: false,
        });
    }
    out
}

/// One stratum per stable labelled tree `T` and set of broken unilabelled
/// interior edges. Non-unilabelled interior edges have length 0, so each
/// contributes one to the codimension; each broken edge contributes one
/// more. Sorted by dimension, then tree.
pub fn enumerate_cluster_strata(labels: &LagTuple) -> Vec<Stratum> {
    let d = labels.d();
    assert!(d >= 2, "cluster strata need d ≥ 2");
    let mut out: Vec<Stratum> = enumerate_stable_trees(d)
        .into_iter()
        .flat_map(|t| strata_of_tree(t, labels))
        .collect();
    out.sort();
    out
}

pub fn enumerate_cluster_strata_parallel(labels: &LagTuple) -> Vec<Stratum> {
    let d = labels.d();
    assert!(d >= 2, "cluster strata need d ≥ 2");
    let mut out: Vec<Stratum> = enumerate_stable_trees(d)
        .into_par_iter()
        .flat_map_iter(|t| strata_of_tree(t, labels))
        .collect();
    out.par_sort();
    out
}

/// Face counts of the cell decomposition obtained by further splitting every
/// finite unilabelled edge length into `0` and `(0, ∞)`.
///
/// Strata with finite unilabelled edges are not open cells (the length can
/// reach 0), so their plain face counts need not have alternating sum 1;
/// this refinement always does.
pub fn cell_f_vector(strata: &[Stratum]) -> Vec<usize> {
    let top = strata.iter().map(|s| s.dim).max().unwrap_or(0);
    let mut out = vec![0; top + 1];
    for s in strata {
        let finite = s.tree.unilabelled_interior_edges().len() - s.broken.len();
        let base = s.dim - finite;
        let mut binom = 1usize;
        for k in 0..=finite {
            out[base + k] += binom;
            binom = binom * (finite - k) / (k + 1);
        }
    }
    out
}

/// A term `μ^{i+j+1}(id^i ⊗ μ^k ⊗ id^j)` of the A∞ relation with
/// `i + k + j` inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermDescriptor {
    pub i: usize,
    pub k: usize,
    pub j: usize,
}

impl std::fmt::Display for TermDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "mu{}(id^{} x mu{} x id^{})",
            self.i + self.j + 1,
            self.i,
            self.k,
            self.j
        )
    }
}

/// Matches every codimension-one stratum whose tree has two vertices with
/// the quadratic A∞ term it produces: the inner vertex eats leaves
/// `i+1..=i+k`.
pub fn facet_term_bijection(labels: &LagTuple) -> Vec<(Stratum, TermDescriptor)> {
    let d = labels.d();
    enumerate_cluster_strata(labels)
        .into_iter()
        .filter(|s| s.codim == 1 && s.tree.tree().vertex_count() == 2)
        .map(|s| {
            let (a, b) = s.tree.tree().span(1);
            let term = TermDescriptor {
                i: a - 1,
                k: b - a + 1,
                j: d - b,
            };
            (s, term)
        })
        .collect()
}

/// All `(i, k, j)` with `i + k + j = d`, `k ≥ 2`, `i + j ≥ 1`.
pub fn quadratic_terms(d: usize) -> Vec<TermDescriptor> {
    let mut out = Vec::new();
    for k in 2..d {
        for i in 0..=d - k {
            out.push(TermDescriptor { i, k, j: d - k - i });
        }
    }
    out.sort();
    out
}
