//! Enumeration of planar stable trees.

use rayon::prelude::*;

use super::tree::{Nested, Tree};

/// All nested shapes with `n` leaves in which every vertex has at least
/// `min_children` children.
fn shapes(n: usize, min_children: usize) -> Vec<Nested<()>> {
    let mut memo: Vec<Vec<Nested<()>>> = vec![Vec::new(), vec![Nested::Leaf]];
    for m in 2..=n {
        let mut here = Vec::new();
        for parts in compositions(m) {
            if parts.len() < min_children {
                continue;
            }
            let mut acc: Vec<Vec<Nested<()>>> = vec![Vec::new()];
            for &p in &parts {
                let mut next = Vec::with_capacity(acc.len() * memo[p].len());
                for prefix in &acc {
                    for s in &memo[p] {
                        let mut v = prefix.clone();
                        v.push(s.clone());
                        next.push(v);
                    }
                }
                acc = next;
            }
            here.extend(acc.into_iter().map(|cs| Nested::Vertex((), cs)));
        }
        memo.push(here);
    }
    memo.swap_remove(n)
}

/// Ordered ways to write `n` as a sum of at least two positive parts.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << (n - 1)) {
        if mask == 0 {
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

/// One representative per planar isomorphism class of stable trees with `d`
/// leaves, sorted by serialization.
pub fn enumerate_stable_trees(d: usize) -> Vec<Tree> {
    assert!(d >= 2, "stable trees need at least two leaves");
    let mut trees: Vec<Tree> = shapes(d, 2)
        .iter()
        .map(|s| Tree::from_nested(s).expect("shapes have a root vertex").0)
        .collect();
    trees.sort_by_cached_key(Tree::serialize);
    trees
}

/// Same as [`enumerate_stable_trees`], building the trees on the rayon pool.
pub fn enumerate_stable_trees_parallel(d: usize) -> Vec<Tree> {
    assert!(d >= 2, "stable trees need at least two leaves");
    let mut trees: Vec<Tree> = shapes(d, 2)
        .par_iter()
        .map(|s| Tree::from_nested(s).expect("shapes have a root vertex").0)
        .collect();
    trees.par_sort_by_cached_key(Tree::serialize);
    trees
}

pub fn is_binary(t: &Tree) -> bool {
    (0..t.vertex_count()).all(|v| t.valency(v) == 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (2..=7).map(|d| enumerate_stable_trees(d).len()).collect();
        assert_eq!(counts, vec![1, 3, 11, 45, 197, 903]);
    }

    #[test]
    fn binary_subcounts_are_catalan() {
        let catalan = [1, 1, 2, 5, 14, 42, 132, 429];
        for d in 2..=8 {
            let binary = enumerate_stable_trees(d).iter().filter(|t| is_binary(t)).count();
            assert_eq!(binary, catalan[d - 1], "d = {d}");
        }
    }

    #[test]
    fn canonical_and_unique() {
        let trees = enumerate_stable_trees(5);
        let mut names: Vec<String> = trees.iter().map(Tree::serialize).collect();
        let sorted = names.clone();
        names.dedup();
        assert_eq!(names, sorted);
        assert!(trees.iter().all(Tree::is_stable));
        assert_eq!(trees, enumerate_stable_trees_parallel(5));
    }
}
