use std::fmt;

use crate::trees::{EdgeId, LabelledTree};

/// One stratum of a compactified moduli space, indexed combinatorially.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Stratum {
    pub dim: usize,
    pub codim: usize,
    pub tree: LabelledTree,
    /// Interior edges of infinite length.
    pub broken: Vec<EdgeId>,
    /// Colored vertices (empty for cluster strata).
    pub colored: Vec<usize>,
    /// Set when the metric cone of the coloring is not simplicial, i.e. the
    /// stratum sits at a generalized corner.
    pub generalized_corner: bool,
}

impl Stratum {
    pub fn tree_serial(&self) -> String {
        self.tree
            .tree()
            .serialize_marked(&|v| self.colored.contains(&v))
    }

    pub fn report_line(&self) -> String {
        let colored: Vec<String> = self.colored.iter().map(|v| v.to_string()).collect();
        let mut line = format!(
            "dim={} codim={} tree={} broken={} colored={{{}}}",
            self.dim,
            self.codim,
            self.tree_serial(),
            self.broken.len(),
            colored.join(",")
        );
        if self.generalized_corner {
            line.push_str(" corner=generalized");
        }
        line
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report_line())
    }
}

/// Number of strata of each dimension, indexed by dimension.
pub fn f_vector(strata: &[Stratum]) -> Vec<usize> {
    let top = strata.iter().map(|s| s.dim).max().unwrap_or(0);
    let mut out = vec![0; top + 1];
    for s in strata {
        out[s.dim] += 1;
    }
    out
}

/// Alternating sum `Σ (-1)^dim` of a face count vector.
pub fn euler_characteristic(f: &[usize]) -> i64 {
    f.iter()
        .enumerate()
        .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum()
}
