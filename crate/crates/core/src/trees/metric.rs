//! Edge-length metrics on labelled trees and their gluing.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use super::gluing::{glue_trees, GlueError, Origin};
use super::tree::{split_labels_header, EdgeId, LabelledTree, Tree, TreeError};
use crate::exact::{format_rational, from_f64, parse_rational, Rat};

/// Length of an interior edge; `Infinite` marks a broken edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeLength {
    Finite(Rat),
    Infinite,
}

impl EdgeLength {
    pub fn zero() -> Self {
        EdgeLength::Finite(Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, EdgeLength::Finite(r) if r.is_zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, EdgeLength::Infinite)
    }
}

impl fmt::Display for EdgeLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLength::Finite(r) => f.write_str(&format_rational(r)),
            EdgeLength::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Glue(#[from] GlueError),
    #[error("edge {0} is not an interior edge")]
    NotInterior(String),
    #[error("edge {0} has no length")]
    MissingLength(EdgeId),
    #[error("edge {0} has negative length")]
    Negative(EdgeId),
    #[error("gluing length must be non-negative")]
    NegativeGlueLength,
    #[error("gluing parameter {0} lies outside [-1, 0]")]
    RhoOutOfRange(f64),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("end length {end} on edge {edge} must be below half the edge length")]
    EndTooLong { edge: EdgeId, end: String },
}

/// A labelled tree with a length on every interior edge. Exterior edges
/// implicitly have infinite length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricTree {
    tree: LabelledTree,
    lengths: BTreeMap<EdgeId, EdgeLength>,
}

impl MetricTree {
    pub fn new(
        tree: LabelledTree,
        lengths: BTreeMap<EdgeId, EdgeLength>,
    ) -> Result<Self, MetricError> {
        for (e, l) in &lengths {
            if !e.is_interior() || !tree.tree().interior_edges().any(|x| x == *e) {
                return Err(MetricError::NotInterior(e.to_string()));
            }
            if matches!(l, EdgeLength::Finite(r) if r.is_negative()) {
                return Err(MetricError::Negative(*e));
            }
        }
        if let Some(e) = tree.tree().interior_edges().find(|e| !lengths.contains_key(e)) {
            return Err(MetricError::MissingLength(e));
        }
        Ok(Self { tree, lengths })
    }

    /// Every interior edge at length 0.
    pub fn collapsed(tree: LabelledTree) -> Self {
        let lengths = tree
            .tree()
            .interior_edges()
            .map(|e| (e, EdgeLength::zero()))
            .collect();
        Self { tree, lengths }
    }

    pub fn tree(&self) -> &LabelledTree {
        &self.tree
    }

    pub fn lengths(&self) -> &BTreeMap<EdgeId, EdgeLength> {
        &self.lengths
    }

    pub fn length(&self, e: EdgeId) -> EdgeLength {
        match e {
            EdgeId::Interior(_) => self.lengths[&e].clone(),
            _ => EdgeLength::Infinite,
        }
    }

    pub fn broken_edges(&self) -> Vec<EdgeId> {
        self.lengths
            .iter()
            .filter(|(_, l)| l.is_infinite())
            .map(|(e, _)| *e)
            .collect()
    }

    /// Whether every non-unilabelled interior edge has length 0.
    pub fn is_unilabelled_metric(&self) -> bool {
        self.tree
            .fundamental_interior_edges()
            .iter()
            .all(|e| self.lengths[e].is_zero())
    }

    pub fn serialize(&self) -> String {
        let mut out = self.tree.serialize();
        for (e, l) in &self.lengths {
            out.push_str(&format!("len {e} = {l}\n"));
        }
        out
    }

    /// Reads a labelled tree followed by one `len e<v> = p/q | inf` line per
    /// interior edge, where `v` is the lower vertex of the edge.
    pub fn parse(text: &str) -> Result<Self, MetricError> {
        let (labels, rest) = split_labels_header(text)?;
        let mut lines = rest.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, tree_line) = lines.next().ok_or(TreeError::NoVertex)?;
        let tree = LabelledTree::new(Tree::parse(tree_line.trim())?, labels)?;
        let mut lengths = BTreeMap::new();
        for (n, line) in lines {
            let line_no = n + 3;
            let bad = |message: &str| MetricError::Line {
                line: line_no,
                message: message.to_string(),
            };
            let body = line
                .trim()
                .strip_prefix("len ")
                .ok_or_else(|| bad("expected `len e<v> = <length>`"))?;
            let (name, value) = body.split_once('=').ok_or_else(|| bad("missing `=`"))?;
            let v: usize = name
                .trim()
                .strip_prefix('e')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("edge names look like e<vertex>"))?;
            let value = value.trim();
            let length = if value == "inf" {
                EdgeLength::Infinite
            } else {
                EdgeLength::Finite(parse_rational(value).map_err(|e| bad(&e.to_string()))?)
            };
            if lengths.insert(EdgeId::Interior(v), length).is_some() {
                return Err(bad("duplicate edge"));
            }
        }
        Self::new(tree, lengths)
    }
}

/// Inert strip-end annotations: every finite interior edge may carry an end
/// length `s(e)` with `s(e) < λ(e)/2`.
pub fn check_system_of_ends(
    metric: &MetricTree,
    ends: &BTreeMap<EdgeId, Rat>,
) -> Result<(), MetricError> {
    for (e, s) in ends {
        match metric.length(*e) {
            EdgeLength::Infinite => {}
            EdgeLength::Finite(l) => {
                if s * Rat::from_integer(2.into()) >= l {
                    return Err(MetricError::EndTooLong {
                        edge: *e,
                        end: format_rational(s),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Gluing parameter for the new edge: either the chart coordinate `ρ` or a
/// length given directly.
#[derive(Debug, Clone, PartialEq)]
pub enum GlueParam {
    Rho(f64),
    Length(EdgeLength),
}

/// `-ln(-ρ)` for `ρ ∈ [-1, 0)`, and `∞` at `ρ = 0`.
pub fn rho_to_length(rho: f64) -> Result<EdgeLength, MetricError> {
    if !(-1.0..=0.0).contains(&rho) {
        return Err(MetricError::RhoOutOfRange(rho));
    }
    if rho == 0.0 {
        return Ok(EdgeLength::Infinite);
    }
    let l = -(-rho).ln();
    Ok(EdgeLength::Finite(
        from_f64(l.max(0.0)).expect("finite for ρ in [-1, 0)"),
    ))
}

/// Glues the underlying trees and keeps both metrics; the new edge gets the
/// length determined by `param`.
pub fn glue_metrics(
    param: &GlueParam,
    m1: &MetricTree,
    i: usize,
    m2: &MetricTree,
) -> Result<(MetricTree, EdgeId), MetricError> {
    let glued_length = match param {
        GlueParam::Rho(rho) => rho_to_length(*rho)?,
        GlueParam::Length(EdgeLength::Finite(r)) if r.is_negative() => {
            return Err(MetricError::NegativeGlueLength);
        }
        GlueParam::Length(l) => l.clone(),
    };
    let glued = glue_trees(m1.tree(), i, m2.tree())?;
    let mut lengths = BTreeMap::new();
    for (e, l) in &m1.lengths {
        let EdgeId::Interior(v) = e else { unreachable!() };
        lengths.insert(glued.image(Origin::First(*v)), l.clone());
    }
    for (e, l) in &m2.lengths {
        let EdgeId::Interior(v) = e else { unreachable!() };
        lengths.insert(glued.image(Origin::Second(*v)), l.clone());
    }
    lengths.insert(glued.glued_edge, glued_length);
    Ok((MetricTree::new(glued.tree, lengths)?, glued.glued_edge))
}
