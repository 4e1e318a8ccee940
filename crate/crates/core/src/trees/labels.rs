//! Lagrangian label tuples, their cyclic reduction and classification.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Opaque Lagrangian identifier. Two labels are the same Lagrangian exactly
/// when their names agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(name: &str) -> Self {
        Label(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TupleError {
    #[error("a label tuple needs at least two entries, got {0}")]
    TooShort(usize),
    #[error("invalid label `{0}`")]
    BadLabel(String),
}

/// `(L_0, …, L_d)` with `d ≥ 1`; `L_i` labels the i-th planar region.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LagTuple {
    labels: Vec<Label>,
}

impl LagTuple {
    pub fn new(labels: Vec<Label>) -> Result<Self, TupleError> {
        if labels.len() < 2 {
            return Err(TupleError::TooShort(labels.len()));
        }
        Ok(Self { labels })
    }

    pub fn from_names(names: &[&str]) -> Result<Self, TupleError> {
        Self::new(names.iter().map(|n| Label::new(n)).collect())
    }

    /// `L_0, …, L_{d}` where every entry gets its own Lagrangian.
    pub fn distinct(d: usize) -> Self {
        Self {
            labels: (0..=d).map(|i| Label::new(&format!("L{i}"))).collect(),
        }
    }

    pub fn constant(d: usize) -> Self {
        Self {
            labels: vec![Label::new("L"); d + 1],
        }
    }

    pub fn d(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn get(&self, i: usize) -> &Label {
        &self.labels[i]
    }
}

impl fmt::Display for LagTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for LagTuple {
    type Err = TupleError;

    /// Accepts `(L0,L1,L2)` or whitespace/comma separated names.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(inner);
        let mut labels = Vec::new();
        for tok in inner.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            if !tok.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
                return Err(TupleError::BadLabel(tok.to_string()));
            }
            labels.push(Label::new(tok));
        }
        Self::new(labels)
    }
}

/// Cyclic reduction of a label tuple.
///
/// `entries[0]` is the merged run of `L_0` at both ends of the tuple, so its
/// multiplicity is `m0_begin + m0_end`; every other entry is a maximal run
/// of equal neighbours. For a constant tuple there is a single entry, the
/// reduced length `d_r` is reported as 0 and `constant` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedTuple {
    pub entries: Vec<(Label, usize)>,
    pub m0_begin: usize,
    pub m0_end: usize,
    pub fundamental: Vec<Label>,
    pub constant: bool,
}

impl ReducedTuple {
    pub fn d_r(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn d_f(&self) -> usize {
        self.fundamental.len() - 1
    }

    /// `m̄_0 = m_0^b`, `m̄_i = m_i` for `1 ≤ i ≤ d^R`, `m̄_{d^R+1} = m_0^e`.
    pub fn bar_multiplicities(&self) -> Vec<usize> {
        let mut out = vec![self.m0_begin];
        out.extend(self.entries.iter().skip(1).map(|(_, m)| *m));
        out.push(self.m0_end);
        out
    }

    /// Position of `label` in the fundamental tuple.
    pub fn fundamental_index(&self, label: &Label) -> Option<usize> {
        self.fundamental.iter().position(|l| l == label)
    }

    /// The reduced labels, one per entry.
    pub fn flattened(&self) -> Vec<Label> {
        self.entries.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn fundamental_string(&self) -> String {
        let names: Vec<&str> = self.fundamental.iter().map(Label::name).collect();
        format!("({})", names.join(","))
    }
}

impl fmt::Display for ReducedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (label, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if i == 0 && self.m0_end > 0 {
                write!(f, "({label},{}+{})", self.m0_begin, self.m0_end)?;
            } else if *m > 1 {
                write!(f, "({label},{m})")?;
            } else {
                write!(f, "{label}")?;
            }
        }
        f.write_str(")")
    }
}

pub fn reduce_tuple(t: &LagTuple) -> ReducedTuple {
    let labels = t.labels();
    let first = &labels[0];
    if labels.iter().all(|l| l == first) {
        return ReducedTuple {
            entries: vec![(first.clone(), labels.len())],
            m0_begin: labels.len(),
            m0_end: 0,
            fundamental: vec![first.clone()],
            constant: true,
        };
    }
    let m0_begin = labels.iter().take_while(|l| *l == first).count();
    let m0_end = labels.iter().rev().take_while(|l| *l == first).count();
    let mut entries = vec![(first.clone(), m0_begin + m0_end)];
    for l in &labels[m0_begin..labels.len() - m0_end] {
        let merge = entries.len() > 1;
        match entries.last_mut() {
            Some((last, m)) if merge && last == l => *m += 1,
            _ => entries.push((l.clone(), 1)),
        }
    }
    let mut fundamental: Vec<Label> = Vec::new();
    for (l, _) in &entries {
        if !fundamental.contains(l) {
            fundamental.push(l.clone());
        }
    }
    ReducedTuple {
        entries,
        m0_begin,
        m0_end,
        fundamental,
        constant: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TupleClass {
    /// `L_i ≠ L_{i+1}` for all i, and `L_d ≠ L_0`.
    CyclicallyDifferent,
    /// `L_i ≠ L_{i+1}` for `i < d`, but `L_0 = L_d`.
    AlmostCyclicallyDifferent,
    /// Some repetition, `L_0 ≠ L_d`.
    GeneralOpen,
    /// Some repetition, `L_0 = L_d`.
    GeneralClosed,
    Constant,
}

impl TupleClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TupleClass::CyclicallyDifferent => "cyclically_different",
            TupleClass::AlmostCyclicallyDifferent => "almost_cyclically_different",
            TupleClass::GeneralOpen => "general_open",
            TupleClass::GeneralClosed => "general_closed",
            TupleClass::Constant => "constant",
        }
    }

    /// Whether `L_0 ≠ L_d`.
    pub fn is_open(self) -> bool {
        matches!(self, TupleClass::CyclicallyDifferent | TupleClass::GeneralOpen)
    }
}

impl fmt::Display for TupleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_tuple(t: &LagTuple) -> TupleClass {
    let r = reduce_tuple(t);
    if r.constant {
        return TupleClass::Constant;
    }
    let interior_simple = r.entries.iter().skip(1).all(|(_, m)| *m == 1);
    match (r.m0_end, r.m0_begin, interior_simple) {
        (0, 1, true) => TupleClass::CyclicallyDifferent,
        (1, 1, true) => TupleClass::AlmostCyclicallyDifferent,
        (0, _, _) => TupleClass::GeneralOpen,
        _ => TupleClass::GeneralClosed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(s: &str) -> LagTuple {
        s.parse().unwrap()
    }

    #[test]
    fn reduces_seven_entry_example() {
        let r = reduce_tuple(&tuple("(L0,L0,L2,L3,L2,L1,L0)"));
        assert_eq!(r.to_string(), "((L0,2+1),L2,L3,L2,L1)");
        assert_eq!(r.fundamental_string(), "(L0,L2,L3,L1)");
        assert_eq!((r.m0_begin, r.m0_end, r.d_r()), (2, 1, 4));
        assert_eq!(r.bar_multiplicities(), vec![2, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn reduces_eight_entry_example() {
        let r = reduce_tuple(&tuple("(L0,L0,L1,L2,L3,L2,L0,L0)"));
        assert_eq!(r.to_string(), "((L0,2+2),L1,L2,L3,L2)");
        assert_eq!(r.fundamental_string(), "(L0,L1,L2,L3)");
    }

    #[test]
    fn reduces_trivial_cases() {
        let r = reduce_tuple(&tuple("(L0,L1)"));
        assert_eq!(r.entries.len(), 2);
        assert_eq!((r.m0_begin, r.m0_end), (1, 0));
        let c = reduce_tuple(&tuple("(L,L,L)"));
        assert!(c.constant);
        assert_eq!(c.entries, vec![(Label::new("L"), 3)]);
        assert_eq!(c.d_r(), 0);
        assert_eq!(c.fundamental, vec![Label::new("L")]);
    }

    #[test]
    fn interior_runs_merge() {
        let r = reduce_tuple(&tuple("(A,B,B,B,C,C)"));
        assert_eq!(r.to_string(), "(A,(B,3),(C,2))");
        assert_eq!(r.bar_multiplicities(), vec![1, 3, 2, 0]);
    }

    #[test]
    fn classification() {
        assert_eq!(classify_tuple(&tuple("(L0,L1,L2)")), TupleClass::CyclicallyDifferent);
        assert_eq!(classify_tuple(&tuple("(L0,L1,L0)")), TupleClass::AlmostCyclicallyDifferent);
        assert_eq!(classify_tuple(&tuple("(L0,L0,L1)")), TupleClass::GeneralOpen);
        assert_eq!(classify_tuple(&tuple("(L0,L1,L1,L0)")), TupleClass::GeneralClosed);
        assert_eq!(classify_tuple(&tuple("(L0,L0)")), TupleClass::Constant);
    }

    #[test]
    fn rejects_short_and_malformed() {
        assert_eq!("(L0)".parse::<LagTuple>(), Err(TupleError::TooShort(1)));
        assert!("(L0,L$)".parse::<LagTuple>().is_err());
    }
}
