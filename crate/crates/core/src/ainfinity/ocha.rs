//! Open-closed homotopy algebras over Z2.
//!
//! Closed inputs are symmetric, so `μ_{k,d}` is keyed by a sorted closed
//! multiset and an ordered open tuple.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use super::category::FilteredAInfCategory;
use super::chain::Chain;
use super::defect::{check_ainf, AinfReport, Failure};
use super::linf::{check_linf, multiset_splits, multisets, parse_term, LInfinityAlgebra, LinfError};
use super::text::{self, ParseError};
use crate::exact::Rat;
use crate::novikov::NovikovElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OchaError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Linf(#[from] LinfError),
    #[error("{0}")]
    Typing(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OCHAStructure {
    closed: Vec<String>,
    open: Vec<String>,
    l: LInfinityAlgebra,
    mu: BTreeMap<(Vec<usize>, Vec<usize>), Chain>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OchaFailure {
    pub closed: Vec<usize>,
    pub open: Vec<usize>,
    pub defect: Chain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OchaReport {
    pub checked: usize,
    pub failures: Vec<OchaFailure>,
    /// The open part with `μ_{0,d}` as an A∞ algebra.
    pub open_ainf: AinfReport,
    /// The closed part as an L∞ algebra.
    pub closed_linf: Vec<Failure>,
}

impl OchaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.open_ainf.passed() && self.closed_linf.is_empty()
    }
}

impl OCHAStructure {
    pub fn new(closed: Vec<String>, open: Vec<String>) -> Self {
        OCHAStructure {
            l: LInfinityAlgebra::new(closed.clone()),
            closed,
            open,
            mu: BTreeMap::new(),
        }
    }

    /// Builds a structure around an existing L∞ algebra on the closed part.
    pub fn with_linf(l: LInfinityAlgebra, open: Vec<String>) -> Self {
        OCHAStructure {
            closed: l.basis().to_vec(),
            open,
            l,
            mu: BTreeMap::new(),
        }
    }

    pub fn closed(&self) -> &[String] {
        &self.closed
    }

    pub fn open(&self) -> &[String] {
        &self.open
    }

    pub fn linf(&self) -> &LInfinityAlgebra {
        &self.l
    }

    pub fn linf_mut(&mut self) -> &mut LInfinityAlgebra {
        &mut self.l
    }

    pub fn table(&self) -> &BTreeMap<(Vec<usize>, Vec<usize>), Chain> {
        &self.mu
    }

    fn check_inputs(&self, closed: &[usize], open: &[usize]) -> Result<(), OchaError> {
        if let Some(c) = closed.iter().find(|&&c| c >= self.closed.len()) {
            return Err(OchaError::Typing(format!("closed input #{c} out of range")));
        }
        if let Some(o) = open.iter().find(|&&o| o >= self.open.len()) {
            return Err(OchaError::Typing(format!("open input #{o} out of range")));
        }
        Ok(())
    }

    /// Adds `coeff · out` to `μ_{k,d}(closed; open)`.
    pub fn add_mu_term(
        &mut self,
        closed: &[usize],
        open: &[usize],
        out: usize,
        coeff: &NovikovElement,
    ) -> Result<(), OchaError> {
        self.check_inputs(closed, open)?;
        if closed.is_empty() && open.is_empty() {
            return Err(OchaError::Typing("μ_{0,0} must vanish".into()));
        }
        if out >= self.open.len() {
            return Err(OchaError::Typing(format!("output #{out} is not an open element")));
        }
        let mut key_c = closed.to_vec();
        key_c.sort_unstable();
        let key = (key_c, open.to_vec());
        let entry = self.mu.entry(key.clone()).or_default();
        entry.add_term(out, coeff);
        if entry.is_zero() {
            self.mu.remove(&key);
        }
        Ok(())
    }

    /// `μ_{k,d}` with `closed` in any order.
    pub fn mu(&self, closed: &[usize], open: &[usize]) -> Chain {
        let mut c = closed.to_vec();
        c.sort_unstable();
        self.mu.get(&(c, open.to_vec())).cloned().unwrap_or_default()
    }

    /// The open part as a one-object category carrying `μ_{0,d}`, with
    /// generator `i` equal to open basis element `i` at level 0.
    pub fn open_ainf_category(&self) -> FilteredAInfCategory {
        let mut cat = FilteredAInfCategory::new();
        let x = cat.add_object("*").expect("fresh category");
        for name in &self.open {
            cat.add_generator(name, x, x, Rat::default(), Rat::default())
                .expect("open names are distinct");
        }
        for ((closed, open), value) in &self.mu {
            if closed.is_empty() {
                cat.set_mu(open, value.clone()).expect("single object always composes");
            }
        }
        cat
    }

    /// Reads `closed ...`, `open ...`, `l`/`lsym` lines as for L∞ algebras
    /// on the closed part, and `mu k d closed=a,.. open=x,.. out=y coeff=...`.
    pub fn parse(input: &str) -> Result<Self, OchaError> {
        let mut closed: Vec<String> = Vec::new();
        let mut open: Vec<String> = Vec::new();
        let all = text::lines(input);
        for line in &all {
            let head = line.tokens[0];
            match head.text {
                "closed" | "open" => {
                    let list = if head.text == "closed" { &mut closed } else { &mut open };
                    for t in &line.tokens[1..] {
                        if list.iter().any(|n| n == t.text) {
                            return Err(line.error(t.column, format!("`{}` declared twice", t.text)).into());
                        }
                        list.push(t.text.to_string());
                    }
                }
                "l" | "lsym" | "mu" => {}
                other => {
                    return Err(line.error(head.column, format!("unknown directive `{other}`")).into())
                }
            }
        }
        if let Some(dup) = closed.iter().find(|c| open.contains(c)) {
            return Err(OchaError::Typing(format!("`{dup}` is both closed and open")));
        }
        let mut s = OCHAStructure::new(closed, open);
        let closed_ids: HashMap<String, usize> =
            s.closed.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let open_ids: HashMap<String, usize> =
            s.open.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut seen: HashMap<(Vec<usize>, Vec<usize>, usize), usize> = HashMap::new();
        let mut pending_mu = Vec::new();
        for line in &all {
            match line.tokens[0].text {
                "l" => {
                    let (inputs, out, coeff) = parse_term(line, &s.closed)?;
                    s.l.add_term(&inputs, out, &coeff)?;
                }
                "lsym" => {
                    let (inputs, out, coeff) = parse_term(line, &s.closed)?;
                    s.l.insert_symmetric(&inputs, out, &coeff)?;
                }
                "mu" => pending_mu.push(line),
                _ => {}
            }
        }
        s.l.check_symmetric()?;
        for line in pending_mu {
            let k_tok = line.token(1, "closed arity")?;
            let k = text::integer(line, k_tok)?;
            let d_tok = line.token(2, "open arity")?;
            let d = text::integer(line, d_tok)?;
            line.only_fields(3, &["closed", "open", "out", "coeff"])?;
            let c_tok = line.field(3, "closed")?;
            let cs = text::names(c_tok)
                .into_iter()
                .map(|n| closed_ids.get(n).copied().ok_or_else(|| line.error(c_tok.column, format!("unknown closed element `{n}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let o_tok = line.field(3, "open")?;
            let os = text::names(o_tok)
                .into_iter()
                .map(|n| open_ids.get(n).copied().ok_or_else(|| line.error(o_tok.column, format!("unknown open element `{n}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            if cs.len() != k || os.len() != d {
                return Err(line.error(k_tok.column, format!("arity ({k},{d}) does not match the inputs")).into());
            }
            let out_tok = line.field(3, "out")?;
            let out = *open_ids
                .get(out_tok.text)
                .ok_or_else(|| line.error(out_tok.column, format!("unknown open element `{}`", out_tok.text)))?;
            let coeff = text::novikov(line, line.field(3, "coeff")?)?;
            let mut sorted = cs.clone();
            sorted.sort_unstable();
            if let Some(prev) = seen.insert((sorted, os.clone(), out), line.number) {
                return Err(line.error(out_tok.column, format!("term already given on line {prev}")).into());
            }
            s.add_mu_term(&cs, &os, out, &coeff)
                .map_err(|e| OchaError::Parse(line.error(k_tok.column, e.to_string())))?;
        }
        Ok(s)
    }

    pub fn serialize(&self) -> String {
        let mut out = header("closed", &self.closed) + &header("open", &self.open);
        for l in self.l.serialize().lines().skip(1) {
            out.push_str(l);
            out.push('\n');
        }
        let mut keys: Vec<&(Vec<usize>, Vec<usize>)> = self.mu.keys().collect();
        keys.sort_by_key(|(c, o)| (c.len(), o.len(), c.clone(), o.clone()));
        for key in keys {
            let (c, o) = key;
            let cn: Vec<&str> = c.iter().map(|i| self.closed[*i].as_str()).collect();
            let on: Vec<&str> = o.iter().map(|i| self.open[*i].as_str()).collect();
            for (g, coeff) in self.mu[key].terms() {
                out.push_str(&format!(
                    "mu {} {} closed={} open={} out={} coeff={}\n",
                    c.len(),
                    o.len(),
                    cn.join(","),
                    on.join(","),
                    self.open[g],
                    coeff
                ));
            }
        }
        out
    }
}

pub(crate) fn header(word: &str, names: &[String]) -> String {
    let mut line = word.to_string();
    for n in names {
        line.push(' ');
        line.push_str(n);
    }
    line.push('\n');
    line
}

/// Both sums of the OCHA relation on `(closed; open)` over Z2:
///
/// `Σ_{S ≠ ∅} μ(l(c_S), c_{S^c}; o)` plus
/// `Σ_S Σ_{i+r+j=d} μ(c_{S^c}; o_1..o_i, μ(c_S; o_{i+1}..o_{i+r}), ..)`,
/// with splits of the closed multiset counted once each. The inner `μ`
/// in the second sum may take no open inputs when `S` is nonempty.
pub fn ocha_defect(s: &OCHAStructure, closed: &[usize], open: &[usize]) -> Result<Chain, OchaError> {
    s.check_inputs(closed, open)?;
    let mut cs = closed.to_vec();
    cs.sort_unstable();
    let k = cs.len();
    let d = open.len();
    let mut total = Chain::zero();
    for m in 1..=k {
        for (sub, rest) in multiset_splits(&cs, m) {
            for (g, c) in s.l.bracket(&sub).terms() {
                let mut outer = rest.clone();
                outer.push(g);
                total.add_chain(&s.mu(&outer, open).scaled(c));
            }
        }
    }
    let mut outer_open = Vec::with_capacity(d + 1);
    for m in 0..=k {
        for (sub, rest) in multiset_splits(&cs, m) {
            for i in 0..=d {
                for r in 0..=d - i {
                    if m == 0 && r == 0 {
                        continue;
                    }
                    let inner = s.mu(&sub, &open[i..i + r]);
                    for (g, c) in inner.terms() {
                        outer_open.clear();
                        outer_open.extend_from_slice(&open[..i]);
                        outer_open.push(g);
                        outer_open.extend_from_slice(&open[i + r..]);
                        total.add_chain(&s.mu(&rest, &outer_open).scaled(c));
                    }
                }
            }
        }
    }
    Ok(total)
}

/// All input words over the open basis of length `n`.
fn words(basis: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..basis).map(move |b| {
                    let mut v = w.clone();
                    v.push(b);
                    v
                })
            })
            .collect();
    }
    out
}

/// The OCHA relation on every closed multiset of size `≤ max_k` and open
/// word of length `≤ max_d`, together with the A∞ and L∞ specializations.
pub fn check_ocha(s: &OCHAStructure, max_k: usize, max_d: usize, parallel: bool) -> Result<OchaReport, OchaError> {
    let mut cells = Vec::new();
    for k in 0..=max_k {
        for c in multisets(s.closed.len(), k) {
            for d in 0..=max_d {
                if k + d == 0 {
                    continue;
                }
                for o in words(s.open.len(), d) {
                    cells.push((c.clone(), o));
                }
            }
        }
    }
    let eval = |(c, o): &(Vec<usize>, Vec<usize>)| {
        let defect = ocha_defect(s, c, o).expect("generated inputs are typed");
        (!defect.is_zero()).then(|| OchaFailure {
            closed: c.clone(),
            open: o.clone(),
            defect,
        })
    };
    let failures: Vec<OchaFailure> = if parallel {
        cells.par_iter().filter_map(eval).collect()
    } else {
        cells.iter().filter_map(eval).collect()
    };
    Ok(OchaReport {
        checked: cells.len(),
        failures,
        open_ainf: check_ainf(&s.open_ainf_category(), max_d, parallel),
        closed_linf: check_linf(&s.l, max_k)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfinity::defect::ainf_defect;

    const TOY: &str = "closed a b
open x y
lsym 1 in=a out=b coeff=T^{0}
mu 1 0 closed=a open= out=x coeff=T^{0}
mu 1 0 closed=b open= out=y coeff=T^{0}
mu 0 1 closed= open=x out=y coeff=T^{0}
";

    #[test]
    fn toy_structure_satisfies_all_relations() {
        let s = OCHAStructure::parse(TOY).unwrap();
        let r = check_ocha(&s, 3, 3, false).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
        let text = s.serialize();
        assert!(text.contains("l 1 in=a out=b coeff=T^{0}\n"));
        assert_eq!(OCHAStructure::parse(&text).unwrap().serialize(), text);
    }

    #[test]
    fn breaking_the_closed_to_open_map_is_detected() {
        let mut s = OCHAStructure::parse(TOY).unwrap();
        s.add_mu_term(&[1], &[], 1, &NovikovElement::one()).unwrap();
        let r = check_ocha(&s, 1, 0, true).unwrap();
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].closed, vec![0]);
    }

    #[test]
    fn no_closed_part_matches_ainf() {
        let text = "closed\nopen x y\nmu 0 1 closed= open=x out=y coeff=T^{1}\nmu 0 2 closed= open=y,y out=x coeff=T^{0}\n";
        let s = OCHAStructure::parse(text).unwrap();
        let cat = s.open_ainf_category();
        for o in words(2, 3) {
            assert_eq!(ocha_defect(&s, &[], &o).unwrap(), ainf_defect(&cat, &o).unwrap());
        }
    }

    #[test]
    fn empty_operation_is_rejected() {
        let mut s = OCHAStructure::parse(TOY).unwrap();
        assert!(s.add_mu_term(&[], &[], 0, &NovikovElement::one()).is_err());
        assert!(OCHAStructure::parse("closed a\nopen a\n").is_err());
    }
}
