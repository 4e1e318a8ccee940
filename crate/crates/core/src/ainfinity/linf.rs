//! L∞ algebras over Z2 with sparse symmetric brackets.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::chain::Chain;
use super::defect::Failure;
use super::text::{self, ParseError};
use crate::novikov::NovikovElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinfError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("bracket table is not symmetric: {0:?} and {1:?} differ")]
    AsymmetricTable(Vec<usize>, Vec<usize>),
    #[error("unknown basis element #{0}")]
    UnknownBasis(usize),
    #[error("brackets need at least one input")]
    EmptyInput,
}

/// Brackets `l_n` stored per ordered input tuple.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LInfinityAlgebra {
    basis: Vec<String>,
    tables: BTreeMap<Vec<usize>, Chain>,
}

/// Distinct permutations of `v`.
pub(crate) fn permutations(v: &[usize]) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    let mut cur = v.to_vec();
    permute(&mut cur, 0, &mut out);
    out
}

fn permute(v: &mut Vec<usize>, k: usize, out: &mut BTreeSet<Vec<usize>>) {
    if k == v.len() {
        out.insert(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, out);
        v.swap(k, i);
    }
}

/// Splits a multiset of inputs into `(S, S^c)` with `|S| = m`, one
/// representative per distinct pair of sub-multisets.
pub(crate) fn multiset_splits(inputs: &[usize], m: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = inputs.len();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(m);
    subsets(n, m, 0, &mut pick, &mut |idx| {
        let s: Vec<usize> = idx.iter().map(|&i| inputs[i]).collect();
        let mut key = s.clone();
        key.sort_unstable();
        if seen.insert(key) {
            let rest: Vec<usize> = (0..n).filter(|i| !idx.contains(i)).map(|i| inputs[i]).collect();
            out.push((s, rest));
        }
    });
    out
}

fn subsets(n: usize, m: usize, from: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if pick.len() == m {
        f(pick);
        return;
    }
    for i in from..n {
        if n - i < m - pick.len() {
            break;
        }
        pick.push(i);
        subsets(n, m, i + 1, pick, f);
        pick.pop();
    }
}

impl LInfinityAlgebra {
    pub fn new(basis: Vec<String>) -> Self {
        LInfinityAlgebra {
            basis,
            tables: BTreeMap::new(),
        }
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn basis_id(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    pub fn tables(&self) -> &BTreeMap<Vec<usize>, Chain> {
        &self.tables
    }

    pub fn max_arity(&self) -> usize {
        self.tables.keys().map(Vec::len).max().unwrap_or(0)
    }

    fn check_basis(&self, inputs: &[usize], value: &Chain) -> Result<(), LinfError> {
        if inputs.is_empty() {
            return Err(LinfError::EmptyInput);
        }
        for g in inputs.iter().copied().chain(value.terms().map(|(g, _)| g)) {
            if g >= self.basis.len() {
                return Err(LinfError::UnknownBasis(g));
            }
        }
        Ok(())
    }

    /// Adds `coeff · out` to the single ordered entry `l(inputs)`.
    pub fn add_term(&mut self, inputs: &[usize], out: usize, coeff: &NovikovElement) -> Result<(), LinfError> {
        let term = Chain::term(out, coeff.clone());
        self.check_basis(inputs, &term)?;
        let entry = self.tables.entry(inputs.to_vec()).or_default();
        entry.add_chain(&term);
        if entry.is_zero() {
            self.tables.remove(inputs);
        }
        Ok(())
    }

    /// Adds `coeff · out` to `l(σ inputs)` for every distinct permutation.
    pub fn insert_symmetric(&mut self, inputs: &[usize], out: usize, coeff: &NovikovElement) -> Result<(), LinfError> {
        for p in permutations(inputs) {
            self.add_term(&p, out, coeff)?;
        }
        Ok(())
    }

    /// First pair of permuted keys whose values differ.
    pub fn check_symmetric(&self) -> Result<(), LinfError> {
        for (k, v) in &self.tables {
            for p in permutations(k) {
                if self.tables.get(&p).unwrap_or(&Chain::zero()) != v {
                    return Err(LinfError::AsymmetricTable(k.clone(), p));
                }
            }
        }
        Ok(())
    }

    pub fn bracket(&self, inputs: &[usize]) -> Chain {
        self.tables.get(inputs).cloned().unwrap_or_default()
    }

    pub fn bracket_chains(&self, args: &[&Chain]) -> Chain {
        super::chain::expand_multilinear(args, &mut |gs| self.bracket(gs))
    }

    /// Reads `basis a b ...`, then `l n in=a,b out=c coeff=...` (one
    /// ordered entry) or `lsym n in=... out=... coeff=...` (all
    /// permutations of the inputs). The result must be symmetric.
    pub fn parse(input: &str) -> Result<Self, LinfError> {
        let mut alg = Self::default();
        for line in text::lines(input) {
            let head = line.tokens[0];
            match head.text {
                "basis" => {
                    for t in &line.tokens[1..] {
                        if alg.basis_id(t.text).is_some() {
                            return Err(line.error(t.column, format!("`{}` declared twice", t.text)).into());
                        }
                        alg.basis.push(t.text.to_string());
                    }
                }
                "l" | "lsym" => {
                    let (inputs, out, coeff) = parse_term(&line, &alg.basis)?;
                    if head.text == "l" {
                        alg.add_term(&inputs, out, &coeff)?;
                    } else {
                        alg.insert_symmetric(&inputs, out, &coeff)?;
                    }
                }
                other => {
                    return Err(line.error(head.column, format!("unknown directive `{other}`")).into())
                }
            }
        }
        alg.check_symmetric()?;
        Ok(alg)
    }

    /// One `l` line per ordered entry and output term.
    pub fn serialize(&self) -> String {
        let mut out = super::ocha::header("basis", &self.basis);
        let mut keys: Vec<&Vec<usize>> = self.tables.keys().collect();
        keys.sort_by_key(|k| (k.len(), (*k).clone()));
        for k in keys {
            let ins: Vec<&str> = k.iter().map(|g| self.basis[*g].as_str()).collect();
            for (g, c) in self.tables[k].terms() {
                out.push_str(&format!(
                    "l {} in={} out={} coeff={}\n",
                    k.len(),
                    ins.join(","),
                    self.basis[g],
                    c
                ));
            }
        }
        out
    }
}

pub(crate) fn parse_term(
    line: &text::Line,
    basis: &[String],
) -> Result<(Vec<usize>, usize, NovikovElement), ParseError> {
    let n_tok = line.token(1, "arity")?;
    let n = text::integer(line, n_tok)?;
    line.only_fields(2, &["in", "out", "coeff"])?;
    let in_tok = line.field(2, "in")?;
    let lookup = |name: &str, col: usize| {
        basis
            .iter()
            .position(|b| b == name)
            .ok_or_else(|| line.error(col, format!("unknown basis element `{name}`")))
    };
    let inputs = text::names(in_tok)
        .into_iter()
        .map(|s| lookup(s, in_tok.column))
        .collect::<Result<Vec<_>, _>>()?;
    if inputs.len() != n || n == 0 {
        return Err(line.error(in_tok.column, format!("expected {n} inputs, got {}", inputs.len())));
    }
    let out_tok = line.field(2, "out")?;
    let out = lookup(out_tok.text, out_tok.column)?;
    let coeff = text::novikov(line, line.field(2, "coeff")?)?;
    Ok((inputs, out, coeff))
}

/// `Σ_{m=1}^{n} Σ_{(S, S^c), |S| = m} l_{n-m+1}(l_m(v_S), v_{S^c})` over Z2,
/// with one term per distinct split of the input multiset.
pub fn linf_defect(alg: &LInfinityAlgebra, inputs: &[usize]) -> Result<Chain, LinfError> {
    alg.check_symmetric()?;
    Ok(linf_defect_unchecked(alg, inputs))
}

pub(crate) fn linf_defect_unchecked(alg: &LInfinityAlgebra, inputs: &[usize]) -> Chain {
    let n = inputs.len();
    let mut total = Chain::zero();
    for m in 1..=n {
        for (s, rest) in multiset_splits(inputs, m) {
            let inner = alg.bracket(&s);
            for (g, c) in inner.terms() {
                let mut outer = Vec::with_capacity(rest.len() + 1);
                outer.push(g);
                outer.extend_from_slice(&rest);
                total.add_chain(&alg.bracket(&outer).scaled(c));
            }
        }
    }
    total
}

/// Sorted multisets of basis indices of size `n`.
pub(crate) fn multisets(basis: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(basis: usize, n: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in from..basis {
            cur.push(b);
            go(basis, n, b, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(basis, n, 0, &mut Vec::new(), &mut out);
    out
}

/// The L∞ relation on every input multiset of size `1..=max_n`.
pub fn check_linf(alg: &LInfinityAlgebra, max_n: usize) -> Result<Vec<Failure>, LinfError> {
    alg.check_symmetric()?;
    let mut out = Vec::new();
    for n in 1..=max_n {
        for inputs in multisets(alg.basis.len(), n) {
            let defect = linf_defect_unchecked(alg, &inputs);
            if !defect.is_zero() {
                out.push(Failure { inputs, defect });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abelian() -> LInfinityAlgebra {
        LInfinityAlgebra::parse("basis a b\nl 2 in=a,a out=b coeff=1\n").unwrap()
    }

    #[test]
    fn abelian_example_satisfies_jacobi() {
        assert!(check_linf(&abelian(), 4).unwrap().is_empty());
    }

    #[test]
    fn splits_dedupe_repeated_inputs() {
        assert_eq!(multiset_splits(&[0, 0, 1], 1).len(), 2);
        assert_eq!(multiset_splits(&[0, 1, 2], 2).len(), 3);
        assert_eq!(multisets(2, 3).len(), 4);
    }

    #[test]
    fn asymmetric_table_is_rejected() {
        let text = "basis a b\nl 2 in=a,b out=b coeff=1\n";
        assert!(matches!(
            LInfinityAlgebra::parse(text),
            Err(LinfError::AsymmetricTable(_, _))
        ));
        let ok = "basis a b\nlsym 2 in=a,b out=b coeff=1\n";
        let alg = LInfinityAlgebra::parse(ok).unwrap();
        assert_eq!(LInfinityAlgebra::parse(&alg.serialize()).unwrap(), alg);
    }

    #[test]
    fn square_zero_differential() {
        let alg = LInfinityAlgebra::parse("basis a b\nl 1 in=a out=b coeff=T^{1/2}\n").unwrap();
        assert!(check_linf(&alg, 3).unwrap().is_empty());
    }

    #[test]
    fn jacobi_failure_is_found() {
        // [[a,b],c] + [[a,c],b] + [[b,c],a] = b + 0 + b until [b,b] = a.
        let mut alg = LInfinityAlgebra::new(vec!["a".into(), "b".into(), "c".into()]);
        let one = NovikovElement::one();
        alg.insert_symmetric(&[0, 1], 0, &one).unwrap();
        alg.insert_symmetric(&[0, 2], 1, &one).unwrap();
        alg.insert_symmetric(&[1, 2], 2, &one).unwrap();
        assert!(linf_defect(&alg, &[0, 1, 2]).unwrap().is_zero());
        alg.insert_symmetric(&[1, 1], 0, &one).unwrap();
        assert!(!linf_defect(&alg, &[0, 1, 2]).unwrap().is_zero());
    }
}
