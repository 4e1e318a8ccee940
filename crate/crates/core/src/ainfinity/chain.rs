use std::collections::BTreeMap;

use crate::novikov::NovikovElement;

/// A finite sum `Σ P_g g` of basis elements with Novikov coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    terms: BTreeMap<usize, NovikovElement>,
}

impl Chain {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(g: usize) -> Self {
        Self::term(g, NovikovElement::one())
    }

    pub fn term(g: usize, coeff: NovikovElement) -> Self {
        let mut c = Self::zero();
        c.add_term(g, &coeff);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &NovikovElement)> {
        self.terms.iter().map(|(g, c)| (*g, c))
    }

    pub fn coeff(&self, g: usize) -> NovikovElement {
        self.terms.get(&g).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, g: usize, coeff: &NovikovElement) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(g).or_default();
        slot.add_assign_ref(coeff);
        if slot.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add_chain(&mut self, other: &Chain) {
        for (g, c) in &other.terms {
            self.add_term(*g, c);
        }
    }

    pub fn scaled(&self, by: &NovikovElement) -> Chain {
        let mut out = Chain::zero();
        for (g, c) in &self.terms {
            out.add_term(*g, &c.mul(by));
        }
        out
    }

    pub fn plus(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        out.add_chain(other);
        out
    }
}

/// Expands a multilinear operation over chain arguments: `op` is evaluated
/// on every tuple of basis elements and the results are weighted by the
/// product of the coefficients.
pub fn expand_multilinear(args: &[&Chain], op: &mut dyn FnMut(&[usize]) -> Chain) -> Chain {
    let mut out = Chain::zero();
    let mut picks = Vec::with_capacity(args.len());
    expand_rec(args, &mut picks, &NovikovElement::one(), op, &mut out);
    out
}

fn expand_rec(
    args: &[&Chain],
    picks: &mut Vec<usize>,
    weight: &NovikovElement,
    op: &mut dyn FnMut(&[usize]) -> Chain,
    out: &mut Chain,
) {
    if picks.len() == args.len() {
        let value = op(picks);
        if !value.is_zero() {
            out.add_chain(&value.scaled(weight));
        }
        return;
    }
    for (g, c) in args[picks.len()].terms() {
        picks.push(g);
        expand_rec(args, picks, &weight.mul(c), op, out);
        picks.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let mut c = Chain::basis(3);
        c.add_term(3, &NovikovElement::one());
        assert!(c.is_zero());
    }

    #[test]
    fn multilinear_expansion_weights() {
        let t: NovikovElement = "T^1".parse().unwrap();
        let x = Chain::basis(0).plus(&Chain::term(1, t.clone()));
        let y = Chain::term(2, t.clone());
        let out = expand_multilinear(&[&x, &y], &mut |gs| Chain::basis(gs[0] * 10 + gs[1]));
        assert_eq!(out.coeff(2), t);
        assert_eq!(out.coeff(12), t.mul(&t));
    }
}
