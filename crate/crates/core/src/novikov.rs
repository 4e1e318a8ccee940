//! Finite Novikov series over Z2 and the action functional on them.
//!
//! An element is a finite sum of monomials `T^λ` with exact rational
//! exponents; since coefficients live in Z2 the element is just its set of
//! exponents. Infinite series are not modelled: every structure handled by
//! this crate has finitely many terms at a fixed arity.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::exact::{format_rational, parse_rational, Rat};

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NovikovElement {
    exponents: BTreeSet<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid Novikov element `{text}`: {reason}")]
pub struct NovikovParseError {
    pub text: String,
    pub reason: String,
}

impl NovikovElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rat::zero())
    }

    pub fn monomial(exponent: Rat) -> Self {
        Self {
            exponents: BTreeSet::from([exponent]),
        }
    }

    /// Sums the monomials `T^e` for each listed exponent; repeats cancel.
    pub fn from_exponents<I: IntoIterator<Item = Rat>>(exponents: I) -> Self {
        let mut out = Self::zero();
        for e in exponents {
            out.toggle(e);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Exponents in increasing order.
    pub fn exponents(&self) -> impl Iterator<Item = &Rat> {
        self.exponents.iter()
    }

    /// Smallest exponent; `None` stands for the valuation `+∞` of zero.
    pub fn valuation(&self) -> Option<&Rat> {
        self.exponents.first()
    }

    /// Adds a single monomial in place.
    pub fn toggle(&mut self, exponent: Rat) {
        if !self.exponents.remove(&exponent) {
            self.exponents.insert(exponent);
        }
    }

    pub fn add_assign_ref(&mut self, other: &NovikovElement) {
        for e in &other.exponents {
            self.toggle(e.clone());
        }
    }

    /// Multiplies by `T^shift`.
    pub fn shifted(&self, shift: &Rat) -> Self {
        Self {
            exponents: self.exponents.iter().map(|e| e + shift).collect(),
        }
    }

    /// True when every exponent is non-negative (membership in Λ₀).
    pub fn in_positive_ring(&self) -> bool {
        self.valuation().is_none_or(|v| *v >= Rat::zero())
    }

    pub fn add(&self, other: &NovikovElement) -> NovikovElement {
        Self {
            exponents: self
                .exponents
                .symmetric_difference(&other.exponents)
                .cloned()
                .collect(),
        }
    }

    pub fn mul(&self, other: &NovikovElement) -> NovikovElement {
        let mut out = Self::zero();
        for a in &self.exponents {
            for b in &other.exponents {
                out.toggle(a + b);
            }
        }
        out
    }
}

impl Add for &NovikovElement {
    type Output = NovikovElement;
    fn add(self, rhs: &NovikovElement) -> NovikovElement {
        NovikovElement::add(self, rhs)
    }
}

impl Add for NovikovElement {
    type Output = NovikovElement;
    fn add(self, rhs: NovikovElement) -> NovikovElement {
        NovikovElement::add(&self, &rhs)
    }
}

impl Mul for &NovikovElement {
    type Output = NovikovElement;
    fn mul(self, rhs: &NovikovElement) -> NovikovElement {
        NovikovElement::mul(self, rhs)
    }
}

impl Mul for NovikovElement {
    type Output = NovikovElement;
    fn mul(self, rhs: NovikovElement) -> NovikovElement {
        NovikovElement::mul(&self, &rhs)
    }
}

impl fmt::Display for NovikovElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for e in &self.exponents {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            write!(f, "T^{{{}}}", format_rational(e))?;
        }
        Ok(())
    }
}

impl FromStr for NovikovElement {
    type Err = NovikovParseError;

    /// Accepts `0`, `1`, `T`, `T^3`, `T^{-1/2}`, `T^0.25`, joined by `+`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| NovikovParseError {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(fail("empty"));
        }
        if trimmed == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for raw in trimmed.split('+') {
            let term = raw.trim();
            let exponent = if term == "1" {
                Rat::zero()
            } else if term == "T" {
                Rat::from_integer(1.into())
            } else if let Some(rest) = term.strip_prefix("T^") {
                let inner = rest
                    .strip_prefix('{')
                    .map(|r| r.strip_suffix('}').ok_or_else(|| fail("unbalanced brace")))
                    .transpose()?
                    .unwrap_or(rest);
                parse_rational(inner).map_err(|_| fail("bad exponent"))?
            } else {
                return Err(fail("expected a monomial T^{p/q}"));
            };
            out.toggle(exponent);
        }
        Ok(out)
    }
}

/// A value of the action functional; `NegInfinity` is the action of zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionValue {
    NegInfinity,
    Finite(Rat),
}

impl ActionValue {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ActionValue::NegInfinity => None,
            ActionValue::Finite(r) => Some(r),
        }
    }

    pub fn is_neg_infinity(&self) -> bool {
        matches!(self, ActionValue::NegInfinity)
    }

    /// Sum of actions; `-∞` is absorbing.
    pub fn plus(&self, other: &ActionValue) -> ActionValue {
        match (self, other) {
            (ActionValue::Finite(a), ActionValue::Finite(b)) => ActionValue::Finite(a + b),
            _ => ActionValue::NegInfinity,
        }
    }

    pub fn plus_rational(&self, r: &Rat) -> ActionValue {
        match self {
            ActionValue::Finite(a) => ActionValue::Finite(a + r),
            ActionValue::NegInfinity => ActionValue::NegInfinity,
        }
    }
}

impl fmt::Display for ActionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionValue::NegInfinity => f.write_str("-inf"),
            ActionValue::Finite(r) => f.write_str(&format_rational(r)),
        }
    }
}

/// Action of `coeff · g` where `g` contributes `hamiltonian_term`:
/// `-val(coeff) + h`, and `-∞` when `coeff` is zero.
pub fn action(coeff: &NovikovElement, hamiltonian_term: &Rat) -> ActionValue {
    match coeff.valuation() {
        None => ActionValue::NegInfinity,
        Some(v) => ActionValue::Finite(hamiltonian_term - v),
    }
}

/// Action of `Σ P_i g_i`: the maximum of the per-summand actions.
pub fn action_of_sum<'a, I>(terms: I) -> ActionValue
where
    I: IntoIterator<Item = (&'a NovikovElement, &'a Rat)>,
{
    terms
        .into_iter()
        .map(|(p, h)| action(p, h))
        .max()
        .unwrap_or(ActionValue::NegInfinity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn nov(s: &str) -> NovikovElement {
        s.parse().unwrap()
    }

    #[test]
    fn addition_cancels_and_merges() {
        assert!((nov("T^0.5") + nov("T^0.5")).is_zero());
        let sum = nov("T^0.5") + nov("T^1.2");
        assert_eq!(sum.exponents().cloned().collect::<Vec<_>>(), vec![rat(1, 2), rat(6, 5)]);
        assert_eq!(NovikovElement::zero() + nov("T^3"), nov("T^3"));
    }

    #[test]
    fn multiplication_over_z2() {
        assert_eq!(nov("T^0.5") * nov("T^1"), nov("T^{3/2}"));
        assert_eq!(nov("1+T") * nov("1+T"), nov("1+T^2"));
        assert!((nov("T^2+T^5") * NovikovElement::zero()).is_zero());
    }

    #[test]
    fn text_round_trip() {
        let x = nov("T^{-1/2} + T^3 + 1");
        assert_eq!(x.to_string(), "T^{-1/2}+T^{0}+T^{3}");
        assert_eq!(nov(&x.to_string()), x);
        assert_eq!(NovikovElement::zero().to_string(), "0");
        assert!("T^{1".parse::<NovikovElement>().is_err());
        assert!("x".parse::<NovikovElement>().is_err());
    }

    #[test]
    fn action_examples() {
        assert_eq!(
            action(&nov("T^0.5+T^1.2"), &rat(3, 10)),
            ActionValue::Finite(rat(-1, 5))
        );
        assert_eq!(action(&NovikovElement::zero(), &int(4)), ActionValue::NegInfinity);
        assert_eq!(action(&NovikovElement::one(), &int(0)), ActionValue::Finite(int(0)));
    }

    #[test]
    fn action_of_sum_examples() {
        let (a, b, z) = (nov("T^1"), nov("T^0.2"), int(0));
        assert_eq!(
            action_of_sum([(&a, &z), (&b, &z)]),
            ActionValue::Finite(rat(-1, 5))
        );
        assert_eq!(action_of_sum(std::iter::empty()), ActionValue::NegInfinity);
        let one = NovikovElement::one();
        let five = int(5);
        assert_eq!(action_of_sum([(&one, &five)]), ActionValue::Finite(int(5)));
    }

    #[test]
    fn neg_infinity_orders_below_everything() {
        assert!(ActionValue::NegInfinity < ActionValue::Finite(int(-1000)));
        assert_eq!(
            ActionValue::NegInfinity.plus(&ActionValue::Finite(int(1))),
            ActionValue::NegInfinity
        );
    }
}
