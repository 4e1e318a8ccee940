use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::category::FilteredAInfCategory;
use super::chain::Chain;
use crate::exact::Rat;
use crate::novikov::ActionValue;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyReport {
    /// Largest overshoot `A(μ_d(g_1..g_d)) - Σ A(g_i)` over the table, per
    /// arity `1..=max_arity`; `-inf` when `μ_d` vanishes.
    pub raw: BTreeMap<usize, ActionValue>,
    /// `raw` clamped below at 0.
    pub eps: BTreeMap<usize, Rat>,
    /// Action of each supplied unit element.
    pub unit_level: BTreeMap<usize, ActionValue>,
    pub is_filtered: bool,
}

/// Overshoot of a single table entry.
pub(crate) fn entry_shift(
    output: ActionValue,
    input_actions: impl IntoIterator<Item = Rat>,
) -> ActionValue {
    let total: Rat = input_actions.into_iter().fold(Rat::zero(), |acc, a| acc + a);
    output.plus_rational(&-total)
}

pub(crate) fn clamp(raw: &ActionValue) -> Rat {
    match raw {
        ActionValue::Finite(r) if *r > Rat::zero() => r.clone(),
        _ => Rat::zero(),
    }
}

pub fn measure_discrepancies(
    cat: &FilteredAInfCategory,
    units: &BTreeMap<usize, Chain>,
) -> DiscrepancyReport {
    let mut raw: BTreeMap<usize, ActionValue> = (1..=cat.max_arity())
        .map(|d| (d, ActionValue::NegInfinity))
        .collect();
    for (inputs, out) in cat.table() {
        let shift = entry_shift(
            cat.chain_action(out),
            inputs.iter().map(|g| cat.generator(*g).action()),
        );
        let slot = raw.get_mut(&inputs.len()).expect("arity in range");
        if shift > *slot {
            *slot = shift;
        }
    }
    let eps: BTreeMap<usize, Rat> = raw.iter().map(|(d, r)| (*d, clamp(r))).collect();
    let unit_level: BTreeMap<usize, ActionValue> =
        units.iter().map(|(o, u)| (*o, cat.chain_action(u))).collect();
    let zero = ActionValue::Finite(Rat::zero());
    let is_filtered = eps.values().all(Zero::is_zero) && unit_level.values().all(|u| *u <= zero);
    DiscrepancyReport {
        raw,
        eps,
        unit_level,
        is_filtered,
    }
}

/// Which unit axiom failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitViolation {
    /// `e` is not an endomorphism of the object.
    NotEndomorphism { generator: usize },
    /// `μ_1(e) ≠ 0`.
    Differential { got: Chain },
    /// `μ_2(e, x) ≠ x` (`left`) or `μ_2(x, e) ≠ x`.
    Product { left: bool, x: usize, got: Chain },
    /// `μ_d` with `e` in 0-based position `slot` and `others` around it is
    /// nonzero.
    Higher { d: usize, slot: usize, others: Vec<usize>, got: Chain },
}

/// Checks that `e ∈ hom(X, X)` is a strict unit, stopping at the first
/// violation in a fixed order: `μ_1`, left products, right products, then
/// higher operations by arity, slot and remaining inputs.
pub fn check_strict_unit(
    cat: &FilteredAInfCategory,
    object: usize,
    e: &Chain,
) -> Result<(), UnitViolation> {
    for (g, _) in e.terms() {
        let gen = cat.generator(g);
        if gen.source != object || gen.target != object {
            return Err(UnitViolation::NotEndomorphism { generator: g });
        }
    }
    let d1 = cat.mu_chains(&[e]);
    if !d1.is_zero() {
        return Err(UnitViolation::Differential { got: d1 });
    }
    for left in [true, false] {
        for (x, gen) in cat.generators().iter().enumerate() {
            let touches = if left { gen.source } else { gen.target } == object;
            if !touches {
                continue;
            }
            let bx = Chain::basis(x);
            let got = if left {
                cat.mu_chains(&[e, &bx])
            } else {
                cat.mu_chains(&[&bx, e])
            };
            if got != bx {
                return Err(UnitViolation::Product { left, x, got });
            }
        }
    }
    // Only tuples that meet the table can be nonzero.
    let support: BTreeSet<usize> = e.terms().map(|(g, _)| g).collect();
    let mut candidates: BTreeSet<(usize, usize, Vec<usize>)> = BTreeSet::new();
    for key in cat.table().keys().filter(|k| k.len() >= 3) {
        for (slot, g) in key.iter().enumerate() {
            if support.contains(g) {
                let mut others = key.clone();
                others.remove(slot);
                candidates.insert((key.len(), slot, others));
            }
        }
    }
    for (d, slot, others) in candidates {
        let chains: Vec<Chain> = others.iter().map(|g| Chain::basis(*g)).collect();
        let mut args: Vec<&Chain> = chains.iter().collect();
        args.insert(slot, e);
        let got = cat.mu_chains(&args);
        if !got.is_zero() {
            return Err(UnitViolation::Higher { d, slot, others, got });
        }
    }
    Ok(())
}
