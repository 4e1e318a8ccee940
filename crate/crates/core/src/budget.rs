//! Closed-form curvature budgets, filtration shifts and index formulas.
//!
//! Rational formulas are exact. Only `strip_end_bound` integrates
//! numerically.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{int, rat, to_f64, Rat};
use crate::novikov::ActionValue;
use crate::trees::TupleClass;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BudgetError {
    #[error("ε must be positive")]
    NonPositiveEpsilon,
    #[error("δ must lie in (1/2, 1)")]
    DeltaOutOfRange,
    #[error("δ is required here")]
    MissingDelta,
    #[error("d = {0} is too small (need d ≥ {1})")]
    ArityTooSmall(usize, usize),
    #[error("cutoff is not monotone at sample {0}")]
    NonMonotoneCutoff(usize),
    #[error("cutoff sample {0} leaves [0, 1]")]
    CutoffOutOfRange(usize),
    #[error("need at least two cutoff samples")]
    TooFewSamples,
    #[error("input action {0} is not finite")]
    NonFiniteInput(usize),
    #[error("missing `{field}` for the {case} formula")]
    MissingField { case: &'static str, field: &'static str },
    #[error("Morse index {index} at position {position} lies outside [0, n]")]
    MorseIndexOutOfRange { position: usize, index: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetParams {
    pub epsilon: Rat,
    pub delta: Option<Rat>,
    pub d: usize,
    pub tuple_class: TupleClass,
}

impl BudgetParams {
    pub fn new(epsilon: Rat, d: usize, tuple_class: TupleClass) -> Self {
        BudgetParams {
            epsilon,
            delta: None,
            d,
            tuple_class,
        }
    }

    pub fn with_delta(mut self, delta: Rat) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn validate(&self) -> Result<(), BudgetError> {
        if self.epsilon <= Rat::zero() {
            return Err(BudgetError::NonPositiveEpsilon);
        }
        if let Some(delta) = &self.delta {
            check_delta(delta)?;
        }
        Ok(())
    }
}

fn check_delta(delta: &Rat) -> Result<(), BudgetError> {
    if *delta <= rat(1, 2) || *delta >= Rat::one() {
        Err(BudgetError::DeltaOutOfRange)
    } else {
        Ok(())
    }
}

/// Range of the Hamiltonian term on a strip end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianWindow {
    pub lo: Rat,
    pub hi: Rat,
}

/// `[lo, hi]` must sit strictly inside `(ε/2, ε)`, or `(δε, ε)` when δ is
/// given.
pub fn validate_floer_window(w: &HamiltonianWindow, p: &BudgetParams) -> Result<bool, BudgetError> {
    p.validate()?;
    let floor = match &p.delta {
        Some(delta) => delta * &p.epsilon,
        None => &p.epsilon / int(2),
    };
    Ok(w.lo <= w.hi && w.lo > floor && w.hi < p.epsilon)
}

/// Which closed-case count of thin parts to use near a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `2d - 3` exits: the bound is `-3ε/2`.
    #[default]
    Main,
    /// `2d - 1` exits: the bound is `-ε/2`.
    Draft,
}

/// Worst-case curvature near a vertex.
///
/// With `L_0 ≠ L_d` there is one exit strip at `ε`, `d` entries at `-ε/2`
/// and `d - 2` interior thin parts at `ε/2`. With `L_0 = L_d` the exit is
/// lost and one or three fewer interior parts remain, by convention.
pub fn vertex_curvature_budget(p: &BudgetParams, convention: Convention) -> Result<Rat, BudgetError> {
    p.validate()?;
    if p.d < 2 {
        return Err(BudgetError::ArityTooSmall(p.d, 2));
    }
    let eps = &p.epsilon;
    let half = eps / int(2);
    let d = int(p.d as i64);
    let closed = matches!(
        p.tuple_class,
        TupleClass::AlmostCyclicallyDifferent | TupleClass::GeneralClosed | TupleClass::Constant
    );
    let budget = if !closed {
        eps - &d * &half + (&d - int(2)) * (eps - &half)
    } else {
        let interior = match convention {
            Convention::Main => &d - int(3),
            Convention::Draft => &d - Rat::one(),
        };
        -(&d * &half) + interior * (eps - &half)
    };
    Ok(budget)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsDeltaBudget {
    /// Exit bound `ε`.
    pub exit: Rat,
    /// Per-entry bound `-δε`.
    pub entry: Rat,
    /// Interior cap `ε(2δ - 1)`.
    pub cap: Rat,
    /// `exit + 2·entry + cap`.
    pub worst_case: Rat,
}

/// Budget for the two-input base case of an (ε, δ) datum.
pub fn eps_delta_budget(epsilon: &Rat, delta: &Rat) -> Result<EpsDeltaBudget, BudgetError> {
    if *epsilon <= Rat::zero() {
        return Err(BudgetError::NonPositiveEpsilon);
    }
    check_delta(delta)?;
    let exit = epsilon.clone();
    let entry = -(delta * epsilon);
    let cap = epsilon * (delta * int(2) - Rat::one());
    let worst_case = &exit + &entry + &entry + &cap;
    Ok(EpsDeltaBudget {
        exit,
        entry,
        cap,
        worst_case,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StripEnd {
    Entry,
    Exit,
}

/// Bound on `∫∫ ∂_s β · H` over a strip end, by composite midpoint
/// quadrature.
///
/// `cutoff` samples `β` at `n + 1` equally spaced points of `[0, 1]`; it
/// must be non-decreasing with values in `[0, 1]`. On an entry the
/// integrand is bounded by `-min H`, on an exit by `max H`.
pub fn strip_end_bound(w: &HamiltonianWindow, end: StripEnd, cutoff: &[f64]) -> Result<f64, BudgetError> {
    if cutoff.len() < 2 {
        return Err(BudgetError::TooFewSamples);
    }
    for (k, b) in cutoff.iter().enumerate() {
        if !(0.0..=1.0).contains(b) {
            return Err(BudgetError::CutoffOutOfRange(k));
        }
        if k > 0 && *b < cutoff[k - 1] {
            return Err(BudgetError::NonMonotoneCutoff(k));
        }
    }
    let h_bound = match end {
        StripEnd::Entry => -to_f64(&w.lo),
        StripEnd::Exit => to_f64(&w.hi),
    };
    let n = cutoff.len() - 1;
    let step = 1.0 / n as f64;
    // Midpoint rule on each cell, with ∂_s β at the midpoint taken from the
    // neighbouring samples. Kahan summation keeps 10^4 cells within 1e-12.
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for k in 0..n {
        let slope = (cutoff[k + 1] - cutoff[k]) / step;
        let term = slope * h_bound * step - carry;
        let next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    Ok(sum)
}

/// Filtration check for one abstract term: the output action may exceed the
/// input sum only by positive curvature.
pub fn energy_action_check(
    inputs: &[ActionValue],
    output: &ActionValue,
    curvature_total: &Rat,
) -> Result<bool, BudgetError> {
    let mut sum = Rat::zero();
    for (k, a) in inputs.iter().enumerate() {
        match a {
            ActionValue::Finite(r) => sum += r,
            ActionValue::NegInfinity => return Err(BudgetError::NonFiniteInput(k)),
        }
    }
    let slack = if *curvature_total > Rat::zero() {
        curvature_total.clone()
    } else {
        Rat::zero()
    };
    Ok(match output {
        ActionValue::NegInfinity => true,
        ActionValue::Finite(out) => *out <= sum + slack,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuationShift {
    /// `(d - 1) ε₂ (1 - 2δ₂) + d (ε₂ - δ₁ε₁)`.
    pub per_d: Rat,
    /// `ε₂ - δ₁ε₁`.
    pub overall: Rat,
    pub filtered: bool,
}

pub fn continuation_shift(
    eps1: &Rat,
    delta1: &Rat,
    eps2: &Rat,
    delta2: &Rat,
    d: usize,
) -> Result<ContinuationShift, BudgetError> {
    if *eps1 <= Rat::zero() || *eps2 <= Rat::zero() {
        return Err(BudgetError::NonPositiveEpsilon);
    }
    check_delta(delta1)?;
    check_delta(delta2)?;
    if d < 1 {
        return Err(BudgetError::ArityTooSmall(d, 1));
    }
    let dd = int(d as i64);
    let overall = eps2 - delta1 * eps1;
    let per_d = (&dd - Rat::one()) * eps2 * (Rat::one() - delta2 * int(2))
        + &dd * &overall;
    Ok(ContinuationShift {
        filtered: overall <= Rat::zero(),
        per_d,
        overall,
    })
}

/// The overall shift in the limit `δ₁ → 1/2`: `ε₂ - ε₁/2`.
pub fn continuation_shift_half(eps1: &Rat, eps2: &Rat) -> Result<Rat, BudgetError> {
    if *eps1 <= Rat::zero() || *eps2 <= Rat::zero() {
        return Err(BudgetError::NonPositiveEpsilon);
    }
    Ok(eps2 - eps1 / int(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionCase {
    /// Polygons with `L_0 ≠ L_d`.
    Open,
    /// Polygons with `L_0 = L_d`: the open formula minus `|x⁺|`.
    Closed,
    /// Pearly trajectories: `n + μ - 1`.
    Pearly,
    /// Pearly trajectories between critical points: `|a| - |b| + μ - 1`.
    PearlyCrit,
    /// Quantum product configurations.
    Quantum,
    /// Clusters of discs with `d` inputs: `d - 2`.
    StripModuli,
    /// Stacked discs: `d - 1`.
    Stacked,
    /// Sphere clusters: `2d - 4`.
    SphereCluster,
    /// Discs with `l` boundary and `k` interior marked points: `l + 2k - 2`.
    MarkedDisc,
}

impl DimensionCase {
    pub const ALL: [DimensionCase; 9] = [
        DimensionCase::Open,
        DimensionCase::Closed,
        DimensionCase::Pearly,
        DimensionCase::PearlyCrit,
        DimensionCase::Quantum,
        DimensionCase::StripModuli,
        DimensionCase::Stacked,
        DimensionCase::SphereCluster,
        DimensionCase::MarkedDisc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DimensionCase::Open => "open",
            DimensionCase::Closed => "closed",
            DimensionCase::Pearly => "pearly",
            DimensionCase::PearlyCrit => "pearly_crit",
            DimensionCase::Quantum => "quantum",
            DimensionCase::StripModuli => "strip_moduli",
            DimensionCase::Stacked => "stacked",
            DimensionCase::SphereCluster => "sphere_cluster",
            DimensionCase::MarkedDisc => "marked_disc",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Inputs to the index formulas; each case reads only what it needs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IndexInput {
    pub n: Option<i64>,
    pub d: Option<i64>,
    pub d_r: Option<i64>,
    pub maslov: Option<i64>,
    pub morse_indices: Vec<i64>,
    pub out_index: Option<i64>,
    /// `|a|` and `|b|` for pearly trajectories between critical points.
    pub crit_a: Option<i64>,
    pub crit_b: Option<i64>,
    /// Boundary and interior marked points.
    pub l: Option<i64>,
    pub k: Option<i64>,
}

fn need(v: Option<i64>, case: DimensionCase, field: &'static str) -> Result<i64, BudgetError> {
    v.ok_or(BudgetError::MissingField {
        case: case.name(),
        field,
    })
}

/// Expected dimension of the moduli space for `case`.
///
/// The polygon formula is applied as stated for every `d`, including
/// `d = 1` where it gives `μ + n - 1`.
pub fn virtual_dimension(inp: &IndexInput, case: DimensionCase) -> Result<i64, BudgetError> {
    use DimensionCase::*;
    let morse_ok = |n: i64| {
        for (position, &index) in inp.morse_indices.iter().enumerate() {
            if index < 0 || index > n {
                return Err(BudgetError::MorseIndexOutOfRange { position, index });
            }
        }
        Ok(())
    };
    let morse_sum: i64 = inp.morse_indices.iter().sum();
    Ok(match case {
        Open | Closed => {
            let n = need(inp.n, case, "n")?;
            let d = need(inp.d, case, "d")?;
            let d_r = need(inp.d_r, case, "d_R")?;
            let mu = need(inp.maslov, case, "maslov")?;
            morse_ok(n)?;
            let base = mu + morse_sum - n * (d - d_r - 1) + d - 2;
            if case == Closed {
                base - need(inp.out_index, case, "out_index")?
            } else {
                base
            }
        }
        Pearly => need(inp.n, case, "n")? + need(inp.maslov, case, "maslov")? - 1,
        PearlyCrit => {
            need(inp.crit_a, case, "a")? - need(inp.crit_b, case, "b")? + need(inp.maslov, case, "maslov")? - 1
        }
        Quantum => {
            let n = need(inp.n, case, "n")?;
            let d = need(inp.d, case, "d")?;
            morse_ok(n)?;
            let shifted: i64 = inp.morse_indices.iter().map(|x| x - n).sum();
            need(inp.maslov, case, "maslov")? + shifted - need(inp.out_index, case, "out_index")? + d - 2
        }
        StripModuli => need(inp.d, case, "d")? - 2,
        Stacked => need(inp.d, case, "d")? - 1,
        SphereCluster => 2 * need(inp.d, case, "d")? - 4,
        MarkedDisc => need(inp.l, case, "l")? + 2 * need(inp.k, case, "k")? - 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;


    fn params(eps: Rat, d: usize, class: TupleClass) -> BudgetParams {
        BudgetParams::new(eps, d, class)
    }

    #[test]
    fn window_validation() {
        let p = params(int(1), 3, TupleClass::CyclicallyDifferent);
        let w = |lo, hi| HamiltonianWindow { lo: rat(lo, 10), hi: rat(hi, 10) };
        assert!(validate_floer_window(&w(6, 9), &p).unwrap());
        assert!(!validate_floer_window(&w(4, 9), &p).unwrap());
        assert!(!validate_floer_window(&w(6, 9), &p.clone().with_delta(rat(7, 10))).unwrap());
    }

    #[test]
    fn vertex_budgets() {
        let open = params(int(1), 7, TupleClass::CyclicallyDifferent);
        assert_eq!(vertex_curvature_budget(&open, Convention::Main).unwrap(), int(0));
        let closed = params(int(2), 5, TupleClass::AlmostCyclicallyDifferent);
        assert_eq!(vertex_curvature_budget(&closed, Convention::Main).unwrap(), int(-3));
        let draft = params(int(1), 4, TupleClass::AlmostCyclicallyDifferent);
        assert_eq!(vertex_curvature_budget(&draft, Convention::Draft).unwrap(), rat(-1, 2));
        assert!(vertex_curvature_budget(&params(int(1), 1, TupleClass::CyclicallyDifferent), Convention::Main).is_err());
    }

    #[test]
    fn eps_delta_examples() {
        let b = eps_delta_budget(&int(1), &rat(7, 10)).unwrap();
        assert_eq!((b.worst_case, b.cap), (int(0), rat(2, 5)));
        let b = eps_delta_budget(&int(2), &rat(3, 5)).unwrap();
        assert_eq!((b.worst_case, b.cap), (int(0), rat(2, 5)));
        let near_half = eps_delta_budget(&int(1), &rat(500_001, 1_000_000)).unwrap();
        assert!(near_half.cap < rat(1, 100_000));
        assert!(eps_delta_budget(&int(1), &rat(1, 2)).is_err());
    }

    #[test]
    fn strip_ends() {
        let w = HamiltonianWindow { lo: rat(3, 5), hi: rat(9, 10) };
        let ramp: Vec<f64> = (0..=10_000).map(|k| k as f64 / 10_000.0).collect();
        let entry = strip_end_bound(&w, StripEnd::Entry, &ramp).unwrap();
        assert!((entry + 0.6).abs() < 1e-9);
        let exit = strip_end_bound(&w, StripEnd::Exit, &ramp).unwrap();
        assert!((exit - 0.9).abs() < 1e-9);
        assert_eq!(strip_end_bound(&w, StripEnd::Exit, &[1.0; 50]).unwrap(), 0.0);
        assert_eq!(
            strip_end_bound(&w, StripEnd::Exit, &[0.0, 0.5, 0.4, 1.0]),
            Err(BudgetError::NonMonotoneCutoff(2))
        );
    }

    #[test]
    fn energy_checks() {
        let f = |n, d| ActionValue::Finite(rat(n, d));
        assert!(energy_action_check(&[f(1, 4), f(1, 4)], &f(2, 5), &rat(-1, 10)).unwrap());
        assert!(!energy_action_check(&[f(0, 1)], &f(1, 5), &int(0)).unwrap());
        assert!(energy_action_check(&[f(0, 1)], &ActionValue::NegInfinity, &int(0)).unwrap());
        assert!(energy_action_check(&[ActionValue::NegInfinity], &f(0, 1), &int(0)).is_err());
    }

    #[test]
    fn continuation_example() {
        let s = continuation_shift(&int(1), &rat(3, 5), &rat(1, 2), &rat(4, 5), 3).unwrap();
        assert_eq!(s.per_d, rat(-9, 10));
        assert_eq!(s.overall, rat(-1, 10));
        assert!(s.filtered);
        let edge = continuation_shift(&int(1), &rat(3, 5), &rat(3, 5), &rat(4, 5), 2).unwrap();
        assert_eq!(edge.overall, int(0));
        assert_eq!(continuation_shift_half(&int(1), &rat(2, 5)).unwrap(), rat(-1, 10));
    }

    #[test]
    fn dimension_examples() {
        let mut inp = IndexInput {
            n: Some(2),
            d: Some(3),
            d_r: Some(3),
            maslov: Some(0),
            ..Default::default()
        };
        assert_eq!(virtual_dimension(&inp, DimensionCase::Open).unwrap(), 3);
        inp.maslov = Some(-2);
        assert_eq!(virtual_dimension(&inp, DimensionCase::Open).unwrap(), 1);
        assert!(virtual_dimension(&inp, DimensionCase::Closed).is_err());
        let pearly = IndexInput { n: Some(2), maslov: Some(2), ..Default::default() };
        assert_eq!(virtual_dimension(&pearly, DimensionCase::Pearly).unwrap(), 3);
        let crit = IndexInput { crit_a: Some(2), crit_b: Some(1), maslov: Some(0), ..Default::default() };
        assert_eq!(virtual_dimension(&crit, DimensionCase::PearlyCrit).unwrap(), 0);
        let d4 = IndexInput { d: Some(4), ..Default::default() };
        assert_eq!(virtual_dimension(&d4, DimensionCase::StripModuli).unwrap(), 2);
        assert_eq!(virtual_dimension(&d4, DimensionCase::Stacked).unwrap(), 3);
        assert_eq!(virtual_dimension(&d4, DimensionCase::SphereCluster).unwrap(), 4);
        let disc = IndexInput { l: Some(2), k: Some(1), ..Default::default() };
        assert_eq!(virtual_dimension(&disc, DimensionCase::MarkedDisc).unwrap(), 2);
        let bad = IndexInput { morse_indices: vec![3], ..inp };
        assert!(virtual_dimension(&bad, DimensionCase::Open).is_err());
    }
}
