use rayon::prelude::*;

use super::category::{CategoryError, FilteredAInfCategory};
use super::chain::Chain;

/// Sum over `i + k + j = d`, `k ≥ 1` of
/// `μ_{i+1+j}(x_1, …, x_i, μ_k(x_{i+1}, …, x_{i+k}), x_{i+k+1}, …, x_d)`.
///
/// Over Z2 this is the difference of the two sides of the A∞ relation, so
/// the relation holds on `inputs` iff the result is zero.
pub fn ainf_defect(cat: &FilteredAInfCategory, inputs: &[usize]) -> Result<Chain, CategoryError> {
    cat.check_composable(inputs)?;
    let d = inputs.len();
    let mut total = Chain::zero();
    let mut outer = Vec::with_capacity(d);
    for i in 0..d {
        for k in 1..=d - i {
            let inner = cat.mu(&inputs[i..i + k]);
            for (g, c) in inner.terms() {
                outer.clear();
                outer.extend_from_slice(&inputs[..i]);
                outer.push(g);
                outer.extend_from_slice(&inputs[i + k..]);
                let value = cat.mu(&outer);
                if !value.is_zero() {
                    total.add_chain(&value.scaled(c));
                }
            }
        }
    }
    Ok(total)
}

/// The same sum with chain arguments, evaluated by nesting multilinear
/// extensions of `μ` rather than by expanding the arguments first.
pub fn ainf_defect_chains(cat: &FilteredAInfCategory, args: &[&Chain]) -> Chain {
    let d = args.len();
    let mut total = Chain::zero();
    for i in 0..d {
        for k in 1..=d - i {
            let inner = cat.mu_chains(&args[i..i + k]);
            if inner.is_zero() {
                continue;
            }
            let mut outer: Vec<&Chain> = args[..i].to_vec();
            outer.push(&inner);
            outer.extend_from_slice(&args[i + k..]);
            total.add_chain(&cat.mu_chains(&outer));
        }
    }
    total
}

/// A tuple on which a relation fails, with the nonzero defect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub inputs: Vec<usize>,
    pub defect: Chain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AinfReport {
    pub max_d: usize,
    pub checked: usize,
    /// Sorted by arity, then by input tuple.
    pub failures: Vec<Failure>,
}

impl AinfReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates the A∞ relation on every composable generator tuple of length
/// `1..=max_d`.
pub fn check_ainf(cat: &FilteredAInfCategory, max_d: usize, parallel: bool) -> AinfReport {
    let tuples: Vec<Vec<usize>> = (1..=max_d).flat_map(|d| cat.composable_tuples(d)).collect();
    let eval = |t: &Vec<usize>| {
        let defect = ainf_defect(cat, t).expect("composable tuples type-check");
        (!defect.is_zero()).then(|| Failure {
            inputs: t.clone(),
            defect,
        })
    };
    let mut failures: Vec<Failure> = if parallel {
        tuples.par_iter().filter_map(eval).collect()
    } else {
        tuples.iter().filter_map(eval).collect()
    };
    failures.sort_by(|a, b| (a.inputs.len(), &a.inputs).cmp(&(b.inputs.len(), &b.inputs)));
    AinfReport {
        max_d,
        checked: tuples.len(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::NovikovElement;

    fn differential_only() -> FilteredAInfCategory {
        let text = "object X
gen X X a level=0
gen X X b level=0
mu 1 X X in=a out=b coeff=T^{1}
";
        FilteredAInfCategory::parse(text).unwrap()
    }

    #[test]
    fn square_zero_differential_has_no_defect() {
        let cat = differential_only();
        let r = check_ainf(&cat, 4, false);
        assert!(r.passed());
        assert_eq!(r.checked, 2 + 4 + 8 + 16);
    }

    #[test]
    fn non_square_zero_differential_is_caught() {
        let mut cat = differential_only();
        let b = cat.generator_id("b").unwrap();
        let a = cat.generator_id("a").unwrap();
        cat.add_mu_term(&[b], a, &NovikovElement::one()).unwrap();
        let r = check_ainf(&cat, 1, true);
        assert_eq!(r.failures.len(), 2);
        assert_eq!(r.failures[0].inputs, vec![a]);
        assert_eq!(r.failures[0].defect.coeff(a).to_string(), "T^{1}");
    }

    #[test]
    fn type_mismatch_is_reported() {
        let text = "object X\nobject Y\ngen X Y f level=0\n";
        let cat = FilteredAInfCategory::parse(text).unwrap();
        let f = cat.generator_id("f").unwrap();
        assert!(matches!(
            ainf_defect(&cat, &[f, f]),
            Err(CategoryError::TypeMismatch(_))
        ));
    }

    #[test]
    fn chain_and_basis_evaluation_agree() {
        let cat = differential_only();
        let mut bad = cat.clone();
        bad.add_mu_term(&[1], 0, &NovikovElement::one()).unwrap();
        let x = Chain::basis(0).plus(&Chain::basis(1));
        let by_chain = ainf_defect_chains(&bad, &[&x]);
        let mut by_basis = ainf_defect(&bad, &[0]).unwrap();
        by_basis.add_chain(&ainf_defect(&bad, &[1]).unwrap());
        assert_eq!(by_chain, by_basis);
    }
}
