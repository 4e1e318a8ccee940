//! A∞ functors between finite categories: shift measurement and the
//! functor equations.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use super::category::{CategoryError, FilteredAInfCategory};
use super::chain::Chain;
use super::defect::Failure;
use super::discrepancy::{clamp, entry_shift};
use super::text;
use crate::exact::Rat;
use crate::novikov::{ActionValue, NovikovElement};

/// Object map plus sparse tables `F_d`, keyed by generator tuples of the
/// source and valued in chains of the target.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AInfFunctor {
    pub object_map: Vec<usize>,
    tables: BTreeMap<Vec<usize>, Chain>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorShift {
    /// Per-arity overshoot, `-inf` for vanishing `F_d`.
    pub raw: BTreeMap<usize, ActionValue>,
    /// Smallest `ρ ≥ 0` with `raw(d) ≤ d ρ` for every `d`.
    pub rho: Rat,
}

impl AInfFunctor {
    pub fn new(object_map: Vec<usize>) -> Self {
        AInfFunctor {
            object_map,
            tables: BTreeMap::new(),
        }
    }

    /// `F_1 = id`, higher terms zero.
    pub fn identity(cat: &FilteredAInfCategory) -> Self {
        let mut f = Self::new((0..cat.objects().len()).collect());
        for g in 0..cat.generators().len() {
            f.tables.insert(vec![g], Chain::basis(g));
        }
        f
    }

    pub fn tables(&self) -> &BTreeMap<Vec<usize>, Chain> {
        &self.tables
    }

    pub fn max_arity(&self) -> usize {
        self.tables.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn value(&self, inputs: &[usize]) -> Chain {
        self.tables.get(inputs).cloned().unwrap_or_default()
    }

    pub fn value_chains(&self, args: &[&Chain]) -> Chain {
        super::chain::expand_multilinear(args, &mut |gs| self.value(gs))
    }

    /// Adds `coeff · out` to `F(inputs)`, checking that it lands in
    /// `hom(F X_0, F X_d)`.
    pub fn add_term(
        &mut self,
        a: &FilteredAInfCategory,
        b: &FilteredAInfCategory,
        inputs: &[usize],
        out: usize,
        coeff: &NovikovElement,
    ) -> Result<(), CategoryError> {
        let (x0, xd) = a.check_composable(inputs)?;
        let gen = b.generators().get(out).ok_or_else(|| CategoryError::UnknownGenerator(format!("#{out}")))?;
        let (fx0, fxd) = (self.object_map[x0], self.object_map[xd]);
        if gen.source != fx0 || gen.target != fxd {
            return Err(CategoryError::TypeMismatch(format!(
                "`{}` is not in hom({}, {})",
                gen.name,
                b.objects()[fx0],
                b.objects()[fxd]
            )));
        }
        let entry = self.tables.entry(inputs.to_vec()).or_default();
        entry.add_term(out, coeff);
        if entry.is_zero() {
            self.tables.remove(inputs);
        }
        Ok(())
    }

    /// Reads `map X Y` lines (one per source object) and
    /// `F d X0 .. Xd in=g1,..,gd out=g coeff=...` lines.
    pub fn parse(
        input: &str,
        a: &FilteredAInfCategory,
        b: &FilteredAInfCategory,
    ) -> Result<Self, CategoryError> {
        let mut map: Vec<Option<usize>> = vec![None; a.objects().len()];
        let mut f = Self::default();
        let mut seen: HashMap<(Vec<usize>, usize), usize> = HashMap::new();
        let mut pending = Vec::new();
        for line in text::lines(input) {
            let head = line.tokens[0];
            match head.text {
                "map" => {
                    let x = line.token(1, "source object")?;
                    let y = line.token(2, "target object")?;
                    let xi = a
                        .object_id(x.text)
                        .ok_or_else(|| line.error(x.column, format!("unknown object `{}`", x.text)))?;
                    let yi = b
                        .object_id(y.text)
                        .ok_or_else(|| line.error(y.column, format!("unknown object `{}`", y.text)))?;
                    if map[xi].replace(yi).is_some() {
                        return Err(line.error(x.column, format!("`{}` mapped twice", x.text)).into());
                    }
                }
                "F" => pending.push(line),
                other => {
                    return Err(line.error(head.column, format!("unknown directive `{other}`")).into())
                }
            }
        }
        if let Some(x) = map.iter().position(Option::is_none) {
            return Err(CategoryError::Unmapped(a.objects()[x].clone()));
        }
        f.object_map = map.into_iter().map(Option::unwrap).collect();
        for line in pending {
            let d_tok = line.token(1, "arity")?;
            let d = text::integer(&line, d_tok)?;
            if d == 0 {
                return Err(line.error(d_tok.column, "arity must be at least 1").into());
            }
            for k in 0..=d {
                let t = line.token(2 + k, "object")?;
                if a.object_id(t.text).is_none() {
                    return Err(line.error(t.column, format!("unknown object `{}`", t.text)).into());
                }
            }
            line.only_fields(d + 3, &["in", "out", "coeff"])?;
            let in_tok = line.field(d + 3, "in")?;
            let inputs: Vec<usize> = text::names(in_tok)
                .into_iter()
                .map(|n| a.generator_id(n).ok_or_else(|| line.error(in_tok.column, format!("unknown generator `{n}`"))))
                .collect::<Result<_, _>>()?;
            if inputs.len() != d {
                return Err(line.error(in_tok.column, format!("expected {d} inputs")).into());
            }
            for (k, g) in inputs.iter().enumerate() {
                let gen = a.generator(*g);
                let (s, t) = (line.tokens[2 + k].text, line.tokens[3 + k].text);
                if a.objects()[gen.source] != s || a.objects()[gen.target] != t {
                    return Err(line
                        .error(in_tok.column, format!("input `{}` is not in hom({s}, {t})", gen.name))
                        .into());
                }
            }
            let out_tok = line.field(d + 3, "out")?;
            let out = b
                .generator_id(out_tok.text)
                .ok_or_else(|| line.error(out_tok.column, format!("unknown generator `{}`", out_tok.text)))?;
            let coeff = text::novikov(&line, line.field(d + 3, "coeff")?)?;
            if let Some(prev) = seen.insert((inputs.clone(), out), line.number) {
                return Err(line.error(out_tok.column, format!("term already given on line {prev}")).into());
            }
            f.add_term(a, b, &inputs, out, &coeff)
                .map_err(|e| CategoryError::Parse(line.error(out_tok.column, e.to_string())))?;
        }
        Ok(f)
    }

    pub fn serialize(&self, a: &FilteredAInfCategory, b: &FilteredAInfCategory) -> String {
        let mut out = String::new();
        for (x, y) in self.object_map.iter().enumerate() {
            out.push_str(&format!("map {} {}\n", a.objects()[x], b.objects()[*y]));
        }
        let mut keys: Vec<&Vec<usize>> = self.tables.keys().collect();
        keys.sort_by_key(|k| (k.len(), (*k).clone()));
        for k in keys {
            let mut objs = vec![a.objects()[a.generator(k[0]).source].as_str()];
            objs.extend(k.iter().map(|g| a.objects()[a.generator(*g).target].as_str()));
            let ins: Vec<&str> = k.iter().map(|g| a.generator(*g).name.as_str()).collect();
            for (g, c) in self.tables[k].terms() {
                out.push_str(&format!(
                    "F {} {} in={} out={} coeff={}\n",
                    k.len(),
                    objs.join(" "),
                    ins.join(","),
                    b.generator(g).name,
                    c
                ));
            }
        }
        out
    }
}

/// Per-arity overshoot of the `F_d` tables and the smallest uniform
/// shift `ρ` with `ε_d = d ρ`.
pub fn functor_shift(
    a: &FilteredAInfCategory,
    b: &FilteredAInfCategory,
    f: &AInfFunctor,
) -> FunctorShift {
    let mut raw: BTreeMap<usize, ActionValue> = (1..=f.max_arity())
        .map(|d| (d, ActionValue::NegInfinity))
        .collect();
    for (inputs, out) in &f.tables {
        let shift = entry_shift(b.chain_action(out), inputs.iter().map(|g| a.generator(*g).action()));
        let slot = raw.get_mut(&inputs.len()).expect("arity in range");
        if shift > *slot {
            *slot = shift;
        }
    }
    let rho = raw
        .iter()
        .map(|(d, r)| clamp(r) / crate::exact::int(*d as i64))
        .fold(Rat::zero(), |m, x| if x > m { x } else { m });
    FunctorShift { raw, rho }
}

/// Over Z2, the sum of
/// `μ^B_r(F^{s_1}(…), …, F^{s_r}(…))` over compositions `s_1 + … + s_r = d`
/// and of `F^{i+1+j}(…, μ^A_k(…), …)`; zero iff the functor equation holds
/// on `inputs`.
pub fn functor_defect(
    a: &FilteredAInfCategory,
    b: &FilteredAInfCategory,
    f: &AInfFunctor,
    inputs: &[usize],
) -> Result<Chain, CategoryError> {
    a.check_composable(inputs)?;
    let d = inputs.len();
    let mut total = Chain::zero();
    let mut blocks: Vec<Chain> = Vec::new();
    compositions(f, b, inputs, 0, &mut blocks, &mut total);
    for i in 0..d {
        for k in 1..=d - i {
            let inner = a.mu(&inputs[i..i + k]);
            for (g, c) in inner.terms() {
                let mut outer = inputs[..i].to_vec();
                outer.push(g);
                outer.extend_from_slice(&inputs[i + k..]);
                total.add_chain(&f.value(&outer).scaled(c));
            }
        }
    }
    Ok(total)
}

fn compositions(
    f: &AInfFunctor,
    b: &FilteredAInfCategory,
    inputs: &[usize],
    start: usize,
    blocks: &mut Vec<Chain>,
    total: &mut Chain,
) {
    if start == inputs.len() {
        let args: Vec<&Chain> = blocks.iter().collect();
        total.add_chain(&b.mu_chains(&args));
        return;
    }
    for end in start + 1..=inputs.len() {
        let v = f.value(&inputs[start..end]);
        if v.is_zero() {
            continue;
        }
        blocks.push(v);
        compositions(f, b, inputs, end, blocks, total);
        blocks.pop();
    }
}

/// Functor equations on every composable tuple of length `1..=max_d`.
pub fn check_functor(
    a: &FilteredAInfCategory,
    b: &FilteredAInfCategory,
    f: &AInfFunctor,
    max_d: usize,
    parallel: bool,
) -> Vec<Failure> {
    let tuples: Vec<Vec<usize>> = (1..=max_d).flat_map(|d| a.composable_tuples(d)).collect();
    let eval = |t: &Vec<usize>| {
        let defect = functor_defect(a, b, f, t).expect("composable tuples type-check");
        (!defect.is_zero()).then(|| Failure {
            inputs: t.clone(),
            defect,
        })
    };
    let mut out: Vec<Failure> = if parallel {
        tuples.par_iter().filter_map(eval).collect()
    } else {
        tuples.iter().filter_map(eval).collect()
    };
    out.sort_by(|x, y| (x.inputs.len(), &x.inputs).cmp(&(y.inputs.len(), &y.inputs)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    const CAT: &str = "object X
gen X X e level=0
gen X X x level=0
mu 2 X X X in=e,e out=e coeff=T^{0}
mu 2 X X X in=e,x out=x coeff=T^{0}
mu 2 X X X in=x,e out=x coeff=T^{0}
";

    fn cat() -> FilteredAInfCategory {
        FilteredAInfCategory::parse(CAT).unwrap()
    }

    #[test]
    fn identity_functor_has_zero_shift_and_defect() {
        let c = cat();
        let f = AInfFunctor::identity(&c);
        let s = functor_shift(&c, &c, &f);
        assert_eq!(s.rho, rat(0, 1));
        assert_eq!(s.raw[&1], ActionValue::Finite(rat(0, 1)));
        assert!(check_functor(&c, &c, &f, 3, false).is_empty());
    }

    #[test]
    fn rescaled_first_order_term() {
        let c = cat();
        let text = "map X X
F 1 X X in=e out=e coeff=T^{2/5}
F 1 X X in=x out=x coeff=T^{2/5}
";
        let f = AInfFunctor::parse(text, &c, &c).unwrap();
        let s = functor_shift(&c, &c, &f);
        assert_eq!(s.raw[&1], ActionValue::Finite(rat(-2, 5)));
        assert_eq!(s.rho, rat(0, 1));
        assert_eq!(f.serialize(&c, &c), text);
    }

    #[test]
    fn second_order_overshoot_halves() {
        let c = cat();
        let mut f = AInfFunctor::identity(&c);
        f.add_term(&c, &c, &[1, 1], 1, &NovikovElement::monomial(rat(-3, 5))).unwrap();
        let s = functor_shift(&c, &c, &f);
        assert_eq!(s.raw[&2], ActionValue::Finite(rat(3, 5)));
        assert_eq!(s.rho, rat(3, 10));
    }

    #[test]
    fn broken_functor_equation_is_located() {
        let c = cat();
        let mut f = AInfFunctor::identity(&c);
        f.add_term(&c, &c, &[0], 1, &NovikovElement::one()).unwrap();
        let fails = check_functor(&c, &c, &f, 2, true);
        assert!(!fails.is_empty());
        assert_eq!(fails[0].inputs.len(), 2);
    }

    #[test]
    fn unmapped_object_is_rejected() {
        let c = cat();
        assert!(AInfFunctor::parse("", &c, &c).is_err());
        assert!(AInfFunctor::parse("map X X\nmap X X\n", &c, &c).is_err());
    }
}
