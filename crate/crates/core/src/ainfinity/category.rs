//! Finite filtered A∞ categories with sparse μ tables.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::chain::{expand_multilinear, Chain};
use super::text::{self, ParseError};
use crate::exact::{format_rational, Rat};
use crate::novikov::{action, ActionValue, NovikovElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("object `{0}` declared twice")]
    DuplicateObject(String),
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("{0}")]
    TypeMismatch(String),
    #[error("object `{0}` has no image")]
    Unmapped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub source: usize,
    pub target: usize,
    /// Filtration level of the generator.
    pub level: Rat,
    /// Hamiltonian contribution `∫ H∘γ` to its action.
    pub ham: Rat,
}

impl Generator {
    /// Action of `1 · g`.
    pub fn action(&self) -> Rat {
        &self.level + &self.ham
    }
}

/// Objects, hom generators, `μ_d` tables and optional unit elements.
///
/// Homological convention: `μ_d` maps `hom(X_0,X_1) ⊗ … ⊗ hom(X_{d-1},X_d)`
/// to `hom(X_0,X_d)`. Table keys are input generator tuples; missing keys
/// mean zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FilteredAInfCategory {
    objects: Vec<String>,
    generators: Vec<Generator>,
    mu: BTreeMap<Vec<usize>, Chain>,
    units: BTreeMap<usize, Chain>,
    object_index: HashMap<String, usize>,
    generator_index: HashMap<String, usize>,
}

impl FilteredAInfCategory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, name: &str) -> Result<usize, CategoryError> {
        if self.object_index.contains_key(name) {
            return Err(CategoryError::DuplicateObject(name.to_string()));
        }
        self.objects.push(name.to_string());
        self.object_index.insert(name.to_string(), self.objects.len() - 1);
        Ok(self.objects.len() - 1)
    }

    pub fn add_generator(
        &mut self,
        name: &str,
        source: usize,
        target: usize,
        level: Rat,
        ham: Rat,
    ) -> Result<usize, CategoryError> {
        if self.generator_index.contains_key(name) {
            return Err(CategoryError::DuplicateGenerator(name.to_string()));
        }
        for o in [source, target] {
            if o >= self.objects.len() {
                return Err(CategoryError::UnknownObject(format!("#{o}")));
            }
        }
        self.generators.push(Generator {
            name: name.to_string(),
            source,
            target,
            level,
            ham,
        });
        let g = self.generators.len() - 1;
        self.generator_index.insert(name.to_string(), g);
        Ok(g)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, g: usize) -> &Generator {
        &self.generators[g]
    }

    pub fn object_id(&self, name: &str) -> Option<usize> {
        self.object_index.get(name).copied()
    }

    pub fn generator_id(&self, name: &str) -> Option<usize> {
        self.generator_index.get(name).copied()
    }

    pub fn table(&self) -> &BTreeMap<Vec<usize>, Chain> {
        &self.mu
    }

    pub fn units(&self) -> &BTreeMap<usize, Chain> {
        &self.units
    }

    pub fn max_arity(&self) -> usize {
        self.mu.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Source and target objects of a composable tuple.
    pub fn check_composable(&self, inputs: &[usize]) -> Result<(usize, usize), CategoryError> {
        let Some(first) = inputs.first() else {
            return Err(CategoryError::TypeMismatch("μ needs at least one input".into()));
        };
        if let Some(bad) = inputs.iter().find(|&&g| g >= self.generators.len()) {
            return Err(CategoryError::UnknownGenerator(format!("#{bad}")));
        }
        for w in inputs.windows(2) {
            let (a, b) = (&self.generators[w[0]], &self.generators[w[1]]);
            if a.target != b.source {
                return Err(CategoryError::TypeMismatch(format!(
                    "`{}` ends at {} but `{}` starts at {}",
                    a.name, self.objects[a.target], b.name, self.objects[b.source]
                )));
            }
        }
        Ok((
            self.generators[*first].source,
            self.generators[*inputs.last().unwrap()].target,
        ))
    }

    fn check_output(&self, inputs: &[usize], out: &Chain) -> Result<(), CategoryError> {
        let (x0, xd) = self.check_composable(inputs)?;
        for (g, _) in out.terms() {
            let gen = self
                .generators
                .get(g)
                .ok_or_else(|| CategoryError::UnknownGenerator(format!("#{g}")))?;
            if gen.source != x0 || gen.target != xd {
                return Err(CategoryError::TypeMismatch(format!(
                    "output `{}` is not in hom({}, {})",
                    gen.name, self.objects[x0], self.objects[xd]
                )));
            }
        }
        Ok(())
    }

    /// Adds `coeff · out` to `μ(inputs)`.
    pub fn add_mu_term(
        &mut self,
        inputs: &[usize],
        out: usize,
        coeff: &NovikovElement,
    ) -> Result<(), CategoryError> {
        let term = Chain::term(out, coeff.clone());
        self.check_output(inputs, &term)?;
        let entry = self.mu.entry(inputs.to_vec()).or_default();
        entry.add_chain(&term);
        if entry.is_zero() {
            self.mu.remove(inputs);
        }
        Ok(())
    }

    /// Replaces `μ(inputs)`.
    pub fn set_mu(&mut self, inputs: &[usize], value: Chain) -> Result<(), CategoryError> {
        self.check_output(inputs, &value)?;
        if value.is_zero() {
            self.mu.remove(inputs);
        } else {
            self.mu.insert(inputs.to_vec(), value);
        }
        Ok(())
    }

    pub fn set_unit(&mut self, object: usize, unit: Chain) -> Result<(), CategoryError> {
        for (g, _) in unit.terms() {
            let gen = &self.generators[g];
            if gen.source != object || gen.target != object {
                return Err(CategoryError::TypeMismatch(format!(
                    "unit term `{}` is not in hom({0}, {0})",
                    gen.name
                )));
            }
        }
        self.units.insert(object, unit);
        Ok(())
    }

    pub fn mu(&self, inputs: &[usize]) -> Chain {
        self.mu.get(inputs).cloned().unwrap_or_default()
    }

    /// `μ_d` extended multilinearly to chain arguments.
    pub fn mu_chains(&self, args: &[&Chain]) -> Chain {
        expand_multilinear(args, &mut |gs| self.mu(gs))
    }

    /// Action of a chain: the maximum over its terms of
    /// `-val(P_g) + level(g) + ham(g)`.
    pub fn chain_action(&self, c: &Chain) -> ActionValue {
        c.terms()
            .map(|(g, p)| action(p, &self.generators[g].action()))
            .max()
            .unwrap_or(ActionValue::NegInfinity)
    }

    /// All composable generator tuples of length `d`.
    pub fn composable_tuples(&self, d: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for g in 0..self.generators.len() {
            self.extend_tuples(vec![g], d, &mut out);
        }
        out
    }

    /// Composable tuples of length `d` starting with `first`.
    pub fn composable_tuples_from(&self, first: usize, d: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.extend_tuples(vec![first], d, &mut out);
        out
    }

    fn extend_tuples(&self, prefix: Vec<usize>, d: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == d {
            out.push(prefix);
            return;
        }
        let end = self.generators[*prefix.last().unwrap()].target;
        for (g, gen) in self.generators.iter().enumerate() {
            if gen.source == end {
                let mut next = prefix.clone();
                next.push(g);
                self.extend_tuples(next, d, out);
            }
        }
    }

    fn chain_text(&self, c: &Chain) -> Vec<(String, String)> {
        c.terms()
            .map(|(g, p)| (self.generators[g].name.clone(), p.to_string()))
            .collect()
    }

    /// Canonical text form; `parse` reads it back unchanged.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for o in &self.objects {
            out.push_str(&format!("object {o}\n"));
        }
        for g in &self.generators {
            out.push_str(&format!(
                "gen {} {} {} level={} ham={}\n",
                self.objects[g.source],
                self.objects[g.target],
                g.name,
                format_rational(&g.level),
                format_rational(&g.ham)
            ));
        }
        let mut keys: Vec<&Vec<usize>> = self.mu.keys().collect();
        keys.sort_by_key(|k| (k.len(), (*k).clone()));
        for k in keys {
            let mut objs = vec![self.objects[self.generators[k[0]].source].clone()];
            objs.extend(k.iter().map(|g| self.objects[self.generators[*g].target].clone()));
            let ins: Vec<&str> = k.iter().map(|g| self.generators[*g].name.as_str()).collect();
            for (name, coeff) in self.chain_text(&self.mu[k]) {
                out.push_str(&format!(
                    "mu {} {} in={} out={} coeff={}\n",
                    k.len(),
                    objs.join(" "),
                    ins.join(","),
                    name,
                    coeff
                ));
            }
        }
        for (o, u) in &self.units {
            for (name, coeff) in self.chain_text(u) {
                out.push_str(&format!("unit {} gen={} coeff={}\n", self.objects[*o], name, coeff));
            }
        }
        out
    }

    /// Reads the line format
    ///
    /// ```text
    /// object X
    /// gen X Y name level=p/q ham=p/q
    /// mu d X0 .. Xd in=g1,..,gd out=g coeff=T^{p/q}+...
    /// unit X gen=e coeff=T^{0}
    /// ```
    ///
    /// `#` starts a comment. A repeated `(in, out)` pair is an error.
    pub fn parse(input: &str) -> Result<Self, CategoryError> {
        let mut cat = Self::new();
        let mut seen_terms: HashMap<(Vec<usize>, usize), usize> = HashMap::new();
        for line in text::lines(input) {
            let head = line.tokens[0];
            match head.text {
                "object" => {
                    let name = line.token(1, "object name")?;
                    if line.tokens.len() > 2 {
                        return Err(line.error(line.tokens[2].column, "unexpected token").into());
                    }
                    cat.add_object(name.text).map_err(|e| line.error(name.column, e.to_string()))?;
                }
                "gen" => {
                    let src = line.token(1, "source object")?;
                    let tgt = line.token(2, "target object")?;
                    let name = line.token(3, "generator name")?;
                    line.only_fields(4, &["level", "ham"])?;
                    let level = text::rational(&line, line.field(4, "level")?)?;
                    let ham = match line.optional_field(4, "ham") {
                        Some(t) => text::rational(&line, t)?,
                        None => Rat::default(),
                    };
                    let s = cat.object_at(&line, src)?;
                    let t = cat.object_at(&line, tgt)?;
                    if name.text.contains(',') || name.text.contains('=') {
                        return Err(line.error(name.column, "generator names may not contain `,` or `=`").into());
                    }
                    cat.add_generator(name.text, s, t, level, ham).map_err(|e| {
                        CategoryError::Parse(line.error(name.column, e.to_string()))
                    })?;
                }
                "mu" => {
                    let d_tok = line.token(1, "arity")?;
                    let d = text::integer(&line, d_tok)?;
                    if d == 0 {
                        return Err(line.error(d_tok.column, "arity must be at least 1").into());
                    }
                    let mut objs = Vec::with_capacity(d + 1);
                    for k in 0..=d {
                        let t = line.token(2 + k, "object")?;
                        objs.push(cat.object_at(&line, t)?);
                    }
                    line.only_fields(d + 3, &["in", "out", "coeff"])?;
                    let in_tok = line.field(d + 3, "in")?;
                    let inputs = cat.generator_list(&line, in_tok)?;
                    if inputs.len() != d {
                        return Err(line
                            .error(in_tok.column, format!("expected {d} inputs, got {}", inputs.len()))
                            .into());
                    }
                    for (k, &g) in inputs.iter().enumerate() {
                        let gen = &cat.generators[g];
                        if gen.source != objs[k] || gen.target != objs[k + 1] {
                            return Err(line
                                .error(in_tok.column, format!("input `{}` is not in hom({}, {})",
                                    gen.name, cat.objects[objs[k]], cat.objects[objs[k + 1]]))
                                .into());
                        }
                    }
                    let out_tok = line.field(d + 3, "out")?;
                    let out = cat.generator_at(&line, out_tok)?;
                    let coeff = text::novikov(&line, line.field(d + 3, "coeff")?)?;
                    if let Some(prev) = seen_terms.insert((inputs.clone(), out), line.number) {
                        return Err(line
                            .error(out_tok.column, format!("term already given on line {prev}"))
                            .into());
                    }
                    cat.add_mu_term(&inputs, out, &coeff)
                        .map_err(|e| CategoryError::Parse(line.error(out_tok.column, e.to_string())))?;
                }
                "unit" => {
                    let obj_tok = line.token(1, "object")?;
                    let o = cat.object_at(&line, obj_tok)?;
                    line.only_fields(2, &["gen", "coeff"])?;
                    let g_tok = line.field(2, "gen")?;
                    let g = cat.generator_at(&line, g_tok)?;
                    let coeff = text::novikov(&line, line.field(2, "coeff")?)?;
                    let mut u = cat.units.get(&o).cloned().unwrap_or_default();
                    u.add_term(g, &coeff);
                    cat.set_unit(o, u)
                        .map_err(|e| CategoryError::Parse(line.error(g_tok.column, e.to_string())))?;
                }
                other => {
                    return Err(line
                        .error(head.column, format!("unknown directive `{other}`"))
                        .into())
                }
            }
        }
        Ok(cat)
    }

    fn object_at(&self, line: &text::Line, t: text::Token) -> Result<usize, CategoryError> {
        self.object_id(t.text)
            .ok_or_else(|| line.error(t.column, format!("unknown object `{}`", t.text)).into())
    }

    fn generator_at(&self, line: &text::Line, t: text::Token) -> Result<usize, CategoryError> {
        self.generator_id(t.text)
            .ok_or_else(|| line.error(t.column, format!("unknown generator `{}`", t.text)).into())
    }

    fn generator_list(&self, line: &text::Line, t: text::Token) -> Result<Vec<usize>, CategoryError> {
        text::names(t)
            .into_iter()
            .map(|n| {
                self.generator_id(n)
                    .ok_or_else(|| line.error(t.column, format!("unknown generator `{n}`")).into())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "object X
object Y
gen X X e level=0 ham=0
gen X Y f level=1/2 ham=0
mu 2 X X Y in=e,f out=f coeff=T^{0}
mu 1 X Y in=f out=f coeff=T^{1}+T^{2}
unit X gen=e coeff=T^{0}
";

    #[test]
    fn round_trip_is_byte_identical() {
        let cat = FilteredAInfCategory::parse(SMALL).unwrap();
        assert_eq!(cat.generators().len(), 2);
        let text = cat.serialize();
        assert_eq!(FilteredAInfCategory::parse(&text).unwrap().serialize(), text);
        assert!(text.starts_with("object X\nobject Y\ngen X X e level=0 ham=0\n"));
    }

    #[test]
    fn empty_file_is_empty_category() {
        let cat = FilteredAInfCategory::parse("# nothing\n\n").unwrap();
        assert!(cat.objects().is_empty());
        assert_eq!(cat.max_arity(), 0);
    }

    #[test]
    fn duplicate_generator_is_an_error() {
        let text = "object X\ngen X X a level=0\ngen X X a level=1\n";
        match FilteredAInfCategory::parse(text) {
            Err(CategoryError::Parse(e)) => {
                assert_eq!((e.line, e.column), (3, 9));
                assert!(e.message.contains("declared twice"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_term_and_type_errors() {
        let dup = format!("{SMALL}mu 2 X X Y in=e,f out=f coeff=T^{{1}}\n");
        assert!(FilteredAInfCategory::parse(&dup).is_err());
        let bad = "object X\nobject Y\ngen X Y f level=0\nmu 2 X Y Y in=f,f out=f coeff=1\n";
        assert!(FilteredAInfCategory::parse(bad).is_err());
        let wrong_out = "object X\nobject Y\ngen X X e level=0\ngen X Y f level=0\nmu 1 X X in=e out=f coeff=1\n";
        assert!(FilteredAInfCategory::parse(wrong_out).is_err());
    }

    #[test]
    fn composable_tuples_follow_objects() {
        let cat = FilteredAInfCategory::parse(SMALL).unwrap();
        let e = cat.generator_id("e").unwrap();
        let f = cat.generator_id("f").unwrap();
        assert_eq!(cat.composable_tuples(2), vec![vec![e, e], vec![e, f]]);
    }

    #[test]
    fn chain_action_uses_level_and_valuation() {
        let cat = FilteredAInfCategory::parse(SMALL).unwrap();
        let f = cat.generator_id("f").unwrap();
        let c = cat.mu(&[f]);
        assert_eq!(
            cat.chain_action(&c),
            ActionValue::Finite(crate::exact::rat(-1, 2))
        );
    }
}
