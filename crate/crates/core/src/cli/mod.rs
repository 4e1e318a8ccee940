//! Batch front-end: one verb per invocation, deterministic reports.
//!
//! Exit codes: 0 for pass or info, 1 for a verification failure, 2 for
//! usage and parse errors.

mod report;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use report::{format_float, Format, Report, Status};

use crate::ainfinity::{
    check_ainf, check_functor, check_linf, check_ocha, check_strict_unit, functor_shift,
    measure_discrepancies, AInfFunctor, Chain, FilteredAInfCategory, LInfinityAlgebra, OCHAStructure,
    UnitViolation,
};
use crate::budget::{
    continuation_shift, continuation_shift_half, eps_delta_budget, validate_floer_window,
    vertex_curvature_budget, virtual_dimension, BudgetError, BudgetParams, Convention, DimensionCase,
    HamiltonianWindow, IndexInput,
};
use crate::exact::{format_rational, parse_rational, Rat};
use crate::novikov::NovikovElement;
use crate::strata::{
    cell_f_vector, coloring_cone_dim, enumerate_cluster_strata, enumerate_cluster_strata_parallel,
    enumerate_stacked_strata, enumerate_stacked_strata_parallel, euler_characteristic, f_vector,
    intrinsic_width, is_generalized_corner, stacked_gluing_lengths, validate_coloring, ColoredTree,
    GluingExpr, Stratum,
};
use crate::trees::{
    classify_tuple, enumerate_stable_trees, enumerate_stable_trees_parallel, is_binary, reduce_tuple,
    LagTuple,
};

#[derive(Debug, Parser)]
#[command(name = "workbench", version, about = "Checks tree, stratum, A∞ and budget computations")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    /// Output layout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Enumerate and check in parallel; output is identical either way.
    #[arg(long, global = true)]
    pub parallel: bool,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Reduced and fundamental tuple of a label tuple such as `(L0,L1,L1)`.
    Reduce { tuple: String },
    /// Classify a label tuple.
    Classify { tuple: String },
    /// List stable trees with `d` leaves.
    Trees {
        #[arg(long)]
        d: usize,
    },
    /// Strata of the cluster moduli space.
    Strata(LabelArgs),
    /// Strata of the stacked cluster moduli space.
    Stacked(LabelArgs),
    /// Validate a colored tree file.
    Coloring { path: PathBuf },
    /// Intrinsic widths of a gluing expression, and stacked gluing lengths.
    Width(WidthArgs),
    /// Check the A∞ relations of a category file.
    CheckAinf(CheckAinfArgs),
    /// Check the L∞ relations of a bracket file.
    CheckLinf {
        path: PathBuf,
        /// Largest number of inputs.
        #[arg(long, default_value_t = 4)]
        d: usize,
    },
    /// Check the open-closed relations of a structure file.
    CheckOcha {
        path: PathBuf,
        /// Largest number of closed inputs.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Largest number of open inputs.
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
    /// Discrepancies and unit levels of a category file.
    Measure { path: PathBuf },
    /// Check the unit declared for an object.
    Unit {
        path: PathBuf,
        #[arg(long)]
        object: String,
    },
    /// Shift and functor equations of a functor between two categories.
    Functor {
        source: PathBuf,
        target: PathBuf,
        functor: PathBuf,
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
    /// Curvature budgets and filtration shifts.
    Budget(BudgetArgs),
    /// Expected dimension of a moduli space.
    Dim(DimArgs),
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    /// Label tuple; defaults to distinct labels.
    pub tuple: Option<String>,
    /// Number of inputs when no tuple is given.
    #[arg(long)]
    pub d: Option<usize>,
    /// Print only the summary.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Debug, Args)]
pub struct WidthArgs {
    pub expr: String,
    /// Gluing parameter in (-1, 0) for the stacked lengths.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Widths of the glued-in surfaces, one per input.
    #[arg(long, value_delimiter = ',')]
    pub child_widths: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CheckAinfArgs {
    pub path: PathBuf,
    /// Largest arity checked.
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    /// Also flip this many random μ₂ terms (seeded by WORKBENCH_SEED) and
    /// report which flips the check detects.
    #[arg(long, default_value_t = 0)]
    pub perturb: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BudgetCase {
    Open,
    Closed,
    EpsDelta,
    Continuation,
    Window,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Main,
    Draft,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long, value_enum)]
    pub case: Option<BudgetCase>,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value = "1")]
    pub eps: String,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub delta1: Option<String>,
    #[arg(long)]
    pub eps2: Option<String>,
    #[arg(long)]
    pub delta2: Option<String>,
    /// Window of the Hamiltonian term, for `--case window`.
    #[arg(long)]
    pub lo: Option<String>,
    #[arg(long)]
    pub hi: Option<String>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Main)]
    pub convention: ConventionArg,
}

#[derive(Debug, Args)]
pub struct DimArgs {
    #[arg(long)]
    pub case: String,
    #[arg(long)]
    pub n: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
    #[arg(long = "d-r")]
    pub d_r: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub maslov: Option<i64>,
    #[arg(long, value_delimiter = ',')]
    pub morse: Vec<i64>,
    #[arg(long)]
    pub out: Option<i64>,
    #[arg(long)]
    pub a: Option<i64>,
    #[arg(long)]
    pub b: Option<i64>,
    #[arg(long)]
    pub l: Option<i64>,
    #[arg(long)]
    pub k: Option<i64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn in_file<E: ToString>(path: &Path) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::Input {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn load_category(path: &Path) -> Result<FilteredAInfCategory, CliError> {
    FilteredAInfCategory::parse(&read(path)?).map_err(in_file(path))
}

fn rational(flag: &str, text: &str) -> Result<Rat, CliError> {
    parse_rational(text).map_err(|e| usage(format!("--{flag}: {e}")))
}

fn tuple(text: &str) -> Result<LagTuple, CliError> {
    text.parse().map_err(usage)
}

/// Seed for randomized verbs, from `WORKBENCH_SEED` (default 0).
pub fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var("WORKBENCH_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| usage(format!("WORKBENCH_SEED must be an unsigned integer, got `{s}`"))),
        Err(_) => Ok(0),
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.verb {
        Verb::Reduce { tuple: t } => reduce(&tuple(t)?),
        Verb::Classify { tuple: t } => {
            let t = tuple(t)?;
            let mut r = Report::new("classify");
            let class = classify_tuple(&t);
            r.line(format!("class={class}"));
            r.kv("class", class);
            Ok(r)
        }
        Verb::Trees { d } => trees(*d, cli.parallel),
        Verb::Strata(a) => strata(a, false, cli.parallel),
        Verb::Stacked(a) => strata(a, true, cli.parallel),
        Verb::Coloring { path } => coloring(path),
        Verb::Width(a) => width(a),
        Verb::CheckAinf(a) => ainf(a, cli.parallel),
        Verb::CheckLinf { path, d } => linf(path, *d),
        Verb::CheckOcha { path, k, d } => ocha(path, *k, *d, cli.parallel),
        Verb::Measure { path } => measure(path),
        Verb::Unit { path, object } => unit(path, object),
        Verb::Functor {
            source,
            target,
            functor: f,
            d,
        } => functor(source, target, f, *d, cli.parallel),
        Verb::Budget(a) => budget(a),
        Verb::Dim(a) => dim(a),
    }
}

fn reduce(t: &LagTuple) -> Result<Report, CliError> {
    let red = reduce_tuple(t);
    let mut r = Report::new("reduce");
    r.line(format!("red={red} F={}", red.fundamental_string()));
    let bars: Vec<String> = red.bar_multiplicities().iter().map(|m| m.to_string()).collect();
    r.line(format!("d_R={} d_F={} multiplicities=({})", red.d_r(), red.d_f(), bars.join(",")));
    r.kv("red", &red);
    r.kv("fundamental", red.fundamental_string());
    r.kv("d_R", red.d_r());
    r.kv("d_F", red.d_f());
    r.kv("multiplicities", bars.join(","));
    Ok(r)
}

fn trees(d: usize, parallel: bool) -> Result<Report, CliError> {
    if d < 2 {
        return Err(usage("--d must be at least 2"));
    }
    let all = if parallel {
        enumerate_stable_trees_parallel(d)
    } else {
        enumerate_stable_trees(d)
    };
    let binary = all.iter().filter(|t| is_binary(t)).count();
    let mut r = Report::new("trees");
    for t in &all {
        r.line(t.serialize());
    }
    r.line(format!("count={} binary={binary}", all.len()));
    r.kv("count", all.len());
    r.kv("binary", binary);
    Ok(r)
}

fn labels_for(a: &LabelArgs) -> Result<LagTuple, CliError> {
    match (&a.tuple, a.d) {
        (Some(t), None) => tuple(t),
        (None, Some(d)) => Ok(LagTuple::distinct(d)),
        _ => Err(usage("give either a label tuple or --d")),
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn strata(a: &LabelArgs, stacked: bool, parallel: bool) -> Result<Report, CliError> {
    let labels = labels_for(a)?;
    if labels.d() < 1 || (!stacked && labels.d() < 2) {
        return Err(usage("too few inputs"));
    }
    let list: Vec<Stratum> = match (stacked, parallel) {
        (false, false) => enumerate_cluster_strata(&labels),
        (false, true) => enumerate_cluster_strata_parallel(&labels),
        (true, false) => enumerate_stacked_strata(&labels),
        (true, true) => enumerate_stacked_strata_parallel(&labels),
    };
    let mut r = Report::new(if stacked { "stacked" } else { "strata" });
    if !a.summary {
        for s in &list {
            r.line(s.report_line());
        }
    }
    let f = f_vector(&list);
    r.line(format!("labels={labels} count={}", list.len()));
    r.line(format!("f=[{}] chi={}", join(&f), euler_characteristic(&f)));
    r.kv("labels", &labels);
    r.kv("count", list.len());
    r.kv("f", join(&f));
    r.kv("chi", euler_characteristic(&f));
    if !stacked {
        let cells = cell_f_vector(&list);
        r.line(format!("cells=[{}] cell_chi={}", join(&cells), euler_characteristic(&cells)));
        r.kv("cells", join(&cells));
        r.kv("cell_chi", euler_characteristic(&cells));
    } else {
        let corners = list.iter().filter(|s| s.generalized_corner).count();
        r.kv("generalized_corners", corners);
    }
    Ok(r)
}

fn metric_text(m: &BTreeMap<crate::trees::EdgeId, Rat>) -> String {
    let parts: Vec<String> = m.iter().map(|(e, l)| format!("{e}={}", format_rational(l))).collect();
    format!("{{{}}}", parts.join(","))
}

fn coloring(path: &Path) -> Result<Report, CliError> {
    let ct = ColoredTree::parse(&read(path)?).map_err(in_file(path))?;
    let mut r = Report::new("coloring");
    r.line(format!("tree={}", ct.tree.tree().serialize_marked(&|v| ct.colored.contains(&v))));
    match validate_coloring(&ct) {
        Ok(cert) => {
            let dim = coloring_cone_dim(&ct).expect("validated");
            let corner = is_generalized_corner(&ct);
            r.line(format!("witness={}", metric_text(&cert.witness)));
            for (k, v) in cert.family.iter().enumerate() {
                r.line(format!("family.{k}={}", metric_text(v)));
            }
            r.line(format!(
                "rank={} corank={} cone_dim={dim} generalized_corner={corner}",
                cert.rank, cert.corank
            ));
            r.kv("rank", cert.rank);
            r.kv("corank", cert.corank);
            r.kv("cone_dim", dim);
            r.kv("generalized_corner", corner);
            r.kv("witness", metric_text(&cert.witness));
            if dim != cert.corank && ct.fixed_lengths.is_empty() {
                r.finding(format!("cone dimension {dim} differs from corank {}", cert.corank));
            }
        }
        Err(v) => r.finding(v.to_string()),
    }
    r.settle();
    Ok(r)
}

fn width(a: &WidthArgs) -> Result<Report, CliError> {
    let expr = GluingExpr::parse(&a.expr).map_err(usage)?;
    let w = intrinsic_width(&expr).map_err(usage)?;
    let mut r = Report::new("width");
    r.line(format!("inputs={} widths={w}", expr.inputs()));
    r.kv("inputs", expr.inputs());
    r.kv("widths", &w);
    if let Some(rho) = a.rho {
        let children = if a.child_widths.is_empty() {
            vec![Rat::default(); w.widths.len()]
        } else {
            a.child_widths
                .iter()
                .map(|s| rational("child-widths", s))
                .collect::<Result<_, _>>()?
        };
        match stacked_gluing_lengths(rho, &children, &w) {
            Ok(l) => {
                let shown: Vec<String> = l.iter().map(|x| format_float(*x)).collect();
                r.line(format!("lengths=({})", shown.join(",")));
                r.kv("lengths", shown.join(","));
            }
            Err(e) => r.finding(e.to_string()),
        }
        r.settle();
    }
    Ok(r)
}

fn chain_text(c: &Chain, names: &dyn Fn(usize) -> String) -> String {
    let parts: Vec<String> = c.terms().map(|(g, p)| format!("({p})·{}", names(g))).collect();
    parts.join(" + ")
}

/// Flips one term `T^λ · out` in `μ₂(x, y)` for a random composable pair.
pub fn random_mu2_flip(cat: &FilteredAInfCategory, rng: &mut impl Rng) -> Option<(Vec<usize>, usize, NovikovElement)> {
    let pairs = cat.composable_tuples(2);
    if pairs.is_empty() {
        return None;
    }
    let key = pairs[rng.gen_range(0..pairs.len())].clone();
    let (src, tgt) = (cat.generator(key[0]).source, cat.generator(key[1]).target);
    let outs: Vec<usize> = (0..cat.generators().len())
        .filter(|g| cat.generator(*g).source == src && cat.generator(*g).target == tgt)
        .collect();
    if outs.is_empty() {
        return None;
    }
    let out = outs[rng.gen_range(0..outs.len())];
    let lambda = crate::exact::rat(rng.gen_range(0..4), 2);
    Some((key, out, NovikovElement::monomial(lambda)))
}

fn ainf(a: &CheckAinfArgs, parallel: bool) -> Result<Report, CliError> {
    let cat = load_category(&a.path)?;
    let names = |g: usize| cat.generator(g).name.clone();
    let report = check_ainf(&cat, a.d, parallel);
    let mut r = Report::new("check-ainf");
    r.line(format!(
        "objects={} generators={} max_arity={} checked={} tuples up to d={}",
        cat.objects().len(),
        cat.generators().len(),
        cat.max_arity(),
        report.checked,
        a.d
    ));
    for f in &report.failures {
        let ins: Vec<String> = f.inputs.iter().map(|g| names(*g)).collect();
        r.finding(format!("d={} in=({}) defect={}", f.inputs.len(), ins.join(","), chain_text(&f.defect, &names)));
    }
    r.kv("generators", cat.generators().len());
    r.kv("checked", report.checked);
    if a.perturb > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env()?);
        let mut detected = 0;
        for _ in 0..a.perturb {
            let Some((key, out, coeff)) = random_mu2_flip(&cat, &mut rng) else {
                break;
            };
            let mut bad = cat.clone();
            bad.add_mu_term(&key, out, &coeff).expect("typed flip");
            let rep = check_ainf(&bad, a.d, parallel);
            let ins: Vec<String> = key.iter().map(|g| names(*g)).collect();
            let flip = format!("mu2({})+={coeff}·{}", ins.join(","), names(out));
            match rep.failures.first() {
                Some(f) => {
                    detected += 1;
                    let at: Vec<String> = f.inputs.iter().map(|g| names(*g)).collect();
                    r.line(format!("perturb {flip}: detected at ({})", at.join(",")));
                }
                None => r.line(format!("perturb {flip}: relations still hold")),
            }
        }
        r.line(format!("perturbations={} detected={detected}", a.perturb));
        r.kv("perturbations", a.perturb);
        r.kv("detected", detected);
    }
    r.kv("failures", report.failures.len());
    r.settle();
    Ok(r)
}

fn linf(path: &Path, max_n: usize) -> Result<Report, CliError> {
    let alg = LInfinityAlgebra::parse(&read(path)?).map_err(in_file(path))?;
    let fails = check_linf(&alg, max_n).map_err(in_file(path))?;
    let names = |g: usize| alg.basis()[g].clone();
    let mut r = Report::new("check-linf");
    r.line(format!("basis={} max_n={max_n}", alg.basis().len()));
    for f in &fails {
        let ins: Vec<String> = f.inputs.iter().map(|g| names(*g)).collect();
        r.finding(format!("in={{{}}} defect={}", ins.join(","), chain_text(&f.defect, &names)));
    }
    r.kv("basis", alg.basis().len());
    r.kv("failures", fails.len());
    r.settle();
    Ok(r)
}

fn ocha(path: &Path, k: usize, d: usize, parallel: bool) -> Result<Report, CliError> {
    let s = OCHAStructure::parse(&read(path)?).map_err(in_file(path))?;
    let rep = check_ocha(&s, k, d, parallel).map_err(in_file(path))?;
    let closed = |g: usize| s.closed()[g].clone();
    let open = |g: usize| s.open()[g].clone();
    let mut r = Report::new("check-ocha");
    r.line(format!(
        "closed={} open={} checked={} ainf_failures={} linf_failures={}",
        s.closed().len(),
        s.open().len(),
        rep.checked,
        rep.open_ainf.failures.len(),
        rep.closed_linf.len()
    ));
    for f in &rep.failures {
        let c: Vec<String> = f.closed.iter().map(|g| closed(*g)).collect();
        let o: Vec<String> = f.open.iter().map(|g| open(*g)).collect();
        r.finding(format!("closed={{{}}} open=({}) defect={}", c.join(","), o.join(","), chain_text(&f.defect, &open)));
    }
    for f in &rep.open_ainf.failures {
        let o: Vec<String> = f.inputs.iter().map(|g| open(*g)).collect();
        r.finding(format!("open A∞ at ({}) defect={}", o.join(","), chain_text(&f.defect, &open)));
    }
    for f in &rep.closed_linf {
        let c: Vec<String> = f.inputs.iter().map(|g| closed(*g)).collect();
        r.finding(format!("closed L∞ at {{{}}} defect={}", c.join(","), chain_text(&f.defect, &closed)));
    }
    r.kv("checked", rep.checked);
    r.kv("failures", rep.failures.len());
    r.kv("ainf_failures", rep.open_ainf.failures.len());
    r.kv("linf_failures", rep.closed_linf.len());
    r.settle();
    Ok(r)
}

fn measure(path: &Path) -> Result<Report, CliError> {
    let cat = load_category(path)?;
    let rep = measure_discrepancies(&cat, cat.units());
    let mut r = Report::new("measure");
    for (d, raw) in &rep.raw {
        r.line(format!("d={d} raw={raw} eps={}", format_rational(&rep.eps[d])));
        r.kv(&format!("raw.{d}"), raw);
        r.kv(&format!("eps.{d}"), format_rational(&rep.eps[d]));
    }
    for (o, u) in &rep.unit_level {
        r.line(format!("unit {} level={u}", cat.objects()[*o]));
        r.kv(&format!("unit.{}", cat.objects()[*o]), u);
    }
    r.line(format!("filtered={}", rep.is_filtered));
    r.kv("filtered", rep.is_filtered);
    if !rep.is_filtered {
        r.finding("category is not filtered");
    }
    r.settle();
    Ok(r)
}

fn unit(path: &Path, object: &str) -> Result<Report, CliError> {
    let cat = load_category(path)?;
    let o = cat
        .object_id(object)
        .ok_or_else(|| usage(format!("unknown object `{object}`")))?;
    let e = cat
        .units()
        .get(&o)
        .ok_or_else(|| usage(format!("no unit declared for `{object}`")))?;
    let names = |g: usize| cat.generator(g).name.clone();
    let mut r = Report::new("unit");
    r.line(format!("object={object} unit={} level={}", chain_text(e, &names), cat.chain_action(e)));
    r.kv("level", cat.chain_action(e));
    match check_strict_unit(&cat, o, e) {
        Ok(()) => r.line("strict unit"),
        Err(v) => r.finding(match v {
            UnitViolation::NotEndomorphism { generator } => {
                format!("`{}` is not an endomorphism of {object}", names(generator))
            }
            UnitViolation::Differential { got } => format!("mu1(e) = {}", chain_text(&got, &names)),
            UnitViolation::Product { left, x, got } => {
                let pair = if left { format!("e,{}", names(x)) } else { format!("{},e", names(x)) };
                format!("mu2({pair}) = {} instead of {}", chain_text(&got, &names), names(x))
            }
            UnitViolation::Higher { d, slot, others, got } => {
                let mut ins: Vec<String> = others.iter().map(|g| names(*g)).collect();
                ins.insert(slot, "e".into());
                format!("mu{d}({}) = {} with e in slot {}", ins.join(","), chain_text(&got, &names), slot + 1)
            }
        }),
    }
    r.settle();
    Ok(r)
}

fn functor(source: &Path, target: &Path, fpath: &Path, d: usize, parallel: bool) -> Result<Report, CliError> {
    let a = load_category(source)?;
    let b = load_category(target)?;
    let f = AInfFunctor::parse(&read(fpath)?, &a, &b).map_err(in_file(fpath))?;
    let shift = functor_shift(&a, &b, &f);
    let mut r = Report::new("functor");
    for (k, raw) in &shift.raw {
        r.line(format!("d={k} raw={raw}"));
        r.kv(&format!("raw.{k}"), raw);
    }
    r.line(format!("rho={}", format_rational(&shift.rho)));
    r.kv("rho", format_rational(&shift.rho));
    let names = |g: usize| a.generator(g).name.clone();
    let target_names = |g: usize| b.generator(g).name.clone();
    for fail in check_functor(&a, &b, &f, d, parallel) {
        let ins: Vec<String> = fail.inputs.iter().map(|g| names(*g)).collect();
        r.finding(format!("functor equation at ({}) defect={}", ins.join(","), chain_text(&fail.defect, &target_names)));
    }
    r.settle();
    Ok(r)
}

fn budget(a: &BudgetArgs) -> Result<Report, CliError> {
    let eps = rational("eps", &a.eps)?;
    let opt = |flag: &str, v: &Option<String>| v.as_deref().map(|s| rational(flag, s)).transpose();
    let delta = opt("delta", &a.delta)?;
    let convention = match a.convention {
        ConventionArg::Main => Convention::Main,
        ConventionArg::Draft => Convention::Draft,
    };
    let cases = match a.case {
        Some(c) => vec![c],
        None if delta.is_some() => vec![BudgetCase::Open, BudgetCase::Closed, BudgetCase::EpsDelta],
        None => vec![BudgetCase::Open, BudgetCase::Closed],
    };
    let mut r = Report::new("budget");
    let show = |x: &Option<Rat>| x.as_ref().map(format_rational).unwrap_or_else(|| "-".into());
    let verdict = |b: &Rat| if *b <= Rat::default() { "non-positive" } else { "positive" };
    for case in cases {
        let (name, bound, extra) = match case {
            BudgetCase::Open | BudgetCase::Closed => {
                let class = if case == BudgetCase::Open {
                    crate::trees::TupleClass::CyclicallyDifferent
                } else {
                    crate::trees::TupleClass::AlmostCyclicallyDifferent
                };
                let mut p = BudgetParams::new(eps.clone(), a.d, class);
                p.delta = delta.clone();
                let b = vertex_curvature_budget(&p, convention).map_err(usage)?;
                let name = if case == BudgetCase::Open { "open" } else { "closed" };
                (name, b, String::new())
            }
            BudgetCase::EpsDelta => {
                let delta = delta.clone().ok_or_else(|| usage(BudgetError::MissingDelta))?;
                let b = eps_delta_budget(&eps, &delta).map_err(usage)?;
                ("eps-delta", b.worst_case, format!(" cap={}", format_rational(&b.cap)))
            }
            BudgetCase::Continuation => {
                let need = |flag: &str, v: &Option<String>| {
                    opt(flag, v)?.ok_or_else(|| usage(format!("--{flag} is required")))
                };
                let d1 = need("delta1", &a.delta1)?;
                let e2 = need("eps2", &a.eps2)?;
                let d2 = need("delta2", &a.delta2)?;
                let s = continuation_shift(&eps, &d1, &e2, &d2, a.d).map_err(usage)?;
                let half = continuation_shift_half(&eps, &e2).map_err(usage)?;
                let extra = format!(
                    " per_d={} filtered={} half_delta_bound={}",
                    format_rational(&s.per_d),
                    s.filtered,
                    format_rational(&half)
                );
                ("continuation", s.overall, extra)
            }
            BudgetCase::Window => {
                let lo = opt("lo", &a.lo)?.ok_or_else(|| usage("--lo is required"))?;
                let hi = opt("hi", &a.hi)?.ok_or_else(|| usage("--hi is required"))?;
                let mut p = BudgetParams::new(eps.clone(), a.d, crate::trees::TupleClass::CyclicallyDifferent);
                p.delta = delta.clone();
                let ok = validate_floer_window(&HamiltonianWindow { lo: lo.clone(), hi: hi.clone() }, &p)
                    .map_err(usage)?;
                r.line(format!(
                    "case=window eps={} delta={} lo={} hi={} verdict={}",
                    format_rational(&eps),
                    show(&delta),
                    format_rational(&lo),
                    format_rational(&hi),
                    if ok { "accept" } else { "reject" }
                ));
                r.kv("window", if ok { "accept" } else { "reject" });
                if !ok {
                    r.finding("window is not inside the admissible range");
                }
                continue;
            }
        };
        r.line(format!(
            "case={name} d={} eps={} delta={} bound={} verdict={}{extra}",
            a.d,
            format_rational(&eps),
            show(&delta),
            format_rational(&bound),
            verdict(&bound)
        ));
        r.kv(&format!("{name}.bound"), format_rational(&bound));
        r.kv(&format!("{name}.verdict"), verdict(&bound));
    }
    if !r.findings.is_empty() {
        r.status = Status::Fail;
    }
    Ok(r)
}

fn dim(a: &DimArgs) -> Result<Report, CliError> {
    let case = DimensionCase::from_name(&a.case).ok_or_else(|| {
        let names: Vec<&str> = DimensionCase::ALL.iter().map(|c| c.name()).collect();
        usage(format!("unknown case `{}`; expected one of {}", a.case, names.join(", ")))
    })?;
    let inp = IndexInput {
        n: a.n,
        d: a.d,
        d_r: a.d_r,
        maslov: a.maslov,
        morse_indices: a.morse.clone(),
        out_index: a.out,
        crit_a: a.a,
        crit_b: a.b,
        l: a.l,
        k: a.k,
    };
    let v = virtual_dimension(&inp, case).map_err(usage)?;
    let mut r = Report::new("dim");
    r.line(format!("case={} dim={v}", case.name()));
    r.kv("dim", v);
    Ok(r)
}
