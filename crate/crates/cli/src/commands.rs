use std::fs;
use std::path::Path;
use std::time::Instant;

use gtp_core::constructions::{cyclic_boundary, glue, join, stack};
use gtp_core::formulas::{
    connected_sum_betti, gtp_formula_table, mcgavran_decomposition, polygon_formula_table, sphere_list_from_table,
    sphere_list_validity,
};
use gtp_core::golod::{connected_sum_ring_check, is_minimally_non_golod_with, is_ring_golod_with, GolodOptions};
use gtp_core::hochster::{torsion_witnesses, HochsterOptions};
use gtp_core::table::table_differences;
use gtp_core::taylor::{taylor_betti_with, MonomialSet, TaylorBasis, TaylorOptions};
use gtp_core::{
    bigraded_betti_with, build_gtp, duality_check, BigradedBettiTable, Coefficients, Face, GtpSpec, SimplicialComplex,
    StackingStrategy,
};
use serde_json::{json, Value};

use crate::{
    BettiArgs, BuildCommand, Cli, CoeffArg, Command, EngineArg, FormatArg, GolodArgs, OpsCommand, PredictCommand,
    StrategyArg, TaylorArgs, TaylorBasisArg, VerifyCommand,
};

pub struct Outcome {
    pub stdout: String,
    pub status: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, status: 0 }
    }

    fn json(value: &Value, holds: bool) -> Self {
        Outcome { stdout: pretty(value), status: if holds { 0 } else { 1 } }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] gtp_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json serializes");
    s.push('\n');
    s
}

fn read_complex(path: &Path) -> Result<SimplicialComplex> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(SimplicialComplex::from_json(&text)?)
}

fn emit_complex(k: &SimplicialComplex, output: Option<&Path>) -> Result<Outcome> {
    let mut text = k.to_json();
    text.push('\n');
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn face(labels: &[u32]) -> Result<Face> {
    Ok(Face::new(labels.to_vec())?)
}

fn gtp_spec(k: usize, dims: &[usize], strategy: StrategyArg, seed: Option<u64>) -> Result<GtpSpec> {
    let strategy = match (strategy, seed) {
        (StrategyArg::Lex, None) => StackingStrategy::Lexicographic,
        (StrategyArg::Lex, Some(_)) => return Err(CliError::Usage("--seed only applies to --strategy random".into())),
        (StrategyArg::Random, Some(seed)) => StackingStrategy::SeededRandom(seed),
        (StrategyArg::Random, None) => return Err(CliError::Usage("--strategy random needs --seed".into())),
    };
    Ok(GtpSpec::with_strategy(k, dims.to_vec(), strategy)?)
}

struct Context {
    threads: Option<usize>,
    max_vertices: usize,
    verbose: bool,
}

impl Context {
    fn hochster(&self, coeff: Coefficients) -> HochsterOptions {
        HochsterOptions { coeff, max_vertices: self.max_vertices, threads: self.threads }
    }

    fn log(&self, what: &str, start: Instant) {
        if self.verbose {
            eprintln!("{what}: {:.3}s", start.elapsed().as_secs_f64());
        }
    }

    fn hochster_table(&self, k: &SimplicialComplex, coeff: Coefficients) -> Result<BigradedBettiTable> {
        let start = Instant::now();
        let mut table = bigraded_betti_with(k, &self.hochster(coeff))?;
        if table.d.is_none() {
            table.d = inferred_dimension(k);
        }
        self.log("hochster", start);
        Ok(table)
    }

    fn taylor_table(&self, k: &SimplicialComplex, args: &TaylorArgs) -> Result<(BigradedBettiTable, TaylorBasis, usize)> {
        let start = Instant::now();
        let generators = MonomialSet::from_complex(k)?.len();
        let basis = match args.taylor_basis {
            TaylorBasisArg::Full => TaylorBasis::Full,
            TaylorBasisArg::Lyubeznik => TaylorBasis::Lyubeznik,
            TaylorBasisArg::Auto if generators <= args.max_generators => TaylorBasis::Full,
            TaylorBasisArg::Auto => TaylorBasis::Lyubeznik,
        };
        let opts = TaylorOptions { basis, max_generators: args.max_generators, threads: self.threads, ..Default::default() };
        let mut table = taylor_betti_with(k, &opts)?;
        if table.d.is_none() {
            table.d = inferred_dimension(k);
        }
        self.log("taylor", start);
        Ok((table, basis, generators))
    }
}

/// `dim K + 1` for a pure complex, which is the polytope dimension for
/// boundaries of simplicial polytopes.
fn inferred_dimension(k: &SimplicialComplex) -> Option<usize> {
    (k.is_pure() && k.dim() >= 0).then(|| (k.dim() + 1) as usize)
}

fn basis_name(basis: TaylorBasis) -> &'static str {
    match basis {
        TaylorBasis::Full => "full",
        TaylorBasis::Lyubeznik => "lyubeznik",
    }
}

fn differences_json(a: &BigradedBettiTable, b: &BigradedBettiTable, a_name: &str, b_name: &str) -> Vec<Value> {
    table_differences(a, b)
        .into_iter()
        .map(|(i, j, x, y)| json!({"i": i, "j": j, a_name: x, b_name: y}))
        .collect()
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    if cli.threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let ctx = Context { threads: cli.threads, max_vertices: cli.max_vertices, verbose: cli.verbose };
    match &cli.command {
        Command::Build(cmd) => build(cmd),
        Command::Ops(cmd) => ops(cmd),
        Command::Betti(args) => betti(&ctx, args),
        Command::Golod(args) => golod(&ctx, args),
        Command::Predict(cmd) => predict(&ctx, cmd),
        Command::Verify(cmd) => verify(&ctx, cmd),
    }
}

fn build(cmd: &BuildCommand) -> Result<Outcome> {
    match cmd {
        BuildCommand::Gtp { k, dims, strategy, seed, output } => {
            let complex = build_gtp(&gtp_spec(*k, dims, *strategy, *seed)?)?;
            emit_complex(&complex, output.as_deref())
        }
        BuildCommand::Cyclic { m, n, output } => emit_complex(&cyclic_boundary(*m, *n)?, output.as_deref()),
        BuildCommand::Join { a, b, output } => {
            emit_complex(&join(&read_complex(a)?, &read_complex(b)?), output.as_deref())
        }
    }
}

fn ops(cmd: &OpsCommand) -> Result<Outcome> {
    match cmd {
        OpsCommand::Stack { file, facet, output } => {
            emit_complex(&stack(&read_complex(file)?, &face(facet)?)?, output.as_deref())
        }
        OpsCommand::Delete { file, vertex, output } => {
            emit_complex(&read_complex(file)?.delete_vertex(*vertex)?, output.as_deref())
        }
        OpsCommand::Glue { a, b, sigma1, sigma2, output } => {
            let glued = glue(&read_complex(a)?, &read_complex(b)?, &face(sigma1)?, &face(sigma2)?)?;
            emit_complex(&glued, output.as_deref())
        }
    }
}

fn betti(ctx: &Context, args: &BettiArgs) -> Result<Outcome> {
    let k = read_complex(&args.file)?;
    let coeff = match args.coeff {
        CoeffArg::Rational => Coefficients::Rational,
        CoeffArg::Integer => Coefficients::Integer,
    };
    let table = match args.engine {
        EngineArg::Hochster => ctx.hochster_table(&k, coeff)?,
        EngineArg::Taylor => {
            if coeff == Coefficients::Integer {
                return Err(CliError::Usage("the taylor engine works over the rationals only".into()));
            }
            ctx.taylor_table(&k, &args.taylor)?.0
        }
    };
    let stdout = match args.format {
        FormatArg::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
        FormatArg::Table => {
            let mut s = table.render_text();
            if let Some(torsion) = table.torsion {
                s.push_str(if torsion { "torsion: present\n" } else { "torsion: none\n" });
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

fn golod(ctx: &Context, args: &GolodArgs) -> Result<Outcome> {
    let k = read_complex(&args.file)?;
    let opts = GolodOptions { prefilter: !args.no_prefilter, max_vertices: ctx.max_vertices, threads: ctx.threads };
    let start = Instant::now();
    let report = if args.minimal { is_minimally_non_golod_with(&k, &opts)? } else { is_ring_golod_with(&k, &opts)? };
    ctx.log("golod", start);
    Ok(Outcome::ok(pretty(&report.to_json_value())))
}

fn predict(ctx: &Context, cmd: &PredictCommand) -> Result<Outcome> {
    match cmd {
        PredictCommand::Mcgavran { k, n } => {
            let list = mcgavran_decomposition(*k, *n)?;
            let total = 2 * n + k + 1;
            let betti = connected_sum_betti(&list, total)?;
            Ok(Outcome::ok(pretty(&json!({
                "k": k,
                "n": n,
                "total_dim": total,
                "list": list,
                "summary": list.to_string(),
                "betti": betti.b,
            }))))
        }
        PredictCommand::Spheres { file } => {
            let k = read_complex(file)?;
            let spec = k.gtp_meta().map(|meta| GtpSpec::new(meta.k, meta.dims)).transpose()?;
            let m = k.num_vertices();
            let d = match &spec {
                Some(s) => s.d(),
                None => inferred_dimension(&k)
                    .ok_or_else(|| CliError::Usage("sphere prediction needs a pure complex".into()))?,
            };
            let table = ctx.hochster_table(&k, Coefficients::Rational)?;
            let prediction = sphere_list_from_table(&table, m, d, sphere_list_validity(spec.as_ref()));
            let check = connected_sum_ring_check(&k)?;
            let list = if check.consistent { prediction.list.clone() } else { None };
            let reason = match (&prediction.reason, check.consistent) {
                (Some(r), _) => Some(r.clone()),
                (None, false) => Some("cup products rule out a connected sum of products of two spheres".to_string()),
                (None, true) => None,
            };
            Ok(Outcome::ok(pretty(&json!({
                "total_dim": prediction.total_dim,
                "list": list,
                "summary": list.as_ref().map(|l| l.to_string()),
                "betti_level_list": prediction.list,
                "reason": reason,
                "validity": prediction.validity,
                "ring_check": check,
            }))))
        }
    }
}

fn verify(ctx: &Context, cmd: &VerifyCommand) -> Result<Outcome> {
    match cmd {
        VerifyCommand::Formula { k, dims, strategy, seed } => {
            let spec = gtp_spec(*k, dims, *strategy, *seed)?;
            let complex = build_gtp(&spec)?;
            let formula = if spec.d() >= 3 {
                gtp_formula_table(&spec)?
            } else if spec.m() >= 3 {
                polygon_formula_table(spec.m() - 3)
            } else {
                return Err(CliError::Usage("no closed form for this type".into()));
            };
            let hochster = ctx.hochster_table(&complex, Coefficients::Rational)?;
            let diffs = differences_json(&formula.table, &hochster, "formula", "hochster");
            let holds = diffs.is_empty();
            Ok(Outcome::json(
                &json!({
                    "k": k,
                    "dims": dims,
                    "m": spec.m(),
                    "d": spec.d(),
                    "formula": formula.provenance,
                    "match": holds,
                    "differences": diffs,
                }),
                holds,
            ))
        }
        VerifyCommand::Duality { file } => {
            let k = read_complex(file)?;
            let n = inferred_dimension(&k).ok_or_else(|| CliError::Usage("duality needs a pure complex".into()))?;
            let table = ctx.hochster_table(&k, Coefficients::Rational)?;
            let report = duality_check(&table, k.num_vertices(), n);
            Ok(Outcome::json(
                &json!({"m": k.num_vertices(), "n": n, "holds": report.holds, "violations": report.violations}),
                report.holds,
            ))
        }
        VerifyCommand::Oracle { file, taylor } => {
            let k = read_complex(file)?;
            let hochster = ctx.hochster_table(&k, Coefficients::Rational)?;
            let (taylor_table, basis, generators) = ctx.taylor_table(&k, taylor)?;
            let diffs = differences_json(&hochster, &taylor_table, "hochster", "taylor");
            let holds = diffs.is_empty();
            Ok(Outcome::json(
                &json!({
                    "match": holds,
                    "generators": generators,
                    "taylor_basis": basis_name(basis),
                    "differences": diffs,
                }),
                holds,
            ))
        }
        VerifyCommand::Torsion { file } => {
            let k = read_complex(file)?;
            let start = Instant::now();
            let witnesses = torsion_witnesses(&k, &ctx.hochster(Coefficients::Integer))?;
            ctx.log("torsion", start);
            let holds = witnesses.is_empty();
            let list: Vec<Value> = witnesses
                .into_iter()
                .map(|(subset, dim, factors)| json!({"subset": subset, "dimension": dim, "invariant_factors": factors}))
                .collect();
            Ok(Outcome::json(&json!({"torsion_free": holds, "witnesses": list}), holds))
        }
    }
}
