use std::fmt;
use std::path::Path;

use serde_json::{json, Value};
use sieve_core::io::{
    gen_synthetic, read_bundle, read_groups, read_libsvm, write_bench, write_bundle, write_report,
    BenchRow, ReportFormat, RunReport, SyntheticSpec,
};
use sieve_core::path::{
    generate_path, lambda_grid_log10, ssr_mistakes, ssr_path, warmstart_path, PathEntry,
    PathMethod, PathReport, RegularizerFamily,
};
use sieve_core::residual::objective;
use sieve_core::sieve::{full_solve, sieve_solve, InitialSet, SieveConfig, Termination};
use sieve_core::{
    Criterion, GroupPartition, InnerBackend, InnerConfig, LossKind, ProblemData, SieveError,
};

use crate::args::{
    Baseline, BenchArgs, CriterionArg, DataArgs, FormatArg, GenArgs, InnerArg, LossArg, ModelArgs,
    OutputArgs, PathArgs, RegArg, SolveArgs, SolverArgs,
};

/// Failures, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unusable input (exit 1).
    Input(String),
    /// A numerical guarantee failed at runtime (exit 2).
    Numerical(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<SieveError> for CliError {
    fn from(e: SieveError) -> Self {
        match e {
            SieveError::Consistency(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Whether every solve met its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    Flagged,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn loss_kind(l: LossArg) -> LossKind {
    match l {
        LossArg::Ls => LossKind::LeastSquares,
        LossArg::Logistic => LossKind::Logistic,
    }
}

pub fn cmd_gen(args: &GenArgs) -> CliResult<Outcome> {
    let spec = SyntheticSpec {
        m: args.m,
        g: args.g,
        p: args.p,
        sparsity: args.sparsity,
        loss: loss_kind(args.loss),
        seed: args.seed,
    };
    spec.validate()?;
    if spec.nonzeros_per_group() == 0 {
        return Err(input(format!(
            "sparsity yields 0 nonzeros per group (⌊{}·{}⌋ = 0)",
            args.sparsity, args.p
        )));
    }
    let data = gen_synthetic(&spec)?;
    write_bundle(&args.out, &data)?;
    let nnz = data.x_true.iter().filter(|v| **v != 0.0).count();
    println!(
        "m={} n={} nnz(x*)={} seed={} sampler={:?} -> {}",
        spec.m,
        spec.n(),
        nnz,
        spec.seed,
        data.sampler,
        args.out.display()
    );
    Ok(Outcome::Converged)
}

struct Loaded {
    problem: ProblemData,
    groups: Option<GroupPartition>,
    provenance: Value,
}

fn load(data: &DataArgs) -> CliResult<Loaded> {
    let (problem, mut groups, provenance) = match (&data.data, &data.libsvm) {
        (Some(dir), None) => {
            let (problem, meta) = read_bundle(dir)?;
            if let Some(l) = data.loss {
                if loss_kind(l) != problem.loss() {
                    return Err(input(format!(
                        "--loss {} contradicts the bundle's {} loss",
                        loss_kind(l).name(),
                        problem.loss().name()
                    )));
                }
            }
            let groups = GroupPartition::contiguous(meta.spec.g, meta.spec.p)?;
            let prov = json!({ "bundle": dir, "synthetic": meta.spec, "sampler": meta.sampler });
            (problem, Some(groups), prov)
        }
        (None, Some(file)) => {
            let loss = data.loss.map_or(LossKind::LeastSquares, loss_kind);
            let problem = read_libsvm(file, loss, data.n_features)?;
            (problem, None, json!({ "libsvm": file }))
        }
        _ => return Err(input("exactly one of --data or --libsvm is required")),
    };
    if let Some(path) = &data.groups {
        groups = Some(read_groups(path, problem.n())?);
    }
    if let Some(size) = data.group_size {
        if size == 0 || problem.n() % size != 0 {
            return Err(input(format!(
                "--group-size {size} does not divide n = {}",
                problem.n()
            )));
        }
        groups = Some(GroupPartition::contiguous(problem.n() / size, size)?);
    }
    Ok(Loaded {
        problem,
        groups,
        provenance,
    })
}

fn family(model: &ModelArgs, loaded: &Loaded) -> CliResult<RegularizerFamily> {
    let n = loaded.problem.n();
    let groups = || {
        loaded.groups.clone().ok_or_else(|| {
            input(format!(
                "--reg {:?} needs groups (--groups or --group-size)",
                model.reg
            ))
        })
    };
    Ok(match model.reg {
        RegArg::Lasso => RegularizerFamily::lasso(n)?,
        RegArg::Enet => RegularizerFamily::elastic_net(n, model.enet_ratio)?,
        RegArg::Sgl => {
            let base = RegularizerFamily::sparse_group_lasso(groups()?)?;
            match model.sgl_l2_factor {
                None => base,
                Some(f) => {
                    let sieve_core::Penalty::SparseGroupLasso {
                        weights, partition, ..
                    } = base.base().penalty().clone()
                    else {
                        unreachable!("sparse group lasso family")
                    };
                    RegularizerFamily::new(sieve_core::RegularizerSpec::sparse_group_lasso(
                        1.0, f, weights, partition,
                    )?)
                }
            }
        }
        RegArg::Exlasso => RegularizerFamily::exclusive_lasso(groups()?)?,
        RegArg::Slope => RegularizerFamily::slope_bh(n, model.slope_q)?,
    })
}

fn model_name(model: &ModelArgs, loss: LossKind) -> String {
    let reg = match model.reg {
        RegArg::Lasso => "lasso",
        RegArg::Enet => "enet",
        RegArg::Sgl => "sgl",
        RegArg::Exlasso => "exlasso",
        RegArg::Slope => "slope",
    };
    format!("{reg}-{}", loss.name())
}

fn configs(s: &SolverArgs) -> (SieveConfig, InnerConfig) {
    let criterion = match s.criterion {
        CriterionArg::Kkt => Criterion::RelativeKkt,
        CriterionArg::Residual => Criterion::ResidualNorm,
    };
    let sieve = SieveConfig {
        epsilon: s.eps,
        k_max: s.kmax,
        init_k: s.init_k,
        criterion,
        max_rounds: s.max_rounds,
    };
    let inner = InnerConfig {
        backend: match s.inner {
            InnerArg::Apg => InnerBackend::Apg,
            InnerArg::Proxgrad => InnerBackend::ProxGrad,
        },
        max_iters: s.max_iters,
        use_lipschitz: !s.backtracking,
        ..InnerConfig::default()
    };
    (sieve, inner)
}

fn format_for(output: &OutputArgs, path: &Path) -> ReportFormat {
    match output.format {
        Some(FormatArg::Json) => ReportFormat::Json,
        Some(FormatArg::Csv) => ReportFormat::Csv,
        None => ReportFormat::from_path(path),
    }
}

fn print_table(report: &RunReport) {
    println!(
        "{:>12} {:>6} {:>10} {:>6} {:>9} {:>6} {:>9}  status",
        "lambda", "nnz", "eta_kkt", "rounds", "avg_dim", "max_d", "time_s"
    );
    for i in 0..report.lambda.len() {
        println!(
            "{:>12.5e} {:>6} {:>10.2e} {:>6} {:>9.1} {:>6} {:>9.4}  {}",
            report.lambda[i],
            report.nnz[i],
            report.eta_kkt[i],
            report.rounds[i],
            report.avg_reduced_dim_per_lambda[i],
            report.max_reduced_dim_per_lambda[i],
            report.wall_time_s[i],
            match report.terminated_by[i] {
                Termination::Tolerance => "ok",
                Termination::MaxRounds => "MAX_ROUNDS",
            }
        );
    }
}

fn finish(report: &RunReport, output: &OutputArgs) -> CliResult<Outcome> {
    print_table(report);
    if let Some(path) = &output.out {
        write_report(report, path, format_for(output, path))?;
    }
    Ok(if report.any_flagged() {
        Outcome::Flagged
    } else {
        Outcome::Converged
    })
}

fn config_value(invocation: &impl serde::Serialize, provenance: &Value) -> Value {
    json!({
        "invocation": invocation,
        "data": provenance,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

pub fn cmd_solve(args: &SolveArgs) -> CliResult<Outcome> {
    let loaded = load(&args.data)?;
    let fam = family(&args.model, &loaded)?;
    let p = &loaded.problem;
    let lambda = match (args.lambda, args.lambda_c) {
        (Some(l), None) => l,
        (None, Some(c)) => c * p.lambda_scale(),
        _ => return Err(input("exactly one of --lambda or --lambda-c is required")),
    };
    let spec = fam.at(lambda)?;
    let (cfg, inner) = configs(&args.solver);
    let report = if args.no_as {
        full_solve(p, &spec, &cfg, &inner, None)?
    } else {
        sieve_solve(p, &spec, &InitialSet::Auto, &cfg, &inner, None)?
    };
    let obj = objective(p, &spec, &report.x)?;
    let initial = report.per_round.first().map_or(0, |r| r.i_size);
    let entry = PathEntry::from_report(lambda, &report, obj, initial, 0.0);
    let path = PathReport {
        method: PathMethod::Sieve,
        wall_time_s: report.wall_time_s,
        entries: vec![entry],
        eps_hat: 0.0,
    };
    let mut run = RunReport::from_path(
        &model_name(&args.model, p.loss()),
        cfg.criterion,
        &path,
        config_value(args, &loaded.provenance),
    );
    if args.no_as {
        run.solver = "full".into();
    }
    println!("objective = {obj:.12e}");
    finish(&run, &args.output)
}

struct PathSetup {
    loaded: Loaded,
    fam: RegularizerFamily,
    grid: sieve_core::LambdaGrid,
    cfg: SieveConfig,
    inner: InnerConfig,
}

fn setup_path(args: &PathArgs) -> CliResult<PathSetup> {
    let loaded = load(&args.data)?;
    let fam = family(&args.model, &loaded)?;
    let grid = lambda_grid_log10(
        loaded.problem.lambda_scale(),
        args.grid.grid_hi,
        args.grid.grid_lo,
        args.grid.grid_n,
    )?;
    let (cfg, inner) = configs(&args.solver);
    Ok(PathSetup {
        loaded,
        fam,
        grid,
        cfg,
        inner,
    })
}

pub fn cmd_path(args: &PathArgs) -> CliResult<Outcome> {
    let s = setup_path(args)?;
    let p = &s.loaded.problem;
    let report = generate_path(p, &s.fam, &s.grid, &s.cfg, &s.inner, args.grid.eps_hat)?;
    let run = RunReport::from_path(
        &model_name(&args.model, p.loss()),
        s.cfg.criterion,
        &report,
        config_value(args, &s.loaded.provenance),
    );
    finish(&run, &args.output)
}

pub fn cmd_bench(args: &BenchArgs) -> CliResult<Outcome> {
    let pa = &args.path;
    let s = setup_path(pa)?;
    let p = &s.loaded.problem;
    if args.baselines.contains(&Baseline::Ssr)
        && (p.loss() != LossKind::LeastSquares || pa.model.reg != RegArg::Lasso)
    {
        return Err(input(format!(
            "unsupported operation: the ssr baseline needs --reg lasso with least squares, got {}",
            model_name(&pa.model, p.loss())
        )));
    }
    let model = model_name(&pa.model, p.loss());
    let config = config_value(args, &s.loaded.provenance);

    let sieve = generate_path(p, &s.fam, &s.grid, &s.cfg, &s.inner, pa.grid.eps_hat)?;
    let mut reports = vec![(sieve.clone(), None)];
    for b in &args.baselines {
        match b {
            Baseline::Warmstart => {
                reports.push((warmstart_path(p, &s.fam, &s.grid, &s.cfg, &s.inner)?, None));
            }
            Baseline::Ssr => {
                let ssr = ssr_path(p, &s.fam, &s.grid, &s.cfg, &s.inner)?;
                let mistakes: usize = ssr_mistakes(&ssr, &sieve)?.iter().sum();
                reports.push((ssr, Some(mistakes)));
            }
        }
    }

    let rows: Vec<BenchRow> = reports
        .iter()
        .map(|(r, mistakes)| BenchRow::from_path(r, *mistakes))
        .collect();
    println!(
        "{:<10} {:>10} {:>7} {:>9} {:>7} {:>8} {:>8}",
        "method", "time_s", "S.Rnd", "Avg.D", "Max.D", "flagged", "ssr_miss"
    );
    for r in &rows {
        println!(
            "{:<10} {:>10.4} {:>7} {:>9.1} {:>7} {:>8} {:>8}",
            r.method,
            r.total_time_s,
            r.s_rnd,
            r.avg_d,
            r.max_d,
            r.flagged,
            r.ssr_mistakes.map_or("-".to_string(), |k| k.to_string())
        );
    }
    if let Some(path) = &pa.output.out {
        write_bench(&rows, &config, path, format_for(&pa.output, path))?;
    }
    if let Some(dir) = &args.reports_dir {
        std::fs::create_dir_all(dir).map_err(SieveError::from)?;
        for (r, _) in &reports {
            let run = RunReport::from_path(&model, s.cfg.criterion, r, config.clone());
            let file = dir.join(format!("{}.json", r.method.name()));
            write_report(&run, &file, ReportFormat::Json)?;
        }
    }
    // the strong rule is unsafe by construction; its misses are reported, not failures
    let flagged = reports
        .iter()
        .any(|(r, _)| r.method != PathMethod::StrongRule && r.any_flagged());
    Ok(if flagged {
        Outcome::Flagged
    } else {
        Outcome::Converged
    })
}
