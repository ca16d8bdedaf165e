use std::fs;
use std::path::Path;

use hadamard::means::{es_sahib_mean, hansen, inductive_mean, resampled_mean, EsSahibConfig};
use hadamard::sim::{monte_carlo_bound_check, run_experiment, ExperimentConfig, GeneratorKind, HeteroGenerator, Metric};
use hadamard::space::{check_metric_axioms, AxiomCheck, AxiomReport};
use hadamard::spd::random_spd;
use hadamard::{
    lim_palfia, BookPoint, EstimatorKind, Euclidean, EuclideanPoint, Execution, GeodesicSpace, OpenBook,
    SpdMatrix, SpdSpace,
};
use rand_chacha::ChaCha8Rng;

use crate::points::{parse_points, PointSet};
use crate::svg::render_charts;
use crate::{BoundArgs, CheckArgs, CliError, MeansArgs, SimulateArgs};

fn read_input(path: &Path, what: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Validation(format!("cannot read {what} '{}': {e}", path.display())))
}

/// File values first, then `HADAMARD_SEED` or `--seed`, then the other flags.
pub fn resolve_config(args: &SimulateArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::parse(&read_input(path, "config")?)?,
        None => ExperimentConfig::default(),
    };
    let overrides = [
        ("experiment", args.experiment.clone()),
        ("base_seed", args.seed.map(|v| v.to_string())),
        ("n_max", args.n_max.map(|v| v.to_string())),
        ("epsilon", args.epsilon.map(|v| v.to_string())),
        ("estimators", args.estimators.clone()),
        ("replications", args.replications.map(|v| v.to_string())),
        ("trace_stride", args.trace_stride.map(|v| v.to_string())),
        ("lp_budget_exponent", args.lp_budget_exponent.map(|v| v.to_string())),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let cfg = resolve_config(args)?;
    let execution = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let result = run_experiment(&cfg, execution)?;
    for e in &result.errors {
        eprintln!(
            "warning: {} replication {} n={}: {}",
            e.estimator, e.replication, e.n, e.error
        );
    }
    fs::create_dir_all(&args.output_dir)?;
    let csv = result.to_csv();
    fs::write(args.output_dir.join("results.csv"), &csv)?;
    fs::write(args.output_dir.join("config.txt"), cfg.to_key_values())?;
    if args.emit_svg {
        for (stem, doc) in render_charts(&csv)? {
            fs::write(args.output_dir.join(format!("{stem}.svg")), doc)?;
        }
    }
    println!(
        "{} rows written to {} ({} row errors)",
        result.rows.len(),
        args.output_dir.join("results.csv").display(),
        result.errors.len()
    );
    for &est in &cfg.estimators {
        if let Some((n, d)) = result.mean_curve(est, Metric::Intrinsic).last() {
            println!("{est:>12}  n = {n:<7} mean intrinsic distance {d:.6}");
        }
    }
    Ok(())
}

fn fmt_euclidean(p: &EuclideanPoint) -> String {
    let c: Vec<String> = p.0.iter().map(|x| format!("{x:.12}")).collect();
    format!("({})", c.join(", "))
}

fn fmt_spd(p: &SpdMatrix) -> String {
    let m = p.matrix();
    let rows: Vec<String> = (0..m.nrows())
        .map(|i| {
            let r: Vec<String> = (0..m.ncols()).map(|j| format!("{:.12}", m[(i, j)])).collect();
            format!("[{}]", r.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn fmt_book(p: &BookPoint) -> String {
    let spine: Vec<String> = p.spine.iter().map(|x| format!("{x:.12}")).collect();
    if p.on_spine() {
        format!("spine ({})", spine.join(", "))
    } else {
        format!("sheet {} t = {:.12} spine ({})", p.sheet, p.t, spine.join(", "))
    }
}

fn print_means<S: GeodesicSpace>(
    space: &S,
    pts: &[S::Point],
    estimators: &[EstimatorKind],
    args: &MeansArgs,
    show: impl Fn(&S::Point) -> String,
) -> Result<(), CliError> {
    for &est in estimators {
        let line = match est {
            EstimatorKind::Inductive => show(inductive_mean(space, pts)?.final_estimate()),
            EstimatorKind::Hansen => show(&hansen(space, pts)?),
            EstimatorKind::EsSahib => show(&es_sahib_mean(space, pts, &EsSahibConfig::default())?),
            EstimatorKind::Resampled => show(resampled_mean(space, pts, args.seed)?.final_estimate()),
            EstimatorKind::LimPalfia => {
                let k = args.lp_cycles.max(1) * pts.len();
                let lp = lim_palfia(space, pts, None, k)?;
                format!("{}  (k = {k}, certificate {:.3e})", show(&lp.estimate), lp.certificate())
            }
        };
        println!("{est:>12}  {line}");
    }
    Ok(())
}

pub fn means(args: &MeansArgs) -> Result<(), CliError> {
    let estimators: Vec<EstimatorKind> = args
        .estimators
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    if estimators.is_empty() {
        return Err(CliError::Validation("no estimator selected".into()));
    }
    let set = parse_points(&read_input(&args.file, "point list")?)?;
    println!("{} points", set.len());
    match &set {
        PointSet::Euclidean(s, p) => print_means(s, p, &estimators, args, fmt_euclidean),
        PointSet::Spd(s, p) => print_means(s, p, &estimators, args, fmt_spd),
        PointSet::Book(s, p) => print_means(s, p, &estimators, args, fmt_book),
    }
}

fn suites(which: &str, check: AxiomCheck) -> Result<Vec<(String, AxiomReport)>, CliError> {
    let mut out = Vec::new();
    let all = which == "all";
    if !matches!(which, "all" | "euclidean" | "spd" | "book") {
        return Err(CliError::Validation(format!(
            "unknown space '{which}' (expected euclidean, spd, book or all)"
        )));
    }
    if all || which == "euclidean" {
        for d in [1usize, 3] {
            let e = Euclidean::new(d);
            let sampler = move |r: &mut ChaCha8Rng| Ok(e.random_point(r, 5.0));
            out.push((format!("euclidean R^{d}"), check_metric_axioms(&e, &sampler, check)?));
        }
    }
    if all || which == "spd" {
        for d in [2usize, 5] {
            let sampler = move |r: &mut ChaCha8Rng| random_spd(d, 100.0, r);
            out.push((format!("spd dim {d}"), check_metric_axioms(&SpdSpace::new(d), &sampler, check)?));
        }
    }
    if all || which == "book" {
        for (k, d) in [(3usize, 1usize), (4, 2)] {
            let book = OpenBook::new(k, d)?;
            let sampler = move |r: &mut ChaCha8Rng| Ok(book.random_point(r));
            out.push((format!("book B_{k}^{d}"), check_metric_axioms(&book, &sampler, check)?));
        }
    }
    Ok(out)
}

pub fn check(args: &CheckArgs) -> Result<(), CliError> {
    if !(args.tol >= 0.0) {
        return Err(CliError::Validation(format!("tolerance must be non-negative, got {}", args.tol)));
    }
    let check = AxiomCheck::new(args.cases, args.tol).seed(args.seed);
    let reports = suites(args.space.trim(), check)?;
    println!("{:<16} {:<10} {:>12}  status", "space", "property", "worst");
    let mut failed = 0;
    for (name, report) in &reports {
        for (prop, worst) in report.entries() {
            let ok = worst <= report.tol;
            failed += (!ok) as usize;
            println!("{name:<16} {prop:<10} {worst:>12.3e}  {}", if ok { "pass" } else { "FAIL" });
        }
    }
    println!("{} cases per space, tolerance {:e}", args.cases, args.tol);
    if failed > 0 {
        return Err(CliError::CheckFailed(format!("{failed} properties exceeded the tolerance")));
    }
    Ok(())
}

pub fn bound(args: &BoundArgs) -> Result<(), CliError> {
    let kind: GeneratorKind = args.generator.parse()?;
    let grid: Vec<usize> = args
        .grid
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("grid entry '{}' is not a positive integer", s.trim())))
        })
        .collect::<Result<_, _>>()?;
    let report = monte_carlo_bound_check(&HeteroGenerator::new(kind), &grid, args.reps, args.seed, Execution::Parallel)?;
    println!("{kind}, {} replications", report.replications);
    println!("{:>8} {:>14} {:>12} {:>14}  status", "n", "E d(S_n,mu)^2", "3 sigma", "bound");
    for r in &report.rows {
        println!(
            "{:>8} {:>14.6e} {:>12.3e} {:>14.6e}  {}",
            r.n,
            r.empirical,
            r.half_width,
            r.bound,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    if !report.pass() {
        return Err(CliError::CheckFailed("empirical error exceeds the bound".into()));
    }
    Ok(())
}
