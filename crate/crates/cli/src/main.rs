use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use exchlist_core::classic::{
    gsea_enrichment, hypergeometric_lists, hypergeometric_test, jurman_distance, overlap_cosine,
    pearson_reciprocal_distance, pogr, yang_similarity, ComparisonResult, GseaPermutations, Method,
};
use exchlist_core::evaluation::{
    concordance_experiment, cross_validated_auc, distance_stability, exchangeability_for,
    mean_pairwise_overlap, synth_example, ExperimentConfig, RankingMethod,
};
use exchlist_core::exchangeability::{
    exchangeability_matrix, exchangeability_plot_data, Bandwidth, Estimator, ExchangeabilityMatrix, KdeSettings,
    MatrixConfig, Measure, Metric, PairSamples,
};
use exchlist_core::framework::{
    contributions, correlation_v_matrix, cosine_dissimilarity, extended_ranking, list_vector, Identity,
    PositionMatrix, Similarity, Summarizer, WeightMatrix, DEFAULT_B_SQUARED,
};
use exchlist_core::io;
use exchlist_core::rng::substream;
use exchlist_core::stats::{build_position_vectors, LabeledDataset, PositionVectorConfig, Scorer, StatisticKind};
use exchlist_core::{Direction, Error, GeneList, Ranking, Universe};

const WORKERS_ENV: &str = "EXCHLIST_WORKERS";

#[derive(Parser)]
#[command(name = "exchlist", version, about = "Stabilize and compare ranked gene lists")]
struct Cli {
    /// Worker threads (0 = all cores); overridden by EXCHLIST_WORKERS.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score and rank genes by a two-class statistic.
    Rank(RankArgs),
    /// Rankings of stratified subsamples, one column per round.
    Posvec(PosvecArgs),
    /// Pairwise exchangeability (or correlation) matrix.
    Exch(ExchArgs),
    /// Extended list vector and ranking.
    Extend(ExtendArgs),
    /// Compare two lists with the framework or a classic method.
    Compare(CompareArgs),
    /// Forward and reflected points of one gene pair.
    Plotdata(PlotArgs),
    /// Experiment harness.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Synthetic two-group data with planted gene blocks.
    Synth(SynthArgs),
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Concordance curves of bootstrap replicate rankings.
    Concordance(ConcordanceArgs),
    /// Mean pairwise top-k overlap of bootstrap replicate rankings.
    Overlap(OverlapArgs),
    /// Distances between replicate list vectors within and across datasets.
    DistStability(DistArgs),
    /// Cross-validated AUC of a centroid classifier on selected genes.
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Expression TSV (header: sample ids; first column: gene).
    #[arg(long)]
    expr: PathBuf,
    /// Labels TSV (`sample\tclass`).
    #[arg(long)]
    labels: PathBuf,
}

#[derive(Args, Clone)]
struct StatArgs {
    /// snr or t.
    #[arg(long, default_value = "snr")]
    statistic: StatisticKind,
    /// Class ranked first (default: first class in sorted order).
    #[arg(long)]
    positive_class: Option<String>,
}

#[derive(Args, Clone)]
struct SubsampleArgs {
    /// Subsampling rounds B.
    #[arg(long, default_value_t = 20)]
    subsample_b: usize,
    /// Fraction of each class kept per round.
    #[arg(long, default_value_t = 2.0 / 3.0)]
    fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct EstimatorArgs {
    /// pvar, ed-max, ed-mean, oed-max or oed-mean.
    #[arg(long, default_value = "oed-mean")]
    measure: Measure,
    /// euclidean, manhattan or chebyshev.
    #[arg(long, default_value = "euclidean")]
    metric: Metric,
    /// Monte-Carlo repeats of the null score.
    #[arg(long, default_value_t = 100)]
    null_repeats: usize,
    /// Scores at or below this value are dropped.
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// Fixed KDE bandwidth for pvar (default: rule of thumb).
    #[arg(long)]
    bandwidth: Option<f64>,
    /// KDE lattice points per axis for pvar.
    #[arg(long, default_value_t = 128)]
    grid_resolution: usize,
}

impl EstimatorArgs {
    fn estimator(&self) -> Estimator {
        Estimator {
            measure: self.measure,
            metric: self.metric,
            kde: KdeSettings {
                bandwidth: self.bandwidth.map_or(Bandwidth::Auto, Bandwidth::Fixed),
                grid_resolution: self.grid_resolution,
            },
        }
    }
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    stat: StatArgs,
    #[command(flatten)]
    subsample: SubsampleArgs,
    #[command(flatten)]
    estimator: EstimatorArgs,
    /// Bootstrap replicates.
    #[arg(long, default_value_t = 10)]
    replicates: usize,
    /// Position-value bandwidth b².
    #[arg(long, default_value_t = DEFAULT_B_SQUARED)]
    b2: f64,
    /// Subsample rankings aggregated by median and rank product.
    #[arg(long, default_value_t = 100)]
    aggregation_rounds: usize,
    /// Permute class labels (null control).
    #[arg(long)]
    permute_labels: bool,
}

impl ExperimentArgs {
    fn config(&self, workers: usize) -> ExperimentConfig {
        ExperimentConfig {
            boot_replicates: self.replicates,
            subsample_rounds: self.subsample.subsample_b,
            fraction: self.subsample.fraction,
            b_squared: self.b2,
            aggregation_rounds: self.aggregation_rounds,
            seed: self.subsample.seed,
            estimator: self.estimator.estimator(),
            null_repeats: self.estimator.null_repeats,
            threshold: self.estimator.threshold,
            statistic: self.stat.statistic,
            positive_class: self.stat.positive_class.clone(),
            permute_labels: self.permute_labels,
            resample_replicates: true,
            workers,
        }
    }
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    stat: StatArgs,
    /// Ranking TSV (`gene\tposition\tscore`).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PosvecArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    stat: StatArgs,
    #[command(flatten)]
    subsample: SubsampleArgs,
    /// Permute class labels before every round.
    #[arg(long)]
    permute_labels: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExchArgs {
    #[arg(long)]
    expr: PathBuf,
    /// Required unless --posvec is given.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Precomputed position vectors; --expr then only supplies gene ids.
    #[arg(long)]
    posvec: Option<PathBuf>,
    /// Absolute Pearson correlation instead of exchangeability.
    #[arg(long)]
    correlation: bool,
    #[command(flatten)]
    stat: StatArgs,
    #[command(flatten)]
    subsample: SubsampleArgs,
    #[command(flatten)]
    estimator: EstimatorArgs,
    /// Triplet TSV with a metadata line.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExtendArgs {
    /// Expression TSV supplying gene ids.
    #[arg(long)]
    expr: PathBuf,
    /// Ranking TSV with scores.
    #[arg(long)]
    ranking: PathBuf,
    /// Similarity matrix; identity when omitted.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_B_SQUARED)]
    b2: f64,
    /// max-magnitude, sup-norm, sum or min-abs-nonzero.
    #[arg(long, default_value = "max-magnitude")]
    summarizer: Summarizer,
    /// List vector TSV (`gene\tvalue`).
    #[arg(long)]
    out_vector: PathBuf,
    /// Extended ranking TSV.
    #[arg(long)]
    out_ranking: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// framework, overlap-cosine, pogr, hypergeometric, gsea, jurman, pearson or yang.
    #[arg(long)]
    method: String,
    /// Expression TSV supplying gene ids.
    #[arg(long)]
    expr: Option<PathBuf>,
    /// Universe size (hypergeometric counts).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    /// Observed overlap.
    #[arg(long)]
    k: Option<usize>,
    /// Gene list files, one id per line in list order.
    #[arg(long)]
    list1: Option<PathBuf>,
    #[arg(long)]
    list2: Option<PathBuf>,
    /// Ranking TSVs.
    #[arg(long)]
    ranking1: Option<PathBuf>,
    #[arg(long)]
    ranking2: Option<PathBuf>,
    /// Take lists as the top entries of the rankings.
    #[arg(long)]
    top: Option<usize>,
    /// Similarity matrix (framework) or relation (pogr).
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_B_SQUARED)]
    b2: f64,
    #[arg(long, default_value = "max-magnitude")]
    summarizer: Summarizer,
    /// Per-gene contributions TSV (framework).
    #[arg(long)]
    contributions: Option<PathBuf>,
    /// Enrichment weight exponent.
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// Label permutations for an enrichment p-value (needs --labels).
    #[arg(long, default_value_t = 0)]
    permutations: usize,
    #[arg(long)]
    labels: Option<PathBuf>,
    #[command(flatten)]
    stat: StatArgs,
    /// Module file, one tab-separated module per line.
    #[arg(long)]
    modules: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    expr: PathBuf,
    #[arg(long)]
    posvec: PathBuf,
    #[arg(long)]
    gene_i: String,
    #[arg(long)]
    gene_j: String,
    /// CSV `set,round,x,y`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ConcordanceArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Receives concordance_<method>.csv per method.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct OverlapArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Receives overlap_<method>.csv per method.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct DistArgs {
    #[arg(long)]
    expr_a: PathBuf,
    #[arg(long)]
    labels_a: PathBuf,
    #[arg(long)]
    expr_b: PathBuf,
    #[arg(long)]
    labels_b: PathBuf,
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// CSV `comparison,variant,distance`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Genes selected from each end of the ranking.
    #[arg(long, default_values_t = [10, 30])]
    k: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_values = ["non-extended", "extended"])]
    method: Vec<RankingMethod>,
}

#[derive(Args)]
struct SynthArgs {
    /// 1 or 2.
    #[arg(long)]
    example: u8,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Receives expression.tsv and labels.tsv.
    #[arg(long)]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let workers = match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse() {
            Ok(w) => w,
            Err(_) => {
                eprintln!("error: {WORKERS_ENV}='{v}' is not a worker count");
                return ExitCode::from(1);
            }
        },
        Err(_) => cli.workers,
    };
    match run(cli.command, workers) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) => 1,
                _ => 2,
            })
        }
    }
}

type Result<T> = exchlist_core::Result<T>;

fn run(command: Command, workers: usize) -> Result<()> {
    match command {
        Command::Rank(a) => rank(a),
        Command::Posvec(a) => posvec(a, workers),
        Command::Exch(a) => exch(a, workers),
        Command::Extend(a) => extend(a),
        Command::Compare(a) => compare(a, workers),
        Command::Plotdata(a) => plotdata(a),
        Command::Eval(EvalCommand::Concordance(a)) => eval_concordance(a, workers),
        Command::Eval(EvalCommand::Overlap(a)) => eval_overlap(a, workers),
        Command::Eval(EvalCommand::DistStability(a)) => eval_dist(a, workers),
        Command::Eval(EvalCommand::Classify(a)) => eval_classify(a, workers),
        Command::Synth(a) => synth(a),
    }
}

fn statistic(stat: &StatArgs, ds: &LabeledDataset) -> exchlist_core::stats::Statistic {
    let positive = stat.positive_class.clone().unwrap_or_else(|| ds.classes()[0].clone());
    exchlist_core::stats::Statistic::new(stat.statistic, positive)
}

fn load(data: &DataArgs) -> Result<LabeledDataset> {
    io::load_dataset(&data.expr, &data.labels)
}

fn rank(a: RankArgs) -> Result<()> {
    let ds = load(&a.data)?;
    let r = statistic(&a.stat, &ds).rank(&ds)?;
    io::save_ranking(&a.out, ds.universe(), &r)
}

fn posvec(a: PosvecArgs, workers: usize) -> Result<()> {
    let ds = load(&a.data)?;
    let pv = build_position_vectors(
        &ds,
        &statistic(&a.stat, &ds),
        &PositionVectorConfig {
            rounds: a.subsample.subsample_b,
            fraction: a.subsample.fraction,
            seed: a.subsample.seed,
            permute_each_round: a.permute_labels,
            workers,
        },
    )?;
    io::save_position_vectors(&a.out, ds.universe(), &pv)
}

fn exch(a: ExchArgs, workers: usize) -> Result<()> {
    let (universe, mx) = if let Some(pv_path) = &a.posvec {
        if a.correlation {
            return Err(Error::Config("--correlation needs expression data, not --posvec".into()));
        }
        let universe = io::load_universe(&a.expr)?;
        let pv = io::load_position_vectors(pv_path, &universe)?;
        let mx = exchangeability_matrix(
            &pv,
            &MatrixConfig {
                estimator: a.estimator.estimator(),
                null_repeats: a.estimator.null_repeats,
                seed: substream(a.subsample.seed, 1),
                threshold: a.estimator.threshold,
                workers,
            },
        )?;
        (universe, mx)
    } else {
        let labels = a
            .labels
            .as_ref()
            .ok_or_else(|| Error::Config("--labels is required without --posvec".into()))?;
        let ds = io::load_dataset(&a.expr, labels)?;
        let mx = if a.correlation {
            correlation_v_matrix(&ds, a.estimator.threshold)?
        } else {
            let cfg = ExperimentConfig {
                subsample_rounds: a.subsample.subsample_b,
                fraction: a.subsample.fraction,
                seed: a.subsample.seed,
                estimator: a.estimator.estimator(),
                null_repeats: a.estimator.null_repeats,
                threshold: a.estimator.threshold,
                statistic: a.stat.statistic,
                positive_class: a.stat.positive_class.clone(),
                workers,
                ..ExperimentConfig::default()
            };
            exchangeability_for(&ds, &cfg, cfg.seed)?
        };
        (Universe::clone(ds.universe()), mx)
    };
    io::save_exchangeability_matrix(&a.out, &universe, &mx)
}

fn load_similarity(path: Option<&Path>, universe: &Universe) -> Result<Box<dyn Similarity>> {
    Ok(match path {
        Some(p) => Box::new(io::load_exchangeability_matrix(p, universe)?),
        None => Box::new(Identity(universe.len())),
    })
}

fn extend(a: ExtendArgs) -> Result<()> {
    let universe = io::load_universe(&a.expr)?;
    let r = io::load_ranking(&a.ranking, &universe)?;
    let v = load_similarity(a.matrix.as_deref(), &universe)?;
    let l = list_vector(
        &PositionMatrix::rank_based(&r, a.b2)?,
        v.as_ref(),
        &WeightMatrix::identity(universe.len()),
        a.summarizer,
    )?;
    io::save_list_vector(&a.out_vector, &universe, l.values())?;
    io::save_ranking(&a.out_ranking, &universe, &extended_ranking(&l)?)
}

fn need<'a, T>(v: &'a Option<T>, flag: &str, method: &str) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| Error::Config(format!("method {method} needs --{flag}")))
}

struct CompareInputs {
    universe: Universe,
    a: CompareArgs,
}

impl CompareInputs {
    fn ranking(&self, which: u8) -> Result<Ranking> {
        let path = if which == 1 { &self.a.ranking1 } else { &self.a.ranking2 };
        io::load_ranking(need(path, &format!("ranking{which}"), &self.a.method)?, &self.universe)
    }

    /// From `--list{which}`, or the top of `--ranking{which}` with `--top`.
    fn list(&self, which: u8) -> Result<GeneList> {
        let path = if which == 1 { &self.a.list1 } else { &self.a.list2 };
        match (path, self.a.top) {
            (Some(p), _) => GeneList::ordered(io::load_gene_list(p, &self.universe)?),
            (None, Some(k)) => GeneList::top_of(&self.ranking(which)?, k),
            (None, None) => Err(Error::Config(format!(
                "method {} needs --list{which} or --ranking{which} with --top",
                self.a.method
            ))),
        }
    }

    fn matrix(&self) -> Result<ExchangeabilityMatrix> {
        io::load_exchangeability_matrix(need(&self.a.matrix, "matrix", &self.a.method)?, &self.universe)
    }
}

fn print_result(r: &ComparisonResult) {
    let mut row = format!("{}\t{}", r.method, r.value);
    if let Some(p) = r.p_value.filter(|_| r.method != Method::Hypergeometric) {
        row.push_str(&format!("\tp={p}"));
    }
    if let Some(k) = r.overlap {
        row.push_str(&format!("\toverlap={k}"));
    }
    println!("{row}");
}

fn compare(a: CompareArgs, workers: usize) -> Result<()> {
    if a.method == "framework" {
        return compare_framework(a);
    }
    let method: Method = a.method.parse()?;
    if method == Method::Hypergeometric && a.m.is_some() {
        let [m, n1, n2, k] = [("m", a.m), ("n1", a.n1), ("n2", a.n2), ("k", a.k)]
            .map(|(flag, v)| v.ok_or_else(|| Error::Config(format!("hypergeometric counts need --{flag}"))));
        let (m, n1, n2, k) = (m?, n1?, n2?, k?);
        let p = hypergeometric_test(m, n1, n2, k)?;
        print_result(&ComparisonResult {
            p_value: Some(p),
            overlap: Some(k),
            ..ComparisonResult::scalar(method, p)
        });
        return Ok(());
    }
    let expr = need(&a.expr, "expr", &a.method)?.clone();
    let inputs = CompareInputs {
        universe: io::load_universe(&expr)?,
        a,
    };
    let m = inputs.universe.len();
    let result = match method {
        Method::OverlapCosine => ComparisonResult::scalar(method, overlap_cosine(&inputs.list(1)?, &inputs.list(2)?, m)?),
        Method::Pogr => ComparisonResult::scalar(method, pogr(&inputs.list(1)?, &inputs.list(2)?, &inputs.matrix()?)?),
        Method::Hypergeometric => hypergeometric_lists(&inputs.list(1)?, &inputs.list(2)?, m)?,
        Method::Gsea => {
            let r = inputs.ranking(1)?;
            let set = match &inputs.a.list1 {
                Some(p) => GeneList::unordered(io::load_gene_list(p, &inputs.universe)?),
                None => return Err(Error::Config("method gsea needs --list1 as the gene set".into())),
            };
            if inputs.a.permutations > 0 {
                let labels = need(&inputs.a.labels, "labels", "gsea")?;
                let ds = io::load_dataset(&expr, labels)?;
                let scorer = statistic(&inputs.a.stat, &ds);
                let perms = GseaPermutations {
                    dataset: &ds,
                    scorer: &scorer,
                    count: inputs.a.permutations,
                    seed: inputs.a.seed,
                    workers,
                };
                gsea_enrichment(&r, &set, inputs.a.q, Some(&perms))?
            } else {
                gsea_enrichment(&r, &set, inputs.a.q, None)?
            }
        }
        Method::Jurman => {
            let modules = match &inputs.a.modules {
                Some(p) => load_modules(p, &inputs.universe)?,
                None => Vec::new(),
            };
            ComparisonResult::scalar(method, jurman_distance(&inputs.list(1)?, &inputs.list(2)?, m, &modules)?)
        }
        Method::PearsonReciprocal => {
            ComparisonResult::scalar(method, pearson_reciprocal_distance(&inputs.list(1)?, &inputs.list(2)?, m)?)
        }
        Method::Yang => ComparisonResult::scalar(
            method,
            yang_similarity(&inputs.ranking(1)?, &inputs.ranking(2)?, inputs.a.alpha, inputs.a.beta)?,
        ),
    };
    print_result(&result);
    Ok(())
}

fn load_modules(path: &Path, universe: &Universe) -> Result<Vec<Vec<usize>>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split('\t').map(|g| universe.require(g.trim())).collect())
        .collect()
}

fn compare_framework(a: CompareArgs) -> Result<()> {
    let expr = need(&a.expr, "expr", "framework")?.clone();
    let inputs = CompareInputs {
        universe: io::load_universe(&expr)?,
        a,
    };
    let (r1, r2) = (inputs.ranking(1)?, inputs.ranking(2)?);
    let v = load_similarity(inputs.a.matrix.as_deref(), &inputs.universe)?;
    let w = WeightMatrix::identity(inputs.universe.len());
    let vector = |r: &Ranking| {
        list_vector(&PositionMatrix::rank_based(r, inputs.a.b2)?, v.as_ref(), &w, inputs.a.summarizer)
    };
    let (l1, l2) = (vector(&r1)?, vector(&r2)?);
    let d = cosine_dissimilarity(l1.values(), l2.values())?;
    if let Some(path) = &inputs.a.contributions {
        let rows = contributions(l1.values(), l2.values(), Some((&r1, &r2)))?;
        io::save_contributions(path, &inputs.universe, &rows)?;
    }
    println!("framework\t{d}");
    Ok(())
}

fn plotdata(a: PlotArgs) -> Result<()> {
    let universe = io::load_universe(&a.expr)?;
    let pv = io::load_position_vectors(&a.posvec, &universe)?;
    let (i, j) = (universe.require(&a.gene_i)?, universe.require(&a.gene_j)?);
    let ps = PairSamples::new(pv.row(i), pv.row(j), universe.len())?;
    io::save_plot_csv(&a.out, &exchangeability_plot_data(&ps))
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn eval_concordance(a: ConcordanceArgs, workers: usize) -> Result<()> {
    let ds = load(&a.data)?;
    let exp = concordance_experiment(&ds, &a.experiment.config(workers))?;
    create_dir(&a.out_dir)?;
    for method in RankingMethod::FIVE {
        let top = exp.curve(method, Direction::Top)?;
        let bottom = exp.curve(method, Direction::Bottom)?;
        io::save_concordance_csv(a.out_dir.join(format!("concordance_{method}.csv")), &top, &bottom)?;
    }
    Ok(())
}

fn eval_overlap(a: OverlapArgs, workers: usize) -> Result<()> {
    let ds = load(&a.data)?;
    let exp = concordance_experiment(&ds, &a.experiment.config(workers))?;
    create_dir(&a.out_dir)?;
    println!("method\tmean_overlap_top\tmean_overlap_bottom");
    for (method, rankings) in &exp.rankings {
        let top = mean_pairwise_overlap(rankings, a.k, Direction::Top)?;
        let bottom = mean_pairwise_overlap(rankings, a.k, Direction::Bottom)?;
        io::save_overlap_csv(a.out_dir.join(format!("overlap_{method}.csv")), &top, &bottom)?;
        println!("{method}\t{}\t{}", top.mean, bottom.mean);
    }
    Ok(())
}

fn eval_dist(a: DistArgs, workers: usize) -> Result<()> {
    let ds_a = io::load_dataset(&a.expr_a, &a.labels_a)?;
    let ds_b = io::load_dataset(&a.expr_b, &a.labels_b)?;
    let d = distance_stability(&ds_a, &ds_b, &a.experiment.config(workers))?;
    io::save_distance_csv(&a.out, &d)
}

fn eval_classify(a: ClassifyArgs, workers: usize) -> Result<()> {
    let ds = load(&a.data)?;
    let cfg = a.experiment.config(workers);
    println!("method\tk\tauc");
    for &method in &a.method {
        for &k in &a.k {
            let auc = cross_validated_auc(&ds, method, k, a.folds, &cfg, cfg.seed)?;
            println!("{method}\t{k}\t{auc}");
        }
    }
    Ok(())
}

fn synth(a: SynthArgs) -> Result<()> {
    let ds = synth_example(a.example, a.seed)?;
    create_dir(&a.out_dir)?;
    io::save_expression_tsv(a.out_dir.join("expression.tsv"), &ds)?;
    io::save_labels(a.out_dir.join("labels.tsv"), &ds)
}
