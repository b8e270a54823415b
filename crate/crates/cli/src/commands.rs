use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use learncomp::analysis::{
    lemma1_search, sample_complexity, vc_dimension, DeltaMode, DistributionSpec, GammaSpec, SampleComplexityReport,
};
use learncomp::machine::{
    enumerate_class, enumerate_programs, first_program, min_encoding_length, program_len, toy_complexity,
    ComplexityResult, FunctionTable, LabellingProgram, ProgramIndexer,
};
use learncomp::predictors::{predictor_by_name, DEFAULT_ERM_CAP};
use learncomp::reduction::{
    compress, compressibility_stats, compressor_by_name, decompress, CompressorConfig, StatsSource, TupleSearch,
};
use learncomp::scalar::parse_scalar;
use learncomp::{Approx, BitString, Exact, Scalar};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use crate::payload::{self, RawFormat};
use crate::{Command, Outcome, Table};

/// Bad flag values discovered after parsing.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Program-length cap shared by all searches; `LEARNCOMP_DEFAULT_CAP` overrides it.
const CAP_ENV: &str = "LEARNCOMP_DEFAULT_CAP";

#[derive(Debug, Args, Serialize)]
pub struct ReductionOpts {
    /// Predictor: erm, pointwise or prefix-nn.
    #[arg(long, default_value = "pointwise")]
    pub predictor: String,
    /// Program-length cap (bits) for the ERM predictor.
    #[arg(long, env = CAP_ENV, default_value_t = DEFAULT_ERM_CAP)]
    pub erm_cap: u64,
    /// Error budget fraction ε, as `a/b` or a decimal.
    #[arg(long, default_value = "1/20")]
    pub eps: String,
    /// Tuple search: exhaustive, capped:LIMIT or sampled:COUNT:SEED.
    #[arg(long, default_value = "exhaustive")]
    pub search: String,
}

impl ReductionOpts {
    fn config(&self) -> Result<CompressorConfig> {
        let eps: Ratio<i64> = parse_scalar(&self.eps).map_err(|e| usage(e.to_string()))?;
        let epsilon = Ratio::new(*eps.numer() as u64, *eps.denom() as u64);
        let config = CompressorConfig { epsilon, search: parse_search(&self.search)? };
        config.validate().map_err(|e| usage(e.to_string()))?;
        Ok(config)
    }
}

fn parse_search(s: &str) -> Result<TupleSearch> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.parse::<u64>().map_err(|_| usage(format!("bad number `{p}` in --search {s}")));
    Ok(match parts.as_slice() {
        ["exhaustive"] => TupleSearch::Exhaustive,
        ["capped", limit] => TupleSearch::Capped(num(limit)?),
        ["sampled", count, seed] => TupleSearch::Sampled { count: num(count)?, seed: num(seed)? },
        _ => return Err(usage(format!("--search expects exhaustive, capped:LIMIT or sampled:COUNT:SEED, got `{s}`"))),
    })
}

#[derive(Debug, Args, Serialize)]
pub struct CompressArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub opts: ReductionOpts,
    #[arg(long)]
    pub input: PathBuf,
    /// Payload file (header byte + packed bits).
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = RawFormat::Bytes)]
    pub input_format: RawFormat,
}

#[derive(Debug, Args, Serialize)]
pub struct DecompressArgs {
    #[arg(long, default_value = "pointwise")]
    pub predictor: String,
    #[arg(long, env = CAP_ENV, default_value_t = DEFAULT_ERM_CAP)]
    pub erm_cap: u64,
    /// Payload file written by `compress`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = RawFormat::Bytes)]
    pub output_format: RawFormat,
}

#[derive(Debug, Args, Serialize)]
pub struct StatsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub opts: ReductionOpts,
    /// String length.
    #[arg(long)]
    pub m: usize,
    /// exhaustive or sampled:COUNT:SEED.
    #[arg(long, default_value = "exhaustive")]
    pub source: String,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleComplexityArgs {
    #[arg(long, default_value = "pointwise")]
    pub predictor: String,
    #[arg(long, env = CAP_ENV, default_value_t = DEFAULT_ERM_CAP)]
    pub erm_cap: u64,
    /// Target: a truth table such as `0110`, or a program such as
    /// `t=2 (xor (var 0) (var 1))`.
    #[arg(long)]
    pub eta: String,
    #[arg(long)]
    pub eps: String,
    #[arg(long)]
    pub delta: String,
    /// uniform, bernoulli:P, point:X or explicit:W0,W1,...
    #[arg(long, default_value = "uniform")]
    pub dist: String,
    #[arg(long, default_value_t = 64)]
    pub n_max: usize,
    /// exact or mc:TRIALS:SEED.
    #[arg(long, default_value = "exact")]
    pub mode: String,
    /// Program-length cap used to compute l(η).
    #[arg(long, env = CAP_ENV, default_value_t = DEFAULT_ERM_CAP)]
    pub cap: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct VcArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub t: usize,
    #[arg(long, env = CAP_ENV, default_value_t = DEFAULT_ERM_CAP)]
    pub cap: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct Lemma1Args {
    /// prepend-bit, identity, zero-run or reduction:<predictor>.
    #[arg(long, default_value = "prepend-bit")]
    pub compressor: String,
    #[arg(long, default_value = "2log+8")]
    pub gamma: String,
    #[arg(long)]
    pub len_min: usize,
    #[arg(long)]
    pub len_max: usize,
    /// Toy-complexity search cap (bits).
    #[arg(long, env = CAP_ENV, default_value_t = DEFAULT_ERM_CAP)]
    pub cap: u64,
    #[arg(long, default_value_t = DEFAULT_ERM_CAP)]
    pub erm_cap: u64,
    #[arg(long, default_value = "1/20")]
    pub eps: String,
    #[arg(long, default_value = "exhaustive")]
    pub search: String,
}

#[derive(Debug, Args, Serialize)]
pub struct ComplexityArgs {
    /// String whose toy complexity is wanted.
    #[arg(long, conflicts_with = "eta", required_unless_present = "eta")]
    pub string: Option<String>,
    /// Target whose program length l(η) is wanted.
    #[arg(long)]
    pub eta: Option<String>,
    #[arg(long, env = CAP_ENV, default_value_t = DEFAULT_ERM_CAP)]
    pub cap: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct EnumerateArgs {
    /// Longest program (bits) to list.
    #[arg(long)]
    pub max_bits: usize,
    /// Stop after this many programs.
    #[arg(long)]
    pub limit: Option<usize>,
}

pub fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Compress(a) => run_compress(a),
        Command::Decompress(a) => run_decompress(a),
        Command::Stats(a) => run_stats(a),
        Command::SampleComplexity(a) => run_sample_complexity(a),
        Command::Vc(a) => run_vc(a),
        Command::Lemma1(a) => run_lemma1(a),
        Command::Complexity(a) => run_complexity(a),
        Command::Enumerate(a) => run_enumerate(a),
    }
}

fn plain(result: Value) -> Outcome {
    Outcome { result, table: None }
}

fn run_compress(a: &CompressArgs) -> Result<Outcome> {
    let config = a.opts.config()?;
    let phi = predictor_by_name(&a.opts.predictor, a.opts.erm_cap)?;
    let y = payload::read_raw(&a.input, a.input_format)?;
    let c = compress(phi.as_ref(), &y, &config)?;
    payload::write_payload(&a.output, &c.bits)?;
    let mut result = json!({
        "input_bits": y.len(),
        "output_bits": c.len(),
        "branch": c.branch,
    });
    if let Some(parts) = &c.coded {
        result["coded"] = serde_json::to_value(parts)?;
    }
    Ok(plain(result))
}

fn run_decompress(a: &DecompressArgs) -> Result<Outcome> {
    let phi = predictor_by_name(&a.predictor, a.erm_cap)?;
    let bits = payload::read_payload(&a.input)?;
    let y = decompress(phi.as_ref(), &bits).context("decoding payload")?;
    payload::write_raw(&a.output, &y, a.output_format)?;
    Ok(plain(json!({ "input_bits": bits.len(), "output_bits": y.len() })))
}

fn run_stats(a: &StatsArgs) -> Result<Outcome> {
    let config = a.opts.config()?;
    let phi = predictor_by_name(&a.opts.predictor, a.opts.erm_cap)?;
    let source = match a.source.split(':').collect::<Vec<_>>().as_slice() {
        ["exhaustive"] => StatsSource::Exhaustive,
        ["sampled", count, seed] => StatsSource::Sampled {
            count: count.parse().map_err(|_| usage(format!("bad count in --source {}", a.source)))?,
            seed: seed.parse().map_err(|_| usage(format!("bad seed in --source {}", a.source)))?,
        },
        _ => return Err(usage(format!("--source expects exhaustive or sampled:COUNT:SEED, got `{}`", a.source))),
    };
    let stats = compressibility_stats(phi.as_ref(), a.m, &config, &source)?;
    let rows = stats.length_histogram.iter().map(|(len, count)| vec![len.to_string(), count.to_string()]).collect();
    Ok(Outcome {
        result: serde_json::to_value(&stats)?,
        table: Some(Table { header: vec!["output_length", "count"], rows }),
    })
}

fn parse_eta(text: &str) -> Result<FunctionTable> {
    let text = text.trim();
    if !text.is_empty() && text.chars().all(|c| c == '0' || c == '1') {
        let values: BitString = text.parse()?;
        return FunctionTable::from_values(values).map_err(|e| usage(e.to_string()));
    }
    let program: LabellingProgram = text.parse().map_err(|e: learncomp::Error| usage(e.to_string()))?;
    Ok(program.table()?)
}

fn parse_dist<S: Scalar>(text: &str, t: usize) -> Result<DistributionSpec<S>> {
    let (kind, arg) = text.split_once(':').unwrap_or((text, ""));
    let dist = match kind {
        "uniform" if arg.is_empty() => DistributionSpec::Uniform,
        "bernoulli" => DistributionSpec::ProductBernoulli(parse_scalar(arg)?),
        "point" => DistributionSpec::point_mass(arg.parse()?),
        "explicit" => DistributionSpec::Explicit(arg.split(',').map(parse_scalar).collect::<Result<_, _>>()?),
        _ => {
            return Err(usage(format!("--dist expects uniform, bernoulli:P, point:X or explicit:W,..., got `{text}`")))
        }
    };
    dist.weights(t).map_err(|e| usage(e.to_string()))?;
    Ok(dist)
}

fn run_sample_complexity(a: &SampleComplexityArgs) -> Result<Outcome> {
    let phi = predictor_by_name(&a.predictor, a.erm_cap)?;
    let eta = parse_eta(&a.eta)?;
    let mode: DeltaMode = a.mode.parse().map_err(|e: learncomp::Error| usage(e.to_string()))?;
    let l_eta = if eta.t() <= 6 { first_program(&eta, a.cap)?.map(|fp| fp.length) } else { None };
    fn finish<S: Scalar>(r: SampleComplexityReport<S>, l_eta: Option<u32>) -> Result<Outcome> {
        let r = match l_eta {
            Some(l) => r.with_length(l),
            None => r,
        };
        let rows = r.deltas.iter().map(|p| vec![p.n.to_string(), p.delta_n.to_string()]).collect();
        Ok(Outcome { result: serde_json::to_value(&r)?, table: Some(Table { header: vec!["n", "delta_n"], rows }) })
    }
    match mode {
        DeltaMode::Exact => {
            let dist = parse_dist::<Exact>(&a.dist, eta.t())?;
            let r = sample_complexity(
                phi.as_ref(),
                &eta,
                parse_scalar(&a.delta)?,
                parse_scalar(&a.eps)?,
                &dist,
                a.n_max,
                mode,
            )?;
            finish(r, l_eta)
        }
        DeltaMode::MonteCarlo { .. } => {
            let dist = parse_dist::<Approx>(&a.dist, eta.t())?;
            let r = sample_complexity(
                phi.as_ref(),
                &eta,
                parse_scalar(&a.delta)?,
                parse_scalar(&a.eps)?,
                &dist,
                a.n_max,
                mode,
            )?;
            finish(r, l_eta)
        }
    }
}

fn run_vc(a: &VcArgs) -> Result<Outcome> {
    let class = enumerate_class(a.k, a.t, a.cap)?;
    let vc = vc_dimension(&class)?;
    let log2_size = (class.len() as f64).log2();
    Ok(plain(json!({
        "k": a.k,
        "t": a.t,
        "class_size": class.len(),
        "vc_dimension": vc,
        "log2_class_size": log2_size,
        "vc_within_log2_class_size": class.is_empty() || (1usize << vc) <= class.len(),
        "class": class.iter().map(|f| f.values().to_string()).collect::<Vec<_>>(),
    })))
}

fn run_lemma1(a: &Lemma1Args) -> Result<Outcome> {
    let gamma: GammaSpec = a.gamma.parse().map_err(|e: learncomp::Error| usage(e.to_string()))?;
    if a.len_min > a.len_max {
        return Err(usage("--len-min exceeds --len-max"));
    }
    let reduction =
        ReductionOpts { predictor: String::new(), erm_cap: a.erm_cap, eps: a.eps.clone(), search: a.search.clone() };
    let psi = compressor_by_name(&a.compressor, a.erm_cap, &reduction.config()?)?;
    let report = lemma1_search(psi.as_ref(), &gamma, a.len_min..=a.len_max, a.cap)?;
    let rows =
        report.witnesses.iter().map(|w| vec![w.x.to_string(), w.c_toy.to_string(), w.psi_len.to_string()]).collect();
    Ok(Outcome {
        result: serde_json::to_value(&report)?,
        table: Some(Table { header: vec!["x", "c_toy", "psi_len"], rows }),
    })
}

fn complexity_json(r: &ComplexityResult) -> Value {
    match r {
        ComplexityResult::Exact { value, witness } => json!({
            "status": "exact",
            "value": value,
            "witness": witness.to_string(),
        }),
        ComplexityResult::CapExceeded { cap, upper_bound } => json!({
            "status": "cap-exceeded",
            "cap": cap,
            "upper_bound": upper_bound,
        }),
    }
}

fn run_complexity(a: &ComplexityArgs) -> Result<Outcome> {
    if let Some(s) = &a.string {
        let y: BitString = s.parse().map_err(|e: learncomp::Error| usage(e.to_string()))?;
        let r = toy_complexity(&y, a.cap)?;
        let mut result = json!({ "string": s, "length": y.len(), "toy_complexity": complexity_json(&r) });
        if let Some(w) = r.witness() {
            result["regenerates"] = json!(learncomp::machine::regenerates(w, &y));
        }
        return Ok(plain(result));
    }
    let eta = parse_eta(a.eta.as_deref().expect("clap requires one of the two"))?;
    let first = first_program(&eta, a.cap)?;
    let min_len = min_encoding_length(&eta, a.cap)?;
    Ok(plain(json!({
        "eta": eta.values().to_string(),
        "t": eta.t(),
        "first_program": first,
        "min_encoding_length": complexity_json(&min_len),
    })))
}

fn run_enumerate(a: &EnumerateArgs) -> Result<Outcome> {
    let mut indexer = ProgramIndexer::new(a.max_bits)?;
    let total = indexer.programs_up_to(a.max_bits);
    let limit = a.limit.unwrap_or(usize::MAX);
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for (index, p) in enumerate_programs(a.max_bits).take(limit).enumerate() {
        let table = if p.t() <= 6 { Some(p.table()?.values().to_string()) } else { None };
        let encoding = learncomp::machine::encode_program(&p).to_string();
        rows.push(vec![
            index.to_string(),
            program_len(&p).to_string(),
            encoding.clone(),
            p.to_string(),
            table.clone().unwrap_or_default(),
        ]);
        items.push(json!({
            "index": index,
            "bits": program_len(&p),
            "encoding": encoding,
            "program": p.to_string(),
            "table": table,
        }));
    }
    Ok(Outcome {
        result: json!({ "max_bits": a.max_bits, "total_programs": total, "listed": items.len(), "programs": items }),
        table: Some(Table { header: vec!["index", "bits", "encoding", "program", "table"], rows }),
    })
}
