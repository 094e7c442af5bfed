use std::time::Instant;

use algmatch::field::{count_muls, PrimeField, DEFAULT_PRIME};
use algmatch::linalg::{with_mul_strategy, MulStrategy};
use algmatch::matroid::{intersect_alg1, intersect_alg2, IntersectConfig, MatroidPair};
use algmatch::oracles::{oracle_bpm_exists, oracle_matroid_intersection, oracle_max_matching};
use algmatch::pathmatch::{bpm_exists, max_matching, solve_bpm, verify_bpm, PathMatchError, SolverConfig};

use crate::format::{parse_bpm, parse_graph, parse_matroid, vertex_name};
use crate::report::{digest, RunReport};
use crate::CliError;

/// Flags shared by all commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    /// Field for graph inputs; matroid and path-matching files carry their
    /// own prime.
    pub prime: u64,
    pub alpha: usize,
    pub naive_mul: bool,
    /// Re-check results independently of the solver's own verification.
    pub verify: bool,
    pub oracle: bool,
    pub retries: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, prime: DEFAULT_PRIME, alpha: 4, naive_mul: false, verify: true, oracle: false, retries: 3 }
    }
}

impl Options {
    fn solver(&self) -> SolverConfig {
        SolverConfig { alpha: self.alpha, retries: self.retries, seed: self.seed, ..SolverConfig::default() }
    }

    fn intersect(&self) -> IntersectConfig {
        IntersectConfig { seed: self.seed, retries: self.retries, audit: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Algorithm {
    Alg1,
    Alg2,
    Oracle,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Alg1 => "alg1",
            Algorithm::Alg2 => "alg2",
            Algorithm::Oracle => "oracle",
        }
    }
}

/// Runs `f` under the configured multiplication strategy, returning its
/// result, the number of field multiplications and the wall time in ms.
pub fn measured<T>(opts: &Options, f: impl FnOnce() -> T) -> (T, u64, f64) {
    let strategy = if opts.naive_mul { MulStrategy::Naive } else { MulStrategy::default() };
    let start = Instant::now();
    let (out, muls) = count_muls(|| with_mul_strategy(strategy, f));
    (out, muls, start.elapsed().as_secs_f64() * 1e3)
}

/// Largest graph the matching oracle accepts.
const MATCHING_ORACLE_LIMIT: usize = 24;
/// Largest ground set the intersection oracle is run on.
const INTERSECTION_ORACLE_LIMIT: usize = 200;

pub fn cmd_match(text: &str, opts: &Options) -> Result<RunReport, CliError> {
    let graph = parse_graph(text)?;
    let field = PrimeField::new(opts.prime)?;
    let mut report = RunReport::new("match", digest(&[text]), opts.seed, opts.prime);
    let (res, muls, ms) = measured(opts, || max_matching(&graph, field, &opts.solver()));
    let out = res?;
    report.size = out.edges.len();
    report.edges = Some(out.edges.iter().map(|&(u, v)| [u, v]).collect());
    report.attempts = out.stats.attempts;
    report.field_mul_count = muls;
    report.wall_time_ms = ms;
    if opts.verify && !(graph.is_matching(&out.edges) && out.edges.len() == out.rank_size) {
        return Err(CliError::Unverified("output is not a matching of the predicted size".into()));
    }
    report.verified = true;
    if opts.oracle && graph.vertex_count() <= MATCHING_ORACLE_LIMIT {
        let expected = oracle_max_matching(&graph).map_err(|e| CliError::Internal(e.to_string()))?;
        report.oracle_size = Some(expected);
        if expected != report.size {
            return Err(CliError::OracleMismatch(Box::new(report)));
        }
    }
    Ok(report)
}

pub fn cmd_intersect(text1: &str, text2: &str, algorithm: Algorithm, opts: &Options) -> Result<RunReport, CliError> {
    let m1 = parse_matroid(text1)?;
    let m2 = parse_matroid(text2)?;
    if m1.field() != m2.field() {
        return Err(CliError::FieldMismatch);
    }
    let prime = m1.field().modulus();
    let pair = MatroidPair::from_columns(m1, m2)?;
    let mut report = RunReport::new("intersect", digest(&[text1, text2]), opts.seed, prime);
    report.algorithm = Some(algorithm.name().into());
    let cfg = opts.intersect();
    let (res, muls, ms) = measured(opts, || match algorithm {
        Algorithm::Alg1 => intersect_alg1(&pair, &cfg).map(|o| (o.elements, Some(o.rank_size), o.stats.attempts)),
        Algorithm::Alg2 => intersect_alg2(&pair, &cfg).map(|o| (o.elements, Some(o.rank_size), o.stats.attempts)),
        Algorithm::Oracle => Ok((oracle_matroid_intersection(&pair).elements, None, 1)),
    });
    let (elements, rank_size, attempts) = res?;
    report.size = elements.len();
    report.attempts = attempts;
    report.field_mul_count = muls;
    report.wall_time_ms = ms;
    if opts.verify {
        let sized = rank_size.map_or(true, |k| k == elements.len());
        if !(sized && pair.is_common_independent(&elements)) {
            return Err(CliError::Unverified("output is not a common independent set of the predicted size".into()));
        }
    }
    report.elements = Some(elements);
    report.verified = true;
    if opts.oracle && algorithm != Algorithm::Oracle && pair.n() <= INTERSECTION_ORACLE_LIMIT {
        let expected = oracle_matroid_intersection(&pair).elements.len();
        report.oracle_size = Some(expected);
        if expected != report.size {
            return Err(CliError::OracleMismatch(Box::new(report)));
        }
    }
    Ok(report)
}

pub fn cmd_bpm(text: &str, exists_only: bool, opts: &Options) -> Result<RunReport, CliError> {
    let inst = parse_bpm(text)?;
    let prime = inst.field().modulus();
    let mut report = RunReport::new("bpm", digest(&[text]), opts.seed, prime);
    let exists = if exists_only {
        let (exists, muls, ms) = measured(opts, || bpm_exists(&inst, opts.seed));
        report.attempts = 1;
        report.field_mul_count = muls;
        report.wall_time_ms = ms;
        exists
    } else {
        let (res, muls, ms) = measured(opts, || solve_bpm(&inst, &opts.solver()));
        report.field_mul_count = muls;
        report.wall_time_ms = ms;
        match res {
            Ok(sol) => {
                if opts.verify {
                    verify_bpm(&inst, &sol.edges).map_err(CliError::Unverified)?;
                }
                report.attempts = sol.stats.attempts;
                report.size = sol.edges.len();
                report.edges = Some(sol.edges.iter().map(|&(u, v)| [u, v]).collect());
                report.edge_names =
                    Some(sol.edges.iter().map(|&(u, v)| [vertex_name(&inst, u), vertex_name(&inst, v)]).collect());
                true
            }
            Err(PathMatchError::NoBpm) => {
                report.attempts = 1;
                false
            }
            Err(e) => return Err(e.into()),
        }
    };
    report.exists = Some(exists);
    // Existence is certified by a verified solution or a nonsingular
    // substitution; non-existence only holds with high probability.
    report.verified = exists;
    if opts.oracle {
        if let Ok(truth) = oracle_bpm_exists(&inst) {
            report.oracle_exists = Some(truth);
            if truth != exists {
                return Err(CliError::OracleMismatch(Box::new(report)));
            }
        }
    }
    if !exists {
        return Err(CliError::NoBpm(Box::new(report)));
    }
    Ok(report)
}
