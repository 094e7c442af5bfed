//! Operation-count benchmarks on seeded generated instances.

use std::fmt::Write;

use algmatch::field::PrimeField;
use algmatch::gen::{random_graph, spread_matroid_pair};
use algmatch::matroid::{intersect_alg1, intersect_alg2};
use algmatch::pathmatch::max_matching;

use crate::commands::{measured, Options};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    /// Maximum matching on `G(n, 1/2)`; the `r` column is the matching size.
    Matching,
    /// Recursive intersection (`alg1`) on a pair with `r` non-loops spread over `n` elements.
    Alg1,
    /// Block-scan intersection (`alg2`) on the same pairs.
    Alg2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub r: usize,
    pub algorithm: &'static str,
    pub field_mul_count: u64,
    pub wall_time_ms: f64,
}

pub const CSV_HEADER: &str = "n,r,algorithm,field_mul_count,wall_time_ms";

pub fn run_bench(family: Family, sizes: &[usize], r: usize, opts: &Options) -> Result<Vec<BenchRow>, CliError> {
    let f = PrimeField::new(opts.prime)?;
    let mut rows = Vec::new();
    for &n in sizes {
        let seed = opts.seed ^ n as u64;
        let row = match family {
            Family::Matching => {
                let g = random_graph(n, 0.5, seed);
                let cfg = algmatch::pathmatch::SolverConfig { alpha: opts.alpha, retries: opts.retries, seed, ..Default::default() };
                let (res, muls, ms) = measured(opts, || max_matching(&g, f, &cfg));
                let out = res?;
                BenchRow { n, r: out.edges.len(), algorithm: "matching", field_mul_count: muls, wall_time_ms: ms }
            }
            Family::Alg1 | Family::Alg2 => {
                let pair = spread_matroid_pair(f, r, n, seed);
                let cfg = algmatch::matroid::IntersectConfig { seed, retries: opts.retries, audit: false };
                let (res, muls, ms) = measured(opts, || {
                    if family == Family::Alg1 {
                        intersect_alg1(&pair, &cfg)
                    } else {
                        intersect_alg2(&pair, &cfg)
                    }
                });
                res?;
                let algorithm = if family == Family::Alg1 { "alg1" } else { "alg2" };
                BenchRow { n, r, algorithm, field_mul_count: muls, wall_time_ms: ms }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for row in rows {
        writeln!(s, "{},{},{},{},{:.3}", row.n, row.r, row.algorithm, row.field_mul_count, row.wall_time_ms).unwrap();
    }
    s
}
