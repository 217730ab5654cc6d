//! Sweeps of families × sizes × algorithms, written as CSV.

use std::collections::{BTreeMap, BTreeSet};
use std::thread;

use crate::algos::Algo;
use crate::generators::{default_eps, gen, Family, GenParams};
use crate::geometry::{format_rational, rat, to_f64, validate_packing, Mode, Point, Rational};
use crate::oracle::{self, OracleLimits};
use crate::svg::fmt9;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub families: Vec<Family>,
    pub sizes: Vec<usize>,
    pub algos: Vec<Algo>,
    /// Seeds per size for the random family.
    pub seeds: u64,
    /// Quantization of the square oracle.
    pub eps: Rational,
    pub oracle: bool,
    pub limits: OracleLimits,
    pub threads: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            families: vec![Family::Prop1, Family::Prop2, Family::Diagonal],
            sizes: (1..=6).collect(),
            algos: Algo::ALL.to_vec(),
            seeds: 1,
            eps: rat(1, 10),
            oracle: true,
            limits: OracleLimits::default(),
            threads: thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub algo: Algo,
    pub area: Rational,
    /// Lower bound on `area` promised by the algorithm.
    pub guarantee: Option<Rational>,
    pub oracle_value: Option<Rational>,
    pub ratio: Option<Rational>,
    /// Valid packing that meets its guarantee.
    pub ok: bool,
}

pub const CSV_HEADER: &str = "family,n,seed,algo,area,area_float,guarantee,oracle_value,ratio,ok";

impl BenchRow {
    pub fn csv(&self) -> String {
        let opt = |r: &Option<Rational>| r.as_ref().map(format_rational).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.family,
            self.n,
            self.seed,
            self.algo,
            format_rational(&self.area),
            fmt9(to_f64(&self.area)),
            opt(&self.guarantee),
            opt(&self.oracle_value),
            self.ratio.as_ref().map(|r| fmt9(to_f64(r))).unwrap_or_default(),
            self.ok
        )
    }
}

struct Job {
    family: Family,
    seed: u64,
    points: Vec<Point>,
}

fn jobs(cfg: &BenchConfig) -> Vec<Job> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &family in &cfg.families {
        for &n in &cfg.sizes {
            let seeds = if family == Family::Random { 0..cfg.seeds } else { 0..1 };
            for seed in seeds {
                let params = GenParams { n: Some(n), eps: default_eps(family), seed, ..Default::default() };
                // Sizes a family cannot take are skipped.
                let Ok(inst) = gen(family, &params) else { continue };
                if seen.insert((family, seed, inst.points.clone())) {
                    out.push(Job { family, seed, points: inst.points });
                }
            }
        }
    }
    out
}

fn run_job(cfg: &BenchConfig, job: &Job) -> Vec<BenchRow> {
    let mut optima: BTreeMap<Mode, Option<Rational>> = BTreeMap::new();
    let n = job.points.len();
    cfg.algos
        .iter()
        .map(|&algo| {
            let (packing, _) = algo.run(&job.points);
            let valid = validate_packing(&job.points, &packing, algo.mode()).is_ok_and(|r| r.is_valid());
            let oracle_value = if cfg.oracle {
                optima
                    .entry(algo.mode())
                    .or_insert_with(|| {
                        oracle::solve(&job.points, algo.mode(), &cfg.eps, cfg.limits).ok().map(|s| s.value)
                    })
                    .clone()
            } else {
                None
            };
            let guarantee = algo.area_guarantee(n).or_else(|| {
                let r = algo.ratio_guarantee()?;
                oracle_value.as_ref().map(|o| r * o)
            });
            let ratio = oracle_value.as_ref().filter(|o| **o > rat(0, 1)).map(|o| &packing.total_area / o);
            let ok = valid && guarantee.as_ref().is_none_or(|g| packing.total_area >= *g);
            BenchRow {
                family: job.family,
                n,
                seed: job.seed,
                algo,
                area: packing.total_area,
                guarantee,
                oracle_value,
                ratio,
                ok,
            }
        })
        .collect()
}

/// Runs the sweep on worker threads; rows come back sorted by family, size,
/// seed and algorithm.
pub fn run_bench(cfg: &BenchConfig) -> Vec<BenchRow> {
    let jobs = jobs(cfg);
    let threads = cfg.threads.max(1).min(jobs.len().max(1));
    let mut rows: Vec<BenchRow> = thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let jobs = &jobs;
                s.spawn(move || {
                    jobs.iter().skip(t).step_by(threads).flat_map(|j| run_job(cfg, j)).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("bench worker panicked")).collect()
    });
    rows.sort_by_key(|a| (a.family, a.n, a.seed, a.algo));
    rows
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.csv());
        s.push('\n');
    }
    s
}
