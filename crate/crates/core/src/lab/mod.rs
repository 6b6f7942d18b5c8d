//! Experiments: count primitive-cyclic primes, predict their density, and
//! put the two side by side.

mod config;
mod output;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

pub use config::{
    default_checkpoints, parse_point, BudgetConfig, ConditionConfig, CurveConfig, Experiment, ExperimentConfig,
    OutputConfig, DEFAULT_PROBE_BUDGET,
};
pub use output::{compare_csv, compare_json, count_csv, count_json, predict_json, probe_csv, probe_json, round12};

use crate::density_engine::{
    density_with_interval, error_envelope, log_integral, positivity_check, rational::to_f64, DensityInterval,
    EmptyClass, PositivityVerdict,
};
use crate::ec_reduction::{is_primitive_cyclic, EcError, ReductionRecord};
use crate::galois_model::{image_probe, GaloisError, ProbeReport, PROBE_MAX_Q};
use crate::prime_engine::{PrimeRange, SegmentedSieve};

/// Width of the integer ranges handed to workers.
pub const CHUNK_LEN: u64 = 1 << 17;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => 2,
            LabError::Capacity(_) => 3,
            _ => 1,
        }
    }
}

impl From<GaloisError> for LabError {
    fn from(e: GaloisError) -> Self {
        match e {
            GaloisError::Capacity { .. } => LabError::Capacity(e.to_string()),
            GaloisError::InvalidCondition(_) | GaloisError::InvalidOverride { .. } | GaloisError::NotSquarefree(_) => {
                LabError::Config(e.to_string())
            }
            other => LabError::Compute(other.to_string()),
        }
    }
}

/// Per-interval tallies between consecutive checkpoints. Merging adds
/// entrywise, so any partition of the prime range merged in any order
/// gives the same result.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialCount {
    pub counted: Vec<u64>,
    pub excluded: Vec<u64>,
}

impl PartialCount {
    pub fn zero(buckets: usize) -> Self {
        PartialCount { counted: vec![0; buckets], excluded: vec![0; buckets] }
    }

    pub fn merge(mut self, other: &PartialCount) -> Self {
        for (a, b) in self.counted.iter_mut().zip(&other.counted) {
            *a += b;
        }
        for (a, b) in self.excluded.iter_mut().zip(&other.excluded) {
            *a += b;
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub x: u64,
    pub count: u64,
    pub excluded: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountSummary {
    pub rows: Vec<CountRow>,
}

/// Counts primes of `[lo, hi]` into the checkpoint buckets.
pub fn count_range(exp: &Experiment, lo: u64, hi: u64) -> Result<PartialCount, LabError> {
    let cps = &exp.checkpoints;
    let mut part = PartialCount::zero(cps.len());
    if lo > hi {
        return Ok(part);
    }
    let primes = SegmentedSieve::default()
        .primes(PrimeRange::new(lo, hi).map_err(|e| LabError::Config(e.to_string()))?)
        .map_err(|e| LabError::Capacity(e.to_string()))?;
    let f = exp.condition.f;
    for p in primes {
        let bucket = cps.partition_point(|&c| c < p);
        if bucket == cps.len() {
            break;
        }
        if exp.curve.is_excluded(p, f) {
            part.excluded[bucket] += 1;
            continue;
        }
        if !exp.condition.admits(p) {
            continue;
        }
        match ReductionRecord::build(&exp.curve, p, f) {
            Ok(rec) if is_primitive_cyclic(&rec) => part.counted[bucket] += 1,
            Ok(_) => {}
            Err(EcError::ExcludedPrime(_)) => part.excluded[bucket] += 1,
            Err(e) => return Err(LabError::Compute(format!("p = {p}: {e}"))),
        }
    }
    Ok(part)
}

/// Scans primes up to the last checkpoint on `exp.workers` threads.
pub fn run_count(exp: &Experiment) -> Result<CountSummary, LabError> {
    let top = exp.checkpoints.last().copied().unwrap_or(0);
    let n_chunks = top.div_ceil(CHUNK_LEN) as usize;
    let results: Mutex<Vec<Option<Result<PartialCount, LabError>>>> = Mutex::new((0..n_chunks).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..exp.workers.min(n_chunks.max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n_chunks {
                    break;
                }
                let lo = i as u64 * CHUNK_LEN + 1;
                let hi = ((i as u64 + 1) * CHUNK_LEN).min(top);
                let r = count_range(exp, lo, hi);
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });
    let mut total = PartialCount::zero(exp.checkpoints.len());
    for r in results.into_inner().unwrap() {
        total = total.merge(&r.expect("every chunk is processed")?);
    }
    Ok(summarize(&exp.checkpoints, &total))
}

/// Prefix sums of the bucket tallies, one row per checkpoint.
pub fn summarize(checkpoints: &[u64], total: &PartialCount) -> CountSummary {
    let (mut c, mut e) = (0, 0);
    let rows = checkpoints
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            c += total.counted[i];
            e += total.excluded[i];
            CountRow { x, count: c, excluded: e }
        })
        .collect();
    CountSummary { rows }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub interval: DensityInterval,
    pub multiplicative: bool,
    pub positivity: PositivityVerdict,
    pub probes: Vec<ProbeReport>,
    pub caveats: Vec<String>,
}

impl Prediction {
    pub fn center_f64(&self) -> f64 {
        to_f64(&self.interval.center)
    }
}

pub fn run_predict(exp: &Experiment) -> Result<Prediction, LabError> {
    let desc = exp.model.family(&exp.condition);
    let interval = density_with_interval(&desc, exp.truncation).map_err(|e| LabError::Compute(e.to_string()))?;
    let positivity = if exp.condition.residues.is_empty() {
        PositivityVerdict::Zero(EmptyClass::Condition)
    } else {
        let flags: BTreeMap<u64, bool> = exp.model.degree_overrides.iter().map(|(&q, &d)| (q, d == 1)).collect();
        positivity_check(&desc, &flags)
    };
    let mut caveats = Vec::new();
    if !exp.model.degree_overrides.is_empty() {
        caveats.push("degree overrides are applied prime by prime; cross-prime entanglement is not modelled".into());
    }
    let probes = if exp.probe_budget == 0 { Vec::new() } else { run_probe(exp)? };
    for r in probes.iter().filter(|r| !r.is_surjective_consistent()) {
        if !exp.model.degree_overrides.contains_key(&r.q) {
            caveats.push(format!("image at q = {} looks non-surjective; the generic model may not apply", r.q));
        }
    }
    Ok(Prediction { interval, multiplicative: desc.multiplicative, positivity, probes, caveats })
}

/// Probe verdicts for every prime `q ≤ 13`.
pub fn run_probe(exp: &Experiment) -> Result<Vec<ProbeReport>, LabError> {
    [2u64, 3, 5, 7, 11, 13]
        .into_iter()
        .filter(|&q| q <= PROBE_MAX_Q)
        .map(|q| image_probe(&exp.curve, q, exp.probe_budget).map_err(LabError::from))
        .collect()
}

/// One checkpoint of the count joined with the prediction. Float columns
/// are `None` where undefined (`x < 2`, or `center = 0` for the ratio).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub x: u64,
    pub count: u64,
    pub excluded: u64,
    pub li: Option<f64>,
    pub predicted_center: Option<f64>,
    pub predicted_lo: Option<f64>,
    pub predicted_hi: Option<f64>,
    pub ratio: Option<f64>,
    pub envelope: Option<f64>,
    /// `|count − center · li(x)|`
    pub discrepancy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    pub prediction: Prediction,
}

pub fn join(summary: &CountSummary, prediction: &Prediction, exp: &Experiment) -> Vec<CompareRow> {
    let iv = &prediction.interval;
    let (center, lo, hi) = (to_f64(&iv.center), to_f64(&iv.lo()), to_f64(&iv.hi()));
    summary
        .rows
        .iter()
        .map(|r| {
            let li = log_integral(r.x as f64).ok();
            let predicted = li.map(|l| center * l);
            CompareRow {
                x: r.x,
                count: r.count,
                excluded: r.excluded,
                li,
                predicted_center: predicted,
                predicted_lo: li.map(|l| lo * l),
                predicted_hi: li.map(|l| hi * l),
                ratio: predicted.filter(|_| !iv.center.is_zero()).map(|p| r.count as f64 / p),
                envelope: error_envelope(r.x as f64, &exp.budget).ok(),
                discrepancy: predicted.map(|p| (r.count as f64 - p).abs()),
            }
        })
        .collect()
}

pub fn run_compare(exp: &Experiment) -> Result<CompareReport, LabError> {
    let summary = run_count(exp)?;
    let prediction = run_predict(exp)?;
    let rows = join(&summary, &prediction, exp);
    Ok(CompareReport { rows, prediction })
}

/// Outcome of one built-in check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
}

/// Small known answers across all modules.
pub fn selftest() -> Vec<SelfCheck> {
    use crate::density_engine::truncated_series;
    use crate::ec_reduction::{count_points, reduce_curve, CurveSpec};
    use crate::galois_model::{gl2_order, GenericImageModel};
    use crate::prime_engine::{sieve_primes, squarefree_stream};
    use num_bigint::BigUint;

    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let mut out = Vec::new();
    let mut check = |name, passed| out.push(SelfCheck { name, passed });
    check(
        "prime count below 10^4",
        PrimeRange::new(1, 10_000).and_then(sieve_primes).map(|v| v.len() == 1229).unwrap_or(false),
    );
    check(
        "Mertens function at 1000",
        squarefree_stream(1000).map(|v| v.iter().map(|t| t.mu as i64).sum::<i64>() == 2).unwrap_or(false),
    );
    let curve = CurveSpec::new(-1, 0, vec![], &[]).unwrap();
    check(
        "point count of y^2 = x^3 - x over F_5",
        reduce_curve(&curve, 5, 1).map(|rc| count_points(&rc) == (8, -2)).unwrap_or(false),
    );
    check("order of GL2(Z/6)", gl2_order(6).map(|v| v == BigUint::from(288u32)).unwrap_or(false));
    let fam = GenericImageModel::new(0).cyclicity_family();
    check("series truncated at 3", truncated_series(&fam, 3).map(|v| v == r(13, 16)).unwrap_or(false));
    check("li(10^6)", log_integral(1e6).map(|v| (v - 78_627.549).abs() < 0.01).unwrap_or(false));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(workers: usize, x_limit: u64) -> Experiment {
        let mut c = ExperimentConfig::default();
        c.x_limit = x_limit;
        c.workers = workers;
        c.truncation = 200;
        c.probe_budget = 0;
        c.validate().unwrap()
    }

    #[test]
    fn tiny_limits_count_nothing() {
        for x in [1u64, 2] {
            let s = run_count(&small(2, x)).unwrap();
            assert!(s.rows.iter().all(|r| r.count == 0));
        }
    }

    #[test]
    fn worker_count_irrelevant() {
        let a = run_count(&small(1, 300_000)).unwrap();
        let b = run_count(&small(3, 300_000)).unwrap();
        assert_eq!(a, b);
        assert!(a.rows.windows(2).all(|w| w[0].count <= w[1].count));
    }

    #[test]
    fn merge_order_free() {
        let e = small(1, 50_000);
        let parts: Vec<PartialCount> =
            [(1, 9_999), (10_000, 31_337), (31_338, 50_000)].iter().map(|&(lo, hi)| count_range(&e, lo, hi).unwrap()).collect();
        let whole = count_range(&e, 1, 50_000).unwrap();
        let fwd = parts.iter().fold(PartialCount::zero(e.checkpoints.len()), |a, b| a.merge(b));
        let rev = parts.iter().rev().fold(PartialCount::zero(e.checkpoints.len()), |a, b| a.merge(b));
        assert_eq!(fwd, whole);
        assert_eq!(rev, whole);
    }

    #[test]
    fn empty_condition_predicts_zero() {
        let mut c = ExperimentConfig::default();
        c.condition = ConditionConfig { f: 4, residues: Some(vec![]) };
        c.truncation = 100;
        c.probe_budget = 0;
        c.x_limit = 1000;
        let e = c.validate().unwrap();
        let p = run_predict(&e).unwrap();
        assert!(p.interval.center.is_zero());
        assert_eq!(p.positivity, PositivityVerdict::Zero(EmptyClass::Condition));
        let rows = join(&run_count(&e).unwrap(), &p, &e);
        assert!(rows.iter().all(|r| r.ratio.is_none() && r.count == 0));
    }

    #[test]
    fn selftest_passes() {
        assert!(selftest().iter().all(|c| c.passed));
    }
}
