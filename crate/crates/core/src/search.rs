//! Brute-force sweeps over the space of Boolean functions of a small arity:
//! count, per issue, how many functions (and how many function/instance
//! pairs) exhibit it. Exhaustive up to m = 4 (2^16 functions); seeded
//! uniform sampling up to m = 8.

use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::constructions::ConstructionResult;
use crate::error::{Error, Result};
use crate::issues::{detect, Issue};
use crate::model::{BooleanFunction, ExplanationProblem, Instance, Point};

/// Largest m whose full function space gets enumerated.
pub const EXHAUSTIVE_CAP: u8 = 4;
/// Largest m accepted at all (with sampling).
pub const SAMPLED_CAP: u8 = 8;

/// One counter per issue, indexed like [`Issue::ALL`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IssueCounts([u64; 5]);

impl IssueCounts {
    pub fn get(&self, issue: Issue) -> u64 {
        self.0[issue.index()]
    }

    /// Counts in I1..I5 order.
    pub fn as_array(&self) -> [u64; 5] {
        self.0
    }

    fn merge(mut self, other: IssueCounts) -> IssueCounts {
        for k in 0..5 {
            self.0[k] += other.0[k];
        }
        self
    }
}

#[derive(Debug, Clone)]
pub struct SurveyResult {
    pub m: u8,
    /// 2^(2^m) when exhaustive, the sample size when sampling.
    pub functions_scanned: u64,
    /// Functions exhibiting the issue at >= 1 of their 2^m instances.
    pub function_counts: IssueCounts,
    /// (function, instance) pairs exhibiting the issue.
    pub pair_counts: IssueCounts,
    pub elapsed: Duration,
}

#[derive(Default)]
struct Tally {
    functions: IssueCounts,
    pairs: IssueCounts,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            functions: self.functions.merge(other.functions),
            pairs: self.pairs.merge(other.pairs),
        }
    }
}

/// Run detect at every instance of `f` and fold the outcome into `acc`.
fn scan_function(f: &BooleanFunction, acc: &mut Tally) {
    let m = f.arity();
    let mut seen = [false; 5];
    for v in 0..1u32 << m {
        let point = Point::from_index(m, v).expect("index in range");
        let problem =
            ExplanationProblem::at_point(f.clone(), point).expect("arity matches");
        let report = detect(&problem);
        for issue in Issue::ALL {
            if report.has(issue) {
                acc.pairs.0[issue.index()] += 1;
                seen[issue.index()] = true;
            }
        }
    }
    for (k, flagged) in seen.into_iter().enumerate() {
        if flagged {
            acc.functions.0[k] += 1;
        }
    }
}

fn table_from_word(m: u8, t: u64) -> BooleanFunction {
    BooleanFunction::from_fn(m, |i| (t >> i) & 1 == 1).expect("arity checked")
}

/// Survey the m-feature function space. Without `sample` every one of the
/// 2^(2^m) tables is visited (m <= 4); with `sample` that many tables are
/// drawn uniformly from the given seed (m <= 8). Constant functions can
/// exhibit nothing, so they contribute no counts either way. The result is
/// a pure function of (m, sample, seed), whatever the worker count.
pub fn survey(m: u8, sample: Option<u64>, seed: u64) -> Result<SurveyResult> {
    if m == 0 {
        return Err(Error::Range("arity must be at least 1".into()));
    }
    let start = Instant::now();
    let tally;
    let scanned;
    match sample {
        None => {
            if m > EXHAUSTIVE_CAP {
                return Err(Error::Scale(format!(
                    "exhaustive survey stops at m = {EXHAUSTIVE_CAP} (2^16 functions); \
                     pass a sample size for m up to {SAMPLED_CAP}"
                )));
            }
            let total = 1u64 << (1u32 << m);
            scanned = total;
            tally = (0..total)
                .into_par_iter()
                .fold(Tally::default, |mut acc, t| {
                    if t != 0 && t != total - 1 {
                        scan_function(&table_from_word(m, t), &mut acc);
                    }
                    acc
                })
                .reduce(Tally::default, Tally::merge);
        }
        Some(k) => {
            if m > SAMPLED_CAP {
                return Err(Error::Scale(format!(
                    "sampled survey stops at m = {SAMPLED_CAP}, got {m}"
                )));
            }
            // Tables come out of the generator serially so the sample is
            // the same no matter how the scan is later partitioned.
            let len = 1usize << m;
            let words = len.div_ceil(64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tables: Vec<BooleanFunction> = (0..k)
                .map(|_| {
                    let bits: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
                    BooleanFunction::from_fn(m, |i| {
                        bits[i as usize / 64] >> (i % 64) & 1 == 1
                    })
                    .expect("arity checked")
                })
                .collect();
            scanned = k;
            tally = tables
                .par_iter()
                .fold(Tally::default, |mut acc, f| {
                    if !f.is_constant() {
                        scan_function(f, &mut acc);
                    }
                    acc
                })
                .reduce(Tally::default, Tally::merge);
        }
    }
    Ok(SurveyResult {
        m,
        functions_scanned: scanned,
        function_counts: tally.functions,
        pair_counts: tally.pairs,
        elapsed: start.elapsed(),
    })
}

/// First (function, instance) pair exhibiting `issue`, scanning tables in
/// numeric order (LSB-first bit strings) and instances in index order.
/// Exhaustive, so m is capped at [`EXHAUSTIVE_CAP`].
pub fn find_first(m: u8, issue: Issue) -> Result<Option<ConstructionResult>> {
    if m == 0 {
        return Err(Error::Range("arity must be at least 1".into()));
    }
    if m > EXHAUSTIVE_CAP {
        return Err(Error::Scale(format!(
            "find_first scans exhaustively and stops at m = {EXHAUSTIVE_CAP}, got {m}"
        )));
    }
    let total = 1u64 << (1u32 << m);
    for t in 1..total - 1 {
        let f = table_from_word(m, t);
        for v in 0..1u32 << m {
            let point = Point::from_index(m, v)?;
            let problem = ExplanationProblem::at_point(f.clone(), point)?;
            if detect(&problem).has(issue) {
                let class = f.eval_index(v);
                return Ok(Some(ConstructionResult {
                    function: f,
                    instance: Instance { point, class },
                    target_issue: issue,
                    provenance: format!(
                        "exhaustive scan at m={m}: first hit is table {t}, instance index {v}"
                    ),
                }));
            }
        }
    }
    Ok(None)
}
