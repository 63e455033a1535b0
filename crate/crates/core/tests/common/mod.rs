//! Definitional re-implementations used to cross-check the library. Nothing
//! here shares code with the crate under test: the characteristic function
//! is a raw point scan, minimality tries every proper subset, and hitting
//! sets come from a full power-set sweep. Slow on purpose; keep n small.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use svaudit::model::{BooleanFunction, ExplanationProblem, Point};
use svaudit::shapley::Rational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Average prediction over the points agreeing with v on `mask`.
pub fn phi_def(problem: &ExplanationProblem, mask: u32) -> Rational {
    let f = problem.function();
    let v = problem.v_index();
    let mut ones = 0i64;
    let mut total = 0i64;
    for x in 0..1u32 << f.arity() {
        if x & mask == v & mask {
            total += 1;
            if f.eval_index(x) {
                ones += 1;
            }
        }
    }
    rat(ones, total)
}

fn factorial(k: u32) -> BigInt {
    (1..=k).map(BigInt::from).fold(BigInt::from(1u8), |a, b| a * b)
}

/// The attribution straight out of its definition: a weighted sum over
/// every subset avoiding i.
pub fn shapley_def(problem: &ExplanationProblem, i: u8) -> Rational {
    let n = problem.arity() as u32;
    let bit = 1u32 << (i - 1);
    let full = ((1u64 << n) - 1) as u32;
    let nfact = factorial(n);
    let mut acc = Rational::zero();
    for s in 0..=full {
        if s & bit != 0 {
            continue;
        }
        let k = s.count_ones();
        let w = Rational::new(factorial(k) * factorial(n - 1 - k), nfact.clone());
        acc += w * (phi_def(problem, s | bit) - phi_def(problem, s));
    }
    acc
}

/// Fixing `mask` to v pins the prediction.
pub fn is_waxp_def(problem: &ExplanationProblem, mask: u32) -> bool {
    let f = problem.function();
    let v = problem.v_index();
    (0..1u32 << f.arity())
        .filter(|x| x & mask == v & mask)
        .all(|x| f.eval_index(x) == problem.class())
}

/// Freeing only `mask` can flip the prediction.
pub fn is_wcxp_def(problem: &ExplanationProblem, mask: u32) -> bool {
    let f = problem.function();
    let v = problem.v_index();
    let off = (((1u64 << f.arity()) - 1) as u32) & !mask;
    (0..1u32 << f.arity())
        .filter(|x| x & off == v & off)
        .any(|x| f.eval_index(x) != problem.class())
}

/// All proper submasks, including 0 (empty for mask = 0).
pub fn strict_submasks(mask: u32) -> Vec<u32> {
    let mut out = Vec::new();
    if mask == 0 {
        return out;
    }
    let mut t = (mask - 1) & mask;
    loop {
        out.push(t);
        if t == 0 {
            break;
        }
        t = (t - 1) & mask;
    }
    out
}

pub fn axps_def(problem: &ExplanationProblem) -> Vec<u32> {
    let full = ((1u64 << problem.arity()) - 1) as u32;
    (0..=full)
        .filter(|&s| {
            is_waxp_def(problem, s)
                && strict_submasks(s).iter().all(|&t| !is_waxp_def(problem, t))
        })
        .collect()
}

pub fn cxps_def(problem: &ExplanationProblem) -> Vec<u32> {
    let full = ((1u64 << problem.arity()) - 1) as u32;
    (0..=full)
        .filter(|&s| {
            is_wcxp_def(problem, s)
                && strict_submasks(s).iter().all(|&t| !is_wcxp_def(problem, t))
        })
        .collect()
}

pub fn mhs_def(family: &[u32], n: u8) -> Vec<u32> {
    let full = ((1u64 << n) - 1) as u32;
    let hits = |h: u32| family.iter().all(|&s| h & s != 0);
    (0..=full)
        .filter(|&h| hits(h) && strict_submasks(h).iter().all(|&t| !hits(t)))
        .collect()
}

pub fn relevancy_def(problem: &ExplanationProblem) -> Vec<&'static str> {
    let axps = axps_def(problem);
    (1..=problem.arity())
        .map(|i| {
            let bit = 1u32 << (i - 1);
            let in_some = axps.iter().any(|&s| s & bit != 0);
            let in_all = !axps.is_empty() && axps.iter().all(|&s| s & bit != 0);
            if in_all {
                "necessary"
            } else if in_some {
                "relevant"
            } else {
                "irrelevant"
            }
        })
        .collect()
}

/// Random function + instance with 1 <= n <= max_n.
pub fn any_problem(max_n: u8) -> impl Strategy<Value = ExplanationProblem> {
    (1..=max_n).prop_flat_map(|n| {
        let len = 1usize << n;
        (proptest::collection::vec(any::<bool>(), len..=len), 0..1u32 << n).prop_map(
            move |(table, v)| {
                let f = BooleanFunction::from_table(&table).unwrap();
                let point = Point::from_index(n, v).unwrap();
                ExplanationProblem::at_point(f, point).unwrap()
            },
        )
    })
}
