//! Exact Shapley values for truth-table classifiers under the uniform input
//! distribution.
//!
//! The value function phi(S) is the average prediction over all points that
//! agree with the instance on S. Every phi is a dyadic rational with an
//! integer numerator, so the whole pipeline stays in integer counts until the
//! final weighted aggregation; there is no floating point anywhere and zero
//! tests are exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{ExplanationProblem, FeatureSet};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator (the representation invariant of `Ratio`).
pub type Rational = num_rational::BigRational;

/// Ones-counts of the function over every agreement cube.
///
/// `sums[S]` (S a feature mask) is the number of points x that agree with the
/// instance on S and have f(x) = 1; phi(S) divides this by 2^(n-|S|). The
/// whole table is computed by one n-pass fold over the subset lattice in
/// O(n * 2^n) integer additions: re-index points by z = x XOR v so the cube of
/// S becomes "z inside the complement of S", take the sum-over-subsets
/// transform, and read results through the complement.
pub struct PhiTable {
    problem: ExplanationProblem,
    sums: Vec<u32>,
}

pub fn phi_table(problem: &ExplanationProblem) -> PhiTable {
    let n = problem.arity() as usize;
    let size = 1usize << n;
    let v = problem.v_index() as usize;
    let f = problem.function();
    let mut a: Vec<u32> = (0..size).map(|z| f.eval_index((z ^ v) as u32) as u32).collect();
    for i in 0..n {
        let bit = 1usize << i;
        for y in 0..size {
            if y & bit != 0 {
                a[y] += a[y ^ bit];
            }
        }
    }
    // a[y] now sums over subsets of y; entry for mask S lives at its complement
    let full = size - 1;
    for s in 0..size {
        let t = full ^ s;
        if s < t {
            a.swap(s, t);
        }
    }
    PhiTable { problem: problem.clone(), sums: a }
}

impl PhiTable {
    #[inline]
    pub fn arity(&self) -> u8 {
        self.problem.arity()
    }

    pub fn problem(&self) -> &ExplanationProblem {
        &self.problem
    }

    /// Number of ones of the function among points agreeing with v on S.
    pub fn sum(&self, s: FeatureSet) -> Result<u32> {
        self.check_mask(s)?;
        Ok(self.sums[s.mask() as usize])
    }

    /// phi(S) = sums[S] / 2^(n-|S|).
    pub fn phi(&self, s: FeatureSet) -> Result<Rational> {
        self.check_mask(s)?;
        let shift = self.arity() as u32 - s.len();
        Ok(Rational::new(
            BigInt::from(self.sums[s.mask() as usize]),
            BigInt::one() << shift,
        ))
    }

    fn check_mask(&self, s: FeatureSet) -> Result<()> {
        if s.mask() as usize >= self.sums.len() {
            let bad = 32 - s.mask().leading_zeros();
            return Err(Error::Feature { feature: bad as u8, arity: self.arity() });
        }
        Ok(())
    }

    /// Shapley value of feature i (1-based).
    ///
    /// The marginal phi(S + i) - phi(S) equals
    /// (2*sums[S+i] - sums[S]) / 2^(n-|S|), so per cardinality k the inner
    /// sum is a plain integer accumulation and only n rational terms remain.
    pub fn shapley(&self, i: u8) -> Result<Rational> {
        let n = self.arity();
        if i == 0 || i > n {
            return Err(Error::Feature { feature: i, arity: n });
        }
        let mut acc = vec![0i64; n as usize];
        let bit = 1usize << (i - 1);
        for s in 0..self.sums.len() {
            if s & bit == 0 {
                let k = s.count_ones() as usize;
                acc[k] += 2 * i64::from(self.sums[s | bit]) - i64::from(self.sums[s]);
            }
        }
        Ok(aggregate(n, &acc))
    }

    /// All n Shapley values in one pass over the table.
    pub fn shapley_all(&self) -> Vec<Rational> {
        let n = self.arity() as usize;
        let full = self.sums.len() - 1;
        let mut acc = vec![vec![0i64; n]; n];
        for s in 0..self.sums.len() {
            let k = s.count_ones() as usize;
            let mut rest = full & !s;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                let i = bit.trailing_zeros() as usize;
                acc[i][k] += 2 * i64::from(self.sums[s | bit]) - i64::from(self.sums[s]);
                rest ^= bit;
            }
        }
        let values: Vec<Rational> = acc.iter().map(|a| aggregate(self.arity(), a)).collect();
        // efficiency identity: the values always sum to f(v) - phi(empty)
        debug_assert_eq!(
            values.iter().fold(Rational::zero(), |a, b| a + b),
            Rational::from_integer(BigInt::from(self.sums[full]))
                - Rational::new(BigInt::from(self.sums[0]), BigInt::one() << self.arity()),
        );
        values
    }
}

/// Sum of acc[k] * k! * (n-1-k)! / (n! * 2^(n-k)) over all cardinalities.
fn aggregate(n: u8, acc: &[i64]) -> Rational {
    let fact: Vec<BigInt> = (0..=n as usize)
        .scan(BigInt::one(), |f, k| {
            if k > 0 {
                *f *= k;
            }
            Some(f.clone())
        })
        .collect();
    let mut total = Rational::zero();
    for (k, &a) in acc.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let num = BigInt::from(a) * &fact[k] * &fact[n as usize - 1 - k];
        let den = &fact[n as usize] * (BigInt::one() << (n as usize - k));
        total += Rational::new(num, den);
    }
    total
}

/// Shapley value of feature i, computed from a fresh phi table.
pub fn shapley_value(problem: &ExplanationProblem, i: u8) -> Result<Rational> {
    phi_table(problem).shapley(i)
}

/// All Shapley values, computed from a fresh phi table.
pub fn shapley_all(problem: &ExplanationProblem) -> Vec<Rational> {
    phi_table(problem).shapley_all()
}

/// Textbook double enumeration: for every coalition S not containing i,
/// average the function over both agreement cubes directly. Exponentially
/// slower than `shapley_value`; kept as the independent cross-check and
/// capped at n = 12.
pub fn shapley_brute(problem: &ExplanationProblem, i: u8) -> Result<Rational> {
    let n = problem.arity();
    if n > 12 {
        return Err(Error::Scale(format!(
            "brute-force Shapley is capped at 12 features, got {n}"
        )));
    }
    if i == 0 || i > n {
        return Err(Error::Feature { feature: i, arity: n });
    }
    let full = (1u32 << n) - 1;
    let bit = 1u32 << (i - 1);
    let fact: Vec<BigInt> = (0..=n as usize)
        .scan(BigInt::one(), |f, k| {
            if k > 0 {
                *f *= k;
            }
            Some(f.clone())
        })
        .collect();
    let mut total = Rational::zero();
    for s in 0..=full {
        if s & bit != 0 {
            continue;
        }
        let k = s.count_ones() as usize;
        let weight = Rational::new(
            fact[k].clone() * &fact[n as usize - 1 - k],
            fact[n as usize].clone(),
        );
        total += weight * (phi_direct(problem, s | bit) - phi_direct(problem, s));
    }
    Ok(total)
}

/// phi(S) by scanning the agreement cube point by point.
fn phi_direct(problem: &ExplanationProblem, s: u32) -> Rational {
    let n = problem.arity();
    let full = (1u32 << n) - 1;
    let free = full & !s;
    let v = problem.v_index();
    let f = problem.function();
    let mut ones = 0u64;
    let mut z = free;
    loop {
        ones += f.eval_index(v ^ z) as u64;
        if z == 0 {
            break;
        }
        z = (z - 1) & free;
    }
    Rational::new(BigInt::from(ones), BigInt::one() << free.count_ones())
}

/// Fixed three-decimal rendering with ties rounded to even. Display-only;
/// comparisons and zero tests always use the exact rationals.
pub fn decimal3(r: &Rational) -> String {
    let scaled = r * Rational::from_integer(BigInt::from(1000));
    let (num, den) = (scaled.numer(), scaled.denom());
    let (q, rem) = num.div_mod_floor(den); // 0 <= rem < den
    let twice = &rem * 2;
    let round_up = twice > *den || (twice == *den && q.is_odd());
    let k = if round_up { q + 1 } else { q };
    let neg = k.is_negative();
    let abs = k.abs();
    let int = &abs / 1000;
    let frac = &abs % 1000;
    format!("{}{}.{:03}", if neg { "-" } else { "" }, int, frac)
}
