//! Constructors that manufacture, at any requested arity, classifiers and
//! instances provably exhibiting each of the five issues, plus the counting
//! lower bounds on how many distinct functions do so.
//!
//! Every builder returns the function together with a designated instance
//! and can be re-verified against the exact engine with
//! [`ConstructionResult::verify`]. The default seeds reproduce the worked
//! examples from the unit tests exactly (e.g. the 3-feature I1 witness is
//! the table 00010101 at (0,0,1)).

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::issues::{detect, Issue, IssueReport};
use crate::model::{
    BitOp, BooleanFunction, ExplanationProblem, Instance, Point, MAX_ARITY,
};
use crate::shapley::Rational;

/// Building-block functions the constructions are parameterized over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedKind {
    /// x1 & x2 & ... & xm
    Conjunction { m: u8 },
    /// x1, padded with m-1 ignored features
    Projection { m: u8 },
    /// 1 iff exactly one feature is 0 (needs m >= 3)
    ExactlyOneZero { m: u8 },
    /// 1 only at the given point
    PointIndicator { center: Point },
    /// 1 at Hamming distance 1..=radius from the center (the center itself
    /// is excluded; radius must be 1 or 2)
    HammingBall { center: Point, radius: u8 },
}

pub fn seed(kind: &SeedKind) -> Result<BooleanFunction> {
    match *kind {
        SeedKind::Conjunction { m } => {
            let full = (1u32 << m.min(31)) - 1;
            BooleanFunction::from_fn(m, |i| i == full)
        }
        SeedKind::Projection { m } => BooleanFunction::from_fn(m, |i| i & 1 == 1),
        SeedKind::ExactlyOneZero { m } => {
            if m < 3 {
                return Err(Error::Construction(format!(
                    "exactly-one-zero needs at least 3 features, got {m}"
                )));
            }
            let full = (1u32 << m) - 1;
            BooleanFunction::from_fn(m, |i| (i ^ full).count_ones() == 1)
        }
        SeedKind::PointIndicator { center } => {
            BooleanFunction::from_fn(center.arity(), |i| i == center.index())
        }
        SeedKind::HammingBall { center, radius } => {
            check_radius(radius)?;
            BooleanFunction::from_fn(center.arity(), |i| {
                let d = (i ^ center.index()).count_ones();
                1 <= d && d <= radius as u32
            })
        }
    }
}

fn check_radius(radius: u8) -> Result<()> {
    if radius == 1 || radius == 2 {
        Ok(())
    } else {
        Err(Error::Range(format!("radius must be 1 or 2, got {radius}")))
    }
}

/// A constructed witness: the function, the instance to analyze it at, the
/// issue it is built to exhibit, and a human-readable provenance note.
#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub function: BooleanFunction,
    pub instance: Instance,
    pub target_issue: Issue,
    pub provenance: String,
}

impl ConstructionResult {
    pub fn problem(&self) -> Result<ExplanationProblem> {
        ExplanationProblem::new(self.function.clone(), self.instance)
    }

    /// Run the full detector on the constructed problem and insist the
    /// target issue fires. Cost is O(n * 2^n); meant for n up to ~14.
    pub fn verify(&self) -> Result<IssueReport> {
        let report = detect(&self.problem()?);
        if report.has(self.target_issue) {
            Ok(report)
        } else {
            Err(Error::Verification(format!(
                "{} does not fire on the constructed problem ({})",
                self.target_issue, self.provenance
            )))
        }
    }
}

/// First point in lexicographic order (feature 1 compared first) where the
/// function takes the requested value.
fn lex_smallest(f: &BooleanFunction, want: bool) -> Option<Point> {
    let m = f.arity();
    for rank in 0..f.table_len() as u32 {
        let idx = rank.reverse_bits() >> (32 - m as u32);
        if f.eval_index(idx) == want {
            return Some(Point::from_index(m, idx).expect("index in range"));
        }
    }
    None
}

/// f padded with `extra` ignored features on top.
fn with_ignored_top(f: &BooleanFunction, extra: u8) -> Result<BooleanFunction> {
    let mut cur = f.clone();
    for _ in 0..extra {
        cur = BooleanFunction::gate(&cur, &cur)?;
    }
    Ok(cur)
}

fn require_nonconstant(f: &BooleanFunction, name: &str) -> Result<()> {
    if f.is_constant() {
        return Err(Error::Construction(format!("{name} must not be constant")));
    }
    Ok(())
}

/// I1 witness at arity n = m+1: select k1 below the new top feature and k2
/// above it. With k1 entailing k2 (strictly), the top feature ends up in no
/// explanation yet always receives a strictly positive Shapley value.
pub fn build_i1(k1: &BooleanFunction, k2: &BooleanFunction) -> Result<ConstructionResult> {
    if k1.arity() != k2.arity() {
        return Err(Error::Dimension { expected: k1.arity(), got: k2.arity() });
    }
    let m = k1.arity();
    if m < 2 {
        return Err(Error::Construction(format!(
            "the I1 construction needs seeds of at least 2 features, got {m}"
        )));
    }
    require_nonconstant(k1, "k1")?;
    require_nonconstant(k2, "k2")?;
    if k1 == k2 {
        return Err(Error::Construction("k1 and k2 must differ".into()));
    }
    if !k1.implies(k2)? {
        return Err(Error::Construction("k1 must entail k2 pointwise".into()));
    }
    let function = BooleanFunction::gate(k1, k2)?;
    let low = lex_smallest(k2, false).expect("non-constant k2 has a zero");
    let point = low.appended(true)?;
    debug_assert!(!function.evaluate(&point).unwrap());
    Ok(ConstructionResult {
        function,
        instance: Instance { point, class: false },
        target_issue: Issue::I1,
        provenance: format!(
            "selector over an entailed seed pair (m={m}); feature {} is irrelevant with Sv > 0",
            m + 1
        ),
    })
}

/// I3 witness at odd arity n = 2m+1: branch between k1 on the low copy and
/// the same k1 on the high copy. The selector is relevant (it appears in
/// explanations) yet its Shapley value is exactly zero by symmetry.
pub fn build_i3(k1: &BooleanFunction) -> Result<ConstructionResult> {
    require_nonconstant(k1, "k1")?;
    let m = k1.arity();
    let n = 2 * m as u32 + 1;
    if n > MAX_ARITY as u32 {
        return Err(Error::Capacity { requested: n, cap: MAX_ARITY });
    }
    let low = with_ignored_top(k1, m)?;
    let high = k1.shift_vars(m)?;
    let function = BooleanFunction::gate(&low, &high)?;
    let u = lex_smallest(k1, true).expect("non-constant k1 has a one");
    let point = u.concat(&u)?.appended(true)?;
    debug_assert!(function.evaluate(&point).unwrap());
    Ok(ConstructionResult {
        function,
        instance: Instance { point, class: true },
        target_issue: Issue::I3,
        provenance: format!(
            "selector between two disjoint copies of a seed (m={m}); feature {n} is relevant with Sv = 0"
        ),
    })
}

/// I4 witness at even arity n = 2m+2: three branches (k1&k2 / k1 / k2 over
/// disjoint copies). Feature n-1 is irrelevant with nonzero Sv and feature n
/// is relevant with Sv = 0, so I1 and I3 fire on the same instance.
pub fn build_i4(k1: &BooleanFunction) -> Result<ConstructionResult> {
    require_nonconstant(k1, "k1")?;
    let m = k1.arity();
    let n = 2 * m as u32 + 2;
    if n > MAX_ARITY as u32 {
        return Err(Error::Capacity { requested: n, cap: MAX_ARITY });
    }
    let a = with_ignored_top(k1, m)?; // k1 on features 1..m
    let b = k1.shift_vars(m)?; // k1 on features m+1..2m
    let both = BooleanFunction::pointwise(BitOp::And, &a, &b)?;
    let d0 = BooleanFunction::gate(&both, &a)?;
    let d1 = BooleanFunction::gate(&both, &b)?;
    let function = BooleanFunction::gate(&d0, &d1)?;
    let u = lex_smallest(k1, false).expect("non-constant k1 has a zero");
    let point = u.concat(&u)?.appended(true)?.appended(true)?;
    debug_assert!(!function.evaluate(&point).unwrap());
    Ok(ConstructionResult {
        function,
        instance: Instance { point, class: false },
        target_issue: Issue::I4,
        provenance: format!(
            "conjunction/copy branches over disjoint seed copies (m={m}); \
             feature {} irrelevant nonzero, feature {n} relevant zero",
            n - 1
        ),
    })
}

/// I5 witness at arity n = m+1: the distance-1 sphere around the center,
/// gated behind the new top feature. At (center, 1) the top feature is
/// irrelevant yet strictly maximal in |Sv|; see
/// [`i5_shapley_closed_form`] for its exact value.
pub fn build_i5(m: u8, center: Option<Point>) -> Result<ConstructionResult> {
    if m < 3 {
        return Err(Error::Construction(format!(
            "the I5 construction needs at least 3 seed features, got {m}"
        )));
    }
    let center = match center {
        Some(c) => {
            if c.arity() != m {
                return Err(Error::Dimension { expected: m, got: c.arity() });
            }
            c
        }
        None => Point::all_ones(m)?,
    };
    let sphere = seed(&SeedKind::HammingBall { center, radius: 1 })?;
    let function = BooleanFunction::gate(&BooleanFunction::constant(m, false)?, &sphere)?;
    let point = center.appended(true)?;
    debug_assert!(!function.evaluate(&point).unwrap());
    Ok(ConstructionResult {
        function,
        instance: Instance { point, class: false },
        target_issue: Issue::I5,
        provenance: format!(
            "distance-1 sphere behind a selector (m={m}); feature {} is the strict |Sv| maximum yet irrelevant",
            m + 1
        ),
    })
}

/// Exact Shapley value of the top feature of [`build_i5`]'s function at its
/// instance: (2^(m+1) - m - 2) / ((m+1) * 2^(m+1)). For m = 3 this is 11/64.
pub fn i5_shapley_closed_form(m: u8) -> Result<Rational> {
    if m < 3 {
        return Err(Error::Construction(format!(
            "the I5 construction needs at least 3 seed features, got {m}"
        )));
    }
    let pow = BigUint::one() << (m as usize + 1);
    let num = &pow - BigUint::from(m as u32 + 2);
    let den = BigUint::from(m as u32 + 1) * pow;
    Ok(Rational::new(num.into(), den.into()))
}

/// I2 witness at arity n = m+2: branch on the two top features between k1,
/// k1 | point-indicator(center) and k1 | punctured-ball(center, radius).
/// Feature n-1 is irrelevant yet outranks a relevant feature in |Sv|; with
/// radius 2 (m >= 5) additionally Sv(n-1) > Sv(n) > 0.
pub fn build_i2(
    m: u8,
    k1: Option<&BooleanFunction>,
    radius: u8,
    center: Option<Point>,
) -> Result<ConstructionResult> {
    check_radius(radius)?;
    let min_m = if radius == 1 { 2 } else { 5 };
    if m < min_m {
        return Err(Error::Construction(format!(
            "the I2 construction with radius {radius} needs at least {min_m} seed features, got {m}"
        )));
    }
    let center = match center {
        Some(c) => {
            if c.arity() != m {
                return Err(Error::Dimension { expected: m, got: c.arity() });
            }
            c
        }
        None => Point::all_zeros(m)?,
    };
    let default_k1;
    let k1 = match k1 {
        Some(f) => {
            if f.arity() != m {
                return Err(Error::Dimension { expected: m, got: f.arity() });
            }
            f
        }
        None => {
            default_k1 = BooleanFunction::constant(m, false)?;
            &default_k1
        }
    };
    let k2 = seed(&SeedKind::PointIndicator { center })?;
    let k3 = seed(&SeedKind::HammingBall { center, radius })?;
    if BooleanFunction::pointwise(BitOp::And, k1, &k2)?.ones_count() != 0 {
        return Err(Error::Construction("k1 must be 0 at the center point".into()));
    }
    if BooleanFunction::pointwise(BitOp::And, k1, &k3)?.ones_count() != 0 {
        return Err(Error::Construction(format!(
            "k1 must be 0 on the punctured radius-{radius} ball around the center"
        )));
    }
    let or_k2 = BooleanFunction::pointwise(BitOp::Or, k1, &k2)?;
    let or_k3 = BooleanFunction::pointwise(BitOp::Or, k1, &k3)?;
    if or_k2.is_constant() {
        return Err(Error::Construction("k1 | point-indicator must not be constant 1".into()));
    }
    if or_k3.is_constant() {
        return Err(Error::Construction("k1 | punctured ball must not be constant 1".into()));
    }
    let d0 = BooleanFunction::gate(k1, &or_k2)?;
    let d1 = BooleanFunction::gate(k1, &or_k3)?;
    let function = BooleanFunction::gate(&d0, &d1)?;
    let point = center.appended(true)?.appended(true)?;
    debug_assert!(!function.evaluate(&point).unwrap());
    Ok(ConstructionResult {
        function,
        instance: Instance { point, class: false },
        target_issue: Issue::I2,
        provenance: format!(
            "point/ball branches (m={m}, radius={radius}); feature {} irrelevant yet outranking a relevant one",
            m + 1
        ),
    })
}

/// Build a witness for `issue` with exactly `n` features using the default
/// seeds (conjunction/projection/constant-0/all-ones or all-zeros center).
/// `radius` only applies to I2 and `center` only to I2 and I5.
pub fn build_for_arity(
    issue: Issue,
    n: u8,
    radius: u8,
    center: Option<Point>,
) -> Result<ConstructionResult> {
    if center.is_some() && !matches!(issue, Issue::I2 | Issue::I5) {
        return Err(Error::Range(format!("a center point does not apply to {issue}")));
    }
    if radius != 1 && issue != Issue::I2 {
        return Err(Error::Range(format!("a radius does not apply to {issue}")));
    }
    if n as u32 > MAX_ARITY as u32 {
        return Err(Error::Capacity { requested: n as u32, cap: MAX_ARITY });
    }
    match issue {
        Issue::I1 => {
            if n < 3 {
                return Err(Error::Range(format!("the I1 construction needs n >= 3, got {n}")));
            }
            let m = n - 1;
            build_i1(&seed(&SeedKind::Conjunction { m })?, &seed(&SeedKind::Projection { m })?)
        }
        Issue::I3 => {
            if n < 3 || n.is_multiple_of(2) {
                return Err(Error::Range(format!(
                    "the I3 construction covers odd n >= 3, got {n}"
                )));
            }
            build_i3(&seed(&SeedKind::Conjunction { m: (n - 1) / 2 })?)
        }
        Issue::I4 => {
            if n < 4 || !n.is_multiple_of(2) {
                return Err(Error::Range(format!(
                    "the I4 construction covers even n >= 4, got {n}"
                )));
            }
            build_i4(&seed(&SeedKind::Conjunction { m: (n - 2) / 2 })?)
        }
        Issue::I5 => {
            if n < 4 {
                return Err(Error::Range(format!("the I5 construction needs n >= 4, got {n}")));
            }
            build_i5(n - 1, center)
        }
        Issue::I2 => {
            let min_n = if radius == 1 { 4 } else { 7 };
            if n < min_n {
                return Err(Error::Range(format!(
                    "the I2 construction with radius {radius} needs n >= {min_n}, got {n}"
                )));
            }
            build_i2(n - 2, None, radius, center)
        }
    }
}

/// Exact lower bound on the number of distinct n-feature functions
/// exhibiting the issue at some instance. Grows doubly exponentially, so n
/// is capped at [`MAX_ARITY`]; the result is exact and meant for printing.
pub fn lower_bound(issue: Issue, n: u32) -> Result<BigUint> {
    if n > MAX_ARITY as u32 {
        return Err(Error::Capacity { requested: n, cap: MAX_ARITY });
    }
    let pow2 = |e: usize| BigUint::one() << e;
    match issue {
        Issue::I1 => {
            if n < 3 {
                return Err(Error::Range(format!("the I1 bound needs n >= 3, got {n}")));
            }
            Ok(pow2(1 << (n - 1)) - BigUint::from(n + 3))
        }
        Issue::I3 => {
            if n < 3 || n.is_multiple_of(2) {
                return Err(Error::Range(format!("the I3 bound covers odd n >= 3, got {n}")));
            }
            Ok(pow2(1 << ((n - 1) / 2)) - BigUint::from(2u32))
        }
        Issue::I4 => {
            if n < 4 || !n.is_multiple_of(2) {
                return Err(Error::Range(format!("the I4 bound covers even n >= 4, got {n}")));
            }
            Ok(pow2(1 << ((n - 2) / 2)) - BigUint::from(2u32))
        }
        Issue::I2 => {
            if n < 4 {
                return Err(Error::Range(format!("the I2 bound needs n >= 4, got {n}")));
            }
            let exp = (1usize << (n - 2)) - (n as usize - 2) - 1;
            Ok(pow2(exp) - BigUint::one())
        }
        Issue::I5 => Err(Error::Range(
            "no counting lower bound is available for i5".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn default_i1_reproduces_the_worked_example() {
        let r = build_for_arity(Issue::I1, 3, 1, None).unwrap();
        assert_eq!(r.function.table_string(), "00010101");
        assert_eq!(r.instance.point.to_string(), "001");
        assert!(!r.instance.class);
        let report = r.verify().unwrap();
        assert_eq!(report.i1, Some(2));
    }

    #[test]
    fn default_i3_reproduces_the_worked_example() {
        let r = build_for_arity(Issue::I3, 3, 1, None).unwrap();
        assert_eq!(r.function.table_string(), "01010011");
        assert_eq!(r.instance.point.to_string(), "111");
        assert!(r.instance.class);
        assert_eq!(r.verify().unwrap().i3, Some(3));
    }

    #[test]
    fn default_i4_reproduces_the_worked_example() {
        let r = build_for_arity(Issue::I4, 4, 1, None).unwrap();
        assert_eq!(r.function.table_string(), "0001010100010011");
        assert_eq!(r.instance.point.to_string(), "0011");
        assert_eq!(r.verify().unwrap().i4, Some((3, 4)));
    }

    #[test]
    fn default_i5_reproduces_the_worked_example() {
        let r = build_for_arity(Issue::I5, 4, 1, None).unwrap();
        assert_eq!(r.function.table_string(), "0000000000010110");
        assert_eq!(r.instance.point.to_string(), "1111");
        let report = r.verify().unwrap();
        assert_eq!(report.i5, Some(4));
        assert_eq!(report.shapley[3], rat(11, 64));
    }

    #[test]
    fn off_center_i5_still_fires() {
        let r = build_i5(3, Some(Point::parse("000").unwrap())).unwrap();
        let report = r.verify().unwrap();
        assert_eq!(report.i5, Some(4));
        assert_eq!(report.shapley[3], rat(11, 64));
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(i5_shapley_closed_form(3).unwrap(), rat(11, 64));
        assert_eq!(i5_shapley_closed_form(4).unwrap(), rat(13, 80));
        assert_eq!(i5_shapley_closed_form(5).unwrap(), rat(19, 128));
        assert_eq!(i5_shapley_closed_form(6).unwrap(), rat(15, 112));
        assert!(i5_shapley_closed_form(2).is_err());
    }

    #[test]
    fn default_i2_small_cases() {
        let r = build_for_arity(Issue::I2, 4, 1, None).unwrap();
        let report = r.verify().unwrap();
        assert_eq!(report.i2, Some((3, 1)));
        // radius 2: strictly ordered positive pair at the top
        let r = build_for_arity(Issue::I2, 7, 2, None).unwrap();
        let report = r.verify().unwrap();
        assert_eq!(report.shapley[5], rat(93, 448));
        assert_eq!(report.shapley[6], rat(39, 896));
    }

    #[test]
    fn seed_constraints() {
        let conj = seed(&SeedKind::Conjunction { m: 2 }).unwrap();
        let proj = seed(&SeedKind::Projection { m: 2 }).unwrap();
        assert!(build_i1(&proj, &conj).is_err()); // entailment the wrong way
        assert!(build_i1(&conj, &conj).is_err()); // equal seeds
        let c0 = BooleanFunction::constant(2, false).unwrap();
        assert!(build_i1(&c0, &proj).is_err());
        assert!(build_i3(&c0).is_err());
        assert!(build_i4(&c0).is_err());
        assert!(build_i5(2, None).is_err());
        assert!(build_i2(4, None, 3, None).is_err()); // radius out of range
        assert!(build_i2(1, None, 1, None).is_err()); // m too small
        assert!(build_i2(3, None, 2, None).is_err()); // radius 2 needs m >= 5
        // custom k1 violating the disjointness constraints
        let ones = BooleanFunction::constant(2, true).unwrap();
        assert!(build_i2(2, Some(&ones), 1, None).is_err());
    }

    #[test]
    fn exactly_one_zero_is_the_punctured_unit_ball_at_all_ones() {
        let a = seed(&SeedKind::ExactlyOneZero { m: 3 }).unwrap();
        let b = seed(&SeedKind::HammingBall {
            center: Point::all_ones(3).unwrap(),
            radius: 1,
        })
        .unwrap();
        assert_eq!(a, b);
        assert!(seed(&SeedKind::ExactlyOneZero { m: 2 }).is_err());
    }

    #[test]
    fn parity_and_range_checks() {
        assert!(matches!(build_for_arity(Issue::I3, 4, 1, None), Err(Error::Range(_))));
        assert!(matches!(build_for_arity(Issue::I4, 5, 1, None), Err(Error::Range(_))));
        assert!(matches!(build_for_arity(Issue::I1, 2, 1, None), Err(Error::Range(_))));
        assert!(matches!(build_for_arity(Issue::I2, 6, 2, None), Err(Error::Range(_))));
        assert!(matches!(build_for_arity(Issue::I1, 25, 1, None), Err(Error::Capacity { .. })));
        assert!(matches!(
            build_for_arity(Issue::I1, 5, 1, Some(Point::all_ones(4).unwrap())),
            Err(Error::Range(_))
        ));
        assert!(matches!(build_for_arity(Issue::I3, 5, 2, None), Err(Error::Range(_))));
    }

    #[test]
    fn lower_bound_values() {
        let lb = |i, n| lower_bound(i, n).unwrap().to_string();
        assert_eq!(lb(Issue::I1, 3), "10");
        assert_eq!(lb(Issue::I1, 4), "249");
        assert_eq!(lb(Issue::I1, 5), "65528");
        assert_eq!(lb(Issue::I3, 3), "2");
        assert_eq!(lb(Issue::I4, 4), "2");
        assert_eq!(lb(Issue::I2, 4), "1");
        assert!(matches!(lower_bound(Issue::I3, 4), Err(Error::Range(_))));
        assert!(matches!(lower_bound(Issue::I4, 5), Err(Error::Range(_))));
        assert!(matches!(lower_bound(Issue::I1, 2), Err(Error::Range(_))));
        assert!(matches!(lower_bound(Issue::I5, 5), Err(Error::Range(_))));
        assert!(matches!(lower_bound(Issue::I1, 25), Err(Error::Capacity { .. })));
    }

    #[test]
    fn ten_feature_bound_prints_all_digits() {
        // 2^512 - 13: 155 decimal digits
        let b = lower_bound(Issue::I1, 10).unwrap();
        let s = b.to_string();
        assert_eq!(s.len(), 155);
        assert!(s.starts_with("134078079299425970995740249982058461274793658205923933"));
        assert!(s.ends_with("084083"));
    }
}
