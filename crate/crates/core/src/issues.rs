//! Detectors for the five ways a Shapley attribution can contradict formal
//! feature relevancy on the same problem:
//!
//!   I1  an irrelevant feature gets a nonzero Shapley value
//!   I2  an irrelevant feature strictly outranks some relevant one in |Sv|
//!   I3  a relevant feature gets Shapley value exactly zero
//!   I4  both I1 and I3 at once (witnessed by a pair of features)
//!   I5  the strict |Sv| maximum is an irrelevant feature
//!
//! All comparisons are exact rational comparisons. When several features
//! qualify, the reported witness is the lowest index (pairs: lexicographic).

use num_traits::{Signed, Zero};

use crate::model::ExplanationProblem;
use crate::shapley::{phi_table, Rational};
use crate::xplain::{explanation_sets, Relevancy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Issue {
    I1,
    I2,
    I3,
    I4,
    I5,
}

impl Issue {
    pub const ALL: [Issue; 5] = [Issue::I1, Issue::I2, Issue::I3, Issue::I4, Issue::I5];

    pub fn index(&self) -> usize {
        match self {
            Issue::I1 => 0,
            Issue::I2 => 1,
            Issue::I3 => 2,
            Issue::I4 => 3,
            Issue::I5 => 4,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Issue::I1 => "i1",
            Issue::I2 => "i2",
            Issue::I3 => "i3",
            Issue::I4 => "i4",
            Issue::I5 => "i5",
        }
    }
}

impl std::fmt::Display for Issue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "I{}", self.index() + 1)
    }
}

impl std::str::FromStr for Issue {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "i1" => Ok(Issue::I1),
            "i2" => Ok(Issue::I2),
            "i3" => Ok(Issue::I3),
            "i4" => Ok(Issue::I4),
            "i5" => Ok(Issue::I5),
            _ => Err(crate::error::Error::Range(format!(
                "unknown issue {s:?}; expected one of i1..i5"
            ))),
        }
    }
}

/// Outcome of running all five detectors on one problem. A `Some` witness is
/// the issue firing; features are 1-based, pairs are (irrelevant, relevant)
/// for I2 and (I1 witness, I3 witness) for I4.
#[derive(Debug, Clone, PartialEq)]
pub struct IssueReport {
    pub shapley: Vec<Rational>,
    pub relevancy: Vec<Relevancy>,
    pub i1: Option<u8>,
    pub i2: Option<(u8, u8)>,
    pub i3: Option<u8>,
    pub i4: Option<(u8, u8)>,
    pub i5: Option<u8>,
}

impl IssueReport {
    pub fn has(&self, issue: Issue) -> bool {
        match issue {
            Issue::I1 => self.i1.is_some(),
            Issue::I2 => self.i2.is_some(),
            Issue::I3 => self.i3.is_some(),
            Issue::I4 => self.i4.is_some(),
            Issue::I5 => self.i5.is_some(),
        }
    }

    pub fn any(&self) -> bool {
        Issue::ALL.iter().any(|&i| self.has(i))
    }
}

/// Run all five detectors.
///
/// A constant function never fires: classifiers are non-constant by
/// definition and a constant table has no relevancy signal at all (this also
/// keeps I5's "strictly above all others" quantifier from being vacuously
/// true on single-feature constant tables).
pub fn detect(problem: &ExplanationProblem) -> IssueReport {
    let n = problem.arity();
    if problem.function().is_constant() {
        return IssueReport {
            shapley: vec![Rational::zero(); n as usize],
            relevancy: vec![Relevancy::Irrelevant; n as usize],
            i1: None,
            i2: None,
            i3: None,
            i4: None,
            i5: None,
        };
    }

    let sets = explanation_sets(problem);
    let sv = phi_table(problem).shapley_all();
    let relevant: Vec<bool> = sets.relevancy.iter().map(Relevancy::is_relevant).collect();
    let features = 1..=n;

    let i1 = features
        .clone()
        .find(|&i| !relevant[i as usize - 1] && !sv[i as usize - 1].is_zero());
    let i3 = features
        .clone()
        .find(|&i| relevant[i as usize - 1] && sv[i as usize - 1].is_zero());
    let i4 = i1.zip(i3);

    let mut i2 = None;
    'outer: for a in features.clone() {
        if relevant[a as usize - 1] {
            continue;
        }
        for b in features.clone() {
            if relevant[b as usize - 1] && sv[a as usize - 1].abs() > sv[b as usize - 1].abs() {
                i2 = Some((a, b));
                break 'outer;
            }
        }
    }

    let max = sv.iter().map(Rational::abs).max().expect("nonempty");
    let mut attaining = features.filter(|&i| sv[i as usize - 1].abs() == max);
    let i5 = match (attaining.next(), attaining.next()) {
        (Some(i), None) if !relevant[i as usize - 1] => Some(i),
        _ => None, // ties or a relevant maximum disqualify
    };

    IssueReport { shapley: sv, relevancy: sets.relevancy, i1, i2, i3, i4, i5 }
}

/// The I5 -> I2 implication the detectors must never violate; a false return
/// signals a detector defect, never a property of the problem.
pub fn implies_i2(report: &IssueReport) -> bool {
    report.i5.is_none() || report.i2.is_some()
}
