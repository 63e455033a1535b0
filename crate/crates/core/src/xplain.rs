//! Abductive and contrastive explanations, feature relevancy, and the
//! minimal-hitting-set duality between the two explanation families.
//!
//! A weak abductive explanation (WAXp) is a feature set S such that fixing
//! the instance's values on S forces the prediction; an AXp is a
//! subset-minimal WAXp. Dually, a weak contrastive explanation (WCXp) is a
//! set whose freeing admits a prediction change, and a CXp is minimal among
//! those. Both "weak" predicates are monotone, so minimality only needs
//! single-feature deletion checks.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::model::{ExplanationProblem, FeatureSet};

/// Per-feature label: occurs in every AXp / in some / in none.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relevancy {
    Necessary,
    Relevant,
    Irrelevant,
}

impl Relevancy {
    /// Necessary features are in particular relevant.
    pub fn is_relevant(&self) -> bool {
        !matches!(self, Relevancy::Irrelevant)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Relevancy::Necessary => "necessary",
            Relevancy::Relevant => "relevant",
            Relevancy::Irrelevant => "irrelevant",
        }
    }
}

impl std::fmt::Display for Relevancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The WAXp predicate tabulated for every feature subset.
///
/// Entry S answers "does every point agreeing with v on S get the same
/// prediction as v?". Computed with an n-pass AND-fold over the subset
/// lattice (the dual of the phi-table's sum fold), wordwise on packed bits.
pub struct WaxpMap {
    problem: ExplanationProblem,
    fixed_ok: Bits,
}

pub fn waxp_map(problem: &ExplanationProblem) -> WaxpMap {
    let n = problem.arity() as usize;
    let size = 1usize << n;
    let v = problem.v_index() as usize;
    let c = problem.class();
    let f = problem.function();
    // b[z] = "the point differing from v exactly on z keeps the class";
    // AND over all z inside the complement of S gives the predicate for S.
    let mut b = Bits::from_fn(size, |z| f.eval_index((z ^ v) as u32) == c);
    b.fold_and_subsets();
    WaxpMap { problem: problem.clone(), fixed_ok: b.reversed() }
}

impl WaxpMap {
    #[inline]
    pub fn arity(&self) -> u8 {
        self.problem.arity()
    }

    pub fn problem(&self) -> &ExplanationProblem {
        &self.problem
    }

    fn check_mask(&self, s: FeatureSet) -> Result<()> {
        if s.mask() as usize >= self.fixed_ok.len() {
            let bad = 32 - s.mask().leading_zeros();
            return Err(Error::Feature { feature: bad as u8, arity: self.arity() });
        }
        Ok(())
    }

    pub fn is_waxp(&self, s: FeatureSet) -> Result<bool> {
        self.check_mask(s)?;
        Ok(self.fixed_ok.get(s.mask() as usize))
    }

    /// Freeing S admits a flip iff fixing the complement does not force.
    pub fn is_wcxp(&self, s: FeatureSet) -> Result<bool> {
        self.check_mask(s)?;
        let full = self.fixed_ok.len() - 1;
        Ok(!self.fixed_ok.get(full ^ s.mask() as usize))
    }

    /// All subset-minimal WAXp's, ascending by mask value.
    pub fn axps(&self) -> Vec<FeatureSet> {
        let size = self.fixed_ok.len();
        let mut out = Vec::new();
        'next: for s in 0..size {
            if !self.fixed_ok.get(s) {
                continue;
            }
            let mut rest = s;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                if self.fixed_ok.get(s ^ bit) {
                    continue 'next;
                }
                rest ^= bit;
            }
            out.push(FeatureSet::from_mask(s as u32));
        }
        out
    }

    /// All subset-minimal WCXp's, ascending by mask value.
    pub fn cxps(&self) -> Vec<FeatureSet> {
        let size = self.fixed_ok.len();
        let full = size - 1;
        let wcxp = |y: usize| !self.fixed_ok.get(full ^ y);
        let mut out = Vec::new();
        'next: for y in 0..size {
            if !wcxp(y) {
                continue;
            }
            let mut rest = y;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                if wcxp(y ^ bit) {
                    continue 'next;
                }
                rest ^= bit;
            }
            out.push(FeatureSet::from_mask(y as u32));
        }
        out
    }
}

/// Definitional WAXp check: scan the whole agreement cube of S. Independent
/// of the folded map; useful as a spot oracle.
pub fn is_waxp(problem: &ExplanationProblem, s: FeatureSet) -> Result<bool> {
    check_set(problem, s)?;
    let full = (1u32 << problem.arity()) - 1;
    let free = full & !s.mask();
    let v = problem.v_index();
    let c = problem.class();
    let f = problem.function();
    let mut z = free;
    loop {
        if f.eval_index(v ^ z) != c {
            return Ok(false);
        }
        if z == 0 {
            return Ok(true);
        }
        z = (z - 1) & free;
    }
}

/// Definitional WCXp check: look for a class flip among points agreeing with
/// v outside S.
pub fn is_wcxp(problem: &ExplanationProblem, s: FeatureSet) -> Result<bool> {
    check_set(problem, s)?;
    let v = problem.v_index();
    let c = problem.class();
    let f = problem.function();
    let mut z = s.mask();
    loop {
        if f.eval_index(v ^ z) != c {
            return Ok(true);
        }
        if z == 0 {
            return Ok(false);
        }
        z = (z - 1) & s.mask();
    }
}

fn check_set(problem: &ExplanationProblem, s: FeatureSet) -> Result<()> {
    if u64::from(s.mask()) >= 1u64 << problem.arity() {
        let bad = 32 - s.mask().leading_zeros();
        return Err(Error::Feature { feature: bad as u8, arity: problem.arity() });
    }
    Ok(())
}

pub fn enumerate_axps(problem: &ExplanationProblem) -> Vec<FeatureSet> {
    waxp_map(problem).axps()
}

pub fn enumerate_cxps(problem: &ExplanationProblem) -> Vec<FeatureSet> {
    waxp_map(problem).cxps()
}

/// Labels for features 1..=n derived from the AXp family.
pub fn classify_features(problem: &ExplanationProblem) -> Vec<Relevancy> {
    classify_from_axps(&waxp_map(problem).axps(), problem.arity())
}

fn classify_from_axps(axps: &[FeatureSet], n: u8) -> Vec<Relevancy> {
    (1..=n)
        .map(|i| {
            let occurrences = axps.iter().filter(|s| s.contains(i)).count();
            if occurrences == 0 {
                Relevancy::Irrelevant
            } else if occurrences == axps.len() {
                Relevancy::Necessary
            } else {
                Relevancy::Relevant
            }
        })
        .collect()
}

/// Both explanation families plus the relevancy labels, from one map.
pub struct ExplanationSets {
    pub axps: Vec<FeatureSet>,
    pub cxps: Vec<FeatureSet>,
    pub relevancy: Vec<Relevancy>,
}

pub fn explanation_sets(problem: &ExplanationProblem) -> ExplanationSets {
    let map = waxp_map(problem);
    let axps = map.axps();
    let cxps = map.cxps();
    let relevancy = classify_from_axps(&axps, problem.arity());
    ExplanationSets { axps, cxps, relevancy }
}

/// Minimal hitting sets of a family of feature sets over features 1..=n.
///
/// "Hits every member" is monotone in the candidate, so minimality again
/// reduces to single-feature deletions. The empty family is hit by the empty
/// set; a family containing the empty set is hit by nothing.
pub fn minimal_hitting_sets(family: &[FeatureSet], n: u8) -> Vec<FeatureSet> {
    let size = 1usize << n;
    let masks: Vec<u32> = family.iter().map(|s| s.mask()).collect();
    let hits = |h: usize| masks.iter().all(|&a| a & h as u32 != 0);
    let mut out = Vec::new();
    'next: for h in 0..size {
        if !hits(h) {
            continue;
        }
        let mut rest = h;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            if hits(h ^ bit) {
                continue 'next;
            }
            rest ^= bit;
        }
        out.push(FeatureSet::from_mask(h as u32));
    }
    out
}

/// Self-test of the duality: each family must be exactly the minimal hitting
/// sets of the other, and both unions must agree. Holds for every problem;
/// a false return means the enumeration is broken.
pub fn check_duality(problem: &ExplanationProblem) -> bool {
    let sets = explanation_sets(problem);
    let n = problem.arity();
    let union = |fam: &[FeatureSet]| fam.iter().fold(FeatureSet::EMPTY, |a, s| a.union(s));
    union(&sets.axps) == union(&sets.cxps)
        && minimal_hitting_sets(&sets.axps, n) == sets.cxps
        && minimal_hitting_sets(&sets.cxps, n) == sets.axps
}
