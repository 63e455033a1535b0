//! Exact game-theoretic feature attribution for Boolean classifiers given
//! as truth tables, side by side with formal abductive/contrastive
//! explanations — and detectors for the five ways the attribution ranking
//! can disagree with what the explanations say actually matters.
//!
//! The pieces:
//!
//! - [`model`]: truth-table functions, points, instances, the `.btt` text
//!   format, and the subset-of-features type.
//! - [`shapley`]: the exact characteristic function and Shapley values as
//!   big rationals, plus an independent brute-force oracle.
//! - [`xplain`]: weak/minimal abductive and contrastive explanations,
//!   feature relevancy, minimal hitting sets, and the duality self-check.
//! - [`issues`]: the five misleading-attribution predicates with witnesses.
//! - [`constructions`]: builders that manufacture witness functions at any
//!   arity, with closed-form values and counting lower bounds.
//! - [`search`]: exhaustive/sampled sweeps over whole function spaces.
//!
//! Everything is exact (integer counts and `BigRational`); nothing here
//! samples or approximates unless explicitly asked to (`search` sampling).

mod bits;
pub mod constructions;
pub mod error;
pub mod issues;
pub mod model;
pub mod search;
pub mod shapley;
pub mod xplain;

pub use error::{Error, Result};
pub use issues::{detect, implies_i2, Issue, IssueReport};
pub use model::{
    parse_function, serialize_function, BooleanFunction, ExplanationProblem, FeatureSet,
    Instance, Point, MAX_ARITY,
};
pub use shapley::{decimal3, shapley_all, shapley_value, Rational};
pub use xplain::{
    check_duality, classify_features, enumerate_axps, enumerate_cxps, explanation_sets,
    minimal_hitting_sets, ExplanationSets, Relevancy,
};
