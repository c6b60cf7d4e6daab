//! Commutative closure of regular languages: decide whether the closure is
//! regular and, when it is, build a complete DFA for it.
//!
//! The pipeline goes regex → Parikh image → consistent semi-simple set →
//! characteristic series → recognizability test → resimple system → DFA.

pub mod automata;
pub mod error;
pub mod natvec;
pub mod parikh;
pub mod pipeline;
pub mod regex;
pub mod resimple;
pub mod series;

pub use automata::Dfa;
pub use error::{Error, Result};
pub use natvec::NatVec;
pub use parikh::{LinearSet, RationalExpr, SemilinearSet};
pub use pipeline::{brute_closure, run_pipeline, verify, PipelineOptions, PipelineReport, VerdictKind};
pub use regex::{parse_regex, Alphabet, Regex, RegexNode};
pub use resimple::ResimpleSystem;
pub use series::{FactoredDenominator, Polynomial, RationalFraction, Verdict};
