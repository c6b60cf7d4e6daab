//! End-to-end decision procedure and the brute-force closure oracle.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;

use crate::automata::{build_closure_dfa, Dfa};
use crate::error::{Error, Result};
use crate::natvec::NatVec;
use crate::parikh::{self, SemilinearSet};
use crate::regex::{self, Alphabet, Regex};
use crate::resimple::{build_system, ResimpleSystem};
use crate::series::{self, RationalFraction, Verdict};

/// Rounds of consistency rewriting followed by disambiguation before giving up.
const MAX_CONSISTENCY_ROUNDS: usize = 8;

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    /// Declared alphabet; inferred from the regex when absent.
    pub alphabet: Option<Alphabet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    #[serde(rename = "REGULAR")]
    Regular,
    #[serde(rename = "NOT_REGULAR")]
    NotRegular,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictKind::Regular => "REGULAR",
            VerdictKind::NotRegular => "NOT_REGULAR",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageTiming {
    pub stage: &'static str,
    pub micros: u128,
}

/// Intermediate values kept for callers that need more than the dumps.
#[derive(Clone, Debug)]
pub struct Artifacts {
    pub regex: Regex,
    pub semilinear: SemilinearSet,
    pub semisimple: SemilinearSet,
    pub fraction: RationalFraction,
    pub reduced: Option<RationalFraction>,
    pub system: Option<ResimpleSystem>,
    pub dfa: Option<Dfa>,
    pub min_dfa: Option<Dfa>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub input: String,
    pub alphabet: String,
    pub semilinear: String,
    pub semisimple: String,
    pub fraction: String,
    pub reduced: Option<String>,
    pub verdict: VerdictKind,
    pub witness: Option<Vec<u64>>,
    pub resimple: Option<String>,
    pub raw_states: Option<usize>,
    pub min_states: Option<usize>,
    pub timings: Vec<StageTiming>,
    #[serde(skip)]
    pub artifacts: Artifacts,
}

struct Clock {
    timings: Vec<StageTiming>,
}

impl Clock {
    fn run<T>(&mut self, stage: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f().map_err(|e| e.at_stage(stage));
        self.timings.push(StageTiming {
            stage,
            micros: start.elapsed().as_micros(),
        });
        out
    }
}

/// Brings a union of linear sets to consistent semi-simple form.
pub fn semisimple_consistent(s: &SemilinearSet) -> Result<SemilinearSet> {
    let free = parikh::make_free_set(s)?;
    let mut cur = parikh::disambiguate(&free)?;
    for _ in 0..MAX_CONSISTENCY_ROUNDS {
        let consistent = parikh::make_consistent(&cur)?;
        cur = parikh::disambiguate(&consistent)?;
        if cur.consistent.is_yes() {
            return Ok(cur);
        }
    }
    Err(Error::ResourceCap(format!(
        "no consistent unambiguous form after {MAX_CONSISTENCY_ROUNDS} rounds"
    )))
}

pub fn run_pipeline(text: &str, options: &PipelineOptions) -> Result<PipelineReport> {
    let mut clock = Clock {
        timings: Vec::new(),
    };
    let regex = clock.run("parse", || regex::parse_regex(text, options.alphabet.as_ref()))?;
    let k = regex.alphabet.len();
    let semilinear = clock.run("semilinear", || {
        Ok(parikh::to_semilinear(&regex::parikh_expression(&regex), k))
    })?;
    let semisimple = clock.run("semisimple", || semisimple_consistent(&semilinear))?;
    let fraction = clock.run("series", || series::char_series(&semisimple))?;
    let verdict = clock.run("decide", || Ok(series::simplify_and_decide(&fraction)))?;

    let mut report = PipelineReport {
        input: text.to_string(),
        alphabet: regex.alphabet.to_string(),
        semilinear: semilinear.to_string(),
        semisimple: semisimple.to_string(),
        fraction: fraction.to_string(),
        reduced: None,
        verdict: VerdictKind::NotRegular,
        witness: None,
        resimple: None,
        raw_states: None,
        min_states: None,
        timings: Vec::new(),
        artifacts: Artifacts {
            regex: regex.clone(),
            semilinear: semilinear.clone(),
            semisimple: semisimple.clone(),
            fraction: fraction.clone(),
            reduced: None,
            system: None,
            dfa: None,
            min_dfa: None,
        },
    };
    match verdict {
        Verdict::NotRecognizable { witness, .. } => {
            report.witness = Some(witness.0);
        }
        Verdict::Recognizable(reduced) => {
            let system = clock.run("resimple", || {
                build_system(&reduced.numerator, &reduced.denominator)
            })?;
            let dfa = clock.run("automaton", || build_closure_dfa(&system, &regex.alphabet))?;
            let min = clock.run("minimize", || Ok(dfa.minimize()))?;
            report.verdict = VerdictKind::Regular;
            report.reduced = Some(reduced.to_string());
            report.resimple = Some(system.to_string());
            report.raw_states = Some(dfa.num_states());
            report.min_states = Some(min.num_states());
            report.artifacts.reduced = Some(reduced);
            report.artifacts.system = Some(system);
            report.artifacts.dfa = Some(dfa);
            report.artifacts.min_dfa = Some(min);
        }
    }
    report.timings = clock.timings;
    Ok(report)
}

/// Words of length at most `max_len` that are permutations of words of the language.
pub fn brute_closure(
    text: &str,
    alphabet: Option<&Alphabet>,
    max_len: usize,
) -> Result<BTreeSet<String>> {
    let regex = regex::parse_regex(text, alphabet)?;
    let words = regex::enumerate_language(&regex, max_len)?;
    let mut images = BTreeSet::new();
    for w in &words {
        images.insert(regex.alphabet.parikh(w)?);
    }
    let mut out = BTreeSet::new();
    for v in images {
        permutations(regex.alphabet.letters(), &v, &mut String::new(), &mut out);
        if out.len() > regex::DEFAULT_WORD_CAP {
            return Err(Error::ResourceCap(format!(
                "closure oracle exceeds {} words",
                regex::DEFAULT_WORD_CAP
            )));
        }
    }
    Ok(out)
}

fn permutations(letters: &[char], rest: &NatVec, cur: &mut String, out: &mut BTreeSet<String>) {
    if rest.is_zero() {
        out.insert(cur.clone());
        return;
    }
    for (j, &c) in letters.iter().enumerate() {
        if rest[j] > 0 {
            let mut next = rest.clone();
            next.0[j] -= 1;
            cur.push(c);
            permutations(letters, &next, cur, out);
            cur.pop();
        }
    }
}

/// All words over the letters with length at most `max_len`, shortest first.
pub fn all_words(letters: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| letters.iter().map(move |&c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub word: String,
    pub automaton: bool,
    pub oracle: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub words_checked: usize,
    pub counterexample: Option<Counterexample>,
}

/// Compares the constructed automata with the brute-force closure on every
/// word of length at most `max_len`.
pub fn verify(text: &str, options: &PipelineOptions, max_len: usize) -> Result<VerifyReport> {
    let report = run_pipeline(text, options)?;
    let (Some(dfa), Some(min)) = (&report.artifacts.dfa, &report.artifacts.min_dfa) else {
        return Err(Error::Precondition(
            "verification needs a REGULAR verdict".into(),
        ));
    };
    let closure = brute_closure(text, Some(&report.artifacts.regex.alphabet), max_len)?;
    let words = all_words(report.artifacts.regex.alphabet.letters(), max_len);
    for w in &words {
        let oracle = closure.contains(w);
        for d in [dfa, min] {
            let got = d.accepts(w)?;
            if got != oracle {
                return Ok(VerifyReport {
                    passed: false,
                    words_checked: words.len(),
                    counterexample: Some(Counterexample {
                        word: w.clone(),
                        automaton: got,
                        oracle,
                    }),
                });
            }
        }
    }
    Ok(VerifyReport {
        passed: true,
        words_checked: words.len(),
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> PipelineReport {
        run_pipeline(text, &PipelineOptions::default()).unwrap()
    }

    #[test]
    fn even_example() {
        let r = run("b(aa|bb)*");
        assert_eq!(r.verdict, VerdictKind::Regular);
        assert_eq!(r.fraction, "y / ((1 - x^2)*(1 - y^2))");
        assert_eq!(r.min_states, Some(4));
    }

    #[test]
    fn diagonal_is_not_regular() {
        let r = run("(ab)*");
        assert_eq!(r.verdict, VerdictKind::NotRegular);
        assert_eq!(r.witness, Some(vec![1, 1]));
        assert_eq!(r.fraction, "1 / (1 - x*y)");
        assert_eq!(run("ab(ab)*").fraction, "x*y / (1 - x*y)");
    }

    #[test]
    fn example_s_chain() {
        let r = run("ab(ab)*|a(a|ab)*|b(b|ab)*");
        assert_eq!(r.verdict, VerdictKind::Regular);
        assert_eq!(r.reduced.as_deref(), Some("(x + y - x*y) / ((1 - x)*(1 - y))"));
        assert_eq!(r.min_states, Some(2));
    }

    #[test]
    fn oracle_examples() {
        let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(
            brute_closure("(ab)*", None, 4).unwrap(),
            set(&["", "ab", "ba", "aabb", "abab", "abba", "baab", "baba", "bbaa"])
        );
        assert!(brute_closure("#", None, 5).unwrap().is_empty());
        assert_eq!(
            brute_closure("b(aa|bb)*", None, 3).unwrap(),
            set(&["b", "aab", "aba", "baa", "bbb"])
        );
    }

    #[test]
    fn verify_examples() {
        let o = PipelineOptions::default();
        assert!(verify("b(aa|bb)*", &o, 10).unwrap().passed);
        assert!(verify("a*", &o, 8).unwrap().passed);
        assert!(verify("ab(ab)*|a(a|ab)*|b(b|ab)*", &o, 8).unwrap().passed);
        assert!(verify("(ab)*", &o, 4).is_err());
    }

    #[test]
    fn stage_tags_on_errors() {
        let e = run_pipeline("a(b", &PipelineOptions::default()).unwrap_err();
        assert!(matches!(e, Error::Stage { stage: "parse", .. }));
    }
}
