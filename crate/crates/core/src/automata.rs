//! Complete deterministic automata: counters, shuffle and boolean products,
//! the grid construction for resimple systems, Moore minimization and exports.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regex::Alphabet;
use crate::resimple::ResimpleSystem;

/// Complete DFA; `transitions[s][i]` is the successor of `s` on `alphabet[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<char>,
    transitions: Vec<Vec<usize>>,
    initial: usize,
    finals: Vec<bool>,
}

impl Dfa {
    pub fn new(
        alphabet: Vec<char>,
        transitions: Vec<Vec<usize>>,
        initial: usize,
        finals: Vec<bool>,
    ) -> Result<Self> {
        let n = transitions.len();
        if n == 0 || initial >= n || finals.len() != n {
            return Err(Error::Malformed("state set, initial or finals inconsistent".into()));
        }
        let distinct: BTreeSet<char> = alphabet.iter().copied().collect();
        if distinct.len() != alphabet.len() {
            return Err(Error::Malformed("repeated letter in alphabet".into()));
        }
        for row in &transitions {
            if row.len() != alphabet.len() || row.iter().any(|&t| t >= n) {
                return Err(Error::Malformed("transition table is not complete".into()));
            }
        }
        Ok(Dfa {
            alphabet,
            transitions,
            initial,
            finals,
        })
    }

    /// One state, looping on every letter.
    pub fn trivial(alphabet: Vec<char>, accept: bool) -> Self {
        let row = vec![0; alphabet.len()];
        Dfa {
            alphabet,
            transitions: vec![row],
            initial: 0,
            finals: vec![accept],
        }
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, s: usize) -> bool {
        self.finals[s]
    }

    pub fn finals(&self) -> Vec<usize> {
        (0..self.num_states()).filter(|&s| self.finals[s]).collect()
    }

    pub fn step(&self, s: usize, letter: char) -> Result<usize> {
        let i = self.letter_index(letter)?;
        Ok(self.transitions[s][i])
    }

    fn letter_index(&self, letter: char) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|&c| c == letter)
            .ok_or(Error::UnknownLetter(letter))
    }

    pub fn accepts(&self, word: &str) -> Result<bool> {
        let mut s = self.initial;
        for c in word.chars() {
            s = self.transitions[s][self.letter_index(c)?];
        }
        Ok(self.finals[s])
    }

    /// `(from, letter, to)` for every transition, in state then alphabet order.
    pub fn edges(&self) -> Vec<(usize, char, usize)> {
        let mut out = Vec::with_capacity(self.num_states() * self.alphabet.len());
        for (s, row) in self.transitions.iter().enumerate() {
            for (i, &t) in row.iter().enumerate() {
                out.push((s, self.alphabet[i], t));
            }
        }
        out
    }

    /// Checks on the edge list that every state has exactly one successor per letter.
    pub fn audit(&self) -> Result<()> {
        let mut count: HashMap<(usize, char), usize> = HashMap::new();
        for (s, c, t) in self.edges() {
            if t >= self.num_states() {
                return Err(Error::Invariant(format!("edge q{s} -{c}-> q{t} leaves the state set")));
            }
            *count.entry((s, c)).or_default() += 1;
        }
        for s in 0..self.num_states() {
            for &c in &self.alphabet {
                let n = count.get(&(s, c)).copied().unwrap_or(0);
                if n != 1 {
                    return Err(Error::Invariant(format!(
                        "state q{s} has {n} transitions on '{c}'"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Breadth-first renumbering from the initial state, letters in alphabet
    /// order; unreachable states are dropped.
    pub fn renumber(&self) -> Dfa {
        let mut id = vec![usize::MAX; self.num_states()];
        let mut order = vec![self.initial];
        id[self.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for &t in &self.transitions[s] {
                if id[t] == usize::MAX {
                    id[t] = order.len();
                    order.push(t);
                }
            }
            i += 1;
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            transitions: order
                .iter()
                .map(|&s| self.transitions[s].iter().map(|&t| id[t]).collect())
                .collect(),
            initial: 0,
            finals: order.iter().map(|&s| self.finals[s]).collect(),
        }
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            finals: self.finals.iter().map(|f| !f).collect(),
            ..self.clone()
        }
    }

    /// Moore partition refinement followed by canonical renumbering.
    pub fn minimize(&self) -> Dfa {
        let d = self.renumber();
        let n = d.num_states();
        let mut class: Vec<usize> = d.finals.iter().map(|&f| usize::from(f)).collect();
        let mut count = class.iter().collect::<BTreeSet<_>>().len();
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|s| {
                    let mut sig = vec![class[s]];
                    sig.extend(d.transitions[s].iter().map(|&t| class[t]));
                    let len = ids.len();
                    *ids.entry(sig).or_insert(len)
                })
                .collect();
            let new_count = ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut transitions = vec![Vec::new(); count];
        let mut finals = vec![false; count];
        for s in 0..n {
            let c = class[s];
            transitions[c] = d.transitions[s].iter().map(|&t| class[t]).collect();
            finals[c] = d.finals[s];
        }
        Dfa {
            alphabet: d.alphabet,
            transitions,
            initial: class[d.initial],
            finals,
        }
        .renumber()
    }

    /// Language equality via a product walk.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        let x = product(self, other, |a, b| a != b)?;
        Ok(x.finals.iter().all(|f| !f))
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  __start [shape=point];\n");
        for s in 0..self.num_states() {
            let shape = if self.finals[s] { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  q{s} [shape={shape}];");
        }
        let _ = writeln!(out, "  __start -> q{};", self.initial);
        for (s, row) in self.transitions.iter().enumerate() {
            let mut grouped: BTreeMap<usize, Vec<char>> = BTreeMap::new();
            for (i, &t) in row.iter().enumerate() {
                grouped.entry(t).or_default().push(self.alphabet[i]);
            }
            for (t, letters) in grouped {
                let label: Vec<String> = letters.iter().map(char::to_string).collect();
                let _ = writeln!(out, "  q{s} -> q{t} [label=\"{}\"];", label.join(","));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        let doc = JsonDfa {
            alphabet: self.alphabet.iter().map(char::to_string).collect(),
            states: self.num_states(),
            initial: self.initial,
            finals: self.finals(),
            transitions: self
                .edges()
                .into_iter()
                .map(|(from, c, to)| JsonEdge {
                    from,
                    letter: c.to_string(),
                    to,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("automaton serializes")
    }

    pub fn from_json(text: &str) -> Result<Dfa> {
        let doc: JsonDfa =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let single = |s: &str| -> Result<char> {
            let mut it = s.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(Error::Malformed(format!("letter {s:?} is not one character"))),
            }
        };
        let alphabet: Vec<char> = doc.alphabet.iter().map(|s| single(s)).collect::<Result<_>>()?;
        let mut table = vec![vec![None; alphabet.len()]; doc.states];
        for e in &doc.transitions {
            let c = single(&e.letter)?;
            let i = alphabet
                .iter()
                .position(|&x| x == c)
                .ok_or(Error::UnknownLetter(c))?;
            let slot = table
                .get_mut(e.from)
                .ok_or_else(|| Error::Malformed(format!("state {} out of range", e.from)))?;
            if slot[i].replace(e.to).is_some() {
                return Err(Error::Malformed(format!("duplicate transition q{} '{c}'", e.from)));
            }
        }
        let transitions = table
            .into_iter()
            .map(|row| row.into_iter().collect::<Option<Vec<usize>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Malformed("missing transitions".into()))?;
        let mut finals = vec![false; doc.states];
        for f in doc.finals {
            *finals
                .get_mut(f)
                .ok_or_else(|| Error::Malformed(format!("final state {f} out of range")))? = true;
        }
        Dfa::new(alphabet, transitions, doc.initial, finals)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    from: usize,
    letter: String,
    to: usize,
}

#[derive(Serialize, Deserialize)]
struct JsonDfa {
    alphabet: Vec<String>,
    states: usize,
    initial: usize,
    finals: Vec<usize>,
    transitions: Vec<JsonEdge>,
}

/// Counter over one letter: states `0..tail+period`, the last wrapping to `tail`.
pub fn counter(
    letter: char,
    tail: usize,
    period: usize,
    accept: impl Fn(usize) -> bool,
) -> Result<Dfa> {
    if period == 0 {
        return Err(Error::Precondition("counter period must be at least 1".into()));
    }
    let n = tail + period;
    let transitions = (0..n)
        .map(|s| vec![if s + 1 == n { tail } else { s + 1 }])
        .collect();
    let finals = (0..n).map(accept).collect();
    Dfa::new(vec![letter], transitions, 0, finals)
}

/// Asynchronous product of automata over pairwise disjoint alphabets.
pub fn shuffle_product(parts: &[Dfa]) -> Result<Dfa> {
    let mut owner: BTreeMap<char, (usize, usize)> = BTreeMap::new();
    for (p, d) in parts.iter().enumerate() {
        for (i, &c) in d.alphabet.iter().enumerate() {
            if owner.insert(c, (p, i)).is_some() {
                return Err(Error::AlphabetMismatch(format!(
                    "letter '{c}' occurs in two shuffle operands"
                )));
            }
        }
    }
    let alphabet: Vec<char> = owner.keys().copied().collect();
    let start: Vec<usize> = parts.iter().map(|d| d.initial).collect();
    explore(alphabet, start, |state, c| {
        let (p, i) = owner[&c];
        let mut next = state.to_vec();
        next[p] = parts[p].transitions[state[p]][i];
        next
    }, |state| state.iter().zip(parts).all(|(&s, d)| d.finals[s]))
}

/// Breadth-first construction over tuple states.
fn explore(
    alphabet: Vec<char>,
    start: Vec<usize>,
    step: impl Fn(&[usize], char) -> Vec<usize>,
    accept: impl Fn(&[usize]) -> bool,
) -> Result<Dfa> {
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut order = vec![start.clone()];
    ids.insert(start, 0);
    let mut transitions = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let cur = order[i].clone();
        let mut row = Vec::with_capacity(alphabet.len());
        for &c in &alphabet {
            let next = step(&cur, c);
            let len = order.len();
            let id = *ids.entry(next.clone()).or_insert_with(|| len);
            if id == len {
                order.push(next);
            }
            row.push(id);
        }
        transitions.push(row);
        i += 1;
    }
    let finals = order.iter().map(|s| accept(s)).collect();
    Dfa::new(alphabet, transitions, 0, finals)
}

fn product(a: &Dfa, b: &Dfa, combine: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            a.alphabet, b.alphabet
        )));
    }
    let index: BTreeMap<char, usize> = a.alphabet.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    explore(
        a.alphabet.clone(),
        vec![a.initial, b.initial],
        |s, c| {
            let i = index[&c];
            vec![a.transitions[s[0]][i], b.transitions[s[1]][i]]
        },
        |s| combine(a.finals[s[0]], b.finals[s[1]]),
    )
}

pub fn intersect(a: &Dfa, b: &Dfa) -> Result<Dfa> {
    product(a, b, |x, y| x && y)
}

pub fn union(a: &Dfa, b: &Dfa) -> Result<Dfa> {
    product(a, b, |x, y| x || y)
}

pub fn complement(d: &Dfa) -> Dfa {
    d.complement()
}

pub fn minimize(d: &Dfa) -> Dfa {
    d.minimize()
}

pub fn accepts(d: &Dfa, word: &str) -> Result<bool> {
    d.accepts(word)
}

pub fn export_dot(d: &Dfa) -> String {
    d.to_dot()
}

pub fn export_json(d: &Dfa) -> String {
    d.to_json()
}

/// All interleavings of two words.
pub fn shuffle_words(u: &str, v: &str) -> BTreeSet<String> {
    fn go(u: &[char], v: &[char], cur: &mut String, out: &mut BTreeSet<String>) {
        if u.is_empty() && v.is_empty() {
            out.insert(cur.clone());
            return;
        }
        if let Some((&c, rest)) = u.split_first() {
            cur.push(c);
            go(rest, v, cur, out);
            cur.pop();
        }
        if let Some((&c, rest)) = v.split_first() {
            cur.push(c);
            go(u, rest, cur, out);
            cur.pop();
        }
    }
    let u: Vec<char> = u.chars().collect();
    let v: Vec<char> = v.chars().collect();
    let mut out = BTreeSet::new();
    go(&u, &v, &mut String::new(), &mut out);
    out
}

fn check_alphabet(sys: &ResimpleSystem, alphabet: &Alphabet) -> Result<()> {
    if alphabet.len() != sys.dim {
        return Err(Error::AlphabetMismatch(format!(
            "system has {} coordinates, alphabet {} letters",
            sys.dim,
            alphabet.len()
        )));
    }
    Ok(())
}

/// `(tail, period)` of the coordinate counter used by the grid construction.
pub fn grid_counter_shape(sys: &ResimpleSystem, j: usize) -> (u64, u64) {
    let t = sys.tails()[j];
    match sys.periods[j] {
        Some(p) => (t, p),
        None => (t + 1, 1),
    }
}

/// Grid product of per-coordinate counters; final where the term pattern is good.
pub fn build_closure_dfa(sys: &ResimpleSystem, alphabet: &Alphabet) -> Result<Dfa> {
    check_alphabet(sys, alphabet)?;
    let letters = alphabet.letters().to_vec();
    if sys.terms.is_empty() {
        return Ok(Dfa::trivial(letters, false));
    }
    let masks = sys.coordinate_masks();
    let shapes: Vec<(usize, usize)> = (0..sys.dim)
        .map(|j| {
            let (t, p) = grid_counter_shape(sys, j);
            (t as usize, p as usize)
        })
        .collect();
    let d = explore(
        letters,
        vec![0; sys.dim],
        |s, c| {
            let j = alphabet.index_of(c).expect("letter of the alphabet");
            let (t, p) = shapes[j];
            let mut next = s.to_vec();
            next[j] = if s[j] + 1 == t + p { t } else { s[j] + 1 };
            next
        },
        |s| {
            let pattern = s
                .iter()
                .enumerate()
                .fold(sys.all_mask(), |acc, (j, &v)| acc & masks[j][v]);
            sys.good_classes.contains(&pattern)
        },
    )?;
    Ok(d.renumber())
}

/// Shuffle product of counters recognizing `φ^{-1}(S_h)` for one term, with
/// tail `d_{h,j}` and the common period (or a sink for period-free coordinates).
pub fn atomic_dfa(sys: &ResimpleSystem, h: usize, alphabet: &Alphabet) -> Result<Dfa> {
    check_alphabet(sys, alphabet)?;
    let parts = (0..sys.dim)
        .map(|j| {
            let d = sys.terms[h].offset[j] as usize;
            let c = alphabet.letters()[j];
            match sys.periods[j] {
                Some(p) => counter(c, d, p as usize, |s| s == d),
                None => counter(c, d + 1, 1, |s| s == d),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if parts.is_empty() {
        return Ok(Dfa::trivial(Vec::new(), true));
    }
    shuffle_product(&parts)
}

/// Union over good classes of intersections of term automata and complements.
pub fn closure_dfa_boolean(sys: &ResimpleSystem, alphabet: &Alphabet) -> Result<Dfa> {
    check_alphabet(sys, alphabet)?;
    let letters = alphabet.letters().to_vec();
    let atoms = (0..sys.terms.len())
        .map(|h| atomic_dfa(sys, h, alphabet))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = Dfa::trivial(letters.clone(), false);
    for &mask in &sys.good_classes {
        let mut class = Dfa::trivial(letters.clone(), true);
        for (h, a) in atoms.iter().enumerate() {
            let part = if mask >> h & 1 == 1 {
                a.clone()
            } else {
                a.complement()
            };
            class = intersect(&class, &part)?;
        }
        acc = union(&acc, &class)?;
    }
    Ok(acc.renumber())
}
