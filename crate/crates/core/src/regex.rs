//! Regular expressions over a small alphabet of lowercase ASCII letters.
//!
//! Concrete syntax: letters `a`..`z`, `|` for union, juxtaposition for
//! concatenation, postfix `*` for star, parentheses for grouping, `_` for the
//! empty word and `#` for the empty set. Union binds weakest, star strongest.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::natvec::NatVec;
use crate::parikh::RationalExpr;

/// Default cap on the number of words materialized by [`enumerate_language`].
pub const DEFAULT_WORD_CAP: usize = 1_000_000;

/// An ordered set of distinct letters; position `j` is coordinate `j` of `ℕ^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Alphabet(Vec<char>);

impl Alphabet {
    /// Builds an alphabet from arbitrary letters, sorting and deduplicating.
    pub fn new<I: IntoIterator<Item = char>>(letters: I) -> Result<Self> {
        let set: BTreeSet<char> = letters.into_iter().collect();
        for &c in &set {
            if !c.is_ascii_lowercase() {
                return Err(Error::InvalidAlphabet(format!(
                    "'{c}' is not a lowercase ASCII letter"
                )));
            }
        }
        Ok(Alphabet(set.into_iter().collect()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Alphabet::new(text.chars().filter(|c| !c.is_whitespace() && *c != ','))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.0.binary_search(&c).ok()
    }

    pub fn contains(&self, c: char) -> bool {
        self.index_of(c).is_some()
    }

    /// The commutative image of a word.
    pub fn parikh(&self, word: &str) -> Result<NatVec> {
        let mut v = vec![0u64; self.len()];
        for c in word.chars() {
            let j = self.index_of(c).ok_or(Error::UnknownLetter(c))?;
            v[j] += 1;
        }
        Ok(NatVec(v))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RegexNode {
    EmptySet,
    EmptyWord,
    Letter(char),
    Union(Box<RegexNode>, Box<RegexNode>),
    Concat(Box<RegexNode>, Box<RegexNode>),
    Star(Box<RegexNode>),
}

impl RegexNode {
    pub fn union(l: RegexNode, r: RegexNode) -> Self {
        RegexNode::Union(Box::new(l), Box::new(r))
    }

    pub fn concat(l: RegexNode, r: RegexNode) -> Self {
        RegexNode::Concat(Box::new(l), Box::new(r))
    }

    pub fn star(e: RegexNode) -> Self {
        RegexNode::Star(Box::new(e))
    }

    fn collect_letters(&self, out: &mut BTreeSet<char>) {
        match self {
            RegexNode::Letter(c) => {
                out.insert(*c);
            }
            RegexNode::Union(l, r) | RegexNode::Concat(l, r) => {
                l.collect_letters(out);
                r.collect_letters(out);
            }
            RegexNode::Star(e) => e.collect_letters(out),
            RegexNode::EmptySet | RegexNode::EmptyWord => {}
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            RegexNode::Union(..) => 0,
            RegexNode::Concat(..) => 1,
            _ => 2,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for RegexNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegexNode::EmptySet => write!(f, "#"),
            RegexNode::EmptyWord => write!(f, "_"),
            RegexNode::Letter(c) => write!(f, "{c}"),
            // Operators parse left-associatively, so a right child of the
            // same kind needs explicit parentheses to round-trip.
            RegexNode::Union(l, r) => {
                l.write_child(f, 0)?;
                write!(f, "|")?;
                r.write_child(f, 1)
            }
            RegexNode::Concat(l, r) => {
                l.write_child(f, 1)?;
                r.write_child(f, 2)
            }
            RegexNode::Star(e) => {
                e.write_child(f, 2)?;
                write!(f, "*")
            }
        }
    }
}

/// A parsed expression together with the alphabet fixing coordinate order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regex {
    pub node: RegexNode,
    pub alphabet: Alphabet,
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.node)
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            pos: 0,
            text,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or(self.text.len())
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn union(&mut self) -> Result<RegexNode> {
        let mut node = self.concat()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let rhs = self.concat()?;
            node = RegexNode::union(node, rhs);
        }
        Ok(node)
    }

    fn concat(&mut self) -> Result<RegexNode> {
        let mut node = self.starred()?;
        while matches!(self.peek(), Some(c) if c == '(' || c == '_' || c == '#' || c.is_ascii_lowercase())
        {
            let rhs = self.starred()?;
            node = RegexNode::concat(node, rhs);
        }
        Ok(node)
    }

    fn starred(&mut self) -> Result<RegexNode> {
        let mut node = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            node = RegexNode::star(node);
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<RegexNode> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.union()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('_') => {
                self.pos += 1;
                Ok(RegexNode::EmptyWord)
            }
            Some('#') => {
                self.pos += 1;
                Ok(RegexNode::EmptySet)
            }
            Some(c) if c.is_ascii_lowercase() => {
                self.pos += 1;
                Ok(RegexNode::Letter(c))
            }
            Some(c) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text`. When `alphabet` is `None` it is inferred from the letters
/// that occur; otherwise every letter must belong to it.
pub fn parse_regex(text: &str, alphabet: Option<&Alphabet>) -> Result<Regex> {
    let mut p = Parser::new(text);
    let node = p.union()?;
    if p.peek().is_some() {
        return p.err(format!("unexpected '{}'", p.peek().unwrap()));
    }
    let mut letters = BTreeSet::new();
    node.collect_letters(&mut letters);
    let alphabet = match alphabet {
        Some(a) => {
            if let Some(&c) = letters.iter().find(|c| !a.contains(**c)) {
                return Err(Error::LetterOutsideAlphabet(c));
            }
            a.clone()
        }
        None => Alphabet::new(letters)?,
    };
    Ok(Regex { node, alphabet })
}

/// All words of the language of `regex` with length at most `max_len`.
pub fn enumerate_language(regex: &Regex, max_len: usize) -> Result<BTreeSet<String>> {
    enumerate_language_capped(regex, max_len, DEFAULT_WORD_CAP)
}

pub fn enumerate_language_capped(
    regex: &Regex,
    max_len: usize,
    cap: usize,
) -> Result<BTreeSet<String>> {
    enumerate_node(&regex.node, max_len, cap)
}

fn check_cap(set: &BTreeSet<String>, cap: usize) -> Result<()> {
    if set.len() > cap {
        Err(Error::ResourceCap(format!(
            "language enumeration exceeded {cap} words"
        )))
    } else {
        Ok(())
    }
}

fn concat_sets(
    left: &BTreeSet<String>,
    right: &BTreeSet<String>,
    max_len: usize,
    cap: usize,
) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for u in left {
        for v in right {
            if u.len() + v.len() <= max_len {
                out.insert(format!("{u}{v}"));
            }
        }
        check_cap(&out, cap)?;
    }
    Ok(out)
}

fn enumerate_node(node: &RegexNode, max_len: usize, cap: usize) -> Result<BTreeSet<String>> {
    let out = match node {
        RegexNode::EmptySet => BTreeSet::new(),
        RegexNode::EmptyWord => BTreeSet::from([String::new()]),
        RegexNode::Letter(c) => {
            if max_len >= 1 {
                BTreeSet::from([c.to_string()])
            } else {
                BTreeSet::new()
            }
        }
        RegexNode::Union(l, r) => {
            let mut s = enumerate_node(l, max_len, cap)?;
            s.extend(enumerate_node(r, max_len, cap)?);
            s
        }
        RegexNode::Concat(l, r) => {
            let ls = enumerate_node(l, max_len, cap)?;
            let rs = enumerate_node(r, max_len, cap)?;
            concat_sets(&ls, &rs, max_len, cap)?
        }
        RegexNode::Star(e) => {
            let base: BTreeSet<String> = enumerate_node(e, max_len, cap)?
                .into_iter()
                .filter(|w| !w.is_empty())
                .collect();
            let mut result = BTreeSet::from([String::new()]);
            let mut frontier = result.clone();
            while !frontier.is_empty() {
                let next = concat_sets(&frontier, &base, max_len, cap)?;
                frontier = next.difference(&result).cloned().collect();
                result.extend(frontier.iter().cloned());
                check_cap(&result, cap)?;
            }
            result
        }
    };
    check_cap(&out, cap)?;
    Ok(out)
}

/// Image of the expression under the Parikh morphism: letter `a_j` becomes
/// `e_j`, concatenation becomes `+`, union stays union, star becomes `⊕`.
pub fn parikh_expression(regex: &Regex) -> RationalExpr {
    fn go(node: &RegexNode, alphabet: &Alphabet) -> RationalExpr {
        let k = alphabet.len();
        match node {
            RegexNode::EmptySet => RationalExpr::EmptySet,
            RegexNode::EmptyWord => RationalExpr::Point(NatVec::zero(k)),
            RegexNode::Letter(c) => {
                let j = alphabet.index_of(*c).expect("letter checked at parse time");
                RationalExpr::Point(NatVec::unit(k, j))
            }
            RegexNode::Union(l, r) => {
                RationalExpr::Union(Box::new(go(l, alphabet)), Box::new(go(r, alphabet)))
            }
            RegexNode::Concat(l, r) => {
                RationalExpr::Sum(Box::new(go(l, alphabet)), Box::new(go(r, alphabet)))
            }
            RegexNode::Star(e) => RationalExpr::Plus(Box::new(go(e, alphabet))),
        }
    }
    go(&regex.node, &regex.alphabet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn letter(c: char) -> RegexNode {
        RegexNode::Letter(c)
    }

    fn words(ws: &[&str]) -> BTreeSet<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn parses_even_example() {
        let r = parse_regex("b(aa|bb)*", None).unwrap();
        let expected = RegexNode::concat(
            letter('b'),
            RegexNode::star(RegexNode::union(
                RegexNode::concat(letter('a'), letter('a')),
                RegexNode::concat(letter('b'), letter('b')),
            )),
        );
        assert_eq!(r.node, expected);
        assert_eq!(r.alphabet.letters(), &['a', 'b']);
    }

    #[test]
    fn parses_empty_word_and_union() {
        assert_eq!(parse_regex("_", None).unwrap().node, RegexNode::EmptyWord);
        let abc = Alphabet::parse("abc").unwrap();
        let r = parse_regex("(ab)*|c", Some(&abc)).unwrap();
        assert_eq!(
            r.node,
            RegexNode::union(
                RegexNode::star(RegexNode::concat(letter('a'), letter('b'))),
                letter('c')
            )
        );
        assert_eq!(r.alphabet.len(), 3);
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_regex("ab|(c", None) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_regex("", None), Err(Error::Syntax { .. })));
        assert!(matches!(parse_regex("a)", None), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_regex("*a", None), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_regex("aB", None), Err(Error::Syntax { .. })));
    }

    #[test]
    fn letter_outside_alphabet() {
        let ab = Alphabet::parse("ab").unwrap();
        assert_eq!(
            parse_regex("abc", Some(&ab)),
            Err(Error::LetterOutsideAlphabet('c'))
        );
    }

    #[test]
    fn enumeration_examples() {
        let r = parse_regex("(ab)*", None).unwrap();
        assert_eq!(enumerate_language(&r, 4).unwrap(), words(&["", "ab", "abab"]));
        let r = parse_regex("#", None).unwrap();
        assert!(enumerate_language(&r, 5).unwrap().is_empty());
        let r = parse_regex("b(aa|bb)*", None).unwrap();
        assert_eq!(
            enumerate_language(&r, 3).unwrap(),
            words(&["b", "baa", "bbb"])
        );
    }

    #[test]
    fn enumeration_cap() {
        let r = parse_regex("(a|b)*", None).unwrap();
        assert!(matches!(
            enumerate_language_capped(&r, 10, 100),
            Err(Error::ResourceCap(_))
        ));
    }

    #[test]
    fn parikh_examples() {
        use RationalExpr::*;
        let pt = |v: [u64; 2]| Box::new(Point(NatVec::from(v)));
        let r = parse_regex("b(aa|bb)*", None).unwrap();
        let expected = Sum(
            pt([0, 1]),
            Box::new(Plus(Box::new(Union(
                Box::new(Sum(pt([1, 0]), pt([1, 0]))),
                Box::new(Sum(pt([0, 1]), pt([0, 1]))),
            )))),
        );
        assert_eq!(parikh_expression(&r), expected);

        let r = parse_regex("(ab)*", None).unwrap();
        assert_eq!(
            parikh_expression(&r),
            Plus(Box::new(Sum(pt([1, 0]), pt([0, 1]))))
        );

        let e = parikh_expression(&parse_regex("_", None).unwrap());
        assert_eq!(e, Point(NatVec::zero(0)));
    }

    fn arb_node() -> impl Strategy<Value = RegexNode> {
        let leaf = prop_oneof![
            Just(RegexNode::EmptySet),
            Just(RegexNode::EmptyWord),
            prop::sample::select(vec!['a', 'b', 'c']).prop_map(RegexNode::Letter),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| RegexNode::union(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| RegexNode::concat(l, r)),
                inner.prop_map(RegexNode::star),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(node in arb_node()) {
            let printed = node.to_string();
            let abc = Alphabet::parse("abc").unwrap();
            let parsed = parse_regex(&printed, Some(&abc)).unwrap();
            prop_assert_eq!(parsed.node, node);
        }
    }
}
