//! Rational expressions and semilinear sets over `ℕ^k`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::natvec::NatVec;

mod consistent;
pub mod diophantine;
mod free;
pub mod lattice;
pub mod polyhedral;
mod simple;

pub use consistent::{make_consistent, primary_periods};
pub use diophantine::{intersect_linear, intersect_linear_with, SolverLimits};
pub use free::{make_free, make_free_set, MAX_FREE_TERMS};
pub use simple::{difference_simple, disambiguate, intersect_simple};

/// Rational expression over `ℕ^k`; `Plus` is the `⊕` (monoid star) operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RationalExpr {
    EmptySet,
    Point(NatVec),
    Union(Box<RationalExpr>, Box<RationalExpr>),
    Sum(Box<RationalExpr>, Box<RationalExpr>),
    Plus(Box<RationalExpr>),
}

impl RationalExpr {
    /// Nesting depth of `⊕`.
    pub fn star_height(&self) -> usize {
        match self {
            RationalExpr::EmptySet | RationalExpr::Point(_) => 0,
            RationalExpr::Union(l, r) | RationalExpr::Sum(l, r) => {
                l.star_height().max(r.star_height())
            }
            RationalExpr::Plus(e) => 1 + e.star_height(),
        }
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalExpr::EmptySet => write!(f, "#"),
            RationalExpr::Point(p) => write!(f, "{p}"),
            RationalExpr::Union(l, r) => write!(f, "({l}|{r})"),
            RationalExpr::Sum(l, r) => write!(f, "{l}+{r}"),
            RationalExpr::Plus(e) => match **e {
                RationalExpr::Point(_) | RationalExpr::Union(..) => write!(f, "{e}+"),
                _ => write!(f, "({e})+"),
            },
        }
    }
}

/// `γ + B^⊕`. The basis is kept sorted, duplicate-free and without `0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinearSet {
    pub offset: NatVec,
    pub basis: Vec<NatVec>,
}

impl LinearSet {
    pub fn new(offset: NatVec, basis: impl IntoIterator<Item = NatVec>) -> Self {
        let set: BTreeSet<NatVec> = basis.into_iter().filter(|b| !b.is_zero()).collect();
        LinearSet {
            offset,
            basis: set.into_iter().collect(),
        }
    }

    pub fn point(offset: NatVec) -> Self {
        LinearSet {
            offset,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.offset.dim()
    }

    pub fn is_free(&self) -> bool {
        is_free(&self.basis)
    }

    pub fn contains(&self, sigma: &NatVec) -> bool {
        self.representations(sigma, 1) > 0
    }

    /// Number of coefficient vectors `c` with `γ + Bc = σ`, stopping at `limit`.
    pub fn representations(&self, sigma: &NatVec, limit: u64) -> u64 {
        fn go(rest: &[u64], basis: &[NatVec], limit: u64) -> u64 {
            let Some((b, tail)) = basis.split_first() else {
                return u64::from(rest.iter().all(|&x| x == 0));
            };
            let mut cur = rest.to_vec();
            let mut total = 0;
            loop {
                total += go(&cur, tail, limit - total);
                if total >= limit {
                    return total;
                }
                for (c, &bi) in cur.iter_mut().zip(&b.0) {
                    match c.checked_sub(bi) {
                        Some(v) => *c = v,
                        None => return total,
                    }
                }
            }
        }
        match sigma.checked_sub(&self.offset) {
            Some(rest) => go(&rest.0, &self.basis, limit.max(1)),
            None => 0,
        }
    }
}

impl fmt::Display for LinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.basis.is_empty() {
            return write!(f, "{}", self.offset);
        }
        if !self.offset.is_zero() {
            write!(f, "{}+", self.offset)?;
        }
        write!(f, "(")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")+")
    }
}

/// Tri-state verification flag.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Check {
    #[default]
    Unknown,
    Yes,
    No,
}

impl Check {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Check::Yes
        } else {
            Check::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Check::Yes
    }
}

/// Finite union of linear sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemilinearSet {
    pub dim: usize,
    pub terms: Vec<LinearSet>,
    pub all_free: Check,
    pub consistent: Check,
    pub unambiguous: Check,
}

impl SemilinearSet {
    pub fn new(dim: usize, terms: Vec<LinearSet>) -> Self {
        SemilinearSet {
            dim,
            terms,
            all_free: Check::Unknown,
            consistent: Check::Unknown,
            unambiguous: Check::Unknown,
        }
    }

    pub fn empty(dim: usize) -> Self {
        let mut s = SemilinearSet::new(dim, Vec::new());
        s.all_free = Check::Yes;
        s.consistent = Check::Yes;
        s.unambiguous = Check::Yes;
        s
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, sigma: &NatVec) -> bool {
        member(sigma, self)
    }

    /// Sum over terms of the number of representations of `σ`.
    pub fn count_representations(&self, sigma: &NatVec, limit: u64) -> u64 {
        self.terms
            .iter()
            .map(|t| t.representations(sigma, limit))
            .sum()
    }

    /// Sets `all_free` and `consistent` from the current terms.
    pub fn refresh_structural_flags(&mut self) {
        self.all_free = Check::from_bool(self.terms.iter().all(LinearSet::is_free));
        self.consistent = Check::from_bool(is_consistent(&self.terms));
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "#");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// For every coordinate, all primary basis elements across the terms coincide.
pub fn is_consistent(terms: &[LinearSet]) -> bool {
    let mut seen: std::collections::BTreeMap<usize, u64> = Default::default();
    for t in terms {
        for b in &t.basis {
            if let Some((j, n)) = b.primary() {
                if *seen.entry(j).or_insert(n) != n {
                    return false;
                }
            }
        }
    }
    true
}

pub fn member(sigma: &NatVec, s: &SemilinearSet) -> bool {
    s.terms.iter().any(|t| t.contains(sigma))
}

/// Rational linear independence of the basis.
pub fn is_free(basis: &[NatVec]) -> bool {
    lattice::rank(&basis.iter().map(to_ivec).collect::<Vec<_>>()) == basis.len()
}

pub(crate) fn to_ivec(v: &NatVec) -> lattice::IVec {
    v.0.iter().map(|&x| BigInt::from(x)).collect()
}

pub(crate) fn from_ivec(v: &[BigInt]) -> crate::error::Result<NatVec> {
    v.iter()
        .map(|x| u64::try_from(x).ok())
        .collect::<Option<Vec<u64>>>()
        .map(NatVec)
        .ok_or_else(|| crate::error::Error::Invariant(format!("vector leaves ℕ^k: {v:?}")))
}

/// Rewrites the expression to a union of linear sets (star height at most 1).
pub fn to_semilinear(expr: &RationalExpr, dim: usize) -> SemilinearSet {
    let mut terms = normalize(expr, dim);
    terms.sort();
    terms.dedup();
    SemilinearSet::new(dim, simplify_union(terms))
}

/// Drops terms syntactically contained in another and merges
/// `{γ} ∪ (γ + b + B^⊕)` into `γ + B^⊕` when `b ∈ B`.
fn simplify_union(mut terms: Vec<LinearSet>) -> Vec<LinearSet> {
    let subset = |a: &[NatVec], b: &[NatVec]| a.iter().all(|v| b.contains(v));
    'outer: loop {
        for i in 0..terms.len() {
            for j in 0..terms.len() {
                if i == j {
                    continue;
                }
                let (x, y) = (&terms[i], &terms[j]);
                if subset(&y.basis, &x.basis) && x.contains(&y.offset) {
                    terms.remove(j);
                    continue 'outer;
                }
                if let Some(step) = y.offset.checked_sub(&x.offset) {
                    let rest: Vec<NatVec> =
                        y.basis.iter().filter(|&b| *b != step).cloned().collect();
                    if y.basis.contains(&step)
                        && subset(&rest, &x.basis)
                        && subset(&x.basis, &y.basis)
                    {
                        let merged = LinearSet::new(x.offset.clone(), y.basis.clone());
                        terms[i] = merged;
                        terms.remove(j);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    terms.sort();
    terms
}

fn normalize(expr: &RationalExpr, dim: usize) -> Vec<LinearSet> {
    match expr {
        RationalExpr::EmptySet => Vec::new(),
        RationalExpr::Point(p) => vec![LinearSet::point(p.clone())],
        RationalExpr::Union(l, r) => {
            let mut v = normalize(l, dim);
            v.extend(normalize(r, dim));
            v
        }
        RationalExpr::Sum(l, r) => sum(&normalize(l, dim), &normalize(r, dim)),
        RationalExpr::Plus(e) => {
            // (∪ L_i)^⊕ = Σ L_i^⊕
            let mut acc = vec![LinearSet::point(NatVec::zero(dim))];
            for t in normalize(e, dim) {
                let starred = if t.offset.is_zero() {
                    vec![t]
                } else if t.basis.is_empty() {
                    vec![LinearSet::new(NatVec::zero(dim), [t.offset])]
                } else {
                    let mut basis = t.basis.clone();
                    basis.push(t.offset.clone());
                    vec![
                        LinearSet::point(NatVec::zero(dim)),
                        LinearSet::new(t.offset, basis),
                    ]
                };
                acc = sum(&acc, &starred);
            }
            acc
        }
    }
}

fn sum(a: &[LinearSet], b: &[LinearSet]) -> Vec<LinearSet> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(LinearSet::new(
                &x.offset + &y.offset,
                x.basis.iter().chain(&y.basis).cloned(),
            ));
        }
    }
    out.into_iter().collect()
}
