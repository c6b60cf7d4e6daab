//! Signed atomic terms read off a reduced fraction `P/Q` and their membership classes.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::natvec::NatVec;
use crate::series::{FactoredDenominator, Polynomial};

/// Largest number of terms for which classes are enumerated.
pub const MAX_TERMS: usize = 20;

/// `μ · [d + Σ_{j∈J} (p_j e_j)^⊕]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicTerm {
    pub coeff: BigInt,
    pub offset: NatVec,
}

/// A class is a set of term indices; it is stored as a bitmask.
pub type ClassMask = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResimpleSystem {
    pub dim: usize,
    /// `Some(p_j)` for the coordinates in `J`.
    pub periods: Vec<Option<u64>>,
    pub terms: Vec<AtomicTerm>,
    /// Every membership pattern realized by some point of `ℕ^k`.
    pub classes: BTreeSet<ClassMask>,
    /// Realized patterns whose coefficient sum is 1.
    pub good_classes: BTreeSet<ClassMask>,
}

/// Indices of the terms in a class mask.
pub fn class_members(mask: ClassMask) -> Vec<usize> {
    (0..32).filter(|h| mask >> h & 1 == 1).collect()
}

pub fn class_mask(members: &[usize]) -> ClassMask {
    members.iter().fold(0, |m, &h| m | 1 << h)
}

impl ResimpleSystem {
    /// Whether coordinate value `v` satisfies term `h`'s constraint on coordinate `j`.
    pub fn coordinate_ok(&self, h: usize, j: usize, v: u64) -> bool {
        let d = self.terms[h].offset[j];
        match self.periods[j] {
            Some(p) => v >= d && (v - d).is_multiple_of(p),
            None => v == d,
        }
    }

    pub fn term_contains(&self, h: usize, sigma: &NatVec) -> bool {
        (0..self.dim).all(|j| self.coordinate_ok(h, j, sigma[j]))
    }

    pub fn pattern(&self, sigma: &NatVec) -> ClassMask {
        (0..self.terms.len())
            .filter(|&h| self.term_contains(h, sigma))
            .fold(0, |m, h| m | 1 << h)
    }

    /// Mask containing every term.
    pub fn all_mask(&self) -> ClassMask {
        if self.terms.is_empty() {
            0
        } else {
            ClassMask::MAX >> (32 - self.terms.len())
        }
    }

    pub fn pattern_sum(&self, mask: ClassMask) -> BigInt {
        class_members(mask)
            .into_iter()
            .map(|h| self.terms[h].coeff.clone())
            .sum()
    }

    /// Largest offset component per coordinate (the tail length `T_j`).
    pub fn tails(&self) -> Vec<u64> {
        (0..self.dim)
            .map(|j| self.terms.iter().map(|t| t.offset[j]).max().unwrap_or(0))
            .collect()
    }

    /// Per coordinate, the mask of terms satisfied by each representative value.
    ///
    /// Values range over `0..T_j + p_j` (periodic) or `0..=T_j + 1` (the last one
    /// standing for every value above `T_j`).
    pub fn coordinate_masks(&self) -> Vec<Vec<ClassMask>> {
        let tails = self.tails();
        (0..self.dim)
            .map(|j| {
                let count = tails[j] + self.periods[j].unwrap_or(2);
                (0..count)
                    .map(|v| {
                        (0..self.terms.len())
                            .filter(|&h| self.coordinate_ok(h, j, v))
                            .fold(0, |m, h| m | 1 << h)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Builds the term list from `P` and the class table from the coordinate grid.
pub fn build_system(p: &Polynomial, q: &FactoredDenominator) -> Result<ResimpleSystem> {
    let dim = p.dim();
    let mut periods = vec![None; dim];
    for beta in q.factors() {
        let Some((j, n)) = beta.primary() else {
            return Err(Error::Precondition(format!(
                "denominator factor 1 - x^{beta} involves several variables"
            )));
        };
        if periods[j].replace(n).is_some() {
            return Err(Error::Precondition(format!(
                "coordinate {j} has more than one denominator factor"
            )));
        }
    }
    if q.is_one() && !p.is_zero_one() {
        return Err(Error::Invariant(
            "finite set with a coefficient different from 1".into(),
        ));
    }
    if p.len() > MAX_TERMS {
        return Err(Error::ResourceCap(format!(
            "{} terms exceed the class enumeration cap of {MAX_TERMS}",
            p.len()
        )));
    }
    let terms: Vec<AtomicTerm> = p
        .terms()
        .map(|(e, c)| AtomicTerm {
            coeff: c.clone(),
            offset: e.clone(),
        })
        .collect();
    let mut sys = ResimpleSystem {
        dim,
        periods,
        terms,
        classes: BTreeSet::new(),
        good_classes: BTreeSet::new(),
    };

    let all = sys.all_mask();
    let mut partial: BTreeSet<ClassMask> = BTreeSet::from([all]);
    for masks in sys.coordinate_masks() {
        let distinct: BTreeSet<ClassMask> = masks.into_iter().collect();
        partial = partial
            .iter()
            .flat_map(|a| distinct.iter().map(move |m| a & m))
            .collect();
    }
    for &mask in &partial {
        let s = sys.pattern_sum(mask);
        if s.is_one() {
            sys.good_classes.insert(mask);
        } else if !s.is_zero() {
            return Err(Error::Invariant(format!(
                "class {{{}}} has coefficient sum {s}",
                fmt_members(mask)
            )));
        }
    }
    sys.classes = partial;
    Ok(sys)
}

/// Some point lies in exactly the terms of `members`.
pub fn class_nonempty(sys: &ResimpleSystem, members: &[usize]) -> bool {
    sys.classes.contains(&class_mask(members))
}

/// `Σ_{h : σ ∈ S_h} μ_h = 1`.
pub fn member_system(sigma: &NatVec, sys: &ResimpleSystem) -> bool {
    sys.pattern_sum(sys.pattern(sigma)).is_one()
}

fn fmt_members(mask: ClassMask) -> String {
    class_members(mask)
        .iter()
        .map(|h| (h + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for ResimpleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let periods: Vec<String> = self
            .periods
            .iter()
            .map(|p| p.map_or("-".to_string(), |v| v.to_string()))
            .collect();
        writeln!(f, "periods: ({})", periods.join(","))?;
        for (h, t) in self.terms.iter().enumerate() {
            let sign = if t.coeff >= BigInt::zero() { "+" } else { "" };
            writeln!(f, "S{}: {sign}{} {}", h + 1, t.coeff, t.offset)?;
        }
        let good: Vec<String> = self
            .good_classes
            .iter()
            .map(|&m| format!("{{{}}}", fmt_members(m)))
            .collect();
        write!(f, "good classes: {}", good.join(" "))
    }
}
