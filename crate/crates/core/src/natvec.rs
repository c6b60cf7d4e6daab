use std::fmt;
use std::ops::{Add, Index};

use serde::{Deserialize, Serialize};

/// A vector of `ℕ^k`: one count per alphabet letter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct NatVec(pub Vec<u64>);

impl NatVec {
    pub fn zero(k: usize) -> Self {
        NatVec(vec![0; k])
    }

    /// The generator `e_j`.
    pub fn unit(k: usize, j: usize) -> Self {
        let mut v = vec![0; k];
        v[j] = 1;
        NatVec(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Sum of the components (the length of any word with this image).
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Largest component, `‖σ‖`.
    pub fn max_norm(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// If the vector is `n·e_j` with `n > 0`, returns `(j, n)`.
    pub fn primary(&self) -> Option<(usize, u64)> {
        let mut found = None;
        for (j, &c) in self.0.iter().enumerate() {
            if c != 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((j, c));
            }
        }
        found
    }

    /// Number of coordinates with a nonzero entry.
    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&c| c != 0).count()
    }

    pub fn scale(&self, n: u64) -> NatVec {
        NatVec(self.0.iter().map(|&c| c * n).collect())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &NatVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &NatVec) -> Option<NatVec> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(NatVec)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }
}

impl From<Vec<u64>> for NatVec {
    fn from(v: Vec<u64>) -> Self {
        NatVec(v)
    }
}

impl<const N: usize> From<[u64; N]> for NatVec {
    fn from(v: [u64; N]) -> Self {
        NatVec(v.to_vec())
    }
}

impl Index<usize> for NatVec {
    type Output = u64;
    fn index(&self, i: usize) -> &u64 {
        &self.0[i]
    }
}

impl Add for &NatVec {
    type Output = NatVec;
    fn add(self, rhs: &NatVec) -> NatVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        NatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for NatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for NatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primary_detection() {
        assert_eq!(NatVec::from([0, 3, 0]).primary(), Some((1, 3)));
        assert_eq!(NatVec::from([1, 1]).primary(), None);
        assert_eq!(NatVec::from([0, 0]).primary(), None);
    }

    #[test]
    fn display() {
        assert_eq!(NatVec::from([2, 0]).to_string(), "(2,0)");
        assert_eq!(NatVec::zero(0).to_string(), "()");
    }
}
