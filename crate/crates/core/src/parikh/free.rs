use std::collections::BTreeSet;

use num_traits::Signed;

use super::{lattice, to_ivec, Check, LinearSet, SemilinearSet};
use crate::error::{Error, Result};
use crate::natvec::NatVec;

/// Cap on the number of terms produced while splitting dependent bases.
pub const MAX_FREE_TERMS: usize = 100_000;

/// Rewrites one linear set as a union of linear sets with free bases.
///
/// A dependency `Σ_P n_i b_i = Σ_N m_i b_i` means every element has a
/// representation with `c_i < n_i` for some `i ∈ P`, so
/// `B^⊕ = ∪_{i∈P} ∪_{r<n_i} (r·b_i + (B∖b_i)^⊕)`.
pub fn make_free(term: &LinearSet) -> Result<SemilinearSet> {
    let mut done = BTreeSet::new();
    let mut todo = vec![term.clone()];
    while let Some(t) = todo.pop() {
        if done.len() + todo.len() > MAX_FREE_TERMS {
            return Err(Error::ResourceCap(format!(
                "basis splitting produced more than {MAX_FREE_TERMS} terms"
            )));
        }
        let cols: Vec<_> = t.basis.iter().map(to_ivec).collect();
        let rows: Vec<lattice::IVec> = (0..t.dim())
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let kernel = if t.basis.is_empty() {
            Vec::new()
        } else {
            lattice::nullspace(&rows, t.basis.len())
        };
        let Some(rel) = kernel.first() else {
            done.insert(t);
            continue;
        };
        let pos: Vec<(usize, u64)> = side(rel, false);
        let neg: Vec<(usize, u64)> = side(rel, true);
        let weight = |s: &[(usize, u64)]| s.iter().map(|&(_, n)| n).sum::<u64>();
        let chosen = if weight(&pos) <= weight(&neg) { pos } else { neg };
        for (i, n) in chosen {
            let rest: Vec<NatVec> = t
                .basis
                .iter()
                .enumerate()
                .filter(|&(h, _)| h != i)
                .map(|(_, b)| b.clone())
                .collect();
            for r in 0..n {
                todo.push(LinearSet::new(&t.offset + &t.basis[i].scale(r), rest.clone()));
            }
        }
    }
    let mut s = SemilinearSet::new(term.dim(), done.into_iter().collect());
    s.all_free = Check::Yes;
    Ok(s)
}

fn side(rel: &[num_bigint::BigInt], negative: bool) -> Vec<(usize, u64)> {
    rel.iter()
        .enumerate()
        .filter(|(_, x)| if negative { x.is_negative() } else { x.is_positive() })
        .map(|(i, x)| (i, u64::try_from(x.abs()).expect("dependency coefficient fits u64")))
        .collect()
}

/// Applies [`make_free`] to every term.
pub fn make_free_set(s: &SemilinearSet) -> Result<SemilinearSet> {
    let mut terms = BTreeSet::new();
    for t in &s.terms {
        terms.extend(make_free(t)?.terms);
        if terms.len() > MAX_FREE_TERMS {
            return Err(Error::ResourceCap(format!(
                "basis splitting produced more than {MAX_FREE_TERMS} terms"
            )));
        }
    }
    let mut out = SemilinearSet::new(s.dim, terms.into_iter().collect());
    out.all_free = Check::Yes;
    Ok(out)
}
