//! Minimal nonnegative solutions of homogeneous linear Diophantine systems
//! (Contejean–Devie completion) and intersection of arbitrary linear sets.

use std::collections::BTreeSet;

use super::{LinearSet, SemilinearSet};
use crate::error::{Error, Result};
use crate::natvec::NatVec;

#[derive(Clone, Copy, Debug)]
pub struct SolverLimits {
    /// Largest frontier the completion procedure may hold.
    pub max_frontier: usize,
    /// Per-coordinate bound; `None` uses `(1 + max|entry|)^rows`.
    pub coord_bound: Option<u64>,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            max_frontier: 500_000,
            coord_bound: None,
        }
    }
}

/// Minimal nonzero `x ∈ ℕ^n` with `A x = 0`, honoring optional per-variable upper bounds.
pub fn minimal_solutions(
    a: &[Vec<i128>],
    n: usize,
    upper: &[Option<u64>],
    limits: SolverLimits,
) -> Result<Vec<Vec<u64>>> {
    let max_entry = a.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let bound = limits.coord_bound.unwrap_or_else(|| {
        let base = 1u128 + max_entry;
        let mut b: u128 = 1;
        for _ in 0..a.len().max(1) {
            b = b.saturating_mul(base);
        }
        u64::try_from(b).unwrap_or(u64::MAX)
    });
    let column = |j: usize| -> Vec<i128> { a.iter().map(|row| row[j]).collect() };
    let cols: Vec<Vec<i128>> = (0..n).map(column).collect();

    let mut solutions: Vec<Vec<u64>> = Vec::new();
    let mut frontier: BTreeSet<Vec<u64>> = (0..n)
        .filter(|&j| upper[j].is_none_or(|u| u >= 1))
        .map(|j| {
            let mut x = vec![0; n];
            x[j] = 1;
            x
        })
        .collect();
    while !frontier.is_empty() {
        let mut open = Vec::new();
        for x in frontier {
            let ax = apply(&cols, &x, a.len());
            if ax.iter().all(|&v| v == 0) {
                solutions.push(x);
            } else {
                open.push((x, ax));
            }
        }
        let mut next = BTreeSet::new();
        for (x, ax) in &open {
            for j in 0..n {
                let d: i128 = ax.iter().zip(&cols[j]).map(|(p, q)| p * q).sum();
                if d >= 0 {
                    continue;
                }
                let mut y = x.clone();
                y[j] += 1;
                if y[j] > bound {
                    return Err(Error::ResourceCap(format!(
                        "Diophantine solver exceeded coordinate bound {bound}"
                    )));
                }
                if upper[j].is_some_and(|u| y[j] > u) {
                    continue;
                }
                if solutions.iter().any(|s| s.iter().zip(&y).all(|(p, q)| p <= q)) {
                    continue;
                }
                next.insert(y);
            }
        }
        if next.len() > limits.max_frontier {
            return Err(Error::ResourceCap(format!(
                "Diophantine frontier exceeded {} candidates",
                limits.max_frontier
            )));
        }
        frontier = next;
    }
    Ok(solutions)
}

fn apply(cols: &[Vec<i128>], x: &[u64], rows: usize) -> Vec<i128> {
    let mut out = vec![0i128; rows];
    for (c, &xi) in cols.iter().zip(x) {
        if xi != 0 {
            for (o, &v) in out.iter_mut().zip(c) {
                *o += v * i128::from(xi);
            }
        }
    }
    out
}

/// Intersection of two linear sets with arbitrary bases.
pub fn intersect_linear(t1: &LinearSet, t2: &LinearSet) -> Result<SemilinearSet> {
    intersect_linear_with(t1, t2, SolverLimits::default())
}

/// Solves `B1·n − B2·m − (γ2−γ1)·y = 0` with `y ≤ 1`: solutions with `y = 1`
/// give offsets, solutions with `y = 0` give basis vectors.
pub fn intersect_linear_with(
    t1: &LinearSet,
    t2: &LinearSet,
    limits: SolverLimits,
) -> Result<SemilinearSet> {
    let k = t1.dim();
    let n1 = t1.basis.len();
    let n2 = t2.basis.len();
    let n = n1 + n2 + 1;
    let rows: Vec<Vec<i128>> = (0..k)
        .map(|i| {
            let mut row: Vec<i128> = t1.basis.iter().map(|b| i128::from(b[i])).collect();
            row.extend(t2.basis.iter().map(|b| -i128::from(b[i])));
            row.push(i128::from(t1.offset[i]) - i128::from(t2.offset[i]));
            row
        })
        .collect();
    let mut upper = vec![None; n];
    upper[n - 1] = Some(1);
    let sols = minimal_solutions(&rows, n, &upper, limits)?;

    let image = |x: &[u64]| -> NatVec {
        let mut v = vec![0u64; k];
        for (b, &c) in t1.basis.iter().zip(x) {
            for (vi, bi) in v.iter_mut().zip(&b.0) {
                *vi += bi * c;
            }
        }
        NatVec(v)
    };
    let mut offsets = BTreeSet::new();
    let mut basis = BTreeSet::new();
    for s in &sols {
        if s[n - 1] == 1 {
            offsets.insert(&t1.offset + &image(&s[..n1]));
        } else {
            basis.insert(image(&s[..n1]));
        }
    }
    let basis: Vec<NatVec> = basis.into_iter().collect();
    let terms = offsets
        .into_iter()
        .map(|o| LinearSet::new(o, basis.clone()))
        .collect();
    Ok(SemilinearSet::new(k, terms))
}
