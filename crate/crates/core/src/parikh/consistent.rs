use std::collections::BTreeMap;

use num_integer::Integer;

use super::{Check, LinearSet, SemilinearSet};
use crate::error::{Error, Result};
use crate::natvec::NatVec;

/// `p_j` for every coordinate that has a primary basis element: the lcm of
/// the primary values present.
pub fn primary_periods(s: &SemilinearSet) -> BTreeMap<usize, u64> {
    let mut p: BTreeMap<usize, u64> = BTreeMap::new();
    for t in &s.terms {
        for b in &t.basis {
            if let Some((j, n)) = b.primary() {
                let e = p.entry(j).or_insert(1);
                *e = e.lcm(&n);
            }
        }
    }
    p
}

/// Replaces every primary basis element `m·e_j` by `p_j·e_j`, splitting the
/// term over the residues `r·m·e_j`, `0 ≤ r < p_j/m`.
pub fn make_consistent(s: &SemilinearSet) -> Result<SemilinearSet> {
    if !s.terms.iter().all(LinearSet::is_free) {
        return Err(Error::Precondition(
            "consistency rewriting needs free bases".into(),
        ));
    }
    let periods = primary_periods(s);
    let mut out = Vec::new();
    for t in &s.terms {
        let mut parts = vec![t.clone()];
        for (idx, b) in t.basis.iter().enumerate() {
            let Some((j, m)) = b.primary() else { continue };
            let p = periods[&j];
            if p == m {
                continue;
            }
            let wide = NatVec::unit(t.dim(), j).scale(p);
            let step = NatVec::unit(t.dim(), j).scale(m);
            parts = parts
                .into_iter()
                .flat_map(|part| {
                    let basis: Vec<NatVec> = part
                        .basis
                        .iter()
                        .map(|v| if *v == t.basis[idx] { wide.clone() } else { v.clone() })
                        .collect();
                    (0..p / m)
                        .map(|r| LinearSet::new(&part.offset + &step.scale(r), basis.clone()))
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        out.extend(parts);
    }
    let mut res = SemilinearSet::new(s.dim, out);
    res.all_free = Check::Yes;
    res.consistent = Check::Yes;
    res.unambiguous = if s.unambiguous.is_yes() {
        Check::Yes
    } else {
        Check::Unknown
    };
    Ok(res)
}
