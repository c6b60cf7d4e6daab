//! Intersection and difference of simple sets (linear sets with free bases),
//! and disambiguation of semi-simple unions built on top of them.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::lattice::{self, IVec, QVec};
use super::polyhedral::{decompose, AffineLattice, Halfspace, Piece};
use super::{from_ivec, to_ivec, Check, LinearSet, SemilinearSet};
use crate::error::{Error, Result};

/// Upper bound on coset enumeration and on the size of intermediate unions.
const MAX_PIECES: usize = 200_000;

fn columns(t: &LinearSet) -> Vec<IVec> {
    t.basis.iter().map(to_ivec).collect()
}

/// Solutions `(c, d) ∈ ℤ^{|B|+|C|}` of `γ + Bc = δ + Cd`.
fn joint_lattice(t: &LinearSet, u: &LinearSet) -> Option<AffineLattice> {
    let b = columns(t);
    let c = columns(u);
    let n = b.len() + c.len();
    let rows: Vec<IVec> = (0..t.dim())
        .map(|i| {
            b.iter()
                .map(|v| v[i].clone())
                .chain(c.iter().map(|v| -&v[i]))
                .collect()
        })
        .collect();
    let rhs = lattice::sub(&to_ivec(&u.offset), &to_ivec(&t.offset));
    let (base, gens) = lattice::integer_solve(&rows, &rhs, n)?;
    Some(AffineLattice { base, gens })
}

/// Maps pieces living in `t`'s coefficient space (first `|B|` coordinates) to linear sets.
fn to_terms(t: &LinearSet, pieces: Vec<Piece>) -> Result<Vec<LinearSet>> {
    let b = columns(t);
    let image = |c: &[BigInt]| -> IVec {
        let mut x = vec![BigInt::zero(); t.dim()];
        for (ci, bi) in c.iter().zip(&b) {
            for (xj, bj) in x.iter_mut().zip(bi) {
                *xj += ci * bj;
            }
        }
        x
    };
    pieces
        .into_iter()
        .map(|p| {
            let off = lattice::add(&to_ivec(&t.offset), &image(&p.offset));
            let basis = p
                .basis
                .iter()
                .map(|d| from_ivec(&image(d)))
                .collect::<Result<Vec<_>>>()?;
            let set = LinearSet::new(from_ivec(&off)?, basis);
            if set.basis.len() != p.basis.len() {
                return Err(Error::Invariant("piece basis collapsed".into()));
            }
            Ok(set)
        })
        .collect()
}

fn nonneg(n: usize, coords: std::ops::Range<usize>) -> Vec<Halfspace> {
    coords.map(|i| Halfspace::nonneg(n, i)).collect()
}

/// `T ∩ U` for simple sets, as a disjoint union of simple sets.
pub fn intersect_simple(t: &LinearSet, u: &LinearSet) -> Result<Vec<LinearSet>> {
    check_free(t)?;
    check_free(u)?;
    let Some(lat) = joint_lattice(t, u) else {
        return Ok(Vec::new());
    };
    let n = t.basis.len() + u.basis.len();
    let pieces = decompose(&lat, &nonneg(n, 0..n))?;
    to_terms(t, pieces)
}

fn check_free(t: &LinearSet) -> Result<()> {
    if t.is_free() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("basis of {t} is not free")))
    }
}

/// `T ∖ U` for simple sets, as a disjoint union of simple sets.
pub fn difference_simple(t: &LinearSet, u: &LinearSet) -> Result<Vec<LinearSet>> {
    if intersect_simple(t, u)?.is_empty() {
        return Ok(vec![t.clone()]);
    }
    let nb = t.basis.len();
    let nc = u.basis.len();
    let b = columns(t);
    let gap = lattice::sub(&to_ivec(&t.offset), &to_ivec(&u.offset));
    let mut pieces: Vec<Piece> = Vec::new();

    // (b) γ - δ + Bc leaves span(C): split on the first orthogonal functional that is nonzero
    let ortho = lattice::nullspace(&columns(u), t.dim());
    let h_rows: Vec<IVec> = ortho
        .iter()
        .map(|h| b.iter().map(|bi| lattice::dot(h, bi)).collect())
        .collect();
    let h_rhs: IVec = ortho.iter().map(|h| -lattice::dot(h, &gap)).collect();
    for l in 0..ortho.len() {
        let Some((base, gens)) = lattice::integer_solve(&h_rows[..l], &h_rhs[..l], nb) else {
            break;
        };
        let lat = AffineLattice { base, gens };
        for sign in [BigInt::one(), -BigInt::one()] {
            let mut ineqs = nonneg(nb, 0..nb);
            ineqs.push(Halfspace::new(
                lattice::scale(&h_rows[l], &sign),
                BigInt::one() + &sign * &h_rhs[l],
            ));
            pieces.extend(decompose(&lat, &ineqs)?);
        }
    }

    // points of T whose image lies in the span of C
    if let Some((c1, m)) = lattice::integer_solve(&h_rows, &h_rhs, nb) {
        match joint_lattice(t, u) {
            None => {
                let lat = AffineLattice { base: c1, gens: m };
                pieces.extend(decompose(&lat, &nonneg(nb, 0..nb))?);
            }
            Some(joint) => {
                // (a) the coefficient vector for U exists but has a negative entry
                for i in 0..nc {
                    let mut ineqs = nonneg(nb + nc, 0..nb + i);
                    let mut normal = vec![BigInt::zero(); nb + nc];
                    normal[nb + i] = -BigInt::one();
                    ineqs.push(Halfspace::new(normal, BigInt::one()));
                    for p in decompose(&joint, &ineqs)? {
                        pieces.push(project(p, nb));
                    }
                }
                // (c) the coefficient vector for U is not integral
                let c0: IVec = joint.base[..nb].to_vec();
                let kc: Vec<IVec> = joint.gens.iter().map(|g| g[..nb].to_vec()).collect();
                for base in other_cosets(&c1, &m, &c0, &kc)? {
                    let lat = AffineLattice {
                        base,
                        gens: kc.clone(),
                    };
                    pieces.extend(decompose(&lat, &nonneg(nb, 0..nb))?);
                }
            }
        }
    }
    to_terms(t, pieces)
}

fn project(p: Piece, nb: usize) -> Piece {
    Piece {
        offset: p.offset[..nb].to_vec(),
        basis: p.basis.into_iter().map(|d| d[..nb].to_vec()).collect(),
    }
}

fn integral(v: &QVec) -> Result<IVec> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(Error::Invariant("sublattice is not contained in lattice".into()))
            }
        })
        .collect()
}

/// Representatives of the cosets of `c0 + span(kc)` inside `c1 + span(m)`, other than its own.
fn other_cosets(c1: &IVec, m: &[IVec], c0: &IVec, kc: &[IVec]) -> Result<Vec<IVec>> {
    let coords = |v: &IVec| -> Result<IVec> {
        let q = lattice::solve_in_span(m, v)
            .ok_or_else(|| Error::Invariant("vector outside lattice span".into()))?;
        integral(&q)
    };
    let w: Vec<IVec> = kc.iter().map(coords).collect::<Result<_>>()?;
    if w.len() != m.len() {
        return Err(Error::Invariant("sublattice rank differs from lattice rank".into()));
    }
    let z0 = coords(&lattice::sub(c0, c1))?;
    let key = |z: &IVec| -> Result<QVec> {
        let lam = lattice::solve_in_span(&w, &lattice::sub(z, &z0))
            .ok_or_else(|| Error::Invariant("coset key outside span".into()))?;
        Ok(lam.iter().map(lattice::frac).collect())
    };
    let q = m.len();
    let start: IVec = vec![BigInt::zero(); q];
    let mut seen: BTreeSet<QVec> = BTreeSet::from([key(&start)?]);
    let mut reps = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(z) = queue.pop_front() {
        for i in 0..q {
            let mut next = z.clone();
            next[i] += 1;
            if seen.insert(key(&next)?) {
                if seen.len() > MAX_PIECES {
                    return Err(Error::ResourceCap("too many cosets".into()));
                }
                reps.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    let zero_key: QVec = vec![BigRational::zero(); q];
    let mut out = Vec::new();
    for z in reps {
        if key(&z)? == zero_key {
            continue;
        }
        let mut base = c1.clone();
        for (zi, mi) in z.iter().zip(m) {
            base = lattice::add(&base, &lattice::scale(mi, zi));
        }
        out.push(base);
    }
    Ok(out)
}

/// Rewrites a union of simple sets as a disjoint union of simple sets.
///
/// Term `T_i` is replaced by `T_i ∖ (T_1 ∪ … ∪ T_{i-1})`; terms disjoint from
/// all earlier ones are kept verbatim.
pub fn disambiguate(s: &SemilinearSet) -> Result<SemilinearSet> {
    if !s.terms.iter().all(LinearSet::is_free) {
        return Err(Error::Precondition(
            "disambiguation needs free bases".into(),
        ));
    }
    let mut out = Vec::new();
    for (i, t) in s.terms.iter().enumerate() {
        let mut pieces = vec![t.clone()];
        for u in &s.terms[..i] {
            let mut next = Vec::new();
            for p in &pieces {
                next.extend(difference_simple(p, u)?);
            }
            if next.len() + out.len() > MAX_PIECES {
                return Err(Error::ResourceCap(format!(
                    "disambiguation produced more than {MAX_PIECES} terms"
                )));
            }
            pieces = next;
        }
        out.extend(pieces);
    }
    let mut res = SemilinearSet::new(s.dim, out);
    res.refresh_structural_flags();
    res.unambiguous = Check::Yes;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::natvec::NatVec;
    use crate::parikh::tests::boxed_points;

    fn nv<const N: usize>(v: [u64; N]) -> NatVec {
        NatVec::from(v)
    }

    fn certify(orig: &SemilinearSet, out: &SemilinearSet, bound: u64) {
        for p in boxed_points(orig.dim, bound) {
            let want = u64::from(orig.contains(&p));
            assert_eq!(out.count_representations(&p, 3), want, "at {p}");
        }
    }

    #[test]
    fn star_example_disambiguates_exactly() {
        let s = SemilinearSet::new(
            2,
            vec![
                LinearSet::new(nv([0, 0]), [nv([1, 0])]),
                LinearSet::new(nv([1, 0]), [nv([0, 1]), nv([1, 0])]),
            ],
        );
        let d = disambiguate(&s).unwrap();
        assert_eq!(
            d.terms,
            vec![
                LinearSet::new(nv([0, 0]), [nv([1, 0])]),
                LinearSet::new(nv([1, 1]), [nv([0, 1]), nv([1, 0])]),
            ]
        );
    }

    #[test]
    fn overlapping_rays_on_the_line() {
        let s = SemilinearSet::new(
            1,
            vec![
                LinearSet::new(nv([0]), [nv([1])]),
                LinearSet::new(nv([1]), [nv([1])]),
            ],
        );
        let d = disambiguate(&s).unwrap();
        certify(&s, &d, 20);
    }

    #[test]
    fn intersection_example() {
        let t = LinearSet::new(nv([0, 0]), [nv([1, 0])]);
        let u = LinearSet::new(nv([1, 0]), [nv([0, 1]), nv([1, 0])]);
        assert_eq!(
            intersect_simple(&t, &u).unwrap(),
            vec![LinearSet::new(nv([1, 0]), [nv([1, 0])])]
        );
    }

    #[test]
    fn difference_with_lattice_cosets() {
        // multiples of 2 minus multiples of 3, and a skewed plane case
        let t = LinearSet::new(nv([0]), [nv([2])]);
        let u = LinearSet::new(nv([0]), [nv([3])]);
        let d = SemilinearSet::new(1, difference_simple(&t, &u).unwrap());
        for x in 0..60u64 {
            let want = x % 2 == 0 && x % 3 != 0;
            assert_eq!(d.count_representations(&NatVec(vec![x]), 3), u64::from(want), "{x}");
        }

        let t = LinearSet::new(nv([0, 0]), [nv([1, 0]), nv([0, 1])]);
        let u = LinearSet::new(nv([1, 1]), [nv([2, 1]), nv([1, 2])]);
        let d = SemilinearSet::new(2, difference_simple(&t, &u).unwrap());
        for p in boxed_points(2, 14) {
            let want = t.contains(&p) && !u.contains(&p);
            assert_eq!(d.count_representations(&p, 3), u64::from(want), "{p}");
        }
    }

    #[test]
    fn three_dimensional_overlaps() {
        let s = SemilinearSet::new(
            3,
            vec![
                LinearSet::new(nv([0, 0, 0]), [nv([1, 1, 0]), nv([0, 0, 1])]),
                LinearSet::new(nv([1, 0, 0]), [nv([1, 0, 0]), nv([0, 1, 1])]),
                LinearSet::new(nv([0, 0, 0]), [nv([1, 0, 0]), nv([0, 1, 0]), nv([0, 0, 2])]),
            ],
        );
        let d = disambiguate(&s).unwrap();
        certify(&s, &d, 6);
    }
}
