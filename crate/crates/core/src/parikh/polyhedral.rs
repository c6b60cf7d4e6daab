//! Disjoint decomposition of the lattice points of a rational polyhedron into
//! linear sets with free bases.
//!
//! The polyhedron `{x : a_i·x ≥ b_i}` restricted to an affine lattice is
//! homogenized into a pointed cone one dimension up. The cone is split by a
//! pulling triangulation into simplicial cones, the simplicial cones are made
//! half-open with respect to a generic interior point so that they partition
//! the cone, and the lattice points of each half-open cone are the translates
//! of its generators' monoid by the points of its fundamental parallelepiped.
//! Slicing at height one then yields the pieces.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::lattice::{self, IVec, QVec};
use crate::error::{Error, Result};

/// Points `base + Σ z_i gens_i` with `z ∈ ℤ^q`. Generators must be independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLattice {
    pub base: IVec,
    pub gens: Vec<IVec>,
}

impl AffineLattice {
    /// The full lattice `ℤ^n`.
    pub fn full(n: usize) -> Self {
        AffineLattice {
            base: vec![BigInt::zero(); n],
            gens: (0..n)
                .map(|i| {
                    let mut v = vec![BigInt::zero(); n];
                    v[i] = BigInt::one();
                    v
                })
                .collect(),
        }
    }
}

/// The closed halfspace `normal·x ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: IVec,
    pub rhs: BigInt,
}

impl Halfspace {
    pub fn new(normal: IVec, rhs: BigInt) -> Self {
        Halfspace { normal, rhs }
    }

    /// `x_i ≥ 0` in dimension `n`.
    pub fn nonneg(n: usize, i: usize) -> Self {
        let mut normal = vec![BigInt::zero(); n];
        normal[i] = BigInt::one();
        Halfspace {
            normal,
            rhs: BigInt::zero(),
        }
    }
}

/// `offset + basis^⊕` with a linearly independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub offset: IVec,
    pub basis: Vec<IVec>,
}

/// Caps for the enumeration steps.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_parallelepiped: usize,
    pub max_genericity_attempts: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_parallelepiped: 200_000,
            max_genericity_attempts: 64,
        }
    }
}

/// Partitions `lat ∩ {x : h·x ≥ rhs for all h}` into disjoint pieces.
///
/// The region must be pointed: no line may lie inside it.
pub fn decompose(lat: &AffineLattice, ineqs: &[Halfspace]) -> Result<Vec<Piece>> {
    decompose_with(lat, ineqs, Limits::default())
}

pub fn decompose_with(
    lat: &AffineLattice,
    ineqs: &[Halfspace],
    limits: Limits,
) -> Result<Vec<Piece>> {
    let q = lat.gens.len();
    let dim = q + 1;

    // homogenized constraints on u = (z, t)
    let mut rows: Vec<IVec> = Vec::new();
    for h in ineqs {
        let mut row: IVec = lat.gens.iter().map(|g| lattice::dot(&h.normal, g)).collect();
        row.push(lattice::dot(&h.normal, &lat.base) - &h.rhs);
        if !lattice::is_zero(&row) {
            rows.push(row);
        }
    }
    let mut t_row = vec![BigInt::zero(); dim];
    t_row[q] = BigInt::one();
    rows.push(t_row);
    rows.sort();
    rows.dedup();

    if lattice::rank(&rows) < dim {
        return Err(Error::Precondition(
            "lattice-point region is not pointed".into(),
        ));
    }

    let rays = extreme_rays(&rows, dim)?;
    if rays.is_empty() {
        return Ok(Vec::new());
    }
    let cone_dim = lattice::rank(&rays);
    let all: Vec<usize> = (0..rays.len()).collect();
    let simplices = triangulate(&rays, &rows, &all);

    let ambient = ambient_lattice(&rays, dim);
    let y = generic_point(&rays, &simplices, limits)?;

    let to_ambient = |z: &[BigInt]| -> IVec {
        let mut v = vec![BigInt::zero(); lat.base.len()];
        for (zi, g) in z.iter().zip(&lat.gens) {
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += zi * gi;
            }
        }
        v
    };

    let mut pieces = Vec::new();
    for simplex in &simplices {
        let gens: Vec<IVec> = simplex.iter().map(|&i| rays[i].clone()).collect();
        debug_assert_eq!(gens.len(), cone_dim);
        let lam_y = lattice::solve_in_span(&gens, &y).expect("generic point lies in the span");
        let open: Vec<bool> = lam_y.iter().map(|l| l.is_negative()).collect();

        let flat: Vec<&IVec> = gens.iter().filter(|g| g[q].is_zero()).collect();
        let flat_dirs: Vec<IVec> = flat.iter().map(|g| to_ambient(&g[..q])).collect();
        let climbing: Vec<&IVec> = gens.iter().filter(|g| g[q].is_one()).collect();

        for x in parallelepiped(&gens, &ambient, &open, limits)? {
            let height = &x[q];
            if height.is_one() {
                let off = lattice::add(&lat.base, &to_ambient(&x[..q]));
                pieces.push(Piece {
                    offset: off,
                    basis: flat_dirs.clone(),
                });
            } else if height.is_zero() {
                for g in &climbing {
                    let z = lattice::add(&x[..q], &g[..q]);
                    let off = lattice::add(&lat.base, &to_ambient(&z));
                    pieces.push(Piece {
                        offset: off,
                        basis: flat_dirs.clone(),
                    });
                }
            }
        }
    }
    Ok(pieces)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn satisfies(rows: &[IVec], v: &[BigInt]) -> bool {
    rows.iter().all(|r| !lattice::dot(r, v).is_negative())
}

/// Extreme rays of the pointed cone `{u : rows·u ≥ 0}` as primitive vectors.
fn extreme_rays(rows: &[IVec], dim: usize) -> Result<Vec<IVec>> {
    let mut found = BTreeSet::new();
    if rows.len() + 1 < dim {
        return Ok(Vec::new());
    }
    for subset in combinations(rows.len(), dim - 1) {
        let sub: Vec<IVec> = subset.iter().map(|&i| rows[i].clone()).collect();
        let ns = lattice::nullspace(&sub, dim);
        if ns.len() != 1 {
            continue;
        }
        let v = &ns[0];
        let neg: IVec = v.iter().map(|x| -x).collect();
        let pos_ok = satisfies(rows, v);
        let neg_ok = satisfies(rows, &neg);
        if pos_ok && neg_ok {
            return Err(Error::Precondition("cone contains a line".into()));
        }
        if pos_ok {
            found.insert(v.clone());
        } else if neg_ok {
            found.insert(neg);
        }
    }
    Ok(found.into_iter().collect())
}

/// Pulling triangulation of the face spanned by `face` (indices into `rays`).
fn triangulate(rays: &[IVec], rows: &[IVec], face: &[usize]) -> Vec<Vec<usize>> {
    let vecs: Vec<IVec> = face.iter().map(|&i| rays[i].clone()).collect();
    let e = lattice::rank(&vecs);
    if face.len() == e {
        return vec![face.to_vec()];
    }
    let apex = face[0];
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for row in rows {
        let tight: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&i| lattice::dot(row, &rays[i]).is_zero())
            .collect();
        if tight.len() < face.len() && !tight.is_empty() {
            let tv: Vec<IVec> = tight.iter().map(|&i| rays[i].clone()).collect();
            if lattice::rank(&tv) + 1 == e {
                facets.insert(tight);
            }
        }
    }
    let mut out = Vec::new();
    for facet in facets {
        if facet.contains(&apex) {
            continue;
        }
        for mut s in triangulate(rays, rows, &facet) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

/// Basis of `ℤ^dim ∩ span(rays)`.
fn ambient_lattice(rays: &[IVec], dim: usize) -> Vec<IVec> {
    let ortho = lattice::nullspace(rays, dim);
    if ortho.is_empty() {
        return AffineLattice::full(dim).gens;
    }
    lattice::integer_kernel(&ortho, dim)
}

/// A positive combination of all rays lying on no facet hyperplane of any simplex.
fn generic_point(rays: &[IVec], simplices: &[Vec<usize>], limits: Limits) -> Result<IVec> {
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    for attempt in 0..limits.max_genericity_attempts {
        let mut y = vec![BigInt::zero(); rays[0].len()];
        for r in rays {
            seed = seed
                .wrapping_mul(6_364_136_223_846_793_005)
                .wrapping_add(1_442_695_040_888_963_407);
            let w = 1 + (seed >> 33) % (97 + 31 * attempt as u64);
            for (yi, ri) in y.iter_mut().zip(r) {
                *yi += ri * BigInt::from(w);
            }
        }
        let ok = simplices.iter().all(|s| {
            let gens: Vec<IVec> = s.iter().map(|&i| rays[i].clone()).collect();
            lattice::solve_in_span(&gens, &y)
                .map(|l| l.iter().all(|x| !x.is_zero()))
                .unwrap_or(false)
        });
        if ok {
            return Ok(y);
        }
    }
    Err(Error::ResourceCap(
        "no generic interior point found for half-open decomposition".into(),
    ))
}

/// Lattice points `Σ λ_j g_j` with `λ_j ∈ [0,1)` (or `(0,1]` where `open[j]`).
fn parallelepiped(
    gens: &[IVec],
    ambient: &[IVec],
    open: &[bool],
    limits: Limits,
) -> Result<Vec<IVec>> {
    let steps: Vec<QVec> = ambient
        .iter()
        .map(|a| {
            lattice::solve_in_span(gens, a)
                .expect("ambient lattice lies in the span")
                .iter()
                .map(lattice::frac)
                .collect()
        })
        .collect();
    let zero: QVec = vec![BigRational::zero(); gens.len()];
    let mut seen: BTreeSet<QVec> = BTreeSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(cur) = queue.pop_front() {
        for s in &steps {
            let next: QVec = cur.iter().zip(s).map(|(a, b)| lattice::frac(&(a + b))).collect();
            if seen.insert(next.clone()) {
                if seen.len() > limits.max_parallelepiped {
                    return Err(Error::ResourceCap(format!(
                        "fundamental parallelepiped exceeds {} points",
                        limits.max_parallelepiped
                    )));
                }
                queue.push_back(next);
            }
        }
    }
    let dim = gens[0].len();
    Ok(seen
        .into_iter()
        .map(|mut lam| {
            for (l, &o) in lam.iter_mut().zip(open) {
                if o && l.is_zero() {
                    *l = BigRational::one();
                }
            }
            (0..dim)
                .map(|i| {
                    let v = lam
                        .iter()
                        .zip(gens)
                        .map(|(l, g)| l * BigRational::from_integer(g[i].clone()))
                        .fold(BigRational::zero(), |a, b| a + b);
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parikh::lattice::ivec;
    use std::collections::BTreeMap;

    fn ge(normal: &[i64], rhs: i64) -> Halfspace {
        Halfspace::new(ivec(normal.iter().copied()), BigInt::from(rhs))
    }

    /// Counts how many pieces contain each point of the box `[0, bound]^n`.
    fn coverage(pieces: &[Piece], n: usize, bound: i64) -> BTreeMap<Vec<i64>, usize> {
        let mut count = BTreeMap::new();
        for p in pieces {
            // enumerate coefficient vectors while the point stays in the box
            fn rec(
                p: &Piece,
                idx: usize,
                cur: IVec,
                bound: i64,
                count: &mut BTreeMap<Vec<i64>, usize>,
            ) {
                if cur.iter().any(|x| x > &BigInt::from(bound) || x < &BigInt::from(-bound)) {
                    return;
                }
                if idx == p.basis.len() {
                    let key: Vec<i64> = cur.iter().map(|x| i64::try_from(x).unwrap()).collect();
                    *count.entry(key).or_insert(0) += 1;
                    return;
                }
                let mut c = cur;
                loop {
                    rec(p, idx + 1, c.clone(), bound, count);
                    c = lattice::add(&c, &p.basis[idx]);
                    if c.iter().any(|x| x > &BigInt::from(bound) || x < &BigInt::from(-bound)) {
                        break;
                    }
                }
            }
            let _ = n;
            rec(p, 0, p.offset.clone(), bound, &mut count);
        }
        count
    }

    fn check(lat: &AffineLattice, ineqs: &[Halfspace], bound: i64, member: impl Fn(&[i64]) -> bool) {
        let pieces = decompose(lat, ineqs).unwrap();
        let n = lat.base.len();
        for p in &pieces {
            assert_eq!(lattice::rank(&p.basis), p.basis.len(), "basis must be free");
        }
        let cov = coverage(&pieces, n, bound);
        for (pt, c) in &cov {
            assert_eq!(*c, 1, "point {pt:?} covered {c} times");
            assert!(member(pt), "point {pt:?} is not in the region");
        }
        // every member in the box is covered
        let mut pt = vec![-bound; n];
        loop {
            if member(&pt) {
                assert!(cov.contains_key(&pt), "missing {pt:?}");
            }
            let mut i = 0;
            loop {
                if i == n {
                    return;
                }
                pt[i] += 1;
                if pt[i] <= bound {
                    break;
                }
                pt[i] = -bound;
                i += 1;
            }
        }
    }

    #[test]
    fn quadrant_shifted() {
        let ineqs = [ge(&[1, 0], 1), ge(&[0, 1], 0)];
        check(&AffineLattice::full(2), &ineqs, 6, |p| p[0] >= 1 && p[1] >= 0);
    }

    #[test]
    fn strict_diagonal_halves() {
        let ineqs = [ge(&[1, 0], 0), ge(&[0, 1], 0), ge(&[1, -1], 1)];
        check(&AffineLattice::full(2), &ineqs, 7, |p| {
            p[0] >= 0 && p[1] >= 0 && p[0] > p[1]
        });
    }

    #[test]
    fn non_simplicial_cone_in_3d() {
        // x,y,z >= 0 and x + y >= z, y + z >= x (four facets)
        let ineqs = [
            ge(&[1, 0, 0], 0),
            ge(&[0, 1, 0], 0),
            ge(&[0, 0, 1], 0),
            ge(&[1, 1, -1], 0),
            ge(&[-1, 1, 1], 0),
        ];
        check(&AffineLattice::full(3), &ineqs, 5, |p| {
            p.iter().all(|&x| x >= 0) && p[0] + p[1] >= p[2] && p[1] + p[2] >= p[0]
        });
    }

    #[test]
    fn bounded_polytope() {
        let ineqs = [ge(&[1, 0], 0), ge(&[0, 1], 0), ge(&[-2, -3], -12)];
        check(&AffineLattice::full(2), &ineqs, 7, |p| {
            p[0] >= 0 && p[1] >= 0 && 2 * p[0] + 3 * p[1] <= 12
        });
    }

    #[test]
    fn sublattice_and_lower_dimension() {
        // even points on the diagonal x = y
        let lat = AffineLattice {
            base: ivec([0, 0]),
            gens: vec![ivec([2, 2])],
        };
        let ineqs = [ge(&[1, 0], 0), ge(&[0, 1], 0)];
        check(&lat, &ineqs, 9, |p| p[0] == p[1] && p[0] >= 0 && p[0] % 2 == 0);
    }

    #[test]
    fn implicit_equality() {
        let ineqs = [ge(&[1, 0], 0), ge(&[0, 1], 0), ge(&[0, -1], 0)];
        check(&AffineLattice::full(2), &ineqs, 6, |p| p[0] >= 0 && p[1] == 0);
    }

    #[test]
    fn index_two_lattice_in_cone() {
        let lat = AffineLattice {
            base: ivec([1, 0]),
            gens: vec![ivec([1, 1]), ivec([1, -1])],
        };
        let ineqs = [ge(&[1, 0], 0), ge(&[0, 1], 0), ge(&[1, -2], 0)];
        check(&lat, &ineqs, 8, |p| {
            (p[0] + p[1]) % 2 == 1 && p[0] >= 0 && p[1] >= 0 && p[0] >= 2 * p[1]
        });
    }

    #[test]
    fn empty_region() {
        let ineqs = [ge(&[1], 3), ge(&[-1], -2)];
        assert!(decompose(&AffineLattice::full(1), &ineqs).unwrap().is_empty());
    }

    #[test]
    fn rejects_lines() {
        let ineqs = [ge(&[1, 0], 0)];
        assert!(decompose(&AffineLattice::full(2), &ineqs).is_err());
    }
}
