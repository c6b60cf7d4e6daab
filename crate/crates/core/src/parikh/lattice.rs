//! Exact linear algebra over ℚ and ℤ used by the semilinear machinery.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IVec = Vec<BigInt>;
pub type QVec = Vec<BigRational>;

pub fn ivec<I: IntoIterator<Item = i64>>(it: I) -> IVec {
    it.into_iter().map(BigInt::from).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_q(a: &[BigRational], b: &[BigInt]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * BigRational::from_integer(y.clone()))
        .fold(BigRational::zero(), |acc, t| acc + t)
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[BigInt], s: &BigInt) -> IVec {
    a.iter().map(|x| x * s).collect()
}

pub fn is_zero(a: &[BigInt]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Divides out the gcd of the entries.
pub fn primitive(v: &[BigInt]) -> IVec {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

/// Clears denominators of a rational vector and makes it primitive.
pub fn integerize(v: &[BigRational]) -> IVec {
    let l = v
        .iter()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: IVec = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    primitive(&ints)
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut [QVec], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..m[r].len() {
                    let delta = &f * &m[row][c];
                    m[r][c] = &m[r][c] - delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

fn to_q(rows: &[IVec]) -> Vec<QVec> {
    rows.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Rank over ℚ of a list of vectors.
pub fn rank(vectors: &[IVec]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let n = vectors[0].len();
    let mut m = to_q(vectors);
    rref(&mut m, n).len()
}

/// A basis of `{x ∈ ℚ^n : rows·x = 0}`, scaled to primitive integer vectors.
pub fn nullspace(rows: &[IVec], n: usize) -> Vec<IVec> {
    let mut m = to_q(rows);
    let pivots = rref(&mut m, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][f].clone();
            }
            integerize(&v)
        })
        .collect()
}

/// Coordinates `λ` with `Σ λ_j cols_j = x`, if `x` lies in the span.
/// `cols` must be linearly independent.
pub fn solve_in_span(cols: &[IVec], x: &[BigInt]) -> Option<QVec> {
    let e = cols.len();
    let d = x.len();
    let mut m: Vec<QVec> = (0..d)
        .map(|i| {
            let mut row: QVec = cols
                .iter()
                .map(|c| BigRational::from_integer(c[i].clone()))
                .collect();
            row.push(BigRational::from_integer(x[i].clone()));
            row
        })
        .collect();
    let pivots = rref(&mut m, e + 1);
    if pivots.contains(&e) {
        return None;
    }
    let mut lambda = vec![BigRational::zero(); e];
    for (i, &pc) in pivots.iter().enumerate() {
        lambda[pc] = m[i][e].clone();
    }
    Some(lambda)
}

/// Column-style echelon reduction `rows · U = H` with `U` unimodular.
/// Returns `(H as rows, U as columns, pivot list (row, col))`.
fn column_echelon(rows: &[IVec], n: usize) -> (Vec<IVec>, Vec<IVec>, Vec<(usize, usize)>) {
    let mut h: Vec<IVec> = rows.to_vec();
    // u[c] is column c of U
    let mut u: Vec<IVec> = (0..n)
        .map(|c| {
            let mut v = vec![BigInt::zero(); n];
            v[c] = BigInt::one();
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut col = 0;
    for r in 0..h.len() {
        if col == n {
            break;
        }
        loop {
            // smallest nonzero |entry| among columns col.. in row r
            let best = (col..n)
                .filter(|&c| !h[r][c].is_zero())
                .min_by(|&a, &b| h[r][a].abs().cmp(&h[r][b].abs()));
            let Some(b) = best else { break };
            swap_cols(&mut h, &mut u, col, b);
            let mut done = true;
            for c in col + 1..n {
                if !h[r][c].is_zero() {
                    let q = h[r][c].div_floor(&h[r][col]);
                    sub_col_multiple(&mut h, &mut u, c, col, &q);
                    if !h[r][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if col < n && !h[r][col].is_zero() {
            pivots.push((r, col));
            col += 1;
        }
    }
    (h, u, pivots)
}

fn swap_cols(h: &mut [IVec], u: &mut [IVec], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in h.iter_mut() {
        row.swap(a, b);
    }
    u.swap(a, b);
}

/// column `target -= q * column source`
fn sub_col_multiple(h: &mut [IVec], u: &mut [IVec], target: usize, source: usize, q: &BigInt) {
    for row in h.iter_mut() {
        let d = q * &row[source];
        row[target] -= d;
    }
    let src = u[source].clone();
    for (x, s) in u[target].iter_mut().zip(src) {
        *x -= q * s;
    }
}

/// A basis of the lattice `{x ∈ ℤ^n : rows·x = 0}`.
pub fn integer_kernel(rows: &[IVec], n: usize) -> Vec<IVec> {
    let (_, u, pivots) = column_echelon(rows, n);
    let used = pivots.len();
    u.into_iter().skip(used).collect()
}

/// Integer solutions of `rows·x = b`: a particular solution and a kernel basis.
pub fn integer_solve(rows: &[IVec], b: &[BigInt], n: usize) -> Option<(IVec, Vec<IVec>)> {
    let (h, u, pivots) = column_echelon(rows, n);
    let mut y = vec![BigInt::zero(); n];
    let mut pivot_of_row = vec![None; h.len()];
    for &(r, c) in &pivots {
        pivot_of_row[r] = Some(c);
    }
    for r in 0..h.len() {
        let partial: BigInt = (0..n)
            .filter(|&c| Some(c) != pivot_of_row[r])
            .map(|c| &h[r][c] * &y[c])
            .sum();
        let rest = &b[r] - partial;
        match pivot_of_row[r] {
            Some(c) => {
                if !(&rest % &h[r][c]).is_zero() {
                    return None;
                }
                y[c] = rest / &h[r][c];
            }
            None => {
                if !rest.is_zero() {
                    return None;
                }
            }
        }
    }
    let x0 = (0..n)
        .map(|i| (0..n).map(|c| &u[c][i] * &y[c]).sum())
        .collect();
    let kernel = u.into_iter().skip(pivots.len()).collect();
    Some((x0, kernel))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_dependent_basis() {
        // (1,0), (3,1), (1,1) as columns
        let rows = vec![ivec([1, 3, 1]), ivec([0, 1, 1])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert!(is_zero(&[dot(&rows[0], v), dot(&rows[1], v)]));
        assert_eq!(rank(&[ivec([1, 0]), ivec([3, 1]), ivec([1, 1])]), 2);
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // 2x - 4y = 0 -> kernel generated by (2,1)
        let k = integer_kernel(&[ivec([2, -4])], 2);
        assert_eq!(k.len(), 1);
        assert_eq!(primitive(&k[0]).iter().map(|x| x.abs()).collect::<Vec<_>>(), ivec([2, 1]));
    }

    #[test]
    fn integer_solve_detects_parity() {
        // 2x + 4y = 3 has no integer solution
        assert!(integer_solve(&[ivec([2, 4])], &ivec([3]), 2).is_none());
        let (x0, ker) = integer_solve(&[ivec([2, 4])], &ivec([6]), 2).unwrap();
        assert_eq!(dot(&ivec([2, 4]), &x0), BigInt::from(6));
        assert_eq!(ker.len(), 1);
    }

    #[test]
    fn integer_solve_overdetermined() {
        let rows = vec![ivec([1, 0]), ivec([0, 1]), ivec([1, 1])];
        let (x0, ker) = integer_solve(&rows, &ivec([2, 3, 5]), 2).unwrap();
        assert_eq!(x0, ivec([2, 3]));
        assert!(ker.is_empty());
        assert!(integer_solve(&rows, &ivec([2, 3, 4]), 2).is_none());
    }

    #[test]
    fn span_solve() {
        let cols = vec![ivec([2, 0, 0]), ivec([0, 3, 0])];
        let l = solve_in_span(&cols, &ivec([1, 1, 0])).unwrap();
        assert_eq!(l[0], BigRational::new(1.into(), 2.into()));
        assert!(solve_in_span(&cols, &ivec([0, 0, 1])).is_none());
    }
}
