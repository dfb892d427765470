//! Lattice helpers. A subgroup of `Z/d_1 ⊕ … ⊕ Z/d_k` is a lattice `L ⊇ D·Z^k`,
//! stored by its Hermite normal form (upper triangular rows, pivot `p_i | d_i`,
//! entries above each pivot reduced into `[0, p_j)`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::{integer_kernel, smith_normal_form, IntMatrix};

fn rem(x: i128, d: u64) -> i128 {
    x.rem_euclid(d as i128)
}

/// Hermite normal form of the lattice generated by `gens` together with `D·Z^k`.
/// Returns the `k × k` basis in row-major order.
pub(crate) fn hnf(orders: &[u64], gens: &[Vec<i64>]) -> Vec<i64> {
    let k = orders.len();
    let mut work: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| g.iter().zip(orders).map(|(&c, &d)| rem(c as i128, d)).collect())
        .filter(|g: &Vec<i128>| g.iter().any(|&c| c != 0))
        .collect();
    let mut basis = vec![vec![0i128; k]; k];
    for i in 0..k {
        let mut pivot = vec![0i128; k];
        pivot[i] = orders[i] as i128;
        for row in work.iter_mut() {
            if row[i] == 0 {
                continue;
            }
            let (x, y) = (pivot[i], row[i]);
            let e = x.extended_gcd(&y);
            let (g, a, b) = (e.gcd, e.x, e.y);
            let (xg, yg) = (x / g, y / g);
            for j in i..k {
                let (pj, rj) = (pivot[j], row[j]);
                let d = orders[j];
                pivot[j] = rem(a * pj + b * rj, d);
                row[j] = rem(xg * rj - yg * pj, d);
            }
            // keep the pivot positive and exact (it divides d_i)
            pivot[i] = g.abs();
            row[i] = 0;
        }
        work.retain(|r| r.iter().any(|&c| c != 0));
        basis[i] = pivot;
    }
    // back-reduce entries above the pivots
    for i in 0..k {
        for j in i + 1..k {
            let p = basis[j][j];
            let q = Integer::div_floor(&basis[i][j], &p);
            if q != 0 {
                for c in j..k {
                    let v = basis[i][c] - q * basis[j][c];
                    basis[i][c] = if c == j { v } else { rem(v, orders[c]) };
                }
            }
        }
    }
    basis.into_iter().flatten().map(|v| v as i64).collect()
}

/// Structure of `Z^k / L` for a full-rank lattice `L` spanned by the rows of `basis`.
pub(crate) struct LatticeQuotient {
    /// Invariant factors greater than one.
    pub orders: Vec<u64>,
    /// `to[j][i]`: coordinate `i` of the image of the standard vector `e_j`.
    pub to: Vec<Vec<i64>>,
    /// `from[i]`: an integer vector lifting quotient generator `i`.
    pub from: Vec<Vec<BigInt>>,
}

pub(crate) fn lattice_quotient(basis: &IntMatrix) -> LatticeQuotient {
    let k = basis.cols();
    let snf = smith_normal_form(basis);
    let diag = snf.diagonal();
    let kept: Vec<usize> = (0..k).filter(|&i| diag[i] != BigInt::from(1)).collect();
    let orders: Vec<u64> = kept
        .iter()
        .map(|&i| diag[i].to_u64().expect("quotient of a full-rank lattice is finite"))
        .collect();
    let to = (0..k)
        .map(|j| {
            kept.iter()
                .zip(&orders)
                .map(|(&i, &s)| {
                    let v: BigInt = snf.w[(j, i)].mod_floor(&BigInt::from(s));
                    v.to_i64().unwrap()
                })
                .collect()
        })
        .collect();
    let from = kept.iter().map(|&i| (0..k).map(|c| snf.w_inv[(i, c)].clone()).collect()).collect();
    LatticeQuotient { orders, to, from }
}

/// Integer vectors `x` (length `m`) with `left · x ∈ span(cols of right)`, as a generating list.
/// `left` is `k × m`, `right` is `k × r`.
pub(crate) fn solve_membership(left: &[Vec<i64>], right: &[Vec<i64>], m: usize) -> Vec<Vec<BigInt>> {
    let k = left.len();
    let r = right.first().map_or(0, |row| row.len());
    let mut a = IntMatrix::zeros(k, m + r);
    for i in 0..k {
        for j in 0..m {
            a[(i, j)] = BigInt::from(left[i][j]);
        }
        for j in 0..r {
            a[(i, m + j)] = -BigInt::from(right[i][j]);
        }
    }
    let ker = integer_kernel(&a);
    (0..ker.cols()).map(|c| (0..m).map(|i| ker[(i, c)].clone()).collect()).collect()
}

/// Reduce integer vectors modulo the factor orders.
pub(crate) fn reduce_rows(rows: &[Vec<BigInt>], orders: &[u64]) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .zip(orders)
                .map(|(x, &d)| x.mod_floor(&BigInt::from(d)).to_i64().expect("reduced entry fits"))
                .collect()
        })
        .collect()
}
