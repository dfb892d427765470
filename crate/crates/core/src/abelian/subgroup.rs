use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::lattice::{hnf, lattice_quotient, solve_membership};
use super::{FinAbGroup, GroupElement, Homomorphism};
use crate::arith::IntMatrix;
use crate::error::{Error, Result};

/// A subgroup of a [`FinAbGroup`], stored by a canonical (Hermite) basis:
/// equal subgroups have identical bases.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    ambient: FinAbGroup,
    // k x k upper triangular, row-major
    basis: Vec<i64>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, gens {:?})", self.order(), self.generators())
    }
}

/// The abstract group underlying a subgroup, with its embedding.
#[derive(Clone, Debug)]
pub struct SubgroupStructure {
    pub group: FinAbGroup,
    pub embedding: Homomorphism,
    sub: Subgroup,
    // relation-lattice coordinates (one row per basis row) -> abstract coordinates
    to: Vec<Vec<i64>>,
}

impl SubgroupStructure {
    /// Abstract coordinates of an element of the subgroup.
    pub fn coordinates(&self, v: &[i64]) -> Vec<i64> {
        let c = self.sub.decompose(v).expect("element lies in the subgroup");
        let r = self.group.rank();
        let mut out = vec![0i64; r];
        for (j, &cj) in c.iter().enumerate() {
            for (i, slot) in out.iter_mut().enumerate() {
                *slot = ((*slot as i128 + cj as i128 * self.to[j][i] as i128)
                    .rem_euclid(self.group.orders()[i] as i128)) as i64;
            }
        }
        out
    }
}

/// A quotient `V / A` with its projection and a deterministic section.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FinAbGroup,
    pub projection: Homomorphism,
    sub: Subgroup,
    lifts: Vec<Vec<i64>>,
}

impl Quotient {
    /// The lexicographically smallest representative of the coset.
    pub fn section(&self, x: &GroupElement) -> Result<GroupElement> {
        if x.group() != &self.group {
            return Err(Error::MixedAmbients);
        }
        let amb = self.sub.ambient();
        let mut v = vec![0i128; amb.rank()];
        for (c, lift) in x.coords().iter().zip(&self.lifts) {
            for (slot, &l) in v.iter_mut().zip(lift) {
                *slot += *c as i128 * l as i128;
            }
        }
        let v: Vec<i64> =
            v.iter().zip(amb.orders()).map(|(&x, &d)| x.rem_euclid(d as i128) as i64).collect();
        amb.element(&self.sub.canonical_rep(&v))
    }
}

impl Subgroup {
    pub fn trivial(ambient: &FinAbGroup) -> Self {
        Self::from_coords(ambient, &[])
    }

    pub fn whole(ambient: &FinAbGroup) -> Self {
        let k = ambient.rank();
        let gens: Vec<Vec<i64>> = (0..k).map(|i| ambient.generator(i).coords().to_vec()).collect();
        Self::from_coords(ambient, &gens)
    }

    pub fn generated_by(ambient: &FinAbGroup, gens: &[GroupElement]) -> Result<Self> {
        if gens.iter().any(|g| g.group() != ambient) {
            return Err(Error::MixedAmbients);
        }
        let coords: Vec<Vec<i64>> = gens.iter().map(|g| g.coords().to_vec()).collect();
        Ok(Self::from_coords(ambient, &coords))
    }

    pub(crate) fn from_coords(ambient: &FinAbGroup, gens: &[Vec<i64>]) -> Self {
        Subgroup { ambient: ambient.clone(), basis: hnf(ambient.orders(), gens) }
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    fn k(&self) -> usize {
        self.ambient.rank()
    }

    fn row(&self, i: usize) -> &[i64] {
        let k = self.k();
        &self.basis[i * k..(i + 1) * k]
    }

    fn pivot(&self, i: usize) -> i64 {
        self.basis[i * self.k() + i]
    }

    pub(crate) fn basis_rows(&self) -> Vec<Vec<i64>> {
        (0..self.k()).map(|i| self.row(i).to_vec()).collect()
    }

    /// The nonzero rows of the canonical basis, as coordinate vectors.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        (0..self.k())
            .filter(|&i| self.pivot(i) as u64 != self.ambient.orders()[i])
            .map(|i| self.ambient.reduce(self.row(i)))
            .collect()
    }

    pub fn generator_elements(&self) -> Vec<GroupElement> {
        self.generators().iter().map(|g| self.ambient.element(g).unwrap()).collect()
    }

    pub fn order(&self) -> u128 {
        (0..self.k()).map(|i| (self.ambient.orders()[i] / self.pivot(i) as u64) as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        (0..self.k()).all(|i| self.pivot(i) == 1)
    }

    /// Exponent of the subgroup (lcm of the orders of its generators).
    pub fn exponent(&self) -> u64 {
        self.generator_elements().iter().map(|g| g.order()).fold(1, |a, o| a.lcm(&o))
    }

    /// Coefficients `c` with `v ≡ Σ c_i · row_i`, or `None` when `v` is not a member.
    fn decompose(&self, v: &[i64]) -> Option<Vec<i64>> {
        let k = self.k();
        let orders = self.ambient.orders();
        let mut v: Vec<i128> = v.iter().zip(orders).map(|(&x, &d)| (x as i128).rem_euclid(d as i128)).collect();
        let mut c = vec![0i64; k];
        for i in 0..k {
            let p = self.pivot(i) as i128;
            if v[i] % p != 0 {
                return None;
            }
            let q = v[i] / p;
            c[i] = q as i64;
            if q != 0 {
                for j in i..k {
                    v[j] = (v[j] - q * self.row(i)[j] as i128).rem_euclid(orders[j] as i128);
                }
            }
        }
        Some(c)
    }

    pub fn contains_coords(&self, v: &[i64]) -> bool {
        self.decompose(v).is_some()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.group() == &self.ambient && self.contains_coords(x.coords())
    }

    /// Lexicographically smallest element of the coset `v + self`.
    pub fn canonical_rep(&self, v: &[i64]) -> Vec<i64> {
        let k = self.k();
        let orders = self.ambient.orders();
        let mut v: Vec<i128> = v.iter().zip(orders).map(|(&x, &d)| (x as i128).rem_euclid(d as i128)).collect();
        for i in 0..k {
            let p = self.pivot(i) as i128;
            let q = Integer::div_floor(&v[i], &p);
            if q != 0 {
                for j in i..k {
                    v[j] = (v[j] - q * self.row(i)[j] as i128).rem_euclid(orders[j] as i128);
                }
            }
        }
        v.into_iter().map(|x| x as i64).collect()
    }

    fn same_ambient(&self, other: &Subgroup) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::MixedAmbients);
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup> {
        self.same_ambient(other)?;
        let mut gens = self.generators();
        gens.extend(other.generators());
        Ok(Self::from_coords(&self.ambient, &gens))
    }

    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup> {
        self.same_ambient(other)?;
        let k = self.k();
        // x = A^T a = B^T b
        let a = self.basis_rows();
        let b = other.basis_rows();
        let left: Vec<Vec<i64>> = (0..k).map(|i| a.iter().map(|row| row[i]).collect()).collect();
        let right: Vec<Vec<i64>> = (0..k).map(|i| b.iter().map(|row| row[i]).collect()).collect();
        let coeffs = solve_membership(&left, &right, k);
        let orders = self.ambient.orders();
        let gens: Vec<Vec<i64>> = coeffs
            .iter()
            .map(|c| {
                (0..k)
                    .map(|j| {
                        let s: BigInt = (0..k).map(|i| &c[i] * BigInt::from(a[i][j])).sum();
                        s.mod_floor(&BigInt::from(orders[j])).to_i64().expect("reduced entry fits")
                    })
                    .collect()
            })
            .collect();
        Ok(Self::from_coords(&self.ambient, &gens))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.generators().iter().all(|g| other.contains_coords(g))
    }

    /// Is `self + other` direct, i.e. `self ∩ other = 0`?
    pub fn is_independent_of(&self, other: &Subgroup) -> Result<bool> {
        let s = self.sum(other)?;
        Ok(s.order() == self.order() * other.order())
    }

    /// All elements in lexicographic order. Fails above `bound` elements.
    pub fn elements(&self, bound: u128) -> Result<Vec<Vec<i64>>> {
        let order = self.order();
        if order > bound {
            return Err(Error::BoundExceeded { order, bound });
        }
        let k = self.k();
        let orders = self.ambient.orders();
        let ranges: Vec<i64> = (0..k).map(|i| orders[i] as i64 / self.pivot(i)).collect();
        let mut out = Vec::with_capacity(order as usize);
        let mut c = vec![0i64; k];
        loop {
            let mut v = vec![0i128; k];
            for i in 0..k {
                if c[i] != 0 {
                    for j in i..k {
                        v[j] += c[i] as i128 * self.row(i)[j] as i128;
                    }
                }
            }
            out.push(v.iter().zip(orders).map(|(&x, &d)| x.rem_euclid(d as i128) as i64).collect());
            // odometer
            let mut i = k;
            loop {
                if i == 0 {
                    out.sort();
                    return Ok(out);
                }
                i -= 1;
                c[i] += 1;
                if c[i] < ranges[i] {
                    break;
                }
                c[i] = 0;
            }
        }
    }

    /// Image of this subgroup under a homomorphism out of its ambient group.
    pub fn image_under(&self, f: &Homomorphism) -> Result<Subgroup> {
        if f.src() != &self.ambient {
            return Err(Error::MixedAmbients);
        }
        let gens: Vec<Vec<i64>> = self.generators().iter().map(|g| f.apply_coords(g)).collect();
        Ok(Self::from_coords(f.dst(), &gens))
    }

    /// Invariant-factor structure and embedding.
    pub fn structure(&self) -> SubgroupStructure {
        let k = self.k();
        let rows = self.basis_rows();
        let orders = self.ambient.orders();
        // relation lattice {c : Σ c_i row_i ∈ D Z^k}
        let left: Vec<Vec<i64>> = (0..k).map(|i| rows.iter().map(|r| r[i]).collect()).collect();
        let right: Vec<Vec<i64>> =
            (0..k).map(|i| (0..k).map(|j| if i == j { orders[i] as i64 } else { 0 }).collect()).collect();
        let rel = solve_membership(&left, &right, k);
        let rel_matrix = IntMatrix::from_big_rows(&rel);
        let q = lattice_quotient(&rel_matrix);
        let group = FinAbGroup::new(q.orders.clone()).expect("invariant factors form a chain");
        let columns: Vec<Vec<i64>> = q
            .from
            .iter()
            .map(|lift| {
                (0..k)
                    .map(|j| {
                        let mut s = BigInt::from(0);
                        for (i, c) in lift.iter().enumerate() {
                            s += c * BigInt::from(rows[i][j]);
                        }
                        s.mod_floor(&BigInt::from(orders[j])).to_i64().unwrap()
                    })
                    .collect()
            })
            .collect();
        let embedding = Homomorphism::from_columns(&group, &self.ambient, &columns);
        SubgroupStructure { group, embedding, sub: self.clone(), to: q.to }
    }

    /// `ambient / self`, with projection and section.
    pub fn quotient(&self) -> Quotient {
        let q = lattice_quotient(&IntMatrix::from_rows(&self.basis_rows()));
        let group = FinAbGroup::new(q.orders.clone()).expect("invariant factors form a chain");
        let projection = Homomorphism::from_columns(&self.ambient, &group, &q.to);
        let lifts = q
            .from
            .iter()
            .map(|l| {
                l.iter()
                    .zip(self.ambient.orders())
                    .map(|(x, &d)| x.mod_floor(&BigInt::from(d)).to_i64().unwrap())
                    .collect()
            })
            .collect();
        Quotient { group, projection, sub: self.clone(), lifts }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v52() -> FinAbGroup {
        FinAbGroup::elementary(5, 2).unwrap()
    }

    #[test]
    fn intersection_of_axes_is_trivial() {
        let a = Subgroup::from_coords(&v52(), &[vec![1, 0]]);
        let b = Subgroup::from_coords(&v52(), &[vec![0, 1]]);
        assert!(a.intersect(&b).unwrap().is_trivial());
        assert!(a.sum(&b).unwrap().is_whole());
    }

    #[test]
    fn quotient_by_axis() {
        let a = Subgroup::from_coords(&v52(), &[vec![1, 0]]);
        let q = a.quotient();
        assert_eq!(q.group.orders(), &[5]);
        let x = q.group.element(&[3]).unwrap();
        let lift = q.section(&x).unwrap();
        assert_eq!(q.projection.apply(&lift).unwrap(), x);
        assert_eq!(lift.coords()[0], 0);
    }

    #[test]
    fn structure_of_diagonal() {
        let g = FinAbGroup::new(vec![2, 4]).unwrap();
        let h = Subgroup::from_coords(&g, &[vec![1, 2]]);
        let st = h.structure();
        assert_eq!(st.group.orders(), &[2]);
        assert!(st.embedding.is_injective());
        assert_eq!(st.embedding.image(), h);
        let c = st.coordinates(&[1, 2]);
        assert_eq!(st.embedding.apply_coords(&c), vec![1, 2]);
    }

    #[test]
    fn elements_in_order() {
        let g = FinAbGroup::new(vec![4]).unwrap();
        let h = Subgroup::from_coords(&g, &[vec![2]]);
        assert_eq!(h.elements(100).unwrap(), vec![vec![0], vec![2]]);
        assert!(h.elements(1).is_err());
    }

    #[test]
    fn canonical_rep_is_minimal() {
        let g = FinAbGroup::new(vec![4, 4]).unwrap();
        let h = Subgroup::from_coords(&g, &[vec![2, 2]]);
        assert_eq!(h.canonical_rep(&[3, 3]), vec![1, 1]);
        assert_eq!(h.canonical_rep(&[2, 1]), vec![0, 3]);
    }
}
