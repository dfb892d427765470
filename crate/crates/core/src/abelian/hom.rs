use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::lattice::{reduce_rows, solve_membership};
use super::{FinAbGroup, GroupElement, Subgroup};
use crate::arith::{solve_integer, IntMatrix};
use crate::error::{Error, Result};

/// A homomorphism between finite abelian groups. Column `j` of the matrix is the
/// image of the `j`-th standard generator of the source, in target coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    src: FinAbGroup,
    dst: FinAbGroup,
    // row-major, dst.rank() rows, src.rank() columns, row i reduced mod dst order i
    data: Vec<i64>,
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.matrix())
    }
}

impl Homomorphism {
    /// Validates shapes and well-definedness (`d_j · column_j = 0` in the target).
    pub fn new(src: &FinAbGroup, dst: &FinAbGroup, matrix: &[Vec<i64>]) -> Result<Self> {
        let (rows, cols) = (dst.rank(), src.rank());
        if matrix.len() != rows || matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch(format!(
                "expected a {rows}x{cols} matrix, got {} rows",
                matrix.len()
            )));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for (row, &e) in matrix.iter().zip(dst.orders()) {
            data.extend(row.iter().map(|&v| v.rem_euclid(e as i64)));
        }
        let h = Homomorphism { src: src.clone(), dst: dst.clone(), data };
        for (j, &d) in src.orders().iter().enumerate() {
            for (i, &e) in dst.orders().iter().enumerate() {
                if (h.entry(i, j) as i128 * d as i128) % e as i128 != 0 {
                    return Err(Error::NotWellDefined { column: j, order: d });
                }
            }
        }
        Ok(h)
    }

    pub(crate) fn from_raw(src: &FinAbGroup, dst: &FinAbGroup, data: Vec<i64>) -> Self {
        debug_assert_eq!(data.len(), src.rank() * dst.rank());
        let mut h = Homomorphism { src: src.clone(), dst: dst.clone(), data };
        h.normalize();
        h
    }

    /// Build from the images of the source generators (target coordinates).
    pub(crate) fn from_columns(src: &FinAbGroup, dst: &FinAbGroup, columns: &[Vec<i64>]) -> Self {
        let (rows, cols) = (dst.rank(), src.rank());
        debug_assert_eq!(columns.len(), cols);
        let mut data = vec![0; rows * cols];
        for (j, col) in columns.iter().enumerate() {
            for i in 0..rows {
                data[i * cols + j] = col[i];
            }
        }
        Self::from_raw(src, dst, data)
    }

    fn normalize(&mut self) {
        let cols = self.src.rank();
        if cols == 0 {
            return;
        }
        for (row, &e) in self.data.chunks_mut(cols).zip(self.dst.orders()) {
            for v in row {
                *v = v.rem_euclid(e as i64);
            }
        }
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        let k = g.rank();
        let mut data = vec![0; k * k];
        for i in 0..k {
            data[i * k + i] = 1;
        }
        Homomorphism { src: g.clone(), dst: g.clone(), data }
    }

    pub fn zero(src: &FinAbGroup, dst: &FinAbGroup) -> Self {
        Homomorphism { src: src.clone(), dst: dst.clone(), data: vec![0; src.rank() * dst.rank()] }
    }

    pub fn src(&self) -> &FinAbGroup {
        &self.src
    }

    pub fn dst(&self) -> &FinAbGroup {
        &self.dst
    }

    pub fn is_endomorphism(&self) -> bool {
        self.src == self.dst
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.src.rank() + j]
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let cols = self.src.rank();
        (0..self.dst.rank()).map(|i| (0..cols).map(|j| self.entry(i, j)).collect()).collect()
    }

    /// Image of the `j`-th source generator.
    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.dst.rank()).map(|i| self.entry(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_endomorphism() && *self == Self::identity(&self.src)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Homomorphism) -> Result<Homomorphism> {
        if inner.dst != self.src {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose: inner target {} differs from outer source {}",
                inner.dst, self.src
            )));
        }
        Ok(self.compose_unchecked(inner))
    }

    fn compose_unchecked(&self, inner: &Homomorphism) -> Homomorphism {
        let (n, m, c) = (self.dst.rank(), self.src.rank(), inner.src.rank());
        let mut data = vec![0i64; n * c];
        for i in 0..n {
            let e = self.dst.orders()[i] as i128;
            for j in 0..c {
                let mut acc: i128 = 0;
                for l in 0..m {
                    acc += self.data[i * m + l] as i128 * inner.data[l * c + j] as i128;
                }
                data[i * c + j] = acc.rem_euclid(e) as i64;
            }
        }
        Homomorphism { src: inner.src.clone(), dst: self.dst.clone(), data }
    }

    fn same_shape(&self, other: &Homomorphism) -> Result<()> {
        if self.src != other.src || self.dst != other.dst {
            return Err(Error::ShapeMismatch("homomorphisms have different source or target".into()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Homomorphism) -> Result<Homomorphism> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self::from_raw(&self.src, &self.dst, data))
    }

    pub fn try_sub(&self, other: &Homomorphism) -> Result<Homomorphism> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self::from_raw(&self.src, &self.dst, data))
    }

    pub fn scale(&self, k: i64) -> Homomorphism {
        let cols = self.src.rank();
        let mut data = self.data.clone();
        if cols > 0 {
            for (row, &e) in data.chunks_mut(cols).zip(self.dst.orders()) {
                for v in row {
                    *v = (*v as i128 * k as i128).rem_euclid(e as i128) as i64;
                }
            }
        }
        Homomorphism { src: self.src.clone(), dst: self.dst.clone(), data }
    }

    /// Scale by an arbitrary-precision integer (reduced modulo the target exponent).
    pub fn scale_big(&self, k: &BigInt) -> Homomorphism {
        let r = k.mod_floor(&BigInt::from(self.dst.exponent().max(1)));
        self.scale(r.to_i64().expect("reduced scalar fits"))
    }

    pub fn power(&self, k: u32) -> Result<Homomorphism> {
        if !self.is_endomorphism() {
            return Err(Error::ShapeMismatch("power of a non-endomorphism".into()));
        }
        let mut acc = Self::identity(&self.src);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        if x.group() != &self.src {
            return Err(Error::MixedAmbients);
        }
        Ok(self.dst.element(&self.apply_coords(x.coords())).expect("image has target shape"))
    }

    pub(crate) fn apply_coords(&self, x: &[i64]) -> Vec<i64> {
        let m = self.src.rank();
        (0..self.dst.rank())
            .map(|i| {
                let acc: i128 = (0..m).map(|j| self.data[i * m + j] as i128 * x[j] as i128).sum();
                acc.rem_euclid(self.dst.orders()[i] as i128) as i64
            })
            .collect()
    }

    pub fn kernel(&self) -> Subgroup {
        self.preimage(&Subgroup::trivial(&self.dst)).expect("trivial subgroup of the target")
    }

    pub fn image(&self) -> Subgroup {
        let cols: Vec<Vec<i64>> = (0..self.src.rank()).map(|j| self.column(j)).collect();
        Subgroup::from_coords(&self.dst, &cols)
    }

    /// `{x : f(x) ∈ h}`.
    pub fn preimage(&self, h: &Subgroup) -> Result<Subgroup> {
        if h.ambient() != &self.dst {
            return Err(Error::MixedAmbients);
        }
        let m = self.src.rank();
        let left = self.matrix();
        // columns of `right` are the basis rows of h
        let basis = h.basis_rows();
        let k = self.dst.rank();
        let right: Vec<Vec<i64>> = (0..k).map(|i| basis.iter().map(|row| row[i]).collect()).collect();
        let gens = reduce_rows(&solve_membership(&left, &right, m), self.src.orders());
        Ok(Subgroup::from_coords(&self.src, &gens))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_whole()
    }

    pub fn is_bijective(&self) -> bool {
        self.src.order() == self.dst.order() && self.is_injective()
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Result<Homomorphism> {
        if !self.is_bijective() {
            return Err(Error::NotInvertible(format!("map {} -> {} is not bijective", self.src, self.dst)));
        }
        let (k, m) = (self.dst.rank(), self.src.rank());
        let mut a = IntMatrix::zeros(k, m + k);
        for i in 0..k {
            for j in 0..m {
                a[(i, j)] = BigInt::from(self.entry(i, j));
            }
            a[(i, m + i)] = -BigInt::from(self.dst.orders()[i]);
        }
        let mut columns = Vec::with_capacity(k);
        for t in 0..k {
            let mut b = vec![BigInt::from(0); k];
            b[t] = BigInt::from(1);
            let x = solve_integer(&a, &b).ok_or_else(|| Error::NotInvertible("no preimage found".into()))?;
            let col: Vec<i64> = (0..m)
                .map(|i| x[i].mod_floor(&BigInt::from(self.src.orders()[i])).to_i64().unwrap())
                .collect();
            columns.push(col);
        }
        Ok(Self::from_columns(&self.dst, &self.src, &columns))
    }

    /// Restriction of an endomorphism to an invariant subgroup, in the
    /// coordinates of the subgroup's abstract structure.
    pub fn restrict(&self, h: &Subgroup) -> Result<Homomorphism> {
        if !self.is_endomorphism() || h.ambient() != &self.src {
            return Err(Error::MixedAmbients);
        }
        let st = h.structure();
        let mut columns = Vec::new();
        for j in 0..st.group.rank() {
            let img = self.apply_coords(&st.embedding.column(j));
            if !h.contains_coords(&img) {
                return Err(Error::ShapeMismatch("subgroup is not invariant".into()));
            }
            columns.push(st.coordinates(&img));
        }
        Ok(Self::from_columns(&st.group, &st.group, &columns))
    }
}

fn expect_shape<T>(r: Result<T>) -> T {
    r.unwrap_or_else(|e| panic!("{e}"))
}

impl Mul for &Homomorphism {
    type Output = Homomorphism;
    /// Composition `self ∘ rhs`. Panics if the shapes do not match.
    fn mul(self, rhs: &Homomorphism) -> Homomorphism {
        expect_shape(self.compose(rhs))
    }
}

impl Add for &Homomorphism {
    type Output = Homomorphism;
    fn add(self, rhs: &Homomorphism) -> Homomorphism {
        expect_shape(self.try_add(rhs))
    }
}

impl Sub for &Homomorphism {
    type Output = Homomorphism;
    fn sub(self, rhs: &Homomorphism) -> Homomorphism {
        expect_shape(self.try_sub(rhs))
    }
}

impl Neg for &Homomorphism {
    type Output = Homomorphism;
    fn neg(self) -> Homomorphism {
        self.scale(-1)
    }
}
