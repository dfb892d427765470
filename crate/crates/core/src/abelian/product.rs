use super::lattice::lattice_quotient;
use super::{FinAbGroup, Homomorphism};
use crate::arith::IntMatrix;
use crate::error::Result;

/// A direct product of groups, brought into invariant-factor form, with its
/// injections and projections.
#[derive(Clone, Debug)]
pub struct ProductGroup {
    pub group: FinAbGroup,
    pub injections: Vec<Homomorphism>,
    pub projections: Vec<Homomorphism>,
}

impl ProductGroup {
    pub fn new(factors: &[FinAbGroup]) -> Self {
        let orders: Vec<u64> = factors.iter().flat_map(|f| f.orders().iter().copied()).collect();
        let k = orders.len();
        let diag: Vec<Vec<i64>> =
            (0..k).map(|i| (0..k).map(|j| if i == j { orders[i] as i64 } else { 0 }).collect()).collect();
        let q = lattice_quotient(&IntMatrix::from_rows(&diag));
        let group = FinAbGroup::new(q.orders.clone()).expect("invariant factors form a chain");
        let mut injections = Vec::with_capacity(factors.len());
        let mut projections = Vec::with_capacity(factors.len());
        let mut offset = 0;
        for f in factors {
            let r = f.rank();
            let columns: Vec<Vec<i64>> = q.to[offset..offset + r].to_vec();
            injections.push(Homomorphism::from_columns(f, &group, &columns));
            let proj_columns: Vec<Vec<i64>> = q
                .from
                .iter()
                .map(|lift| {
                    lift[offset..offset + r]
                        .iter()
                        .zip(f.orders())
                        .map(|(x, &d)| {
                            let m = x % num_bigint::BigInt::from(d);
                            let v: i64 = m.try_into().expect("reduced coordinate fits");
                            v.rem_euclid(d as i64)
                        })
                        .collect()
                })
                .collect();
            projections.push(Homomorphism::from_columns(&group, f, &proj_columns));
            offset += r;
        }
        ProductGroup { group, injections, projections }
    }

    /// `Σ inj_k ∘ f_k ∘ proj_k` for one endomorphism per factor.
    pub fn block_diagonal(&self, blocks: &[&Homomorphism]) -> Result<Homomorphism> {
        let mut acc = Homomorphism::zero(&self.group, &self.group);
        for ((inj, proj), f) in self.injections.iter().zip(&self.projections).zip(blocks) {
            acc = acc.try_add(&inj.compose(&f.compose(proj)?)?)?;
        }
        Ok(acc)
    }

    /// `Σ maps_k ∘ proj_k`: the homomorphism out of the product given on each factor.
    pub fn copairing(&self, maps: &[&Homomorphism]) -> Result<Homomorphism> {
        let dst = maps.first().map(|m| m.dst().clone()).unwrap_or_else(FinAbGroup::trivial);
        let mut acc = Homomorphism::zero(&self.group, &dst);
        for (proj, f) in self.projections.iter().zip(maps) {
            acc = acc.try_add(&f.compose(proj)?)?;
        }
        Ok(acc)
    }
}
