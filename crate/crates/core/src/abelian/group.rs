use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite abelian group `Z/d_1 ⊕ … ⊕ Z/d_k` in invariant-factor form.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr", into = "GroupRepr")]
pub struct FinAbGroup {
    orders: Arc<[u64]>,
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    orders: Vec<u64>,
}

impl TryFrom<GroupRepr> for FinAbGroup {
    type Error = Error;
    fn try_from(r: GroupRepr) -> Result<Self> {
        FinAbGroup::new(r.orders)
    }
}

impl From<FinAbGroup> for GroupRepr {
    fn from(g: FinAbGroup) -> Self {
        GroupRepr { orders: g.orders.to_vec() }
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup{:?}", &self.orders[..])
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.orders.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FinAbGroup {
    /// Validates the divisibility chain `d_1 | d_2 | …` with every `d_i ≥ 2`.
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if let Some(&d) = orders.iter().find(|&&d| d < 2) {
            return Err(Error::ShapeMismatch(format!("cyclic factor order {d} is below 2")));
        }
        for w in orders.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::ShapeMismatch(format!(
                    "orders {:?} violate the divisibility chain at {} | {}",
                    orders, w[0], w[1]
                )));
            }
        }
        if orders.iter().any(|&d| d > i64::MAX as u64 / 4) {
            return Err(Error::ShapeMismatch("cyclic factor order too large".into()));
        }
        Ok(FinAbGroup { orders: orders.into() })
    }

    pub fn trivial() -> Self {
        FinAbGroup { orders: Arc::from(Vec::new()) }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        match n {
            0 => Err(Error::ShapeMismatch("cyclic group of order 0".into())),
            1 => Ok(Self::trivial()),
            _ => Self::new(vec![n]),
        }
    }

    /// `(Z/p)^k`.
    pub fn elementary(p: u64, k: usize) -> Result<Self> {
        if k == 0 {
            return Ok(Self::trivial());
        }
        Self::new(vec![p; k])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u128 {
        self.orders.iter().map(|&d| d as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// Least common multiple of the element orders (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.orders.last().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { group: self.clone(), coords: vec![0; self.rank()] }
    }

    /// The element with the given coordinates, reduced into `[0, d_i)`.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::ShapeMismatch(format!(
                "element has {} coordinates, group has {} factors",
                coords.len(),
                self.rank()
            )));
        }
        Ok(GroupElement { group: self.clone(), coords: self.reduce(coords) })
    }

    /// The `i`-th standard generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1;
        GroupElement { group: self.clone(), coords }
    }

    pub(crate) fn reduce(&self, coords: &[i64]) -> Vec<i64> {
        coords.iter().zip(self.orders.iter()).map(|(&c, &d)| c.rem_euclid(d as i64)).collect()
    }

    /// No element of order dividing `n` except 0: `gcd(n, d_i) = 1` for every factor.
    pub fn is_n_torsion_free(&self, n: u64) -> bool {
        self.orders.iter().all(|&d| n.gcd(&d) == 1)
    }

    /// Multiplication by `n` is surjective. On a finite group this agrees with torsion-freeness.
    pub fn is_n_divisible(&self, n: u64) -> bool {
        self.is_n_torsion_free(n)
    }

    /// All elements in lexicographic order of coordinates.
    pub fn elements(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        let total = self.order();
        let orders = self.orders.clone();
        (0..total).map(move |mut idx| {
            let mut coords = vec![0i64; orders.len()];
            for (slot, &d) in coords.iter_mut().zip(orders.iter()).rev() {
                *slot = (idx % d as u128) as i64;
                idx /= d as u128;
            }
            coords
        })
    }
}

/// An element of a [`FinAbGroup`], with coordinates reduced modulo the factor orders.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: FinAbGroup,
    coords: Vec<i64>,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl GroupElement {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.group != other.group {
            return Err(Error::MixedAmbients);
        }
        let sum: Vec<i64> = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(GroupElement { coords: self.group.reduce(&sum), group: self.group.clone() })
    }

    pub fn neg(&self) -> GroupElement {
        let neg: Vec<i64> = self.coords.iter().map(|c| -c).collect();
        GroupElement { coords: self.group.reduce(&neg), group: self.group.clone() }
    }

    pub fn scale(&self, k: i64) -> GroupElement {
        let coords = self
            .coords
            .iter()
            .zip(self.group.orders())
            .map(|(&c, &d)| ((c as i128 * k as i128).rem_euclid(d as i128)) as i64)
            .collect();
        GroupElement { coords, group: self.group.clone() }
    }

    /// Additive order of the element.
    pub fn order(&self) -> u64 {
        self.coords
            .iter()
            .zip(self.group.orders())
            .map(|(&c, &d)| d / (c as u64).gcd(&d))
            .fold(1, |acc, o| acc.lcm(&o))
    }
}
