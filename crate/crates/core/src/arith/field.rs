//! Finite fields `F_{p^n}` in a fixed polynomial basis.
//!
//! Elements are stored as a compact code. The code enumerates the
//! coefficient vectors `(c_0, ..., c_{n-1})` (coefficient of `t^i` at index
//! `i`) in lexicographic order, so `code = sum c_i p^(n-1-i)`. Multiplication
//! goes through log/exp tables built from the smallest primitive element.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on `p^n`, keeps exhaustive relation checks tractable.
pub const DEFAULT_MAX_FIELD_SIZE: u64 = 10_000;

/// Canonical description of `F_{p^n}`: the modulus is the lexicographically
/// smallest monic irreducible polynomial of degree `n` (coefficients low to high).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u64,
    pub n: u32,
    pub modulus: Vec<u64>,
}

/// A field element. `Copy`, tagged with its field so mixing can be detected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    tag: u32,
    code: u32,
}

impl FieldElement {
    pub fn code(self) -> u32 {
        self.code
    }
}

#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

struct FieldInner {
    desc: FieldDesc,
    tag: u32,
    size: u32,
    digits: Vec<Vec<u32>>,
    // exp[k] = g^k, log[code] = k for nonzero codes
    exp: Vec<u32>,
    log: Vec<u32>,
    one: u32,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.inner.desc == other.inner.desc
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.inner.desc.p, self.inner.desc.n)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    // b monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * bi) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn monic_polys(p: u64, deg: u32) -> impl Iterator<Item = Vec<u64>> {
    let count = p.pow(deg);
    (0..count).map(move |mut code| {
        let mut coeffs = vec![0; deg as usize + 1];
        // lexicographic on (c_0, ..., c_{deg-1})
        for i in (0..deg as usize).rev() {
            coeffs[i] = code % p;
            code /= p;
        }
        coeffs[deg as usize] = 1;
        coeffs
    })
}

/// Irreducibility by trial division against every monic polynomial of degree `<= n/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() as u32 - 1;
    if n == 0 {
        return false;
    }
    for d in 1..=n / 2 {
        for g in monic_polys(p, d) {
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u64, n: u32) -> Vec<u64> {
    monic_polys(p, n)
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

impl Field {
    /// `F_{p^n}` with the default size bound.
    pub fn new(p: u64, n: u32) -> Result<Field> {
        Field::with_bound(p, n, DEFAULT_MAX_FIELD_SIZE)
    }

    pub fn with_bound(p: u64, n: u32, bound: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        let size = p.checked_pow(n).filter(|&q| q <= bound);
        let size = size.ok_or(Error::FieldTooLarge { p, n, bound })?;
        let modulus = smallest_irreducible(p, n);
        let nn = n as usize;
        let digits: Vec<Vec<u32>> = (0..size)
            .map(|mut code| {
                let mut c = vec![0u32; nn];
                for i in (0..nn).rev() {
                    c[i] = (code % p) as u32;
                    code /= p;
                }
                c
            })
            .collect();
        let encode = |c: &[u64]| -> u32 { c.iter().fold(0u64, |acc, &x| acc * p + x) as u32 };
        let polymul = |a: &[u32], b: &[u32]| -> Vec<u64> {
            let mut prod = vec![0u64; 2 * nn - 1];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
                }
            }
            let mut r = poly_rem(&prod, &modulus, p);
            r.resize(nn, 0);
            r
        };
        let mut one_c = vec![0u64; nn];
        one_c[0] = 1;
        let one = encode(&one_c);
        let q1 = size as u32 - 1;
        let mut exp = Vec::new();
        let mut log = vec![0u32; size as usize];
        if q1 == 1 {
            exp.push(one);
        } else {
            for g in 1..size as u32 {
                let mut powers = vec![one];
                let mut cur = one;
                loop {
                    cur = encode(&polymul(&digits[cur as usize], &digits[g as usize]));
                    if cur == one {
                        break;
                    }
                    powers.push(cur);
                }
                if powers.len() as u32 == q1 {
                    exp = powers;
                    break;
                }
            }
        }
        for (k, &c) in exp.iter().enumerate() {
            log[c as usize] = k as u32;
        }
        let tag = ((p as u32) << 8) | n;
        Ok(Field {
            inner: Arc::new(FieldInner {
                desc: FieldDesc { p, n, modulus },
                tag,
                size: size as u32,
                digits,
                exp,
                log,
                one,
            }),
        })
    }

    pub fn from_desc(desc: &FieldDesc) -> Result<Field> {
        Field::from_desc_with_bound(desc, DEFAULT_MAX_FIELD_SIZE)
    }

    /// Rebuilds a field from its serialized description; the modulus must be the canonical one.
    pub fn from_desc_with_bound(desc: &FieldDesc, bound: u64) -> Result<Field> {
        let f = Field::with_bound(desc.p, desc.n, bound)?;
        if f.inner.desc.modulus != desc.modulus {
            return Err(Error::malformed(
                "/field/modulus",
                format!("expected canonical modulus {:?}", f.inner.desc.modulus),
            ));
        }
        Ok(f)
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.inner.desc
    }

    pub fn p(&self) -> u64 {
        self.inner.desc.p
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.desc.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.desc.n
    }

    pub fn size(&self) -> u32 {
        self.inner.size
    }

    fn el(&self, code: u32) -> FieldElement {
        FieldElement { tag: self.inner.tag, code }
    }

    pub fn zero(&self) -> FieldElement {
        self.el(0)
    }

    pub fn one(&self) -> FieldElement {
        self.el(self.inner.one)
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.tag == self.inner.tag && a.code < self.inner.size
    }

    pub fn from_code(&self, code: u32) -> Result<FieldElement> {
        if code >= self.inner.size {
            return Err(Error::InvalidElement(format!("code {code} out of range")));
        }
        Ok(self.el(code))
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        let p = self.p();
        if coeffs.len() != self.degree() as usize || coeffs.iter().any(|&c| c >= p) {
            return Err(Error::InvalidElement(format!("{coeffs:?} is not a reduced coefficient vector")));
        }
        Ok(self.el(coeffs.iter().fold(0u64, |acc, &x| acc * p + x) as u32))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        self.inner.digits[a.code as usize].iter().map(|&c| c as u64).collect()
    }

    /// Image of an integer under `Z -> K`.
    pub fn from_int(&self, k: i64) -> FieldElement {
        let p = self.p() as i64;
        let r = k.rem_euclid(p) as u64;
        let mut c = vec![0u64; self.degree() as usize];
        c[0] = r;
        self.from_coeffs(&c).expect("reduced")
    }

    /// The polynomial basis element `t^i`.
    pub fn basis(&self, i: usize) -> FieldElement {
        let mut c = vec![0u64; self.degree() as usize];
        c[i] = 1;
        self.from_coeffs(&c).expect("basis index in range")
    }

    pub fn basis_elements(&self) -> Vec<FieldElement> {
        (0..self.degree() as usize).map(|i| self.basis(i)).collect()
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.inner.size).map(|c| self.el(c))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.inner.size).map(|c| self.el(c))
    }

    pub fn is_zero(&self, a: FieldElement) -> bool {
        a.code == 0
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        let p = self.p() as u32;
        let da = &self.inner.digits[a.code as usize];
        let db = &self.inner.digits[b.code as usize];
        let code = da.iter().zip(db).fold(0u32, |acc, (&x, &y)| acc * p + (x + y) % p);
        self.el(code)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.p() as u32;
        let code = self.inner.digits[a.code as usize]
            .iter()
            .fold(0u32, |acc, &x| acc * p + (p - x) % p);
        self.el(code)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        if a.code == 0 || b.code == 0 {
            return self.zero();
        }
        let q1 = self.inner.size as u64 - 1;
        let k = (self.inner.log[a.code as usize] as u64 + self.inner.log[b.code as usize] as u64) % q1;
        self.el(self.inner.exp[k as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.code == 0 {
            return Err(Error::ZeroInverse);
        }
        let q1 = self.inner.size - 1;
        let k = (q1 - self.inner.log[a.code as usize]) % q1;
        Ok(self.el(self.inner.exp[k as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return self.one();
        }
        if a.code == 0 {
            return self.zero();
        }
        let q1 = self.inner.size as u64 - 1;
        let e = (self.inner.log[a.code as usize] as u64 * (k % q1)) % q1;
        self.el(self.inner.exp[e as usize])
    }

    /// `a^(p^k)`, the `k`-th power of the Frobenius automorphism.
    pub fn frobenius(&self, a: FieldElement, k: u32) -> FieldElement {
        let mut r = a;
        for _ in 0..k {
            r = self.pow(r, self.p());
        }
        r
    }

    fn check(&self, a: FieldElement) -> Result<()> {
        if a.tag != self.inner.tag {
            return Err(Error::MixedFields);
        }
        if a.code >= self.inner.size {
            return Err(Error::InvalidElement(format!("code {}", a.code)));
        }
        Ok(())
    }

    pub fn try_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn sqrt(&self, a: FieldElement) -> Option<FieldElement> {
        self.elements().find(|&s| self.mul(s, s) == a)
    }

    /// Witness `(mu, nu)` with `a = mu^2 - nu^2`.
    pub fn difference_of_squares(&self, a: FieldElement) -> Option<(FieldElement, FieldElement)> {
        for nu in self.elements() {
            let t = self.add(a, self.mul(nu, nu));
            if let Some(mu) = self.sqrt(t) {
                return Some((mu, nu));
            }
        }
        None
    }

    /// Witness `(m, s)` with `a = m * s^2` for an integer `0 <= m < p`.
    pub fn int_multiple_of_square(&self, a: FieldElement) -> Option<(u64, FieldElement)> {
        for m in 0..self.p() {
            let mk = self.from_int(m as i64);
            for s in self.elements() {
                if self.mul(mk, self.mul(s, s)) == a {
                    return Some((m, s));
                }
            }
        }
        None
    }

    /// Matrix over `F_p` of multiplication by `a` in the basis `1, t, ..., t^{n-1}`;
    /// column `i` holds the coefficients of `a t^i`.
    pub fn mul_matrix(&self, a: FieldElement) -> Vec<Vec<i64>> {
        let n = self.degree() as usize;
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            let c = self.coeffs(self.mul(a, self.basis(i)));
            for r in 0..n {
                m[r][i] = c[r] as i64;
            }
        }
        m
    }

    pub fn format(&self, a: FieldElement) -> String {
        let c = self.coeffs(a);
        let parts: Vec<String> = c
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| match i {
                0 => format!("{x}"),
                1 if x == 1 => "t".to_string(),
                1 => format!("{x}t"),
                _ if x == 1 => format!("t^{i}"),
                _ => format!("{x}t^{i}"),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Key used for scalar tables in serialized certificates: the coefficient list.
    pub fn key(&self, a: FieldElement) -> String {
        self.coeffs(a).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_has_linear_modulus() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.desc().modulus, vec![0, 1]);
        assert_eq!(f.size(), 5);
    }

    // Oracle: enumerate monic quadratics in lexicographic order, reject those with a root.
    fn first_rootless_quadratic(p: u64) -> Vec<u64> {
        for b in 0..p {
            for a in 0..p {
                if (0..p).all(|x| (x * x + a * x + b) % p != 0) {
                    return vec![b, a, 1];
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn canonical_quadratic_moduli() {
        assert_eq!(Field::new(3, 2).unwrap().desc().modulus, vec![1, 0, 1]);
        assert_eq!(Field::new(2, 2).unwrap().desc().modulus, vec![1, 1, 1]);
        for p in [2, 3, 5, 7] {
            assert_eq!(Field::new(p, 2).unwrap().desc().modulus, first_rootless_quadratic(p));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Field::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(Field::new(101, 2), Err(Error::FieldTooLarge { .. })));
        assert!(Field::with_bound(101, 2, 20_000).is_ok());
    }

    #[test]
    fn inverse_examples() {
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.inv(f5.from_int(2)).unwrap(), f5.from_int(3));
        let f9 = Field::new(3, 2).unwrap();
        assert!(matches!(f9.inv(f9.zero()), Err(Error::ZeroInverse)));
        assert!(matches!(f9.try_add(f9.one(), f5.one()), Err(Error::MixedFields)));
    }

    #[test]
    fn multiple_of_square_witness() {
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.int_multiple_of_square(f5.from_int(2)), Some((2, f5.one())));
        // in F_9 the integers are squares, so non-squares have no witness
        let f9 = Field::new(3, 2).unwrap();
        // t^2 = -1, so t + 1 has multiplicative order 8 and is not a square
        let a = f9.add(f9.basis(1), f9.one());
        assert!(f9.sqrt(a).is_none());
        assert!(f9.int_multiple_of_square(a).is_none());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, n) in [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3), (5, 2), (3, 3), (2, 4), (3, 4)] {
            let f = Field::new(p, n).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                if !f.is_zero(a) {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    if f.size() <= 27 {
                        for &c in &els {
                            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn odd_characteristic_differences_of_squares() {
        for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (3, 4)] {
            let f = Field::new(p, n).unwrap();
            for a in f.elements() {
                let (mu, nu) = f.difference_of_squares(a).expect("witness exists");
                assert_eq!(f.sub(f.mul(mu, mu), f.mul(nu, nu)), a);
            }
        }
    }

    #[test]
    fn mul_matrix_matches_multiplication() {
        let f = Field::new(3, 2).unwrap();
        for a in f.elements() {
            let m = f.mul_matrix(a);
            for b in f.elements() {
                let cb = f.coeffs(b);
                let prod: Vec<u64> = (0..2)
                    .map(|r| ((m[r][0] * cb[0] as i64 + m[r][1] * cb[1] as i64) % 3) as u64)
                    .collect();
                assert_eq!(prod, f.coeffs(f.mul(a, b)));
            }
        }
    }
}
