//! The enveloping ring of `sl2` over `Z`: formal sums of words in `x, y, h`,
//! rewritten to the ordered basis `y^a h^b x^c` with
//! `xy → yx + h`, `xh → hx − 2x`, `hy → yh − 2y`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::abelian::Homomorphism;
use crate::error::{Error, Result};
use crate::presentation::LieAction;
use crate::report::CheckReport;

pub const CHECK_PBW: &str = "pbw-induction";

/// Letters in basis order: `y < h < x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Y,
    H,
    X,
}

impl Letter {
    fn from_char(c: char) -> Option<Letter> {
        match c {
            'x' => Some(Letter::X),
            'y' => Some(Letter::Y),
            'h' => Some(Letter::H),
            _ => None,
        }
    }
}

/// A formal integer combination of words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeWord {
    terms: Vec<(BigInt, Vec<Letter>)>,
}

impl FreeWord {
    pub fn zero() -> Self {
        FreeWord::default()
    }

    pub fn constant(c: i64) -> Self {
        FreeWord { terms: vec![(BigInt::from(c), Vec::new())] }
    }

    pub fn word(letters: &[Letter]) -> Self {
        FreeWord { terms: vec![(BigInt::one(), letters.to_vec())] }
    }

    pub fn letter(l: Letter) -> Self {
        Self::word(&[l])
    }

    pub fn power(l: Letter, k: usize) -> Self {
        Self::word(&vec![l; k])
    }

    pub fn terms(&self) -> &[(BigInt, Vec<Letter>)] {
        &self.terms
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = BigInt::from(c);
        FreeWord { terms: self.terms.iter().map(|(k, w)| (k * &c, w.clone())).collect() }
    }

    pub fn add(&self, other: &FreeWord) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        FreeWord { terms }
    }

    pub fn sub(&self, other: &FreeWord) -> Self {
        self.add(&other.scale(-1))
    }

    /// Concatenation, extended bilinearly.
    pub fn mul(&self, other: &FreeWord) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                terms.push((a * b, w));
            }
        }
        FreeWord { terms }
    }

    /// `h + c`.
    pub fn h_plus(c: i64) -> Self {
        Self::letter(Letter::H).add(&Self::constant(c))
    }

    /// A random word of length `1..=max_len` with coefficient 1.
    pub fn random<R: Rng>(rng: &mut R, max_len: usize) -> Self {
        let len = rng.gen_range(1..=max_len.max(1));
        let letters = [Letter::X, Letter::Y, Letter::H];
        Self::word(&(0..len).map(|_| letters[rng.gen_range(0..3)]).collect::<Vec<_>>())
    }
}

impl FromStr for FreeWord {
    type Err = Error;
    /// A single word such as `"xyy"`; the empty string is the unit.
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::malformed("", format!("letter `{c}` is not x, y or h"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeWord::word(&letters))
    }
}

/// Which inversion to rewrite first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random(u64),
}

fn rewrite(a: Letter, b: Letter) -> &'static [(i64, &'static [Letter])] {
    use Letter::*;
    match (a, b) {
        (X, Y) => &[(1, &[Y, X]), (1, &[H])],
        (X, H) => &[(1, &[H, X]), (-2, &[X])],
        (H, Y) => &[(1, &[Y, H]), (-2, &[Y])],
        _ => unreachable!("only inversions are rewritten"),
    }
}

/// An element in normal form: `(a, b, c) ↦` coefficient of `y^a h^b x^c`, zeros absent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PBWElement {
    terms: BTreeMap<(u32, u32, u32), BigInt>,
}

impl PBWElement {
    pub fn zero() -> Self {
        PBWElement::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 0, 1)
    }

    pub fn monomial(a: u32, b: u32, c: u32, coeff: i64) -> Self {
        let mut e = Self::zero();
        e.add_term((a, b, c), BigInt::from(coeff));
        e
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32, u32), BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: (u32, u32, u32), c: BigInt) {
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &PBWElement) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        PBWElement { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn sub(&self, other: &PBWElement) -> Self {
        self.add(&other.neg())
    }

    pub fn to_word(&self) -> FreeWord {
        let terms = self
            .terms
            .iter()
            .map(|(&(a, b, c), k)| {
                let mut w = vec![Letter::Y; a as usize];
                w.extend(std::iter::repeat(Letter::H).take(b as usize));
                w.extend(std::iter::repeat(Letter::X).take(c as usize));
                (k.clone(), w)
            })
            .collect();
        FreeWord { terms }
    }

    pub fn mul(&self, other: &PBWElement) -> Self {
        pbw_normalize(&self.to_word().mul(&other.to_word()))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(&(a, b, c), k)| {
                let coeff = k.to_i64().map_or_else(|| Value::String(k.to_string()), Value::from);
                json!({"y": a, "h": b, "x": c, "coeff": coeff})
            })
            .collect();
        json!({ "terms": terms })
    }
}

impl fmt::Display for PBWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(a, b, c), k)) in self.terms.iter().enumerate() {
            match (i, k.is_negative()) {
                (0, _) => write!(f, "{k}")?,
                (_, true) => write!(f, " - {}", k.abs())?,
                (_, false) => write!(f, " + {k}")?,
            }
            write!(f, "·y^{a} h^{b} x^{c}")?;
        }
        Ok(())
    }
}

fn exponents(w: &[Letter]) -> (u32, u32, u32) {
    let count = |l| w.iter().filter(|&&m| m == l).count() as u32;
    (count(Letter::Y), count(Letter::H), count(Letter::X))
}

/// Normal form, rewriting the leftmost inversion first.
pub fn pbw_normalize(w: &FreeWord) -> PBWElement {
    normalize_with(w, Strategy::Leftmost)
}

pub fn normalize_with(w: &FreeWord, strategy: Strategy) -> PBWElement {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut pending: BTreeMap<Vec<Letter>, BigInt> = BTreeMap::new();
    for (c, word) in &w.terms {
        *pending.entry(word.clone()).or_insert_with(BigInt::zero) += c;
    }
    let mut out = PBWElement::zero();
    while let Some((word, c)) = pending.pop_last() {
        if c.is_zero() {
            continue;
        }
        let inversions: Vec<usize> = (0..word.len().saturating_sub(1)).filter(|&i| word[i] > word[i + 1]).collect();
        if inversions.is_empty() {
            out.add_term(exponents(&word), c);
            continue;
        }
        let pos = match strategy {
            Strategy::Leftmost => inversions[0],
            Strategy::Rightmost => inversions[inversions.len() - 1],
            Strategy::Random(_) => inversions[rng.as_mut().expect("seeded").gen_range(0..inversions.len())],
        };
        for &(k, rep) in rewrite(word[pos], word[pos + 1]) {
            let mut next = word[..pos].to_vec();
            next.extend_from_slice(rep);
            next.extend_from_slice(&word[pos + 2..]);
            *pending.entry(next).or_insert_with(BigInt::zero) += &c * k;
        }
    }
    out
}

/// `y^i x = x y^i − i(h+i−1) y^{i−1}` and
/// `y^i x² = x² y^i − 2i(h+i−2) x y^{i−1} + i(i−1)(h+i−1)(h+i−2) y^{i−2}`, for `1 ≤ i ≤ i_max`.
pub fn verify_induction_identities(i_max: usize) -> CheckReport {
    use Letter::{X, Y};
    let mut r = CheckReport::pass(CHECK_PBW);
    let (x, x2) = (FreeWord::letter(X), FreeWord::power(X, 2));
    for i in 1..=i_max {
        let ii = i as i64;
        let yi = FreeWord::power(Y, i);
        let lhs = yi.mul(&x);
        let rhs = x.mul(&yi).sub(&FreeWord::h_plus(ii - 1).mul(&FreeWord::power(Y, i - 1)).scale(ii));
        r.require(pbw_normalize(&lhs) == pbw_normalize(&rhs), || format!("y^i x identity fails at i = {i}"));

        let lhs2 = yi.mul(&x2);
        let mut rhs2 = x2.mul(&yi).sub(&FreeWord::h_plus(ii - 2).mul(&x).mul(&FreeWord::power(Y, i - 1)).scale(2 * ii));
        if i >= 2 {
            let tail = FreeWord::h_plus(ii - 1).mul(&FreeWord::h_plus(ii - 2)).mul(&FreeWord::power(Y, i - 2));
            rhs2 = rhs2.add(&tail.scale(ii * (ii - 1)));
        }
        r.require(pbw_normalize(&lhs2) == pbw_normalize(&rhs2), || format!("y^i x² identity fails at i = {i}"));
    }
    r.with_detail(format!("checked 1 ≤ i ≤ {i_max}"))
}

/// Do the leftmost, rightmost and seeded random strategies agree on every word?
pub fn confluence_check(words: &[FreeWord], seed: u64) -> CheckReport {
    let mut r = CheckReport::pass("pbw-confluence");
    for (k, w) in words.iter().enumerate() {
        let left = normalize_with(w, Strategy::Leftmost);
        let right = normalize_with(w, Strategy::Rightmost);
        let random = normalize_with(w, Strategy::Random(seed.wrapping_add(k as u64)));
        r.require(left == right && left == random, || format!("strategies disagree on word {k}: {w:?}"));
    }
    r
}

fn letter_map(l: &LieAction, letter: Letter) -> &Homomorphism {
    let one = l.field().one();
    match letter {
        Letter::X => l.x(one),
        Letter::Y => l.y(one),
        Letter::H => l.h(one),
    }
}

/// Substitute `x_1, y_1, h_1` for `x, y, h`.
pub fn evaluate(e: &PBWElement, l: &LieAction) -> Homomorphism {
    evaluate_word(&e.to_word(), l)
}

pub fn evaluate_word(w: &FreeWord, l: &LieAction) -> Homomorphism {
    let module = l.module();
    let mut acc = Homomorphism::zero(module, module);
    for (c, word) in &w.terms {
        let mut m = Homomorphism::identity(module);
        for &letter in word {
            m = &m * letter_map(l, letter);
        }
        acc = &acc + &m.scale_big(c);
    }
    acc
}
