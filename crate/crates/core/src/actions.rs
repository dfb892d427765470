//! Queries on a module: the `δ` operators, centralizers and commutators,
//! nilpotence lengths, weight spaces, annihilators, triviality and simplicity.

use std::collections::HashSet;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::abelian::{FinAbGroup, Homomorphism, Subgroup};
use crate::arith::FieldElement;
use crate::error::{Error, Result};
use crate::presentation::{Action, GroupAction, LieAction};
use crate::report::{CheckReport, RelationReport};

/// Default bound on `|V|` for element enumeration.
pub const DEFAULT_MAX_GROUP_ORDER: u128 = 59_049;

/// The enumeration bound, overridable through `SL2VAR_MAX_GROUP_ORDER`.
pub fn enumeration_bound() -> u128 {
    std::env::var("SL2VAR_MAX_GROUP_ORDER")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_GROUP_ORDER)
}

/// `δ_λ = u_λ - 1` together with its scalar.
#[derive(Clone, Debug)]
pub struct DeltaOperator {
    pub lambda: FieldElement,
    pub endo: Homomorphism,
}

pub fn delta(a: &GroupAction, lam: FieldElement) -> DeltaOperator {
    DeltaOperator { lambda: lam, endo: a.delta(lam) }
}

/// Exhaustive check of the `δ` calculus: cocycle, commutation and torus twist.
pub fn delta_relations(a: &GroupAction) -> RelationReport {
    let f = a.field();
    let deltas: Vec<Homomorphism> = f.elements().map(|l| a.delta(l)).collect();
    let d = |l: FieldElement| &deltas[l.code() as usize];
    let mut r = RelationReport::new();
    for lam in f.elements() {
        for mu in f.elements() {
            let w = || vec![f.format(lam), f.format(mu)];
            let prod = d(lam) * d(mu);
            r.record("δ_{λ+μ} = δ_λ + δ_μ + δ_λδ_μ", &(&(d(lam) + d(mu)) + &prod) == d(f.add(lam, mu)), w);
            r.record("δ_λδ_μ = δ_μδ_λ", prod == d(mu) * d(lam), w);
            if !f.is_zero(lam) {
                let lhs = a.t(lam) * d(mu);
                let rhs = d(f.mul(f.mul(lam, lam), mu)) * a.t(lam);
                r.record("t_λδ_μ = δ_{λ²μ}t_λ", lhs == rhs, w);
            }
        }
    }
    r
}

/// Named sets of group elements.
#[derive(Clone, Debug)]
pub enum ElementSet {
    /// The unipotent subgroup `U = {u_λ}`.
    Unipotent,
    /// The whole group.
    Whole,
    /// The torus `T = {t_λ}`.
    Torus,
    /// The Borel subgroup `B = TU`.
    Borel,
    W,
    /// The central element `i = t_{-1}`.
    Central,
    Custom(Vec<Homomorphism>),
}

impl FromStr for ElementSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "U" => ElementSet::Unipotent,
            "G" => ElementSet::Whole,
            "T" => ElementSet::Torus,
            "B" => ElementSet::Borel,
            "w" => ElementSet::W,
            "i" => ElementSet::Central,
            other => return Err(Error::UnknownSet(other.to_string())),
        })
    }
}

impl ElementSet {
    /// Elements generating the set (as a group); enough for centralizers and commutators.
    pub fn generators(&self, a: &GroupAction) -> Vec<Homomorphism> {
        let f = a.field();
        let torus = || f.nonzero().map(|l| a.t(l).clone()).collect::<Vec<_>>();
        match self {
            ElementSet::Unipotent => a.u_basis().to_vec(),
            ElementSet::Whole => a.generators(),
            ElementSet::Torus => torus(),
            ElementSet::Borel => {
                let mut g = a.u_basis().to_vec();
                g.extend(torus());
                g
            }
            ElementSet::W => vec![a.w().clone()],
            ElementSet::Central => vec![a.i().clone()],
            ElementSet::Custom(v) => v.clone(),
        }
    }
}

/// `∩ ker f` over the maps.
pub fn kernel_intersection(module: &FinAbGroup, maps: &[Homomorphism]) -> Subgroup {
    maps.iter().fold(Subgroup::whole(module), |acc, m| acc.intersect(&m.kernel()).expect("same ambient"))
}

/// `Σ im f` over the maps.
pub fn image_sum(module: &FinAbGroup, maps: &[Homomorphism]) -> Subgroup {
    maps.iter().fold(Subgroup::trivial(module), |acc, m| acc.sum(&m.image()).expect("same ambient"))
}

fn minus_one(maps: &[Homomorphism], module: &FinAbGroup) -> Vec<Homomorphism> {
    let id = Homomorphism::identity(module);
    maps.iter().map(|g| g - &id).collect()
}

/// `C_V(S) = ∩ ker(s - 1)`.
pub fn centralizer(a: &GroupAction, set: &ElementSet) -> Subgroup {
    kernel_intersection(a.module(), &minus_one(&set.generators(a), a.module()))
}

/// `[S, V] = Σ im(s - 1)`.
pub fn commutator_sub(a: &GroupAction, set: &ElementSet) -> Subgroup {
    image_sum(a.module(), &minus_one(&set.generators(a), a.module()))
}

/// Ascending chain `0 = Z_0 ≤ Z_1 ≤ …` with `Z_{i+1} = {v : n·v ∈ Z_i for all n}`.
#[derive(Clone, Debug)]
pub struct LengthChain {
    pub chain: Vec<Subgroup>,
    /// Smallest `k` with `Z_k = V`; `None` when the chain stops below `V`.
    pub length: Option<usize>,
}

#[derive(Serialize)]
struct LengthChainRepr {
    length: Option<usize>,
    chain: Vec<Vec<Vec<i64>>>,
}

impl Serialize for LengthChain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LengthChainRepr { length: self.length, chain: self.chain.iter().map(|z| z.generators()).collect() }
            .serialize(s)
    }
}

impl LengthChain {
    pub fn build(module: &FinAbGroup, nilpotents: &[Homomorphism]) -> Self {
        let mut chain = vec![Subgroup::trivial(module)];
        loop {
            let last = chain.last().unwrap();
            if last.is_whole() {
                return LengthChain { length: Some(chain.len() - 1), chain };
            }
            let next = nilpotents
                .iter()
                .fold(Subgroup::whole(module), |acc, n| acc.intersect(&n.preimage(last).unwrap()).unwrap());
            if &next == last {
                return LengthChain { chain, length: None };
            }
            chain.push(next);
        }
    }

    pub fn is_at_most(&self, k: usize) -> bool {
        self.length.is_some_and(|l| l <= k)
    }
}

/// `U`-length via the centralizer chain of the `δ_b`.
pub fn u_length(a: &GroupAction) -> LengthChain {
    let deltas: Vec<Homomorphism> = a.field().basis_elements().into_iter().map(|b| a.delta(b)).collect();
    LengthChain::build(a.module(), &deltas)
}

/// `𝔲`-length via the chain of the `x_b`.
pub fn fu_length(l: &LieAction) -> LengthChain {
    LengthChain::build(l.module(), l.x_basis())
}

fn reject_zero(field: &crate::arith::Field, lam: FieldElement) -> Result<()> {
    if field.is_zero(lam) {
        return Err(Error::InvalidElement("quadraticity is degenerate at λ = 0".into()));
    }
    Ok(())
}

/// `δ_λ² = 0`.
pub fn is_quadratic_element(a: &GroupAction, lam: FieldElement) -> Result<bool> {
    reject_zero(a.field(), lam)?;
    let d = a.delta(lam);
    Ok((&d * &d).is_zero())
}

/// `x_λ² = 0`.
pub fn is_quadratic_lie_element(l: &LieAction, lam: FieldElement) -> Result<bool> {
    reject_zero(l.field(), lam)?;
    Ok((l.x(lam) * l.x(lam)).is_zero())
}

/// `E_i = ker(h - i)`.
pub fn weight_space(l: &LieAction, i: i64) -> Subgroup {
    let h = l.h(l.field().one());
    (h - &Homomorphism::identity(l.module()).scale(i)).kernel()
}

/// Weight spaces for every `i` in the window.
pub fn weight_spaces(l: &LieAction, window: std::ops::RangeInclusive<i64>) -> Vec<(i64, Subgroup)> {
    window.map(|i| (i, weight_space(l, i))).collect()
}

/// `Ann_V(𝔤) = ∩ ker x_b ∩ ker y_b`.
pub fn annihilator(l: &LieAction) -> Subgroup {
    kernel_intersection(l.module(), &l.generators())
}

/// Is the endomorphism nilpotent?
pub fn is_nilpotent(f: &Homomorphism) -> bool {
    let mut g = f.clone();
    let mut order = Subgroup::whole(f.src()).order();
    loop {
        if g.is_zero() {
            return true;
        }
        let o = g.image().order();
        if o == order {
            return false;
        }
        order = o;
        g = &g * f;
    }
}

/// If `V` has no `p`-torsion (`p = char K`), the action must be trivial.
pub fn torsion_triviality_check(action: &Action) -> CheckReport {
    const NAME: &str = "torsion";
    let p = action.field().p();
    if !action.module().is_n_torsion_free(p) {
        return CheckReport::not_applicable(NAME, format!("V has {p}-torsion"));
    }
    let mut report = CheckReport::pass(NAME);
    match action {
        Action::Lie(l) => {
            for (i, g) in l.generators().iter().enumerate() {
                report.require(g.is_zero(), || format!("generator image {i} is not zero: {:?}", g.matrix()));
            }
        }
        Action::Group(a) => {
            if !is_nilpotent(&a.delta(a.field().one())) {
                return CheckReport::not_applicable(NAME, "δ = u - 1 is not nilpotent");
            }
            for (i, g) in a.generators().iter().enumerate() {
                report.require(g.is_identity(), || format!("generator image {i} is not the identity: {:?}", g.matrix()));
            }
        }
    }
    report
}

/// Smallest submodule containing the seeds.
pub fn submodule_generated(module: &FinAbGroup, generators: &[Homomorphism], seeds: &[Vec<i64>]) -> Subgroup {
    let mut s = Subgroup::from_coords(module, seeds);
    loop {
        let mut next = s.clone();
        for g in generators {
            next = next.sum(&s.image_under(g).expect("endomorphism")).expect("same ambient");
        }
        if next == s {
            return s;
        }
        s = next;
    }
}

/// Is the subgroup invariant under every generator?
pub fn is_submodule(generators: &[Homomorphism], s: &Subgroup) -> bool {
    generators.iter().all(|g| s.image_under(g).map(|img| img.is_subgroup_of(s)).unwrap_or(false))
}

/// Does every nonzero element generate the whole module? Enumerates `V`.
pub fn simplicity_test(action: &Action) -> Result<bool> {
    simplicity_test_with_bound(action, enumeration_bound())
}

pub fn simplicity_test_with_bound(action: &Action, bound: u128) -> Result<bool> {
    let module = action.module();
    let whole = Subgroup::whole(module);
    let elements = whole.elements(bound)?;
    if module.is_trivial() {
        return Ok(false);
    }
    let gens = action.generators();
    let mut covered: HashSet<Vec<i64>> = HashSet::new();
    for v in elements.iter().skip(1) {
        if covered.contains(v) {
            continue;
        }
        if submodule_generated(module, &gens, std::slice::from_ref(v)) != whole {
            return Ok(false);
        }
        let elem = module.element(v)?;
        let ord = elem.order();
        for k in 1..ord {
            if k.gcd(&ord) == 1 {
                covered.insert(elem.scale(k as i64).coords().to_vec());
            }
        }
    }
    Ok(true)
}
