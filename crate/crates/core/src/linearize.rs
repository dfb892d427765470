//! Linearization of quadratic modules and the checks built around it.
//!
//! A quadratic `SL2(K)`-module splits as `C_V(G) ⊕ [G,V]` with `[G,V]` a sum of
//! natural planes; a quadratic `sl2(K)`-module splits by weights. Certificates
//! record the splitting, an explicit isomorphism with `trivial ⊕ Nat^m`, and the
//! recovered scalar action.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::abelian::{FinAbGroup, Homomorphism, ProductGroup, Subgroup};
use crate::actions::{
    annihilator, centralizer, commutator_sub, image_sum, simplicity_test, submodule_generated, u_length,
    weight_space, ElementSet,
};
use crate::arith::{Field, FieldDesc, FieldElement, IntMatrix};
use crate::error::{Error, Result};
use crate::presentation::{Action, ActionKind, GroupAction, LieAction};
use crate::report::CheckReport;
use crate::zoo::{k_matrix_to_fp, natural_group_module, natural_lie_module, natural_module_group};

pub const CHECK_V1: &str = "v1";
pub const CHECK_V2: &str = "v2";
pub const CHECK_V3: &str = "v3";
pub const CHECK_V4: &str = "v4";
pub const CHECK_V5: &str = "v5";
pub const CHECK_V6: &str = "v6";
pub const CHECK_V7: &str = "v7";
pub const CHECK_V8: &str = "v8";
pub const CHECK_V9: &str = "v9";
pub const CHECK_V10: &str = "v10";
pub const CHECK_V11_12: &str = "v11-12";
pub const CHECK_V13: &str = "v13";
pub const CHECK_V14: &str = "v14";
pub const CHECK_CERTIFICATE: &str = "certificate";
pub const CHECK_FUNCTORIALITY: &str = "functoriality";

fn hypothesis(check: &str, reason: impl Into<String>) -> Error {
    Error::hypothesis(check, reason)
}

fn inconsistent(check: &str, reason: impl Into<String>) -> Error {
    Error::inconsistent(check, reason)
}

fn require_char_not(field: &Field, excluded: &[u64], check: &str) -> Result<()> {
    if excluded.contains(&field.p()) {
        let list: Vec<String> = excluded.iter().map(|p| p.to_string()).collect();
        return Err(hypothesis(check, format!("char K ∉ {{{}}} required, got {}", list.join(", "), field.p())));
    }
    Ok(())
}

fn require_char(field: &Field, p: u64, check: &str) -> Result<()> {
    if field.p() != p {
        return Err(hypothesis(check, format!("char K = {p} required, got {}", field.p())));
    }
    Ok(())
}

fn require_large(field: &Field, check: &str) -> Result<()> {
    if field.size() <= 3 {
        return Err(hypothesis(check, format!("|K| > 3 required, got |K| = {}", field.size())));
    }
    Ok(())
}

fn length_text(l: Option<usize>) -> String {
    l.map_or("unbounded".to_string(), |l| l.to_string())
}

fn group_quadratic_gate(a: &GroupAction, check: &str) -> Result<usize> {
    require_char_not(a.field(), &[2], check)?;
    require_large(a.field(), check)?;
    let len = u_length(a).length;
    match len {
        Some(l) if l <= 2 => Ok(l),
        other => Err(hypothesis(check, format!("U-length ≤ 2 required, got {}", length_text(other)))),
    }
}

fn mod_inverse(a: i64, m: u64) -> Option<i64> {
    let m = m as i64;
    if m == 1 {
        return Some(0);
    }
    let e = Integer::extended_gcd(&a.rem_euclid(m), &m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// `m / 2`, as multiplication by the inverse of 2 modulo the exponent of `im m`.
fn halve(m: &Homomorphism, check: &str) -> Result<Homomorphism> {
    let e = m.image().exponent();
    let inv = mod_inverse(2, e).ok_or_else(|| inconsistent(check, format!("2 is not invertible on an image of exponent {e}")))?;
    Ok(m.scale(inv))
}

fn scalar_block(field: &Field, lam: FieldElement) -> Homomorphism {
    let nat = natural_module_group(field);
    let z = field.zero();
    Homomorphism::new(&nat, &nat, &k_matrix_to_fp(field, &[vec![lam, z], vec![z, lam]])).expect("scalar matrix")
}

/// The map `Nat → V` sending `(b, 0) ↦ first(b)` and `(0, b) ↦ second(b)` on basis scalars.
fn nat_piece(
    field: &Field,
    module: &FinAbGroup,
    first: impl Fn(FieldElement) -> Vec<i64>,
    second: impl Fn(FieldElement) -> Vec<i64>,
    check: &str,
) -> Result<Homomorphism> {
    let basis = field.basis_elements();
    let cols: Vec<Vec<i64>> = basis.iter().map(|&b| first(b)).chain(basis.iter().map(|&b| second(b))).collect();
    let rows: Vec<Vec<i64>> = (0..module.rank()).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    Homomorphism::new(&natural_module_group(field), module, &rows)
        .map_err(|e| inconsistent(check, format!("natural plane map is not well defined: {e}")))
}

/// Greedy choice of plane generators: walk the canonical generators of `candidates`
/// and keep each one outside the planes chosen so far.
fn select_planes(
    check: &str,
    field: &Field,
    generators: &[Homomorphism],
    candidates: &Subgroup,
    target: &Subgroup,
) -> Result<Vec<Vec<i64>>> {
    let module = candidates.ambient();
    let plane_order = (field.size() as u128).pow(2);
    let mut span = Subgroup::trivial(module);
    let mut picks = Vec::new();
    for c in candidates.generators() {
        if span.contains_coords(&c) {
            continue;
        }
        let plane = submodule_generated(module, generators, std::slice::from_ref(&c));
        if plane.order() != plane_order || !plane.intersect(&span)?.is_trivial() {
            return Err(inconsistent(
                check,
                format!("submodule generated by {c:?} has order {} and is not a new natural plane", plane.order()),
            ));
        }
        span = span.sum(&plane)?;
        picks.push(c);
    }
    if &span != target {
        return Err(inconsistent(check, format!("planes span {:?}, expected {:?}", span, target)));
    }
    Ok(picks)
}

fn require_direct_sum(parts: &[&Subgroup], check: &str) -> Result<()> {
    let module = parts[0].ambient();
    let mut total = Subgroup::trivial(module);
    let mut order = 1u128;
    for p in parts {
        total = total.sum(p)?;
        order *= p.order();
    }
    if !total.is_whole() || order != total.order() {
        return Err(inconsistent(check, "V is not the direct sum of the computed parts"));
    }
    Ok(())
}

/// Projectors onto the weight spaces `E_{-1}, E_0, E_1`: `½h(h−1)`, `1−h²`, `½h(h+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightProjectors {
    pub minus: Homomorphism,
    pub zero: Homomorphism,
    pub plus: Homomorphism,
}

impl WeightProjectors {
    pub fn new(l: &LieAction, check: &str) -> Result<Self> {
        let h = l.h(l.field().one());
        let id = Homomorphism::identity(l.module());
        Ok(WeightProjectors {
            minus: halve(&(h * &(h - &id)), check)?,
            zero: &id - &(h * h),
            plus: halve(&(h * &(h + &id)), check)?,
        })
    }

    pub fn as_array(&self) -> [&Homomorphism; 3] {
        [&self.minus, &self.zero, &self.plus]
    }

    /// Idempotence, pairwise orthogonality and partition of the identity; returns the failures.
    pub fn algebra_failures(&self) -> Vec<String> {
        let names = ["P₋₁", "P₀", "P₁"];
        let ps = self.as_array();
        let mut out = Vec::new();
        for (i, p) in ps.iter().enumerate() {
            if &(*p * *p) != *p {
                out.push(format!("{} is not idempotent", names[i]));
            }
            for (j, q) in ps.iter().enumerate() {
                if i != j && !(*p * *q).is_zero() {
                    out.push(format!("{}{} ≠ 0", names[i], names[j]));
                }
            }
        }
        if !(&(ps[0] + ps[1]) + ps[2]).is_identity() {
            out.push("P₋₁ + P₀ + P₁ ≠ 1".into());
        }
        out
    }
}

/// One natural summand: the generator `a` (fixed by `U`, or of weight 1) and its partner
/// `w·a` (group) or `y·a` (Lie).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub a: Vec<i64>,
    #[serde(rename = "wa")]
    pub partner: Vec<i64>,
}

/// A certified isomorphism `V ≅ T ⊕ Nat^m` with `T` the trivial part.
#[derive(Clone, Debug)]
pub struct LinearizationCertificate {
    kind: ActionKind,
    field: Field,
    module: FinAbGroup,
    trivial_part: Subgroup,
    summands: Vec<Summand>,
    source: ProductGroup,
    iso: Homomorphism,
    iso_inv: Homomorphism,
    scalar: Vec<Homomorphism>,
    projectors: Option<WeightProjectors>,
}

impl PartialEq for LinearizationCertificate {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.field == other.field
            && self.module == other.module
            && self.trivial_part == other.trivial_part
            && self.summands == other.summands
            && self.iso == other.iso
            && self.scalar == other.scalar
            && self.projectors == other.projectors
    }
}

#[derive(Serialize, Deserialize)]
struct SummandRepr {
    a: Vec<i64>,
    wa: Vec<i64>,
    scalar_table: BTreeMap<String, [Vec<i64>; 2]>,
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    kind: ActionKind,
    field: FieldDesc,
    module: Vec<u64>,
    trivial_basis: Vec<Vec<i64>>,
    summands: Vec<SummandRepr>,
    iso: Vec<Vec<i64>>,
}

impl LinearizationCertificate {
    fn assemble(
        check: &str,
        kind: ActionKind,
        field: &Field,
        trivial_part: Subgroup,
        summands: Vec<Summand>,
        pieces: Option<Vec<Homomorphism>>,
        iso_matrix: Option<&[Vec<i64>]>,
    ) -> Result<Self> {
        let module = trivial_part.ambient().clone();
        let st = trivial_part.structure();
        let nat = natural_module_group(field);
        let mut factors = vec![st.group.clone()];
        factors.extend(std::iter::repeat(nat).take(summands.len()));
        let source = ProductGroup::new(&factors);
        let iso = match (pieces, iso_matrix) {
            (Some(pieces), _) => {
                let mut maps = vec![&st.embedding];
                maps.extend(pieces.iter());
                source.copairing(&maps)?
            }
            (None, Some(m)) => Homomorphism::new(&source.group, &module, m)?,
            (None, None) => unreachable!("either pieces or a matrix"),
        };
        let iso_inv = iso
            .inverse()
            .map_err(|_| inconsistent(check, "the map T ⊕ Nat^m → V is not bijective"))?;
        let zero_t = Homomorphism::zero(&st.group, &st.group);
        let scalar = field
            .elements()
            .map(|lam| {
                let blk = scalar_block(field, lam);
                let mut blocks = vec![&zero_t];
                blocks.extend(std::iter::repeat(&blk).take(summands.len()));
                Ok(&(&iso * &source.block_diagonal(&blocks)?) * &iso_inv)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut cert = LinearizationCertificate {
            kind,
            field: field.clone(),
            module,
            trivial_part,
            summands,
            source,
            iso,
            iso_inv,
            scalar,
            projectors: None,
        };
        if kind == ActionKind::Lie {
            let rebuilt = cert.reconstruct()?;
            cert.projectors = Some(WeightProjectors::new(rebuilt.as_lie()?, check)?);
        }
        Ok(cert)
    }

    pub fn kind(&self) -> ActionKind {
        self.kind
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn module(&self) -> &FinAbGroup {
        &self.module
    }

    /// `C_V(G)` or `Ann_V(𝔤)`.
    pub fn trivial_part(&self) -> &Subgroup {
        &self.trivial_part
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    /// `T ⊕ Nat^m` in invariant-factor form, with its injections.
    pub fn source(&self) -> &ProductGroup {
        &self.source
    }

    /// The isomorphism `T ⊕ Nat^m → V`.
    pub fn iso(&self) -> &Homomorphism {
        &self.iso
    }

    pub fn iso_inverse(&self) -> &Homomorphism {
        &self.iso_inv
    }

    /// `v ↦ λ·v`, zero on the trivial part.
    pub fn scalar_action(&self, lam: FieldElement) -> &Homomorphism {
        &self.scalar[lam.code() as usize]
    }

    pub fn scale(&self, lam: FieldElement, v: &[i64]) -> Vec<i64> {
        self.scalar_action(lam).apply_coords(v)
    }

    /// Weight projectors, for certificates of Lie actions.
    pub fn projectors(&self) -> Option<&WeightProjectors> {
        self.projectors.as_ref()
    }

    /// `λ ↦ (λ·a, λ·partner)` for the `k`-th summand, keyed by coefficient list.
    pub fn scalar_table(&self, k: usize) -> BTreeMap<String, [Vec<i64>; 2]> {
        let s = &self.summands[k];
        self.field
            .elements()
            .map(|lam| (self.field.key(lam), [self.scale(lam, &s.a), self.scale(lam, &s.partner)]))
            .collect()
    }

    /// The action transported from `T ⊕ Nat^m`: identity (group) or zero (Lie) on `T`,
    /// the natural matrices on each copy of `Nat`.
    pub fn reconstruct(&self) -> Result<Action> {
        let st_group = &self.source_factor_trivial();
        let m = self.summands.len();
        let conj = |blocks: Vec<&Homomorphism>| -> Result<Homomorphism> {
            Ok(&(&self.iso * &self.source.block_diagonal(&blocks)?) * &self.iso_inv)
        };
        let with_nat = |t: &Homomorphism, n: &Homomorphism| -> Result<Homomorphism> {
            let mut blocks = vec![t];
            blocks.extend(std::iter::repeat(n).take(m));
            conj(blocks)
        };
        match self.kind {
            ActionKind::Group => {
                let nat = natural_group_module(&self.field);
                let id = Homomorphism::identity(st_group);
                let us = nat.u_basis().iter().map(|u| with_nat(&id, u)).collect::<Result<Vec<_>>>()?;
                let w = with_nat(&id, nat.w())?;
                Ok(Action::Group(GroupAction::unverified(&self.field, &self.module, us, w)?))
            }
            ActionKind::Lie => {
                let nat = natural_lie_module(&self.field);
                let z = Homomorphism::zero(st_group, st_group);
                let xs = nat.x_basis().iter().map(|x| with_nat(&z, x)).collect::<Result<Vec<_>>>()?;
                let ys = nat.y_basis().iter().map(|y| with_nat(&z, y)).collect::<Result<Vec<_>>>()?;
                Ok(Action::Lie(LieAction::unverified(&self.field, &self.module, xs, ys)?))
            }
        }
    }

    fn source_factor_trivial(&self) -> FinAbGroup {
        self.source.injections[0].src().clone()
    }

    pub fn to_json(&self) -> Value {
        let repr = CertificateRepr {
            kind: self.kind,
            field: self.field.desc().clone(),
            module: self.module.orders().to_vec(),
            trivial_basis: self.trivial_part.generators(),
            summands: (0..self.summands.len())
                .map(|k| SummandRepr {
                    a: self.summands[k].a.clone(),
                    wa: self.summands[k].partner.clone(),
                    scalar_table: self.scalar_table(k),
                })
                .collect(),
            iso: self.iso.matrix(),
        };
        serde_json::to_value(repr).expect("certificate serializes")
    }

    /// Parse and rebuild a certificate; the scalar tables must match the recomputed ones.
    pub fn from_json(value: &Value) -> Result<Self> {
        let repr: CertificateRepr =
            serde_json::from_value(value.clone()).map_err(|e| Error::malformed("", e.to_string()))?;
        let field = Field::from_desc(&repr.field).map_err(|e| Error::malformed("/field", e.to_string()))?;
        let module = FinAbGroup::new(repr.module).map_err(|e| Error::malformed("/module", e.to_string()))?;
        let mut trivial_elems = Vec::new();
        for (i, row) in repr.trivial_basis.iter().enumerate() {
            trivial_elems.push(
                module.element(row).map_err(|e| Error::malformed(format!("/trivial_basis/{i}"), e.to_string()))?,
            );
        }
        let trivial = Subgroup::generated_by(&module, &trivial_elems)?;
        let summands = repr.summands.iter().map(|s| Summand { a: s.a.clone(), partner: s.wa.clone() }).collect();
        let cert = Self::assemble("certificate", repr.kind, &field, trivial, summands, None, Some(&repr.iso))
            .map_err(|e| Error::malformed("/iso", e.to_string()))?;
        for (k, s) in repr.summands.iter().enumerate() {
            if s.scalar_table != cert.scalar_table(k) {
                return Err(Error::malformed(format!("/summands/{k}/scalar_table"), "does not match the iso"));
            }
        }
        Ok(cert)
    }
}

/// Full consistency check of a certificate against an action.
pub fn verify_certificate(cert: &LinearizationCertificate, action: &Action) -> CheckReport {
    let mut r = CheckReport::pass(CHECK_CERTIFICATE);
    if cert.kind != action.kind() || &cert.field != action.field() || &cert.module != action.module() {
        return CheckReport::fail(CHECK_CERTIFICATE, "certificate and action disagree on kind, field or module");
    }
    let f = &cert.field;
    r.require(cert.iso.is_bijective(), || "iso is not bijective".into());
    match cert.reconstruct() {
        Ok(rebuilt) => {
            for (i, (g, h)) in action.generators().iter().zip(rebuilt.generators()).enumerate() {
                r.require(g == &h, || format!("reconstructed generator {i} differs"));
            }
        }
        Err(e) => r.require(false, || format!("reconstruction failed: {e}")),
    }
    for lam in f.elements() {
        for mu in f.elements() {
            let w = || format!("λ = {}, μ = {}", f.format(lam), f.format(mu));
            let (sl, sm) = (cert.scalar_action(lam), cert.scalar_action(mu));
            r.require(&(sl + sm) == cert.scalar_action(f.add(lam, mu)), || format!("(λ+μ)·v ≠ λ·v + μ·v at {}", w()));
            r.require(&(sl * sm) == cert.scalar_action(f.mul(lam, mu)), || format!("(λμ)·v ≠ λ·(μ·v) at {}", w()));
        }
        for (i, g) in action.generators().iter().enumerate() {
            let s = cert.scalar_action(lam);
            r.require(g * s == s * g, || format!("generator {i} is not K-linear at λ = {}", f.format(lam)));
        }
    }
    r.require(cert.scalar_action(f.one()).kernel() == cert.trivial_part, || {
        "1·v vanishes exactly on a subgroup other than the trivial part".into()
    });
    let plane_order = (f.size() as u128).pow(2);
    let gens = action.generators();
    for (k, s) in cert.summands.iter().enumerate() {
        let plane = submodule_generated(&cert.module, &gens, std::slice::from_ref(&s.a));
        r.require(plane.order() == plane_order, || format!("summand {k} has order {}", plane.order()));
    }
    match action {
        Action::Group(a) => {
            for (k, s) in cert.summands.iter().enumerate() {
                r.require(a.w().apply_coords(&s.a) == s.partner, || format!("summand {k}: partner ≠ w·a"));
            }
            let cu = centralizer(a, &ElementSet::Unipotent);
            for lam in f.nonzero() {
                r.require(a.delta(lam).kernel() == cu, || format!("C_V(U) ≠ C_V(u_λ) at λ = {}", f.format(lam)));
            }
        }
        Action::Lie(l) => {
            for (k, s) in cert.summands.iter().enumerate() {
                r.require(l.y(f.one()).apply_coords(&s.a) == s.partner, || format!("summand {k}: partner ≠ y·a"));
            }
            if let Some(p) = &cert.projectors {
                for e in p.algebra_failures() {
                    r.require(false, || e);
                }
                r.require(p.zero.image() == annihilator(l), || "E₀ ≠ Ann_V(𝔤)".into());
                let sign = &p.plus - &p.minus;
                for lam in f.elements() {
                    r.require(&(l.h(lam) * &sign) == cert.scalar_action(lam), || {
                        format!("λ·v_i ≠ i h_λ·v_i at λ = {}", f.format(lam))
                    });
                }
            }
        }
    }
    r
}

fn checked(cert: LinearizationCertificate, action: &Action, check: &str) -> Result<LinearizationCertificate> {
    let report = verify_certificate(&cert, action);
    if !report.passed() {
        return Err(inconsistent(check, report.details.join("; ")));
    }
    Ok(cert)
}

/// Split a quadratic `SL2(K)`-module as `C_V(G) ⊕ [G,V]` with `[G,V] ≅ Nat^m`.
pub fn linearize_group_quadratic(a: &GroupAction) -> Result<LinearizationCertificate> {
    const CHECK: &str = CHECK_V3;
    group_quadratic_gate(a, CHECK)?;
    let field = a.field();
    let fixed = centralizer(a, &ElementSet::Whole);
    let moved = commutator_sub(a, &ElementSet::Whole);
    require_direct_sum(&[&fixed, &moved], CHECK)?;
    let seeds = centralizer(a, &ElementSet::Unipotent).intersect(&moved)?;
    let gens = a.generators();
    let picks = select_planes(CHECK, field, &gens, &seeds, &moved)?;
    let mut pieces = Vec::with_capacity(picks.len());
    let mut summands = Vec::with_capacity(picks.len());
    for a1 in picks {
        // (b, 0) ↦ t_b·a, (0, b) ↦ -w t_b·a
        let piece = nat_piece(
            field,
            a.module(),
            |b| a.t(b).apply_coords(&a1),
            |b| a.w().scale(-1).apply_coords(&a.t(b).apply_coords(&a1)),
            CHECK,
        )?;
        pieces.push(piece);
        summands.push(Summand { partner: a.w().apply_coords(&a1), a: a1 });
    }
    let cert = LinearizationCertificate::assemble(CHECK, ActionKind::Group, field, fixed, summands, Some(pieces), None)?;
    checked(cert, &Action::Group(a.clone()), CHECK)
}

/// `G` centralizes `C_V(i)`.
pub fn check_variation1(a: &GroupAction) -> Result<CheckReport> {
    group_quadratic_gate(a, CHECK_V1)?;
    let id = Homomorphism::identity(a.module());
    let ci = (a.i() - &id).kernel();
    let mut r = CheckReport::pass(CHECK_V1).with_detail(format!("C_V(i) has order {}", ci.order()));
    for (k, g) in a.generators().iter().enumerate() {
        let moved = ci.image_under(&(g - &id))?;
        r.require(moved.is_trivial(), || format!("generator {k} moves C_V(i)"));
    }
    Ok(r)
}

/// `C_V(u_λ) = [u_λ, V] = [U, V] = C_V(U)` for every `λ ≠ 0`.
pub fn check_centralizer_coherence(a: &GroupAction) -> Result<CheckReport> {
    const CHECK: &str = CHECK_V2;
    require_char_not(a.field(), &[2], CHECK)?;
    require_large(a.field(), CHECK)?;
    let len = u_length(a).length;
    if len != Some(2) {
        return Err(hypothesis(CHECK, format!("U-length = 2 required, got {}", length_text(len))));
    }
    if !centralizer(a, &ElementSet::Whole).is_trivial() {
        return Err(hypothesis(CHECK, "C_V(G) = 0 required"));
    }
    let f = a.field();
    let cu = centralizer(a, &ElementSet::Unipotent);
    let uv = commutator_sub(a, &ElementSet::Unipotent);
    let mut r = CheckReport::pass(CHECK);
    r.require(cu == uv, || "[U, V] ≠ C_V(U)".into());
    for lam in f.nonzero() {
        let d = a.delta(lam);
        r.require(d.kernel() == cu, || format!("C_V(u_λ) ≠ C_V(U) at λ = {}", f.format(lam)));
        r.require(d.image() == cu, || format!("[u_λ, V] ≠ C_V(U) at λ = {}", f.format(lam)));
    }
    Ok(r)
}

fn require_delta_power_zero(a: &GroupAction, k: u32, check: &str) -> Result<()> {
    let d = a.delta(a.field().one());
    if !d.power(k)?.is_zero() {
        return Err(hypothesis(check, format!("δ^{k} = 0 required")));
    }
    Ok(())
}

fn all_delta_powers_vanish(a: &GroupAction, k: u32, check: &str) -> Result<CheckReport> {
    let f = a.field();
    let mut r = CheckReport::pass(check);
    for lam in f.elements() {
        let vanishes = a.delta(lam).power(k)?.is_zero();
        r.require(vanishes, || format!("δ_λ^{k} ≠ 0 at λ = {}", f.format(lam)));
    }
    Ok(r)
}

/// In characteristic ≠ 2, `δ^k = 0` forces `δ_λ^{2k−1} = 0` for every `λ`.
pub fn length_bound_4(a: &GroupAction, k: u32) -> Result<CheckReport> {
    require_char_not(a.field(), &[2], CHECK_V4)?;
    if k == 0 {
        return Err(hypothesis(CHECK_V4, "k ≥ 1 required"));
    }
    require_delta_power_zero(a, k, CHECK_V4)?;
    all_delta_powers_vanish(a, 2 * k - 1, CHECK_V4)
}

/// When every scalar is an integer multiple of a square, `δ^k = 0` forces `δ_λ^k = 0`.
pub fn length_bound_5(a: &GroupAction, k: u32) -> Result<CheckReport> {
    let f = a.field();
    require_delta_power_zero(a, k, CHECK_V5)?;
    for lam in f.elements() {
        if f.int_multiple_of_square(lam).is_none() {
            return Err(hypothesis(
                CHECK_V5,
                format!("every element must be an integer multiple of a square; {} is not", f.format(lam)),
            ));
        }
    }
    all_delta_powers_vanish(a, k, CHECK_V5)
}

/// If every `δ_λ^n = 0` and `V` is `n!`-torsion-free then the `U`-length is at most `n`.
pub fn length_bound_6(a: &GroupAction, n: u32) -> Result<CheckReport> {
    let f = a.field();
    for lam in f.elements() {
        if !a.delta(lam).power(n)?.is_zero() {
            return Err(hypothesis(CHECK_V6, format!("δ_λ^{n} = 0 required; fails at λ = {}", f.format(lam))));
        }
    }
    let fact: u64 = (1..=n as u64).product();
    if !a.module().is_n_torsion_free(fact) {
        return Err(hypothesis(CHECK_V6, format!("V must be {n}!-torsion-free ({fact}); {} is not", a.module())));
    }
    let len = u_length(a).length;
    let mut r = CheckReport::pass(CHECK_V6).with_detail(format!("U-length {}", length_text(len)));
    r.require(len.is_some_and(|l| l <= n as usize), || format!("U-length {} exceeds {n}", length_text(len)));
    Ok(r)
}

/// Determinant of `[C(n, j) i^{n−j}]_{i,j=1..n−1}` against `(n!)^{n−1} / ∏ (n−j)!`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VandermondeCheck {
    pub n: u32,
    #[serde(serialize_with = "as_string")]
    pub determinant: BigInt,
    #[serde(serialize_with = "as_string")]
    pub formula: BigInt,
    pub equal_up_to_sign: bool,
}

fn as_string<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

pub fn vandermonde_det_check(n: u32) -> Result<VandermondeCheck> {
    if n < 2 {
        return Err(hypothesis(CHECK_V6, format!("n ≥ 2 required, got {n}")));
    }
    let rows: Vec<Vec<BigInt>> = (1..n)
        .map(|i| (1..n).map(|j| binomial(n, j) * BigInt::from(i).pow(n - j)).collect())
        .collect();
    let determinant = IntMatrix::from_big_rows(&rows).det();
    let denom = (1..n).fold(BigInt::from(1), |acc, j| acc * factorial(n - j));
    let formula = factorial(n).pow(n - 1) / denom;
    let equal_up_to_sign = determinant == formula || determinant == -formula.clone();
    Ok(VandermondeCheck { n, determinant, formula, equal_up_to_sign })
}

/// Outcome of the single-element quadratic check.
#[derive(Clone, Debug)]
pub struct QuadraticOutcome {
    pub report: CheckReport,
    pub certificate: Option<LinearizationCertificate>,
}

/// `δ² = 0` for the single element `u = u_1` already forces `U`-length ≤ 2.
pub fn single_element_quadratic(a: &GroupAction) -> Result<QuadraticOutcome> {
    let p = a.field().p();
    if p == 2 || p == 3 {
        return Err(hypothesis(
            CHECK_V7,
            format!("open case: characteristic {p} is not covered, char K ∉ {{2, 3}} required"),
        ));
    }
    require_delta_power_zero(a, 2, CHECK_V7)?;
    let len = u_length(a).length;
    let mut report = CheckReport::pass(CHECK_V7).with_detail(format!("U-length {}", length_text(len)));
    report.require(len.is_some_and(|l| l <= 2), || format!("U-length {} exceeds 2", length_text(len)));
    let certificate = if report.passed() { Some(linearize_group_quadratic(a)?) } else { None };
    if let Some(c) = &certificate {
        report = report.with_detail(format!("{} natural summands", c.summands().len()));
    }
    Ok(QuadraticOutcome { report, certificate })
}

/// The Lie action carried by a simple quadratic `SL2(K)`-module:
/// `x_λ = δ_λ`, `y_λ = wδ_λw`, `h_λ = wδ_λ − δ_λw`.
pub fn derive_lie_action(a: &GroupAction) -> Result<LieAction> {
    const CHECK: &str = CHECK_V8;
    let f = a.field();
    require_char_not(f, &[2], CHECK)?;
    require_large(f, CHECK)?;
    if !simplicity_test(&Action::Group(a.clone()))? {
        return Err(hypothesis(CHECK, "V must be a simple module"));
    }
    let len = u_length(a).length;
    if len != Some(2) {
        return Err(hypothesis(CHECK, format!("U-length = 2 required, got {}", length_text(len))));
    }
    let module = a.module();
    let id = Homomorphism::identity(module);
    if a.i() == &id {
        let z = Homomorphism::zero(module, module);
        let n = f.degree() as usize;
        return LieAction::from_generators(f, module, vec![z.clone(); n], vec![z; n]);
    }
    if a.i() != &-&id {
        return Err(inconsistent(CHECK, "i neither centralizes nor inverts V"));
    }
    let w = a.w();
    let xs: Vec<Homomorphism> = f.basis_elements().into_iter().map(|b| a.delta(b)).collect();
    let ys: Vec<Homomorphism> = xs.iter().map(|d| &(w * d) * w).collect();
    let l = LieAction::unverified(f, module, xs, ys)?;
    let rel = l.lie_verify();
    if !rel.passed() {
        return Err(inconsistent(CHECK, rel.summary()));
    }
    for lam in f.elements() {
        let d = a.delta(lam);
        if *l.h(lam) != &(w * &d) - &(&d * w) {
            return Err(inconsistent(CHECK, format!("h_λ ≠ wδ_λ − δ_λw at λ = {}", f.format(lam))));
        }
        for mu in f.elements() {
            if !(l.x(lam) * l.x(mu)).is_zero() {
                return Err(inconsistent(CHECK, format!("x_λx_μ ≠ 0 at ({}, {})", f.format(lam), f.format(mu))));
            }
        }
    }
    Ok(l)
}

fn require_x_quadratic(l: &LieAction, check: &str) -> Result<()> {
    let x = l.x(l.field().one());
    if !(x * x).is_zero() {
        return Err(hypothesis(check, "x² = 0 required"));
    }
    Ok(())
}

/// Reports of the quadratic propagation checks.
#[derive(Clone, Debug)]
pub struct PropagationReports {
    /// `x_λx_μ = 0` for all `λ, μ`.
    pub products: CheckReport,
    /// `ker x_λ = ker x`, `im x_λ = im x` and `x_λ = 2x_μ y_{λ/(2μ²)} x_μ`.
    pub kernels: CheckReport,
}

/// `x² = 0` propagates to every `x_λ`.
pub fn lie_quadratic_propagation(l: &LieAction) -> Result<PropagationReports> {
    let f = l.field();
    for check in [CHECK_V9, CHECK_V10] {
        require_char_not(f, &[2], check)?;
        require_x_quadratic(l, check)?;
    }
    let x = l.x(f.one());
    let (kx, ix) = (x.kernel(), x.image());
    let mut products = CheckReport::pass(CHECK_V9);
    let mut kernels = CheckReport::pass(CHECK_V10);
    let two = f.from_int(2);
    for lam in f.elements() {
        for mu in f.elements() {
            products.require((l.x(lam) * l.x(mu)).is_zero(), || {
                format!("x_λx_μ ≠ 0 at ({}, {})", f.format(lam), f.format(mu))
            });
        }
        if f.is_zero(lam) {
            continue;
        }
        kernels.require(l.x(lam).kernel() == kx, || format!("ker x_λ ≠ ker x at λ = {}", f.format(lam)));
        kernels.require(l.x(lam).image() == ix, || format!("im x_λ ≠ im x at λ = {}", f.format(lam)));
        for mu in f.nonzero() {
            let nu = f.div(lam, f.mul(two, f.mul(mu, mu)))?;
            let rhs = (&(l.x(mu) * l.y(nu)) * l.x(mu)).scale(2);
            kernels.require(l.x(lam) == &rhs, || {
                format!("x_λ ≠ 2x_μ y_(λ/2μ²) x_μ at ({}, {})", f.format(lam), f.format(mu))
            });
        }
    }
    Ok(PropagationReports { products, kernels })
}

fn lie_weight_identities(l: &LieAction, check: &str) -> Result<()> {
    let id = Homomorphism::identity(l.module());
    let h = l.h(l.field().one());
    let x = l.x(l.field().one());
    if &(h * x) != x {
        return Err(inconsistent(check, "hx ≠ x"));
    }
    if !(&(&(h - &id) * h) * &(h + &id)).is_zero() {
        return Err(inconsistent(check, "(h−1)h(h+1) ≠ 0"));
    }
    Ok(())
}

/// Weight decomposition and natural planes; the trivial part is `E_0`.
fn lie_linearize_core(l: &LieAction, check: &str) -> Result<LinearizationCertificate> {
    lie_weight_identities(l, check)?;
    let f = l.field();
    let proj = WeightProjectors::new(l, check)?;
    let failures = proj.algebra_failures();
    if !failures.is_empty() {
        return Err(inconsistent(check, failures.join("; ")));
    }
    let (em, e0, ep) = (weight_space(l, -1), weight_space(l, 0), weight_space(l, 1));
    require_direct_sum(&[&em, &e0, &ep], check)?;
    let ann = annihilator(l);
    if e0 != ann {
        return Err(inconsistent(check, format!("E₀ = {e0:?} ≠ {ann:?} = Ann_V(𝔤)")));
    }
    let moved = em.sum(&ep)?;
    let gens = l.generators();
    let picks = select_planes(check, f, &gens, &ep, &moved)?;
    let y = l.y(f.one());
    let mut pieces = Vec::with_capacity(picks.len());
    let mut summands = Vec::with_capacity(picks.len());
    for a1 in picks {
        // (b, 0) ↦ h_b·a, (0, b) ↦ y h_b·a
        let piece = nat_piece(
            f,
            l.module(),
            |b| l.h(b).apply_coords(&a1),
            |b| y.apply_coords(&l.h(b).apply_coords(&a1)),
            check,
        )?;
        pieces.push(piece);
        summands.push(Summand { partner: y.apply_coords(&a1), a: a1 });
    }
    let cert = LinearizationCertificate::assemble(check, ActionKind::Lie, f, e0, summands, Some(pieces), None)?;
    checked(cert, &Action::Lie(l.clone()), check)
}

/// Split a quadratic `sl2(K)`-module by weights, `V = E_{−1} ⊕ E_0 ⊕ E_1` with
/// `E_0 = Ann_V(𝔤)` and `E_{−1} ⊕ E_1 ≅ Nat^m`. Finite fields only.
pub fn linearize_lie_quadratic(l: &LieAction) -> Result<LinearizationCertificate> {
    const CHECK: &str = CHECK_V11_12;
    let f = l.field();
    if f.p() == 3 {
        let (e0, ann) = (weight_space(l, 0), annihilator(l));
        let note = if e0 != ann {
            format!("; here E₀ = {:?} ≠ {:?} = Ann_V(𝔤)", e0.generators(), ann.generators())
        } else {
            String::new()
        };
        return Err(hypothesis(CHECK, format!("char 3 gate: v11-12 requires characteristic ≠ 2, 3{note}")));
    }
    require_char_not(f, &[2], CHECK)?;
    require_x_quadratic(l, CHECK)?;
    let cert = lie_linearize_core(l, CHECK)?;
    let kx = l.x(f.one()).kernel();
    for lam in f.nonzero() {
        if l.x(lam).kernel() != kx {
            return Err(inconsistent(CHECK, format!("ker x ≠ ker x_λ at λ = {}", f.format(lam))));
        }
    }
    Ok(cert)
}

/// What survives of linearization in characteristic 3.
#[derive(Clone, Debug)]
pub struct PartialCertificate {
    pub report: CheckReport,
    /// `E_{−1}, E_0, E_1`.
    pub weight_spaces: [Subgroup; 3],
    pub projectors: WeightProjectors,
    /// `λ·v`, indexed by the code of `λ`; zero on `E_0`.
    pub scalar: Vec<Homomorphism>,
    pub y_linear_on_e_minus: bool,
    /// `y³` restricted to `E_0`, in the coordinates of `E_0`'s structure.
    pub y_cubed_on_e_zero: Option<Homomorphism>,
}

/// Characteristic 3, `x² = 0`, simple: `h_λ` and `x_λ` are linear everywhere,
/// `y_λ` at least on `E_1`.
pub fn char3_partial_structure(l: &LieAction) -> Result<PartialCertificate> {
    const CHECK: &str = CHECK_V13;
    let f = l.field();
    require_char(f, 3, CHECK)?;
    require_x_quadratic(l, CHECK)?;
    if !simplicity_test(&Action::Lie(l.clone()))? {
        return Err(hypothesis(CHECK, "V must be a simple module"));
    }
    let proj = WeightProjectors::new(l, CHECK)?;
    let (em, e0, ep) = (weight_space(l, -1), weight_space(l, 0), weight_space(l, 1));
    let mut r = CheckReport::pass(CHECK);
    r.require(require_direct_sum(&[&em, &e0, &ep], CHECK).is_ok(), || "V ≠ E₋₁ ⊕ E₀ ⊕ E₁".into());
    for e in proj.algebra_failures() {
        r.require(false, || e);
    }
    let kx = l.x(f.one()).kernel();
    r.require(kx == e0.sum(&ep)?, || "ker x ≠ E₀ ⊕ E₁".into());
    let sign = &proj.plus - &proj.minus;
    let scalar: Vec<Homomorphism> = f.elements().map(|lam| l.h(lam) * &sign).collect();
    let s = |lam: FieldElement| &scalar[lam.code() as usize];
    for lam in f.elements() {
        for mu in f.elements() {
            let w = || format!("({}, {})", f.format(lam), f.format(mu));
            r.require(&(s(lam) + s(mu)) == s(f.add(lam, mu)), || format!("scalar action not additive at {}", w()));
            r.require(&(s(lam) * s(mu)) == s(f.mul(lam, mu)), || format!("scalar action not multiplicative at {}", w()));
        }
    }
    let commutes_on = |g: &Homomorphism, mu: FieldElement, on: &Homomorphism| (&(g * s(mu)) - &(s(mu) * g)).compose(on);
    let id = Homomorphism::identity(l.module());
    let mut y_minus = true;
    for lam in f.elements() {
        for mu in f.elements() {
            let w = || format!("(λ, μ) = ({}, {})", f.format(lam), f.format(mu));
            r.require(commutes_on(l.h(lam), mu, &id)?.is_zero(), || format!("h_λ not linear at {}", w()));
            r.require(commutes_on(l.x(lam), mu, &id)?.is_zero(), || format!("x_λ not linear at {}", w()));
            r.require(commutes_on(l.y(lam), mu, &proj.plus)?.is_zero(), || format!("y_λ not linear on E₁ at {}", w()));
            y_minus &= commutes_on(l.y(lam), mu, &proj.minus)?.is_zero();
        }
    }
    r = r.with_detail(format!("y linear on E₋₁: {y_minus}"));
    let y = l.y(f.one());
    let y3 = &(y * y) * y;
    let y_cubed_on_e_zero = y3.restrict(&e0).ok();
    if let Some(m) = &y_cubed_on_e_zero {
        r = r.with_detail(format!("(y³)|E₀ = {:?}", m.matrix()));
    }
    Ok(PartialCertificate {
        report: r,
        weight_spaces: [em, e0, ep],
        projectors: proj,
        scalar,
        y_linear_on_e_minus: y_minus,
        y_cubed_on_e_zero,
    })
}

/// Characteristic 3 with `x² = y² = 0`: `V = Ann_V(𝔤) ⊕ 𝔤·V` and `𝔤·V ≅ Nat^m`.
pub fn char3_biquadratic(l: &LieAction) -> Result<LinearizationCertificate> {
    const CHECK: &str = CHECK_V14;
    let f = l.field();
    require_char(f, 3, CHECK)?;
    require_x_quadratic(l, CHECK)?;
    let y = l.y(f.one());
    if !(y * y).is_zero() {
        return Err(hypothesis(CHECK, "x² = y² = 0 required, but y² ≠ 0"));
    }
    if &(l.h(f.one()) * y) != &-y {
        return Err(inconsistent(CHECK, "hy ≠ −y"));
    }
    let mut all = l.generators();
    all.extend(f.basis_elements().into_iter().map(|b| l.h(b).clone()));
    let gv = image_sum(l.module(), &all);
    let ann = annihilator(l);
    require_direct_sum(&[&ann, &gv], CHECK)?;
    let cert = lie_linearize_core(l, CHECK)?;
    let moved = cert.scalar_action(f.one()).image();
    if moved != gv {
        return Err(inconsistent(CHECK, "𝔤·V differs from E₋₁ ⊕ E₁"));
    }
    Ok(cert)
}

/// An equivariant map between linearized modules is `K`-linear for the recovered scalars.
pub fn functoriality_check(
    c1: &LinearizationCertificate,
    c2: &LinearizationCertificate,
    phi: &Homomorphism,
) -> Result<CheckReport> {
    const CHECK: &str = CHECK_FUNCTORIALITY;
    if c1.kind != c2.kind || c1.field != c2.field {
        return Err(Error::KindMismatch("certificates of different kinds or fields".into()));
    }
    if phi.src() != &c1.module || phi.dst() != &c2.module {
        return Err(Error::MixedAmbients);
    }
    let (a1, a2) = (c1.reconstruct()?, c2.reconstruct()?);
    for (g1, g2) in a1.generators().iter().zip(a2.generators()) {
        if phi * g1 != &g2 * phi {
            return Err(hypothesis(CHECK, "φ does not commute with the actions"));
        }
    }
    let f = &c1.field;
    let mut r = CheckReport::pass(CHECK);
    for lam in f.elements() {
        r.require(phi * c1.scalar_action(lam) == c2.scalar_action(lam) * phi, || {
            format!("φ(λ·v) ≠ λ·φ(v) at λ = {}", f.format(lam))
        });
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{char3_basic_counterexample, direct_sum, trivial_module};

    fn f5() -> Field {
        Field::new(5, 1).unwrap()
    }

    #[test]
    fn natural_has_one_summand() {
        let c = linearize_group_quadratic(&natural_group_module(&f5())).unwrap();
        assert_eq!(c.summands().len(), 1);
        assert!(c.trivial_part().is_trivial());
    }

    #[test]
    fn trivial_action_has_no_summands() {
        let f = f5();
        let t = trivial_module(&FinAbGroup::cyclic(5).unwrap(), &f, ActionKind::Group);
        let c = linearize_group_quadratic(t.as_group().unwrap()).unwrap();
        assert!(c.summands().is_empty());
        assert!(c.trivial_part().is_whole());
    }

    #[test]
    fn certificate_json_round_trip() {
        let f = f5();
        let nat = Action::Group(natural_group_module(&f));
        let t = trivial_module(&FinAbGroup::cyclic(5).unwrap(), &f, ActionKind::Group);
        let sum = direct_sum(&[nat.clone(), nat, t]).unwrap();
        let c = linearize_group_quadratic(sum.as_group().unwrap()).unwrap();
        assert_eq!(c.summands().len(), 2);
        let back = LinearizationCertificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn vandermonde_small_cases() {
        let v2 = vandermonde_det_check(2).unwrap();
        assert_eq!((v2.determinant.clone(), v2.formula.clone()), (BigInt::from(2), BigInt::from(2)));
        let v3 = vandermonde_det_check(3).unwrap();
        assert_eq!(v3.determinant, BigInt::from(-18));
        assert_eq!(v3.formula, BigInt::from(18));
        assert!(v3.equal_up_to_sign);
    }

    #[test]
    fn derived_lie_action_is_standard() {
        let l = derive_lie_action(&natural_group_module(&f5())).unwrap();
        let one = l.field().one();
        assert_eq!(l.y(one).matrix(), vec![vec![0, 0], vec![1, 0]]);
        assert_eq!(l.h(one).matrix(), vec![vec![1, 0], vec![0, 4]]);
    }

    #[test]
    fn basic_counterexample_diagnostics() {
        let l = char3_basic_counterexample();
        match linearize_lie_quadratic(&l) {
            Err(Error::Hypothesis { reason, .. }) => assert!(reason.contains("E₀"), "{reason}"),
            other => panic!("expected rejection, got {other:?}"),
        }
        assert!(matches!(char3_biquadratic(&l), Err(Error::Hypothesis { .. })));
        let partial = char3_partial_structure(&l).unwrap();
        assert!(partial.report.passed(), "{:?}", partial.report);
        assert!(!partial.y_linear_on_e_minus);
    }
}
