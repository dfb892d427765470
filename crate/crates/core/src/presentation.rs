//! `SL2(K)` and `sl2(K)` acting on a finite abelian group through generator images.
//!
//! A group action is given by the images of `u_b` for an `F_p`-basis `b` of `K`
//! and of `w`; every `u_λ` is obtained by additivity and every torus element by
//! `t_λ = u_λ w u_{λ⁻¹} w u_λ w`. A Lie action is given by the images of `x_b` and
//! `y_b`; `x_λ`, `y_λ` extend additively and `h_λ = [x_λ, y_1]`.

use crate::abelian::{FinAbGroup, Homomorphism};
use crate::arith::{Field, FieldElement};
use crate::error::{Error, Result};
use crate::report::RelationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    Group,
    Lie,
}

impl ActionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ActionKind::Group => "group",
            ActionKind::Lie => "lie",
        }
    }
}

fn check_endos(module: &FinAbGroup, maps: &[&Homomorphism], what: &str) -> Result<()> {
    for (i, m) in maps.iter().enumerate() {
        if m.src() != module || m.dst() != module {
            return Err(Error::ShapeMismatch(format!("{what} {i} is not an endomorphism of {module}")));
        }
    }
    Ok(())
}

/// Additive extension `λ ↦ Σ c_i f_i` over the `F_p`-coordinates of every field element.
fn additive_family(field: &Field, basis: &[Homomorphism], module: &FinAbGroup) -> Vec<Homomorphism> {
    field
        .elements()
        .map(|lam| {
            let mut acc = Homomorphism::zero(module, module);
            for (c, f) in field.coeffs(lam).iter().zip(basis) {
                if *c != 0 {
                    acc = &acc + &f.scale(*c as i64);
                }
            }
            acc
        })
        .collect()
}

/// An action of `SL2(K)` on a finite abelian group, with all `u_λ` and `t_λ` cached.
#[derive(Clone, Debug)]
pub struct GroupAction {
    field: Field,
    module: FinAbGroup,
    u_basis: Vec<Homomorphism>,
    w: Homomorphism,
    w_inv: Homomorphism,
    u: Vec<Homomorphism>,
    t: Vec<Homomorphism>,
}

impl GroupAction {
    /// Build the caches and run the relation check; fails if any relation fails.
    pub fn from_generators(
        field: &Field,
        module: &FinAbGroup,
        u_basis: Vec<Homomorphism>,
        w: Homomorphism,
    ) -> Result<Self> {
        let a = Self::unverified(field, module, u_basis, w)?;
        let report = a.steinberg_verify();
        if !report.passed() {
            return Err(Error::RelationsFailed(Box::new(report)));
        }
        Ok(a)
    }

    /// Build the caches without checking the relations.
    pub fn unverified(
        field: &Field,
        module: &FinAbGroup,
        u_basis: Vec<Homomorphism>,
        w: Homomorphism,
    ) -> Result<Self> {
        let n = field.degree() as usize;
        if u_basis.len() != n {
            return Err(Error::ShapeMismatch(format!("expected {n} unipotent generator images, got {}", u_basis.len())));
        }
        let all: Vec<&Homomorphism> = u_basis.iter().chain(std::iter::once(&w)).collect();
        check_endos(module, &all, "generator image")?;
        for (i, u) in u_basis.iter().enumerate() {
            if !u.is_bijective() {
                return Err(Error::NotInvertible(format!("image of u for basis element {i}")));
            }
        }
        let w_inv = w.inverse().map_err(|_| Error::NotInvertible("image of w".into()))?;

        let p = field.p() as usize;
        let powers: Vec<Vec<Homomorphism>> = u_basis
            .iter()
            .map(|u| {
                let mut v = vec![Homomorphism::identity(module)];
                for _ in 1..p {
                    let next = &v[v.len() - 1] * u;
                    v.push(next);
                }
                v
            })
            .collect();
        let u: Vec<Homomorphism> = field
            .elements()
            .map(|lam| {
                let mut acc = Homomorphism::identity(module);
                for (c, pw) in field.coeffs(lam).iter().zip(&powers) {
                    if *c != 0 {
                        acc = &acc * &pw[*c as usize];
                    }
                }
                acc
            })
            .collect();
        let mut a = GroupAction { field: field.clone(), module: module.clone(), u_basis, w, w_inv, u, t: Vec::new() };
        a.t = field
            .elements()
            .map(|lam| match field.inv(lam) {
                Ok(inv) => a.torus_word(lam, inv),
                Err(_) => Homomorphism::identity(module),
            })
            .collect();
        Ok(a)
    }

    fn torus_word(&self, lam: FieldElement, inv: FieldElement) -> Homomorphism {
        let (ul, ui, w) = (self.u(lam), self.u(inv), &self.w);
        let head = &(&(ul * w) * ui) * w;
        &(&head * ul) * w
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn module(&self) -> &FinAbGroup {
        &self.module
    }

    pub fn u_basis(&self) -> &[Homomorphism] {
        &self.u_basis
    }

    pub fn u(&self, lam: FieldElement) -> &Homomorphism {
        &self.u[lam.code() as usize]
    }

    /// Torus element `t_λ`; panics for `λ = 0`, where it is undefined.
    pub fn t(&self, lam: FieldElement) -> &Homomorphism {
        assert!(!self.field.is_zero(lam), "t_0 is undefined");
        &self.t[lam.code() as usize]
    }

    pub fn w(&self) -> &Homomorphism {
        &self.w
    }

    pub fn w_inv(&self) -> &Homomorphism {
        &self.w_inv
    }

    /// `i = t_{-1}`.
    pub fn i(&self) -> &Homomorphism {
        self.t(self.field.from_int(-1))
    }

    /// `δ_λ = u_λ - 1`.
    pub fn delta(&self, lam: FieldElement) -> Homomorphism {
        self.u(lam) - &Homomorphism::identity(&self.module)
    }

    /// The generator images `u_b` and `w`.
    pub fn generators(&self) -> Vec<Homomorphism> {
        let mut g = self.u_basis.clone();
        g.push(self.w.clone());
        g
    }

    /// Exhaustive check of the defining relations over all scalar pairs.
    pub fn steinberg_verify(&self) -> RelationReport {
        let f = &self.field;
        let id = Homomorphism::identity(&self.module);
        let name = |x: FieldElement| f.format(x);
        let mut r = RelationReport::new();
        for lam in f.elements() {
            for mu in f.elements() {
                r.record("u_λ u_μ = u_{λ+μ}", &(self.u(lam) * self.u(mu)) == self.u(f.add(lam, mu)), || {
                    vec![name(lam), name(mu)]
                });
            }
        }
        for lam in f.nonzero() {
            for mu in f.nonzero() {
                r.record("t_λ t_μ = t_{λμ}", &(self.t(lam) * self.t(mu)) == self.t(f.mul(lam, mu)), || {
                    vec![name(lam), name(mu)]
                });
            }
        }
        for lam in f.elements() {
            for mu in f.nonzero() {
                let mu_inv = f.inv(mu).expect("nonzero");
                let lhs = &(self.t(mu) * self.u(lam)) * self.t(mu_inv);
                let rhs = self.u(f.mul(lam, f.mul(mu, mu)));
                r.record("t_μ u_λ t_{μ⁻¹} = u_{λμ²}", &lhs == rhs, || vec![name(lam), name(mu)]);
            }
        }
        r.record("w² = i", &(&self.w * &self.w) == self.i(), Vec::new);
        for lam in f.nonzero() {
            let lhs = &(&(&self.w * self.t(lam)) * &self.w_inv) * self.t(lam);
            r.record("w t_λ w⁻¹ = t_λ⁻¹", lhs == id, || vec![name(lam)]);
        }
        for lam in f.nonzero() {
            let inv = f.inv(lam).expect("nonzero");
            r.record("u_λ w u_{λ⁻¹} w u_λ w = t_λ", &self.torus_word(lam, inv) == self.t(lam), || vec![name(lam)]);
        }
        let uw = self.u(f.one()) * &self.w;
        r.record("(uw)³ = 1", (&(&uw * &uw) * &uw).is_identity(), Vec::new);
        r
    }
}

/// An action of the Lie ring `sl2(K)` on a finite abelian group.
#[derive(Clone, Debug)]
pub struct LieAction {
    field: Field,
    module: FinAbGroup,
    x_basis: Vec<Homomorphism>,
    y_basis: Vec<Homomorphism>,
    x: Vec<Homomorphism>,
    y: Vec<Homomorphism>,
    h: Vec<Homomorphism>,
}

impl LieAction {
    pub fn from_generators(
        field: &Field,
        module: &FinAbGroup,
        x_basis: Vec<Homomorphism>,
        y_basis: Vec<Homomorphism>,
    ) -> Result<Self> {
        let l = Self::unverified(field, module, x_basis, y_basis)?;
        let report = l.lie_verify();
        if !report.passed() {
            return Err(Error::RelationsFailed(Box::new(report)));
        }
        Ok(l)
    }

    pub fn unverified(
        field: &Field,
        module: &FinAbGroup,
        x_basis: Vec<Homomorphism>,
        y_basis: Vec<Homomorphism>,
    ) -> Result<Self> {
        let n = field.degree() as usize;
        if x_basis.len() != n || y_basis.len() != n {
            return Err(Error::ShapeMismatch(format!("expected {n} images each for x and y")));
        }
        let all: Vec<&Homomorphism> = x_basis.iter().chain(&y_basis).collect();
        check_endos(module, &all, "generator image")?;
        let x = additive_family(field, &x_basis, module);
        let y = additive_family(field, &y_basis, module);
        let y1 = y[field.one().code() as usize].clone();
        let h = x.iter().map(|xl| &(xl * &y1) - &(&y1 * xl)).collect();
        Ok(LieAction { field: field.clone(), module: module.clone(), x_basis, y_basis, x, y, h })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn module(&self) -> &FinAbGroup {
        &self.module
    }

    pub fn x_basis(&self) -> &[Homomorphism] {
        &self.x_basis
    }

    pub fn y_basis(&self) -> &[Homomorphism] {
        &self.y_basis
    }

    pub fn x(&self, lam: FieldElement) -> &Homomorphism {
        &self.x[lam.code() as usize]
    }

    pub fn y(&self, lam: FieldElement) -> &Homomorphism {
        &self.y[lam.code() as usize]
    }

    pub fn h(&self, lam: FieldElement) -> &Homomorphism {
        &self.h[lam.code() as usize]
    }

    pub fn generators(&self) -> Vec<Homomorphism> {
        self.x_basis.iter().chain(&self.y_basis).cloned().collect()
    }

    /// Exhaustive check of the bracket relations and of additivity.
    pub fn lie_verify(&self) -> RelationReport {
        let f = &self.field;
        let name = |x: FieldElement| f.format(x);
        let bracket = |a: &Homomorphism, b: &Homomorphism| &(a * b) - &(b * a);
        let mut r = RelationReport::new();
        for lam in f.elements() {
            for mu in f.elements() {
                let lm = f.mul(lam, mu);
                let w = || vec![name(lam), name(mu)];
                r.record("[h_λ, x_μ] = 2x_{λμ}", bracket(self.h(lam), self.x(mu)) == self.x(lm).scale(2), w);
                r.record("[h_λ, y_μ] = -2y_{λμ}", bracket(self.h(lam), self.y(mu)) == self.y(lm).scale(-2), w);
                r.record("[x_λ, y_μ] = h_{λμ}", &bracket(self.x(lam), self.y(mu)) == self.h(lm), w);
                let s = f.add(lam, mu);
                r.record("x_{λ+μ} = x_λ + x_μ", &(self.x(lam) + self.x(mu)) == self.x(s), w);
                r.record("y_{λ+μ} = y_λ + y_μ", &(self.y(lam) + self.y(mu)) == self.y(s), w);
                r.record("h_{λ+μ} = h_λ + h_μ", &(self.h(lam) + self.h(mu)) == self.h(s), w);
            }
        }
        r
    }
}

/// Either kind of action, as read from or written to an action file.
#[derive(Clone, Debug)]
pub enum Action {
    Group(GroupAction),
    Lie(LieAction),
}

impl Action {
    pub fn kind(&self) -> ActionKind {
        match self {
            Action::Group(_) => ActionKind::Group,
            Action::Lie(_) => ActionKind::Lie,
        }
    }

    pub fn field(&self) -> &Field {
        match self {
            Action::Group(a) => a.field(),
            Action::Lie(l) => l.field(),
        }
    }

    pub fn module(&self) -> &FinAbGroup {
        match self {
            Action::Group(a) => a.module(),
            Action::Lie(l) => l.module(),
        }
    }

    /// Generator images; a subgroup is a submodule iff it is invariant under all of them.
    pub fn generators(&self) -> Vec<Homomorphism> {
        match self {
            Action::Group(a) => a.generators(),
            Action::Lie(l) => l.generators(),
        }
    }

    pub fn as_group(&self) -> Result<&GroupAction> {
        match self {
            Action::Group(a) => Ok(a),
            Action::Lie(_) => Err(Error::KindMismatch("expected a group action, found a Lie action".into())),
        }
    }

    pub fn as_lie(&self) -> Result<&LieAction> {
        match self {
            Action::Lie(l) => Ok(l),
            Action::Group(_) => Err(Error::KindMismatch("expected a Lie action, found a group action".into())),
        }
    }

    pub fn verify(&self) -> RelationReport {
        match self {
            Action::Group(a) => a.steinberg_verify(),
            Action::Lie(l) => l.lie_verify(),
        }
    }
}

impl From<GroupAction> for Action {
    fn from(a: GroupAction) -> Self {
        Action::Group(a)
    }
}

impl From<LieAction> for Action {
    fn from(l: LieAction) -> Self {
        Action::Lie(l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hom(g: &FinAbGroup, m: &[Vec<i64>]) -> Homomorphism {
        Homomorphism::new(g, g, m).unwrap()
    }

    #[test]
    fn natural_f5_torus() {
        let f = Field::new(5, 1).unwrap();
        let v = FinAbGroup::elementary(5, 2).unwrap();
        let a = GroupAction::from_generators(
            &f,
            &v,
            vec![hom(&v, &[vec![1, 1], vec![0, 1]])],
            hom(&v, &[vec![0, 1], vec![-1, 0]]),
        )
        .unwrap();
        assert_eq!(a.t(f.from_int(2)), &hom(&v, &[vec![2, 0], vec![0, 3]]));
        assert_eq!(a.i(), &hom(&v, &[vec![4, 0], vec![0, 4]]));
    }

    #[test]
    fn identity_w_breaks_torus_inversion() {
        let f = Field::new(5, 1).unwrap();
        let v = FinAbGroup::elementary(5, 2).unwrap();
        let a = GroupAction::unverified(&f, &v, vec![hom(&v, &[vec![1, 1], vec![0, 1]])], Homomorphism::identity(&v))
            .unwrap();
        let r = a.steinberg_verify();
        assert!(r.fails("w t_λ w⁻¹ = t_λ⁻¹"));
        assert!(r.failures.iter().any(|x| x.relation == "w t_λ w⁻¹ = t_λ⁻¹" && x.witness == vec!["2".to_string()]));
    }

    #[test]
    fn non_invertible_generator_rejected() {
        let f = Field::new(5, 1).unwrap();
        let v = FinAbGroup::elementary(5, 2).unwrap();
        let r = GroupAction::unverified(&f, &v, vec![Homomorphism::zero(&v, &v)], Homomorphism::identity(&v));
        assert!(matches!(r, Err(Error::NotInvertible(_))));
    }

    #[test]
    fn natural_lie_f5() {
        let f = Field::new(5, 1).unwrap();
        let v = FinAbGroup::elementary(5, 2).unwrap();
        let l = LieAction::from_generators(
            &f,
            &v,
            vec![hom(&v, &[vec![0, 1], vec![0, 0]])],
            vec![hom(&v, &[vec![0, 0], vec![1, 0]])],
        )
        .unwrap();
        assert_eq!(l.h(f.one()), &hom(&v, &[vec![1, 0], vec![0, -1]]));
    }

    #[test]
    fn zero_lie_action_is_valid() {
        let f = Field::new(5, 1).unwrap();
        let v = FinAbGroup::elementary(5, 2).unwrap();
        let z = Homomorphism::zero(&v, &v);
        assert!(LieAction::from_generators(&f, &v, vec![z.clone()], vec![z]).is_ok());
    }
}
