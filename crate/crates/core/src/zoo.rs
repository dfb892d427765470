//! Constructors for concrete modules: natural, trivial, sums, conjugates,
//! Frobenius twists, Steinberg tensor modules and the characteristic-3 examples.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abelian::{FinAbGroup, Homomorphism, ProductGroup, Subgroup};
use crate::arith::{Field, FieldElement};
use crate::error::{Error, Result};
use crate::presentation::{Action, ActionKind, GroupAction, LieAction};

/// `F_p`-matrix of a `K`-linear map given by a matrix over `K`.
pub fn k_matrix_to_fp(field: &Field, m: &[Vec<FieldElement>]) -> Vec<Vec<i64>> {
    let n = field.degree() as usize;
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![vec![0i64; cols * n]; rows * n];
    for (r, row) in m.iter().enumerate() {
        for (c, &a) in row.iter().enumerate() {
            let block = field.mul_matrix(a);
            for i in 0..n {
                for j in 0..n {
                    out[r * n + i][c * n + j] = block[i][j];
                }
            }
        }
    }
    out
}

/// `F_p`-matrix (column `i` = image of `t^i`) of an additive map of `K`.
pub fn additive_map_matrix(field: &Field, f: impl Fn(FieldElement) -> FieldElement) -> Vec<Vec<i64>> {
    let n = field.degree() as usize;
    let cols: Vec<Vec<u64>> = (0..n).map(|i| field.coeffs(f(field.basis(i)))).collect();
    (0..n).map(|r| (0..n).map(|c| cols[c][r] as i64).collect()).collect()
}

fn apply_fp(m: &[Vec<i64>], field: &Field, a: FieldElement) -> FieldElement {
    let c = field.coeffs(a);
    let p = field.p() as i64;
    let out: Vec<u64> = m
        .iter()
        .map(|row| row.iter().zip(&c).map(|(x, &y)| x * y as i64).sum::<i64>().rem_euclid(p) as u64)
        .collect();
    field.from_coeffs(&out).expect("reduced coefficients")
}

fn endo(module: &FinAbGroup, m: &[Vec<i64>]) -> Homomorphism {
    Homomorphism::new(module, module, m).expect("constructed endomorphism is well defined")
}

fn kmat(field: &Field, rows: &[&[FieldElement]]) -> Vec<Vec<FieldElement>> {
    let _ = field;
    rows.iter().map(|r| r.to_vec()).collect()
}

/// `K²` as `(Z/p)^{2n}`, coordinates of the first then of the second vector entry.
pub fn natural_module_group(field: &Field) -> FinAbGroup {
    FinAbGroup::elementary(field.p(), 2 * field.degree() as usize).expect("prime order factors")
}

/// The natural action of `SL2(K)` on `K²`.
pub fn natural_group_module(field: &Field) -> GroupAction {
    let v = natural_module_group(field);
    let (o, z) = (field.one(), field.zero());
    let u = field
        .basis_elements()
        .into_iter()
        .map(|b| endo(&v, &k_matrix_to_fp(field, &kmat(field, &[&[o, b], &[z, o]]))))
        .collect();
    let w = endo(&v, &k_matrix_to_fp(field, &kmat(field, &[&[z, o], &[field.neg(o), z]])));
    GroupAction::from_generators(field, &v, u, w).expect("natural action satisfies the relations")
}

/// The natural action of `sl2(K)` on `K²`.
pub fn natural_lie_module(field: &Field) -> LieAction {
    let v = natural_module_group(field);
    let z = field.zero();
    let (xs, ys) = field
        .basis_elements()
        .into_iter()
        .map(|b| {
            let x = endo(&v, &k_matrix_to_fp(field, &kmat(field, &[&[z, b], &[z, z]])));
            let y = endo(&v, &k_matrix_to_fp(field, &kmat(field, &[&[z, z], &[b, z]])));
            (x, y)
        })
        .unzip();
    LieAction::from_generators(field, &v, xs, ys).expect("natural action satisfies the relations")
}

/// Identity (group) or zero (Lie) action on `group`.
pub fn trivial_module(group: &FinAbGroup, field: &Field, kind: ActionKind) -> Action {
    let n = field.degree() as usize;
    match kind {
        ActionKind::Group => {
            let id = Homomorphism::identity(group);
            Action::Group(
                GroupAction::from_generators(field, group, vec![id.clone(); n], id).expect("trivial action"),
            )
        }
        ActionKind::Lie => {
            let z = Homomorphism::zero(group, group);
            Action::Lie(LieAction::from_generators(field, group, vec![z.clone(); n], vec![z; n]).expect("zero action"))
        }
    }
}

fn check_compatible(actions: &[Action]) -> Result<(Field, ActionKind)> {
    let first = actions.first().ok_or_else(|| Error::ShapeMismatch("empty direct sum".into()))?;
    for a in actions {
        if a.field() != first.field() {
            return Err(Error::MixedFields);
        }
        if a.kind() != first.kind() {
            return Err(Error::KindMismatch("direct sum of group and Lie actions".into()));
        }
    }
    Ok((first.field().clone(), first.kind()))
}

/// Direct sum, with the module brought into invariant-factor form.
pub fn direct_sum(actions: &[Action]) -> Result<Action> {
    let (field, kind) = check_compatible(actions)?;
    let modules: Vec<FinAbGroup> = actions.iter().map(|a| a.module().clone()).collect();
    let prod = ProductGroup::new(&modules);
    let n = field.degree() as usize;
    let block = |pick: &dyn Fn(&Action) -> Homomorphism| -> Result<Homomorphism> {
        let maps: Vec<Homomorphism> = actions.iter().map(pick).collect();
        prod.block_diagonal(&maps.iter().collect::<Vec<_>>())
    };
    match kind {
        ActionKind::Group => {
            let mut us = Vec::with_capacity(n);
            for i in 0..n {
                us.push(block(&|a| a.as_group().unwrap().u_basis()[i].clone())?);
            }
            let w = block(&|a| a.as_group().unwrap().w().clone())?;
            Ok(Action::Group(GroupAction::from_generators(&field, &prod.group, us, w)?))
        }
        ActionKind::Lie => {
            let mut xs = Vec::with_capacity(n);
            let mut ys = Vec::with_capacity(n);
            for i in 0..n {
                xs.push(block(&|a| a.as_lie().unwrap().x_basis()[i].clone())?);
                ys.push(block(&|a| a.as_lie().unwrap().y_basis()[i].clone())?);
            }
            Ok(Action::Lie(LieAction::from_generators(&field, &prod.group, xs, ys)?))
        }
    }
}

/// Transport of an action along an isomorphism `g: V → V'`.
pub fn conjugate(action: &Action, g: &Homomorphism) -> Result<Action> {
    if g.src() != action.module() {
        return Err(Error::MixedAmbients);
    }
    let g_inv = g.inverse()?;
    let tr = |f: &Homomorphism| &(g * f) * &g_inv;
    let field = action.field();
    let module = g.dst();
    Ok(match action {
        Action::Group(a) => Action::Group(GroupAction::from_generators(
            field,
            module,
            a.u_basis().iter().map(tr).collect(),
            tr(a.w()),
        )?),
        Action::Lie(l) => Action::Lie(LieAction::from_generators(
            field,
            module,
            l.x_basis().iter().map(tr).collect(),
            l.y_basis().iter().map(tr).collect(),
        )?),
    })
}

/// Precompose with the field automorphism `λ ↦ λ^{p^k}`.
pub fn twist(action: &Action, k: u32) -> Result<Action> {
    let field = action.field();
    let module = action.module();
    let images: Vec<FieldElement> = field.basis_elements().into_iter().map(|b| field.frobenius(b, k)).collect();
    Ok(match action {
        Action::Group(a) => Action::Group(GroupAction::from_generators(
            field,
            module,
            images.iter().map(|&l| a.u(l).clone()).collect(),
            a.w().clone(),
        )?),
        Action::Lie(l) => Action::Lie(LieAction::from_generators(
            field,
            module,
            images.iter().map(|&m| l.x(m).clone()).collect(),
            images.iter().map(|&m| l.y(m).clone()).collect(),
        )?),
    })
}

/// Restriction of an action to an invariant subgroup, on the subgroup's abstract structure.
pub fn restrict(action: &Action, sub: &Subgroup) -> Result<Action> {
    let field = action.field();
    let st = sub.structure();
    let r = |f: &Homomorphism| f.restrict(sub);
    Ok(match action {
        Action::Group(a) => Action::Group(GroupAction::from_generators(
            field,
            &st.group,
            a.u_basis().iter().map(r).collect::<Result<_>>()?,
            r(a.w())?,
        )?),
        Action::Lie(l) => Action::Lie(LieAction::from_generators(
            field,
            &st.group,
            l.x_basis().iter().map(r).collect::<Result<_>>()?,
            l.y_basis().iter().map(r).collect::<Result<_>>()?,
        )?),
    })
}

/// Matrix over `K` of `g = [[a, b], [c, d]]` on homogeneous polynomials of degree `m`
/// in `X, Y` (basis `X^{m-j} Y^j`), with `X ↦ aX + cY`, `Y ↦ bX + dY`.
fn symmetric_power(field: &Field, g: [[FieldElement; 2]; 2], m: usize) -> Vec<Vec<FieldElement>> {
    let mul_poly = |p: &[FieldElement], q: &[FieldElement]| {
        let mut out = vec![field.zero(); p.len() + q.len() - 1];
        for (i, &a) in p.iter().enumerate() {
            for (j, &b) in q.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        out
    };
    // coefficient vectors indexed by the power of Y
    let gx = [g[0][0], g[1][0]];
    let gy = [g[0][1], g[1][1]];
    let mut cols = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let mut poly = vec![field.one()];
        for _ in 0..m - j {
            poly = mul_poly(&poly, &gx);
        }
        for _ in 0..j {
            poly = mul_poly(&poly, &gy);
        }
        cols.push(poly);
    }
    (0..=m).map(|r| (0..=m).map(|c| cols[c][r]).collect()).collect()
}

fn kronecker(field: &Field, a: &[Vec<FieldElement>], b: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![field.zero(); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = field.mul(a[i][j], b[k][l]);
                }
            }
        }
    }
    out
}

/// The Steinberg module of `SL2(F_{p²})`: `Sym^{p-1}(K²) ⊗ Sym^{p-1}(K²)^{Frob}`,
/// viewed as an elementary abelian `p`-group. For `p = 2` this is `Nat ⊗ Nat^{Frob}`.
pub fn steinberg_tensor(p: u64) -> Result<GroupAction> {
    if p != 2 && p != 3 {
        return Err(Error::Hypothesis {
            check: "steinberg".into(),
            reason: format!("only p = 2 and p = 3 are supported, got p = {p}"),
        });
    }
    let field = Field::new(p, 2)?;
    let m = (p - 1) as usize;
    let dim = (m + 1) * (m + 1);
    let v = FinAbGroup::elementary(p, 2 * dim)?;
    let rep = |g: [[FieldElement; 2]; 2]| {
        let fr = g.map(|row| row.map(|x| field.frobenius(x, 1)));
        let k = kronecker(&field, &symmetric_power(&field, g, m), &symmetric_power(&field, fr, m));
        endo(&v, &k_matrix_to_fp(&field, &k))
    };
    let (o, z) = (field.one(), field.zero());
    let u = field.basis_elements().into_iter().map(|b| rep([[o, b], [z, o]])).collect();
    let w = rep([[z, o], [field.neg(o), z]]);
    GroupAction::from_generators(&field, &v, u, w)
}

/// The characteristic-3 module with weight blocks `E_{-1}, E_0, E_1` (each a copy of `K`,
/// in that order) and the twisting additive map `σ` on the `E_{-1} → E_0` arrow.
#[derive(Clone, Debug)]
pub struct SigmaModule {
    pub action: LieAction,
    /// Embeddings `K → V` of the blocks `E_{-1}, E_0, E_1`.
    pub blocks: [Homomorphism; 3],
    pub sigma: Vec<Vec<i64>>,
}

/// `σ` is an `F_3`-linear matrix on the coordinates of `K` (column `i` = `σ(t^i)`).
pub fn char3_sigma_module(field: &Field, sigma: &[Vec<i64>]) -> Result<SigmaModule> {
    if field.p() != 3 {
        return Err(Error::Hypothesis {
            check: "char3-sigma".into(),
            reason: format!("characteristic must be 3, got {}", field.p()),
        });
    }
    let n = field.degree() as usize;
    if sigma.len() != n || sigma.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeMismatch(format!("σ must be a {n}x{n} matrix over F_3")));
    }
    let sigma: Vec<Vec<i64>> = sigma.iter().map(|r| r.iter().map(|x| x.rem_euclid(3)).collect()).collect();
    let v = FinAbGroup::elementary(3, 3 * n)?;
    let block_map = |entries: &[(usize, usize, Vec<Vec<i64>>)]| {
        let mut m = vec![vec![0i64; 3 * n]; 3 * n];
        for (r, c, blk) in entries {
            for i in 0..n {
                for j in 0..n {
                    m[r * n + i][c * n + j] = blk[i][j];
                }
            }
        }
        endo(&v, &m)
    };
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for b in field.basis_elements() {
        let mb = field.mul_matrix(b);
        let sm = additive_map_matrix(field, |mu| apply_fp(&sigma, field, field.mul(b, mu)));
        xs.push(block_map(&[(2, 0, mb.clone())]));
        ys.push(block_map(&[(0, 2, mb.clone()), (2, 1, mb), (1, 0, sm)]));
    }
    let action = LieAction::from_generators(field, &v, xs, ys)?;
    let k = FinAbGroup::elementary(3, n)?;
    let embed = |blk: usize| {
        let cols: Vec<Vec<i64>> =
            (0..n).map(|j| (0..3 * n).map(|i| i64::from(i == blk * n + j)).collect()).collect();
        let m: Vec<Vec<i64>> = (0..3 * n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        Homomorphism::new(&k, &v, &m).expect("block embedding")
    };
    Ok(SigmaModule { action, blocks: [embed(0), embed(1), embed(2)], sigma })
}

/// The basic counterexample over `K` of characteristic 3 (`σ = id`).
pub fn char3_basic_counterexample_over(field: &Field) -> Result<LieAction> {
    let n = field.degree() as usize;
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    Ok(char3_sigma_module(field, &id)?.action)
}

/// The basic counterexample over `F_3`: `V = (Z/3)^3` with basis `(e_2, e_0, e_1)`,
/// `x: e_2 ↦ e_1`, `y: e_2 ↦ e_0 ↦ e_1 ↦ e_2`.
pub fn char3_basic_counterexample() -> LieAction {
    let f3 = Field::new(3, 1).expect("F_3");
    char3_basic_counterexample_over(&f3).expect("characteristic 3")
}

/// `F_p`-matrix of the Frobenius `λ ↦ λ^p`.
pub fn frobenius_matrix(field: &Field) -> Vec<Vec<i64>> {
    additive_map_matrix(field, |a| field.frobenius(a, 1))
}

/// `F_p`-matrix of the absolute trace `λ ↦ Σ λ^{p^i}` (image `F_p`).
pub fn trace_matrix(field: &Field) -> Vec<Vec<i64>> {
    additive_map_matrix(field, |a| {
        (0..field.degree()).fold(field.zero(), |acc, i| field.add(acc, field.frobenius(a, i)))
    })
}

/// How a corpus module was assembled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recipe {
    pub p: u64,
    pub natural_copies: usize,
    pub trivial_orders: Vec<u64>,
}

impl Recipe {
    pub fn trivial_order(&self) -> u128 {
        self.trivial_orders.iter().map(|&d| d as u128).product()
    }

    pub fn build(&self, kind: ActionKind) -> Result<Action> {
        let field = Field::new(self.p, 1)?;
        let mut parts = Vec::new();
        for _ in 0..self.natural_copies {
            parts.push(match kind {
                ActionKind::Group => Action::Group(natural_group_module(&field)),
                ActionKind::Lie => Action::Lie(natural_lie_module(&field)),
            });
        }
        for &d in &self.trivial_orders {
            parts.push(trivial_module(&FinAbGroup::cyclic(d)?, &field, kind));
        }
        direct_sum(&parts)
    }
}

/// A random automorphism of a finite abelian group.
pub fn random_automorphism<R: Rng>(g: &FinAbGroup, rng: &mut R) -> Homomorphism {
    let d = g.orders();
    let k = d.len();
    loop {
        let m: Vec<Vec<i64>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        // d_j * m_ij must vanish mod d_i
                        let step = d[i] / num_integer::gcd(d[i], d[j]);
                        let range = d[i] / step;
                        (rng.gen_range(0..range) * step) as i64
                    })
                    .collect()
            })
            .collect();
        let f = Homomorphism::new(g, g, &m).expect("entries respect the orders");
        if f.is_bijective() {
            return f;
        }
    }
}

fn random_recipe<R: Rng>(rng: &mut R) -> Recipe {
    let p = if rng.gen_bool(0.5) { 5 } else { 7 };
    loop {
        let natural_copies = rng.gen_range(0..=3);
        let n_triv = rng.gen_range(0..=2);
        if natural_copies + n_triv == 0 {
            continue;
        }
        let choices = [p, p * p, 2, 3, 4, 6];
        let trivial_orders = (0..n_triv).map(|_| choices[rng.gen_range(0..choices.len())]).collect();
        return Recipe { p, natural_copies, trivial_orders };
    }
}

/// Seeded corpus of randomly conjugated sums of natural and trivial modules over `F_5`/`F_7`.
pub fn random_corpus(seed: u64, count: usize, kind: ActionKind) -> Result<Vec<(Recipe, Action)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let recipe = random_recipe(&mut rng);
            let base = recipe.build(kind)?;
            let g = random_automorphism(base.module(), &mut rng);
            Ok((recipe, conjugate(&base, &g)?))
        })
        .collect()
}
