use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sl2var::abelian::{FinAbGroup, Homomorphism, ProductGroup, Subgroup};
use sl2var::actions::{centralizer, submodule_generated, u_length, ElementSet};
use sl2var::arith::Field;
use sl2var::linearize::*;
use sl2var::presentation::{Action, ActionKind, GroupAction, LieAction};
use sl2var::zoo::{
    char3_basic_counterexample, char3_sigma_module, conjugate, direct_sum, frobenius_matrix, natural_group_module,
    natural_lie_module, random_automorphism, random_corpus, steinberg_tensor, trivial_module,
};
use sl2var::Error;

fn field(p: u64, n: u32) -> Field {
    Field::new(p, n).unwrap()
}

fn nat(f: &Field) -> Action {
    Action::Group(natural_group_module(f))
}

fn nat_lie(f: &Field) -> Action {
    Action::Lie(natural_lie_module(f))
}

fn triv(d: u64, f: &Field, kind: ActionKind) -> Action {
    trivial_module(&FinAbGroup::cyclic(d).unwrap(), f, kind)
}

fn sum(parts: &[Action]) -> Action {
    direct_sum(parts).unwrap()
}

fn group(a: &Action) -> &GroupAction {
    a.as_group().unwrap()
}

fn lie(a: &Action) -> &LieAction {
    a.as_lie().unwrap()
}

fn sub(v: &FinAbGroup, gens: &[Vec<i64>]) -> Subgroup {
    let els: Vec<_> = gens.iter().map(|c| v.element(c).unwrap()).collect();
    Subgroup::generated_by(v, &els).unwrap()
}

fn scrambled(a: &Action, seed: u64) -> Action {
    let g = random_automorphism(a.module(), &mut ChaCha8Rng::seed_from_u64(seed));
    conjugate(a, &g).unwrap()
}

fn is_hypothesis<T>(r: &Result<T, Error>, check: &str) -> bool {
    matches!(r, Err(Error::Hypothesis { check: c, .. }) if c == check)
}

// Certificate laws: reconstruction, scalar laws, summands, C_V(U) = ker δ_λ.
fn assert_certificate(cert: &LinearizationCertificate, a: &Action) {
    assert_eq!(cert.reconstruct().unwrap().generators(), a.generators());
    assert!(verify_certificate(cert, a).passed(), "{:?}", verify_certificate(cert, a).details);
    assert!(cert.iso().is_bijective());
    assert!(cert.iso_inverse().compose(cert.iso()).unwrap().is_identity());
    let f = cert.field();
    for lam in f.elements() {
        for mu in f.elements() {
            let (sl, sm) = (cert.scalar_action(lam), cert.scalar_action(mu));
            assert_eq!(&(sl + sm), cert.scalar_action(f.add(lam, mu)));
            assert_eq!(&(sl * sm), cert.scalar_action(f.mul(lam, mu)));
        }
        for g in a.generators() {
            assert_eq!(&g * cert.scalar_action(lam), cert.scalar_action(lam) * &g);
        }
    }
    for s in cert.summands() {
        let plane = submodule_generated(a.module(), &a.generators(), std::slice::from_ref(&s.a));
        assert!(plane.contains_coords(&s.partner));
        assert_eq!(plane.order(), (f.size() as u128).pow(2));
    }
    if let Action::Group(g) = a {
        let cu = centralizer(g, &ElementSet::Unipotent);
        for lam in f.nonzero() {
            assert_eq!(g.delta(lam).kernel(), cu);
        }
    }
}

#[test]
fn group_linearization_examples() {
    let f = field(5, 1);
    let n = nat(&f);
    let c = linearize_group_quadratic(group(&n)).unwrap();
    assert_eq!(c.summands().len(), 1);
    assert!(c.trivial_part().is_trivial());
    assert_certificate(&c, &n);

    let mixed = scrambled(&sum(&[n.clone(), n.clone(), triv(5, &f, ActionKind::Group)]), 7);
    let c = linearize_group_quadratic(group(&mixed)).unwrap();
    assert_eq!(c.summands().len(), 2);
    assert_eq!(c.trivial_part().order(), 5);
    assert_eq!(c.trivial_part().generators().len(), 1);
    assert_certificate(&c, &mixed);

    let t = triv(5, &f, ActionKind::Group);
    let c = linearize_group_quadratic(group(&t)).unwrap();
    assert!(c.summands().is_empty() && c.trivial_part().is_whole());
}

#[test]
fn group_linearization_gates() {
    let st = steinberg_tensor(2).unwrap();
    assert!(is_hypothesis(&linearize_group_quadratic(&st), CHECK_V3));
    assert!(linearize_group_quadratic(&natural_group_module(&field(3, 1))).is_err());
    let st3 = steinberg_tensor(3).unwrap();
    assert!(linearize_group_quadratic(&st3).is_err());
}

#[test]
fn variation1_examples() {
    let f = field(5, 1);
    assert!(check_variation1(group(&nat(&f))).unwrap().passed());
    let mixed = sum(&[nat(&f), triv(5, &f, ActionKind::Group)]);
    assert!(check_variation1(group(&mixed)).unwrap().passed());
    assert_eq!(centralizer(group(&mixed), &ElementSet::Central).order(), 5);
    assert!(check_variation1(group(&nat(&field(7, 1)))).unwrap().passed());
}

#[test]
fn variation2_examples() {
    let f = field(5, 1);
    assert!(check_centralizer_coherence(group(&nat(&f))).unwrap().passed());
    assert!(check_centralizer_coherence(group(&nat(&field(7, 1)))).unwrap().passed());
    let mixed = sum(&[nat(&f), triv(5, &f, ActionKind::Group)]);
    assert!(is_hypothesis(&check_centralizer_coherence(group(&mixed)), CHECK_V2));
}

#[test]
fn length_bound_examples() {
    let f5 = field(5, 1);
    let f7 = field(7, 1);
    assert!(length_bound_4(group(&nat(&f5)), 2).unwrap().passed());
    let st9 = steinberg_tensor(3).unwrap();
    assert!(length_bound_4(&st9, 3).unwrap().passed());
    for lam in st9.field().nonzero() {
        let d = st9.delta(lam);
        assert!(d.power(5).unwrap().is_zero());
    }
    assert!(length_bound_4(group(&triv(5, &f5, ActionKind::Group)), 1).unwrap().passed());
    assert!(is_hypothesis(&length_bound_4(&st9, 2), CHECK_V4));

    assert!(length_bound_5(group(&nat(&f5)), 2).unwrap().passed());
    assert!(length_bound_5(&steinberg_tensor(2).unwrap(), 2).unwrap().passed());
    assert!(length_bound_5(group(&nat(&f7)), 2).unwrap().passed());

    assert!(length_bound_6(group(&nat(&f5)), 2).unwrap().passed());
    assert!(length_bound_6(group(&nat(&f7)), 2).unwrap().passed());
    assert!(is_hypothesis(&length_bound_6(&steinberg_tensor(2).unwrap(), 2), CHECK_V6));
}

fn leibniz_det(m: &[Vec<BigInt>]) -> BigInt {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        perms(n - 1)
            .into_iter()
            .flat_map(|p| (0..n).map(move |i| {
                let mut q = p.clone();
                q.insert(i, n - 1);
                q
            }))
            .collect()
    }
    let n = m.len();
    perms(n)
        .into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let prod: BigInt = (0..n).map(|i| m[i][p[i]].clone()).product();
            if inversions % 2 == 0 { prod } else { -prod }
        })
        .sum()
}

fn binom(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn vandermonde_against_leibniz() {
    let c2 = vandermonde_det_check(2).unwrap();
    assert_eq!((c2.determinant.clone(), c2.formula.clone()), (BigInt::from(2), BigInt::from(2)));
    let c3 = vandermonde_det_check(3).unwrap();
    assert_eq!(c3.determinant, BigInt::from(-18));
    assert_eq!(c3.formula, BigInt::from(18));
    assert!(c3.equal_up_to_sign);
    for n in 2u64..=7 {
        let m: Vec<Vec<BigInt>> =
            (1..n).map(|i| (1..n).map(|j| binom(n, j) * BigInt::from(i).pow((n - j) as u32)).collect()).collect();
        assert_eq!(vandermonde_det_check(n as u32).unwrap().determinant, leibniz_det(&m), "n = {n}");
    }
    for n in 2..=12 {
        assert!(vandermonde_det_check(n).unwrap().equal_up_to_sign, "n = {n}");
    }
    assert!(vandermonde_det_check(1).is_err());
}

#[test]
fn single_element_quadratic_examples() {
    let f5 = field(5, 1);
    let n = scrambled(&nat(&f5), 3);
    let out = single_element_quadratic(group(&n)).unwrap();
    assert!(out.report.passed());
    assert_eq!(out.certificate.unwrap().summands().len(), 1);
    let f7 = field(7, 1);
    let mixed = sum(&[nat(&f7), triv(7, &f7, ActionKind::Group)]);
    let c = single_element_quadratic(group(&mixed)).unwrap().certificate.unwrap();
    assert_eq!(c.summands().len(), 1);
    assert_eq!(c.trivial_part().order(), 7);
    match single_element_quadratic(&natural_group_module(&field(3, 2))) {
        Err(Error::Hypothesis { reason, .. }) => assert!(reason.contains("open case")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn derived_lie_action_examples() {
    let f5 = field(5, 1);
    let l = derive_lie_action(&natural_group_module(&f5)).unwrap();
    let one = f5.one();
    assert_eq!(l.x(one).matrix(), vec![vec![0, 1], vec![0, 0]]);
    assert_eq!(l.y(one).matrix(), vec![vec![0, 0], vec![1, 0]]);
    assert_eq!(l.h(one).matrix(), vec![vec![1, 0], vec![0, 4]]);
    let f7 = field(7, 1);
    let l7 = derive_lie_action(&natural_group_module(&f7)).unwrap();
    assert!(l7.lie_verify().passed());
    assert_eq!(l7.generators(), natural_lie_module(&f7).generators());
    let two = sum(&[nat(&f5), nat(&f5)]);
    assert!(is_hypothesis(&derive_lie_action(group(&two)), CHECK_V8));
}

#[test]
fn propagation_examples() {
    for f in [field(5, 1), field(7, 1)] {
        let l = natural_lie_module(&f);
        let r = lie_quadratic_propagation(&l).unwrap();
        assert!(r.products.passed() && r.kernels.passed());
        let e1 = sub(l.module(), &[vec![1, 0]]);
        assert!(f.nonzero().all(|lam| l.x(lam).kernel() == e1));
    }
    let b = char3_basic_counterexample();
    let r = lie_quadratic_propagation(&b).unwrap();
    assert!(r.products.passed() && r.kernels.passed());
    let ker = sub(b.module(), &[vec![0, 1, 0], vec![0, 0, 1]]);
    assert!(b.field().nonzero().all(|lam| b.x(lam).kernel() == ker));
}

#[test]
fn lie_linearization_examples() {
    let f5 = field(5, 1);
    let n = nat_lie(&f5);
    let c = linearize_lie_quadratic(lie(&n)).unwrap();
    assert_eq!(c.summands().len(), 1);
    assert!(c.trivial_part().is_trivial());
    assert_eq!(c.summands()[0].a, vec![1, 0]);
    assert_eq!(c.summands()[0].partner, vec![0, 1]);
    assert_certificate(&c, &n);
    assert!(c.projectors().unwrap().algebra_failures().is_empty());

    let f7 = field(7, 1);
    let mixed = sum(&[nat_lie(&f7), triv(7, &f7, ActionKind::Lie)]);
    let c = linearize_lie_quadratic(lie(&mixed)).unwrap();
    assert_eq!(c.summands().len(), 1);
    assert_eq!(c.trivial_part(), &lie(&mixed).h(f7.one()).kernel());
    assert_eq!(c.trivial_part().order(), 7);
    assert_certificate(&c, &mixed);

    match linearize_lie_quadratic(&char3_basic_counterexample()) {
        Err(Error::Hypothesis { check, reason }) => {
            assert_eq!(check, CHECK_V11_12);
            assert!(reason.contains("E₀"), "{reason}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn char3_partial_examples() {
    let b = char3_basic_counterexample();
    let pc = char3_partial_structure(&b).unwrap();
    assert!(pc.report.passed(), "{:?}", pc.report.details);

    let f9 = field(3, 2);
    let sigma = frobenius_matrix(&f9);
    let m = char3_sigma_module(&f9, &sigma).unwrap();
    let pc = char3_partial_structure(&m.action).unwrap();
    assert!(pc.report.passed(), "{:?}", pc.report.details);
    let y = m.action.y(f9.one());
    let y3 = &(y * y) * y;
    let k = FinAbGroup::elementary(3, 2).unwrap();
    let s = Homomorphism::new(&k, &k, &sigma).unwrap();
    assert_eq!(y3.compose(&m.blocks[1]).unwrap(), m.blocks[1].compose(&s).unwrap());
    assert!(pc.y_cubed_on_e_zero.is_some());
    assert!(pc.report.details.iter().any(|d| d.starts_with("(y³)|E₀")));

    let nat9 = natural_lie_module(&f9);
    let pc = char3_partial_structure(&nat9).unwrap();
    assert!(pc.report.passed() && pc.y_linear_on_e_minus);
    assert!(pc.weight_spaces[1].is_trivial());

    assert!(is_hypothesis(&char3_partial_structure(&natural_lie_module(&field(5, 1))), CHECK_V13));
}

#[test]
fn char3_biquadratic_examples() {
    let f9 = field(3, 2);
    let n = nat_lie(&f9);
    let c = char3_biquadratic(lie(&n)).unwrap();
    assert_eq!(c.summands().len(), 1);
    assert!(c.trivial_part().is_trivial());
    assert_certificate(&c, &n);
    let f3 = field(3, 1);
    let mixed = sum(&[nat_lie(&f3), triv(3, &f3, ActionKind::Lie)]);
    let c = char3_biquadratic(lie(&mixed)).unwrap();
    assert_eq!(c.summands().len(), 1);
    assert_eq!(c.trivial_part().order(), 3);
    assert_certificate(&c, &mixed);
    match char3_biquadratic(&char3_basic_counterexample()) {
        Err(Error::Hypothesis { reason, .. }) => assert!(reason.contains("y² ≠ 0")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn functoriality_examples() {
    let f = field(5, 1);
    let n = nat(&f);
    let two = sum(&[n.clone(), n.clone()]);
    let c1 = linearize_group_quadratic(group(&n)).unwrap();
    let c2 = linearize_group_quadratic(group(&two)).unwrap();
    let id = Homomorphism::identity(n.module());
    assert!(functoriality_check(&c1, &c1, &id).unwrap().passed());
    let prod = ProductGroup::new(&[n.module().clone(), n.module().clone()]);
    assert_eq!(&prod.group, two.module());
    assert!(functoriality_check(&c1, &c2, &prod.injections[0]).unwrap().passed());
    assert!(functoriality_check(&c2, &c1, &prod.projections[1]).unwrap().passed());
    let not_equivariant = Homomorphism::new(n.module(), n.module(), &[vec![1, 0], vec![0, 2]]).unwrap();
    assert!(is_hypothesis(&functoriality_check(&c1, &c1, &not_equivariant), CHECK_FUNCTORIALITY));
}

#[test]
fn certificate_json_round_trip_and_tampering() {
    let f = field(5, 1);
    let a = scrambled(&sum(&[nat(&f), nat(&f), triv(5, &f, ActionKind::Group)]), 11);
    let c = linearize_group_quadratic(group(&a)).unwrap();
    let v = c.to_json();
    for key in ["trivial_basis", "summands", "iso"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let back = LinearizationCertificate::from_json(&v).unwrap();
    assert_eq!(back, c);
    assert_eq!(back.to_json(), v);

    let mut bad = v.clone();
    let table = bad["summands"][0]["scalar_table"].as_object_mut().unwrap();
    let key = table.keys().find(|k| k.as_str() == "2").unwrap().clone();
    table[&key][0] = serde_json::json!([0, 0, 0]);
    assert!(LinearizationCertificate::from_json(&bad).is_err());

    let mut bad = v.clone();
    bad["iso"][0][0] = serde_json::json!("x");
    assert!(matches!(LinearizationCertificate::from_json(&bad), Err(Error::Malformed { .. })));

    let l = nat_lie(&f);
    let cl = linearize_lie_quadratic(lie(&l)).unwrap();
    assert_eq!(LinearizationCertificate::from_json(&cl.to_json()).unwrap(), cl);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_corpus_certificates(seed in any::<u64>()) {
        let (recipe, a) = random_corpus(seed, 1, ActionKind::Group).unwrap().pop().unwrap();
        prop_assert_eq!(u_length(group(&a)).length.map(|l| l <= 2), Some(true));
        let c = linearize_group_quadratic(group(&a)).unwrap();
        prop_assert_eq!(c.summands().len(), recipe.natural_copies);
        prop_assert_eq!(c.trivial_part().order(), recipe.trivial_order());
        assert_certificate(&c, &a);
        let d = derive_or_skip(&a);
        prop_assert!(d);
    }

    #[test]
    fn lie_corpus_certificates(seed in any::<u64>()) {
        let (recipe, a) = random_corpus(seed, 1, ActionKind::Lie).unwrap().pop().unwrap();
        let c = linearize_lie_quadratic(lie(&a)).unwrap();
        prop_assert_eq!(c.summands().len(), recipe.natural_copies);
        prop_assert_eq!(c.trivial_part().order(), recipe.trivial_order());
        prop_assert!(c.projectors().unwrap().algebra_failures().is_empty());
        assert_certificate(&c, &a);
    }
}

// derive_lie_action on simple corpus members gives a valid action with 𝔲² = 0.
fn derive_or_skip(a: &Action) -> bool {
    let g = group(a);
    match derive_lie_action(g) {
        Ok(l) => {
            let f = l.field();
            l.lie_verify().passed() && f.elements().all(|x| f.elements().all(|y| (l.x(x) * l.x(y)).is_zero()))
        }
        Err(Error::Hypothesis { .. } | Error::BoundExceeded { .. }) => true,
        Err(_) => false,
    }
}
