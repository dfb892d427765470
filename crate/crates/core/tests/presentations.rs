use sl2var::abelian::{FinAbGroup, Homomorphism};
use sl2var::arith::Field;
use sl2var::presentation::{Action, ActionKind, GroupAction, LieAction};
use sl2var::zoo::{char3_basic_counterexample, natural_group_module, natural_lie_module, trivial_module};
use sl2var::Error;

fn endo(v: &FinAbGroup, m: &[Vec<i64>]) -> Homomorphism {
    Homomorphism::new(v, v, m).unwrap()
}

// 2x2 matrices over F_p, row-major, acting on column vectors.
type M2 = [[i64; 2]; 2];

fn mat_mul(a: M2, b: M2, p: i64) -> M2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = (0..2).map(|k| a[i][k] * b[k][j]).sum::<i64>().rem_euclid(p);
        }
    }
    c
}

fn inv_mod(a: i64, p: i64) -> i64 {
    (1..p).find(|x| (a * x).rem_euclid(p) == 1).unwrap()
}

fn torus_by_hand(lam: i64, p: i64) -> M2 {
    let u = |l: i64| [[1, l.rem_euclid(p)], [0, 1]];
    let w = [[0, 1], [p - 1, 0]];
    [u(lam), w, u(inv_mod(lam, p)), w, u(lam), w].into_iter().fold([[1, 0], [0, 1]], |acc, m| mat_mul(acc, m, p))
}

#[test]
fn natural_f5_from_generators() {
    let f = Field::new(5, 1).unwrap();
    let v = FinAbGroup::elementary(5, 2).unwrap();
    let a = GroupAction::from_generators(&f, &v, vec![endo(&v, &[vec![1, 1], vec![0, 1]])], endo(&v, &[vec![0, 1], vec![-1, 0]]))
        .unwrap();
    assert_eq!(a.t(f.from_int(2)).matrix(), vec![vec![2, 0], vec![0, 3]]);
    for lam in 1..5 {
        let t = torus_by_hand(lam, 5);
        assert_eq!(a.t(f.from_int(lam)).matrix(), t.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    }
    assert_eq!(a.i().matrix(), vec![vec![4, 0], vec![0, 4]]);
}

#[test]
fn identity_generators_give_trivial_action() {
    let f = Field::new(3, 2).unwrap();
    let v = FinAbGroup::new(vec![2, 4]).unwrap();
    let id = Homomorphism::identity(&v);
    let a = GroupAction::from_generators(&f, &v, vec![id.clone(), id.clone()], id).unwrap();
    assert!(a.steinberg_verify().passed());
}

#[test]
fn identity_w_fails_torus_inversion() {
    let f = Field::new(5, 1).unwrap();
    let v = FinAbGroup::elementary(5, 2).unwrap();
    let u = endo(&v, &[vec![1, 1], vec![0, 1]]);
    match GroupAction::from_generators(&f, &v, vec![u], Homomorphism::identity(&v)) {
        Err(Error::RelationsFailed(report)) => {
            assert!(report.failures.iter().any(|x| x.relation == "w t_λ w⁻¹ = t_λ⁻¹" && x.witness == ["2"]));
        }
        other => panic!("expected relation failure, got {other:?}"),
    }
}

#[test]
fn negated_w_on_one_summand_breaks_w_squared() {
    let f = Field::new(5, 1).unwrap();
    let v = FinAbGroup::elementary(5, 4).unwrap();
    let u = endo(&v, &[vec![1, 1, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 0, 1]]);
    let w = endo(&v, &[vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, -1], vec![0, 0, 1, 0]]);
    let a = GroupAction::unverified(&f, &v, vec![u], w).unwrap();
    let report = a.steinberg_verify();
    assert!(report.fails("w² = i"));
}

#[test]
fn non_invertible_u_is_rejected() {
    let f = Field::new(5, 1).unwrap();
    let v = FinAbGroup::elementary(5, 2).unwrap();
    let u = endo(&v, &[vec![0, 1], vec![0, 0]]);
    let r = GroupAction::from_generators(&f, &v, vec![u], Homomorphism::identity(&v));
    assert!(matches!(r, Err(Error::NotInvertible(_))));
}

#[test]
fn naturals_verify_over_every_small_field() {
    let fields = (2u64..80)
        .filter(|&p| sl2var::arith::field::is_prime(p))
        .flat_map(|p| (1u32..=6).filter(move |&n| p.pow(n) <= 81).map(move |n| (p, n)));
    for (p, n) in fields {
        let f = Field::new(p, n).unwrap();
        assert!(natural_group_module(&f).steinberg_verify().passed(), "group F_{p}^{n}");
        assert!(natural_lie_module(&f).lie_verify().passed(), "lie F_{p}^{n}");
    }
}

#[test]
fn natural_lie_f5() {
    let f = Field::new(5, 1).unwrap();
    let l = natural_lie_module(&f);
    assert_eq!(l.x(f.one()).matrix(), vec![vec![0, 1], vec![0, 0]]);
    assert_eq!(l.y(f.one()).matrix(), vec![vec![0, 0], vec![1, 0]]);
    assert_eq!(l.h(f.one()).matrix(), vec![vec![1, 0], vec![0, 4]]);
}

#[test]
fn zero_lie_action_and_basic_table_are_valid() {
    let f = Field::new(7, 1).unwrap();
    let v = FinAbGroup::new(vec![7, 49]).unwrap();
    let z = Homomorphism::zero(&v, &v);
    assert!(LieAction::from_generators(&f, &v, vec![z.clone()], vec![z]).is_ok());
    let l = char3_basic_counterexample();
    assert_eq!(l.module(), &FinAbGroup::elementary(3, 3).unwrap());
    assert!(l.lie_verify().passed());
}

#[test]
fn broken_bracket_is_reported() {
    let f = Field::new(5, 1).unwrap();
    let v = FinAbGroup::elementary(5, 2).unwrap();
    let x = endo(&v, &[vec![0, 1], vec![0, 0]]);
    let y = endo(&v, &[vec![0, 0], vec![2, 0]]);
    match LieAction::from_generators(&f, &v, vec![x], vec![y]) {
        Err(Error::RelationsFailed(r)) => assert!(r.fails("[h_λ, x_μ] = 2x_{λμ}")),
        other => panic!("{other:?}"),
    }
}

// In odd characteristic u_μ = u_{a²} u_{b²}⁻¹ with u_{c²} = t_c u_1 t_c⁻¹.
#[test]
fn torus_conjugates_of_u_generate_unipotents() {
    for (p, n) in [(3, 1), (5, 1), (3, 2), (7, 1), (5, 2)] {
        let f = Field::new(p, n).unwrap();
        let a = natural_group_module(&f);
        let conj = |c| {
            if f.is_zero(c) {
                return Homomorphism::identity(a.module());
            }
            let ci = f.inv(c).unwrap();
            &(a.t(c) * a.u(f.one())) * a.t(ci)
        };
        for mu in f.elements() {
            let (s, d) = f.difference_of_squares(mu).unwrap();
            let minus = conj(d).inverse().unwrap();
            assert_eq!(&conj(s) * &minus, *a.u(mu), "F_{p}^{n}, μ = {}", f.format(mu));
        }
    }
}

#[test]
fn trivial_constructors() {
    let f = Field::new(5, 1).unwrap();
    let Action::Group(g) = trivial_module(&FinAbGroup::cyclic(5).unwrap(), &f, ActionKind::Group) else { panic!() };
    assert!(f.elements().all(|l| g.u(l).is_identity()));
    let f3 = Field::new(3, 1).unwrap();
    let Action::Lie(l) = trivial_module(&FinAbGroup::cyclic(9).unwrap(), &f3, ActionKind::Lie) else { panic!() };
    assert!(l.generators().iter().all(|g| g.is_zero()));
    let e = trivial_module(&FinAbGroup::trivial(), &f, ActionKind::Group);
    assert!(e.module().is_trivial() && e.verify().passed());
}
