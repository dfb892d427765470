use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use sl2var::arith::{smith_normal_form, Field, IntMatrix};
use sl2var::Error;

const SMALL_FIELDS: &[(u64, u32)] =
    &[(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2), (3, 3), (2, 4), (3, 4), (7, 2), (2, 6)];

fn has_root(f: &[u64], p: u64) -> bool {
    (0..p).any(|x| f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0)
}

// Smallest monic irreducible of degree 2 or 3, found by root search, in the
// order that compares the constant coefficient first.
fn oracle_modulus(p: u64, n: u32) -> Vec<u64> {
    assert!(n == 2 || n == 3);
    let count = p.pow(n);
    (0..count)
        .map(|mut code| {
            let mut c = vec![0; n as usize + 1];
            for i in (0..n as usize).rev() {
                c[i] = code % p;
                code /= p;
            }
            c[n as usize] = 1;
            c
        })
        .find(|f| !has_root(f, p))
        .unwrap()
}

#[test]
fn canonical_moduli_match_root_search() {
    assert_eq!(Field::new(5, 1).unwrap().desc().modulus, vec![0, 1]);
    assert_eq!(Field::new(3, 2).unwrap().desc().modulus, vec![1, 0, 1]);
    assert_eq!(Field::new(2, 2).unwrap().desc().modulus, vec![1, 1, 1]);
    for &(p, n) in &[(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (7, 3), (11, 2)] {
        assert_eq!(Field::new(p, n).unwrap().desc().modulus, oracle_modulus(p, n), "F_{p}^{n}");
    }
}

#[test]
fn field_make_errors() {
    assert!(matches!(Field::new(6, 1), Err(Error::NotPrime(6))));
    assert!(matches!(Field::new(5, 0), Err(Error::ZeroDegree)));
    assert!(matches!(Field::new(101, 2), Err(Error::FieldTooLarge { .. })));
    assert!(Field::with_bound(101, 2, 20_000).is_ok());
}

#[test]
fn spec_field_examples() {
    let f5 = Field::new(5, 1).unwrap();
    assert_eq!(f5.inv(f5.from_int(2)).unwrap(), f5.from_int(3));
    let (m, s) = f5.int_multiple_of_square(f5.from_int(2)).unwrap();
    assert_eq!(f5.mul(f5.from_int(m as i64), f5.mul(s, s)), f5.from_int(2));
    let f9 = Field::new(3, 2).unwrap();
    assert!(matches!(f9.inv(f9.zero()), Err(Error::ZeroInverse)));
}

#[test]
fn field_axioms_exhaustive_up_to_81() {
    for &(p, n) in SMALL_FIELDS {
        let f = Field::new(p, n).unwrap();
        if f.size() > 81 {
            continue;
        }
        let els: Vec<_> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), f.zero());
            if !f.is_zero(a) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

#[test]
fn differences_of_squares_in_odd_characteristic() {
    for &(p, n) in SMALL_FIELDS {
        let f = Field::new(p, n).unwrap();
        if p == 2 {
            continue;
        }
        for a in f.elements() {
            let (mu, nu) = f.difference_of_squares(a).expect("witness exists");
            assert_eq!(f.sub(f.mul(mu, mu), f.mul(nu, nu)), a);
        }
    }
}

#[test]
fn mixed_fields_are_rejected() {
    let f5 = Field::new(5, 1).unwrap();
    let f7 = Field::new(7, 1).unwrap();
    assert!(matches!(f5.try_add(f5.one(), f7.one()), Err(Error::MixedFields)));
    assert!(matches!(f5.try_mul(f7.one(), f5.one()), Err(Error::MixedFields)));
}

#[test]
fn smith_examples() {
    let id = IntMatrix::from_rows(&[vec![1, 0], vec![0, 1]]);
    assert_eq!(smith_normal_form(&id).diagonal(), vec![BigInt::one(), BigInt::one()]);
    let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
    assert_eq!(smith_normal_form(&m).diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    let z = IntMatrix::from_rows(&[vec![0]]);
    assert_eq!(smith_normal_form(&z).diagonal(), vec![BigInt::zero()]);
}

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-50i64..=50, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_certificate(rows in matrix_strategy()) {
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(&s.u.mul(&m).mul(&s.w), &s.d);
        prop_assert!(s.d.is_diagonal());
        prop_assert!(s.u.det().abs().is_one());
        prop_assert!(s.w.det().abs().is_one());
        prop_assert!(s.u.mul(&s.u_inv) == IntMatrix::identity(m.rows()));
        prop_assert!(s.w.mul(&s.w_inv) == IntMatrix::identity(m.cols()));
        let d = s.diagonal();
        prop_assert!(d.iter().all(|x| !x.is_negative()));
        for pair in d.windows(2) {
            if pair[0].is_zero() {
                prop_assert!(pair[1].is_zero());
            } else {
                prop_assert!((&pair[1] % &pair[0]).is_zero());
            }
        }
        prop_assert_eq!(s.rank, d.iter().filter(|x| !x.is_zero()).count());
    }

    #[test]
    fn nonzero_elements_invert(idx in 0usize..SMALL_FIELDS.len(), code in 1u32..4096) {
        let (p, n) = SMALL_FIELDS[idx];
        let f = Field::new(p, n).unwrap();
        let a = f.from_code(1 + code % (f.size() - 1)).unwrap();
        prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        prop_assert_eq!(f.div(a, a).unwrap(), f.one());
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative(idx in 0usize..SMALL_FIELDS.len(), x in 0u32..4096, y in 0u32..4096) {
        let (p, n) = SMALL_FIELDS[idx];
        let f = Field::new(p, n).unwrap();
        let a = f.from_code(x % f.size()).unwrap();
        let b = f.from_code(y % f.size()).unwrap();
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(a, n), a);
    }
}
