use std::collections::BTreeSet;

use proptest::prelude::*;
use sl2var::abelian::{FinAbGroup, Homomorphism, Subgroup};
use sl2var::Error;

const BOUND: u128 = 1 << 20;

type Set = BTreeSet<Vec<i64>>;

fn all_elements(g: &FinAbGroup) -> Vec<Vec<i64>> {
    g.elements().collect()
}

fn add(g: &FinAbGroup, a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).zip(g.orders()).map(|((x, y), &d)| (x + y).rem_euclid(d as i64)).collect()
}

fn apply(f: &Homomorphism, x: &[i64]) -> Vec<i64> {
    let src = f.src();
    f.apply(&src.element(x).unwrap()).unwrap().coords().to_vec()
}

// Closure of a generating set under addition.
fn span(g: &FinAbGroup, gens: &[Vec<i64>]) -> Set {
    let mut set: Set = [vec![0; g.rank()]].into();
    let mut frontier: Vec<Vec<i64>> = set.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = add(g, &x, s);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

fn elements_of(s: &Subgroup) -> Set {
    s.elements(BOUND).unwrap().into_iter().collect()
}

fn subgroup(g: &FinAbGroup, gens: &[Vec<i64>]) -> Subgroup {
    let els: Vec<_> = gens.iter().map(|c| g.element(c).unwrap()).collect();
    Subgroup::generated_by(g, &els).unwrap()
}

fn group_strategy() -> impl Strategy<Value = FinAbGroup> {
    (1usize..=3, prop::sample::select(vec![2u64, 3, 4, 5, 6]), prop::collection::vec(prop::sample::select(vec![1u64, 1, 2, 3, 5]), 2))
        .prop_filter_map("order at most 625", |(k, d0, steps)| {
            let mut orders = vec![d0];
            for s in steps.iter().take(k - 1) {
                orders.push(orders.last().unwrap() * s);
            }
            let g = FinAbGroup::new(orders).ok()?;
            (g.order() <= 625).then_some(g)
        })
}

fn coords_strategy(g: &FinAbGroup, count: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Vec<i64>>> {
    let ranges: Vec<_> = g.orders().iter().map(|&d| 0..d as i64).collect();
    prop::collection::vec(ranges, count)
}

fn with_subgroups(n: usize) -> impl Strategy<Value = (FinAbGroup, Vec<Vec<Vec<i64>>>)> {
    group_strategy().prop_flat_map(move |g| {
        let gens = prop::collection::vec(coords_strategy(&g, 0..3), n);
        (Just(g), gens)
    })
}

// A well-defined map: entry (i, j) is a multiple of e_i / gcd(e_i, d_j).
fn hom_strategy() -> impl Strategy<Value = Homomorphism> {
    (group_strategy(), group_strategy()).prop_flat_map(|(src, dst)| {
        let (m, k) = (src.rank(), dst.rank());
        prop::collection::vec(prop::collection::vec(0i64..30, m), k).prop_map(move |raw| {
            let rows: Vec<Vec<i64>> = (0..k)
                .map(|i| {
                    (0..m)
                        .map(|j| {
                            let e = dst.orders()[i] as i64;
                            let step = e / num_integer::gcd(e, src.orders()[j] as i64);
                            (raw[i][j] * step).rem_euclid(e)
                        })
                        .collect()
                })
                .collect();
            Homomorphism::new(&src, &dst, &rows).unwrap()
        })
    })
}

#[test]
fn hom_make_examples() {
    let z2 = FinAbGroup::cyclic(2).unwrap();
    let z4 = FinAbGroup::cyclic(4).unwrap();
    assert!(Homomorphism::new(&z2, &z4, &[vec![2]]).is_ok());
    assert!(matches!(Homomorphism::new(&z2, &z4, &[vec![1]]), Err(Error::NotWellDefined { column: 0, .. })));
    let g = FinAbGroup::new(vec![3, 6]).unwrap();
    assert!(Homomorphism::new(&g, &z4, &[vec![0, 0]]).unwrap().is_zero());
}

#[test]
fn ring_examples() {
    let v = FinAbGroup::elementary(5, 2).unwrap();
    let f = Homomorphism::new(&v, &v, &[vec![0, 1], vec![0, 0]]).unwrap();
    assert_eq!(f.compose(&Homomorphism::identity(&v)).unwrap(), f);
    assert!(f.power(2).unwrap().is_zero());
    assert!(matches!(f.compose(&Homomorphism::identity(&FinAbGroup::cyclic(5).unwrap())), Err(Error::ShapeMismatch(_))));
}

#[test]
fn kernel_and_image_examples() {
    let z4 = FinAbGroup::cyclic(4).unwrap();
    let k = Homomorphism::new(&z4, &z4, &[vec![2]]).unwrap().kernel();
    assert_eq!(elements_of(&k), [vec![0], vec![2]].into());
    let z6 = FinAbGroup::cyclic(6).unwrap();
    assert!(Homomorphism::zero(&z6, &z6).kernel().is_whole());
    let v = FinAbGroup::elementary(5, 2).unwrap();
    let delta = Homomorphism::new(&v, &v, &[vec![0, 1], vec![0, 0]]).unwrap();
    let oracle: Set = all_elements(&v).into_iter().filter(|x| apply(&delta, x).iter().all(|&c| c == 0)).collect();
    assert_eq!(elements_of(&delta.kernel()), oracle);
    assert_eq!(delta.kernel(), subgroup(&v, &[vec![1, 0]]));
    let z9 = FinAbGroup::cyclic(9).unwrap();
    assert_eq!(Homomorphism::new(&z9, &z9, &[vec![3]]).unwrap().image().order(), 3);
}

#[test]
fn subgroup_examples() {
    let v = FinAbGroup::elementary(5, 2).unwrap();
    let a = subgroup(&v, &[vec![1, 0]]);
    let b = subgroup(&v, &[vec![0, 1]]);
    assert!(a.intersect(&b).unwrap().is_trivial());
    let q = a.quotient();
    assert_eq!(q.group, FinAbGroup::cyclic(5).unwrap());
    let other = Subgroup::trivial(&FinAbGroup::cyclic(5).unwrap());
    assert!(matches!(a.sum(&other), Err(Error::MixedAmbients)));
}

#[test]
fn torsion_examples() {
    assert!(FinAbGroup::elementary(5, 3).unwrap().is_n_torsion_free(6));
    assert!(!FinAbGroup::cyclic(4).unwrap().is_n_torsion_free(2));
    assert!(FinAbGroup::elementary(5, 2).unwrap().is_n_divisible(2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn kernel_image_orders(f in hom_strategy()) {
        let src = all_elements(f.src());
        let ker: Set = src.iter().filter(|x| apply(&f, x).iter().all(|&c| c == 0)).cloned().collect();
        let im: Set = src.iter().map(|x| apply(&f, x)).collect();
        prop_assert_eq!(elements_of(&f.kernel()), ker);
        prop_assert_eq!(elements_of(&f.image()), im);
        prop_assert_eq!(f.kernel().order() * f.image().order(), f.src().order());
    }

    #[test]
    fn preimage_matches_enumeration((f, gens) in hom_strategy().prop_flat_map(|f| {
        let g = coords_strategy(f.dst(), 0..3);
        (Just(f), g)
    })) {
        let h = subgroup(f.dst(), &gens);
        let hs = elements_of(&h);
        let oracle: Set = all_elements(f.src()).into_iter().filter(|x| hs.contains(&apply(&f, x))).collect();
        prop_assert_eq!(elements_of(&f.preimage(&h).unwrap()), oracle);
    }

    #[test]
    fn sum_and_intersection_match_enumeration((g, gens) in with_subgroups(2)) {
        let a = subgroup(&g, &gens[0]);
        let b = subgroup(&g, &gens[1]);
        let (ea, eb) = (elements_of(&a), elements_of(&b));
        prop_assert_eq!(&ea, &span(&g, &gens[0]));
        let meet: Set = ea.intersection(&eb).cloned().collect();
        prop_assert_eq!(elements_of(&a.intersect(&b).unwrap()), meet);
        let join: Set = ea.iter().flat_map(|x| eb.iter().map(|y| add(&g, x, y))).collect();
        prop_assert_eq!(elements_of(&a.sum(&b).unwrap()), join);
        prop_assert_eq!(a.is_subgroup_of(&b), ea.is_subset(&eb));
    }

    #[test]
    fn modular_law((g, gens, picks) in with_subgroups(2).prop_flat_map(|(g, gens)| {
        (Just(g), Just(gens), prop::collection::vec(any::<prop::sample::Index>(), 0..3))
    })) {
        let a = subgroup(&g, &gens[0]);
        let d = subgroup(&g, &gens[1]);
        let de = d.elements(BOUND).unwrap();
        let bgens: Vec<Vec<i64>> = picks.iter().map(|i| de[i.index(de.len())].clone()).collect();
        let b = subgroup(&g, &bgens);
        prop_assert!(b.is_subgroup_of(&d));
        let lhs = a.intersect(&d).unwrap().sum(&b).unwrap();
        let rhs = a.sum(&b).unwrap().intersect(&d).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotient_section_round_trip((g, gens) in with_subgroups(1)) {
        let a = subgroup(&g, &gens[0]);
        let q = a.quotient();
        prop_assert_eq!(q.group.order() * a.order(), g.order());
        prop_assert_eq!(q.projection.kernel(), a.clone());
        for y in all_elements(&q.group) {
            let y = q.group.element(&y).unwrap();
            let lift = q.section(&y).unwrap();
            prop_assert_eq!(q.projection.apply(&lift).unwrap(), y.clone());
            // the section picks the lexicographically smallest coset member
            let coset_min = elements_of(&a).iter().map(|s| add(&g, lift.coords(), s)).min().unwrap();
            prop_assert_eq!(lift.coords(), &coset_min[..]);
        }
    }

    #[test]
    fn canonical_bases((g, gens) in with_subgroups(1)) {
        let a = subgroup(&g, &gens[0]);
        let from_all = subgroup(&g, &a.elements(BOUND).unwrap());
        prop_assert_eq!(&from_all, &a);
        let mut doubled = gens[0].clone();
        doubled.extend(gens[0].iter().map(|x| add(&g, x, x)));
        doubled.reverse();
        prop_assert_eq!(subgroup(&g, &doubled), a.clone());
        let st = a.structure();
        prop_assert_eq!(st.group.order(), a.order());
        prop_assert_eq!(st.embedding.image(), a);
    }

    #[test]
    fn ring_axioms(seed in prop::collection::vec(prop::collection::vec(0i64..5, 9), 2)) {
        let v = FinAbGroup::elementary(5, 3).unwrap();
        let mk = |raw: &Vec<i64>| Homomorphism::new(&v, &v, &raw.chunks(3).map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        let (f, g) = (mk(&seed[0]), mk(&seed[1]));
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
        prop_assert_eq!(f.scale(2), &f + &f);
        prop_assert_eq!(f.power(2).unwrap(), &f * &f);
    }
}
