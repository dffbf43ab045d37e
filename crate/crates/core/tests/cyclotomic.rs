use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use cubictk_core::cyclo::CycInt;
use cubictk_core::cyclotomic::{
    find_generator, norm_fast, p_chi, split_prime, steinitz_rim, Budget, ClassGroup, ClassGroupOptions, CycIdeal,
    GLattice, IdealClass,
};

const RS: [u64; 5] = [5, 7, 11, 13, 23];

fn cyc(r: u64, coeffs: &[i64]) -> CycInt {
    CycInt::from_i64s(r, &coeffs[..(r - 1) as usize])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn norm_is_multiplicative(ri in 0usize..5, a in prop::collection::vec(-4i64..=4, 22), b in prop::collection::vec(-4i64..=4, 22)) {
        let r = RS[ri];
        let (x, y) = (cyc(r, &a), cyc(r, &b));
        prop_assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
        prop_assert_eq!(norm_fast(&x), x.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn ideal_norm_is_multiplicative(ri in 0usize..3, a in prop::collection::vec(-3i64..=3, 12), pick in 0usize..64) {
        let r = [5u64, 7, 11][ri];
        let x = cyc(r, &a);
        prop_assume!(!x.is_zero());
        let split: Vec<_> = [11u64, 23, 29, 31, 41, 43, 61, 67, 71, 89]
            .iter()
            .filter(|&&p| p % r == 1)
            .flat_map(|&p| split_prime(r, p).unwrap())
            .collect();
        let p1 = &split[pick % split.len()];
        let p2 = &split[(pick / 7) % split.len()];
        let principal = CycIdeal::principal(&x).unwrap();
        let prod = p1.ideal().mul(&p2.ideal()).mul(&principal);
        prop_assert_eq!(principal.norm(), x.norm().abs());
        prop_assert_eq!(prod.norm(), p1.norm() * p2.norm() * x.norm().abs());
    }
}

fn cl23() -> std::sync::Arc<ClassGroup> {
    ClassGroup::compute(23, &ClassGroupOptions::default()).unwrap()
}

fn all_classes(cg: &ClassGroup) -> Vec<IdealClass> {
    let mut out = vec![cg.zero()];
    for g in cg.generators() {
        let mut next = Vec::new();
        for c in &out {
            let mut x = c.clone();
            loop {
                next.push(x.clone());
                x = cg.add(&x, &g);
                if &x == c {
                    break;
                }
            }
        }
        out = next;
    }
    out
}

#[test]
fn galois_action_composes() {
    let cg = cl23();
    let classes = all_classes(&cg);
    assert_eq!(classes.len(), 3);
    for a in 1..23u64 {
        assert!(cg.is_zero(&cg.galois(a, &cg.zero())));
        for b in 1..23u64 {
            for c in &classes {
                assert_eq!(cg.galois(a, &cg.galois(b, c)), cg.galois(a * b % 23, c), "σ_{a} σ_{b}");
            }
        }
    }
}

#[test]
fn galois_action_on_ideals_composes() {
    let q = p_chi(23, 47, 1).unwrap().ideal();
    for (a, b) in [(2u64, 3u64), (5, 7), (22, 11)] {
        assert_eq!(q.galois(b).galois(a), q.galois(a * b % 23));
    }
}

#[test]
fn class_number_kills_factor_base_primes() {
    let b = Budget::default();
    for r in [5u64, 7, 11, 13, 17, 19] {
        let cg = ClassGroup::compute(r, &ClassGroupOptions::default()).unwrap();
        assert!(cg.is_trivial());
        for q in cg.factor_base.iter().filter(|q| !q.is_ramified()).take(4) {
            let x = find_generator(&q.ideal(), b).unwrap();
            assert_eq!(norm_fast(&x).abs(), q.norm(), "r = {r}, p = {}", q.p);
        }
    }
    let cg = cl23();
    let h = cg.order();
    assert_eq!(h, BigInt::from(3));
    for q in cg.factor_base.iter().filter(|q| !q.is_ramified() && q.f == 1).take(3) {
        let x = find_generator(&q.ideal().pow(3), b).unwrap();
        assert_eq!(norm_fast(&x).abs(), q.norm().pow(3), "p = {}", q.p);
        let c = cg.prime_class(q, b).unwrap();
        assert!(cg.is_zero(&cg.add(&cg.add(&c, &c), &c)));
    }
}

#[test]
fn steinitz_class_is_additive() {
    let cg = cl23();
    let b = Budget::default();
    let e = 1;
    let primes: Vec<_> = [47u64, 139].iter().map(|&p| p_chi(23, p, 1).unwrap()).collect();
    let mut lattices = vec![GLattice::from_ideal(&CycIdeal::unit(23), e).unwrap(), GLattice::trivial(23)];
    lattices.extend(primes.iter().map(|q| GLattice::from_ideal(&q.ideal(), e).unwrap()));
    lattices.push(GLattice::from_ideal(&primes[0].ideal().galois(5), e).unwrap());
    let classes: Vec<_> = lattices.iter().map(|m| steinitz_rim(m, e, &cg, b).unwrap()).collect();
    for i in 0..lattices.len() {
        for j in i..lattices.len() {
            let s = steinitz_rim(&lattices[i].direct_sum(&lattices[j]), e, &cg, b).unwrap();
            assert_eq!(s.rank, classes[i].rank + classes[j].rank);
            assert_eq!(s.class, cg.add(&classes[i].class, &classes[j].class), "pair ({i}, {j})");
        }
    }
}
