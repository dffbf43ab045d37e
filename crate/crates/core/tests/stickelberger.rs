use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use cubictk_core::cyclotomic::{p_chi, Budget, ClassGroup, ClassGroupOptions, IdealClass};
use cubictk_core::stickelberger::{apply_stickelberger, h_minus, teichmuller, theta2_on_pchi, StickelbergerElt};

fn cl23() -> std::sync::Arc<ClassGroup> {
    ClassGroup::compute(23, &ClassGroupOptions::default()).unwrap()
}

fn classes(cg: &ClassGroup) -> Vec<IdealClass> {
    let g = &cg.generators()[0];
    vec![cg.zero(), g.clone(), cg.add(g, g)]
}

#[test]
fn theta_action_is_an_equivariant_endomorphism() {
    let cg = cl23();
    let thetas = [StickelbergerElt::theta1(23).unwrap(), StickelbergerElt::theta2(23, 1657).unwrap()];
    let cs = classes(&cg);
    for theta in &thetas {
        let image: Vec<IdealClass> = cs.iter().map(|c| apply_stickelberger(theta, c, &cg, None).unwrap()).collect();
        assert!(cg.is_zero(&image[0]));
        for (i, a) in cs.iter().enumerate() {
            for (j, b) in cs.iter().enumerate() {
                let sum = apply_stickelberger(theta, &cg.add(a, b), &cg, None).unwrap();
                assert_eq!(sum, cg.add(&image[i], &image[j]));
            }
            for b in 1..23u64 {
                let lhs = apply_stickelberger(theta, &cg.galois(b, a), &cg, None).unwrap();
                assert_eq!(lhs, cg.galois(b, &image[i]), "σ_{b}");
            }
        }
    }
}

#[test]
fn theta2_on_pchi_does_not_depend_on_the_character_r5() {
    let cg = ClassGroup::compute(5, &ClassGroupOptions::default()).unwrap();
    let b = Budget::default();
    let first = theta2_on_pchi(5, 241, 1, &cg, b).unwrap();
    for e in 2..5 {
        assert_eq!(theta2_on_pchi(5, 241, e, &cg, b).unwrap(), first);
    }
    assert!(cg.is_zero(&first));
}

#[test]
fn theta1_image_of_a_generator_depends_only_on_p() {
    let cg = cl23();
    let theta = StickelbergerElt::theta1(23).unwrap();
    let b = Budget::default();
    for e in 1..23 {
        let c = cg.prime_class(&p_chi(23, 47, e).unwrap(), b).unwrap();
        assert!(cg.is_zero(&apply_stickelberger(&theta, &c, &cg, None).unwrap()), "e = {e}");
    }
}

#[test]
fn relative_class_number_matches_the_class_group() {
    for r in [5u64, 7, 11, 13, 17, 19, 23] {
        let cg = ClassGroup::compute(r, &ClassGroupOptions::default()).unwrap();
        assert_eq!(cg.order(), h_minus(r).unwrap(), "r = {r}");
    }
}

proptest! {
    #[test]
    fn teichmuller_is_multiplicative(ri in 0usize..11, k in 1u32..=3, a in 1i64..2000, b in 1i64..2000) {
        let r = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37][ri];
        prop_assume!(a % r as i64 != 0 && b % r as i64 != 0);
        let m = BigInt::from(r).pow(k);
        let lhs = teichmuller(r, a * b, k).unwrap();
        let rhs = (teichmuller(r, a, k).unwrap() * teichmuller(r, b, k).unwrap()).mod_floor(&m);
        prop_assert_eq!(lhs, rhs);
        // a root of unity of order dividing r − 1, congruent to a mod r
        let w = teichmuller(r, a, k).unwrap();
        prop_assert_eq!(w.modpow(&BigInt::from(r - 1), &m), BigInt::from(1));
        prop_assert_eq!((&w - a).mod_floor(&BigInt::from(r)), BigInt::from(0));
    }
}
