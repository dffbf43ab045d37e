use cubictk_core::arith::Rat;
use cubictk_core::group_algebra::{
    pullback_character, split_tuple, theta_nd, FiniteAbelianGroup, GroupHom, GroupRingElt, Radix, SigmaElt,
};
use proptest::prelude::*;

fn group(f: &[u64]) -> FiniteAbelianGroup {
    FiniteAbelianGroup::new(f.to_vec()).unwrap()
}

fn element(g: &FiniteAbelianGroup, coeffs: &[i64]) -> GroupRingElt {
    let terms = g.elements().into_iter().zip(coeffs).map(|(x, &c)| (x, Rat::from_integer(c.into()))).collect();
    GroupRingElt::new(g, terms)
}

/// Pushes `α` forward as a group-ring element: `Σ c_g [φ(g)]`.
fn push_element(alpha: &GroupRingElt, hom: &GroupHom, target: &FiniteAbelianGroup) -> GroupRingElt {
    GroupRingElt::new(target, alpha.coeffs.iter().map(|(g, c)| (hom.apply(g), c.clone())).collect())
}

fn homs() -> Vec<(FiniteAbelianGroup, FiniteAbelianGroup, GroupHom)> {
    vec![
        (group(&[4]), group(&[2]), GroupHom::new(vec![4], vec![2], vec![vec![1]]).unwrap()),
        (group(&[6]), group(&[3]), GroupHom::new(vec![6], vec![3], vec![vec![1]]).unwrap()),
        (group(&[2, 2]), group(&[2]), GroupHom::new(vec![2, 2], vec![2], vec![vec![1, 1]]).unwrap()),
        (group(&[3]), group(&[6]), GroupHom::new(vec![3], vec![6], vec![vec![2]]).unwrap()),
        (group(&[2, 4]), group(&[4]), GroupHom::new(vec![2, 4], vec![4], vec![vec![2, 3]]).unwrap()),
    ]
}

#[test]
fn character_count_is_group_order() {
    for g in FiniteAbelianGroup::all_up_to(12) {
        assert_eq!(g.characters().len() as u64, g.order(), "{:?}", g.invariant_factors());
    }
}

#[test]
fn s_n_pullback_is_theta_exhaustive() {
    for g in FiniteAbelianGroup::all_up_to(12) {
        for n in 1..=4usize {
            let radix = Radix::new(g.power_orders(n));
            if radix.size() > 25_000 {
                continue;
            }
            let s = SigmaElt::s_n(&g, n);
            for phi in radix.all() {
                let lhs = pullback_character(&s, &phi).unwrap();
                let rhs = theta_nd(&g, &split_tuple(&g, n, &phi));
                assert_eq!(lhs, rhs, "G = {:?}, n = {n}, φ = {phi:?}", g.invariant_factors());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tables_turn_convolution_into_pointwise_product(
        gi in 0usize..6,
        a in prop::collection::vec(-4i64..=4, 8),
        b in prop::collection::vec(-4i64..=4, 8),
    ) {
        let g = [group(&[2]), group(&[3]), group(&[4]), group(&[2, 2]), group(&[6]), group(&[2, 4])][gi].clone();
        let (x, y) = (element(&g, &a), element(&g, &b));
        let (tx, ty, txy) = (x.table(), y.table(), x.mul(&y).table());
        for (i, v) in txy.values.iter().enumerate() {
            prop_assert_eq!(v, &tx.values[i].mul(&ty.values[i]));
        }
    }

    #[test]
    fn pushforward_of_tables_matches_pushforward_of_elements(
        hi in 0usize..5,
        coeffs in prop::collection::vec(-3i64..=3, 8),
    ) {
        let (g, h, hom) = homs()[hi].clone();
        let alpha = element(&g, &coeffs);
        prop_assume!(alpha.is_unit());
        let pushed = push_element(&alpha, &hom, &h).table();
        let via_table = alpha.table().pushforward(&hom, &h).unwrap();
        for psi in h.elements() {
            prop_assert_eq!(pushed.get(&psi).lift(via_table.m), via_table.get(&psi).clone());
        }
    }
}
