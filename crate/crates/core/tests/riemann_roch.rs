use num_integer::Integer;
use proptest::prelude::*;

use cubictk_core::arith::Rat;
use cubictk_core::group_algebra::{split_tuple, theta_nd, GCharacter, Radix};
use cubictk_core::modular::build_modular_branch;
use cubictk_core::riemann_roch::{
    fuzz_branch_data, integrality_check, main_theorem_idele, t_pi_general, t_pi_surface, telescope_check, BranchData,
    CharFunction,
};

/// `Σ_{I ⊆ {1..n}} (−1)^{n−#I} T(Π_{i∈I} φᵢ)`, straight from the definition.
fn alternating_sum(bd: &BranchData, phis: &[GCharacter]) -> Rat {
    let g = bd.group().unwrap();
    let n = phis.len();
    let mut acc = Rat::from_integer(0.into());
    for mask in 0u32..(1 << n) {
        let mut chi = GCharacter::trivial(&g);
        for (i, phi) in phis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                chi = chi.mul(phi);
            }
        }
        let t = t_pi_surface(bd, &chi).unwrap();
        if (n - mask.count_ones() as usize) % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

fn check_additivity(bd: &BranchData) {
    let g = bd.group().unwrap();
    let tf = CharFunction::tabulate(&g, |chi| t_pi_surface(bd, chi)).unwrap();
    let n = bd.d as usize + 2;
    let radix = Radix::new(g.power_orders(n));
    for phi in radix.all().into_iter().take(4000) {
        let parts = split_tuple(&g, n, &phi);
        assert_eq!(tf.eval(&theta_nd(&g, &parts)), alternating_sum(bd, &parts), "φ = {phi:?}");
    }
}

#[test]
fn theta_expansion_matches_definition_on_modular_data() {
    check_additivity(&build_modular_branch(241, 5).unwrap());
}

#[test]
fn telescoping_vanishes_below_degree() {
    for n in 1..=6 {
        for q in 0..n as u32 {
            assert!(telescope_check(n, q).unwrap().vanishes, "n = {n}, q = {q}");
        }
    }
}

#[test]
fn squared_idele_doubles_the_plain_one() {
    let bd = build_modular_branch(241, 5).unwrap();
    let (plain, sq) = (main_theorem_idele(&bd, false).unwrap(), main_theorem_idele(&bd, true).unwrap());
    for (v, entries) in &plain.places {
        for e in entries {
            assert_eq!(sq.exponent(*v, &e.phi), &e.exponent * Rat::from_integer(2.into()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn branch_data_json_round_trip(seed in any::<u64>()) {
        let bd = fuzz_branch_data(seed);
        let text = serde_json::to_string(&bd).unwrap();
        prop_assert_eq!(BranchData::from_json(&text).unwrap(), bd);
    }

    #[test]
    fn fuzzed_data_is_integral(seed in any::<u64>()) {
        let bd = fuzz_branch_data(seed);
        let rep = integrality_check(&bd).unwrap();
        prop_assert!(rep.cartier_violations.is_empty());
        prop_assert!(rep.passed, "{:?}", rep.violations);
    }

    #[test]
    fn theta_expansion_matches_definition_on_fuzzed_data(seed in any::<u64>()) {
        check_additivity(&fuzz_branch_data(seed));
    }
}

#[test]
fn galois_twists_fixing_inertia_preserve_t() {
    let mut twisted_pairs = 0;
    for seed in 0..300 {
        let bd = fuzz_branch_data(seed);
        let g = bd.group().unwrap();
        let ex = g.exponent();
        let inertia = bd.components.iter().fold(1u64, |acc, y| acc.lcm(&y.inertia_order));
        let table = bd.degree_table().unwrap();
        for k in (2..ex).filter(|k| k.gcd(&ex) == 1 && k % inertia == 1 % inertia) {
            for chi in g.characters() {
                let twisted = chi.pow(k as i64);
                assert_eq!(
                    t_pi_general(&bd, &table, &chi).unwrap(),
                    t_pi_general(&bd, &table, &twisted).unwrap(),
                    "seed {seed}, k = {k}, χ = {:?}",
                    chi.exponents
                );
                twisted_pairs += 1;
            }
        }
    }
    assert!(twisted_pairs > 50, "only {twisted_pairs} twisted pairs exercised");
}
