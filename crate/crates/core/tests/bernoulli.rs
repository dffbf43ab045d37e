use num_bigint::BigInt;

use cubictk_core::arith::{rat_mod, Rat};
use cubictk_core::bernoulli::{bernoulli, bernoulli_mod, e_of_k, herbrand_test};

fn kummer_value(k: usize, p: u64) -> BigInt {
    let euler = Rat::from_integer(BigInt::from(1) - BigInt::from(p).pow(k as u32 - 1));
    let x = euler * bernoulli(k) / Rat::from_integer(BigInt::from(k));
    rat_mod(&x, &BigInt::from(p)).expect("p-integral")
}

#[test]
fn kummer_congruences() {
    for p in [5u64, 7, 11] {
        let step = (p - 1) as usize;
        for k in (2..step).step_by(2) {
            let base = kummer_value(k, p);
            for j in 1..=4 {
                assert_eq!(kummer_value(k + j * step, p), base, "p = {p}, k = {k}, k' = {}", k + j * step);
            }
        }
    }
}

#[test]
fn reduction_mod_p_agrees_with_exact_values() {
    for p in [5u64, 7, 11, 13, 37] {
        for k in (2..(p - 1) as usize).step_by(2) {
            let exact = rat_mod(&bernoulli(k), &BigInt::from(p)).unwrap();
            assert_eq!(BigInt::from(bernoulli_mod(k, p).unwrap()), exact, "B_{k} mod {p}");
        }
    }
}

#[test]
fn irregular_index_sets() {
    let irregular = |r: u64| -> Vec<usize> {
        (2..=(r - 3) as usize).step_by(2).filter(|&k| herbrand_test(r, k).unwrap()).collect()
    };
    assert_eq!(irregular(37), vec![32]);
    assert_eq!(irregular(59), vec![44]);
    assert_eq!(irregular(67), vec![58]);
    for r in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 41, 43, 47, 53] {
        assert!(irregular(r).is_empty(), "r = {r}");
    }
}

#[test]
fn e_of_k_spot_values() {
    assert_eq!(e_of_k(12, false).unwrap(), BigInt::from(691));
    assert_eq!(bernoulli(2), Rat::new(1.into(), 6.into()));
}
