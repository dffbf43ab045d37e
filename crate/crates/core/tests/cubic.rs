use std::collections::BTreeMap;

use cubictk_core::arith::Rat;
use cubictk_core::cubic::{check_cubic, theta_on_idele, IdeleElt, LocalElt};
use cubictk_core::group_algebra::{lambda_z, CharTable, FiniteAbelianGroup, GroupHom, GroupRingElt, Radix, SigmaElt};
use proptest::prelude::*;

fn group(f: &[u64]) -> FiniteAbelianGroup {
    FiniteAbelianGroup::new(f.to_vec()).unwrap()
}

fn groups() -> Vec<FiniteAbelianGroup> {
    vec![group(&[2]), group(&[3]), group(&[4]), group(&[2, 2]), group(&[6])]
}

fn element(g: &FiniteAbelianGroup, coeffs: &[i64]) -> GroupRingElt {
    let terms = g.elements().into_iter().zip(coeffs).map(|(x, &c)| (x, Rat::from_integer(c.into()))).collect();
    GroupRingElt::new(g, terms)
}

fn lambda_s_n(g: &FiniteAbelianGroup, n: usize, alpha: &GroupRingElt) -> CharTable {
    lambda_z(&SigmaElt::s_n(g, n), &alpha.table()).unwrap()
}

/// Pushforward of an idèle along `φ^n`: unit tables and valuations both read `ψ ∘ φ^n`.
fn push_idele(m: &IdeleElt, hom: &GroupHom, target: &FiniteAbelianGroup) -> IdeleElt {
    let k = target.rank();
    let out = Radix::new(target.power_orders(m.n));
    let src = Radix::new(m.group.power_orders(m.n));
    let local = m
        .local
        .iter()
        .map(|(&v, e)| {
            let unit = e.unit.pushforward(hom, target).unwrap();
            let valuation = out
                .all()
                .iter()
                .map(|psi| {
                    let pulled: Vec<u64> = psi.chunks(k).flat_map(|c| hom.pull_character(c)).collect();
                    e.valuation[src.index(&pulled)].clone()
                })
                .collect();
            (v, LocalElt { unit, valuation })
        })
        .collect();
    IdeleElt::new(target, m.n, local).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lambda_s_n_of_a_unit_is_cubic(gi in 0usize..5, n in 2usize..=4, coeffs in prop::collection::vec(-3i64..=3, 6)) {
        let g = &groups()[gi];
        let alpha = element(g, &coeffs);
        prop_assume!(alpha.is_unit());
        let v = check_cubic(&lambda_s_n(g, n, &alpha)).unwrap();
        prop_assert!(v.is_n_cubic(), "{:?}", v.witnesses);
    }

    #[test]
    fn cubic_tables_form_a_group(
        gi in 0usize..5,
        n in 2usize..=3,
        a in prop::collection::vec(-3i64..=3, 6),
        b in prop::collection::vec(-3i64..=3, 6),
    ) {
        let g = &groups()[gi];
        let (x, y) = (element(g, &a), element(g, &b));
        prop_assume!(x.is_unit() && y.is_unit());
        let (tx, ty) = (lambda_s_n(g, n, &x), lambda_s_n(g, n, &y));
        prop_assert!(check_cubic(&tx.mul(&ty).unwrap()).unwrap().is_n_cubic());
        prop_assert!(check_cubic(&tx.inv()).unwrap().is_n_cubic());
    }

    #[test]
    fn theta_commutes_with_pushforward(
        coeffs in prop::collection::vec(-3i64..=3, 4),
        vals in prop::collection::vec(-4i64..=4, 3),
        n in 2usize..=3,
    ) {
        let (g, h) = (group(&[4]), group(&[2]));
        let hom = GroupHom::new(vec![4], vec![2], vec![vec![1]]).unwrap();
        let alpha = element(&g, &coeffs);
        prop_assume!(alpha.is_unit());
        // valuations constant on characters of equal order, hence on Galois orbits
        let valuation = g.elements().iter().map(|chi| {
            let order = match chi[0] { 0 => 0, 2 => 1, _ => 2 };
            Rat::from_integer(vals[order].into())
        }).collect();
        let local = BTreeMap::from([(5u64, LocalElt { unit: alpha.table(), valuation })]);
        let m = IdeleElt::new(&g, 1, local).unwrap();
        let lhs = theta_on_idele(&push_idele(&m, &hom, &h), n).unwrap();
        let rhs = push_idele(&theta_on_idele(&m, n).unwrap(), &hom, &h);
        let (a, b) = (lhs.at(5), rhs.at(5));
        prop_assert_eq!(a.valuation, b.valuation);
        for (x, y) in a.unit.values.iter().zip(&b.unit.values) {
            prop_assert_eq!(x.lift(b.unit.m.max(a.unit.m)), y.lift(b.unit.m.max(a.unit.m)));
        }
    }
}
