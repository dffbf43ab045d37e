use cubictk_core::arith::{is_prime, pow_mod};
use cubictk_core::cyclotomic::{ClassGroup, ClassGroupOptions, IdealClass};
use cubictk_core::modular::{bsd_relation_with, lattice_class_sweep, lattice_steinitz_class, modular_cover_data};

/// Genus of `X_H` for `H` of index `r` in `(Z/p)^*/±1`, from the Γ_H genus formula.
fn genus_x_h(p: u64, r: u64) -> i64 {
    let h = (p - 1) / (2 * r);
    let in_h = |x: u64| {
        let y = pow_mod(x, h, p);
        y == 1 || y == p - 1
    };
    let sqrt_m1 = (2..p).find(|&x| x * x % p == p - 1).unwrap();
    let cube_root = (2..p).find(|&x| x * x % p != 1 && pow_mod(x, 3, p) == 1).unwrap();
    let r = r as i64;
    // two elliptic points of each order on X₀(p); unramified above iff the diagonal entry is in ±H
    let nu2 = if in_h(sqrt_m1) { 2 * r } else { 2 };
    let nu3 = if in_h(cube_root) { 2 * r } else { 2 };
    let cusps = 2 * r;
    let mu = r * (p as i64 + 1);
    let twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;
    assert_eq!(twelve_g % 12, 0);
    twelve_g / 12
}

#[test]
fn lattice_rank_matches_hurwitz() {
    let mut checked = 0;
    for p in (25..3000u64).step_by(24).filter(|&p| is_prime(p)) {
        for r in [5u64, 7, 11, 13, 23] {
            let Ok(data) = modular_cover_data(p, r) else { continue };
            let g_h = genus_x_h(p, r);
            assert_eq!((g_h - 1) % r as i64, 0);
            assert_eq!((g_h - 1) / r as i64, data.genus_x0 - 1, "p = {p}, r = {r}");
            assert_eq!(data.genus_x0 - 1, (p as i64 - 25) / 12);
            checked += 1;
        }
    }
    assert!(checked > 20);
    let res = lattice_steinitz_class(241, 5, &ClassGroupOptions::default()).unwrap();
    assert_eq!(res.n_chi, genus_x_h(241, 5) / 5);
}

#[test]
fn lattice_class_is_character_independent_r5() {
    let sweep = lattice_class_sweep(241, 5, &ClassGroupOptions::default()).unwrap();
    assert!(sweep.all_equal);
    assert_eq!(sweep.direct.len(), 4);
}

#[test]
fn bsd_relation_is_invariant_under_conjugation() {
    for invert_two in [false, true] {
        let cg = ClassGroup::compute(23, &ClassGroupOptions { invert_two, ..Default::default() }).unwrap();
        let mut cs: Vec<IdealClass> = vec![cg.zero()];
        for g in cg.generators() {
            let mut more = Vec::new();
            for c in &cs {
                let mut x = cg.add(c, &g);
                while &x != c {
                    more.push(x.clone());
                    x = cg.add(&x, &g);
                }
            }
            cs.extend(more);
        }
        for t in &cs {
            for s in &cs {
                for m in &cs {
                    assert_eq!(
                        bsd_relation_with(t, s, m, &cg),
                        bsd_relation_with(&cg.conj(t), &cg.conj(s), &cg.conj(m), &cg)
                    );
                }
            }
        }
    }
}
