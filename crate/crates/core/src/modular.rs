//! The cover `X_H → X₀(p)` at `p`: its branch data, the closed form of `T`,
//! the correction terms `T₁`, `T₂`, the idèle `β`, the Steinitz class of the
//! `χ`-part of weight-two cusp forms and the BSD-type class relation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{is_prime, rat_to_string, Rat};
use crate::cyclotomic::{p_chi, Budget, ClassGroup, ClassGroupOptions, IdealClass};
use crate::error::{input, Error, Result};
use crate::group_algebra::{theta_nd, FiniteAbelianGroup, GCharacter};
use crate::riemann_roch::{BranchComponent, BranchData, Fibre};
use crate::stickelberger::{apply_stickelberger, eigen_decompose, apply_via_eigen, frac_rep, teichmuller, StickelbergerElt};

/// Numerical data of the special fibre of `X_H` over `X₀(p)`.
#[derive(Clone, Debug, Serialize)]
pub struct ModularCoverData {
    pub p: u64,
    pub r: u64,
    pub genus_x0: i64,
    pub d0_dinf: i64,
    pub d0_self: i64,
    pub euler_char_d0: i64,
}

fn check_modular(p: u64, r: u64) -> Result<()> {
    if !is_prime(p) || p % 24 != 1 {
        return input(format!("p = {p} must be a prime ≡ 1 mod 24"));
    }
    if !is_prime(r) || ((p - 1) / 2) % r != 0 {
        return input(format!("r = {r} must be a prime dividing (p − 1)/2"));
    }
    if ((p - 1) / (2 * r)) % 6 != 0 {
        return input(format!("#H = {} is not divisible by 6", (p - 1) / (2 * r)));
    }
    Ok(())
}

pub fn modular_cover_data(p: u64, r: u64) -> Result<ModularCoverData> {
    check_modular(p, r)?;
    let m = ((p - 1) / 12) as i64;
    Ok(ModularCoverData { p, r, genus_x0: (p as i64 - 13) / 12, d0_dinf: m, d0_self: -m, euler_char_d0: 1 })
}

/// Branch data with `G = Z/r`: `D₀` totally ramified, `D_∞` unramified.
/// The generator exponent `r − 1` gives `g(χ₀^{−a}, D₀) = −{a}/r`.
pub fn build_modular_branch(p: u64, r: u64) -> Result<BranchData> {
    let data = modular_cover_data(p, r)?;
    let comp = |name: &str, e: u64, u: u64| BranchComponent {
        name: name.into(),
        inertia_order: e,
        inertia_generator_exponent: u,
        inertia_generator: None,
        exponent_map: None,
        self_intersection: data.d0_self,
        euler_char: 1,
        residue_prime: None,
        c1: None,
    };
    let bd = BranchData {
        group: vec![r],
        d: 1,
        residue_prime: p,
        components: vec![comp("D0", r, r - 1), comp("Dinf", 1, 1)],
        cross_intersections: vec![(0, 1, data.d0_dinf)],
        fibres: vec![Fibre { multiplicities: vec![(0, 1), (1, 1)] }],
        rank: None,
        degree_table: None,
    };
    bd.validate()?;
    Ok(bd)
}

/// The character `χ₀^{−a}` of `Z/r`.
pub fn chi0_power(r: u64, a: i64) -> GCharacter {
    let g = FiniteAbelianGroup::cyclic(r);
    GCharacter::new(&g, vec![1]).expect("χ₀ exists").pow(-a)
}

/// `(1−p)/12·({a}²/(2r²) − {a}/(2r)) − {a}/r`.
pub fn t_equ1(p: u64, r: u64, a: i64) -> Rat {
    let fa = BigInt::from(frac_rep(a, r));
    let r = BigInt::from(r);
    let base = Rat::new(BigInt::from(1 - p as i64), BigInt::from(12));
    let quad = Rat::new(&fa * &fa, BigInt::from(2) * &r * &r) - Rat::new(fa.clone(), BigInt::from(2) * &r);
    base * quad - Rat::new(fa, r)
}

/// `T₁` as the `r`-adic integer `r²·T₁ mod r^k`, and `T₂ = −{a}/r`.
#[derive(Clone, Debug, Serialize)]
pub struct Corrections {
    pub a: i64,
    pub precision: u32,
    #[serde(with = "crate::serde_big::scalar")]
    pub r2_t1: BigInt,
    #[serde(with = "crate::serde_big::rat")]
    pub t2: Rat,
    #[serde(with = "crate::serde_big::scalar")]
    pub r_t2: BigInt,
    /// `"+"` or `"−"` according to `r·T₂ ≡ ±a mod r`.
    pub congruence_sign: String,
}

pub fn t_corrections(p: u64, r: u64, a: i64, k: u32) -> Result<Corrections> {
    check_modular(p, r)?;
    if (p - 1) % (24 * r) != 0 {
        return input(format!("p = {p} is not 1 mod 24r"));
    }
    let fa = frac_rep(a, r);
    let modulus = BigInt::from(r).pow(k);
    let r2_t1 = if fa == 0 {
        BigInt::zero()
    } else {
        let w = teichmuller(r, a, k)?;
        let half = crate::arith::inv_mod_big(&BigInt::from(2), &modulus).expect("r odd");
        let num = BigInt::from(1 - p as i64) / BigInt::from(12);
        (num * &w * &w * half).mod_floor(&modulus)
    };
    let t2 = Rat::new(-BigInt::from(fa), BigInt::from(r));
    let r_t2 = (&t2 * Rat::from_integer(r.into())).to_integer();
    let rb = BigInt::from(r);
    let sign = if (&r_t2 + a).mod_floor(&rb).is_zero() {
        "−"
    } else if (&r_t2 - a).mod_floor(&rb).is_zero() {
        "+"
    } else {
        return Err(Error::Math(format!("r·T₂ ≢ ±a mod r at a = {a}")));
    };
    Ok(Corrections { a, precision: k, r2_t1, t2, r_t2, congruence_sign: sign.into() })
}

/// Exponent of `ψ(β_p)` for `ψ = χ₀^{−a}`.
#[derive(Clone, Debug, Serialize)]
pub struct BetaEntry {
    pub a: u64,
    /// `−T + T₂`, the exponent away from `r`.
    #[serde(with = "crate::serde_big::rat")]
    pub away_from_r: Rat,
    /// `−T + T₁ + T₂` as an `r`-adic integer mod `r^k`.
    #[serde(with = "crate::serde_big::scalar")]
    pub r_adic: BigInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct BetaIdele {
    pub p: u64,
    pub r: u64,
    pub precision: u32,
    pub entries: Vec<BetaEntry>,
    /// Every `Θ^D(χ₀^{−a}⊗χ₀^{−b}⊗χ₀^{−c})` exponent away from `r` is an integer.
    pub triple_products_integral: bool,
}

/// `ψ(β_p) = p^{−T(ψ) + T₁(ψ) + T₂(ψ)}` per character, with integrality verified.
pub fn beta_idele(p: u64, r: u64, k: u32) -> Result<BetaIdele> {
    check_modular(p, r)?;
    if (p - 1) % (24 * r) != 0 {
        return input(format!("p = {p} is not 1 mod 24r"));
    }
    let modulus = BigInt::from(r).pow(k);
    let big = BigInt::from(r).pow(k + 2);
    let q = BigInt::from((p - 1) / 24);
    let r2 = BigInt::from(r * r);
    let mut entries = Vec::new();
    for a in 0..r {
        let c = t_corrections(p, r, a as i64, k + 2)?;
        let away = -t_equ1(p, r, a as i64) + &c.t2;
        let fa = BigInt::from(a);
        let closed = Rat::new(&q * (&fa * &fa - BigInt::from(r) * &fa), r2.clone());
        if away != closed {
            return Err(Error::Math(format!("−T + T₂ disagrees with its closed form at a = {a}")));
        }
        let w = if a == 0 { BigInt::zero() } else { teichmuller(r, a as i64, k + 2)? };
        let num = (&q * (&fa * &fa - &w * &w - BigInt::from(r) * &fa)).mod_floor(&big);
        if !num.is_multiple_of(&r2) {
            return Err(Error::Math(format!("β exponent at a = {a} is not r-integral")));
        }
        entries.push(BetaEntry { a, away_from_r: away, r_adic: (num / &r2).mod_floor(&modulus) });
    }
    let g = FiniteAbelianGroup::cyclic(r);
    let mut integral = true;
    for a in 1..r as i64 {
        for b in 1..r as i64 {
            for c in 1..r as i64 {
                let v = theta_nd(&g, &[chi0_power(r, a), chi0_power(r, b), chi0_power(r, c)]);
                let e = v.evaluate(|chi| {
                    let s = if chi.is_empty() { 0 } else { (r - chi[0]) % r };
                    entries[s as usize].away_from_r.clone()
                });
                integral &= e.is_integer();
            }
        }
    }
    Ok(BetaIdele { p, r, precision: k, entries, triple_products_integral: integral })
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeClassResult {
    pub p: u64,
    pub r: u64,
    pub n_chi: i64,
    pub class_group: Vec<String>,
    pub ideal_class: IdealClass,
    pub is_free: bool,
    pub warnings: Vec<String>,
}

fn lattice_pre(p: u64, r: u64) -> Result<()> {
    if !is_prime(p) || p % 24 != 1 || !is_prime(r) || ((p - 1) / 2) % r != 0 {
        return input(format!("need p ≡ 1 mod 24 prime and r | (p − 1)/2 (p = {p}, r = {r})"));
    }
    Ok(())
}

/// `n(χ) = (p − 25)/12` and the Steinitz class `θ₂·[P_χ]` of the `χ`-part.
pub fn lattice_steinitz_class(p: u64, r: u64, opts: &ClassGroupOptions) -> Result<LatticeClassResult> {
    lattice_pre(p, r)?;
    let theta = StickelbergerElt::theta2(r, p)?;
    let cg = ClassGroup::compute(r, opts)?;
    let pc = cg.prime_class(&p_chi(r, p, 1)?, opts.budget)?;
    let class = apply_stickelberger(&theta, &pc, &cg, None)?;
    Ok(LatticeClassResult {
        p,
        r,
        n_chi: (p as i64 - 25) / 12,
        class_group: cg.invariants().iter().map(|d| d.to_string()).collect(),
        is_free: cg.is_zero(&class),
        ideal_class: class,
        warnings: theta.warnings.clone(),
    })
}

/// `θ₂[P_χ]` for every character of order `r`, by direct action and through eigenspace scalars.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterSweep {
    pub p: u64,
    pub r: u64,
    pub direct: Vec<IdealClass>,
    pub via_eigen: Vec<IdealClass>,
    pub all_equal: bool,
}

pub fn lattice_class_sweep(p: u64, r: u64, opts: &ClassGroupOptions) -> Result<CharacterSweep> {
    lattice_pre(p, r)?;
    let theta = StickelbergerElt::theta2(r, p)?;
    let cg = ClassGroup::compute(r, opts)?;
    let mut direct = Vec::new();
    let mut via_eigen = Vec::new();
    let ells: Vec<u64> = crate::arith::prime_divisors(
        crate::arith::big_to_u64(&cg.order()).ok_or_else(|| Error::Input("class number too large".into()))?,
    );
    let decomps = ells.iter().map(|&l| eigen_decompose(&cg, l, &theta)).collect::<Result<Vec<_>>>()?;
    for e in 1..r {
        let pc = cg.prime_class(&p_chi(r, p, e)?, opts.budget)?;
        direct.push(apply_stickelberger(&theta, &pc, &cg, None)?);
        let mut acc = cg.zero();
        for d in &decomps {
            acc = cg.add(&acc, &apply_via_eigen(d, &pc, &cg)?);
        }
        via_eigen.push(acc);
    }
    let all_equal = direct.iter().all(|c| *c == direct[0]) && direct == via_eigen;
    Ok(CharacterSweep { p, r, direct, via_eigen, all_equal })
}

/// `conj(θ) = sha − conj(mw) − mw` in `cg`.
pub fn bsd_relation_with(theta_class: &IdealClass, sha: &IdealClass, mw: &IdealClass, cg: &ClassGroup) -> bool {
    let lhs = cg.conj(theta_class);
    let rhs = cg.sub(&cg.sub(sha, &cg.conj(mw)), mw);
    lhs == rhs
}

/// Checks `conj(θ₂[P_χ]) = sha − conj(mw) − mw` in `Cl(Z[ζ_r, 1/2])`.
pub fn bsd_relation(p: u64, r: u64, sha: &IdealClass, mw: &IdealClass, budget: Budget) -> Result<bool> {
    lattice_pre(p, r)?;
    let opts = ClassGroupOptions { invert_two: true, budget, ..Default::default() };
    let cg = ClassGroup::compute(r, &opts)?;
    let sha = cg.class_from_coords(&sha.coords)?;
    let mw = cg.class_from_coords(&mw.coords)?;
    let theta = StickelbergerElt::theta2(r, p)?;
    let pc = cg.prime_class(&p_chi(r, p, 1)?, budget)?;
    let t = apply_stickelberger(&theta, &pc, &cg, None)?;
    Ok(bsd_relation_with(&t, &sha, &mw, &cg))
}

/// Formats `T(χ₀^{−a})` for `a = 0..r` from both the closed form and the branch data.
pub fn t_table(p: u64, r: u64) -> Result<Vec<(u64, String, String)>> {
    let bd = build_modular_branch(p, r)?;
    (0..r)
        .map(|a| {
            let s = crate::riemann_roch::t_pi_surface(&bd, &chi0_power(r, a as i64))?;
            Ok((a, rat_to_string(&t_equ1(p, r, a as i64)), rat_to_string(&s)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::riemann_roch::t_pi_surface;
    use num_traits::One;

    #[test]
    fn branch_numbers() {
        for (p, r, m) in [(241u64, 5u64, 20i64), (601, 5, 50), (1657, 23, 138)] {
            let d = modular_cover_data(p, r).unwrap();
            assert_eq!(d.d0_dinf, m);
            assert_eq!(d.d0_self, -m);
            assert_eq!(d.d0_self + d.d0_dinf, 0);
        }
        assert_eq!(modular_cover_data(241, 5).unwrap().genus_x0, 19);
        assert!(build_modular_branch(241, 7).is_err());
        assert!(build_modular_branch(251, 5).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(t_equ1(241, 5, 1), rat(7, 5));
        assert_eq!(t_equ1(241, 5, 2), rat(2, 1));
        assert_eq!(t_equ1(241, 5, 0), rat(0, 1));
    }

    #[test]
    fn closed_form_matches_surface() {
        for (p, r) in [(241u64, 5u64), (601, 5), (1657, 23)] {
            let bd = build_modular_branch(p, r).unwrap();
            for a in 0..r as i64 {
                assert_eq!(t_equ1(p, r, a), t_pi_surface(&bd, &chi0_power(r, a)).unwrap(), "({p}, {r}, {a})");
            }
        }
    }

    #[test]
    fn corrections_241() {
        let c = t_corrections(241, 5, 1, 3).unwrap();
        assert_eq!(c.t2, rat(-1, 5));
        assert_eq!(c.r_t2, BigInt::from(-1));
        assert_eq!(c.congruence_sign, "−");
        let z = t_corrections(241, 5, 0, 3).unwrap();
        assert!(z.r2_t1.is_zero() && z.t2.is_zero());
        assert!(t_corrections(1657, 5, 1, 3).is_err());
    }

    #[test]
    fn beta_241() {
        let b = beta_idele(241, 5, 3).unwrap();
        assert!(b.entries[0].away_from_r.is_zero());
        assert_eq!(b.entries[1].away_from_r, rat(-8, 5));
        assert!(b.triple_products_integral);
    }

    #[test]
    fn lattice_small_r() {
        let opts = ClassGroupOptions::default();
        let a = lattice_steinitz_class(241, 5, &opts).unwrap();
        assert_eq!((a.n_chi, a.is_free), (18, true));
        let b = lattice_steinitz_class(601, 5, &opts).unwrap();
        assert_eq!((b.n_chi, b.is_free), (48, true));
        let d = modular_cover_data(241, 5).unwrap();
        assert_eq!(a.n_chi, d.genus_x0 - 1);
    }

    #[test]
    fn bsd_truth_table() {
        let cg = ClassGroup::compute(23, &ClassGroupOptions::default()).unwrap();
        let zero = cg.zero();
        let c = cg.generators()[0].clone();
        assert!(bsd_relation_with(&zero, &zero, &zero, &cg));
        assert!(bsd_relation_with(&c, &cg.conj(&c), &zero, &cg));
        assert!(!bsd_relation_with(&c, &zero, &zero, &cg));
        let five = ClassGroup::compute(5, &ClassGroupOptions { invert_two: true, ..Default::default() }).unwrap();
        assert!(bsd_relation(241, 5, &five.zero(), &five.zero(), Budget::default()).unwrap());
        assert!(bsd_relation(241, 5, &IdealClass { coords: vec![BigInt::one()] }, &five.zero(), Budget::default()).is_err());
    }
}
