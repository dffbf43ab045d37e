//! Ideals of `Z[ζ_r]` for an odd prime `r`, prime ideals and valuations.

mod classgroup;
mod lattice;

pub use classgroup::{find_generator, Budget, ClassGroup, ClassGroupOptions, ClassGroupReport, IdealClass};
pub use lattice::{dual_class, s_chi_finite, steinitz_rim, ClassExpr, GLattice, SteinitzResult};

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{inv_mod, is_prime, mult_order, pow_mod, primitive_root};
use crate::cyclo::CycInt;
use crate::error::{input, Result};
use crate::fpoly::{self, Poly};
use crate::linalg::{IncrementalHnf, Row};

pub(crate) fn check_prime_r(r: u64) -> Result<()> {
    if r < 3 || !is_prime(r) {
        return input(format!("r = {r} must be an odd prime"));
    }
    Ok(())
}

/// A nonzero ideal of `Z[ζ_r]`, stored as the canonical HNF of its Z-basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CycIdeal {
    pub r: u64,
    #[serde(with = "crate::serde_big::matrix")]
    pub basis: Vec<Row>,
    #[serde(skip)]
    pub two_element: Option<(BigInt, CycInt)>,
}

impl CycIdeal {
    /// The ideal generated by `gens`; `multiple` is any nonzero integer known to lie in it.
    pub fn from_generators(r: u64, gens: &[CycInt], multiple: Option<BigInt>) -> Result<Self> {
        let n = (r - 1) as usize;
        let d = match multiple {
            Some(d) => d.abs(),
            None => match gens.iter().find(|g| !g.is_zero()) {
                Some(g) => g.norm().abs(),
                None => return input("the zero ideal is not supported"),
            },
        };
        if d.is_zero() {
            return input("ideal multiple must be nonzero");
        }
        let mut h = IncrementalHnf::with_modulus(n, d);
        for g in gens {
            let mut x = g.clone();
            for _ in 0..n {
                h.insert(x.coeffs.clone());
                x = x.mul(&CycInt::zeta_pow(r, 1));
            }
        }
        Ok(CycIdeal { r, basis: h.canonical(), two_element: None })
    }

    pub fn unit(r: u64) -> Self {
        Self::from_generators(r, &[CycInt::one(r)], Some(BigInt::one())).expect("unit ideal")
    }

    pub fn principal(x: &CycInt) -> Result<Self> {
        let mut i = Self::from_generators(x.m, &[x.clone()], None)?;
        i.two_element = Some((i.norm(), x.clone()));
        Ok(i)
    }

    pub fn degree(&self) -> usize {
        (self.r - 1) as usize
    }

    pub fn norm(&self) -> BigInt {
        self.basis.iter().enumerate().map(|(i, row)| row[i].clone()).product()
    }

    pub fn elements(&self) -> Vec<CycInt> {
        self.basis.iter().map(|row| CycInt::from_coeffs(self.r, row.clone())).collect()
    }

    pub fn contains(&self, x: &CycInt) -> bool {
        let mut h = IncrementalHnf::new(self.degree());
        for row in &self.basis {
            h.insert(row.clone());
        }
        h.contains(&x.coeffs)
    }

    /// Closure under multiplication by `ζ`, checked on the basis.
    pub fn is_zeta_stable(&self) -> bool {
        let z = CycInt::zeta_pow(self.r, 1);
        self.elements().iter().all(|b| self.contains(&b.mul(&z)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.r, other.r);
        let d = self.norm() * other.norm();
        let a = self.generators();
        let b = other.generators();
        let mut gens = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                gens.push(x.mul(y));
            }
        }
        Self::from_generators(self.r, &gens, Some(d)).expect("product of nonzero ideals")
    }

    /// A short generating set: the two-element form when cached, else the basis.
    pub fn generators(&self) -> Vec<CycInt> {
        match &self.two_element {
            Some((a, x)) => vec![CycInt::from_int(self.r, a.clone()), x.clone()],
            None => self.elements(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::unit(self.r);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn galois(&self, a: u64) -> Self {
        let gens: Vec<CycInt> = self.generators().iter().map(|g| g.galois(a)).collect();
        Self::from_generators(self.r, &gens, Some(self.norm())).expect("conjugate ideal")
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }
}

/// A prime ideal `(p, g(ζ))`, with the cofactor `h = Φ_r / g mod p` used for valuations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub r: u64,
    pub p: u64,
    pub f: u32,
    pub g: Poly,
    cofactor: CycInt,
}

impl PrimeIdeal {
    fn new(r: u64, p: u64, g: Poly) -> Self {
        let phi = fpoly::cyclotomic_prime(r, p);
        let h = fpoly::divmod(&phi, &g, p).0;
        let f = (g.len() - 1) as u32;
        let n = (r - 1) as usize;
        let mut coeffs: Vec<BigInt> = h.iter().map(|&c| BigInt::from(c)).collect();
        coeffs.resize(n.max(coeffs.len()), BigInt::zero());
        let cofactor = CycInt::from_coeffs(r, crate::cyclo::field(r).reduce(coeffs));
        PrimeIdeal { r, p, f, g, cofactor }
    }

    /// The ramified prime `(1 − ζ)` above `r`.
    pub fn ramified(r: u64) -> Self {
        Self::new(r, r, vec![r - 1, 1])
    }

    pub fn is_ramified(&self) -> bool {
        self.p == self.r
    }

    pub fn norm(&self) -> BigInt {
        BigInt::from(self.p).pow(self.f)
    }

    /// `g(ζ)` with coefficients lifted to `[0, p)`.
    pub fn g_element(&self) -> CycInt {
        let mut v: Vec<BigInt> = self.g.iter().map(|&c| BigInt::from(c)).collect();
        v.resize(v.len().max((self.r - 1) as usize), BigInt::zero());
        CycInt::from_coeffs(self.r, crate::cyclo::field(self.r).reduce(v))
    }

    pub fn ideal(&self) -> CycIdeal {
        let mut i = CycIdeal::from_generators(
            self.r,
            &[CycInt::from_int(self.r, self.p), self.g_element()],
            Some(BigInt::from(self.p)),
        )
        .expect("prime ideal");
        i.two_element = Some((BigInt::from(self.p), self.g_element()));
        i
    }

    /// The root `c` when `f = 1`, so that the prime is `(p, ζ − c)`.
    pub fn root(&self) -> Option<u64> {
        (self.f == 1).then(|| (self.p - self.g[0]) % self.p)
    }

    pub fn valuation(&self, x: &CycInt) -> u32 {
        if x.is_zero() {
            return u32::MAX;
        }
        let p = BigInt::from(self.p);
        let mut y = x.clone();
        let mut v = 0;
        loop {
            let t = y.mul(&self.cofactor);
            if !t.divisible_by(&p) {
                return v;
            }
            y = t.div_exact(&p);
            v += 1;
        }
    }

    pub fn ideal_valuation(&self, i: &CycIdeal) -> u32 {
        i.generators().iter().filter(|g| !g.is_zero()).map(|g| self.valuation(g)).min().unwrap_or(0)
    }

    /// `σ_a` applied to this prime, as the index of the matching factor in `primes`.
    pub fn galois_index(&self, a: u64, primes: &[PrimeIdeal]) -> usize {
        if self.is_ramified() {
            return primes.iter().position(|q| q.is_ramified()).expect("ramified prime listed");
        }
        // g(x^a) vanishes exactly on the roots of the image factor
        let mut ga = vec![0u64; ((self.g.len() - 1) as u64 * a) as usize + 1];
        for (i, &c) in self.g.iter().enumerate() {
            ga[i * a as usize] = c;
        }
        primes
            .iter()
            .position(|q| q.p == self.p && fpoly::rem(&ga, &q.g, self.p).is_empty())
            .expect("Galois image among the listed primes")
    }
}

/// The primes above `p ≠ r`, sorted (linear ones by root).
pub fn split_prime(r: u64, p: u64) -> Result<Vec<PrimeIdeal>> {
    check_prime_r(r)?;
    if !is_prime(p) {
        return input(format!("{p} is not prime"));
    }
    if p == r {
        return input(format!("{p} = r is totally ramified: (r) = (1 - ζ)^(r-1)"));
    }
    Ok(fpoly::factor_cyclotomic(r, p).into_iter().map(|g| PrimeIdeal::new(r, p, g)).collect())
}

pub fn residue_degree(r: u64, p: u64) -> u32 {
    if p == r { 1 } else { mult_order(p % r, r) as u32 }
}

/// The prime `P_χ` over `p ≡ 1 mod r` for `χ(g) = ζ_r^e`, `g` the least primitive root mod `p`:
/// the unique prime with `χ(x) ≡ x^{(p−1)/r} mod P_χ`.
pub fn p_chi(r: u64, p: u64, e: u64) -> Result<PrimeIdeal> {
    check_prime_r(r)?;
    if !is_prime(p) || p % r != 1 {
        return input(format!("p = {p} must be a prime congruent to 1 mod {r}"));
    }
    if e % r == 0 {
        return input(format!("χ with exponent {e} does not have order {r}"));
    }
    let g = primitive_root(p);
    let t = pow_mod(g, (p - 1) / r, p);
    let e_inv = inv_mod((e % r) as i128, r as i128).expect("e invertible mod r") as u64;
    let c = pow_mod(t, e_inv, p);
    Ok(PrimeIdeal::new(r, p, vec![(p - c) % p, 1]))
}

/// Roots `c` of `Φ_r mod p` satisfying `c^{e·ind_g(x)} ≡ x^{(p−1)/r}` for all units `x`, by exhaustion.
pub fn p_chi_brute_force(r: u64, p: u64, e: u64) -> Vec<u64> {
    let g = primitive_root(p);
    fpoly::roots_of_unity(r, p)
        .into_iter()
        .filter(|&c| {
            let mut x = 1u64;
            (0..p - 1).all(|ind| {
                let ok = pow_mod(c, (e * ind) % r, p) == pow_mod(x, (p - 1) / r, p);
                x = x * g % p;
                ok
            })
        })
        .collect()
}

pub(crate) fn crt_primes(r: u64) -> Vec<(u64, u64)> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<(u64, u64)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("prime cache poisoned");
    guard
        .entry(r)
        .or_insert_with(|| {
            let mut out = Vec::new();
            let mut q = (1u64 << 61) / r * r + 1;
            while out.len() < 64 {
                q -= r;
                if q % 2 == 1 && is_prime(q) {
                    let rho = pow_mod(primitive_root_fast(q), (q - 1) / r, q);
                    out.push((q, rho));
                }
            }
            out
        })
        .clone()
}

fn primitive_root_fast(q: u64) -> u64 {
    let factors = crate::arith::prime_divisors(q - 1);
    (2..).find(|&g| factors.iter().all(|&f| pow_mod(g, (q - 1) / f, q) != 1)).expect("primitive root")
}

/// `N(x)` via evaluation at the roots of unity modulo several primes and CRT.
pub fn norm_fast(x: &CycInt) -> BigInt {
    let r = x.m;
    if x.is_zero() {
        return BigInt::zero();
    }
    let t2 = x.t2_prime().to_f64().unwrap_or(f64::MAX).max(1.0);
    let bits = ((r - 1) as f64 / 2.0) * (t2 / (r - 1) as f64).log2().max(0.0) + 4.0;
    let primes = crt_primes(r);
    let needed = (bits / 60.0).ceil() as usize + 1;
    if needed > primes.len() {
        return x.norm();
    }
    let mut acc = BigInt::zero();
    let mut modulus = BigInt::one();
    for &(q, rho) in primes.iter().take(needed) {
        let qb = BigInt::from(q);
        let c: Vec<u64> = x.coeffs.iter().map(|a| a.mod_floor(&qb).to_u64().unwrap()).collect();
        let mut prod = 1u64;
        let mut z = 1u64;
        for _ in 1..r {
            z = crate::arith::mul_mod(z, rho, q);
            let mut v = 0u64;
            for &ci in c.iter().rev() {
                v = (crate::arith::mul_mod(v, z, q) + ci) % q;
            }
            prod = crate::arith::mul_mod(prod, v, q);
        }
        // acc ≡ prod mod q, keeping acc mod modulus
        let diff = (BigInt::from(prod) - &acc).mod_floor(&qb);
        let inv = crate::arith::inv_mod_big(&modulus.mod_floor(&qb), &qb).expect("coprime moduli");
        let k = (diff * inv).mod_floor(&qb);
        acc += &modulus * k;
        modulus *= qb;
    }
    let half: BigInt = &modulus >> 1;
    if acc > half {
        acc - modulus
    } else {
        acc
    }
}
