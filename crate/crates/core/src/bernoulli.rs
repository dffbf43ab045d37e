//! Bernoulli numbers, generalized Bernoulli numbers and the `e(k)` table.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{binomial, pow_mod, rat_int, rat_mod, Rat};
use crate::cyclo::CycNum;
use crate::error::{Error, Result};

fn cache() -> &'static Mutex<Vec<Rat>> {
    static CACHE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![rat_int(1)]))
}

/// `B_k` with the convention `B_1 = -1/2`.
pub fn bernoulli(k: usize) -> Rat {
    let mut b = cache().lock().expect("bernoulli cache poisoned");
    while b.len() <= k {
        let n = b.len();
        if n > 1 && n % 2 == 1 {
            b.push(Rat::zero());
            continue;
        }
        // Σ_{j=0}^{n} C(n+1, j) B_j = 0
        let mut s = Rat::zero();
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                s += bj * Rat::from_integer(binomial(n as u64 + 1, j as u64));
            }
        }
        b.push(-s / rat_int(n as i64 + 1));
    }
    b[k].clone()
}

/// `B_k mod p`. Uses `Σ_{j<p} j^k ≡ p·B_k (mod p²)` for even `2 ≤ k ≤ p-3`,
/// otherwise reduces the exact value.
pub fn bernoulli_mod(k: usize, p: u64) -> Result<u64> {
    if p < 2 {
        return Err(Error::Input(format!("modulus {p} too small")));
    }
    if p >= 5 && k >= 2 && k % 2 == 0 && (k as u64) + 3 <= p {
        let p2 = p * p;
        let s = (1..p).fold(0u64, |acc, j| (acc + pow_mod(j, k as u64, p2)) % p2);
        debug_assert_eq!(s % p, 0);
        return Ok(s / p);
    }
    let b = bernoulli(k);
    rat_mod(&b, &BigInt::from(p))
        .and_then(|v| v.to_u64())
        .ok_or_else(|| Error::Math(format!("B_{k} is not {p}-integral")))
}

/// Von Staudt–Clausen: the denominator of `B_k` (k even) is `Π_{(p-1)|k} p`.
pub fn staudt_clausen_denominator(k: usize) -> BigInt {
    assert!(k >= 2 && k % 2 == 0);
    crate::arith::primes_up_to(k as u64 + 1)
        .into_iter()
        .filter(|p| k as u64 % (p - 1) == 0)
        .fold(BigInt::from(1), |acc, p| acc * p)
}

/// `e(k)`: 1 for `k = 1`, `|num(B_k/k)|` for even `k`; odd `k > 1` needs `vandiver`.
pub fn e_of_k(k: usize, vandiver: bool) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::Input("e(k) needs k >= 1".into()));
    }
    if k == 1 {
        return Ok(BigInt::from(1));
    }
    if k % 2 == 0 {
        let q = bernoulli(k) / rat_int(k as i64);
        return Ok(q.numer().abs());
    }
    if vandiver {
        Ok(BigInt::from(1))
    } else {
        Err(Error::Unknown(format!(
            "e({k}) for odd k depends on K-group data; pass the Vandiver assumption to set it to 1"
        )))
    }
}

/// Irregularity test: does `r` divide the numerator of `B_k`?
pub fn herbrand_test(r: u64, k: usize) -> Result<bool> {
    if r < 5 || !crate::arith::is_prime(r) {
        return Err(Error::Input(format!("{r} is not a prime >= 5")));
    }
    if k % 2 == 1 || k < 2 || k as u64 + 3 > r {
        return Err(Error::Input(format!("k = {k} outside even range [2, {}]", r - 3)));
    }
    Ok(bernoulli_mod(k, r)? == 0)
}

/// Bernoulli polynomial `B_k(x) = Σ_j C(k,j) B_j x^{k-j}`.
pub fn bernoulli_poly(k: usize, x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    let mut xp = rat_int(1);
    // ascending powers of x pair with descending j
    let mut terms = vec![Rat::zero(); k + 1];
    for (i, t) in terms.iter_mut().enumerate() {
        *t = xp.clone();
        if i < k {
            xp = &xp * x;
        }
    }
    for j in 0..=k {
        let c = Rat::from_integer(binomial(k as u64, j as u64));
        acc += c * bernoulli(j) * &terms[k - j];
    }
    acc
}

/// A Dirichlet character `χ(a) = ζ_order^{values[a mod f]}`, `None` off the units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletChar {
    pub modulus: u64,
    pub order: u64,
    pub values: Vec<Option<u64>>,
}

impl DirichletChar {
    pub fn trivial() -> Self {
        DirichletChar { modulus: 1, order: 1, values: vec![Some(0)] }
    }

    /// `χ(g^t) = ζ_{p-1}^{j t}` for the smallest primitive root `g` mod prime `p`.
    pub fn from_prime(p: u64, j: u64) -> Self {
        let g = crate::arith::primitive_root(p);
        let n = p - 1;
        let order = n / j.gcd(&n);
        let step = n / order;
        let mut values = vec![None; p as usize];
        let mut x = 1u64;
        for t in 0..n {
            values[x as usize] = Some((j * t % n) / step);
            x = x * g % p;
        }
        DirichletChar { modulus: p, order, values }
    }

    pub fn value(&self, a: u64) -> Option<CycNum> {
        self.values[(a % self.modulus) as usize].map(|e| CycNum::zeta_pow(self.order, e as i64))
    }

    pub fn is_odd(&self) -> bool {
        match self.values[(self.modulus - 1) as usize] {
            Some(e) => 2 * e == self.order,
            None => false,
        }
    }

    /// Conductor by testing triviality on `a ≡ 1 mod d`.
    pub fn conductor(&self) -> u64 {
        let f = self.modulus;
        for d in crate::arith::divisors(f) {
            let induced = (0..f).all(|a| {
                a % d != 1 % d || self.values[a as usize].is_none_or(|e| e == 0)
            });
            if induced {
                return d;
            }
        }
        f
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }
}

/// `B_{k,χ} = f^{k-1} Σ_{a=1}^{f} χ(a) B_k(a/f)` for primitive `χ` of conductor `f`.
pub fn gen_bernoulli(k: usize, chi: &DirichletChar) -> Result<CycNum> {
    if !chi.is_primitive() {
        return Err(Error::Input("character is not primitive".into()));
    }
    let f = chi.modulus;
    let m = chi.order;
    let mut acc = CycNum::from_int(m, 0);
    for a in 1..=f {
        if let Some(v) = chi.value(a) {
            let b = bernoulli_poly(k, &Rat::new(BigInt::from(a), BigInt::from(f)));
            acc = acc.add(&v.scale(&b));
        }
    }
    let fk = Rat::new(BigInt::from(f).pow(k as u32), BigInt::from(f));
    Ok(acc.scale(&fk))
}
