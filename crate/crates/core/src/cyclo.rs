//! Exact arithmetic in `Z[ζ_m]` and `Q(ζ_m)` via polynomials modulo `Φ_m`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{euler_phi, is_prime, Rat};

/// The cyclotomic field `Q(ζ_m)` with its defining polynomial.
#[derive(Debug, PartialEq, Eq)]
pub struct CycloField {
    pub m: u64,
    pub degree: usize,
    /// Coefficients of `Φ_m`, lowest degree first; monic.
    pub phi: Vec<i64>,
    prime: bool,
}

fn cyclotomic_poly(m: u64) -> Vec<i64> {
    // Φ_m = (x^m - 1) / Π_{d | m, d < m} Φ_d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let div = cyclotomic_poly(d);
            num = poly_exact_div(&num, &div);
        }
    }
    num
}

fn poly_exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db];
        q[i] = c;
        for j in 0..=db {
            rem[i + j] -= c * b[j];
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Shared handle for `Q(ζ_m)`; cached per `m`.
pub fn field(m: u64) -> Arc<CycloField> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("field cache poisoned");
    guard
        .entry(m)
        .or_insert_with(|| {
            assert!(m >= 1, "root order must be positive");
            let phi = cyclotomic_poly(m);
            Arc::new(CycloField {
                m,
                degree: euler_phi(m) as usize,
                phi,
                prime: is_prime(m) && m > 2,
            })
        })
        .clone()
}

impl CycloField {
    /// Reduces an arbitrary-length coefficient vector modulo `Φ_m`.
    pub fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let n = self.degree;
        if self.prime {
            let m = self.m as usize;
            if v.len() > m {
                let tail = v.split_off(m);
                for (i, c) in tail.into_iter().enumerate() {
                    v[i % m] += c;
                }
            }
            v.resize(m, BigInt::zero());
            let top = v.pop().unwrap();
            if !top.is_zero() {
                for c in v.iter_mut() {
                    *c -= &top;
                }
            }
            return v;
        }
        for i in (n..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[i]);
            for j in 0..n {
                let pj = self.phi[j];
                if pj != 0 {
                    v[i - n + j] -= &c * pj;
                }
            }
        }
        v.truncate(n);
        v.resize(n, BigInt::zero());
        v
    }

    /// Folds exponents mod `m` before reducing.
    pub fn reduce_cyclic(&self, v: &[(u64, BigInt)]) -> Vec<BigInt> {
        let mut w = vec![BigInt::zero(); self.m as usize];
        for (e, c) in v {
            w[(*e % self.m) as usize] += c;
        }
        self.reduce(w)
    }
}

/// An element of `Z[ζ_m]` in the power basis `1, ζ, …, ζ^{φ(m)-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    pub m: u64,
    pub coeffs: Vec<BigInt>,
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "Z[ζ_{}]({})", self.m, c.join(","))
    }
}

impl CycInt {
    pub fn field(&self) -> Arc<CycloField> {
        field(self.m)
    }

    pub fn zero(m: u64) -> Self {
        let d = field(m).degree;
        CycInt { m, coeffs: vec![BigInt::zero(); d] }
    }

    pub fn from_int(m: u64, n: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(m);
        x.coeffs[0] = n.into();
        x
    }

    pub fn one(m: u64) -> Self {
        Self::from_int(m, 1)
    }

    /// `ζ_m^k`.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as u64;
        let f = field(m);
        CycInt { m, coeffs: f.reduce_cyclic(&[(e, BigInt::one())]) }
    }

    /// From coefficients on `ζ^0, ζ^1, …` of any length.
    pub fn from_coeffs(m: u64, v: Vec<BigInt>) -> Self {
        let f = field(m);
        let coeffs = if v.len() == f.degree { v } else { f.reduce(v) };
        CycInt { m, coeffs }
    }

    pub fn from_i64s(m: u64, v: &[i64]) -> Self {
        Self::from_coeffs(m, v.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational integer this element equals, if it lies in `Z`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m);
        CycInt {
            m: self.m,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m);
        CycInt {
            m: self.m,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CycInt { m: self.m, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycInt { m: self.m, coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m);
        let f = self.field();
        let n = f.degree;
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CycInt { m: self.m, coeffs: f.reduce(prod) }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Galois automorphism `σ_a: ζ ↦ ζ^a`.
    pub fn galois(&self, a: u64) -> Self {
        let f = self.field();
        let a = a % self.m;
        assert!(a.gcd(&self.m) == 1, "σ_a needs a unit");
        let terms: Vec<(u64, BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| ((i as u64 * a) % self.m, c.clone()))
            .collect();
        CycInt { m: self.m, coeffs: f.reduce_cyclic(&terms) }
    }

    /// Product of the conjugates other than the identity.
    pub fn conjugate_product(&self) -> Self {
        let mut acc = Self::one(self.m);
        for a in 2..self.m.max(2) {
            if a.gcd(&self.m) == 1 {
                acc = acc.mul(&self.galois(a));
            }
        }
        acc
    }

    /// Absolute norm to `Q`.
    pub fn norm(&self) -> BigInt {
        let p = self.mul(&self.conjugate_product());
        p.as_integer().expect("norm lies in Z").clone()
    }

    /// Content divisibility: every coefficient divisible by `d`.
    pub fn divisible_by(&self, d: &BigInt) -> bool {
        self.coeffs.iter().all(|c| c.is_multiple_of(d))
    }

    pub fn div_exact(&self, d: &BigInt) -> Self {
        CycInt { m: self.m, coeffs: self.coeffs.iter().map(|c| c / d).collect() }
    }

    /// Trace form `Σ_σ |σ(x)|²` for prime `m`: `m Σc² − (Σc)²`.
    pub fn t2_prime(&self) -> BigInt {
        let s: BigInt = self.coeffs.iter().sum();
        let q: BigInt = self.coeffs.iter().map(|c| c * c).sum();
        q * BigInt::from(self.m) - &s * &s
    }

    pub fn max_abs(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

/// An element of `Q(ζ_m)` as an integral numerator over a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    pub num: CycInt,
    pub den: BigInt,
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/{}", self.num, self.den)
    }
}

impl CycNum {
    fn normalized(num: CycInt, den: BigInt) -> Self {
        assert!(!den.is_zero());
        let mut g = den.clone();
        for c in &num.coeffs {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if den.is_negative() {
            g = -g;
        }
        if g.is_one() {
            CycNum { num, den }
        } else {
            CycNum { num: num.div_exact(&g), den: den / g }
        }
    }

    pub fn m(&self) -> u64 {
        self.num.m
    }

    pub fn from_int(m: u64, n: i64) -> Self {
        CycNum { num: CycInt::from_int(m, n), den: BigInt::one() }
    }

    pub fn one(m: u64) -> Self {
        Self::from_int(m, 1)
    }

    pub fn from_rat(m: u64, q: &Rat) -> Self {
        CycNum { num: CycInt::from_int(m, q.numer().clone()), den: q.denom().clone() }
    }

    pub fn from_cycint(x: CycInt) -> Self {
        CycNum { num: x, den: BigInt::one() }
    }

    pub fn zeta_pow(m: u64, k: i64) -> Self {
        Self::from_cycint(CycInt::zeta_pow(m, k))
    }

    /// Rational coefficients, lowest degree first.
    pub fn coeffs(&self) -> Vec<Rat> {
        self.num.coeffs.iter().map(|c| Rat::new(c.clone(), self.den.clone())).collect()
    }

    pub fn from_rat_coeffs(m: u64, v: &[Rat]) -> Self {
        let den = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let num: Vec<BigInt> = v.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        Self::normalized(CycInt::from_coeffs(m, num), den)
    }

    /// Re-embeds into `Q(ζ_n)` for a multiple `n` of `m`.
    pub fn lift(&self, n: u64) -> Self {
        let m = self.m();
        if n == m {
            return self.clone();
        }
        assert!(n % m == 0, "target root order must be a multiple");
        let k = n / m;
        let terms: Vec<(u64, BigInt)> =
            self.num.coeffs.iter().enumerate().map(|(i, c)| (i as u64 * k, c.clone())).collect();
        let coeffs = field(n).reduce_cyclic(&terms);
        CycNum { num: CycInt { m: n, coeffs }, den: self.den.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn as_rational(&self) -> Option<Rat> {
        self.num.as_integer().map(|n| Rat::new(n.clone(), self.den.clone()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let num = self.num.scale(&o.den).add(&o.num.scale(&self.den));
        Self::normalized(num, &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        CycNum { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::normalized(self.num.mul(&o.num), &self.den * &o.den)
    }

    pub fn scale(&self, q: &Rat) -> Self {
        Self::normalized(self.num.scale(q.numer()), &self.den * q.denom())
    }

    /// Multiplicative inverse via the product of the other conjugates.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let c = self.num.conjugate_product();
        let n = self.num.mul(&c);
        let n = n.as_integer().expect("norm is rational").clone();
        Some(Self::normalized(c.scale(&self.den), n))
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Some(Self::normalized(base.num.pow(k), base.den.pow(k as u32)))
    }

    pub fn galois(&self, a: u64) -> Self {
        CycNum { num: self.num.galois(a), den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(field(1).phi, vec![-1, 1]);
        assert_eq!(field(2).phi, vec![1, 1]);
        assert_eq!(field(6).phi, vec![1, -1, 1]);
        assert_eq!(field(12).phi, vec![1, 0, -1, 0, 1]);
        assert_eq!(field(55).degree, 40);
    }

    #[test]
    fn roots_of_unity_have_the_right_order() {
        for m in [1u64, 2, 3, 4, 6, 7, 12, 15] {
            let z = CycInt::zeta_pow(m, 1);
            assert!(z.pow(m).is_one());
            for k in 1..m {
                if m % k == 0 {
                    assert!(!z.pow(k).is_one() || k == m, "m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn inverse_and_norm() {
        let x = CycNum::from_cycint(CycInt::from_i64s(7, &[2, -1, 0, 3, 0, 1]));
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
        assert_eq!(CycInt::from_i64s(5, &[1, -1, 0, 0]).norm(), BigInt::from(5));
    }

    #[test]
    fn lift_is_a_ring_map() {
        let a = CycNum::zeta_pow(3, 1);
        let b = a.lift(12);
        assert_eq!(b, CycNum::zeta_pow(12, 4));
        assert!(b.pow(3).unwrap().is_one());
    }
}
