//! Dense polynomials over `F_p` and factorization of cyclotomic polynomials.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{inv_mod, mul_mod, mult_order};

/// Coefficients in ascending degree, trimmed.
pub type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &Poly) -> Option<usize> {
    if a.is_empty() { None } else { Some(a.len() - 1) }
}

pub fn add(a: &Poly, b: &Poly, p: u64) -> Poly {
    let n = a.len().max(b.len());
    let c = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(c)
}

pub fn sub(a: &Poly, b: &Poly, p: u64) -> Poly {
    let n = a.len().max(b.len());
    let c = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(c)
}

pub fn mul(a: &Poly, b: &Poly, p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(c)
}

pub fn divmod(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let inv = inv_mod(b[db] as i128, p as i128).expect("non-invertible leading coefficient") as u64;
    let mut r = a.clone();
    if r.len() <= db {
        return (vec![], trim(r));
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = mul_mod(r[i], inv, p);
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for j in 0..=db {
            let t = mul_mod(c, b[j], p);
            r[i - db + j] = (r[i - db + j] + p - t) % p;
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem(a: &Poly, b: &Poly, p: u64) -> Poly {
    divmod(a, b, p).1
}

pub fn monic(a: &Poly, p: u64) -> Poly {
    match a.last() {
        None => vec![],
        Some(&l) => {
            let inv = inv_mod(l as i128, p as i128).expect("non-invertible leading coefficient") as u64;
            a.iter().map(|&x| mul_mod(x, inv, p)).collect()
        }
    }
}

pub fn gcd(a: &Poly, b: &Poly, p: u64) -> Poly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn powmod(base: &Poly, e: &BigUint, m: &Poly, p: u64) -> Poly {
    let mut result = vec![1u64];
    let base = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        result = rem(&mul(&result, &result, p), m, p);
        if e.bit(i) {
            result = rem(&mul(&result, &base, p), m, p);
        }
    }
    rem(&result, m, p)
}

/// Splits a squarefree monic `f` whose irreducible factors all have degree `d`.
pub fn equal_degree_factor(f: &Poly, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = degree(f).unwrap_or(0);
    if n == 0 {
        return vec![];
    }
    if n == d {
        return vec![monic(f, p)];
    }
    loop {
        let a: Poly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.is_empty() {
            continue;
        }
        let g = gcd(&a, f, p);
        let candidate = if degree(&g).unwrap_or(0) > 0 {
            g
        } else if p == 2 {
            let mut t = a.clone();
            let mut sq = a.clone();
            for _ in 1..d {
                sq = rem(&mul(&sq, &sq, p), f, p);
                t = add(&t, &sq, p);
            }
            gcd(&t, f, p)
        } else {
            let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
            let b = powmod(&a, &e, f, p);
            gcd(&sub(&b, &vec![1], p), f, p)
        };
        let dg = degree(&candidate).unwrap_or(0);
        if dg > 0 && dg < n {
            let other = monic(&divmod(f, &candidate, p).0, p);
            let mut out = equal_degree_factor(&candidate, d, p, rng);
            out.extend(equal_degree_factor(&other, d, p, rng));
            return out;
        }
    }
}

/// `Φ_r mod p` for prime `r`.
pub fn cyclotomic_prime(r: u64, p: u64) -> Poly {
    vec![1 % p; r as usize]
}

/// Monic irreducible factors of `Φ_r` mod `p` (`p ≠ r`), sorted. Linear
/// factors come out ordered by their root.
pub fn factor_cyclotomic(r: u64, p: u64) -> Vec<Poly> {
    let d = mult_order(p % r, r) as usize;
    let phi = cyclotomic_prime(r, p);
    let mut out = if d == 1 {
        let roots = roots_of_unity(r, p);
        roots.into_iter().map(|c| vec![(p - c) % p, 1]).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(r * 1_000_003 + p);
        let mut v = equal_degree_factor(&phi, d, p, &mut rng);
        v.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        v
    };
    if d == 1 {
        out.sort_by_key(|f| (p - f[0]) % p);
    }
    out
}

/// The elements of exact order `r` in `F_p^*`, ascending (`r | p-1`).
pub fn roots_of_unity(r: u64, p: u64) -> Vec<u64> {
    assert_eq!((p - 1) % r, 0);
    let g = crate::arith::primitive_root(p);
    let z = crate::arith::pow_mod(g, (p - 1) / r, p);
    let mut v: Vec<u64> = (1..r).map(|k| crate::arith::pow_mod(z, k, p)).collect();
    v.sort_unstable();
    v
}

pub fn is_zero(a: &Poly) -> bool {
    a.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi7_mod_2() {
        let f = factor_cyclotomic(7, 2);
        assert_eq!(f, vec![vec![1, 1, 0, 1], vec![1, 0, 1, 1]]);
    }

    #[test]
    fn factors_multiply_back() {
        for (r, p) in [(23u64, 2u64), (23, 3), (11, 3), (13, 5), (23, 47), (7, 13)] {
            let fs = factor_cyclotomic(r, p);
            let d = mult_order(p % r, r) as usize;
            assert_eq!(fs.len(), (r as usize - 1) / d);
            let prod = fs.iter().fold(vec![1u64], |acc, f| mul(&acc, f, p));
            assert_eq!(prod, cyclotomic_prime(r, p));
        }
    }
}
