//! Rigid, symmetric and cocycle conditions on character tables, idèle-style
//! local data, and the kernel bound for `Θ_n`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{prime_divisors, val_big, Rat};
use crate::bernoulli::e_of_k;
use crate::error::{input, Error, Result};
use crate::group_algebra::{lambda_parts, lambda_z, CharTable, FiniteAbelianGroup, Radix, SigmaElt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Rigid,
    Symmetric,
    Cocycle,
}

/// A character tuple at which a condition fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub condition: Condition,
    pub character: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubicVerdict {
    pub rigid: bool,
    pub symmetric: bool,
    pub cocycle: bool,
    pub witnesses: Vec<Witness>,
}

impl CubicVerdict {
    pub fn is_n_cubic(&self) -> bool {
        self.rigid && self.symmetric && self.cocycle
    }
}

pub fn is_rigid(a: &CharTable) -> Option<Witness> {
    let trivial = vec![0u64; a.group.rank() * a.n];
    (!a.get(&trivial).is_one()).then(|| Witness { condition: Condition::Rigid, character: trivial })
}

/// Checks invariance under adjacent transpositions, which generate `S_n`.
pub fn is_symmetric(a: &CharTable) -> Option<Witness> {
    let k = a.group.rank();
    let radix = a.radix();
    for (idx, v) in a.values.iter().enumerate() {
        let chi = radix.vector(idx);
        for i in 0..a.n.saturating_sub(1) {
            let mut swapped = chi.clone();
            for f in 0..k {
                swapped.swap(i * k + f, (i + 1) * k + f);
            }
            if a.get(&swapped) != v {
                return Some(Witness { condition: Condition::Symmetric, character: chi });
            }
        }
    }
    None
}

/// The four-term condition at every character of `G^{n+1}`.
pub fn is_cocycle(a: &CharTable) -> Result<Option<Witness>> {
    if a.n < 2 {
        return input("the cocycle condition needs n >= 2");
    }
    let z = SigmaElt::cocycle(&a.group, a.n);
    Ok(first_nontrivial(&z, a).map(|character| Witness { condition: Condition::Cocycle, character }))
}

fn first_nontrivial(z: &SigmaElt, a: &CharTable) -> Option<Vec<u64>> {
    let terms = z.terms();
    let radix = Radix::new(z.group.power_orders(z.s));
    (0..radix.size()).map(|i| radix.vector(i)).find(|psi| {
        let (pos, neg) = lambda_parts(&terms, a, psi);
        pos != neg
    })
}

pub fn check_cubic(a: &CharTable) -> Result<CubicVerdict> {
    let mut witnesses = vec![];
    let rigid = is_rigid(a);
    let symmetric = is_symmetric(a);
    let cocycle = is_cocycle(a)?;
    let verdict = CubicVerdict {
        rigid: rigid.is_none(),
        symmetric: symmetric.is_none(),
        cocycle: cocycle.is_none(),
        witnesses: vec![],
    };
    witnesses.extend(rigid);
    witnesses.extend(symmetric);
    witnesses.extend(cocycle);
    Ok(CubicVerdict { witnesses, ..verdict })
}

/// `λ_z(a) = 1` for every `z ∈ V`, after checking `z · s_n = 0`.
pub fn is_v_cubic(a: &CharTable, v: &[SigmaElt]) -> Result<Option<(usize, Vec<u64>)>> {
    let s_n = SigmaElt::s_n(&a.group, a.n);
    for (i, z) in v.iter().enumerate() {
        if z.r != a.n || z.group != a.group {
            return input(format!("element {i} of V does not act on tables of G^{}", a.n));
        }
        if !z.mul(&s_n).is_zero() {
            return Err(Error::Input(format!("element {i} of V does not satisfy z·s_n = 0")));
        }
    }
    for (i, z) in v.iter().enumerate() {
        if let Some(psi) = first_nontrivial(z, a) {
            return Ok(Some((i, psi)));
        }
    }
    Ok(None)
}

/// The set `V` whose `V`-cubic elements are exactly the `n`-cubic ones.
pub fn cubic_v(group: &FiniteAbelianGroup, n: usize) -> Vec<SigmaElt> {
    let mut v = vec![SigmaElt::unit(group, n)];
    for i in 0..n.saturating_sub(1) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, i + 1);
        v.push(SigmaElt::permutation_difference(group, &perm));
    }
    if n >= 2 {
        v.push(SigmaElt::cocycle(group, n));
    }
    v
}

/// A local component: exact unit part and a rational valuation per character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalElt {
    pub unit: CharTable,
    pub valuation: Vec<Rat>,
}

impl LocalElt {
    pub fn one(group: &FiniteAbelianGroup, n: usize) -> Self {
        let unit = CharTable::one(group, n);
        let size = unit.values.len();
        LocalElt { unit, valuation: vec![Rat::zero(); size] }
    }

    pub fn is_one(&self) -> bool {
        self.unit.is_one() && self.valuation.iter().all(|v| v.is_zero())
    }
}

/// Units of `(Z/m)^*` whose prime-to-`v` part lies in `⟨v⟩`: the image of
/// the local Galois group at `v`.
pub fn decomposition_group(v: u64, m: u64) -> Vec<u64> {
    let mut mp = m;
    while mp % v == 0 {
        mp /= v;
    }
    let mut powers = vec![1 % mp.max(1)];
    if mp > 1 {
        let mut x = v % mp;
        while x != 1 % mp && !powers.contains(&x) {
            powers.push(x);
            x = x * v % mp;
        }
    }
    (1..=m.max(1))
        .filter(|a| a.gcd(&m) == 1 || m == 1)
        .filter(|a| mp <= 1 || powers.contains(&(a % mp)))
        .map(|a| a % m.max(1))
        .collect()
}

/// A finite idèle of `Q[G^n]`; omitted places carry the unit element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdeleElt {
    pub group: FiniteAbelianGroup,
    pub n: usize,
    pub local: BTreeMap<u64, LocalElt>,
}

impl IdeleElt {
    pub fn new(group: &FiniteAbelianGroup, n: usize, local: BTreeMap<u64, LocalElt>) -> Result<Self> {
        let size = Radix::new(group.power_orders(n)).size();
        for (&v, e) in &local {
            if !crate::arith::is_prime(v) {
                return input(format!("place {v} is not a prime"));
            }
            if e.unit.group != *group || e.unit.n != n || e.valuation.len() != size {
                return input(format!("local component at {v} has the wrong shape"));
            }
            if let Some((chi, a)) = e.unit.galois_violation() {
                return input(format!("unit part at {v} is not Galois-equivariant at {chi:?} under σ_{a}"));
            }
            let radix = e.unit.radix();
            for a in decomposition_group(v, e.unit.m.lcm(&group.exponent())) {
                for (i, val) in e.valuation.iter().enumerate() {
                    let twisted = radix.scale(&radix.vector(i), a);
                    if &e.valuation[radix.index(&twisted)] != val {
                        return input(format!("valuations at {v} are not constant on local Galois orbits"));
                    }
                }
            }
        }
        Ok(IdeleElt { group: group.clone(), n, local })
    }

    pub fn unit(group: &FiniteAbelianGroup, n: usize) -> Self {
        IdeleElt { group: group.clone(), n, local: BTreeMap::new() }
    }

    /// Component at `v`, the unit element when absent.
    pub fn at(&self, v: u64) -> LocalElt {
        self.local.get(&v).cloned().unwrap_or_else(|| LocalElt::one(&self.group, self.n))
    }

    pub fn is_unit(&self) -> bool {
        self.local.values().all(|e| e.is_one())
    }
}

/// Applies `λ_z` place by place; valuations transform linearly.
pub fn apply_sigma(z: &SigmaElt, m: &IdeleElt) -> Result<IdeleElt> {
    if z.r != m.n || z.group != m.group {
        return input("idèle does not live on the source of z");
    }
    let terms = z.terms();
    let out_radix = Radix::new(z.group.power_orders(z.s));
    let mut local = BTreeMap::new();
    for (&v, e) in &m.local {
        let unit = lambda_z(z, &e.unit)?;
        let valuation = out_radix
            .all()
            .iter()
            .map(|psi| {
                let mut acc = Rat::zero();
                for (h, c) in &terms {
                    let idx = e.unit.radix().index(&h.pull_character(psi));
                    acc += &e.valuation[idx] * Rat::from_integer((*c).into());
                }
                acc
            })
            .collect();
        let out = LocalElt { unit, valuation };
        if !out.is_one() {
            local.insert(v, out);
        }
    }
    Ok(IdeleElt { group: m.group.clone(), n: z.s, local })
}

/// `Θ_n` on an idèle of `Q[G]`.
pub fn theta_on_idele(m: &IdeleElt, n: usize) -> Result<IdeleElt> {
    if m.n != 1 {
        return input("Θ_n takes an idèle of Q[G]");
    }
    apply_sigma(&SigmaElt::s_n(&m.group, n), m)
}

/// The restricted comparison: at every place `v ∤ #G` in either support the
/// valuation vectors agree and the unit-part ratio is a `v`-adic unit at
/// every character. Full equality in the cubic class group is not decided.
pub fn restricted_equal(a: &IdeleElt, b: &IdeleElt) -> Result<bool> {
    if a.group != b.group || a.n != b.n {
        return input("idèles live on different groups");
    }
    let order = a.group.order();
    let places: std::collections::BTreeSet<u64> = a.local.keys().chain(b.local.keys()).copied().collect();
    for v in places {
        if order % v == 0 {
            continue;
        }
        let (x, y) = (a.at(v), b.at(v));
        if x.valuation != y.valuation {
            return Ok(false);
        }
        let ratio = x.unit.mul(&y.unit.inv())?;
        for val in &ratio.values {
            let norm = val.num.norm();
            let den = val.den.pow(val.num.field().degree as u32);
            if val_big(&norm, v) != val_big(&den, v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Π_{k<n} Π_{p | e(k)} |#G|_p^{-1}`, and 1 for `2 ≤ n ≤ 5`.
pub fn kernel_annihilator_bound(n: usize, group: &FiniteAbelianGroup, vandiver: bool) -> Result<BigInt> {
    if n < 2 {
        return input("the kernel bound needs n >= 2");
    }
    if n <= 5 || group.order() == 1 {
        return Ok(BigInt::one());
    }
    let order = group.order();
    let primes = prime_divisors(order);
    let mut acc = BigInt::one();
    for k in 1..n {
        let e = e_of_k(k, vandiver)?;
        for &p in &primes {
            if e.is_multiple_of(&BigInt::from(p)) {
                acc *= BigInt::from(p).pow(crate::arith::val_u64(order, p));
            }
        }
    }
    Ok(acc)
}
