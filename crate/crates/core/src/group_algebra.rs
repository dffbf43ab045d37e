//! Finite abelian groups, characters, homomorphisms `G^r → G^s`, the
//! formal sums `Σ_{r,s}`, character tables of units of `K[G^n]` and the maps
//! `λ_z` and `Θ_n^D`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::Rat;
use crate::cyclo::CycNum;
use crate::error::{input, Error, Result};

/// `G ≅ Z/d₁ × ⋯ × Z/d_k` with `d₁ | d₂ | ⋯ | d_k`, every `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(invariant_factors: Vec<u64>) -> Result<Self> {
        if invariant_factors.iter().any(|&d| d < 2) {
            return input("invariant factors must be >= 2");
        }
        if invariant_factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return input("invariant factors must form a divisor chain");
        }
        Ok(FiniteAbelianGroup { invariant_factors })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { invariant_factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        if n == 1 {
            Self::trivial()
        } else {
            FiniteAbelianGroup { invariant_factors: vec![n] }
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    /// Cyclic orders of `G^n`, copy-major.
    pub fn power_orders(&self, n: usize) -> Vec<u64> {
        self.invariant_factors.repeat(n)
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        Radix::new(self.invariant_factors.clone()).all()
    }

    pub fn characters(&self) -> Vec<GCharacter> {
        self.elements()
            .into_iter()
            .map(|e| GCharacter { group: self.clone(), exponents: e })
            .collect()
    }

    /// Every group with `#G ≤ n`, one per isomorphism class.
    pub fn all_up_to(n: u64) -> Vec<Self> {
        fn chains(remaining: u64, last: u64, out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>) {
            out.push(cur.clone());
            let mut d = last;
            while d <= remaining {
                if remaining % d == 0 && (cur.is_empty() || d % cur[cur.len() - 1] == 0) {
                    cur.push(d);
                    chains(remaining / d, d, out, cur);
                    cur.pop();
                }
                d += 1;
            }
        }
        let mut out = vec![];
        for order in 1..=n {
            let mut all = vec![];
            chains(order, 2, &mut all, &mut vec![]);
            for c in all {
                if c.iter().product::<u64>() == order {
                    out.push(FiniteAbelianGroup { invariant_factors: c });
                }
            }
        }
        out
    }
}

/// Mixed-radix indexing of a product of cyclic groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Radix {
    pub orders: Vec<u64>,
}

impl Radix {
    pub fn new(orders: Vec<u64>) -> Self {
        Radix { orders }
    }

    pub fn size(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    pub fn index(&self, v: &[u64]) -> usize {
        let mut idx = 0usize;
        for (x, d) in v.iter().zip(&self.orders) {
            idx = idx * *d as usize + (*x % *d) as usize;
        }
        idx
    }

    pub fn vector(&self, mut idx: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.orders.len()];
        for i in (0..self.orders.len()).rev() {
            let d = self.orders[i] as usize;
            v[i] = (idx % d) as u64;
            idx /= d;
        }
        v
    }

    pub fn all(&self) -> Vec<Vec<u64>> {
        (0..self.size()).map(|i| self.vector(i)).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), d)| (x + y) % d).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.orders).map(|(x, d)| (d - x % d) % d).collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        a.iter()
            .zip(&self.orders)
            .map(|(x, d)| ((*x as u128 * k as u128) % *d as u128) as u64)
            .collect()
    }

    /// Pairing of a character with an element, as an exponent of `ζ_m`.
    pub fn pairing(&self, chi: &[u64], g: &[u64], m: u64) -> u64 {
        let mut acc = 0u128;
        for ((e, x), d) in chi.iter().zip(g).zip(&self.orders) {
            acc += (*e as u128 * *x as u128 % *d as u128) * (m / d) as u128;
        }
        (acc % m as u128) as u64
    }
}

/// A character of `G`: value `ζ_{dᵢ}^{eᵢ}` on the i-th generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GCharacter {
    pub group: FiniteAbelianGroup,
    pub exponents: Vec<u64>,
}

impl GCharacter {
    pub fn new(group: &FiniteAbelianGroup, exponents: Vec<u64>) -> Result<Self> {
        if exponents.len() != group.rank() {
            return input("character exponent vector has the wrong length");
        }
        if exponents.iter().zip(group.invariant_factors()).any(|(e, d)| e >= d) {
            return input("character exponents must be reduced");
        }
        Ok(GCharacter { group: group.clone(), exponents })
    }

    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        GCharacter { group: group.clone(), exponents: vec![0; group.rank()] }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    fn radix(&self) -> Radix {
        Radix::new(self.group.invariant_factors().to_vec())
    }

    pub fn mul(&self, o: &Self) -> Self {
        GCharacter { group: self.group.clone(), exponents: self.radix().add(&self.exponents, &o.exponents) }
    }

    pub fn inv(&self) -> Self {
        GCharacter { group: self.group.clone(), exponents: self.radix().neg(&self.exponents) }
    }

    pub fn pow(&self, k: i64) -> Self {
        let r = self.radix();
        let e = r.scale(&self.exponents, k.unsigned_abs());
        let e = if k < 0 { r.neg(&e) } else { e };
        GCharacter { group: self.group.clone(), exponents: e }
    }

    pub fn order(&self) -> u64 {
        self.exponents
            .iter()
            .zip(self.group.invariant_factors())
            .fold(1u64, |acc, (e, d)| acc.lcm(&(d / e.gcd(d))))
    }

    /// `χ(g)` as a power of `ζ_m`, `m` a multiple of the exponent.
    pub fn value_exponent(&self, g: &[u64], m: u64) -> u64 {
        self.radix().pairing(&self.exponents, g, m)
    }
}

/// Concatenates characters of `G` into a character of `G^n`.
pub fn char_tuple(chars: &[GCharacter]) -> Vec<u64> {
    chars.iter().flat_map(|c| c.exponents.iter().copied()).collect()
}

/// Splits a character of `G^n` into its `n` components.
pub fn split_tuple(group: &FiniteAbelianGroup, n: usize, flat: &[u64]) -> Vec<GCharacter> {
    let k = group.rank();
    (0..n)
        .map(|i| GCharacter { group: group.clone(), exponents: flat[i * k..(i + 1) * k].to_vec() })
        .collect()
}

/// A homomorphism between products of cyclic groups. Column `c` holds the
/// image of the `c`-th source generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupHom {
    pub source: Vec<u64>,
    pub target: Vec<u64>,
    pub matrix: Vec<Vec<u64>>,
}

impl GroupHom {
    pub fn new(source: Vec<u64>, target: Vec<u64>, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if matrix.len() != target.len() || matrix.iter().any(|row| row.len() != source.len()) {
            return input("hom matrix shape does not match source/target");
        }
        let matrix: Vec<Vec<u64>> = matrix
            .iter()
            .zip(&target)
            .map(|(row, &t)| row.iter().map(|&x| x.rem_euclid(t as i64) as u64).collect())
            .collect();
        for (c, &d) in source.iter().enumerate() {
            for (j, &t) in target.iter().enumerate() {
                if (d as u128 * matrix[j][c] as u128) % t as u128 != 0 {
                    return Err(Error::Input(format!(
                        "generator {c} of order {d} cannot map to an element of order not dividing {d}"
                    )));
                }
            }
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn apply(&self, g: &[u64]) -> Vec<u64> {
        self.target
            .iter()
            .enumerate()
            .map(|(j, &t)| {
                let s: u128 = self.matrix[j].iter().zip(g).map(|(a, x)| *a as u128 * *x as u128).sum();
                (s % t as u128) as u64
            })
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupHom) -> Option<GroupHom> {
        if other.target != self.source {
            return None;
        }
        let cols: Vec<Vec<u64>> = (0..other.source.len())
            .map(|c| {
                let col: Vec<u64> = other.matrix.iter().map(|row| row[c]).collect();
                self.apply(&col)
            })
            .collect();
        let matrix = (0..self.target.len()).map(|j| cols.iter().map(|col| col[j]).collect()).collect();
        Some(GroupHom { source: other.source.clone(), target: self.target.clone(), matrix })
    }

    /// `ψ ∘ self` for a character `ψ` of the target.
    pub fn pull_character(&self, psi: &[u64]) -> Vec<u64> {
        self.source
            .iter()
            .enumerate()
            .map(|(c, &d)| {
                let mut acc = 0u128;
                for (j, &t) in self.target.iter().enumerate() {
                    let scaled = self.matrix[j][c] as u128 * d as u128 / t as u128;
                    acc += psi[j] as u128 * scaled;
                }
                (acc % d as u128) as u64
            })
            .collect()
    }

    /// `G → G^n`, `g ↦ (g at positions in I, e elsewhere)`; positions are 0-based.
    pub fn subset(group: &FiniteAbelianGroup, n: usize, subset: &[usize]) -> GroupHom {
        let k = group.rank();
        let mut m = vec![vec![0i64; k]; k * n];
        for &i in subset {
            for f in 0..k {
                m[i * k + f][f] = 1;
            }
        }
        GroupHom::new(group.power_orders(1), group.power_orders(n), m).expect("subset hom is valid")
    }

    /// `G^r → G^s` sending the `j`-th output coordinate to the product of the
    /// input coordinates listed in `sources[j]`.
    pub fn coordinate_map(group: &FiniteAbelianGroup, r: usize, sources: &[Vec<usize>]) -> GroupHom {
        let k = group.rank();
        let s = sources.len();
        let mut m = vec![vec![0i64; k * r]; k * s];
        for (j, src) in sources.iter().enumerate() {
            for &i in src {
                for f in 0..k {
                    m[j * k + f][i * k + f] += 1;
                }
            }
        }
        GroupHom::new(group.power_orders(r), group.power_orders(s), m).expect("coordinate map is valid")
    }

    /// `(g₁,…,g_n) ↦ (g_{σ(1)},…,g_{σ(n)})`.
    pub fn permutation(group: &FiniteAbelianGroup, perm: &[usize]) -> GroupHom {
        let sources: Vec<Vec<usize>> = perm.iter().map(|&i| vec![i]).collect();
        Self::coordinate_map(group, perm.len(), &sources)
    }

    /// The map `G^n → G^0`.
    pub fn to_trivial(group: &FiniteAbelianGroup, n: usize) -> GroupHom {
        Self::coordinate_map(group, n, &[])
    }

    /// The four maps `G^n → G^{n+1}` of the cocycle condition.
    pub fn cocycle_maps(group: &FiniteAbelianGroup, n: usize) -> [GroupHom; 4] {
        let tail = |from: usize| (from..n).map(|i| vec![i]).collect::<Vec<_>>();
        let mut i0 = vec![vec![0], vec![0]];
        i0.extend(tail(1));
        let mut i1 = vec![vec![]];
        i1.extend(tail(0));
        let mut i2 = vec![vec![0], vec![1], vec![]];
        i2.extend(tail(2));
        let mut i3 = vec![vec![0], vec![1], vec![1]];
        i3.extend(tail(2));
        [i0, i1, i2, i3].map(|s| Self::coordinate_map(group, n, &s))
    }
}

/// A formal `Z`-combination of homs `G^r → G^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaElt {
    pub group: FiniteAbelianGroup,
    pub r: usize,
    pub s: usize,
    terms: BTreeMap<Vec<Vec<u64>>, i64>,
}

impl SigmaElt {
    pub fn zero(group: &FiniteAbelianGroup, r: usize, s: usize) -> Self {
        SigmaElt { group: group.clone(), r, s, terms: BTreeMap::new() }
    }

    pub fn from_terms(group: &FiniteAbelianGroup, r: usize, s: usize, terms: Vec<(GroupHom, i64)>) -> Result<Self> {
        let mut z = Self::zero(group, r, s);
        for (h, c) in terms {
            if h.source != group.power_orders(r) || h.target != group.power_orders(s) {
                return input("hom shape does not match the formal sum");
            }
            z.add_term(h.matrix, c);
        }
        Ok(z)
    }

    pub fn single(group: &FiniteAbelianGroup, r: usize, s: usize, h: GroupHom) -> Result<Self> {
        Self::from_terms(group, r, s, vec![(h, 1)])
    }

    fn add_term(&mut self, matrix: Vec<Vec<u64>>, c: i64) {
        let v = self.terms.get(&matrix).copied().unwrap_or(0) + c;
        if v == 0 {
            self.terms.remove(&matrix);
        } else {
            self.terms.insert(matrix, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> Vec<(GroupHom, i64)> {
        let (src, tgt) = (self.group.power_orders(self.r), self.group.power_orders(self.s));
        self.terms
            .iter()
            .map(|(m, &c)| (GroupHom { source: src.clone(), target: tgt.clone(), matrix: m.clone() }, c))
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        if (self.r, self.s) != (o.r, o.s) {
            return self.clone();
        }
        let mut z = self.clone();
        for (m, &c) in &o.terms {
            z.add_term(m.clone(), c);
        }
        z
    }

    pub fn neg(&self) -> Self {
        let mut z = self.clone();
        for v in z.terms.values_mut() {
            *v = -*v;
        }
        z
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// `self · other = self ∘ other`; zero when the shapes do not chain.
    pub fn mul(&self, other: &SigmaElt) -> SigmaElt {
        let mut out = SigmaElt::zero(&self.group, other.r, self.s);
        if other.s != self.r || other.group != self.group {
            return out;
        }
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let c = a.compose(&b).expect("shapes chain");
                out.add_term(c.matrix, ca * cb);
            }
        }
        out
    }

    /// `s_n = Σ_I (-1)^{n-#I} I ∈ Σ_{1,n}`.
    pub fn s_n(group: &FiniteAbelianGroup, n: usize) -> SigmaElt {
        let mut z = SigmaElt::zero(group, 1, n);
        for mask in 0u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let sign = if (n - subset.len()) % 2 == 0 { 1 } else { -1 };
            z.add_term(GroupHom::subset(group, n, &subset).matrix, sign);
        }
        z
    }

    /// `𝓘₀ − 𝓘₁ + 𝓘₂ − 𝓘₃ ∈ Σ_{n,n+1}`.
    pub fn cocycle(group: &FiniteAbelianGroup, n: usize) -> SigmaElt {
        let [i0, i1, i2, i3] = GroupHom::cocycle_maps(group, n);
        SigmaElt::from_terms(group, n, n + 1, vec![(i0, 1), (i1, -1), (i2, 1), (i3, -1)]).expect("cocycle shape")
    }

    /// `𝓘_σ − 𝓘_id ∈ Σ_{n,n}`.
    pub fn permutation_difference(group: &FiniteAbelianGroup, perm: &[usize]) -> SigmaElt {
        let n = perm.len();
        let id: Vec<usize> = (0..n).collect();
        SigmaElt::from_terms(
            group,
            n,
            n,
            vec![(GroupHom::permutation(group, perm), 1), (GroupHom::permutation(group, &id), -1)],
        )
        .expect("permutation shape")
    }

    /// The single hom `e: G^n → G^0`.
    pub fn unit(group: &FiniteAbelianGroup, n: usize) -> SigmaElt {
        SigmaElt::single(group, n, 0, GroupHom::to_trivial(group, n)).expect("unit shape")
    }
}

/// A virtual character: multiplicities on characters of a product of cyclic groups.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VirtualChar {
    pub terms: BTreeMap<Vec<u64>, i64>,
}

impl VirtualChar {
    pub fn add_term(&mut self, chi: Vec<u64>, c: i64) {
        let e = self.terms.entry(chi.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&chi);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Applies an additive function on characters.
    pub fn evaluate<F: FnMut(&[u64]) -> Rat>(&self, mut f: F) -> Rat {
        let mut acc = Rat::zero();
        for (chi, &c) in &self.terms {
            acc += f(chi) * Rat::from_integer(c.into());
        }
        acc
    }
}

/// `Δ_z^D(φ) = Σ z(𝓘) · (φ ∘ 𝓘)`.
pub fn pullback_character(z: &SigmaElt, phi: &[u64]) -> Result<VirtualChar> {
    if phi.len() != z.group.rank() * z.s {
        return input("character does not live on the target of z");
    }
    let mut v = VirtualChar::default();
    for (h, c) in z.terms() {
        v.add_term(h.pull_character(phi), c);
    }
    Ok(v)
}

/// `Θ_n^D(φ₁,…,φ_n) = Π(φᵢ − 1)` expanded.
pub fn theta_nd(group: &FiniteAbelianGroup, phis: &[GCharacter]) -> VirtualChar {
    let n = phis.len();
    let radix = Radix::new(group.invariant_factors().to_vec());
    let mut v = VirtualChar::default();
    for mask in 0u32..(1 << n) {
        let mut chi = vec![0u64; group.rank()];
        let mut size = 0;
        for (i, phi) in phis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                chi = radix.add(&chi, &phi.exponents);
                size += 1;
            }
        }
        v.add_term(chi, if (n - size) % 2 == 0 { 1 } else { -1 });
    }
    v
}

/// An element of `Q[G]`, keyed by group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElt {
    pub group: FiniteAbelianGroup,
    pub coeffs: BTreeMap<Vec<u64>, Rat>,
}

impl GroupRingElt {
    pub fn new(group: &FiniteAbelianGroup, coeffs: Vec<(Vec<u64>, Rat)>) -> Self {
        let mut e = GroupRingElt { group: group.clone(), coeffs: BTreeMap::new() };
        for (g, c) in coeffs {
            *e.coeffs.entry(g).or_insert_with(Rat::zero) += c;
        }
        e.coeffs.retain(|_, c| !c.is_zero());
        e
    }

    pub fn mul(&self, o: &Self) -> Self {
        let radix = Radix::new(self.group.invariant_factors().to_vec());
        let mut terms = vec![];
        for (g, a) in &self.coeffs {
            for (h, b) in &o.coeffs {
                terms.push((radix.add(g, h), a * b));
            }
        }
        Self::new(&self.group, terms)
    }

    /// `χ(α) = Σ_g c_g χ(g)` in `Q(ζ_m)`.
    pub fn character_value(&self, chi: &[u64], m: u64) -> CycNum {
        let radix = Radix::new(self.group.invariant_factors().to_vec());
        let mut terms: Vec<(u64, Rat)> = vec![];
        for (g, c) in &self.coeffs {
            terms.push((radix.pairing(chi, g, m), c.clone()));
        }
        let f = crate::cyclo::field(m);
        let den = terms.iter().fold(num_bigint::BigInt::from(1), |acc, (_, c)| acc.lcm(c.denom()));
        let nums: Vec<(u64, num_bigint::BigInt)> =
            terms.iter().map(|(e, c)| (*e, c.numer() * (&den / c.denom()))).collect();
        let num = crate::cyclo::CycInt { m, coeffs: f.reduce_cyclic(&nums) };
        CycNum::from_cycint(num).scale(&Rat::new(1.into(), den))
    }

    /// Character table on `G` (n = 1).
    pub fn table(&self) -> CharTable {
        let m = self.group.exponent();
        let values = self.group.elements().iter().map(|chi| self.character_value(chi, m)).collect();
        CharTable { group: self.group.clone(), n: 1, m, values }
    }

    pub fn is_unit(&self) -> bool {
        self.table().values.iter().all(|v| !v.is_zero())
    }
}

/// Character-value table of a unit of `Q(ζ_m)[G^n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharTable {
    pub group: FiniteAbelianGroup,
    pub n: usize,
    pub m: u64,
    /// Indexed by the mixed-radix index of the character of `G^n`.
    pub values: Vec<CycNum>,
}

impl CharTable {
    pub fn new(group: &FiniteAbelianGroup, n: usize, m: u64, values: Vec<CycNum>) -> Result<Self> {
        if m % group.exponent() != 0 {
            return input("value field must contain the character values");
        }
        let t = CharTable { group: group.clone(), n, m, values };
        if t.values.len() != t.radix().size() {
            return input("table is not total");
        }
        if t.values.iter().any(|v| v.m() != m) {
            return input("table values live in different fields");
        }
        if t.values.iter().any(|v| v.is_zero()) {
            return input("table has a zero value");
        }
        Ok(t)
    }

    pub fn constant(group: &FiniteAbelianGroup, n: usize, m: u64, c: &CycNum) -> Self {
        let size = Radix::new(group.power_orders(n)).size();
        CharTable { group: group.clone(), n, m, values: vec![c.lift(m); size] }
    }

    pub fn one(group: &FiniteAbelianGroup, n: usize) -> Self {
        let m = group.exponent();
        Self::constant(group, n, m, &CycNum::one(m))
    }

    pub fn radix(&self) -> Radix {
        Radix::new(self.group.power_orders(self.n))
    }

    pub fn characters(&self) -> Vec<Vec<u64>> {
        self.radix().all()
    }

    pub fn get(&self, chi: &[u64]) -> &CycNum {
        &self.values[self.radix().index(chi)]
    }

    pub fn is_one(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }

    fn zip(&self, o: &Self, f: impl Fn(&CycNum, &CycNum) -> CycNum) -> Result<Self> {
        if self.group != o.group || self.n != o.n {
            return input("tables live on different groups");
        }
        let m = self.m.lcm(&o.m);
        let values = self.values.iter().zip(&o.values).map(|(a, b)| f(&a.lift(m), &b.lift(m))).collect();
        Ok(CharTable { group: self.group.clone(), n: self.n, m, values })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.mul(b))
    }

    pub fn inv(&self) -> Self {
        let values = self.values.iter().map(|v| v.inv().expect("table values are nonzero")).collect();
        CharTable { values, ..self.clone() }
    }

    /// Returns the first character where `value(φ^a) ≠ σ_a(value(φ))`.
    pub fn galois_violation(&self) -> Option<(Vec<u64>, u64)> {
        let radix = self.radix();
        for a in 2..self.m {
            if a.gcd(&self.m) != 1 {
                continue;
            }
            for (i, v) in self.values.iter().enumerate() {
                let chi = radix.vector(i);
                let twisted = radix.scale(&chi, a);
                if self.get(&twisted) != &v.galois(a) {
                    return Some((chi, a));
                }
            }
        }
        None
    }

    pub fn with_value(&self, chi: &[u64], v: CycNum) -> Self {
        let mut t = self.clone();
        let i = t.radix().index(chi);
        t.values[i] = v.lift(t.m);
        t
    }

    /// Pushforward along `φ: G → H`: `(φ_* a)(ψ) = a(ψ ∘ φ^n)`.
    pub fn pushforward(&self, hom: &GroupHom, target: &FiniteAbelianGroup) -> Result<Self> {
        if hom.source != self.group.invariant_factors() || hom.target != target.invariant_factors() {
            return input("hom does not match the groups");
        }
        let m = self.m.lcm(&target.exponent());
        let out_radix = Radix::new(target.power_orders(self.n));
        let k = target.rank();
        let values = out_radix
            .all()
            .iter()
            .map(|psi| {
                let pulled: Vec<u64> = if k == 0 {
                    vec![0; self.group.rank() * self.n]
                } else {
                    psi.chunks(k).flat_map(|c| hom.pull_character(c)).collect()
                };
                self.get(&pulled).lift(m)
            })
            .collect();
        Ok(CharTable { group: target.clone(), n: self.n, m, values })
    }
}

/// `λ_z(a)(ψ) = Π_𝓘 a(ψ ∘ 𝓘)^{z(𝓘)}`.
pub fn lambda_z(z: &SigmaElt, a: &CharTable) -> Result<CharTable> {
    if a.group != z.group || a.n != z.r {
        return input("table does not live on the source of z");
    }
    let terms = z.terms();
    let out_radix = Radix::new(z.group.power_orders(z.s));
    let values = out_radix
        .all()
        .iter()
        .map(|psi| {
            let (pos, neg) = lambda_parts(&terms, a, psi);
            if neg.is_one() {
                pos
            } else {
                pos.mul(&neg.inv().expect("nonzero"))
            }
        })
        .collect();
    Ok(CharTable { group: z.group.clone(), n: z.s, m: a.m, values })
}

/// Products of the positive and negative powers at `ψ`.
pub(crate) fn lambda_parts(terms: &[(GroupHom, i64)], a: &CharTable, psi: &[u64]) -> (CycNum, CycNum) {
    let mut pos = CycNum::one(a.m);
    let mut neg = CycNum::one(a.m);
    for (h, c) in terms {
        let v = a.get(&h.pull_character(psi));
        let p = v.pow(c.abs()).expect("nonzero");
        if *c > 0 {
            pos = pos.mul(&p);
        } else {
            neg = neg.mul(&p);
        }
    }
    (pos, neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z5() -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(5)
    }

    #[test]
    fn group_validation() {
        assert!(FiniteAbelianGroup::new(vec![2, 4]).is_ok());
        assert!(FiniteAbelianGroup::new(vec![4, 2]).is_err());
        assert!(FiniteAbelianGroup::new(vec![1]).is_err());
        assert_eq!(FiniteAbelianGroup::trivial().order(), 1);
        assert_eq!(FiniteAbelianGroup::trivial().exponent(), 1);
        let g = FiniteAbelianGroup::new(vec![2, 6]).unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(g.characters().len(), 12);
    }

    #[test]
    fn groups_up_to_twelve() {
        // 1,2,3,{4,2x2},5,6,7,{8,2x4,2x2x2},{9,3x3},10,11,{12,2x6}
        assert_eq!(FiniteAbelianGroup::all_up_to(12).len(), 17);
    }

    #[test]
    fn hom_validity() {
        assert!(GroupHom::new(vec![2], vec![4], vec![vec![2]]).is_ok());
        assert!(GroupHom::new(vec![2], vec![4], vec![vec![1]]).is_err());
        assert!(GroupHom::new(vec![4], vec![2], vec![vec![1]]).is_ok());
    }

    #[test]
    fn identity_pullback() {
        let g = z5();
        let id = SigmaElt::single(&g, 1, 1, GroupHom::subset(&g, 1, &[0])).unwrap();
        let v = pullback_character(&id, &[3]).unwrap();
        assert_eq!(v.terms, BTreeMap::from([(vec![3], 1)]));
    }

    #[test]
    fn subset_pullback_multiplies() {
        let g = z5();
        let z = SigmaElt::single(&g, 1, 3, GroupHom::subset(&g, 3, &[0, 1])).unwrap();
        let v = pullback_character(&z, &[2, 4, 1]).unwrap();
        assert_eq!(v.terms, BTreeMap::from([(vec![1], 1)]));
    }

    #[test]
    fn theta_examples() {
        let g2 = FiniteAbelianGroup::cyclic(2);
        let chi = GCharacter::new(&g2, vec![1]).unwrap();
        let v = theta_nd(&g2, &[chi.clone(), chi]);
        assert_eq!(v.terms, BTreeMap::from([(vec![0], 2), (vec![1], -2)]));

        let g = z5();
        let chi = GCharacter::new(&g, vec![1]).unwrap();
        let v = theta_nd(&g, &[chi.clone(), chi.clone(), chi]);
        assert_eq!(v.terms, BTreeMap::from([(vec![3], 1), (vec![2], -3), (vec![1], 3), (vec![0], -1)]));

        let t = GCharacter::trivial(&g);
        let c = GCharacter::new(&g, vec![2]).unwrap();
        assert!(theta_nd(&g, &[c, t]).is_zero());
    }

    #[test]
    fn s_n_pullback_is_theta() {
        let g = z5();
        let s3 = SigmaElt::s_n(&g, 3);
        let v = pullback_character(&s3, &[1, 2, 4]).unwrap();
        let phis = split_tuple(&g, 3, &[1, 2, 4]);
        assert_eq!(v, theta_nd(&g, &phis));
    }

    #[test]
    fn cocycle_times_s_n_vanishes() {
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        for n in 2..5 {
            let z = SigmaElt::cocycle(&g, n);
            assert!(z.mul(&SigmaElt::s_n(&g, n)).is_zero());
            assert!(SigmaElt::unit(&g, n).mul(&SigmaElt::s_n(&g, n)).is_zero());
        }
    }

    #[test]
    fn theta_two_spot_value() {
        let g = FiniteAbelianGroup::cyclic(3);
        let alpha = GroupRingElt::new(
            &g,
            vec![(vec![0], Rat::from_integer(2.into())), (vec![1], Rat::from_integer(1.into()))],
        );
        assert!(alpha.is_unit());
        let a = alpha.table();
        let t = lambda_z(&SigmaElt::s_n(&g, 2), &a).unwrap();
        let phi = vec![1u64];
        let expected = a
            .get(&[2])
            .mul(a.get(&[0]))
            .mul(&a.get(&phi).pow(-2).unwrap());
        assert_eq!(t.get(&[1, 1]), &expected);
    }

    #[test]
    fn mismatched_composition_is_zero() {
        let g = z5();
        let a = SigmaElt::s_n(&g, 2);
        let b = SigmaElt::s_n(&g, 3);
        assert!(a.mul(&b).is_zero());
    }
}
