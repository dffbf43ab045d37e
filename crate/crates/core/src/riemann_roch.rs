//! Branch data of tame covers and the character functions built from it:
//! the inertia function `g(χ, y)`, the divisor `F(χ)`, `T_π`, `T_{π,𝒢}` and
//! the finite idèle whose character valuations are `−c·T_{v,𝒢}(Θ^D(φ))`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, rat_to_string, Rat};
use crate::error::{input, Error, Result};
use crate::group_algebra::{split_tuple, theta_nd, FiniteAbelianGroup, GCharacter, Radix, VirtualChar};

fn default_one() -> u64 {
    1
}

/// One irreducible fibral component `y` together with its inertia data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchComponent {
    pub name: String,
    /// `#I_y`, a divisor of the group exponent for cyclic inertia.
    pub inertia_order: u64,
    /// `u` with `φ_y(h_y) = ζ_{#I_y}^u`; a unit mod `#I_y`.
    #[serde(default = "default_one")]
    pub inertia_generator_exponent: u64,
    /// `h_y ∈ G` generating `I_y`; defaults to `(d/#I_y)·e₁` for cyclic `G = Z/d`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inertia_generator: Option<Vec<u64>>,
    /// Explicit `χ ↦ n(χ, y)` as `[character exponents, n]` pairs; overrides the generator data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent_map: Option<Vec<(Vec<u64>, u64)>>,
    pub self_intersection: i64,
    pub euler_char: i64,
    /// Residue characteristic of the fibre containing `y`, when it differs from the default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_prime: Option<u64>,
    /// `c₁(𝒢)·y`, used by the default degree table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<i64>,
}

/// A full fibre `Σ mⱼ yⱼ`; its components satisfy `Σⱼ mⱼ (yᵢ·yⱼ) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fibre {
    pub multiplicities: Vec<(usize, i64)>,
}

/// `deg(ch^t(𝒢) ∩ [y_{j₁}] ∩ ⋯ ∩ [y_{j_l}] ∩ Td_{t+l})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub t: u32,
    pub components: Vec<usize>,
    #[serde(with = "crate::serde_big::rat")]
    pub degree: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchData {
    /// Invariant factors of `G`.
    pub group: Vec<u64>,
    pub d: u32,
    pub residue_prime: u64,
    pub components: Vec<BranchComponent>,
    /// `[i, j, yᵢ·yⱼ]` for `i ≠ j`.
    #[serde(default)]
    pub cross_intersections: Vec<(usize, usize, i64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fibres: Vec<Fibre>,
    /// `rank(𝒢)`; `𝒢 = 𝒪_Y` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_table: Option<Vec<DegreeEntry>>,
}

/// Degree table keyed by `(t, sorted component tuple)`.
pub type DegreeTable = BTreeMap<(u32, Vec<usize>), Rat>;

impl BranchData {
    pub fn from_json(s: &str) -> Result<Self> {
        let bd: BranchData = serde_json::from_str(s).map_err(|e| Error::Input(format!("branch data: {e}")))?;
        bd.validate()?;
        Ok(bd)
    }

    pub fn group(&self) -> Result<FiniteAbelianGroup> {
        FiniteAbelianGroup::new(self.group.clone())
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.group()?;
        let n = self.components.len();
        for c in &self.components {
            if c.inertia_order == 0 || g.order() % c.inertia_order != 0 {
                return input(format!("{}: #I_y = {} does not divide #G = {}", c.name, c.inertia_order, g.order()));
            }
            self.inertia_generator(c, &g)?;
        }
        let mut seen = BTreeMap::new();
        for &(i, j, v) in &self.cross_intersections {
            if i == j || i >= n || j >= n {
                return input(format!("bad cross intersection index ({i}, {j})"));
            }
            if seen.insert((i.min(j), i.max(j)), v).is_some_and(|w| w != v) {
                return input(format!("conflicting values for y{i}·y{j}"));
            }
        }
        let m = self.intersection_matrix()?;
        for f in &self.fibres {
            for &(i, _) in &f.multiplicities {
                if i >= n {
                    return input(format!("fibre refers to missing component {i}"));
                }
                let s: i64 = f.multiplicities.iter().map(|&(j, mj)| mj * m[i][j]).sum();
                if s != 0 {
                    return input(format!("fibre relation fails at {}: Σ m_j (y·y_j) = {s}", self.components[i].name));
                }
            }
        }
        for c in &self.components {
            self.check_exponent_map(c, &g)?;
        }
        Ok(())
    }

    fn check_exponent_map(&self, c: &BranchComponent, g: &FiniteAbelianGroup) -> Result<()> {
        if let Some(map) = &c.exponent_map {
            for (chi, n) in map {
                if *n >= c.inertia_order {
                    return input(format!("{}: n(χ, y) = {n} is not below #I_y", c.name));
                }
                GCharacter::new(g, chi.clone())?;
                if chi.iter().all(|&e| e == 0) && *n != 0 {
                    return input(format!("{}: n(trivial, y) must be 0", c.name));
                }
            }
        }
        Ok(())
    }

    fn inertia_generator(&self, c: &BranchComponent, g: &FiniteAbelianGroup) -> Result<Vec<u64>> {
        let e = c.inertia_order;
        if c.exponent_map.is_none() && inv_mod(c.inertia_generator_exponent as i128, e as i128).is_none() && e > 1 {
            return input(format!("{}: φ_y exponent {} is not a unit mod {e}", c.name, c.inertia_generator_exponent));
        }
        let h = match &c.inertia_generator {
            Some(h) => h.clone(),
            None => match g.invariant_factors() {
                [] => vec![],
                [d] => vec![d / e],
                _ if e == 1 => vec![0; g.rank()],
                _ => return input(format!("{}: non-cyclic G needs an explicit inertia generator", c.name)),
            },
        };
        if h.len() != g.rank() {
            return input(format!("{}: inertia generator has the wrong length", c.name));
        }
        let radix = Radix::new(g.invariant_factors().to_vec());
        let order = (1..=g.order()).find(|&k| radix.scale(&h, k).iter().all(|&x| x == 0)).unwrap_or(0);
        if order != e {
            return input(format!("{}: inertia generator has order {order}, expected {e}", c.name));
        }
        Ok(h)
    }

    /// Symmetric matrix of `yᵢ·yⱼ`.
    pub fn intersection_matrix(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.components.len();
        let mut m = vec![vec![0i64; n]; n];
        for (i, c) in self.components.iter().enumerate() {
            m[i][i] = c.self_intersection;
        }
        for &(i, j, v) in &self.cross_intersections {
            if i >= n || j >= n {
                return input(format!("bad cross intersection index ({i}, {j})"));
            }
            m[i][j] = v;
            m[j][i] = v;
        }
        Ok(m)
    }

    /// `n(χ, y)` with `χ|_{I_y} = φ_y^{n}` and `0 ≤ n < #I_y`.
    pub fn inertia_exponent(&self, idx: usize, chi: &GCharacter) -> Result<u64> {
        let c = self.components.get(idx).ok_or_else(|| Error::Input(format!("no component {idx}")))?;
        let e = c.inertia_order;
        if let Some(map) = &c.exponent_map {
            if chi.is_trivial() {
                return Ok(0);
            }
            return map
                .iter()
                .find(|(x, _)| *x == chi.exponents)
                .map(|(_, n)| *n)
                .ok_or_else(|| Error::Input(format!("{}: exponent map misses χ = {:?}", c.name, chi.exponents)));
        }
        if e == 1 {
            return Ok(0);
        }
        let g = self.group()?;
        let h = self.inertia_generator(c, &g)?;
        let v = chi.value_exponent(&h, e);
        let u = inv_mod(c.inertia_generator_exponent as i128, e as i128).expect("validated unit") as u64;
        Ok(v * u % e)
    }

    /// `g(χ, y) = −n(χ, y)/#I_y`.
    pub fn g_value(&self, idx: usize, chi: &GCharacter) -> Result<Rat> {
        let n = self.inertia_exponent(idx, chi)?;
        Ok(Rat::new(-BigInt::from(n), BigInt::from(self.components[idx].inertia_order)))
    }

    /// `F(χ) = Σ_y #G·g(χ, y)·y`.
    pub fn f_divisor(&self, chi: &GCharacter) -> Result<BTreeMap<String, i64>> {
        let order = BigInt::from(self.group()?.order());
        let mut out = BTreeMap::new();
        for (i, c) in self.components.iter().enumerate() {
            let v = self.g_value(i, chi)? * Rat::from_integer(order.clone());
            if !v.is_integer() {
                return Err(Error::Math(format!("F(χ) has a non-integral coefficient on {}", c.name)));
            }
            let v: i64 = v.to_integer().try_into().map_err(|_| Error::Input("coefficient overflow".into()))?;
            if v != 0 {
                out.insert(c.name.clone(), v);
            }
        }
        Ok(out)
    }

    fn components_over(&self, v: u64) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&i| self.components[i].residue_prime.unwrap_or(self.residue_prime) == v)
            .collect()
    }

    /// Residue primes carrying components, ascending.
    pub fn residue_primes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.components.iter().map(|c| c.residue_prime.unwrap_or(self.residue_prime)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// The degree table: the stored one, or the surface table of `rank·𝒪_Y` twisted by `c₁`.
    pub fn degree_table(&self) -> Result<DegreeTable> {
        if let Some(t) = &self.degree_table {
            let mut out = DegreeTable::new();
            for e in t {
                let mut key = e.components.clone();
                key.sort();
                if key.iter().any(|&i| i >= self.components.len()) {
                    return input("degree table refers to a missing component");
                }
                out.insert((e.t, key), e.degree.clone());
            }
            return Ok(out);
        }
        if self.d != 1 {
            return input("d > 1 needs an explicit degree table");
        }
        let rank = Rat::from_integer(BigInt::from(self.rank.unwrap_or(1)));
        let m = self.intersection_matrix()?;
        let n = self.components.len();
        let mut out = DegreeTable::new();
        for i in 0..n {
            for j in i..n {
                out.insert((0, vec![i, j]), &rank * Rat::from_integer(m[i][j].into()));
            }
            let c = &self.components[i];
            out.insert((0, vec![i]), &rank * Rat::new((c.self_intersection + 2 * c.euler_char).into(), 2.into()));
            out.insert((1, vec![i]), Rat::from_integer(c.c1.unwrap_or(0).into()));
        }
        Ok(out)
    }
}

/// Pairs `(χ, y)` with `F(χ)·y ≢ 0 mod #G`, i.e. where `F(χ)/#G` is not Cartier.
pub fn cartier_violations(bd: &BranchData) -> Result<Vec<(Vec<u64>, String)>> {
    let g = bd.group()?;
    let order = g.order() as i64;
    let m = bd.intersection_matrix()?;
    let mut out = Vec::new();
    for chi in g.characters() {
        let f: Vec<i64> = (0..bd.components.len())
            .map(|i| {
                let n = bd.inertia_exponent(i, &chi)? as i64;
                Ok(-n * (order / bd.components[i].inertia_order as i64))
            })
            .collect::<Result<_>>()?;
        for (z, row) in m.iter().enumerate() {
            let dot: i64 = f.iter().zip(row).map(|(a, b)| a * b).sum();
            if dot % order != 0 {
                out.push((chi.exponents.clone(), bd.components[z].name.clone()));
            }
        }
    }
    Ok(out)
}

/// Random surface branch data with `F(χ)·y ≡ 0 mod #G`: every `yᵢ·yⱼ` is a
/// multiple of `lcm(#I_{yᵢ}, #I_{yⱼ})`.
pub fn fuzz_branch_data(seed: u64) -> BranchData {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let groups: [&[u64]; 9] = [&[2], &[3], &[4], &[5], &[6], &[7], &[2, 2], &[2, 4], &[3, 3]];
    let group = groups[rng.gen_range(0..groups.len())].to_vec();
    let g = FiniteAbelianGroup::new(group.clone()).expect("valid invariant factors");
    let elements = g.elements();
    let radix = Radix::new(group.clone());
    let order_of = |h: &[u64]| (1..=g.order()).find(|&k| radix.scale(h, k).iter().all(|&x| x == 0)).unwrap_or(1);
    let n = rng.gen_range(1..=4);
    let mut components = Vec::new();
    for i in 0..n {
        let h = elements[rng.gen_range(0..elements.len())].clone();
        let e = order_of(&h);
        let units: Vec<u64> = (1..e.max(2)).filter(|u| u.gcd(&e) == 1).collect();
        let u = if e == 1 { 1 } else { units[rng.gen_range(0..units.len())] };
        components.push(BranchComponent {
            name: format!("y{i}"),
            inertia_order: e,
            inertia_generator_exponent: u,
            inertia_generator: Some(h),
            exponent_map: None,
            self_intersection: 0,
            euler_char: rng.gen_range(-3..=3),
            residue_prime: None,
            c1: None,
        });
    }
    let mut cross = Vec::new();
    for i in 0..n {
        let ei = components[i].inertia_order as i64;
        components[i].self_intersection = ei * rng.gen_range(-6..=2);
        for j in i + 1..n {
            let l = ei.lcm(&(components[j].inertia_order as i64));
            cross.push((i, j, l * rng.gen_range(0..=4)));
        }
    }
    BranchData {
        group,
        d: 1,
        residue_prime: [2, 3, 5, 7, 11, 13, 17][(seed % 7) as usize],
        components,
        cross_intersections: cross,
        fibres: vec![],
        rank: None,
        degree_table: None,
    }
}

/// `T_π(ψ)` on surface data with `𝒢 = 𝒪_Y`, ordered pairs with the diagonal included.
pub fn t_pi_surface(bd: &BranchData, chi: &GCharacter) -> Result<Rat> {
    if bd.d != 1 {
        return input("the surface formula needs d = 1");
    }
    let m = bd.intersection_matrix()?;
    let n = bd.components.len();
    let g: Vec<Rat> = (0..n).map(|i| bd.g_value(i, chi)).collect::<Result<_>>()?;
    let two = Rat::from_integer(2.into());
    let mut t = Rat::zero();
    for i in 0..n {
        for j in 0..n {
            t += &g[i] * &g[j] * Rat::from_integer(m[i][j].into()) / &two;
        }
        let c = &bd.components[i];
        t += &g[i] * Rat::from_integer((c.self_intersection + 2 * c.euler_char).into()) / &two;
    }
    Ok(t)
}

fn t_general_over(bd: &BranchData, table: &DegreeTable, chi: &GCharacter, over: &[usize]) -> Result<Rat> {
    let d = bd.d as usize;
    let g: Vec<Rat> = (0..bd.components.len()).map(|i| bd.g_value(i, chi)).collect::<Result<_>>()?;
    let active: Vec<usize> = over.iter().copied().filter(|&i| !g[i].is_zero()).collect();
    let mut total = Rat::zero();
    let mut fact = BigInt::one();
    for l in 1..=d + 1 {
        fact *= l;
        let mut inner = Rat::zero();
        let mut idx = vec![0usize; l];
        if active.is_empty() {
            break;
        }
        loop {
            let tuple: Vec<usize> = idx.iter().map(|&k| active[k]).collect();
            let mut key = tuple.clone();
            key.sort();
            let mut degs = Rat::zero();
            for t in 0..=(d + 1 - l) as u32 {
                match table.get(&(t, key.clone())) {
                    Some(v) => degs += v,
                    None => return input(format!("degree table misses (t = {t}, {key:?})")),
                }
            }
            let prod = tuple.iter().fold(Rat::one(), |acc, &k| acc * &g[k]);
            inner += prod * degs;
            // next ordered tuple
            let mut pos = l;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < active.len() {
                    break;
                }
                idx[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
        total += inner / Rat::from_integer(fact.clone());
    }
    Ok(total)
}

/// `T_{π,𝒢}(ψ)` from a degree table, all ordered tuples of length `1..=d+1`.
pub fn t_pi_general(bd: &BranchData, table: &DegreeTable, chi: &GCharacter) -> Result<Rat> {
    let all: Vec<usize> = (0..bd.components.len()).collect();
    t_general_over(bd, table, chi, &all)
}

/// A function on characters of `G`, tabulated and extended linearly.
#[derive(Clone, Debug)]
pub struct CharFunction {
    pub values: BTreeMap<Vec<u64>, Rat>,
}

impl CharFunction {
    pub fn tabulate<F: FnMut(&GCharacter) -> Result<Rat>>(group: &FiniteAbelianGroup, mut f: F) -> Result<Self> {
        let mut values = BTreeMap::new();
        for chi in group.characters() {
            values.insert(chi.exponents.clone(), f(&chi)?);
        }
        Ok(CharFunction { values })
    }

    pub fn at(&self, chi: &[u64]) -> Rat {
        self.values.get(chi).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, v: &VirtualChar) -> Rat {
        v.evaluate(|c| self.at(c))
    }
}

/// Exponent of the idèle component at `v` on `φ ∈ Ĝ^{d+2}`.
#[derive(Clone, Debug, Serialize)]
pub struct IdeleEntry {
    pub phi: Vec<u64>,
    #[serde(with = "crate::serde_big::rat")]
    pub exponent: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaIdele {
    pub group: Vec<u64>,
    pub c: u32,
    pub places: BTreeMap<u64, Vec<IdeleEntry>>,
    /// Whether each exponent is constant on `φ ↦ φ^k`, `k` prime to the exponent of `G`.
    pub orbit_constant: bool,
}

impl ThetaIdele {
    pub fn exponent(&self, v: u64, phi: &[u64]) -> Rat {
        self.places
            .get(&v)
            .and_then(|es| es.iter().find(|e| e.phi == phi))
            .map(|e| e.exponent.clone())
            .unwrap_or_else(Rat::zero)
    }
}

const IDELE_CAP: u64 = 50_000;

/// The idèle with `v`-component exponent `−c·T_{v,𝒢}(Θ^D(φ))`; `c = 2` when `squared`.
pub fn main_theorem_idele(bd: &BranchData, squared: bool) -> Result<ThetaIdele> {
    let g = bd.group()?;
    let n = bd.d as usize + 2;
    let count = g.order().checked_pow(n as u32).unwrap_or(u64::MAX);
    if count > IDELE_CAP {
        return input(format!("#Ĝ^{n} = {count} exceeds the enumeration cap"));
    }
    let table = bd.degree_table()?;
    let c: u32 = if squared { 2 } else { 1 };
    let radix = Radix::new(g.power_orders(n));
    let mut places = BTreeMap::new();
    let mut orbit_constant = true;
    let ex = g.exponent();
    for v in bd.residue_primes() {
        let over = bd.components_over(v);
        let tf = CharFunction::tabulate(&g, |chi| t_general_over(bd, &table, chi, &over))?;
        let mut entries = Vec::new();
        let mut by_phi = BTreeMap::new();
        for phi in radix.all() {
            let parts = split_tuple(&g, n, &phi);
            let e = -tf.eval(&theta_nd(&g, &parts)) * Rat::from_integer(c.into());
            by_phi.insert(phi.clone(), e.clone());
            if !e.is_zero() {
                entries.push(IdeleEntry { phi, exponent: e });
            }
        }
        for (phi, e) in &by_phi {
            for k in 2..ex {
                if k.gcd(&ex) == 1 && by_phi[&radix.scale(phi, k)] != *e {
                    orbit_constant = false;
                }
            }
        }
        places.insert(v, entries);
    }
    Ok(ThetaIdele { group: bd.group.clone(), c, places, orbit_constant })
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralityReport {
    pub scale: String,
    /// `(χ, y)` with `F(χ)·y ≢ 0 mod #G`; integrality is only expected when empty.
    pub cartier_violations: Vec<(Vec<u64>, String)>,
    /// `(character, (#G)^{d+1}·T)` for every character.
    pub values: Vec<(Vec<u64>, String)>,
    pub violations: Vec<Vec<u64>>,
    pub passed: bool,
}

/// Checks `(#G)^{d+1}·T_{π,𝒢}(ψ) ∈ Z` for every character `ψ`.
pub fn integrality_check(bd: &BranchData) -> Result<IntegralityReport> {
    let g = bd.group()?;
    let table = bd.degree_table()?;
    let scale = BigInt::from(g.order()).pow(bd.d + 1);
    let mut values = Vec::new();
    let mut violations = Vec::new();
    for chi in g.characters() {
        let t = t_pi_general(bd, &table, &chi)? * Rat::from_integer(scale.clone());
        if !t.is_integer() {
            violations.push(chi.exponents.clone());
        }
        values.push((chi.exponents.clone(), rat_to_string(&t)));
    }
    Ok(IntegralityReport {
        scale: scale.to_string(),
        cartier_violations: cartier_violations(bd)?,
        passed: violations.is_empty(),
        values,
        violations,
    })
}

/// A polynomial in `X₁…X_n` keyed by exponent vectors.
pub type Poly = BTreeMap<Vec<u32>, BigInt>;

/// `Σ_{I ⊆ {1..n}} (−1)^{#I} (Σ_{i∈I} Xᵢ)^q`, expanded.
pub fn telescope_sum(n: usize, q: u32) -> Poly {
    let mut out = Poly::new();
    let mut fact = vec![BigInt::one()];
    for k in 1..=q as usize {
        let next = &fact[k - 1] * k;
        fact.push(next);
    }
    for mask in 0u32..(1 << n) {
        let vars: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let sign = if vars.len() % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        // compositions of q into #I parts
        let mut parts = vec![0u32; vars.len()];
        compositions(q, 0, &mut parts, &mut |p| {
            let mut mono = vec![0u32; n];
            let mut coeff = fact[q as usize].clone();
            for (k, &e) in p.iter().enumerate() {
                mono[vars[k]] = e;
                coeff /= &fact[e as usize];
            }
            let c = out.entry(mono.clone()).or_insert_with(BigInt::zero);
            *c += &sign * coeff;
            if c.is_zero() {
                out.remove(&mono);
            }
        });
    }
    out
}

fn compositions(q: u32, i: usize, parts: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if i == parts.len() {
        if q == 0 {
            f(parts);
        }
        return;
    }
    if i + 1 == parts.len() {
        parts[i] = q;
        f(parts);
        return;
    }
    for e in 0..=q {
        parts[i] = e;
        compositions(q - e, i + 1, parts, f);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TelescopeReport {
    pub n: usize,
    pub q: u32,
    pub vanishes: bool,
    /// Nonzero terms as `(exponents, coefficient)`.
    pub residual: Vec<(Vec<u32>, String)>,
}

/// Verifies the alternating sum vanishes for `q < n`; otherwise reports the residual.
pub fn telescope_check(n: usize, q: u32) -> Result<TelescopeReport> {
    if n > 16 {
        return input("n above 16 is outside the supported range");
    }
    let p = telescope_sum(n, q);
    Ok(TelescopeReport {
        n,
        q,
        vanishes: p.is_empty(),
        residual: p.into_iter().map(|(k, v)| (k, v.to_string())).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn cyclic_bd() -> BranchData {
        BranchData::from_json(
            r#"{"group":[5],"d":1,"residue_prime":241,
                "components":[
                  {"name":"D0","inertia_order":5,"inertia_generator_exponent":4,"self_intersection":-20,"euler_char":1},
                  {"name":"Dinf","inertia_order":1,"self_intersection":-20,"euler_char":1}],
                "cross_intersections":[[0,1,20]],
                "fibres":[{"multiplicities":[[0,1],[1,1]]}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn g_values() {
        let bd = cyclic_bd();
        let g = bd.group().unwrap();
        let chi0 = GCharacter::new(&g, vec![1]).unwrap();
        for a in 0..5 {
            let chi = chi0.pow(-a);
            assert_eq!(bd.g_value(0, &chi).unwrap(), rat(-a, 5));
            assert!(bd.g_value(1, &chi).unwrap().is_zero());
        }
        assert_eq!(bd.f_divisor(&chi0.pow(-1)).unwrap()["D0"], -1);
        assert!(bd.f_divisor(&chi0.pow(5)).unwrap().is_empty());
    }

    #[test]
    fn surface_values_241() {
        let bd = cyclic_bd();
        let g = bd.group().unwrap();
        let chi0 = GCharacter::new(&g, vec![1]).unwrap();
        let expect = [rat(0, 1), rat(7, 5), rat(2, 1), rat(9, 5), rat(4, 5)];
        let table = bd.degree_table().unwrap();
        for a in 0..5 {
            let t = t_pi_surface(&bd, &chi0.pow(-a)).unwrap();
            assert_eq!(t, expect[a as usize]);
            assert_eq!(t_pi_general(&bd, &table, &chi0.pow(-a)).unwrap(), t);
        }
    }

    #[test]
    fn rank_two_doubles() {
        let mut bd = cyclic_bd();
        bd.rank = Some(2);
        let table = bd.degree_table().unwrap();
        let g = bd.group().unwrap();
        for chi in g.characters() {
            assert_eq!(t_pi_general(&bd, &table, &chi).unwrap(), t_pi_surface(&bd, &chi).unwrap() * rat(2, 1));
        }
    }

    #[test]
    fn fibre_relation_is_validated() {
        let mut bd = cyclic_bd();
        bd.components[1].self_intersection = -19;
        assert!(bd.validate().is_err());
    }

    #[test]
    fn idele_vanishes_on_trivial_factor() {
        let bd = cyclic_bd();
        let id = main_theorem_idele(&bd, false).unwrap();
        for e in &id.places[&241] {
            assert!(e.phi.iter().all(|&x| x != 0));
        }
        let sq = main_theorem_idele(&bd, true).unwrap();
        assert_eq!(sq.exponent(241, &[4, 4, 4]), id.exponent(241, &[4, 4, 4]) * rat(2, 1));
    }

    #[test]
    fn telescoping() {
        for n in 1..=6 {
            for q in 0..n as u32 {
                assert!(telescope_check(n, q).unwrap().vanishes, "n = {n}, q = {q}");
            }
        }
        let r = telescope_check(2, 2).unwrap();
        assert_eq!(r.residual, vec![(vec![1, 1], "2".to_string())]);
    }

    #[test]
    fn integrality_on_modular_shape() {
        let rep = integrality_check(&cyclic_bd()).unwrap();
        assert!(rep.passed);
        assert!(rep.values.contains(&(vec![4], "35".to_string())));
        assert!(rep.cartier_violations.is_empty());
    }

    #[test]
    fn fuzzed_data_is_integral() {
        for seed in 0..40 {
            let bd = fuzz_branch_data(seed);
            bd.validate().unwrap();
            let rep = integrality_check(&bd).unwrap();
            assert!(rep.cartier_violations.is_empty(), "seed {seed}");
            assert!(rep.passed, "seed {seed}: {:?}", rep.violations);
        }
    }
}
