use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_prime_r, norm_fast, residue_degree, split_prime, CycIdeal, PrimeIdeal};
use crate::arith::primes_up_to;
use crate::cyclo::CycInt;
use crate::error::{input, Error, Result};
use crate::linalg::{hnf, lll, smith, IncrementalHnf, Row};

/// Trial budget for randomized searches; `CUBICTK_BUDGET` overrides the default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Budget {
    pub max_trials: u64,
}

impl Default for Budget {
    fn default() -> Self {
        let max_trials = std::env::var("CUBICTK_BUDGET").ok().and_then(|s| s.parse().ok()).unwrap_or(2_000_000);
        Budget { max_trials }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassGroupOptions {
    pub invert_two: bool,
    /// Factor-base norm bound; `max(200, 2r²)` when unset.
    pub bound: Option<u64>,
    /// Largest `r` for which `h⁺ = 1` is assumed.
    pub max_r: u64,
    pub budget: Budget,
    pub seed: u64,
}

impl Default for ClassGroupOptions {
    fn default() -> Self {
        ClassGroupOptions { invert_two: false, bound: None, max_r: 23, budget: Budget::default(), seed: 1 }
    }
}

/// Coordinates of a class on the Smith generators of its group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdealClass {
    #[serde(with = "crate::serde_big::vec")]
    pub coords: Vec<BigInt>,
}

/// `Zᵈ / (relations)` in Smith form: `y = x·to` reduced mod the invariants.
#[derive(Clone, Debug)]
struct Presentation {
    invariants: Vec<BigInt>,
    to: Vec<Row>,
    lift: Vec<Row>,
}

impl Presentation {
    fn new(relations: &[Row], dim: usize) -> Self {
        let square = hnf(relations, dim);
        assert_eq!(square.len(), dim, "relations must have full rank");
        let (diag, v, vinv) = smith(&square);
        let keep: Vec<usize> = (0..dim).filter(|&i| !diag[i].is_one()).collect();
        Presentation {
            invariants: keep.iter().map(|&i| diag[i].clone()).collect(),
            to: (0..dim).map(|i| keep.iter().map(|&k| v[i][k].clone()).collect()).collect(),
            lift: keep.iter().map(|&k| vinv[k].clone()).collect(),
        }
    }

    fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        (0..self.invariants.len())
            .map(|k| {
                let s: BigInt = x.iter().zip(&self.to).map(|(a, row)| a * &row[k]).sum();
                s.mod_floor(&self.invariants[k])
            })
            .collect()
    }

    fn lift(&self, y: &[BigInt]) -> Vec<BigInt> {
        let dim = self.to.len();
        let mut x = vec![BigInt::zero(); dim];
        for (c, row) in y.iter().zip(&self.lift) {
            for (xi, ri) in x.iter_mut().zip(row) {
                *xi += c * ri;
            }
        }
        x
    }
}

/// A class group certified against the analytic class number.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub r: u64,
    pub invert_two: bool,
    pub bound: u64,
    pub factor_base: Vec<PrimeIdeal>,
    pub h_minus: BigInt,
    /// Order of `Cl(Z[ζ_r])`, equal to `h⁻` under the `h⁺ = 1` assumption.
    pub full_order: BigInt,
    pub trials: u64,
    pub relations: usize,
    /// Rational primes whose prime ideals were inverted.
    pub inverted: Vec<u64>,
    lattice: IncrementalHnf,
    bcols: Vec<usize>,
    full: Presentation,
    local: Option<Presentation>,
    perms: Vec<Vec<usize>>,
    by_p: BTreeMap<u64, Vec<usize>>,
}

fn cache() -> &'static Mutex<HashMap<(u64, ClassGroupOptions), Arc<ClassGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, ClassGroupOptions), Arc<ClassGroup>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn factor_base(r: u64, bound: u64) -> Vec<PrimeIdeal> {
    let mut fb = Vec::new();
    for p in primes_up_to(bound) {
        if p == r {
            fb.push(PrimeIdeal::ramified(r));
            continue;
        }
        let f = residue_degree(r, p);
        if (p as f64).powi(f as i32) <= bound as f64 {
            fb.extend(split_prime(r, p).expect("unramified prime"));
        }
    }
    fb
}

fn random_candidate(r: u64, rng: &mut ChaCha8Rng, trials: u64) -> CycInt {
    let n = (r - 1) as usize;
    if n <= 10 {
        // low degree: dense with a slowly widening coefficient range
        let spread = 1 + (trials / 2000).min(30) as i64;
        let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-spread..=spread)).collect();
        return CycInt::from_i64s(r, &c);
    }
    let w = rng.gen_range(2..=6.min(n));
    let mut c = vec![0i64; n];
    let mut placed = 0;
    while placed < w {
        let i = rng.gen_range(0..n);
        if c[i] == 0 {
            let mag = if rng.gen_ratio(1, 6) { 2 } else { 1 };
            c[i] = if rng.gen_bool(0.5) { mag } else { -mag };
            placed += 1;
        }
    }
    CycInt::from_i64s(r, &c)
}

/// Splits `|n|` over `primes`; `None` if a cofactor remains.
fn smooth_part(n: &BigInt, primes: &[u64]) -> Option<Vec<(u64, u32)>> {
    let mut m = n.abs();
    if m.is_zero() {
        return None;
    }
    let mut out = Vec::new();
    for &p in primes {
        let pb = BigInt::from(p);
        let mut e = 0;
        while m.is_multiple_of(&pb) {
            m /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        if m.is_one() {
            break;
        }
    }
    m.is_one().then_some(out)
}

impl ClassGroup {
    /// Builds (or fetches from cache) the class group of `Z[ζ_r]`, or of `Z[ζ_r, 1/2]`.
    pub fn compute(r: u64, opts: &ClassGroupOptions) -> Result<Arc<ClassGroup>> {
        check_prime_r(r)?;
        if r > opts.max_r {
            return input(format!("r = {r} exceeds the supported bound {} (h⁺ = 1 is only assumed up to there)", opts.max_r));
        }
        let key = (r, opts.clone());
        if let Some(cg) = cache().lock().expect("class group cache").get(&key) {
            return Ok(cg.clone());
        }
        let cg = Arc::new(Self::build(r, opts)?);
        cache().lock().expect("class group cache").insert(key, cg.clone());
        Ok(cg)
    }

    fn build(r: u64, opts: &ClassGroupOptions) -> Result<ClassGroup> {
        let bound = opts.bound.unwrap_or_else(|| 200.max(2 * r * r));
        let h = crate::stickelberger::h_minus(r)?;
        let fb = factor_base(r, bound);
        let n = fb.len();
        let mut by_p: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (i, q) in fb.iter().enumerate() {
            by_p.entry(q.p).or_default().push(i);
        }
        let perms: Vec<Vec<usize>> = (0..r)
            .map(|a| {
                if a == 0 {
                    vec![]
                } else {
                    fb.iter().map(|q| q.galois_index(a, &fb)).collect()
                }
            })
            .collect();
        let rational: Vec<u64> = by_p.keys().copied().collect();
        let mut lattice = IncrementalHnf::new(n);
        let mut relations = 0usize;
        for idx in by_p.values() {
            let mut v = vec![BigInt::zero(); n];
            for &i in idx {
                v[i] = BigInt::one();
            }
            lattice.insert(v);
            relations += 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (r << 32));
        let mut trials = 0u64;
        loop {
            if let Some(det) = lattice.determinant() {
                if det == h {
                    break;
                }
                if det < h {
                    return Err(Error::Math(format!(
                        "class group certificate mismatch for r = {r}: relation index {det} below analytic h⁻ = {h}"
                    )));
                }
                if lattice.modulus().is_none_or(|m| &det < m) {
                    lattice.set_modulus(det);
                }
            }
            if trials >= opts.budget.max_trials {
                let got = lattice.determinant().map_or("not yet full rank".to_string(), |d| d.to_string());
                return Err(Error::Budget(format!(
                    "class group for r = {r}: budget of {} trials exhausted (relation index {got}, analytic h⁻ = {h}); \
                     raise CUBICTK_BUDGET or the factor-base bound",
                    opts.budget.max_trials
                )));
            }
            trials += 1;
            let x = random_candidate(r, &mut rng, trials);
            let nx = norm_fast(&x);
            if nx.abs().is_one() {
                continue;
            }
            let Some(fact) = smooth_part(&nx, &rational) else { continue };
            let Some(v) = element_vector(&x, &fact, &fb, &by_p, n) else { continue };
            for a in 1..r {
                let mut w = vec![BigInt::zero(); n];
                for (i, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        w[perms[a as usize][i]] = c.clone();
                    }
                }
                if lattice.insert(w) {
                    relations += 1;
                }
            }
        }
        let canonical = lattice.canonical();
        let bcols: Vec<usize> = (0..n).filter(|&c| !canonical[c][c].is_one()).collect();
        let rb: Vec<Row> = bcols.iter().map(|&i| bcols.iter().map(|&j| canonical[i][j].clone()).collect()).collect();
        let full = Presentation::new(&rb, bcols.len());
        let mut cg = ClassGroup {
            r,
            invert_two: opts.invert_two,
            bound,
            factor_base: fb,
            h_minus: h.clone(),
            full_order: h,
            trials,
            relations,
            inverted: vec![r],
            lattice,
            bcols,
            full,
            local: None,
            perms,
            by_p,
        };
        if opts.invert_two {
            let k = cg.full.invariants.len();
            let mut rels: Vec<Row> = (0..k)
                .map(|i| (0..k).map(|j| if i == j { cg.full.invariants[i].clone() } else { BigInt::zero() }).collect())
                .collect();
            for q in split_prime(r, 2)? {
                rels.push(cg.full_class(&q.ideal(), opts.budget)?.coords);
            }
            cg.local = Some(Presentation::new(&rels, k));
            cg.inverted = vec![2, r];
        }
        Ok(cg)
    }

    pub fn invariants(&self) -> &[BigInt] {
        match &self.local {
            Some(l) => &l.invariants,
            None => &self.full.invariants,
        }
    }

    pub fn order(&self) -> BigInt {
        self.invariants().iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants().is_empty()
    }

    pub fn exponent(&self) -> BigInt {
        self.invariants().iter().fold(BigInt::one(), |a, b| a.lcm(b))
    }

    pub fn zero(&self) -> IdealClass {
        IdealClass { coords: vec![BigInt::zero(); self.invariants().len()] }
    }

    pub fn generators(&self) -> Vec<IdealClass> {
        let k = self.invariants().len();
        (0..k)
            .map(|i| IdealClass { coords: (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect() })
            .collect()
    }

    fn normalize(&self, coords: Vec<BigInt>) -> IdealClass {
        IdealClass { coords: coords.iter().zip(self.invariants()).map(|(c, d)| c.mod_floor(d)).collect() }
    }

    /// Validates and reduces externally supplied coordinates.
    pub fn class_from_coords(&self, coords: &[BigInt]) -> Result<IdealClass> {
        if coords.len() != self.invariants().len() {
            return input(format!("class has {} coordinates, the group has {} invariants", coords.len(), self.invariants().len()));
        }
        Ok(self.normalize(coords.to_vec()))
    }

    pub fn add(&self, a: &IdealClass, b: &IdealClass) -> IdealClass {
        self.normalize(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self, a: &IdealClass) -> IdealClass {
        self.normalize(a.coords.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, a: &IdealClass, b: &IdealClass) -> IdealClass {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &IdealClass, k: &BigInt) -> IdealClass {
        self.normalize(a.coords.iter().map(|x| x * k).collect())
    }

    pub fn is_zero(&self, a: &IdealClass) -> bool {
        a.coords.iter().all(|c| c.is_zero())
    }

    /// Class of `Π 𝔭_i^{v_i}` over the factor base.
    pub fn class_of_vector(&self, v: &[BigInt]) -> IdealClass {
        let full = self.full_of_vector(v);
        self.localize(full)
    }

    fn full_of_vector(&self, v: &[BigInt]) -> IdealClass {
        let reduced = self.lattice.reduce(v);
        let b: Vec<BigInt> = self.bcols.iter().map(|&c| reduced[c].clone()).collect();
        IdealClass { coords: self.full.apply(&b) }
    }

    fn localize(&self, full: IdealClass) -> IdealClass {
        match &self.local {
            Some(l) => IdealClass { coords: l.apply(&full.coords) },
            None => full,
        }
    }

    pub fn class_of_prime_index(&self, i: usize) -> IdealClass {
        let mut v = vec![BigInt::zero(); self.factor_base.len()];
        v[i] = BigInt::one();
        self.class_of_vector(&v)
    }

    /// A factor-base exponent vector representing `c`.
    pub fn lift(&self, c: &IdealClass) -> Vec<BigInt> {
        let full = match &self.local {
            Some(l) => l.lift(&c.coords),
            None => c.coords.clone(),
        };
        let b = self.full.lift(&full);
        let mut v = vec![BigInt::zero(); self.factor_base.len()];
        for (&col, x) in self.bcols.iter().zip(b) {
            v[col] = x;
        }
        v
    }

    /// `σ_a(c)`.
    pub fn galois(&self, a: u64, c: &IdealClass) -> IdealClass {
        let a = a % self.r;
        assert!(a != 0, "σ_0 is undefined");
        let v = self.lift(c);
        let mut w = vec![BigInt::zero(); v.len()];
        for (i, x) in v.into_iter().enumerate() {
            w[self.perms[a as usize][i]] = x;
        }
        self.class_of_vector(&w)
    }

    /// Complex conjugation `σ_{−1}`.
    pub fn conj(&self, c: &IdealClass) -> IdealClass {
        self.galois(self.r - 1, c)
    }

    /// Columns are the images of the generators under `σ_a`.
    pub fn galois_matrix(&self, a: u64) -> Vec<IdealClass> {
        self.generators().iter().map(|g| self.galois(a, g)).collect()
    }

    pub fn prime_index(&self, q: &PrimeIdeal) -> Option<usize> {
        self.by_p.get(&q.p)?.iter().copied().find(|&i| &self.factor_base[i] == q)
    }

    pub fn prime_class(&self, q: &PrimeIdeal, budget: Budget) -> Result<IdealClass> {
        match self.prime_index(q) {
            Some(i) => Ok(self.class_of_prime_index(i)),
            None => self.ideal_class(&q.ideal(), budget),
        }
    }

    /// Factor-base exponents of `I` when its norm is factor-base smooth.
    pub fn fb_vector(&self, ideal: &CycIdeal) -> Option<Vec<BigInt>> {
        let rational: Vec<u64> = self.by_p.keys().copied().collect();
        let fact = smooth_part(&ideal.norm(), &rational)?;
        let mut v = vec![BigInt::zero(); self.factor_base.len()];
        for (p, e) in fact {
            let mut total = 0u32;
            for &i in &self.by_p[&p] {
                let q = &self.factor_base[i];
                let k = q.ideal_valuation(ideal);
                total += k * q.f;
                v[i] = BigInt::from(k);
            }
            if total != e {
                return None;
            }
        }
        Some(v)
    }

    pub fn ideal_class(&self, ideal: &CycIdeal, budget: Budget) -> Result<IdealClass> {
        Ok(self.localize(self.full_class(ideal, budget)?))
    }

    fn full_class(&self, ideal: &CycIdeal, budget: Budget) -> Result<IdealClass> {
        if let Some(v) = self.fb_vector(ideal) {
            return Ok(self.full_of_vector(&v));
        }
        let rational: Vec<u64> = self.by_p.keys().copied().collect();
        let n_ideal = ideal.norm();
        let mut found = None;
        search_ideal(ideal, budget, |x| {
            let nx = norm_fast(x).abs();
            let q = &nx / &n_ideal;
            let fact = smooth_part(&q, &rational)?;
            let mut v = vec![BigInt::zero(); self.factor_base.len()];
            for (p, e) in fact {
                let shared = n_ideal.is_multiple_of(&BigInt::from(p));
                let mut total = 0u32;
                for &i in &self.by_p[&p] {
                    let pr = &self.factor_base[i];
                    let k = pr.valuation(x) - if shared { pr.ideal_valuation(ideal) } else { 0 };
                    total += k * pr.f;
                    v[i] = BigInt::from(k);
                }
                if total != e {
                    return None;
                }
            }
            found = Some(v);
            Some(())
        })?;
        let v = found.expect("search succeeded");
        let c = self.full_of_vector(&v);
        Ok(IdealClass { coords: c.coords.iter().zip(&self.full.invariants).map(|(x, d)| (-x).mod_floor(d)).collect() })
    }

    /// Human-readable factor-base expression `[(p, root or poly, exponent)]` of each generator.
    pub fn generator_expressions(&self) -> Vec<Vec<(u64, Vec<u64>, BigInt)>> {
        self.generators()
            .iter()
            .map(|g| {
                self.lift(g)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_zero())
                    .map(|(i, e)| (self.factor_base[i].p, self.factor_base[i].g.clone(), e))
                    .collect()
            })
            .collect()
    }

    pub fn report(&self) -> ClassGroupReport {
        ClassGroupReport {
            r: self.r,
            invert_two: self.invert_two,
            inverted_primes: self.inverted.clone(),
            order: self.order().to_string(),
            invariants: self.invariants().iter().map(|d| d.to_string()).collect(),
            full_order: self.full_order.to_string(),
            h_minus: self.h_minus.to_string(),
            h_plus_assumed: 1,
            factor_base_bound: self.bound,
            factor_base_size: self.factor_base.len(),
            relations: self.relations,
            trials: self.trials,
            generators: self
                .generator_expressions()
                .into_iter()
                .map(|g| g.into_iter().map(|(p, poly, e)| GeneratorTerm { p, poly, exponent: e.to_string() }).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorTerm {
    pub p: u64,
    /// `g` with `𝔭 = (p, g(ζ))`, lowest degree first.
    pub poly: Vec<u64>,
    pub exponent: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassGroupReport {
    pub r: u64,
    pub invert_two: bool,
    pub inverted_primes: Vec<u64>,
    pub order: String,
    pub invariants: Vec<String>,
    pub full_order: String,
    pub h_minus: String,
    pub h_plus_assumed: u32,
    pub factor_base_bound: u64,
    pub factor_base_size: usize,
    pub relations: usize,
    pub trials: u64,
    pub generators: Vec<Vec<GeneratorTerm>>,
}

fn element_vector(
    x: &CycInt,
    fact: &[(u64, u32)],
    fb: &[PrimeIdeal],
    by_p: &BTreeMap<u64, Vec<usize>>,
    n: usize,
) -> Option<Vec<BigInt>> {
    let mut v = vec![BigInt::zero(); n];
    for &(p, e) in fact {
        let idx = &by_p[&p];
        if idx.len() == 1 {
            let q = &fb[idx[0]];
            if e % q.f != 0 {
                return None;
            }
            v[idx[0]] = BigInt::from(e / q.f);
            continue;
        }
        let pb = BigInt::from(p);
        let xs: Vec<u64> = x.coeffs.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
        let mut total = 0;
        for &i in idx {
            let q = &fb[i];
            if let Some(c) = q.root() {
                let mut acc = 0u64;
                for &a in xs.iter().rev() {
                    acc = (crate::arith::mul_mod(acc, c, p) + a) % p;
                }
                if acc != 0 {
                    continue;
                }
            }
            let k = q.valuation(x);
            total += k * q.f;
            v[i] = BigInt::from(k);
        }
        if total != e {
            return None;
        }
    }
    Some(v)
}

fn t2_gram(r: u64) -> Vec<Vec<i64>> {
    let n = (r - 1) as usize;
    (0..n).map(|i| (0..n).map(|j| if i == j { r as i64 - 1 } else { -1 }).collect()).collect()
}

/// Runs `accept` on short elements of `I` (LLL-reduced basis, then small combinations)
/// until it returns `Some`.
fn search_ideal<F: FnMut(&CycInt) -> Option<()>>(ideal: &CycIdeal, budget: Budget, mut accept: F) -> Result<()> {
    let r = ideal.r;
    let basis = lll(&ideal.basis, &t2_gram(r));
    let elems: Vec<CycInt> = basis.into_iter().map(|b| CycInt::from_coeffs(r, b)).collect();
    let n = elems.len();
    for e in &elems {
        if !e.is_zero() && accept(e).is_some() {
            return Ok(());
        }
    }
    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    ideal.basis.hash(&mut hasher);
    let mut rng = ChaCha8Rng::seed_from_u64(hasher.finish());
    let span = n.min(12);
    for _ in 0..budget.max_trials {
        let w = rng.gen_range(2..=4.min(span).max(2));
        let mut x = CycInt::zero(r);
        for _ in 0..w {
            let i = rng.gen_range(0..span);
            x = if rng.gen_bool(0.5) { x.add(&elems[i]) } else { x.sub(&elems[i]) };
        }
        if !x.is_zero() && accept(&x).is_some() {
            return Ok(());
        }
    }
    Err(Error::Budget(format!("no suitable element found in the ideal within {} trials", budget.max_trials)))
}

/// A generator of `I` found among short elements, certified by `|N(x)| = N(I)`.
pub fn find_generator(ideal: &CycIdeal, budget: Budget) -> Result<CycInt> {
    let r = ideal.r;
    if ideal.is_unit() {
        return Ok(CycInt::one(r));
    }
    let target = ideal.norm();
    let mut gen = None;
    search_ideal(ideal, budget, |x| {
        if norm_fast(x).abs() == target {
            gen = Some(x.clone());
            Some(())
        } else {
            None
        }
    })?;
    Ok(gen.expect("search succeeded"))
}
