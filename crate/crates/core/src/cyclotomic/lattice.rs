use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{check_prime_r, Budget, ClassGroup, CycIdeal, IdealClass};
use crate::cyclo::CycInt;
use crate::error::{input, Error, Result};
use crate::linalg::IncrementalHnf;

/// A Z-free Z[G]-module for `G = Z/r`, given by the matrix of the generator on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GLattice {
    pub r: u64,
    pub action: Vec<Vec<i64>>,
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

impl GLattice {
    pub fn new(r: u64, action: Vec<Vec<i64>>) -> Result<Self> {
        check_prime_r(r)?;
        let n = action.len();
        if action.iter().any(|row| row.len() != n) {
            return input("action matrix must be square");
        }
        let m = GLattice { r, action };
        let mut p = m.action.clone();
        for _ in 1..r {
            p = mat_mul(&p, &m.action);
        }
        let ident = (0..n).all(|i| (0..n).all(|j| p[i][j] == i64::from(i == j)));
        if !ident {
            return input(format!("the generator does not have order dividing {r}"));
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        self.action.len()
    }

    pub fn zero(r: u64) -> Self {
        GLattice { r, action: vec![] }
    }

    pub fn trivial(r: u64) -> Self {
        GLattice { r, action: vec![vec![1]] }
    }

    /// `Z[G]` with the generator permuting the basis cyclically.
    pub fn regular(r: u64) -> Self {
        let n = r as usize;
        GLattice { r, action: (0..n).map(|i| (0..n).map(|j| i64::from(i == (j + 1) % n)).collect()).collect() }
    }

    /// An ideal `𝔄` viewed over Z, the generator acting by `ζ^e`.
    pub fn from_ideal(ideal: &CycIdeal, e: u64) -> Result<Self> {
        let r = ideal.r;
        let n = ideal.degree();
        let mut h = IncrementalHnf::new(n);
        for row in &ideal.basis {
            h.insert(row.clone());
        }
        let z = CycInt::zeta_pow(r, e as i64);
        let mut cols = Vec::with_capacity(n);
        for b in ideal.elements() {
            let mut y = b.mul(&z).coeffs;
            // express y in the triangular basis
            let mut c = vec![0i64; n];
            for (i, row) in ideal.basis.iter().enumerate() {
                let (q, rem) = y[i].div_rem(&row[i]);
                if !rem.is_zero() {
                    return Err(Error::Math("ideal is not ζ-stable".into()));
                }
                c[i] = i64::try_from(&q).map_err(|_| Error::Math("action entry overflow".into()))?;
                for (yj, bj) in y.iter_mut().zip(row) {
                    *yj -= &q * bj;
                }
            }
            cols.push(c);
        }
        let action = (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
        GLattice::new(r, action)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.r, other.r);
        let (a, b) = (self.rank(), other.rank());
        let mut m = vec![vec![0i64; a + b]; a + b];
        for i in 0..a {
            m[i][..a].copy_from_slice(&self.action[i]);
        }
        for i in 0..b {
            m[a + i][a..].copy_from_slice(&other.action[i]);
        }
        GLattice { r: self.r, action: m }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinitzResult {
    /// Z[ζ_r]-rank of `M^{∨,χ}`.
    pub rank: usize,
    pub class: IdealClass,
}

fn transpose_pow(a: &[Vec<i64>], j: u64) -> Vec<Vec<i64>> {
    let n = a.len();
    let t: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|k| a[k][i]).collect()).collect();
    let mut p: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|k| i64::from(i == k)).collect()).collect();
    for _ in 0..j {
        p = mat_mul(&p, &t);
    }
    p
}

/// Rank of a matrix over `Z[ζ_r]` after `ζ ↦ ρ` in `F_q`, by Gaussian elimination.
fn rank_mod_q(cols: &[Vec<CycInt>], q: u64, rho: u64) -> usize {
    use crate::arith::{mul_mod, pow_mod};
    let qb = BigInt::from(q);
    let mut m: Vec<Vec<u64>> = cols
        .iter()
        .map(|col| {
            col.iter()
                .map(|x| {
                    let mut acc = 0u64;
                    for c in x.coeffs.iter().rev() {
                        let cm = u64::try_from(c.mod_floor(&qb)).expect("reduced");
                        acc = (mul_mod(acc, rho, q) + cm) % q;
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let n = m.first().map_or(0, |c| c.len());
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, p);
        let inv = pow_mod(m[rank][c], q - 2, q);
        let pr = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            let f = mul_mod(row[c], inv, q);
            if f != 0 {
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x = (*x + q - mul_mod(f, *y, q)) % q;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// An integral basis (over `Q(ζ_r)`) of `{y : Aᵀy = ζ^{−e}y}`, via the columns
/// of `Σ_j ζ^{ej}(Aᵀ)^j` whose span is that eigenspace.
fn eigenspace_basis(m: &GLattice, e: u64) -> Result<Vec<Vec<CycInt>>> {
    let r = m.r;
    let n = m.rank();
    let f = crate::cyclo::field(r);
    let powers: Vec<Vec<Vec<i64>>> = (0..r).map(|j| transpose_pow(&m.action, j)).collect();
    // dim = Tr(P) = (1/r) Σ_j ζ^{ej} Tr(A^j)
    let trace_terms: Vec<(u64, BigInt)> =
        (0..r).map(|j| ((e * j) % r, BigInt::from((0..n).map(|i| powers[j as usize][i][i]).sum::<i64>()))).collect();
    let tr = CycInt::from_coeffs(r, f.reduce_cyclic(&trace_terms));
    let k = tr
        .as_integer()
        .filter(|t| t.is_multiple_of(&BigInt::from(r)))
        .map(|t| usize::try_from(&(t / BigInt::from(r))).unwrap_or(usize::MAX))
        .ok_or_else(|| Error::Math("eigenspace dimension is not an integer".into()))?;
    if k == 0 {
        return Ok(vec![]);
    }
    let cols: Vec<Vec<CycInt>> = (0..n)
        .map(|c| {
            (0..n)
                .map(|i| {
                    let terms: Vec<(u64, BigInt)> =
                        (0..r).map(|j| ((e * j) % r, BigInt::from(powers[j as usize][i][c]))).collect();
                    CycInt::from_coeffs(r, f.reduce_cyclic(&terms))
                })
                .collect()
        })
        .collect();
    let (q, rho) = super::crt_primes(r)[0];
    let mut chosen: Vec<Vec<CycInt>> = Vec::new();
    for col in cols {
        if col.iter().all(|x| x.is_zero()) {
            continue;
        }
        chosen.push(col);
        if rank_mod_q(&chosen, q, rho) < chosen.len() {
            chosen.pop();
        }
        if chosen.len() == k {
            return Ok(chosen);
        }
    }
    Err(Error::Math("could not extract an eigenspace basis".into()))
}

/// Determinant over `Z[ζ_r]` by cofactor expansion.
fn det_int(m: &[Vec<CycInt>]) -> CycInt {
    let k = m.len();
    let r = m[0][0].m;
    match k {
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            let mut acc = CycInt::zero(r);
            for j in 0..k {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<CycInt>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
                let t = m[0][j].mul(&det_int(&minor));
                acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

fn combinations(n: usize, k: usize, limit: usize) -> Option<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return Some(out);
    }
    loop {
        out.push(idx.clone());
        if out.len() > limit {
            return None;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Some(out);
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Rank and Steinitz class of `M^{∨,χ} = Hom_G(M, Z[ζ_r]χ^{-1})` for `χ(g) = ζ^e`.
pub fn steinitz_rim(m: &GLattice, e: u64, cg: &ClassGroup, budget: Budget) -> Result<SteinitzResult> {
    let r = m.r;
    if r < 5 {
        return input(format!("G must have prime order r >= 5, got {r}"));
    }
    if cg.r != r {
        return input("class group and lattice use different r");
    }
    if e % r == 0 {
        return input(format!("χ must have order {r}"));
    }
    let n = m.rank();
    if n == 0 {
        return Ok(SteinitzResult { rank: 0, class: cg.zero() });
    }
    let w = eigenspace_basis(m, e)?;
    let k = w.len();
    if k == 0 {
        return Ok(SteinitzResult { rank: 0, class: cg.zero() });
    }
    let combos = combinations(n, k, 60_000)
        .ok_or_else(|| Error::Budget(format!("too many {k}x{k} minors for a rank-{n} lattice")))?;
    let mut minors = Vec::with_capacity(combos.len());
    for cols in combos {
        let sub: Vec<Vec<CycInt>> = w.iter().map(|col| cols.iter().map(|&c| col[c].clone()).collect()).collect();
        let d = det_int(&sub);
        if !d.is_zero() {
            minors.push(d);
        }
    }
    // St = −[ideal of maximal minors]; the ideal's class is taken up to the principal scaling
    let ideal = CycIdeal::from_generators(r, &minors, None)?;
    let c = cg.ideal_class(&ideal, budget)?;
    Ok(SteinitzResult { rank: k, class: cg.neg(&c) })
}

/// `s_χ` of a finite module `Z[G]^m / (rows of R)`, rows given by coefficient
/// vectors of `g^0..g^{r−1}`: minus the class of the Fitting ideal after `g ↦ ζ^e`.
pub fn s_chi_finite(presentation: &[Vec<Vec<i64>>], e: u64, cg: &ClassGroup, budget: Budget) -> Result<IdealClass> {
    let r = cg.r;
    if e % r == 0 {
        return input(format!("χ must have order {r}"));
    }
    let m = presentation.first().map_or(0, |row| row.len());
    if m == 0 {
        return Ok(cg.zero());
    }
    if presentation.iter().any(|row| row.len() != m) {
        return input("presentation rows must have equal length");
    }
    let push = |coeffs: &[i64]| -> CycInt {
        let f = crate::cyclo::field(r);
        let terms: Vec<(u64, BigInt)> =
            coeffs.iter().enumerate().map(|(i, &c)| ((i as u64 * e) % r, BigInt::from(c))).collect();
        CycInt::from_coeffs(r, f.reduce_cyclic(&terms))
    };
    let rows: Vec<Vec<CycInt>> = presentation.iter().map(|row| row.iter().map(|c| push(c)).collect()).collect();
    let combos = combinations(rows.len(), m, 60_000)
        .ok_or_else(|| Error::Budget("too many minors in the presentation".into()))?;
    let mut minors = Vec::new();
    for sel in combos {
        let sub: Vec<Vec<CycInt>> = sel.iter().map(|&i| rows[i].clone()).collect();
        let d = det_int(&sub);
        if !d.is_zero() {
            minors.push(d);
        }
    }
    if minors.is_empty() {
        return input("presentation is not of full rank after pushing forward (module is infinite)");
    }
    let fitting = CycIdeal::from_generators(r, &minors, None)?;
    let c = cg.ideal_class(&fitting, budget)?;
    Ok(cg.neg(&c))
}

/// A formal Z-combination of named classes and their complex conjugates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassExpr {
    /// `(conjugated, name) ↦ multiplicity`.
    pub terms: BTreeMap<(bool, String), i64>,
}

impl ClassExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(name: &str) -> Self {
        let mut e = Self::default();
        e.terms.insert((false, name.to_string()), 1);
        e
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            let slot = out.terms.entry(k.clone()).or_insert(0);
            *slot += v;
            if *slot == 0 {
                out.terms.remove(k);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        ClassExpr { terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect() }
    }

    pub fn conj(&self) -> Self {
        ClassExpr { terms: self.terms.iter().map(|((c, s), v)| ((!c, s.clone()), *v)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, cg: &ClassGroup, values: &BTreeMap<String, IdealClass>) -> Result<IdealClass> {
        let mut acc = cg.zero();
        for ((c, s), v) in &self.terms {
            let x = values.get(s).ok_or_else(|| Error::Input(format!("no value for class symbol {s}")))?;
            let x = if *c { cg.conj(x) } else { x.clone() };
            acc = cg.add(&acc, &cg.scale(&x, &BigInt::from(*v)));
        }
        Ok(acc)
    }
}

/// `s_χ(M^∨) = −conj(s_χ(M))`.
pub fn dual_class(x: &ClassExpr) -> ClassExpr {
    x.conj().neg()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{p_chi, ClassGroupOptions};

    #[test]
    fn regular_and_trivial() {
        let cg = ClassGroup::compute(5, &ClassGroupOptions::default()).unwrap();
        let b = Budget::default();
        let reg = steinitz_rim(&GLattice::regular(5), 1, &cg, b).unwrap();
        assert_eq!(reg.rank, 1);
        let triv = steinitz_rim(&GLattice::trivial(5), 2, &cg, b).unwrap();
        assert_eq!(triv.rank, 0);
        let both = steinitz_rim(&GLattice::regular(5).direct_sum(&GLattice::regular(5)), 3, &cg, b).unwrap();
        assert_eq!(both.rank, 2);
    }

    #[test]
    fn ideal_round_trip_r23() {
        let cg = ClassGroup::compute(23, &ClassGroupOptions::default()).unwrap();
        let b = Budget::default();
        let q = p_chi(23, 47, 1).unwrap();
        let a = q.ideal();
        let ca = cg.prime_class(&q, b).unwrap();
        assert!(!cg.is_zero(&ca));
        let e = 1;
        let m = GLattice::from_ideal(&a, e).unwrap();
        let s = steinitz_rim(&m, e, &cg, b).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.class, cg.neg(&cg.conj(&ca)));
        let free = GLattice::from_ideal(&CycIdeal::unit(23), e).unwrap();
        let s2 = steinitz_rim(&m.direct_sum(&free), e, &cg, b).unwrap();
        assert_eq!(s2.rank, 2);
        assert_eq!(s2.class, s.class);
    }

    #[test]
    fn dual_is_involution() {
        let x = ClassExpr::symbol("P").add(&ClassExpr::symbol("Q").neg());
        assert_eq!(dual_class(&dual_class(&x)), x);
        assert!(dual_class(&ClassExpr::zero()).is_zero());
        let d = dual_class(&ClassExpr::symbol("P"));
        assert_eq!(d.terms.get(&(true, "P".to_string())), Some(&-1));
    }

    #[test]
    fn finite_modules() {
        let cg = ClassGroup::compute(23, &ClassGroupOptions { invert_two: true, ..Default::default() }).unwrap();
        let b = Budget::default();
        // Z/3 with trivial action: relations 3 and g − 1
        let mut g_minus_1 = vec![0i64; 23];
        g_minus_1[0] = -1;
        g_minus_1[1] = 1;
        let mut three = vec![0i64; 23];
        three[0] = 3;
        let t = vec![vec![three], vec![g_minus_1]];
        assert!(cg.is_zero(&s_chi_finite(&t, 1, &cg, b).unwrap()));
        let mut two = vec![0i64; 23];
        two[0] = 2;
        assert!(cg.is_zero(&s_chi_finite(&[vec![two]], 1, &cg, b).unwrap()));
        assert!(s_chi_finite(&[vec![vec![0i64; 23]]], 1, &cg, b).is_err());
    }
}
