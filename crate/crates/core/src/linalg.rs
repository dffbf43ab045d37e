//! Integer lattices: Hermite and Smith normal forms, kernels and LLL.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Row = Vec<BigInt>;

fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

fn axpy(dst: &mut [BigInt], k: &BigInt, src: &[BigInt]) {
    if k.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += k * s;
        }
    }
}

/// Row-style Hermite normal form built one vector at a time. Once a modulus
/// `D` with `D·Zⁿ ⊆ L` is set, entries stay bounded by `D`.
#[derive(Clone, Debug)]
pub struct IncrementalHnf {
    pub n: usize,
    rows: Vec<Option<Row>>,
    modulus: Option<BigInt>,
}

impl IncrementalHnf {
    pub fn new(n: usize) -> Self {
        IncrementalHnf { n, rows: vec![None; n], modulus: None }
    }

    /// Starts from `D·Zⁿ`.
    pub fn with_modulus(n: usize, d: BigInt) -> Self {
        let mut h = Self::new(n);
        h.set_modulus(d);
        h
    }

    pub fn set_modulus(&mut self, d: BigInt) {
        assert!(d.is_positive());
        let old: Vec<Row> = self.rows.iter().flatten().cloned().collect();
        self.rows = (0..self.n)
            .map(|c| {
                let mut e = vec![BigInt::zero(); self.n];
                e[c] = d.clone();
                Some(e)
            })
            .collect();
        self.modulus = Some(d);
        for r in old {
            self.insert(r);
        }
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        self.modulus.as_ref()
    }

    fn reduce_tail(&self, v: &mut Row, from: usize) {
        if let Some(d) = &self.modulus {
            for x in v.iter_mut().skip(from) {
                *x = x.mod_floor(d);
            }
        }
        for c in from..self.n {
            if let Some(p) = &self.rows[c] {
                if !v[c].is_zero() {
                    let q = v[c].div_floor(&p[c]);
                    if !q.is_zero() {
                        axpy(v, &-q, p);
                    }
                }
            }
        }
    }

    /// Adds a vector to the lattice; returns whether the lattice grew.
    pub fn insert(&mut self, mut v: Row) -> bool {
        assert_eq!(v.len(), self.n);
        if let Some(d) = &self.modulus {
            for x in v.iter_mut() {
                *x = x.mod_floor(d);
            }
        }
        for c in 0..self.n {
            if v[c].is_zero() {
                continue;
            }
            match self.rows[c].take() {
                None => {
                    if v[c].is_negative() {
                        for x in v.iter_mut() {
                            *x = -&*x;
                        }
                    }
                    self.reduce_tail(&mut v, c + 1);
                    self.rows[c] = Some(v);
                    return true;
                }
                Some(mut p) => {
                    if v[c].is_multiple_of(&p[c]) {
                        let q = &v[c] / &p[c];
                        axpy(&mut v, &-q, &p);
                        self.rows[c] = Some(p);
                        continue;
                    }
                    let (g, s, t) = xgcd(&p[c], &v[c]);
                    let a = &p[c] / &g;
                    let b = &v[c] / &g;
                    let mut np: Row = p.iter().zip(&v).map(|(x, y)| &s * x + &t * y).collect();
                    let nv: Row = p.iter().zip(&v).map(|(x, y)| &b * x - &a * y).collect();
                    self.reduce_tail(&mut np, c + 1);
                    self.rows[c] = Some(np);
                    v = nv;
                    p.clear();
                    if let Some(d) = &self.modulus {
                        for x in v.iter_mut() {
                            *x = x.mod_floor(d);
                        }
                    }
                }
            }
        }
        false
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.n
    }

    /// `[Zⁿ : L]` when full rank.
    pub fn determinant(&self) -> Option<BigInt> {
        if !self.is_full_rank() {
            return None;
        }
        Some(self.rows.iter().flatten().enumerate().map(|(c, r)| r[c].clone()).product())
    }

    pub fn pivot(&self, c: usize) -> Option<&BigInt> {
        self.rows[c].as_ref().map(|r| &r[c])
    }

    /// Canonical HNF rows (pivot columns increasing, entries above pivots reduced).
    pub fn canonical(&self) -> Vec<Row> {
        let mut rows: Vec<(usize, Row)> =
            self.rows.iter().enumerate().filter_map(|(c, r)| r.clone().map(|r| (c, r))).collect();
        for i in (0..rows.len()).rev() {
            for j in i + 1..rows.len() {
                let (cj, rj) = rows[j].clone();
                let ri = &mut rows[i].1;
                let q = ri[cj].div_floor(&rj[cj]);
                if !q.is_zero() {
                    axpy(ri, &-q, &rj);
                }
            }
        }
        rows.into_iter().map(|(_, r)| r).collect()
    }

    /// Reduces `v` modulo the lattice to its canonical representative.
    pub fn reduce(&self, v: &[BigInt]) -> Row {
        let mut v = v.to_vec();
        for c in 0..self.n {
            if let Some(p) = &self.rows[c] {
                let q = v[c].div_floor(&p[c]);
                if !q.is_zero() {
                    axpy(&mut v, &-q, p);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        for c in 0..self.n {
            if v[c].is_zero() {
                continue;
            }
            match &self.rows[c] {
                Some(p) if v[c].is_multiple_of(&p[c]) => {
                    let q = &v[c] / &p[c];
                    axpy(&mut v, &-q, p);
                }
                _ => return false,
            }
        }
        true
    }
}

/// Canonical HNF of the row lattice spanned by `rows`.
pub fn hnf(rows: &[Row], n: usize) -> Vec<Row> {
    let mut h = IncrementalHnf::new(n);
    for r in rows {
        h.insert(r.clone());
    }
    h.canonical()
}

/// A basis of `{x ∈ Zⁿ : A x = 0}` for an `m × n` matrix `A`.
pub fn kernel(a: &[Row], n: usize) -> Vec<Row> {
    // Row-reduce [Aᵀ | I]; rows whose Aᵀ part vanishes span the kernel.
    let m = a.len();
    let mut rows: Vec<Row> = (0..n)
        .map(|i| {
            let mut r: Row = a.iter().map(|row| row[i].clone()).collect();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut top = 0;
    for c in 0..m {
        loop {
            let nz: Vec<usize> = (top..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            rows.swap(top, piv);
            let mut done = true;
            for i in top + 1..rows.len() {
                if !rows[i][c].is_zero() {
                    let q = rows[i][c].div_floor(&rows[top][c]);
                    let p = rows[top].clone();
                    axpy(&mut rows[i], &-q, &p);
                    if !rows[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                top += 1;
                break;
            }
        }
        if top == rows.len() {
            break;
        }
    }
    let basis: Vec<Row> = rows[top..].iter().map(|r| r[m..].to_vec()).collect();
    hnf(&basis, n)
}

/// Smith normal form `U·A·V = D` of a square matrix; returns `(diag, V, V⁻¹)`.
pub fn smith(a: &[Row]) -> (Vec<BigInt>, Vec<Row>, Vec<Row>) {
    let n = a.len();
    let mut m: Vec<Row> = a.to_vec();
    let ident = |n: usize| -> Vec<Row> {
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
    };
    let mut v = ident(n);
    let mut vinv = ident(n);
    // column op: col_j += k col_i ⇒ V ← V·E, V⁻¹ ← E⁻¹·V⁻¹ (row_i -= k row_j)
    let col_add = |m: &mut Vec<Row>, v: &mut Vec<Row>, vinv: &mut Vec<Row>, j: usize, i: usize, k: &BigInt| {
        for row in m.iter_mut().chain(v.iter_mut()) {
            let t = &row[i] * k;
            row[j] += t;
        }
        let rj = vinv[j].clone();
        axpy(&mut vinv[i], &-k, &rj);
    };
    let col_swap = |m: &mut Vec<Row>, v: &mut Vec<Row>, vinv: &mut Vec<Row>, i: usize, j: usize| {
        for row in m.iter_mut().chain(v.iter_mut()) {
            row.swap(i, j);
        }
        vinv.swap(i, j);
    };
    let col_neg = |m: &mut Vec<Row>, v: &mut Vec<Row>, vinv: &mut Vec<Row>, i: usize| {
        for row in m.iter_mut().chain(v.iter_mut()) {
            row[i] = -&row[i];
        }
        for x in vinv[i].iter_mut() {
            *x = -&*x;
        }
    };
    for t in 0..n {
        loop {
            // pick the smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            m.swap(t, bi);
            col_swap(&mut m, &mut v, &mut vinv, t, bj);
            let mut clean = true;
            for i in t + 1..n {
                let q = m[i][t].div_floor(&m[t][t]);
                let pr = m[t].clone();
                axpy(&mut m[i], &-q, &pr);
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = m[t][j].div_floor(&m[t][t]);
                if !q.is_zero() {
                    col_add(&mut m, &mut v, &mut vinv, j, t, &-q);
                }
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut fixed = true;
            'outer: for i in t + 1..n {
                for j in t + 1..n {
                    if !m[i][j].is_multiple_of(&m[t][t]) {
                        let ri = m[i].clone();
                        axpy(&mut m[t], &BigInt::one(), &ri);
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if m[t][t].is_negative() {
            col_neg(&mut m, &mut v, &mut vinv, t);
        }
    }
    let diag = (0..n).map(|i| m[i][i].clone()).collect();
    (diag, v, vinv)
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(a: &[Row]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// LLL reduction (δ = 0.99) of `basis` for the integral bilinear form `gram`.
pub fn lll(basis: &[Row], gram: &[Vec<i64>]) -> Vec<Row> {
    let n = basis.len();
    let mut b: Vec<Row> = basis.to_vec();
    if n <= 1 {
        return b;
    }
    let dot = |x: &Row, y: &Row| -> f64 {
        let mut gy = vec![BigInt::zero(); y.len()];
        for (i, row) in gram.iter().enumerate() {
            for (j, &g) in row.iter().enumerate() {
                if g != 0 && !y[j].is_zero() {
                    gy[i] += &y[j] * g;
                }
            }
        }
        let s: BigInt = x.iter().zip(&gy).map(|(a, c)| a * c).sum();
        s.to_f64().unwrap_or(f64::MAX)
    };
    let gso = |b: &Vec<Row>| -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut mu = vec![vec![0.0; n]; n];
        let mut bb = vec![0.0; n];
        let g: Vec<Vec<f64>> = (0..n).map(|i| (0..=i).map(|j| dot(&b[i], &b[j])).collect()).collect();
        for i in 0..n {
            for j in 0..i {
                let mut s = g[i][j];
                for k in 0..j {
                    s -= mu[j][k] * mu[i][k] * bb[k];
                }
                mu[i][j] = if bb[j] > 0.0 { s / bb[j] } else { 0.0 };
            }
            let mut s = g[i][i];
            for k in 0..i {
                s -= mu[i][k] * mu[i][k] * bb[k];
            }
            bb[i] = s.max(0.0);
        }
        (mu, bb)
    };
    let (mut mu, mut bb) = gso(&b);
    let mut k = 1;
    let mut iterations = 0usize;
    while k < n && iterations < 100_000 {
        iterations += 1;
        let mut changed = false;
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let qi = BigInt::from(q as i64);
                let bj = b[j].clone();
                axpy(&mut b[k], &-qi, &bj);
                for l in 0..j {
                    mu[k][l] -= q * mu[j][l];
                }
                mu[k][j] -= q;
                changed = true;
            }
        }
        if changed {
            let r = gso(&b);
            mu = r.0;
            bb = r.1;
        }
        if bb[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bb[k - 1] {
            b.swap(k, k - 1);
            let r = gso(&b);
            mu = r.0;
            bb = r.1;
            k = k.saturating_sub(1).max(1);
        } else {
            k += 1;
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Row> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_small() {
        let h = hnf(&rows(&[&[2, 4], &[3, 1]]), 2);
        assert_eq!(h, rows(&[&[1, 7], &[0, 10]]));
    }

    #[test]
    fn modular_hnf_matches_plain() {
        let gens = rows(&[&[6, 4, 2], &[1, 7, 3], &[5, 5, 9], &[2, 0, 8]]);
        let plain = hnf(&gens, 3);
        let det: BigInt = (0..3).map(|i| plain[i][i].clone()).product();
        let mut m = IncrementalHnf::with_modulus(3, det * 7);
        for g in &gens {
            m.insert(g.clone());
        }
        assert_eq!(m.canonical(), plain);
    }

    #[test]
    fn kernel_small() {
        let k = kernel(&rows(&[&[1, 2, 3], &[2, 4, 6]]), 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: BigInt = v.iter().zip([1, 2, 3]).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn smith_small() {
        let a = rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (d, v, vinv) = smith(&a);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                let s: BigInt = (0..n).map(|k| &v[i][k] * &vinv[k][j]).sum();
                assert_eq!(s, if i == j { BigInt::one() } else { BigInt::zero() });
            }
        }
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), BigInt::from(-144));
    }

    #[test]
    fn lll_shortens() {
        let b = rows(&[&[1, 0, 0], &[105, 1, 0], &[33, 71, 1]]);
        let g = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let r = lll(&b, &g);
        let max: BigInt = r.iter().flat_map(|x| x.iter().map(|c| c.abs())).max().unwrap();
        assert!(max <= BigInt::from(2));
    }
}
