//! Exact integer linear algebra: lattice echelon forms (over `Z` or modulo
//! `m`), lexicographically-first solutions of congruence systems, integer
//! and modular kernels, and Smith normal form for quotients of lattices.
//!
//! Every routine works with `i128` entries and checked arithmetic; an
//! overflow is a panic, not a wrong answer.

use crate::error::{Error, Result};

fn ck_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer overflow in exact linear algebra")
}

fn ck_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("integer overflow in exact linear algebra")
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// One row of an echelon basis: `row[pivot]` is the first nonzero entry and
/// is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonRow {
    pub pivot: usize,
    pub row: Vec<i128>,
}

fn reduce_tail(row: &mut [i128], from: usize, modulus: Option<i128>) {
    if let Some(m) = modulus {
        for v in &mut row[from..] {
            *v = v.rem_euclid(m);
        }
    }
}

/// Echelon basis of the lattice spanned by `rows`, plus `m * Z^ncols` when a
/// modulus is given.
///
/// The returned rows are sorted by pivot. They have the property that every
/// lattice vector whose entries before column `k` vanish is an integer
/// combination of the returned rows with pivot `>= k` (and, in the modular
/// case, of `m * e_j`). With a modulus the basis is full rank: one row per
/// column, each pivot divides `m`, and off-pivot entries lie in `[0, m)`.
///
/// Only pivots at columns `>= keep_from` are returned; earlier pivot rows are
/// still used for elimination but then dropped.
pub fn lattice_echelon(
    rows: Vec<Vec<i128>>,
    ncols: usize,
    modulus: Option<i128>,
    keep_from: usize,
) -> Vec<EchelonRow> {
    if let Some(m) = modulus {
        assert!(m > 0, "modulus must be positive");
    }
    let mut pending: Vec<Vec<i128>> = rows
        .into_iter()
        .map(|mut r| {
            assert_eq!(r.len(), ncols, "row length mismatch");
            reduce_tail(&mut r, 0, modulus);
            r
        })
        .filter(|r| r.iter().any(|&v| v != 0))
        .collect();
    let mut basis = Vec::new();
    for col in 0..ncols {
        let mut pivot: Option<Vec<i128>> = modulus.map(|m| {
            let mut p = vec![0i128; ncols];
            p[col] = m;
            p
        });
        let mut next = Vec::with_capacity(pending.len());
        for mut r in pending.drain(..) {
            if r[col] == 0 {
                next.push(r);
                continue;
            }
            match pivot.as_mut() {
                None => {
                    if r[col] < 0 {
                        for v in &mut r {
                            *v = -*v;
                        }
                    }
                    pivot = Some(r);
                }
                Some(p) => {
                    let a = p[col];
                    let b = r[col];
                    let (g, s, t) = ext_gcd(a, b);
                    let (ag, bg) = (a / g, b / g);
                    let mut np = vec![0i128; ncols];
                    let mut nr = vec![0i128; ncols];
                    for k in col..ncols {
                        np[k] = ck_add(ck_mul(s, p[k]), ck_mul(t, r[k]));
                        nr[k] = ck_add(ck_mul(bg, p[k]), -ck_mul(ag, r[k]));
                    }
                    debug_assert_eq!(np[col], g);
                    debug_assert_eq!(nr[col], 0);
                    reduce_tail(&mut np, col + 1, modulus);
                    reduce_tail(&mut nr, col + 1, modulus);
                    *p = np;
                    if nr.iter().any(|&v| v != 0) {
                        next.push(nr);
                    }
                }
            }
        }
        pending = next;
        if let Some(p) = pivot {
            if col >= keep_from {
                basis.push(EchelonRow { pivot: col, row: p });
            }
        }
    }
    debug_assert!(pending.is_empty());
    basis
}

/// Coordinates of `v` with respect to an echelon basis, or `None` if `v` is
/// not in the lattice spanned by the basis rows.
pub fn echelon_coordinates(basis: &[EchelonRow], v: &[i128]) -> Option<Vec<i128>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for b in basis {
        // entries strictly before this pivot must already be cleared
        if rest[..b.pivot].iter().any(|&x| x != 0) {
            return None;
        }
        let h = b.row[b.pivot];
        if rest[b.pivot] % h != 0 {
            return None;
        }
        let q = rest[b.pivot] / h;
        if q != 0 {
            for (x, &y) in rest.iter_mut().zip(&b.row) {
                *x = ck_add(*x, -ck_mul(q, y));
            }
        }
        coords.push(q);
    }
    if rest.iter().all(|&x| x == 0) {
        Some(coords)
    } else {
        None
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = ck_add(out.get(i, j), ck_mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `self * x` for a column vector `x`.
    pub fn apply(&self, x: &[i128]) -> Vec<i128> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(0i128, |acc, (&a, &b)| ck_add(acc, ck_mul(a, b))))
            .collect()
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `col[dst] += q * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: i128) {
        for i in 0..self.rows {
            let v = ck_add(self.get(i, dst), ck_mul(q, self.get(i, src)));
            self.set(i, dst, v);
        }
    }

    /// `row[dst] += q * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: i128) {
        for j in 0..self.cols {
            let v = ck_add(self.get(dst, j), ck_mul(q, self.get(src, j)));
            self.set(dst, j, v);
        }
    }
}

/// Smith normal form `S * A * T = D` where only the column transform `T`
/// and its inverse are tracked.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_r`, all positive.
    pub diagonal: Vec<i128>,
    pub col_transform: IntMatrix,
    pub col_transform_inv: IntMatrix,
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let mut m = a.clone();
    let n = m.cols;
    let mut t = IntMatrix::identity(n);
    let mut tinv = IntMatrix::identity(n);
    let mut diag = Vec::new();
    let mut k = 0;
    while k < m.rows.min(m.cols) {
        // smallest nonzero |entry| in the trailing block
        let mut best: Option<(usize, usize, i128)> = None;
        for i in k..m.rows {
            for j in k..m.cols {
                let v = m.get(i, j).abs();
                if v != 0 && best.is_none_or(|(_, _, b)| v < b) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((bi, bj, _)) = best else { break };
        m.swap_rows(k, bi);
        m.swap_cols(k, bj);
        t.swap_cols(k, bj);
        tinv.swap_rows(k, bj);
        loop {
            let p = m.get(k, k);
            let mut dirty = false;
            for i in k + 1..m.rows {
                let v = m.get(i, k);
                if v != 0 {
                    let q = v.div_euclid(p);
                    m.add_row(i, k, -q);
                    if m.get(i, k) != 0 {
                        dirty = true;
                    }
                }
            }
            for j in k + 1..m.cols {
                let v = m.get(k, j);
                if v != 0 {
                    let q = v.div_euclid(p);
                    m.add_col(j, k, -q);
                    t.add_col(j, k, -q);
                    tinv.add_row(k, j, q);
                    if m.get(k, j) != 0 {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // bring the smallest remainder in row/column k to the pivot
                let mut best = (k, k, m.get(k, k).abs());
                for i in k + 1..m.rows {
                    let v = m.get(i, k).abs();
                    if v != 0 && v < best.2 {
                        best = (i, k, v);
                    }
                }
                for j in k + 1..m.cols {
                    let v = m.get(k, j).abs();
                    if v != 0 && v < best.2 {
                        best = (k, j, v);
                    }
                }
                m.swap_rows(k, best.0);
                m.swap_cols(k, best.1);
                t.swap_cols(k, best.1);
                tinv.swap_rows(k, best.1);
                continue;
            }
            // divisibility of the trailing block
            let mut fix = None;
            'scan: for i in k + 1..m.rows {
                for j in k + 1..m.cols {
                    if m.get(i, j) % p != 0 {
                        fix = Some(i);
                        break 'scan;
                    }
                }
            }
            match fix {
                Some(i) => m.add_row(k, i, 1),
                None => break,
            }
        }
        let p = m.get(k, k);
        diag.push(p.abs());
        k += 1;
    }
    Smith { diagonal: diag, col_transform: t, col_transform_inv: tinv }
}

/// The quotient `L / I` of a lattice `L` by a sublattice `I`, both inside
/// `Z^n`, presented as `Z/d_1 + ... + Z/d_s + Z^f`.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    basis: Vec<EchelonRow>,
    /// Orders of the cyclic summands; 0 stands for `Z`.
    orders: Vec<u64>,
    /// Which coordinates (after the Smith transform) survive, aligned with
    /// `orders`.
    kept: Vec<usize>,
    transform: IntMatrix,
    transform_inv: IntMatrix,
}

impl LatticeQuotient {
    /// `basis` is an echelon basis of `L`; `sub_generators` span `I`.
    pub fn new(basis: Vec<EchelonRow>, sub_generators: &[Vec<i128>]) -> Result<Self> {
        let k = basis.len();
        let mut rel_rows = Vec::with_capacity(sub_generators.len());
        for g in sub_generators {
            let y = echelon_coordinates(&basis, g)
                .ok_or_else(|| Error::Internal("sublattice generator outside the lattice".into()))?;
            if y.iter().any(|&v| v != 0) {
                rel_rows.push(y);
            }
        }
        let rel = IntMatrix::from_rows(&rel_rows, k);
        let snf = smith_normal_form(&rel);
        let mut orders = Vec::new();
        let mut kept = Vec::new();
        for i in 0..k {
            match snf.diagonal.get(i) {
                Some(&1) => {}
                Some(&d) => {
                    orders.push(d as u64);
                    kept.push(i);
                }
                None => {
                    orders.push(0);
                    kept.push(i);
                }
            }
        }
        Ok(LatticeQuotient {
            basis,
            orders,
            kept,
            transform: snf.col_transform,
            transform_inv: snf.col_transform_inv,
        })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Coordinates of the class of `v` (which must lie in `L`), reduced
    /// modulo each finite order.
    pub fn class_of(&self, v: &[i128]) -> Option<Vec<i128>> {
        let y = echelon_coordinates(&self.basis, v)?;
        let k = y.len();
        let mut out = Vec::with_capacity(self.kept.len());
        for (&i, &d) in self.kept.iter().zip(&self.orders) {
            let mut s = 0i128;
            for (j, &yj) in y.iter().enumerate().take(k) {
                s = ck_add(s, ck_mul(yj, self.transform.get(j, i)));
            }
            out.push(if d == 0 { s } else { s.rem_euclid(d as i128) });
        }
        Some(out)
    }

    /// A representative vector in `L` of each cyclic generator.
    pub fn generators(&self) -> Vec<Vec<i128>> {
        let n = self.basis.first().map_or(0, |b| b.row.len());
        self.kept
            .iter()
            .map(|&i| {
                let mut v = vec![0i128; n];
                for (j, b) in self.basis.iter().enumerate() {
                    let c = self.transform_inv.get(i, j);
                    if c != 0 {
                        for (x, &y) in v.iter_mut().zip(&b.row) {
                            *x = ck_add(*x, ck_mul(c, y));
                        }
                    }
                }
                v
            })
            .collect()
    }
}

/// Echelon basis of `{x in Z^n : A x = 0}` (or `A x = 0 mod m`).
pub fn kernel_basis(a: &IntMatrix, modulus: Option<i128>) -> Vec<EchelonRow> {
    let (mr, n) = (a.rows, a.cols);
    let rows: Vec<Vec<i128>> = (0..n)
        .map(|j| {
            let mut r = a.column(j);
            r.resize(mr + n, 0);
            r[mr + j] = 1;
            r
        })
        .collect();
    lattice_echelon(rows, mr + n, modulus, mr)
        .into_iter()
        .map(|e| EchelonRow { pivot: e.pivot - mr, row: e.row[mr..].to_vec() })
        .collect()
}

/// Lexicographically smallest `x in [0, m)^n` with `A x = c (mod m)`, or
/// `None` if the system is inconsistent.
pub fn solve_mod_lexmin(a: &IntMatrix, c: &[i128], m: i128) -> Option<Vec<i128>> {
    assert!(m > 0);
    assert_eq!(c.len(), a.rows);
    let (mr, n) = (a.rows, a.cols);
    if m == 1 {
        return Some(vec![0; n]);
    }
    let width = mr + 1 + n;
    let mut rows: Vec<Vec<i128>> = (0..n)
        .map(|j| {
            let mut r = a.column(j);
            r.resize(width, 0);
            r[mr + 1 + j] = 1;
            r
        })
        .collect();
    let mut rc: Vec<i128> = c.iter().map(|&v| -v).collect();
    rc.resize(width, 0);
    rc[mr] = 1;
    rows.push(rc);
    let basis = lattice_echelon(rows, width, Some(m), mr);
    let head = &basis[0];
    debug_assert_eq!(head.pivot, mr);
    if head.row[mr] != 1 {
        return None;
    }
    let mut x: Vec<i128> = head.row[mr + 1..].to_vec();
    for b in &basis[1..] {
        let k = b.pivot - mr - 1;
        let h = b.row[b.pivot];
        let q = x[k].div_euclid(h);
        if q != 0 {
            for (xi, &bi) in x.iter_mut().zip(&b.row[mr + 1..]) {
                *xi = (*xi - q * bi).rem_euclid(m);
            }
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_lexmin(a: &IntMatrix, c: &[i128], m: i128) -> Option<Vec<i128>> {
        let n = a.cols;
        let total = (m as usize).pow(n as u32);
        // most significant digit first = lexicographic order
        for code in 0..total {
            let mut x = vec![0i128; n];
            let mut cc = code;
            for k in (0..n).rev() {
                x[k] = (cc % m as usize) as i128;
                cc /= m as usize;
            }
            let ax = a.apply(&x);
            if ax.iter().zip(c).all(|(&u, &v)| (u - v).rem_euclid(m) == 0) {
                return Some(x);
            }
        }
        None
    }

    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self, k: i128) -> i128 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((self.0 >> 33) % k as u64) as i128
        }
    }

    #[test]
    fn lexmin_matches_brute_force() {
        let mut rng = Lcg(7);
        for m in [2i128, 3, 4, 6, 8, 9, 12] {
            for _ in 0..40 {
                let rows = 1 + rng.next(4) as usize;
                let cols = 1 + rng.next(if m > 6 { 3 } else { 4 }) as usize;
                let mut a = IntMatrix::zeros(rows, cols);
                for v in &mut a.data {
                    *v = rng.next(5) - 2;
                }
                let c: Vec<i128> = if rng.next(2) == 0 {
                    // guaranteed solvable
                    let x: Vec<i128> = (0..cols).map(|_| rng.next(m)).collect();
                    a.apply(&x)
                } else {
                    (0..rows).map(|_| rng.next(m)).collect()
                };
                let fast = solve_mod_lexmin(&a, &c, m);
                let slow = brute_lexmin(&a, &c, m);
                assert_eq!(fast, slow, "m={m} a={a:?} c={c:?}");
            }
        }
    }

    #[test]
    fn integer_kernel_and_snf() {
        // boundary-like matrix of a triangle: kernel of the 1 -> 2 coboundary
        let a = IntMatrix::from_rows(&[vec![1, -1, 1]], 3);
        let k = kernel_basis(&a, None);
        assert_eq!(k.len(), 2);
        for b in &k {
            assert_eq!(a.apply(&b.row), vec![0]);
        }
        let s = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3));
        assert_eq!(s.diagonal, vec![2, 6, 12]);
        assert_eq!(
            s.col_transform.mul(&s.col_transform_inv),
            IntMatrix::identity(3)
        );
    }

    #[test]
    fn quotient_z_by_2z() {
        let basis = lattice_echelon(vec![vec![1, 0], vec![0, 1]], 2, None, 0);
        let q = LatticeQuotient::new(basis, &[vec![2, 0]]).unwrap();
        assert_eq!(q.orders(), &[2, 0]);
        assert_eq!(q.class_of(&[3, 5]).unwrap(), vec![1, 5]);
    }

    #[test]
    fn modular_kernel_is_full_rank() {
        let a = IntMatrix::from_rows(&[vec![2, 1]], 2);
        let k = kernel_basis(&a, Some(4));
        assert_eq!(k.len(), 2);
        // brute-force count of solutions equals the lattice index
        let count = (0..4).flat_map(|x| (0..4).map(move |y| (x, y))).filter(|&(x, y)| (2 * x + y) % 4 == 0).count();
        let det: i128 = k.iter().map(|b| b.row[b.pivot]).product();
        assert_eq!(16 / det as usize, count);
    }
}
