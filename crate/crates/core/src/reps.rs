//! Finite-dimensional representations of the twisted algebras.
//!
//! * [`pi_rep`]: `π_{(i,p)}` of `A(ν)`, the matrix
//!   `(conj ν_ikl(p) f_kl(p))_{k,l ∈ I(p)}`;
//! * [`ind_rep`]: the representation of `C(Σ_c)` induced from the character
//!   `τ` of the isotropy at the unit `(i,x)`, realized on `ℓ²(I(x))` with
//!   `a_jk = τ(c_ijk(x)) Σ_g τ(g) f(g,(j,x,k))`;
//! * [`unitary_u`] and [`induced_inner_product`], the isometry from the
//!   induced space onto `ℓ²(I(x))`;
//! * intertwiner spaces ([`commutant_dim`], [`equivalent`]) and the
//!   [`spectrum`] table.

use std::collections::BTreeSet;
use std::ops::{Index, IndexMut};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::algebra::{Twist, UnimodularCochain};
use crate::cech::{CechCochain, Domain};
use crate::cover::Cover;
use crate::error::{precondition, Error, Result};
use crate::groupoid::Blowup;
use crate::random;
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn mul(&self, other: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a.clone() * other[(k, j)].clone();
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (k, x) in v.iter().enumerate() {
                    acc += self[(i, k)].clone() * x.clone();
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn adjoint(&self) -> Mat<S> {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn approx_eq(&self, other: &Mat<S>, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Largest entrywise distance, computed in `C`.
    pub fn max_diff(&self, other: &Mat<S>) -> f64 {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.to_complex() - b.to_complex()).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_complex())
    }

    /// Row-major `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let z = self[(i, j)].to_complex();
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        self.to_complex().singular_values().iter().cloned().fold(0.0, f64::max)
    }

    pub fn rank(&self, tol: f64) -> usize {
        numeric_rank(&self.to_complex(), tol)
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

fn numeric_rank(m: &DMatrix<Complex64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > tol * top.max(1.0)).count()
}

/// `(anchor i, character index, point)`. For [`pi_rep`] over a bare cover
/// the character index is 0 and `point` is a point of that cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RepLabel {
    pub anchor: usize,
    pub tau: usize,
    pub point: usize,
}

#[derive(Clone, Debug)]
enum RepKind<'a> {
    Pi { blowup: &'a Blowup, nu: Arc<UnimodularCochain>, point: usize },
    Ind { twist: &'a Twist },
}

/// A representation on `ℓ²(I(x))`, evaluated on coefficient vectors of
/// its algebra.
#[derive(Clone, Debug)]
pub struct MatRep<'a> {
    pub label: RepLabel,
    /// the index set `I(x)`, which labels rows and columns
    pub indices: Vec<usize>,
    kind: RepKind<'a>,
}

impl<'a> MatRep<'a> {
    pub fn dimension(&self) -> usize {
        self.indices.len()
    }

    /// Length of the coefficient vectors this representation accepts.
    pub fn algebra_dimension(&self) -> usize {
        match &self.kind {
            RepKind::Pi { blowup, .. } => blowup.groupoid.arrow_count(),
            RepKind::Ind { twist } => twist.sigma.total.arrow_count(),
        }
    }

    pub fn evaluate<S: Scalar>(&self, f: &[S]) -> Mat<S> {
        assert_eq!(f.len(), self.algebra_dimension(), "coefficient vector has the wrong length");
        let n = self.indices.len();
        let mut m = Mat::zeros(n, n);
        match &self.kind {
            RepKind::Pi { blowup, nu, point } => {
                let i = self.label.anchor;
                for (r, &k) in self.indices.iter().enumerate() {
                    for (s, &l) in self.indices.iter().enumerate() {
                        let a = blowup.arrow(k, *point, l).expect("arrow in blow-up");
                        if !f[a].is_zero() {
                            m[(r, s)] = S::from_root(nu.get(i, k, l, *point).conj()) * f[a].clone();
                        }
                    }
                }
            }
            RepKind::Ind { twist } => {
                let RepLabel { anchor: i, tau: t, point: x } = self.label;
                let order = twist.group.order();
                for (r, &j) in self.indices.iter().enumerate() {
                    for (s, &k) in self.indices.iter().enumerate() {
                        let a = twist.gamma.arrow(j, x, k).expect("arrow in blow-up");
                        let mut acc = S::zero();
                        for g in 0..order {
                            let v = &f[a * order + g];
                            if !v.is_zero() {
                                acc += S::from_root(twist.char_value(t, g)) * v.clone();
                            }
                        }
                        if !acc.is_zero() {
                            m[(r, s)] = S::from_root(twist.char_value(t, twist.c(i, j, k, x))) * acc;
                        }
                    }
                }
            }
        }
        m
    }

    /// The representation of every arrow indicator.
    pub fn generator_images<S: Scalar>(&self) -> Vec<Mat<S>> {
        let n = self.algebra_dimension();
        (0..n)
            .map(|a| {
                let mut f = vec![S::zero(); n];
                f[a] = S::one();
                self.evaluate(&f)
            })
            .collect()
    }
}

/// `π_{(i,p)}` of `A(ν)` on `ℓ²(I(p))`.
pub fn pi_rep<'a>(blowup: &'a Blowup, nu: Arc<UnimodularCochain>, i: usize, p: usize) -> Result<MatRep<'a>> {
    let cover = nu.cover().clone();
    if p >= cover.point_count() || !cover.contains(i, p) {
        return Err(Error::Precondition(format!("point {p} is not in set {i}")));
    }
    Ok(MatRep {
        label: RepLabel { anchor: i, tau: 0, point: p },
        indices: cover.indices_at(p).to_vec(),
        kind: RepKind::Pi { blowup, nu, point: p },
    })
}

/// `π_{(i,(τ,x))}` of `A(ν^c)` over the cover of `Ĝ × X`.
pub fn pi_rep_dual(twist: &Twist, i: usize, t: usize, x: usize) -> Result<MatRep<'_>> {
    if t >= twist.characters.len() {
        return Err(Error::Precondition(format!("no character with index {t}")));
    }
    let nu = Arc::new(twist.nu_c());
    let mut rep = pi_rep(&twist.dual_gamma, nu, i, twist.point_of(t, x))?;
    rep.label = RepLabel { anchor: i, tau: t, point: x };
    Ok(rep)
}

/// The representation of `C(Σ_c)` induced from `τ` at the unit `(i,x)`.
pub fn ind_rep(twist: &Twist, i: usize, x: usize, t: usize) -> Result<MatRep<'_>> {
    if x >= twist.cover.point_count() || !twist.cover.contains(i, x) {
        return Err(Error::Precondition(format!("point {x} is not in set {i}")));
    }
    if t >= twist.characters.len() {
        return Err(Error::Precondition(format!("no character with index {t}")));
    }
    Ok(MatRep {
        label: RepLabel { anchor: i, tau: t, point: x },
        indices: twist.cover.indices_at(x).to_vec(),
        kind: RepKind::Ind { twist },
    })
}

/// `U(f)(j) = Σ_g f(g - c_iji(x), (j,x,i)) τ(g)`, indexed like `I(x)`.
/// Only the values of `f` on arrows with source `(i,x)` are read.
pub fn unitary_u<S: Scalar>(twist: &Twist, i: usize, x: usize, t: usize, f: &[S]) -> Result<Vec<S>> {
    if !twist.cover.contains(i, x) {
        return Err(Error::Precondition(format!("point {x} is not in set {i}")));
    }
    let grp = &twist.group;
    let order = grp.order();
    Ok(twist
        .cover
        .indices_at(x)
        .iter()
        .map(|&j| {
            let a = twist.gamma.arrow(j, x, i).expect("arrow in blow-up");
            let c = twist.c(i, j, i, x);
            let mut acc = S::zero();
            for g in 0..order {
                let v = &f[a * order + grp.sub_idx(g, c)];
                if !v.is_zero() {
                    acc += v.clone() * S::from_root(twist.char_value(t, g));
                }
            }
            acc
        })
        .collect())
}

/// The inner product of the space induced from `τ` at `u = (i,x)`, as a
/// finite sum: `⟨f₁,f₂⟩ = Σ_{h ∈ Σ(u)} τ(h) Σ_{r(σ)=u} conj f₂(σ⁻¹) f₁(σ⁻¹h)`.
pub fn induced_inner_product<S: Scalar>(twist: &Twist, i: usize, x: usize, t: usize, f1: &[S], f2: &[S]) -> Result<S> {
    let u = twist
        .gamma
        .unit(i, x)
        .ok_or_else(|| Error::Precondition(format!("point {x} is not in set {i}")))?;
    let sigma = &twist.sigma.total;
    let mut out = S::zero();
    for &h in sigma.arrows_to(u) {
        if sigma.source(h) != u {
            continue;
        }
        let (hg, _) = twist.sigma_parts(h);
        // h = (hg, (i,x,i)) up to the cocycle offset; τ is evaluated on the
        // group coordinate of h, which is its image in G
        let weight = S::from_root(twist.char_value(t, hg));
        let mut acc = S::zero();
        for &sigma_arrow in sigma.arrows_to(u) {
            let inv = sigma.inverse(sigma_arrow);
            let a = &f2[inv];
            if a.is_zero() {
                continue;
            }
            let b = &f1[sigma.compose(inv, h).expect("composable")];
            if !b.is_zero() {
                acc += a.conj() * b.clone();
            }
        }
        out += weight * acc;
    }
    Ok(out)
}

/// `Σ |v_j|²`.
pub fn norm_sq<S: Scalar>(v: &[S]) -> S {
    let mut acc = S::zero();
    for x in v {
        acc += x.conj() * x.clone();
    }
    acc
}

/// Checks `ind((i,x),τ)(f) = π_{(i,(τ,x))}(Φ(f))` entrywise.
pub fn intertwine_check<S: Scalar>(twist: &Twist, f: &[S], i: usize, x: usize, t: usize, tol: f64) -> Result<bool> {
    let lhs = ind_rep(twist, i, x, t)?.evaluate(f);
    let rhs = pi_rep_dual(twist, i, t, x)?.evaluate(&twist.fourier(f));
    Ok(lhs.approx_eq(&rhs, tol))
}

/// Checks that `rep` is a *-homomorphism on a basis of indicators whose
/// products and adjoints are again multiples of indicators:
/// `δ_a δ_b = s δ_c` for `product(a, b) = Some((c, s))` (zero for `None`)
/// and `δ_a* = s δ_b` for `star(a) = (b, s)`.
pub fn check_star_hom<S: Scalar>(
    rep: &MatRep,
    product: &dyn Fn(usize, usize) -> Option<(usize, S)>,
    star: &dyn Fn(usize) -> (usize, S),
    tol: f64,
) -> std::result::Result<(), String> {
    let images: Vec<Mat<S>> = rep.generator_images();
    let zero: Vec<bool> = images.iter().map(Mat::is_zero).collect();
    let scaled = |m: &Mat<S>, s: &S| Mat { rows: m.rows, cols: m.cols, data: m.data.iter().map(|x| s.clone() * x.clone()).collect() };
    let n = images.len();
    for a in 0..n {
        let (b, s) = star(a);
        if !scaled(&images[b], &s).approx_eq(&images[a].adjoint(), tol) {
            return Err(format!("star fails on generator {a}"));
        }
        for b in 0..n {
            let prod = product(a, b);
            if zero[a] || zero[b] {
                if let Some((c, s)) = prod {
                    if !zero[c] && !s.is_zero() {
                        return Err(format!("product fails on generators ({a}, {b})"));
                    }
                }
                continue;
            }
            let lhs = match prod {
                Some((c, s)) => scaled(&images[c], &s),
                None => Mat::zeros(images[a].rows, images[a].cols),
            };
            if !lhs.approx_eq(&images[a].mul(&images[b]), tol) {
                return Err(format!("product fails on generators ({a}, {b})"));
            }
        }
    }
    Ok(())
}

/// *-homomorphism check of an induced representation on all arrow
/// indicators of `Σ_c`. Indicator products are arrow compositions.
pub fn check_ind_rep<S: Scalar>(twist: &Twist, rep: &MatRep, tol: f64) -> std::result::Result<(), String> {
    let sigma = &twist.sigma.total;
    check_star_hom(rep, &|a, b| sigma.compose(a, b).map(|c| (c, S::one())), &|a| (sigma.inverse(a), S::one()), tol)
}

/// *-homomorphism check of `π_{(i,p)}` on all arrow indicators of the
/// blow-up: `δ_(i,p,j) δ_(j,p,k) = conj ν_ijk(p) δ_(i,p,k)` and
/// `δ_(i,p,j)* = ν_jij(p) δ_(j,p,i)`.
pub fn check_pi_rep<S: Scalar>(
    blowup: &Blowup,
    nu: &UnimodularCochain,
    rep: &MatRep,
    tol: f64,
) -> std::result::Result<(), String> {
    let t = &blowup.triples;
    check_star_hom(
        rep,
        &|a, b| {
            let ((i, p, j), (j2, p2, k)) = (t[a], t[b]);
            (j == j2 && p == p2).then(|| {
                (blowup.arrow(i, p, k).expect("arrow in blow-up"), S::from_root(nu.get(i, j, k, p).conj()))
            })
        },
        &|a| {
            let (i, p, j) = t[a];
            (blowup.arrow(j, p, i).expect("arrow in blow-up"), S::from_root(nu.get(j, i, j, p)))
        },
        tol,
    )
}

const NULL_TOL: f64 = 1e-8;

/// Orthonormal basis (as columns) of the null space of `m`.
fn null_space(m: &DMatrix<Complex64>) -> Vec<nalgebra::DVector<Complex64>> {
    let cols = m.ncols();
    let mut a = m.clone();
    if a.nrows() < cols {
        a = a.resize_vertically(cols, Complex64::new(0.0, 0.0));
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
    (0..cols)
        .filter(|&k| svd.singular_values[k] <= NULL_TOL * top)
        .map(|k| v_t.row(k).adjoint())
        .collect()
}

/// The linear system `T A_s = B_s T` on `vec(T)` (column-major), stacked
/// over all generators.
fn intertwiner_system(a: &[DMatrix<Complex64>], b: &[DMatrix<Complex64>], n: usize) -> DMatrix<Complex64> {
    let id = DMatrix::<Complex64>::identity(n, n);
    let blocks: Vec<DMatrix<Complex64>> = a
        .iter()
        .zip(b)
        .map(|(a, b)| a.transpose().kronecker(&id) - id.kronecker(b))
        .collect();
    let mut out = DMatrix::zeros(blocks.len() * n * n, n * n);
    for (s, blk) in blocks.iter().enumerate() {
        out.view_mut((s * n * n, 0), (n * n, n * n)).copy_from(blk);
    }
    out
}

fn images_complex(rep: &MatRep) -> Vec<DMatrix<Complex64>> {
    rep.generator_images::<Complex64>().iter().map(|m| m.to_complex()).collect()
}

/// Dimension of the commutant of `rep`, over the spanning set of all arrow
/// indicators. 1 exactly when `rep` is irreducible.
pub fn commutant_dim(rep: &MatRep) -> usize {
    let n = rep.dimension();
    if n == 0 {
        return 0;
    }
    let imgs = images_complex(rep);
    null_space(&intertwiner_system(&imgs, &imgs, n)).len()
}

/// Whether an invertible `T` with `T ρ₁(f) = ρ₂(f) T` exists. Solves the
/// intertwiner system and tests random elements of its solution space for
/// `|det| > 1e-8`.
pub fn equivalent(rep1: &MatRep, rep2: &MatRep, seed: u64) -> bool {
    let n = rep1.dimension();
    if n != rep2.dimension() || rep1.algebra_dimension() != rep2.algebra_dimension() {
        return false;
    }
    if n == 0 {
        return true;
    }
    let basis = null_space(&intertwiner_system(&images_complex(rep1), &images_complex(rep2), n));
    if basis.is_empty() {
        return false;
    }
    let mut rng = random::rng(seed);
    for _ in 0..8 {
        let mut v = nalgebra::DVector::<Complex64>::zeros(n * n);
        for b in &basis {
            let w = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            v += b * w;
        }
        let t = DMatrix::from_column_slice(n, n, v.as_slice());
        if t.determinant().norm() > NULL_TOL {
            return true;
        }
    }
    false
}

/// One row of a [`SpectrumTable`].
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEntry {
    /// exponents of `τ` against the cyclic factors
    pub tau: Vec<u64>,
    pub tau_index: usize,
    pub point: String,
    pub point_index: usize,
    pub anchor: String,
    pub dimension: usize,
    pub multiplicity: usize,
    /// `None` when the Schur check was skipped
    pub commutant_dim: Option<usize>,
}

/// The irreducible representations of `C(Σ_c)`, one per `(τ, x)`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumTable {
    pub schema_version: u32,
    pub group: Vec<u64>,
    pub labels: Vec<SpectrumEntry>,
    pub algebra_dimension: usize,
    pub sum_of_squares: usize,
    /// the direct sum of all label representations is injective
    pub complete: bool,
    /// every checked label has commutant dimension 1
    pub irreducible: bool,
    /// pairs of labels tested for inequivalence, and whether all passed
    pub inequivalence_pairs_checked: usize,
    pub pairwise_inequivalent: bool,
    /// all label representations are *-homomorphisms on arrow indicators
    pub homomorphisms_verified: bool,
}

impl SpectrumTable {
    pub fn is_consistent(&self) -> bool {
        self.algebra_dimension == self.sum_of_squares
            && self.complete
            && self.irreducible
            && self.pairwise_inequivalent
            && self.homomorphisms_verified
    }

    pub fn label_set(&self) -> BTreeSet<(Vec<u64>, String, usize)> {
        self.labels.iter().map(|e| (e.tau.clone(), e.point.clone(), e.dimension)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumOptions {
    pub tolerance: f64,
    pub seed: u64,
    /// cap on the number of label pairs tested for inequivalence
    pub max_pairs: usize,
    /// skip the per-label checks above this algebra dimension
    pub max_checked_dimension: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { tolerance: 1e-9, seed: random::DEFAULT_SEED, max_pairs: 64, max_checked_dimension: 200 }
    }
}

/// Enumerates `(τ, x)` with the induced representation anchored at the
/// first set containing `x`, and verifies the table.
pub fn spectrum(twist: &Twist, opts: &SpectrumOptions) -> Result<SpectrumTable> {
    let dim = twist.sigma.total.arrow_count();
    let mut reps = Vec::new();
    for t in 0..twist.characters.len() {
        for x in 0..twist.cover.point_count() {
            let i = twist.cover.indices_at(x)[0];
            reps.push(ind_rep(twist, i, x, t)?);
        }
    }
    let checked = dim <= opts.max_checked_dimension;
    let mut homomorphisms_verified = true;
    let mut labels = Vec::new();
    for rep in &reps {
        let RepLabel { anchor, tau, point } = rep.label;
        let commutant = if checked {
            if check_ind_rep::<Complex64>(twist, rep, opts.tolerance).is_err() {
                homomorphisms_verified = false;
            }
            Some(commutant_dim(rep))
        } else {
            None
        };
        labels.push(SpectrumEntry {
            tau: twist.characters[tau].exponents.clone(),
            tau_index: tau,
            point: twist.cover.space().label(point).to_string(),
            point_index: point,
            anchor: twist.cover.set_label(anchor).to_string(),
            dimension: rep.dimension(),
            multiplicity: 1,
            commutant_dim: commutant,
        });
    }
    let sum_of_squares = labels.iter().map(|e| e.dimension * e.dimension).sum();
    let irreducible = labels.iter().all(|e| e.commutant_dim.is_none_or(|d| d == 1));
    let complete = sum_of_squares == dim && (!checked || direct_sum_rank(&reps, dim) == dim);

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    if checked {
        for a in 0..reps.len() {
            for b in a + 1..reps.len() {
                if reps[a].dimension() == reps[b].dimension() {
                    pairs.push((a, b));
                }
            }
        }
        let mut rng = random::rng(opts.seed);
        while pairs.len() > opts.max_pairs {
            let k = rng.gen_range(0..pairs.len());
            pairs.swap_remove(k);
        }
    }
    let pairwise_inequivalent = pairs.iter().all(|&(a, b)| !equivalent(&reps[a], &reps[b], opts.seed));
    Ok(SpectrumTable {
        schema_version: 1,
        group: twist.group.cyclic_orders().to_vec(),
        labels,
        algebra_dimension: dim,
        sum_of_squares,
        complete,
        irreducible,
        inequivalence_pairs_checked: pairs.len(),
        pairwise_inequivalent,
        homomorphisms_verified,
    })
}

/// Rank of `f ↦ ⊕ ρ(f)` over all arrow indicators.
fn direct_sum_rank(reps: &[MatRep], dim: usize) -> usize {
    let rows: usize = reps.iter().map(|r| r.dimension().pow(2)).sum();
    let mut m = DMatrix::<Complex64>::zeros(rows, dim);
    let mut off = 0;
    for rep in reps {
        for (a, img) in rep.generator_images::<Complex64>().iter().enumerate() {
            for (k, z) in img.entries().iter().enumerate() {
                m[(off + k, a)] = *z;
            }
        }
        off += rep.dimension().pow(2);
    }
    numeric_rank(&m, NULL_TOL)
}

/// The C*-norm of `f`: the largest operator norm over all labels.
pub fn cstar_norm<S: Scalar>(twist: &Twist, f: &[S]) -> Result<f64> {
    let mut best: f64 = 0.0;
    for t in 0..twist.characters.len() {
        for x in 0..twist.cover.point_count() {
            let i = twist.cover.indices_at(x)[0];
            best = best.max(ind_rep(twist, i, x, t)?.evaluate(f).operator_norm());
        }
    }
    Ok(best)
}

/// Pulls a pointwise 2-cochain back to a refinement: `refinement[a]` is
/// `(label, members, r(a))` with `V_a ⊆ U_{r(a)}`, and
/// `c'_abc(x) = c_{r(a) r(b) r(c)}(x)`.
pub fn refine(cover: &Cover, c: &CechCochain, refinement: &[(String, Vec<usize>, usize)]) -> Result<(Arc<Cover>, CechCochain)> {
    if c.degree() != 2 {
        return precondition("a 2-cochain is required");
    }
    for (label, members, r) in refinement {
        if *r >= cover.set_count() {
            return Err(Error::Malformed(format!("refinement set {label} maps to a missing set")));
        }
        if let Some(x) = members.iter().find(|&&x| !cover.contains(*r, x)) {
            return Err(Error::Malformed(format!("refinement set {label} is not inside its target at point {x}")));
        }
    }
    let labels = cover.space().labels();
    let sets = refinement
        .iter()
        .map(|(l, m, _)| (l.clone(), m.iter().map(|&x| labels[x].clone()).collect()))
        .collect();
    let fine = Arc::new(Cover::new(labels.to_vec(), sets)?);
    let domain = Arc::new(Domain::Pointwise((*fine).clone()));
    let entries = domain
        .tuples(2)?
        .into_iter()
        .map(|(tuple, point)| {
            let coarse: Vec<usize> = tuple.iter().map(|&a| refinement[a].2).collect();
            let v = c.get(&coarse, point);
            ((tuple, point), v)
        })
        .collect::<Vec<_>>();
    let out = CechCochain::from_entries(domain, 2, c.group().clone(), entries)?;
    Ok((fine, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FinAbGroup;
    use crate::scalar::Cyclotomic;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn two_set(n: u64) -> Twist {
        let cover = Arc::new(
            Cover::new(strs(&["a", "b"]), vec![("1".into(), strs(&["a", "b"])), ("2".into(), strs(&["b"]))]).unwrap(),
        );
        let c = CechCochain::zero(Arc::new(Domain::Pointwise((*cover).clone())), 2, FinAbGroup::cyclic(n));
        Twist::new(cover, &c).unwrap()
    }

    #[test]
    fn spectrum_of_two_set_cover() {
        let t = two_set(2);
        let table = spectrum(&t, &SpectrumOptions::default()).unwrap();
        let dims: Vec<usize> = table.labels.iter().map(|e| e.dimension).collect();
        assert_eq!(dims, vec![1, 2, 1, 2]);
        assert_eq!(table.algebra_dimension, 10);
        assert!(table.is_consistent(), "{table:?}");
    }

    #[test]
    fn induced_rep_is_star_hom_exactly() {
        let t = two_set(3);
        for x in 0..2 {
            for tau in 0..3 {
                let rep = ind_rep(&t, 0, x, tau).unwrap();
                check_ind_rep::<Cyclotomic>(&t, &rep, 0.0).unwrap();
            }
        }
    }

    #[test]
    fn unitary_sends_unit_indicator_to_basis_vector() {
        let t = two_set(2);
        let s = t.sigma_arrow(0, 0, 1, 0).unwrap();
        let u = unitary_u(&t, 0, 1, 0, &t.indicator::<Cyclotomic>(s)).unwrap();
        assert_eq!(u, vec![Cyclotomic::one(), Cyclotomic::zero()]);
    }

    #[test]
    fn anchors_give_equivalent_reps() {
        let t = two_set(2);
        let a = ind_rep(&t, 0, 1, 1).unwrap();
        let b = ind_rep(&t, 1, 1, 1).unwrap();
        assert!(equivalent(&a, &b, 1));
        let c = ind_rep(&t, 0, 1, 0).unwrap();
        assert!(!equivalent(&a, &c, 1));
    }

    #[test]
    fn one_dimensional_commutant() {
        let t = two_set(2);
        assert_eq!(commutant_dim(&ind_rep(&t, 0, 0, 1).unwrap()), 1);
    }
}
