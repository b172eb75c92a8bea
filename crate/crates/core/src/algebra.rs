//! The finite-dimensional *-algebras attached to a normalized Čech 2-cocycle
//! `c` on a cover `𝒰` of a finite set `X`:
//!
//! * the convolution algebra of `Σ_c = G × Γ_𝒰`, elements indexed by
//!   `(g, (i,x,j))`;
//! * the sparse twisted matrix algebra `A(ν)` over a cover with a unimodular
//!   cocycle `ν`, elements indexed by the arrows `(i,p,j)` of the blow-up;
//! * the twisted groupoid algebra of that blow-up with cocycle `conj ν`;
//! * the Fourier transform `C(Σ_c) -> A(ν^c)` over the cover
//!   `{Ĝ × U_i}` of `Ĝ × X`, with `ν^c_ijk(τ,x) = conj τ(c_ijk(x))`.
//!
//! All algebra code is generic over [`Scalar`]; with [`Cyclotomic`]
//! scalars every identity is checked exactly.
//!
//! [`Cyclotomic`]: crate::scalar::Cyclotomic

use std::collections::HashMap;
use std::sync::Arc;

use crate::cech::CechCochain;
use crate::cover::Cover;
use crate::error::{precondition, Error, Result};
use crate::extension::{build_extension, CentralExtension};
use crate::group::{Character, FinAbGroup, RootOfUnity};
use crate::groupoid::{check_cochain_on_cover, Blowup, FinGroupoid, GroupoidCocycle};
use crate::scalar::Scalar;

/// A circle-valued 2-cochain on a cover, one root of unity per
/// `(i, j, k)` at each point of `U_ijk`. Unset entries are 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularCochain {
    cover: Arc<Cover>,
    values: HashMap<(usize, usize, usize, usize), RootOfUnity>,
}

impl UnimodularCochain {
    pub fn one(cover: Arc<Cover>) -> Self {
        UnimodularCochain { cover, values: HashMap::new() }
    }

    pub fn cover(&self) -> &Arc<Cover> {
        &self.cover
    }

    pub fn get(&self, i: usize, j: usize, k: usize, p: usize) -> RootOfUnity {
        self.values.get(&(i, j, k, p)).copied().unwrap_or(RootOfUnity::ONE)
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, p: usize, v: RootOfUnity) -> Result<()> {
        if !self.cover.tuple_at(&[i, j, k], p) {
            return Err(Error::Malformed(format!("({i},{j},{k}) is not defined at point {p}")));
        }
        if v.is_one() {
            self.values.remove(&(i, j, k, p));
        } else {
            self.values.insert((i, j, k, p), v);
        }
        Ok(())
    }

    /// `ν_iii = 1` everywhere.
    pub fn is_normalized(&self) -> bool {
        self.values.keys().all(|&(i, j, k, _)| !(i == j && j == k))
    }

    /// `ν_jkl ν_ijl = ν_ikl ν_ijk` at every point; returns the first
    /// failing `(i, j, k, l, p)`.
    pub fn cocycle_failure(&self) -> Option<(usize, usize, usize, usize, usize)> {
        for p in 0..self.cover.point_count() {
            let ix = self.cover.indices_at(p);
            for &i in ix {
                for &j in ix {
                    for &k in ix {
                        for &l in ix {
                            let lhs = self.get(j, k, l, p).mul(self.get(i, j, l, p));
                            let rhs = self.get(i, k, l, p).mul(self.get(i, j, k, p));
                            if lhs != rhs {
                                return Some((i, j, k, l, p));
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Pointwise product.
    pub fn mul(&self, other: &UnimodularCochain) -> Result<UnimodularCochain> {
        if self.cover != other.cover {
            return Err(Error::Mismatch("cochains live on different covers".into()));
        }
        let mut out = self.clone();
        for (&(i, j, k, p), &v) in &other.values {
            out.set(i, j, k, p, self.get(i, j, k, p).mul(v))?;
        }
        Ok(out)
    }
}

/// Everything built from a cover and a normalized cocycle on it.
#[derive(Clone, Debug)]
pub struct Twist {
    pub cover: Arc<Cover>,
    pub group: FinAbGroup,
    pub characters: Vec<Character>,
    /// `Γ_𝒰`
    pub gamma: Blowup,
    /// `φ_c` on `Γ_𝒰`
    pub phi: GroupoidCocycle,
    /// `Σ_c`
    pub sigma: CentralExtension,
    /// the cover `{Ĝ × U_i}` of `Ĝ × X`; point `(τ_t, x)` has id `t * |X| + x`
    pub dual_cover: Arc<Cover>,
    /// `Γ_𝒱` for the cover above
    pub dual_gamma: Blowup,
    /// `c_ijk(x)` as a group index, for all `i, j, k ∈ I(x)`
    c: HashMap<(usize, usize, usize, usize), usize>,
}

impl Twist {
    pub fn new(cover: Arc<Cover>, c: &CechCochain) -> Result<Self> {
        check_cochain_on_cover(c, &cover)?;
        if c.degree() != 2 {
            return precondition("a 2-cochain is required");
        }
        if !c.is_normalized() {
            return precondition("the cocycle must be normalized");
        }
        if !c.is_cocycle()? {
            return precondition("the cochain is not a cocycle");
        }
        let group = c.group().clone();
        let mut table = HashMap::new();
        for x in 0..cover.point_count() {
            let ix = cover.indices_at(x);
            for &i in ix {
                for &j in ix {
                    for &k in ix {
                        let v = group.index_of(&c.get(&[i, j, k], Some(x)));
                        if v != 0 {
                            table.insert((i, j, k, x), v);
                        }
                    }
                }
            }
        }
        let gamma = Blowup::of_cover(&cover);
        let phi = GroupoidCocycle::from_cech(&gamma, &cover, c)?;
        let sigma = build_extension(&gamma.groupoid, &phi)?;
        let characters = group.dual();
        let dual_cover = Arc::new(dual_cover(&cover, &characters)?);
        let dual_gamma = Blowup::of_cover(&dual_cover);
        Ok(Twist { cover, group, characters, gamma, phi, sigma, dual_cover, dual_gamma, c: table })
    }

    /// `c_ijk(x)` as a group element index.
    pub fn c(&self, i: usize, j: usize, k: usize, x: usize) -> usize {
        self.c.get(&(i, j, k, x)).copied().unwrap_or(0)
    }

    /// `τ_t(g)` for a group element index.
    pub fn char_value(&self, t: usize, g: usize) -> RootOfUnity {
        self.group.char_eval_unchecked(&self.characters[t], &self.group.elem_at(g))
    }

    pub fn point_of(&self, t: usize, x: usize) -> usize {
        t * self.cover.point_count() + x
    }

    /// Arrow id of `(g, (i,x,j))` in `Σ_c`.
    pub fn sigma_arrow(&self, g: usize, i: usize, x: usize, j: usize) -> Option<usize> {
        self.gamma.arrow(i, x, j).map(|a| a * self.group.order() + g)
    }

    /// `(g, (i, x, j))` for an arrow of `Σ_c`.
    pub fn sigma_parts(&self, s: usize) -> (usize, (usize, usize, usize)) {
        let n = self.group.order();
        (s % n, self.gamma.triples[s / n])
    }

    /// `|G| · Σ_x |I(x)|²`.
    pub fn sigma_dimension(&self) -> usize {
        self.group.order() * (0..self.cover.point_count()).map(|x| self.cover.indices_at(x).len().pow(2)).sum::<usize>()
    }

    /// `Σ_{(τ,x)} |I(x)|²`, the dimension of `A(ν^c)`.
    pub fn dual_dimension(&self) -> usize {
        (0..self.dual_cover.point_count())
            .map(|p| self.dual_cover.indices_at(p).len().pow(2))
            .sum()
    }

    /// `ν^c_ijk(τ, x) = conj τ(c_ijk(x))` on the cover of `Ĝ × X`.
    pub fn nu_c(&self) -> UnimodularCochain {
        let mut nu = UnimodularCochain::one(self.dual_cover.clone());
        for (&(i, j, k, x), &g) in &self.c {
            for t in 0..self.characters.len() {
                let v = self.char_value(t, g).conj();
                nu.set(i, j, k, self.point_of(t, x), v).expect("entry on the dual cover");
            }
        }
        nu
    }

    /// The row of `ν^c` belonging to one character, on the original cover.
    pub fn nu_row(&self, t: usize) -> UnimodularCochain {
        let mut nu = UnimodularCochain::one(self.cover.clone());
        for (&(i, j, k, x), &g) in &self.c {
            nu.set(i, j, k, x, self.char_value(t, g).conj()).expect("entry on the cover");
        }
        nu
    }

    /// `(f₁*f₂)(g,(i,x,j)) = Σ_k Σ_h f₁(h,(i,x,k)) f₂(g-h-c_ikj(x),(k,x,j))`.
    pub fn convolve<S: Scalar>(&self, f1: &[S], f2: &[S]) -> Vec<S> {
        let n = self.group.order();
        let grp = &self.group;
        let mut out = vec![S::zero(); f1.len()];
        for (a, &(i, x, j)) in self.gamma.triples.iter().enumerate() {
            for &k in self.cover.indices_at(x) {
                let ik = self.gamma.arrow(i, x, k).expect("arrow in blow-up");
                let kj = self.gamma.arrow(k, x, j).expect("arrow in blow-up");
                let c = self.c(i, k, j, x);
                for h in 0..n {
                    let v1 = &f1[ik * n + h];
                    if v1.is_zero() {
                        continue;
                    }
                    for g in 0..n {
                        let g2 = grp.sub_idx(grp.sub_idx(g, h), c);
                        out[a * n + g] += v1.clone() * f2[kj * n + g2].clone();
                    }
                }
            }
        }
        out
    }

    /// `f*(g,(i,x,j)) = conj f(-g-c_iji(x),(j,x,i))`.
    pub fn star<S: Scalar>(&self, f: &[S]) -> Vec<S> {
        let n = self.group.order();
        let grp = &self.group;
        let mut out = vec![S::zero(); f.len()];
        for (a, &(i, x, j)) in self.gamma.triples.iter().enumerate() {
            let ji = self.gamma.arrow(j, x, i).expect("arrow in blow-up");
            let c = self.c(i, j, i, x);
            for g in 0..n {
                let g2 = grp.sub_idx(grp.neg_idx(g), c);
                out[a * n + g] = f[ji * n + g2].conj();
            }
        }
        out
    }

    /// `Φ(f)(i,(τ,x),j) = Σ_g τ(g) f(g,(i,x,j))`, a twisted matrix over the
    /// cover of `Ĝ × X` indexed by the arrows of [`Twist::dual_gamma`].
    pub fn fourier<S: Scalar>(&self, f: &[S]) -> Vec<S> {
        let n = self.group.order();
        let mut out = vec![S::zero(); self.dual_gamma.groupoid.arrow_count()];
        for (b, &(i, p, j)) in self.dual_gamma.triples.iter().enumerate() {
            let (t, x) = (p / self.cover.point_count(), p % self.cover.point_count());
            let a = self.gamma.arrow(i, x, j).expect("arrow in blow-up");
            let mut acc = S::zero();
            for g in 0..n {
                let v = &f[a * n + g];
                if !v.is_zero() {
                    acc += S::from_root(self.char_value(t, g)) * v.clone();
                }
            }
            out[b] = acc;
        }
        out
    }

    /// Inverse transform by character orthogonality:
    /// `f(g,·) = |G|⁻¹ Σ_τ conj τ(g) Φ(f)(·,(τ,·),·)`. Only available for
    /// scalars where division by `|G|` is exact, so it returns `|G| f`.
    pub fn fourier_inverse_scaled<S: Scalar>(&self, m: &[S]) -> Vec<S> {
        let n = self.group.order();
        let mut out = vec![S::zero(); self.sigma.total.arrow_count()];
        for (a, &(i, x, j)) in self.gamma.triples.iter().enumerate() {
            for t in 0..self.characters.len() {
                let b = self.dual_gamma.arrow(i, self.point_of(t, x), j).expect("arrow in dual blow-up");
                let v = &m[b];
                if v.is_zero() {
                    continue;
                }
                for g in 0..n {
                    out[a * n + g] += S::from_root(self.char_value(t, g).conj()) * v.clone();
                }
            }
        }
        out
    }

    /// The indicator of one arrow of `Σ_c`.
    pub fn indicator<S: Scalar>(&self, s: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.sigma.total.arrow_count()];
        v[s] = S::one();
        v
    }
}

fn dual_cover(cover: &Cover, characters: &[Character]) -> Result<Cover> {
    let points: Vec<String> = characters
        .iter()
        .flat_map(|tau| {
            cover
                .space()
                .labels()
                .iter()
                .map(move |x| format!("({},{x})", crate::group::GroupElem(tau.exponents.clone())))
        })
        .collect();
    let sets = (0..cover.set_count())
        .map(|i| {
            let members = (0..characters.len())
                .flat_map(|t| cover.set(i).iter().map(move |&x| t * cover.point_count() + x))
                .map(|p| points[p].clone())
                .collect();
            (cover.set_label(i).to_string(), members)
        })
        .collect();
    Cover::new(points, sets)
}

/// `h_ik(p) = Σ_j conj ν_ijk(p) f_ij(p) g_jk(p)` for twisted matrices
/// indexed by the arrows of `blowup` (the blow-up of `ν`'s cover).
pub fn rt_product<S: Scalar>(blowup: &Blowup, nu: &UnimodularCochain, f: &[S], g: &[S]) -> Vec<S> {
    let cover = nu.cover();
    let mut out = vec![S::zero(); f.len()];
    for (a, &(i, p, k)) in blowup.triples.iter().enumerate() {
        let mut acc = S::zero();
        for &j in cover.indices_at(p) {
            let ij = blowup.arrow(i, p, j).expect("arrow in blow-up");
            let jk = blowup.arrow(j, p, k).expect("arrow in blow-up");
            if f[ij].is_zero() || g[jk].is_zero() {
                continue;
            }
            acc += S::from_root(nu.get(i, j, k, p).conj()) * f[ij].clone() * g[jk].clone();
        }
        out[a] = acc;
    }
    out
}

/// `g_ij(p) = ν_iji(p) conj f_ji(p)`.
pub fn rt_star<S: Scalar>(blowup: &Blowup, nu: &UnimodularCochain, f: &[S]) -> Vec<S> {
    blowup
        .triples
        .iter()
        .map(|&(i, p, j)| {
            let ji = blowup.arrow(j, p, i).expect("arrow in blow-up");
            S::from_root(nu.get(i, j, i, p)) * f[ji].conj()
        })
        .collect()
}

/// Twisted convolution over any finite groupoid with a scalar 2-cocycle
/// `ω`: `(f*g)(γ) = Σ_{ab=γ} f(a) g(b) ω(a,b)`.
pub fn groupoid_convolve<S: Scalar>(g: &FinGroupoid, omega: &dyn Fn(usize, usize) -> S, f1: &[S], f2: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); g.arrow_count()];
    for a in 0..g.arrow_count() {
        if f1[a].is_zero() {
            continue;
        }
        for &b in g.arrows_to(g.source(a)) {
            if f2[b].is_zero() {
                continue;
            }
            let ab = g.compose(a, b).expect("composable");
            out[ab] += f1[a].clone() * f2[b].clone() * omega(a, b);
        }
    }
    out
}

/// `f*(γ) = conj(ω(γ, γ⁻¹) f(γ⁻¹))`.
pub fn groupoid_star<S: Scalar>(g: &FinGroupoid, omega: &dyn Fn(usize, usize) -> S, f: &[S]) -> Vec<S> {
    (0..g.arrow_count())
        .map(|a| {
            let b = g.inverse(a);
            (omega(a, b) * f[b].clone()).conj()
        })
        .collect()
}

/// `c̄_ν((i,p,j),(j,p,k)) = conj ν_ijk(p)` as a scalar weight on the
/// composable pairs of the blow-up of `ν`'s cover.
pub fn conj_nu_weight<'a, S: Scalar>(blowup: &'a Blowup, nu: &'a UnimodularCochain) -> impl Fn(usize, usize) -> S + 'a {
    move |a, b| {
        let (i, p, j) = blowup.triples[a];
        let (_, _, k) = blowup.triples[b];
        S::from_root(nu.get(i, j, k, p).conj())
    }
}

/// Product in the twisted groupoid algebra of `Γ_𝒱` with cocycle `c̄_ν`.
pub fn rt_groupoid_product<S: Scalar>(blowup: &Blowup, nu: &UnimodularCochain, f1: &[S], f2: &[S]) -> Vec<S> {
    groupoid_convolve(&blowup.groupoid, &conj_nu_weight(blowup, nu), f1, f2)
}

/// Involution in the twisted groupoid algebra: `f*(i,p,j) = ν_iji(p) conj f(j,p,i)`.
pub fn rt_groupoid_star<S: Scalar>(blowup: &Blowup, nu: &UnimodularCochain, f: &[S]) -> Vec<S> {
    groupoid_star(&blowup.groupoid, &conj_nu_weight(blowup, nu), f)
}

/// `Φ(f)_ij(p) = f(i,p,j)`: the identification of the twisted groupoid
/// algebra with `A(ν)`. Both are indexed by the arrows of the blow-up, so
/// the map is the identity on coefficient vectors.
pub fn phi_matrix_iso<S: Scalar>(f: &[S]) -> Vec<S> {
    f.to_vec()
}

/// Untwisted convolution over the total groupoid of an extension: the
/// direct-summation reference for [`Twist::convolve`].
pub fn sigma_convolve_direct<S: Scalar>(sigma: &FinGroupoid, f1: &[S], f2: &[S]) -> Vec<S> {
    groupoid_convolve(sigma, &|_, _| S::one(), f1, f2)
}

pub fn sigma_star_direct<S: Scalar>(sigma: &FinGroupoid, f: &[S]) -> Vec<S> {
    groupoid_star(sigma, &|_, _| S::one(), f)
}

/// Whether two coefficient vectors agree entrywise within `tol`.
pub fn approx_eq<S: Scalar>(a: &[S], b: &[S], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::Domain;
    use crate::scalar::Cyclotomic;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn two_set_twist(n: u64) -> Twist {
        let cover = Arc::new(
            Cover::new(strs(&["a", "b"]), vec![("1".into(), strs(&["a", "b"])), ("2".into(), strs(&["b"]))]).unwrap(),
        );
        let c = CechCochain::zero(Arc::new(Domain::Pointwise((*cover).clone())), 2, FinAbGroup::cyclic(n));
        Twist::new(cover, &c).unwrap()
    }

    #[test]
    fn dimensions_of_two_set_cover() {
        let t = two_set_twist(2);
        assert_eq!(t.sigma.total.arrow_count(), 10);
        assert_eq!(t.sigma_dimension(), 10);
        assert_eq!(t.dual_dimension(), 10);
    }

    #[test]
    fn unit_indicator_is_a_projection() {
        let t = two_set_twist(3);
        let e = t.sigma_arrow(0, 0, 1, 0).unwrap();
        let f = t.indicator::<Cyclotomic>(e);
        assert_eq!(t.convolve(&f, &f), f);
        assert_eq!(t.star(&f), f);
    }

    #[test]
    fn matrix_units_for_trivial_group() {
        let t = two_set_twist(1);
        let a = t.sigma_arrow(0, 0, 1, 1).unwrap();
        let b = t.sigma_arrow(0, 1, 1, 0).unwrap();
        let c = t.sigma_arrow(0, 0, 1, 0).unwrap();
        let p = t.convolve(&t.indicator::<Cyclotomic>(a), &t.indicator(b));
        assert_eq!(p, t.indicator(c));
    }

    #[test]
    fn fourier_of_group_indicator() {
        let t = two_set_twist(2);
        let s = t.sigma_arrow(1, 0, 1, 1).unwrap();
        let m = t.fourier(&t.indicator::<Cyclotomic>(s));
        for (b, &(i, p, j)) in t.dual_gamma.triples.iter().enumerate() {
            let (tau, x) = (p / 2, p % 2);
            let expect = if (i, x, j) == (0, 1, 1) { if tau == 0 { 1 } else { -1 } } else { 0 };
            assert_eq!(m[b], Cyclotomic::from_int(expect));
        }
    }
}
