//! Central extensions `units × G -> Σ -> Γ` of finite groupoids by a finite
//! abelian group, and the calculus relating them to groupoid 2-cocycles.
//!
//! The units of `Σ` are identified with the units of `Γ` (same numbering).
//! `ι(u, g)` is stored at position `u * |G| + index(g)`.

use crate::error::{precondition, Error, Result};
use crate::group::FinAbGroup;
use crate::groupoid::{ArrowSpec, Blowup, FinGroupoid, GroupoidCocycle};

#[derive(Clone, Debug)]
pub struct CentralExtension {
    pub total: FinGroupoid,
    pub base: FinGroupoid,
    pub group: FinAbGroup,
    iota: Vec<usize>,
    pi: Vec<usize>,
    section: Option<Vec<usize>>,
}

impl CentralExtension {
    /// Assembles an extension from its parts without checking the axioms
    /// (see [`CentralExtension::check`]).
    pub fn from_parts(
        total: FinGroupoid,
        base: FinGroupoid,
        group: FinAbGroup,
        iota: Vec<usize>,
        pi: Vec<usize>,
        section: Option<Vec<usize>>,
    ) -> Result<Self> {
        if total.unit_count() != base.unit_count() {
            return Err(Error::Malformed("total and base must share their units".into()));
        }
        if iota.len() != base.unit_count() * group.order() || iota.iter().any(|&a| a >= total.arrow_count()) {
            return Err(Error::Malformed("iota table has the wrong shape".into()));
        }
        if pi.len() != total.arrow_count() || pi.iter().any(|&a| a >= base.arrow_count()) {
            return Err(Error::Malformed("pi table has the wrong shape".into()));
        }
        if let Some(s) = &section {
            if s.len() != base.arrow_count() || s.iter().any(|&a| a >= total.arrow_count()) {
                return Err(Error::Malformed("section table has the wrong shape".into()));
            }
        }
        Ok(CentralExtension { total, base, group, iota, pi, section })
    }

    /// `ι(u, g)` for a group element index `g`.
    pub fn iota(&self, u: usize, g: usize) -> usize {
        self.iota[u * self.group.order() + g]
    }

    pub fn pi(&self, s: usize) -> usize {
        self.pi[s]
    }

    pub fn section(&self) -> Option<&[usize]> {
        self.section.as_deref()
    }

    pub fn with_section(mut self, section: Vec<usize>) -> Result<Self> {
        if section.len() != self.base.arrow_count() || section.iter().any(|&a| a >= self.total.arrow_count()) {
            return Err(Error::Malformed("section table has the wrong shape".into()));
        }
        self.section = Some(section);
        Ok(self)
    }

    /// Replace the inclusion map, e.g. to build negative controls.
    pub fn with_iota(mut self, iota: Vec<usize>) -> Result<Self> {
        if iota.len() != self.iota.len() || iota.iter().any(|&a| a >= self.total.arrow_count()) {
            return Err(Error::Malformed("iota table has the wrong shape".into()));
        }
        self.iota = iota;
        Ok(self)
    }

    /// Exhaustively checks every axiom of a central extension; returns all
    /// failures found (at most one per kind).
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (t, b, g) = (&self.total, &self.base, &self.group);
        if let Err(e) = t.check_axioms() {
            out.push(format!("total groupoid: {e}"));
        }
        if let Err(e) = b.check_axioms() {
            out.push(format!("base groupoid: {e}"));
        }
        if !out.is_empty() {
            return out;
        }
        let n = g.order();
        let mut first = |kind: &str, msg: String| {
            if !out.iter().any(|m: &String| m.starts_with(kind)) {
                out.push(format!("{kind}: {msg}"));
            }
        };
        // π is a surjective morphism compatible with the unit identification
        for s in 0..t.arrow_count() {
            let p = self.pi[s];
            if b.range(p) != t.range(s) || b.source(p) != t.source(s) {
                first("pi", format!("endpoints not preserved at {}", t.arrow_label(s)));
            }
        }
        for u in 0..t.unit_count() {
            if self.pi[t.unit_arrow(u)] != b.unit_arrow(u) {
                first("pi", format!("identity of {} not preserved", t.unit_label(u)));
            }
        }
        for (x, y) in t.composable_pairs() {
            if self.pi[t.mul(x, y)] != b.mul(self.pi[x], self.pi[y]) {
                first("pi", format!("not multiplicative at ({}, {})", t.arrow_label(x), t.arrow_label(y)));
            }
        }
        let mut fiber = vec![0usize; b.arrow_count()];
        for s in 0..t.arrow_count() {
            fiber[self.pi[s]] += 1;
        }
        if let Some(a) = fiber.iter().position(|&c| c != n) {
            first("pi", format!("fiber over {} has {} arrows, expected {n}", b.arrow_label(a), fiber[a]));
        }
        // ι is an injective morphism of group bundles into the kernel
        let mut seen = vec![false; t.arrow_count()];
        for u in 0..t.unit_count() {
            if self.iota(u, 0) != t.unit_arrow(u) {
                first("iota", format!("ι({}, 0) is not the identity", t.unit_label(u)));
            }
            for x in 0..n {
                let a = self.iota(u, x);
                if t.range(a) != u || t.source(a) != u {
                    first("iota", format!("ι({}, {}) is not a loop at the unit", t.unit_label(u), g.elem_at(x)));
                }
                if seen[a] {
                    first("iota", "not injective".into());
                }
                seen[a] = true;
                if self.pi[a] != b.unit_arrow(u) {
                    first("iota", format!("π∘ι({}, {}) is not a unit", t.unit_label(u), g.elem_at(x)));
                }
                for y in 0..n {
                    if t.range(a) == u && t.compose(a, self.iota(u, y)) != Some(self.iota(u, g.add_idx(x, y))) {
                        first("iota", "not a homomorphism".into());
                    }
                }
            }
        }
        for s in 0..t.arrow_count() {
            if b.is_unit_arrow(self.pi[s]) && !seen[s] {
                first("kernel", format!("{} maps to a unit but is not in the image of ι", t.arrow_label(s)));
            }
        }
        // centrality
        for s in 0..t.arrow_count() {
            for x in 0..n {
                let l = t.compose(self.iota(t.range(s), x), s);
                let r = t.compose(s, self.iota(t.source(s), x));
                if l.is_none() || l != r {
                    first("centrality", format!("fails at {} with g = {}", t.arrow_label(s), g.elem_at(x)));
                }
            }
        }
        if let Some(sec) = &self.section {
            for (a, &s) in sec.iter().enumerate() {
                if self.pi[s] != a {
                    first("section", format!("π(κ({})) ≠ {}", b.arrow_label(a), b.arrow_label(a)));
                }
            }
        }
        out
    }

    /// For each arrow of the total space, the group element `g` with
    /// `σ = ι(r(σ), g) · ref(π(σ))`, where `ref` picks one arrow per fiber.
    fn offsets(&self, reference: &[usize]) -> Result<Vec<usize>> {
        let t = &self.total;
        let mut off = vec![usize::MAX; t.arrow_count()];
        for &s0 in reference {
            let r = t.range(s0);
            for x in 0..self.group.order() {
                let s = t.compose(self.iota(r, x), s0).ok_or_else(|| Error::Internal("ι not composable".into()))?;
                off[s] = x;
            }
        }
        if off.contains(&usize::MAX) {
            return Err(Error::Precondition("G does not act transitively on the fibers of π".into()));
        }
        Ok(off)
    }

    /// The renormalized section `κ'(γ) = κ(r(γ))⁻¹ κ(γ)`, which sends units
    /// to units.
    fn renormalized(&self, kappa: &[usize]) -> Result<Vec<usize>> {
        let (t, b) = (&self.total, &self.base);
        if kappa.len() != b.arrow_count() {
            return Err(Error::Malformed("section has the wrong length".into()));
        }
        for (a, &s) in kappa.iter().enumerate() {
            if s >= t.arrow_count() || self.pi[s] != a {
                return precondition(format!("κ is not a section of π at {}", b.arrow_label(a)));
            }
        }
        Ok(kappa
            .iter()
            .enumerate()
            .map(|(a, &s)| {
                let ku = kappa[b.unit_arrow(b.range(a))];
                t.mul(t.inverse(ku), s)
            })
            .collect())
    }

    /// The normalized cocycle of a section:
    /// `ι(r(γ₁), φ(γ₁,γ₂)) = κ'(γ₁) κ'(γ₂) κ'(γ₁γ₂)⁻¹`.
    pub fn extract_cocycle(&self, kappa: &[usize]) -> Result<GroupoidCocycle> {
        let kp = self.renormalized(kappa)?;
        let (t, b) = (&self.total, &self.base);
        let mut iota_inv = vec![usize::MAX; t.arrow_count()];
        for u in 0..t.unit_count() {
            for x in 0..self.group.order() {
                iota_inv[self.iota(u, x)] = x;
            }
        }
        let mut phi = GroupoidCocycle::zero(self.group.clone());
        for (x, y) in b.composable_pairs() {
            let prod = t.mul(t.mul(kp[x], kp[y]), t.inverse(kp[b.mul(x, y)]));
            let v = iota_inv[prod];
            if v == usize::MAX {
                return Err(Error::Precondition("extension is not exact at the units".into()));
            }
            phi.set(x, y, v);
        }
        Ok(phi)
    }

    /// The proper isomorphism `build_extension(base, φ) -> self` given by
    /// `(g, γ) ↦ ι(r(γ), g) κ'(γ)`, as an arrow map indexed like
    /// [`build_extension`].
    pub fn witness_from_section(&self, kappa: &[usize]) -> Result<Vec<usize>> {
        let kp = self.renormalized(kappa)?;
        let n = self.group.order();
        let mut map = vec![0usize; self.base.arrow_count() * n];
        for (a, &k) in kp.iter().enumerate() {
            for x in 0..n {
                map[a * n + x] = self.total.mul(self.iota(self.base.range(a), x), k);
            }
        }
        Ok(map)
    }
}

/// `𝔈(Γ, φ)`: arrows `(g, γ)` with `(g, γ₁)(h, γ₂) = (g + h + φ(γ₁, γ₂), γ₁γ₂)`
/// and `(g, γ)⁻¹ = (-g - φ(γ⁻¹, γ), γ⁻¹)`. Arrow `(g, γ)` has id
/// `γ * |G| + index(g)`; the canonical section is `γ ↦ (0, γ)`.
pub fn build_extension(base: &FinGroupoid, phi: &GroupoidCocycle) -> Result<CentralExtension> {
    if !phi.is_normalized(base) {
        return precondition("build_extension needs a normalized cocycle");
    }
    let grp = phi.group().clone();
    let n = grp.order();
    let mut arrows = Vec::with_capacity(base.arrow_count() * n);
    for a in 0..base.arrow_count() {
        for x in 0..n {
            arrows.push(ArrowSpec {
                label: format!("({},{})", grp.elem_at(x), base.arrow_label(a)),
                range: base.range(a),
                source: base.source(a),
            });
        }
    }
    let unit_arrow = (0..base.unit_count()).map(|u| base.unit_arrow(u) * n).collect();
    let total = FinGroupoid::build(
        base.unit_labels().to_vec(),
        arrows,
        unit_arrow,
        |s| {
            let (a, x) = (s / n, s % n);
            let ai = base.inverse(a);
            let y = grp.sub_idx(grp.neg_idx(x), phi.get(ai, a));
            ai * n + y
        },
        |s, t| {
            let (a, x) = (s / n, s % n);
            let (b, y) = (t / n, t % n);
            let z = grp.add_idx(grp.add_idx(x, y), phi.get(a, b));
            base.mul(a, b) * n + z
        },
    )?;
    let iota = (0..base.unit_count())
        .flat_map(|u| (0..n).map(move |x| base.unit_arrow(u) * n + x))
        .collect();
    let pi = (0..total.arrow_count()).map(|s| s / n).collect();
    let section = (0..base.arrow_count()).map(|a| a * n).collect();
    CentralExtension::from_parts(total, base.clone(), grp, iota, pi, Some(section))
}

fn check_compatible(e1: &CentralExtension, e2: &CentralExtension) -> Result<()> {
    if e1.group != e2.group {
        return Err(Error::Mismatch("extensions have different groups".into()));
    }
    if e1.base != e2.base {
        return Err(Error::Mismatch("extensions have different base groupoids".into()));
    }
    Ok(())
}

/// The Baer sum: the fibered product `Σ₁ ×_Γ Σ₂` modulo
/// `(ι₁(g)σ₁, σ₂) ~ (σ₁, ι₂(g)σ₂)`.
///
/// Each class has a unique representative whose first component is a fixed
/// reference arrow in its fiber, so classes are indexed by the arrows of
/// `Σ₂`. A section is provided when both summands carry one.
pub fn baer_sum(e1: &CentralExtension, e2: &CentralExtension) -> Result<CentralExtension> {
    check_compatible(e1, e2)?;
    let (t1, t2, b) = (&e1.total, &e2.total, &e1.base);
    let grp = e1.group.clone();
    let n = grp.order();
    let mut reference = vec![usize::MAX; b.arrow_count()];
    for s in 0..t1.arrow_count() {
        let a = e1.pi[s];
        if reference[a] == usize::MAX {
            reference[a] = s;
        }
    }
    if reference.contains(&usize::MAX) {
        return precondition("first extension is not surjective onto the base");
    }
    let off1 = e1.offsets(&reference)?;
    // class of (σ₁, σ₂) as an arrow of Σ₂: shift σ₂ by σ₁'s offset
    let class = |s1: usize, s2: usize| t2.mul(e2.iota(t2.range(s2), off1[s1]), s2);
    let arrows = (0..t2.arrow_count())
        .map(|s| ArrowSpec {
            label: format!("[{},{}]", t1.arrow_label(reference[e2.pi[s]]), t2.arrow_label(s)),
            range: t2.range(s),
            source: t2.source(s),
        })
        .collect();
    let unit_arrow = (0..b.unit_count())
        .map(|u| class(t1.unit_arrow(u), t2.unit_arrow(u)))
        .collect();
    let total = FinGroupoid::build(
        b.unit_labels().to_vec(),
        arrows,
        unit_arrow,
        |s| class(t1.inverse(reference[e2.pi[s]]), t2.inverse(s)),
        |s, t| class(t1.mul(reference[e2.pi[s]], reference[e2.pi[t]]), t2.mul(s, t)),
    )?;
    let iota = (0..b.unit_count())
        .flat_map(|u| (0..n).map(move |x| (u, x)))
        .map(|(u, x)| class(e1.iota(u, x), t2.unit_arrow(u)))
        .collect();
    let section = match (&e1.section, &e2.section) {
        (Some(k1), Some(k2)) => Some(k1.iter().zip(k2).map(|(&s1, &s2)| class(s1, s2)).collect()),
        _ => None,
    };
    CentralExtension::from_parts(total, b.clone(), grp, iota, e2.pi.clone(), section)
}

/// The same groupoid with `ι'(u, g) = ι(u, -g)`.
pub fn inverse_extension(e: &CentralExtension) -> CentralExtension {
    let n = e.group.order();
    let iota = (0..e.base.unit_count())
        .flat_map(|u| (0..n).map(move |x| (u, x)))
        .map(|(u, x)| e.iota(u, e.group.neg_idx(x)))
        .collect();
    CentralExtension { iota, ..e.clone() }
}

/// Checks that `map` (arrows of `e1` to arrows of `e2`) is a proper
/// isomorphism: a bijective groupoid morphism with `π₂∘map = π₁` and
/// `map∘ι₁ = ι₂`.
pub fn check_proper_isomorphism(e1: &CentralExtension, e2: &CentralExtension, map: &[usize]) -> Result<()> {
    check_compatible(e1, e2)?;
    let (t1, t2) = (&e1.total, &e2.total);
    if map.len() != t1.arrow_count() || t1.arrow_count() != t2.arrow_count() {
        return precondition("arrow counts differ");
    }
    let mut hit = vec![false; t2.arrow_count()];
    for &s in map {
        if s >= t2.arrow_count() || std::mem::replace(&mut hit[s], true) {
            return precondition("map is not a bijection");
        }
    }
    for (s, &m) in map.iter().enumerate() {
        if e2.pi[m] != e1.pi[s] {
            return precondition(format!("map does not commute with π at {}", t1.arrow_label(s)));
        }
    }
    for u in 0..e1.base.unit_count() {
        for x in 0..e1.group.order() {
            if map[e1.iota(u, x)] != e2.iota(u, x) {
                return precondition("map does not commute with ι");
            }
        }
    }
    for (a, b) in t1.composable_pairs() {
        if t2.compose(map[a], map[b]) != Some(map[t1.mul(a, b)]) {
            return precondition(format!("map is not multiplicative at ({}, {})", t1.arrow_label(a), t1.arrow_label(b)));
        }
    }
    Ok(())
}

/// Decides proper isomorphism of two extensions carrying sections: extracts
/// both cocycles, solves `d¹f = φ₂ - φ₁`, and returns the arrow map
/// `ι₁(r, g)κ₁'(γ) ↦ ι₂(r, g - f(γ))κ₂'(γ)` when one exists.
pub fn properly_isomorphic(e1: &CentralExtension, e2: &CentralExtension) -> Result<Option<Vec<usize>>> {
    check_compatible(e1, e2)?;
    let (Some(k1), Some(k2)) = (&e1.section, &e2.section) else {
        return precondition("both extensions need a section");
    };
    let phi1 = e1.extract_cocycle(k1)?;
    let phi2 = e2.extract_cocycle(k2)?;
    let Some(f) = phi2.sub(&phi1)?.solve_coboundary(&e1.base) else {
        return Ok(None);
    };
    let kp1 = e1.renormalized(k1)?;
    let kp2 = e2.renormalized(k2)?;
    let off1 = e1.offsets(&kp1)?;
    let grp = &e1.group;
    let map: Vec<usize> = (0..e1.total.arrow_count())
        .map(|s| {
            let a = e1.pi[s];
            let x = grp.sub_idx(off1[s], f[a]);
            e2.total.mul(e2.iota(e2.base.range(a), x), kp2[a])
        })
        .collect();
    check_proper_isomorphism(e1, e2, &map).map_err(|e| Error::Internal(format!("constructed witness invalid: {e}")))?;
    Ok(Some(map))
}

/// Blows up both `Σ` and `Γ` along the same family of unit sets:
/// `π'(i,σ,j) = (i,π(σ),j)`, `ι'((i,u),g) = (i,ι(u,g),i)`, and
/// `κ'(i,γ,j) = (i,κ(γ),j)`.
pub fn blowup_extension(e: &CentralExtension, labels: &[String], sets: &[Vec<usize>]) -> Result<(CentralExtension, Blowup, Blowup)> {
    let bt = Blowup::new(&e.total, labels, sets)?;
    let bb = Blowup::new(&e.base, labels, sets)?;
    let n = e.group.order();
    let pi = bt
        .triples
        .iter()
        .map(|&(i, s, j)| bb.arrow(i, e.pi[s], j).expect("blow-up of base contains image"))
        .collect();
    let iota = bt
        .units
        .iter()
        .flat_map(|&(i, u)| (0..n).map(move |x| (i, u, x)))
        .map(|(i, u, x)| bt.arrow(i, e.iota(u, x), i).expect("loop at a blown-up unit"))
        .collect();
    let section = e.section.as_ref().map(|k| {
        bb.triples
            .iter()
            .map(|&(i, a, j)| bt.arrow(i, k[a], j).expect("section lifts"))
            .collect()
    });
    let ext = CentralExtension::from_parts(bt.groupoid.clone(), bb.groupoid.clone(), e.group.clone(), iota, pi, section)?;
    Ok((ext, bt, bb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::Cover;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn base() -> Blowup {
        let c = Cover::new(
            strs(&["a", "b", "c"]),
            vec![
                ("1".into(), strs(&["a", "b", "c"])),
                ("2".into(), strs(&["b", "c"])),
                ("3".into(), strs(&["c"])),
            ],
        )
        .unwrap();
        Blowup::of_cover(&c)
    }

    fn coboundary_cocycle(g: &FinGroupoid, grp: &FinAbGroup, seed: usize) -> GroupoidCocycle {
        let f: Vec<usize> = (0..g.arrow_count()).map(|a| (a * 7 + seed) % grp.order()).collect();
        GroupoidCocycle::coboundary_of(g, grp, &f).normalize(g).unwrap().0
    }

    #[test]
    fn trivial_twist_is_direct_product() {
        let b = base();
        let grp = FinAbGroup::cyclic(2);
        let e = build_extension(&b.groupoid, &GroupoidCocycle::zero(grp.clone())).unwrap();
        assert!(e.check().is_empty(), "{:?}", e.check());
        assert_eq!(e.total.arrow_count(), 2 * b.groupoid.arrow_count());
        assert!(e.total.has_central_isotropy());
        let phi = e.extract_cocycle(e.section().unwrap()).unwrap();
        assert_eq!(phi, GroupoidCocycle::zero(grp));
    }

    #[test]
    fn roundtrip_and_baer_sum() {
        let b = base();
        let g = &b.groupoid;
        let grp = FinAbGroup::cyclic(4);
        let p1 = coboundary_cocycle(g, &grp, 1);
        let p2 = coboundary_cocycle(g, &grp, 3);
        let e1 = build_extension(g, &p1).unwrap();
        assert_eq!(e1.extract_cocycle(e1.section().unwrap()).unwrap(), p1);
        let w = e1.witness_from_section(e1.section().unwrap()).unwrap();
        check_proper_isomorphism(&e1, &e1, &w).unwrap();
        let e2 = build_extension(g, &p2).unwrap();
        let sum = baer_sum(&e1, &e2).unwrap();
        assert!(sum.check().is_empty(), "{:?}", sum.check());
        let e12 = build_extension(g, &p1.add(&p2).unwrap()).unwrap();
        assert!(properly_isomorphic(&sum, &e12).unwrap().is_some());
        let inv = inverse_extension(&e1);
        assert!(inv.check().is_empty());
        let zero = build_extension(g, &GroupoidCocycle::zero(grp)).unwrap();
        assert!(properly_isomorphic(&baer_sum(&e1, &inv).unwrap(), &zero).unwrap().is_some());
    }

    #[test]
    fn corrupted_iota_breaks_centrality() {
        let b = base();
        let grp = FinAbGroup::cyclic(3);
        let e = build_extension(&b.groupoid, &GroupoidCocycle::zero(grp)).unwrap();
        let mut iota: Vec<usize> = (0..e.base.unit_count() * 3).map(|k| e.iota(k / 3, k % 3)).collect();
        // send ι(u, 1) to a non-loop arrow
        let bad = (0..e.total.arrow_count()).find(|&s| e.total.range(s) != e.total.source(s)).unwrap();
        let u = e.total.range(bad);
        iota[u * 3 + 1] = bad;
        let broken = e.with_iota(iota).unwrap();
        let report = broken.check();
        assert!(report.iter().any(|m| m.starts_with("centrality") || m.starts_with("iota")), "{report:?}");
    }
}
