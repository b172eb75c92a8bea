//! Finite groupoids, blow-ups along covers of the unit space, relation
//! groupoids, isotropy, and groupoid 2-cocycles with values in a finite
//! abelian group.

use std::collections::HashMap;

use crate::cech::CechCochain;
use crate::cover::Cover;
use crate::error::{precondition, Error, Result};
use crate::group::FinAbGroup;
use crate::linalg::{solve_mod_lexmin, IntMatrix};

/// Upper bound on composable pairs materialized in a composition table.
pub const MAX_COMPOSABLE_PAIRS: usize = 20_000_000;

/// A finite groupoid with an explicit composition table. Units are numbered
/// `0..unit_count()` and each has an identity arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGroupoid {
    unit_labels: Vec<String>,
    arrow_labels: Vec<String>,
    range: Vec<usize>,
    source: Vec<usize>,
    inverse: Vec<usize>,
    unit_arrow: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    by_range: Vec<Vec<usize>>,
    by_source: Vec<Vec<usize>>,
}

/// Range and source units of an arrow, plus its label.
#[derive(Clone, Debug)]
pub struct ArrowSpec {
    pub label: String,
    pub range: usize,
    pub source: usize,
}

impl FinGroupoid {
    /// Builds a groupoid, evaluating `compose` on every composable pair
    /// (`source(a) == range(b)`) and `inverse` on every arrow. Structural
    /// consistency is checked here; the groupoid axioms are checked by
    /// [`FinGroupoid::check_axioms`].
    pub fn build(
        unit_labels: Vec<String>,
        arrows: Vec<ArrowSpec>,
        unit_arrow: Vec<usize>,
        inverse: impl Fn(usize) -> usize,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let nu = unit_labels.len();
        let na = arrows.len();
        if unit_arrow.len() != nu {
            return Err(Error::Malformed("one identity arrow per unit required".into()));
        }
        let mut by_range = vec![Vec::new(); nu];
        let mut by_source = vec![Vec::new(); nu];
        for (a, spec) in arrows.iter().enumerate() {
            if spec.range >= nu || spec.source >= nu {
                return Err(Error::Malformed(format!("arrow {:?} refers to an unknown unit", spec.label)));
            }
            by_range[spec.range].push(a);
            by_source[spec.source].push(a);
        }
        for (u, &a) in unit_arrow.iter().enumerate() {
            if a >= na || arrows[a].range != u || arrows[a].source != u {
                return Err(Error::Malformed(format!("identity arrow of unit {:?} is not a loop at it", unit_labels[u])));
            }
        }
        let pairs: usize = (0..nu).map(|u| by_source[u].len() * by_range[u].len()).sum();
        if pairs > MAX_COMPOSABLE_PAIRS {
            return Err(Error::TooLarge(format!("{pairs} composable pairs")));
        }
        let mut table = HashMap::with_capacity(pairs);
        for u in 0..nu {
            for &a in &by_source[u] {
                for &b in &by_range[u] {
                    let c = compose(a, b);
                    if c >= na {
                        return Err(Error::Malformed("composition returned an unknown arrow".into()));
                    }
                    table.insert((a, b), c);
                }
            }
        }
        let inv: Vec<usize> = (0..na).map(&inverse).collect();
        if inv.iter().any(|&b| b >= na) {
            return Err(Error::Malformed("inverse returned an unknown arrow".into()));
        }
        let (range, source): (Vec<usize>, Vec<usize>) = arrows.iter().map(|s| (s.range, s.source)).unzip();
        Ok(FinGroupoid {
            unit_labels,
            arrow_labels: arrows.into_iter().map(|s| s.label).collect(),
            range,
            source,
            inverse: inv,
            unit_arrow,
            compose: table,
            by_range,
            by_source,
        })
    }

    /// A groupoid given by a full composition table (as parsed from input).
    /// Inverses are recovered from the table.
    pub fn from_table(
        unit_labels: Vec<String>,
        arrows: Vec<ArrowSpec>,
        unit_arrow: Vec<usize>,
        table: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let lookup = |a: usize, b: usize| table.get(&(a, b)).copied();
        let na = arrows.len();
        let mut inverse = vec![usize::MAX; na];
        for a in 0..na {
            let (r, s) = (arrows[a].range, arrows[a].source);
            if r >= unit_labels.len() || s >= unit_labels.len() {
                return Err(Error::Malformed(format!("arrow {:?} refers to an unknown unit", arrows[a].label)));
            }
            for b in 0..na {
                if arrows[b].range == s && arrows[b].source == r {
                    let ab = lookup(a, b);
                    let ba = lookup(b, a);
                    if ab.is_some() && ab == unit_arrow.get(r).copied() && ba == unit_arrow.get(s).copied() {
                        inverse[a] = b;
                        break;
                    }
                }
            }
            if inverse[a] == usize::MAX {
                return Err(Error::Malformed(format!("arrow {:?} has no inverse in the table", arrows[a].label)));
            }
        }
        for &(a, b) in table.keys() {
            if a >= na || b >= na || arrows[a].source != arrows[b].range {
                return Err(Error::Malformed("composition table mentions a non-composable pair".into()));
            }
        }
        let missing = std::cell::Cell::new(false);
        let g = Self::build(unit_labels, arrows, unit_arrow, |a| inverse[a], |a, b| {
            lookup(a, b).unwrap_or_else(|| {
                missing.set(true);
                0
            })
        })?;
        if missing.get() {
            return Err(Error::Malformed("composition table is missing a composable pair".into()));
        }
        Ok(g)
    }

    /// The groupoid with only identity arrows on the given units.
    pub fn units_only(labels: Vec<String>) -> Self {
        let arrows = labels
            .iter()
            .enumerate()
            .map(|(u, l)| ArrowSpec { label: l.clone(), range: u, source: u })
            .collect();
        let n = labels.len();
        Self::build(labels, arrows, (0..n).collect(), |a| a, |a, _| a).expect("unit groupoid")
    }

    pub fn unit_count(&self) -> usize {
        self.unit_labels.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrow_labels.len()
    }

    pub fn unit_label(&self, u: usize) -> &str {
        &self.unit_labels[u]
    }

    pub fn unit_labels(&self) -> &[String] {
        &self.unit_labels
    }

    pub fn arrow_label(&self, a: usize) -> &str {
        &self.arrow_labels[a]
    }

    pub fn range(&self, a: usize) -> usize {
        self.range[a]
    }

    pub fn source(&self, a: usize) -> usize {
        self.source[a]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn unit_arrow(&self, u: usize) -> usize {
        self.unit_arrow[u]
    }

    pub fn is_unit_arrow(&self, a: usize) -> bool {
        self.unit_arrow[self.range[a]] == a
    }

    /// `a * b`, defined when `source(a) == range(b)`.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.compose.get(&(a, b)).copied()
    }

    pub(crate) fn mul(&self, a: usize, b: usize) -> usize {
        self.compose[&(a, b)]
    }

    /// Arrows with the given range.
    pub fn arrows_to(&self, u: usize) -> &[usize] {
        &self.by_range[u]
    }

    /// Arrows with the given source.
    pub fn arrows_from(&self, u: usize) -> &[usize] {
        &self.by_source[u]
    }

    /// All composable pairs `(a, b)` with `source(a) == range(b)`, ordered by
    /// `a` then `b`.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.arrow_count() {
            for &b in &self.by_range[self.source[a]] {
                out.push((a, b));
            }
        }
        out
    }

    /// Exhaustively checks the groupoid axioms; returns the first failure.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let label = |a: usize| self.arrow_labels[a].as_str();
        for (u, &e) in self.unit_arrow.iter().enumerate() {
            if self.range[e] != u || self.source[e] != u {
                return Err(format!("identity of {} is not a loop", self.unit_labels[u]));
            }
        }
        for a in 0..self.arrow_count() {
            let (r, s) = (self.range[a], self.source[a]);
            if self.compose(self.unit_arrow[r], a) != Some(a) || self.compose(a, self.unit_arrow[s]) != Some(a) {
                return Err(format!("unit law fails at {}", label(a)));
            }
            let b = self.inverse[a];
            if self.range[b] != s || self.source[b] != r {
                return Err(format!("inverse of {} has wrong endpoints", label(a)));
            }
            if self.compose(a, b) != Some(self.unit_arrow[r]) || self.compose(b, a) != Some(self.unit_arrow[s]) {
                return Err(format!("inverse law fails at {}", label(a)));
            }
        }
        for (&(a, b), &c) in &self.compose {
            if self.range[c] != self.range[a] || self.source[c] != self.source[b] {
                return Err(format!("{} * {} has wrong endpoints", label(a), label(b)));
            }
        }
        for a in 0..self.arrow_count() {
            for &b in &self.by_range[self.source[a]] {
                let ab = self.mul(a, b);
                for &c in &self.by_range[self.source[b]] {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("associativity fails at ({}, {}, {})", label(a), label(b), label(c)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether the only arrows from a unit to itself are identities.
    pub fn is_principal(&self) -> bool {
        (0..self.arrow_count()).all(|a| self.range[a] != self.source[a] || self.is_unit_arrow(a))
    }

    /// Arrows with equal range and source.
    pub fn isotropy_arrows(&self) -> Vec<usize> {
        (0..self.arrow_count()).filter(|&a| self.range[a] == self.source[a]).collect()
    }

    /// The isotropy subgroupoid.
    pub fn isotropy(&self) -> FinGroupoid {
        self.restrict_arrows(&self.isotropy_arrows())
    }

    /// The subgroupoid on a set of arrows closed under composition and
    /// inverses that contains every identity.
    fn restrict_arrows(&self, keep: &[usize]) -> FinGroupoid {
        let mut pos = vec![usize::MAX; self.arrow_count()];
        for (n, &a) in keep.iter().enumerate() {
            pos[a] = n;
        }
        let arrows = keep
            .iter()
            .map(|&a| ArrowSpec { label: self.arrow_labels[a].clone(), range: self.range[a], source: self.source[a] })
            .collect();
        FinGroupoid::build(
            self.unit_labels.clone(),
            arrows,
            self.unit_arrow.iter().map(|&e| pos[e]).collect(),
            |n| pos[self.inverse[keep[n]]],
            |m, n| pos[self.mul(keep[m], keep[n])],
        )
        .expect("subgroupoid of a valid groupoid")
    }

    /// Central isotropy, checked by definition: for every pair of arrows
    /// `γ, γ'` with the same endpoints and every isotropy arrow `a` at their
    /// range, transporting `a` along `γ` or `γ'` gives the same arrow.
    /// For finite groupoids this holds iff every isotropy group is abelian.
    pub fn has_central_isotropy(&self) -> bool {
        let mut by_ends: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for a in 0..self.arrow_count() {
            by_ends.entry((self.range[a], self.source[a])).or_default().push(a);
        }
        for ((r, _), arrows) in &by_ends {
            let iso = &by_ends[&(*r, *r)];
            for &g in arrows {
                for &h in arrows {
                    if g >= h {
                        continue;
                    }
                    for &a in iso {
                        let tg = self.mul(self.mul(self.inverse[g], a), g);
                        let th = self.mul(self.mul(self.inverse[h], a), h);
                        if tg != th {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Classes of arrows under left multiplication by isotropy.
    pub fn isotropy_classes(&self) -> Vec<Vec<usize>> {
        let mut class = vec![usize::MAX; self.arrow_count()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..self.arrow_count() {
            if class[s] != usize::MAX {
                continue;
            }
            let r = self.range[s];
            let mut members: Vec<usize> = self.by_range[r]
                .iter()
                .filter(|&&a| self.source[a] == r)
                .map(|&a| self.mul(a, s))
                .collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class[m] = out.len();
            }
            out.push(members);
        }
        out
    }
}

/// A groupoid blown up along a family of unit subsets `U_i`: arrows are
/// triples `(i, γ, j)` with `r(γ) ∈ U_i`, `s(γ) ∈ U_j`, and
/// `(i, γ, j)(j, η, k) = (i, γη, k)`.
#[derive(Clone, Debug)]
pub struct Blowup {
    pub groupoid: FinGroupoid,
    /// `(i, γ, j)` for each arrow
    pub triples: Vec<(usize, usize, usize)>,
    /// `(i, u)` for each unit
    pub units: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize, usize), usize>,
    unit_lookup: HashMap<(usize, usize), usize>,
}

impl Blowup {
    pub fn new(base: &FinGroupoid, index_labels: &[String], sets: &[Vec<usize>]) -> Result<Self> {
        if index_labels.len() != sets.len() {
            return Err(Error::Malformed("one label per set required".into()));
        }
        let mut member = vec![vec![false; base.unit_count()]; sets.len()];
        for (i, s) in sets.iter().enumerate() {
            for &u in s {
                if u >= base.unit_count() {
                    return Err(Error::Malformed("blow-up set mentions an unknown unit".into()));
                }
                member[i][u] = true;
            }
        }
        let mut units = Vec::new();
        let mut unit_lookup = HashMap::new();
        for (i, m) in member.iter().enumerate() {
            for (u, &inside) in m.iter().enumerate() {
                if inside {
                    unit_lookup.insert((i, u), units.len());
                    units.push((i, u));
                }
            }
        }
        let mut triples = Vec::new();
        let mut lookup = HashMap::new();
        for i in 0..sets.len() {
            for g in 0..base.arrow_count() {
                if !member[i][base.range(g)] {
                    continue;
                }
                for (j, m) in member.iter().enumerate() {
                    if m[base.source(g)] {
                        lookup.insert((i, g, j), triples.len());
                        triples.push((i, g, j));
                    }
                }
            }
        }
        let unit_labels = units
            .iter()
            .map(|&(i, u)| format!("({},{})", index_labels[i], base.unit_label(u)))
            .collect();
        let arrows = triples
            .iter()
            .map(|&(i, g, j)| ArrowSpec {
                label: format!("({},{},{})", index_labels[i], base.arrow_label(g), index_labels[j]),
                range: unit_lookup[&(i, base.range(g))],
                source: unit_lookup[&(j, base.source(g))],
            })
            .collect();
        let unit_arrow = units.iter().map(|&(i, u)| lookup[&(i, base.unit_arrow(u), i)]).collect();
        let groupoid = FinGroupoid::build(
            unit_labels,
            arrows,
            unit_arrow,
            |a| {
                let (i, g, j) = triples[a];
                lookup[&(j, base.inverse(g), i)]
            },
            |a, b| {
                let (i, g, _) = triples[a];
                let (_, h, k) = triples[b];
                lookup[&(i, base.mul(g, h), k)]
            },
        )?;
        Ok(Blowup { groupoid, triples, units, lookup, unit_lookup })
    }

    /// `Γ_𝒰`: the blow-up of the space of a cover (viewed as a groupoid with
    /// only identities) along the cover. Arrows are `(i, x, j)` with
    /// `x ∈ U_i ∩ U_j`.
    pub fn of_cover(cover: &Cover) -> Self {
        let base = FinGroupoid::units_only(cover.space().labels().to_vec());
        let sets: Vec<Vec<usize>> = (0..cover.set_count()).map(|i| cover.set(i).to_vec()).collect();
        Self::new(&base, cover.set_labels(), &sets).expect("cover blow-up")
    }

    pub fn arrow(&self, i: usize, g: usize, j: usize) -> Option<usize> {
        self.lookup.get(&(i, g, j)).copied()
    }

    pub fn unit(&self, i: usize, u: usize) -> Option<usize> {
        self.unit_lookup.get(&(i, u)).copied()
    }
}

/// `R(ψ) = {(x, y) : ψ(x) = ψ(y)}` for a surjection `ψ: Y -> X`, with
/// `r(x, y) = x`, `s(x, y) = y`.
#[derive(Clone, Debug)]
pub struct RelationGroupoid {
    pub groupoid: FinGroupoid,
    pub pairs: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize), usize>,
}

impl RelationGroupoid {
    pub fn new(y_labels: Vec<String>, psi: &[usize], x_count: usize) -> Result<Self> {
        if psi.len() != y_labels.len() {
            return Err(Error::Malformed("psi must be defined on every point of Y".into()));
        }
        let mut hit = vec![false; x_count];
        for &x in psi {
            if x >= x_count {
                return Err(Error::Malformed("psi maps outside X".into()));
            }
            hit[x] = true;
        }
        if let Some(x) = hit.iter().position(|h| !h) {
            return precondition(format!("psi is not surjective: point {x} of X has no preimage"));
        }
        let n = y_labels.len();
        let mut pairs = Vec::new();
        let mut lookup = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if psi[a] == psi[b] {
                    lookup.insert((a, b), pairs.len());
                    pairs.push((a, b));
                }
            }
        }
        let arrows = pairs
            .iter()
            .map(|&(a, b)| ArrowSpec { label: format!("({},{})", y_labels[a], y_labels[b]), range: a, source: b })
            .collect();
        let unit_arrow = (0..n).map(|a| lookup[&(a, a)]).collect();
        let groupoid = FinGroupoid::build(
            y_labels,
            arrows,
            unit_arrow,
            |e| {
                let (a, b) = pairs[e];
                lookup[&(b, a)]
            },
            |e, f| lookup[&(pairs[e].0, pairs[f].1)],
        )?;
        Ok(RelationGroupoid { groupoid, pairs, lookup })
    }

    pub fn arrow(&self, x: usize, y: usize) -> Option<usize> {
        self.lookup.get(&(x, y)).copied()
    }
}

/// A 2-cochain on a groupoid: a group element (stored by index, see
/// [`FinAbGroup::index_of`]) for each composable pair. Unset pairs are 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidCocycle {
    group: FinAbGroup,
    values: HashMap<(usize, usize), usize>,
}

impl GroupoidCocycle {
    pub fn zero(group: FinAbGroup) -> Self {
        GroupoidCocycle { group, values: HashMap::new() }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn get(&self, a: usize, b: usize) -> usize {
        self.values.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, a: usize, b: usize, g: usize) {
        if g == 0 {
            self.values.remove(&(a, b));
        } else {
            self.values.insert((a, b), g);
        }
    }

    /// Nonzero entries sorted by pair.
    pub fn entries(&self) -> Vec<((usize, usize), usize)> {
        let mut v: Vec<_> = self.values.iter().map(|(&k, &g)| (k, g)).collect();
        v.sort_unstable();
        v
    }

    pub fn add(&self, other: &GroupoidCocycle) -> Result<GroupoidCocycle> {
        if self.group != other.group {
            return Err(Error::Mismatch("cocycles have different groups".into()));
        }
        let mut out = self.clone();
        for (&(a, b), &g) in &other.values {
            out.set(a, b, self.group.add_idx(out.get(a, b), g));
        }
        Ok(out)
    }

    pub fn neg(&self) -> GroupoidCocycle {
        let mut out = self.clone();
        for v in out.values.values_mut() {
            *v = self.group.neg_idx(*v);
        }
        out
    }

    pub fn sub(&self, other: &GroupoidCocycle) -> Result<GroupoidCocycle> {
        self.add(&other.neg())
    }

    /// `φ(a,b) + φ(ab,c) = φ(b,c) + φ(a,bc)` on every composable triple;
    /// returns the first failing triple.
    pub fn cocycle_failure(&self, g: &FinGroupoid) -> Option<(usize, usize, usize)> {
        let grp = &self.group;
        for a in 0..g.arrow_count() {
            for &b in g.arrows_to(g.source(a)) {
                let ab = g.mul(a, b);
                for &c in g.arrows_to(g.source(b)) {
                    let lhs = grp.add_idx(self.get(a, b), self.get(ab, c));
                    let rhs = grp.add_idx(self.get(b, c), self.get(a, g.mul(b, c)));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_cocycle(&self, g: &FinGroupoid) -> bool {
        self.cocycle_failure(g).is_none()
    }

    /// `φ(u, γ) = 0 = φ(γ, u)` for identities `u`.
    pub fn is_normalized(&self, g: &FinGroupoid) -> bool {
        self.values.keys().all(|&(a, b)| !g.is_unit_arrow(a) && !g.is_unit_arrow(b))
    }

    /// `(d¹f)(a, b) = f(a) + f(b) - f(ab)`.
    pub fn coboundary_of(g: &FinGroupoid, group: &FinAbGroup, f: &[usize]) -> GroupoidCocycle {
        let mut out = GroupoidCocycle::zero(group.clone());
        for (a, b) in g.composable_pairs() {
            let v = group.sub_idx(group.add_idx(f[a], f[b]), f[g.mul(a, b)]);
            out.set(a, b, v);
        }
        out
    }

    /// `(φ', f)` with `f(u) = φ(u, u)` on identities, `0` elsewhere, and
    /// `φ' = φ - d¹f` normalized.
    pub fn normalize(&self, g: &FinGroupoid) -> Result<(GroupoidCocycle, Vec<usize>)> {
        if !self.is_cocycle(g) {
            return precondition("normalization expects a groupoid 2-cocycle");
        }
        let mut f = vec![0usize; g.arrow_count()];
        for u in 0..g.unit_count() {
            let e = g.unit_arrow(u);
            f[e] = self.get(e, e);
        }
        let phi = self.sub(&Self::coboundary_of(g, &self.group, &f))?;
        debug_assert!(phi.is_normalized(g));
        Ok((phi, f))
    }

    /// Some `f` with `d¹f = φ`, lexicographically first per cyclic factor
    /// in arrow order, or `None`.
    pub fn solve_coboundary(&self, g: &FinGroupoid) -> Option<Vec<usize>> {
        let pairs = g.composable_pairs();
        let n = g.arrow_count();
        let mut a = IntMatrix::zeros(pairs.len(), n);
        for (r, &(x, y)) in pairs.iter().enumerate() {
            let xy = g.mul(x, y);
            a.set(r, x, a.get(r, x) + 1);
            a.set(r, y, a.get(r, y) + 1);
            a.set(r, xy, a.get(r, xy) - 1);
        }
        let grp = &self.group;
        let mut comps = vec![vec![0u64; grp.rank()]; n];
        for (fct, &m) in grp.cyclic_orders().iter().enumerate() {
            let rhs: Vec<i128> = pairs
                .iter()
                .map(|&(x, y)| grp.elem_at(self.get(x, y)).0[fct] as i128)
                .collect();
            let sol = solve_mod_lexmin(&a, &rhs, m as i128)?;
            for (k, v) in sol.into_iter().enumerate() {
                comps[k][fct] = v as u64;
            }
        }
        Some(comps.into_iter().map(|c| grp.index_of(&crate::group::GroupElem(c))).collect())
    }

    /// `φ_c((i,x,j),(j,x,k)) = c_ijk(x)` on the blow-up of a cover, for a
    /// normalized Čech 2-cocycle `c` on that cover (either mode).
    pub fn from_cech(blowup: &Blowup, cover: &Cover, c: &CechCochain) -> Result<GroupoidCocycle> {
        if c.degree() != 2 {
            return precondition("a Čech 2-cochain is required");
        }
        check_cochain_on_cover(c, cover)?;
        if !c.is_normalized() {
            return precondition("the Čech cocycle must be normalized");
        }
        let grp = c.group().clone();
        let mut out = GroupoidCocycle::zero(grp.clone());
        let g = &blowup.groupoid;
        for (a, b) in g.composable_pairs() {
            let (i, x, j) = blowup.triples[a];
            let (_, _, k) = blowup.triples[b];
            let v = grp.index_of(&c.get(&[i, j, k], Some(x)));
            out.set(a, b, v);
        }
        Ok(out)
    }
}

/// Checks that a cochain can be evaluated at the points of `cover`: either
/// pointwise on that cover, or in nerve mode on a complex containing every
/// `I(x)` as a simplex.
pub fn check_cochain_on_cover(c: &CechCochain, cover: &Cover) -> Result<()> {
    match c.domain().as_ref() {
        crate::cech::Domain::Pointwise(cv) if cv == cover => Ok(()),
        crate::cech::Domain::Nerve(n)
            if n.vertex_count() == cover.set_count()
                && (0..cover.point_count()).all(|x| n.spans_simplex(cover.indices_at(x))) =>
        {
            Ok(())
        }
        _ => Err(Error::Mismatch("cochain does not live on this cover".into())),
    }
}
