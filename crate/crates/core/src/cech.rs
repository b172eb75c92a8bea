//! Čech cochains with coefficients in a finite abelian group.
//!
//! A cochain of degree `p` assigns a group element to every ordered
//! `(p+1)`-tuple of indices (repeats allowed) whose index set is a simplex.
//! In *nerve* mode the value depends only on the tuple; in *pointwise* mode
//! it also depends on a point `x` of the overlap, and the tuples at `x` are
//! exactly the tuples over `I(x)`. Missing entries are zero.
//!
//! Cohomology is computed on the oriented subcomplex of strictly increasing
//! tuples, which computes the same groups.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cover::{Cover, Nerve};
use crate::error::{precondition, Error, Result};
use crate::group::{FinAbGroup, GroupElem};
use crate::linalg::{kernel_basis, solve_mod_lexmin, IntMatrix, LatticeQuotient};

/// Upper bound on the number of ordered tuples a single cochain operation
/// may enumerate.
pub const MAX_TUPLES: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Pointwise,
    Nerve,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Pointwise => "pointwise",
            Mode::Nerve => "nerve",
        })
    }
}

/// What a cochain lives on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Nerve(Nerve),
    Pointwise(Cover),
}

impl Domain {
    pub fn mode(&self) -> Mode {
        match self {
            Domain::Nerve(_) => Mode::Nerve,
            Domain::Pointwise(_) => Mode::Pointwise,
        }
    }

    pub fn index_count(&self) -> usize {
        match self {
            Domain::Nerve(n) => n.vertex_count(),
            Domain::Pointwise(c) => c.set_count(),
        }
    }

    pub fn index_label(&self, i: usize) -> &str {
        match self {
            Domain::Nerve(n) => n.vertex_label(i),
            Domain::Pointwise(c) => c.set_label(i),
        }
    }

    /// Whether `(tuple, point)` addresses a cochain entry.
    pub fn is_valid(&self, tuple: &[usize], point: Option<usize>) -> bool {
        match (self, point) {
            (Domain::Nerve(n), None) => tuple.iter().all(|&i| i < n.vertex_count()) && n.spans_simplex(tuple),
            (Domain::Pointwise(c), Some(x)) => {
                x < c.point_count() && !tuple.is_empty() && tuple.iter().all(|&i| i < c.set_count()) && c.tuple_at(tuple, x)
            }
            _ => false,
        }
    }

    /// All entry addresses of degree `p`: for pointwise mode grouped by
    /// point, and within a block in lexicographic tuple order.
    pub fn tuples(&self, p: usize) -> Result<Vec<Entry>> {
        let mut out = Vec::new();
        match self {
            Domain::Nerve(n) => {
                let mut buf = Vec::with_capacity(p + 1);
                nerve_tuples(n, p + 1, &mut buf, &mut out)?;
            }
            Domain::Pointwise(c) => {
                for x in 0..c.point_count() {
                    let ix = c.indices_at(x);
                    let count = ix.len().checked_pow(p as u32 + 1).unwrap_or(usize::MAX);
                    if out.len().saturating_add(count) > MAX_TUPLES {
                        return Err(Error::TooLarge(format!("more than {MAX_TUPLES} tuples of degree {p}")));
                    }
                    for code in 0..count {
                        let mut t = vec![0; p + 1];
                        let mut r = code;
                        for slot in t.iter_mut().rev() {
                            *slot = ix[r % ix.len()];
                            r /= ix.len();
                        }
                        out.push((t, Some(x)));
                    }
                }
            }
        }
        Ok(out)
    }

    fn points(&self) -> Vec<Option<usize>> {
        match self {
            Domain::Nerve(_) => vec![None],
            Domain::Pointwise(c) => (0..c.point_count()).map(Some).collect(),
        }
    }

    /// Index sets `I(x)` relevant to a point (all vertices for nerve mode).
    fn local_indices(&self, point: Option<usize>) -> Vec<usize> {
        match (self, point) {
            (Domain::Pointwise(c), Some(x)) => c.indices_at(x).to_vec(),
            _ => (0..self.index_count()).collect(),
        }
    }
}

fn nerve_tuples(n: &Nerve, len: usize, buf: &mut Vec<usize>, out: &mut Vec<Entry>) -> Result<()> {
    if buf.len() == len {
        if out.len() >= MAX_TUPLES {
            return Err(Error::TooLarge(format!("more than {MAX_TUPLES} tuples of length {len}")));
        }
        out.push((buf.clone(), None));
        return Ok(());
    }
    for v in 0..n.vertex_count() {
        buf.push(v);
        if n.spans_simplex(buf) {
            nerve_tuples(n, len, buf, out)?;
        }
        buf.pop();
    }
    Ok(())
}

/// An entry address: an ordered index tuple and, in pointwise mode, a point.
pub type Entry = (Vec<usize>, Option<usize>);

#[derive(Clone, Debug)]
pub struct CechCochain {
    degree: usize,
    domain: Arc<Domain>,
    group: FinAbGroup,
    /// nonzero values only
    values: BTreeMap<Entry, GroupElem>,
}

impl PartialEq for CechCochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.group == other.group
            && (Arc::ptr_eq(&self.domain, &other.domain) || self.domain == other.domain)
            && self.values == other.values
    }
}

impl CechCochain {
    pub fn zero(domain: Arc<Domain>, degree: usize, group: FinAbGroup) -> Self {
        CechCochain { degree, domain, group, values: BTreeMap::new() }
    }

    /// Builds a cochain from explicit entries; later entries overwrite
    /// earlier ones at the same address.
    pub fn from_entries(
        domain: Arc<Domain>,
        degree: usize,
        group: FinAbGroup,
        entries: impl IntoIterator<Item = (Entry, GroupElem)>,
    ) -> Result<Self> {
        let mut c = Self::zero(domain, degree, group);
        for ((t, x), g) in entries {
            c.set(&t, x, g)?;
        }
        Ok(c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mode(&self) -> Mode {
        self.domain.mode()
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn same_parent(&self, other: &CechCochain) -> bool {
        self.degree == other.degree
            && self.group == other.group
            && (Arc::ptr_eq(&self.domain, &other.domain) || self.domain == other.domain)
    }

    fn check_parent(&self, other: &CechCochain) -> Result<()> {
        if self.same_parent(other) {
            Ok(())
        } else {
            Err(Error::Mismatch("cochains differ in degree, group or domain".into()))
        }
    }

    /// The value at an entry; zero when unset.
    pub fn get(&self, tuple: &[usize], point: Option<usize>) -> GroupElem {
        let point = if self.mode() == Mode::Nerve { None } else { point };
        self.values
            .get(&(tuple.to_vec(), point))
            .cloned()
            .unwrap_or_else(|| self.group.zero())
    }

    pub fn set(&mut self, tuple: &[usize], point: Option<usize>, g: GroupElem) -> Result<()> {
        if tuple.len() != self.degree + 1 {
            return Err(Error::Malformed(format!(
                "tuple {tuple:?} has length {}, expected {}",
                tuple.len(),
                self.degree + 1
            )));
        }
        if !self.domain.is_valid(tuple, point) {
            return Err(Error::Malformed(format!("entry {tuple:?} at {point:?} is not in the {} domain", self.mode())));
        }
        if !self.group.contains(&g) {
            return Err(Error::Mismatch(format!("element {g} is not in the coefficient group")));
        }
        let key = (tuple.to_vec(), point);
        if self.group.is_zero(&g) {
            self.values.remove(&key);
        } else {
            self.values.insert(key, g);
        }
        Ok(())
    }

    /// Nonzero entries in address order.
    pub fn entries(&self) -> impl Iterator<Item = (&Entry, &GroupElem)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, other: &CechCochain) -> Result<CechCochain> {
        self.check_parent(other)?;
        let mut out = self.clone();
        for (k, g) in &other.values {
            let v = self.group.add_unchecked(&out.get(&k.0, k.1), g);
            out.put(k.clone(), v);
        }
        Ok(out)
    }

    pub fn neg(&self) -> CechCochain {
        let mut out = self.clone();
        for v in out.values.values_mut() {
            *v = self.group.neg_unchecked(v);
        }
        out
    }

    pub fn sub(&self, other: &CechCochain) -> Result<CechCochain> {
        self.add(&other.neg())
    }

    fn put(&mut self, key: Entry, g: GroupElem) {
        if self.group.is_zero(&g) {
            self.values.remove(&key);
        } else {
            self.values.insert(key, g);
        }
    }

    /// `(δc)(i_0..i_{p+1}) = Σ_k (-1)^k c(i_0..î_k..i_{p+1})`.
    pub fn coboundary(&self) -> Result<CechCochain> {
        let mut out = CechCochain::zero(self.domain.clone(), self.degree + 1, self.group.clone());
        for (t, x) in self.domain.tuples(self.degree + 1)? {
            let v = self.coboundary_at(&t, x);
            out.put((t, x), v);
        }
        Ok(out)
    }

    fn coboundary_at(&self, t: &[usize], x: Option<usize>) -> GroupElem {
        let mut acc = self.group.zero();
        let mut face = Vec::with_capacity(t.len() - 1);
        for k in 0..t.len() {
            face.clear();
            face.extend(t.iter().enumerate().filter(|&(n, _)| n != k).map(|(_, &v)| v));
            let v = self.get(&face, x);
            acc = if k % 2 == 0 {
                self.group.add_unchecked(&acc, &v)
            } else {
                self.group.sub_unchecked(&acc, &v)
            };
        }
        acc
    }

    pub fn is_cocycle(&self) -> Result<bool> {
        for (t, x) in self.domain.tuples(self.degree + 1)? {
            if !self.group.is_zero(&self.coboundary_at(&t, x)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All `c_{i...i}` vanish.
    pub fn is_normalized(&self) -> bool {
        self.domain.points().into_iter().all(|x| {
            self.domain
                .local_indices(x)
                .into_iter()
                .all(|i| self.group.is_zero(&self.get(&vec![i; self.degree + 1], x)))
        })
    }

    /// Returns `(c', b)` with `b_{ii} = c_{iii}`, `b_{ij} = 0` otherwise, and
    /// `c' = c - δb` normalized.
    pub fn normalize(&self) -> Result<(CechCochain, CechCochain)> {
        if self.degree != 2 {
            return precondition("normalize expects a 2-cochain");
        }
        if !self.is_cocycle()? {
            return precondition("normalize expects a cocycle");
        }
        let mut b = CechCochain::zero(self.domain.clone(), 1, self.group.clone());
        for x in self.domain.points() {
            for i in self.domain.local_indices(x) {
                let v = self.get(&[i, i, i], x);
                b.put((vec![i, i], x), v);
            }
        }
        let c = self.sub(&b.coboundary()?)?;
        Ok((c, b))
    }

    /// Checks the identities satisfied by every normalized 2-cocycle:
    /// (a) `c_iij = c_ijj = 0`, (b) `c_iji = c_jij`, (c) `c_ijk = -c_jik + c_iji`,
    /// (d) `c_ijk = -c_ikj + c_jkj`, (e) `c_iji + c_jki = -c_ikj + c_iki + c_jkj`.
    pub fn check_norm_identities(&self) -> Result<IdentityReport> {
        if self.degree != 2 {
            return precondition("identity check expects a 2-cochain");
        }
        let g = &self.group;
        let mut report = IdentityReport { checked: 0, first_violation: None };
        for (t, x) in self.domain.tuples(2)? {
            let (i, j, k) = (t[0], t[1], t[2]);
            let c = |a: usize, b: usize, d: usize| self.get(&[a, b, d], x);
            let mut fail = |id: &'static str, ok: bool| {
                report.checked += 1;
                if !ok && report.first_violation.is_none() {
                    report.first_violation = Some(Violation { identity: id, tuple: t.clone(), point: x });
                }
            };
            fail("a", g.is_zero(&c(i, i, j)) && g.is_zero(&c(i, j, j)));
            fail("b", c(i, j, i) == c(j, i, j));
            fail("c", c(i, j, k) == g.add_unchecked(&g.neg_unchecked(&c(j, i, k)), &c(i, j, i)));
            fail("d", c(i, j, k) == g.add_unchecked(&g.neg_unchecked(&c(i, k, j)), &c(j, k, j)));
            let lhs = g.add_unchecked(&c(i, j, i), &c(j, k, i));
            let rhs = g.add_unchecked(&g.sub_unchecked(&c(i, k, i), &c(i, k, j)), &c(j, k, j));
            fail("e", lhs == rhs);
        }
        Ok(report)
    }

    /// Some `b` with `δb = c`, or `None` when the class of `c` is nonzero.
    ///
    /// The answer is the lexicographically first solution in each cyclic
    /// factor, with unknowns ordered as in [`Domain::tuples`].
    pub fn solve_coboundary(&self) -> Result<Option<CechCochain>> {
        if self.degree == 0 {
            return precondition("a 0-cochain is never a coboundary of anything");
        }
        let p = self.degree;
        let unknowns = self.domain.tuples(p - 1)?;
        let equations = self.domain.tuples(p)?;
        let mut b = CechCochain::zero(self.domain.clone(), p - 1, self.group.clone());
        // independent blocks per point in pointwise mode
        let mut blocks: BTreeMap<Option<usize>, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (n, (_, x)) in unknowns.iter().enumerate() {
            blocks.entry(*x).or_default().0.push(n);
        }
        for (n, (_, x)) in equations.iter().enumerate() {
            blocks.entry(*x).or_default().1.push(n);
        }
        let mut sol: Vec<Vec<u64>> = vec![vec![0; self.group.rank()]; unknowns.len()];
        for (unk, eqs) in blocks.values() {
            let col_of: BTreeMap<&Vec<usize>, usize> =
                unk.iter().enumerate().map(|(c, &n)| (&unknowns[n].0, c)).collect();
            let mut a = IntMatrix::zeros(eqs.len(), unk.len());
            let mut face = Vec::with_capacity(p);
            for (r, &e) in eqs.iter().enumerate() {
                let t = &equations[e].0;
                for k in 0..t.len() {
                    face.clear();
                    face.extend(t.iter().enumerate().filter(|&(n, _)| n != k).map(|(_, &v)| v));
                    let col = col_of[&face];
                    let s = if k % 2 == 0 { 1 } else { -1 };
                    a.set(r, col, a.get(r, col) + s);
                }
            }
            for (f, &m) in self.group.cyclic_orders().iter().enumerate() {
                let rhs: Vec<i128> = eqs
                    .iter()
                    .map(|&e| self.get(&equations[e].0, equations[e].1).0[f] as i128)
                    .collect();
                match solve_mod_lexmin(&a, &rhs, m as i128) {
                    None => return Ok(None),
                    Some(x) => {
                        for (c, &n) in unk.iter().enumerate() {
                            sol[n][f] = x[c] as u64;
                        }
                    }
                }
            }
        }
        for (n, key) in unknowns.into_iter().enumerate() {
            b.put(key, GroupElem(std::mem::take(&mut sol[n])));
        }
        Ok(Some(b))
    }

    /// Values on the strictly increasing tuples (the simplices of dimension
    /// `p`, in [`Nerve::simplices`] order) for one cyclic factor.
    pub fn oriented_component(&self, factor: usize) -> Result<Vec<i128>> {
        let Domain::Nerve(n) = self.domain.as_ref() else {
            return precondition("oriented values exist only in nerve mode");
        };
        Ok(n.simplices(self.degree)
            .iter()
            .map(|s| self.get(s, None).0[factor] as i128)
            .collect())
    }

    /// The alternating cochain determined by values on oriented simplices:
    /// permuting a tuple multiplies by the sign, repeated indices give 0.
    pub fn alternating(domain: Arc<Domain>, degree: usize, group: FinAbGroup, values: &[GroupElem]) -> Result<Self> {
        let Domain::Nerve(n) = domain.as_ref() else {
            return precondition("alternating extension exists only in nerve mode");
        };
        if values.len() != n.simplices(degree).len() {
            return Err(Error::Mismatch("one value per simplex expected".into()));
        }
        let mut out = CechCochain::zero(domain.clone(), degree, group.clone());
        for (t, _) in domain.tuples(degree)? {
            let mut s = t.clone();
            let sign = sort_sign(&mut s);
            if s.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let idx = n.simplex_index(&s).expect("tuple spans a simplex");
            let v = if sign { values[idx].clone() } else { group.neg_unchecked(&values[idx]) };
            out.put((t, None), v);
        }
        Ok(out)
    }
}

/// Sorts in place; returns `true` for an even permutation.
fn sort_sign(v: &mut [usize]) -> bool {
    let mut even = true;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            even = !even;
            j -= 1;
        }
    }
    even
}

/// Outcome of [`CechCochain::check_norm_identities`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub checked: usize,
    pub first_violation: Option<Violation>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Which identity, `"a"` through `"e"`.
    pub identity: &'static str,
    pub tuple: Vec<usize>,
    pub point: Option<usize>,
}

/// Coefficients for [`cohomology`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    Group(FinAbGroup),
}

/// The oriented coboundary `C^p -> C^{p+1}`: rows are `(p+1)`-simplices,
/// columns `p`-simplices.
pub fn coboundary_matrix(nerve: &Nerve, p: usize) -> IntMatrix {
    let rows = nerve.simplices(p + 1);
    let cols = nerve.simplices(p);
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (r, s) in rows.iter().enumerate() {
        for k in 0..s.len() {
            let mut face = s.clone();
            face.remove(k);
            let c = nerve.simplex_index(&face).expect("faces of simplices are simplices");
            m.set(r, c, if k % 2 == 0 { 1 } else { -1 });
        }
    }
    m
}

/// `H^p` of a nerve, with a procedure assigning coordinates to cocycles.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    degree: usize,
    coefficients: Coefficients,
    simplices: Vec<Vec<usize>>,
    /// one part per cyclic factor of the coefficients (a single part for Z)
    parts: Vec<(Option<i128>, LatticeQuotient)>,
}

pub fn cohomology(nerve: &Nerve, coefficients: &Coefficients, p: usize) -> Result<CohomologyGroup> {
    let n = nerve.simplices(p).len();
    if n > 4000 {
        return Err(Error::TooLarge(format!("{n} simplices in degree {p}")));
    }
    let d = coboundary_matrix(nerve, p);
    let image: Vec<Vec<i128>> = if p == 0 {
        Vec::new()
    } else {
        let prev = coboundary_matrix(nerve, p - 1);
        (0..prev.cols).map(|j| prev.column(j)).collect()
    };
    let moduli: Vec<Option<i128>> = match coefficients {
        Coefficients::Integers => vec![None],
        Coefficients::Group(g) => g.cyclic_orders().iter().map(|&m| Some(m as i128)).collect(),
    };
    let mut parts = Vec::with_capacity(moduli.len());
    for m in moduli {
        let basis = kernel_basis(&d, m);
        let mut gens = image.clone();
        if let Some(m) = m {
            for i in 0..n {
                let mut e = vec![0; n];
                e[i] = m;
                gens.push(e);
            }
        }
        parts.push((m, LatticeQuotient::new(basis, &gens)?));
    }
    Ok(CohomologyGroup { degree: p, coefficients: coefficients.clone(), simplices: nerve.simplices(p).to_vec(), parts })
}

impl CohomologyGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    /// Orders of the cyclic summands, `0` meaning `Z`.
    pub fn cyclic_orders(&self) -> Vec<u64> {
        self.parts.iter().flat_map(|(_, q)| q.orders().iter().copied()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.iter().all(|(_, q)| q.orders().is_empty())
    }

    /// Coordinates of an integer cocycle given by its values on oriented
    /// `p`-simplices.
    pub fn class_of_integral(&self, z: &[i128]) -> Result<Vec<i128>> {
        if self.coefficients != Coefficients::Integers {
            return Err(Error::Mismatch("integral class requested for finite coefficients".into()));
        }
        if z.len() != self.simplices.len() {
            return Err(Error::Mismatch("cochain length does not match the complex".into()));
        }
        self.parts[0]
            .1
            .class_of(z)
            .ok_or_else(|| Error::Precondition("integer cochain is not a cocycle".into()))
    }

    /// Coordinates of a nerve-mode cocycle.
    pub fn class_of(&self, c: &CechCochain) -> Result<Vec<i128>> {
        let Coefficients::Group(g) = &self.coefficients else {
            return Err(Error::Mismatch("use class_of_integral for integer coefficients".into()));
        };
        if c.group() != g || c.degree() != self.degree {
            return Err(Error::Mismatch("cochain group or degree does not match".into()));
        }
        match c.domain().as_ref() {
            Domain::Nerve(n) if n.simplices(self.degree) == self.simplices.as_slice() => {}
            _ => return Err(Error::Mismatch("cochain does not live on this nerve".into())),
        }
        let mut out = Vec::new();
        for (f, (_, q)) in self.parts.iter().enumerate() {
            let v = c.oriented_component(f)?;
            let coords = q.class_of(&v).ok_or_else(|| Error::Precondition("cochain is not a cocycle".into()))?;
            out.extend(coords);
        }
        Ok(out)
    }

    /// Representative cocycles of the cyclic generators, as vectors on
    /// oriented simplices, each tagged with its coefficient factor.
    pub fn generator_vectors(&self) -> Vec<(usize, Vec<i128>)> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(f, (m, q))| {
                q.generators().into_iter().map(move |mut v| {
                    if let Some(m) = m {
                        for x in &mut v {
                            *x = x.rem_euclid(*m);
                        }
                    }
                    (f, v)
                })
            })
            .collect()
    }

    /// Generators as alternating cochains on `domain` (finite coefficients).
    pub fn generators(&self, domain: &Arc<Domain>) -> Result<Vec<CechCochain>> {
        let Coefficients::Group(g) = &self.coefficients else {
            return Err(Error::Mismatch("integer generators are available as vectors only".into()));
        };
        self.generator_vectors()
            .into_iter()
            .map(|(f, v)| {
                let vals: Vec<GroupElem> = v
                    .iter()
                    .map(|&x| {
                        let mut e = g.zero();
                        e.0[f] = x as u64;
                        e
                    })
                    .collect();
                CechCochain::alternating(domain.clone(), self.degree, g.clone(), &vals)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn nerve_domain(n: Nerve) -> Arc<Domain> {
        Arc::new(Domain::Nerve(n))
    }

    #[test]
    fn coboundary_of_diagonal_one_cochain() {
        let d = nerve_domain(models::triangle_boundary());
        let g = FinAbGroup::cyclic(5);
        let mut b = CechCochain::zero(d.clone(), 1, g.clone());
        b.set(&[0, 0], None, g.elem(&[3]).unwrap()).unwrap();
        let db = b.coboundary().unwrap();
        assert_eq!(db.get(&[0, 0, 0], None), g.elem(&[3]).unwrap());
        assert!(db.coboundary().unwrap().is_zero());
        assert!(!db.is_normalized());
        let (c, b2) = db.normalize().unwrap();
        assert!(c.is_normalized());
        assert_eq!(b2, b);
    }

    #[test]
    fn cohomology_of_small_complexes() {
        let z = Coefficients::Integers;
        let s2 = models::tetrahedron_boundary();
        assert_eq!(cohomology(&s2, &z, 0).unwrap().cyclic_orders(), vec![0]);
        assert_eq!(cohomology(&s2, &z, 1).unwrap().cyclic_orders(), Vec::<u64>::new());
        assert_eq!(cohomology(&s2, &z, 2).unwrap().cyclic_orders(), vec![0]);
        let circle = models::triangle_boundary();
        let z5 = Coefficients::Group(FinAbGroup::cyclic(5));
        assert_eq!(cohomology(&circle, &z5, 1).unwrap().cyclic_orders(), vec![5]);
        let rp2 = models::rp2();
        let z2 = Coefficients::Group(FinAbGroup::cyclic(2));
        assert_eq!(cohomology(&rp2, &z2, 2).unwrap().cyclic_orders(), vec![2]);
        assert_eq!(cohomology(&rp2, &z, 2).unwrap().cyclic_orders(), vec![2]);
        assert_eq!(cohomology(&rp2, &z, 1).unwrap().cyclic_orders(), Vec::<u64>::new());
        let moore = models::moore_z2();
        assert_eq!(cohomology(&moore, &z, 3).unwrap().cyclic_orders(), vec![2]);
        assert_eq!(cohomology(&moore, &z, 2).unwrap().cyclic_orders(), Vec::<u64>::new());
        assert_eq!(cohomology(&moore, &z2, 2).unwrap().cyclic_orders(), vec![2]);
    }

    #[test]
    fn rp2_generator_is_not_a_coboundary() {
        let rp2 = models::rp2();
        let d = nerve_domain(rp2.clone());
        let g = FinAbGroup::cyclic(2);
        let h2 = cohomology(&rp2, &Coefficients::Group(g.clone()), 2).unwrap();
        let gen = h2.generators(&d).unwrap().remove(0);
        assert!(gen.is_cocycle().unwrap());
        assert!(gen.is_normalized());
        assert_eq!(h2.class_of(&gen).unwrap(), vec![1]);
        assert_eq!(gen.solve_coboundary().unwrap(), None);
        assert!(gen.check_norm_identities().unwrap().passed());
    }

    #[test]
    fn corrupted_value_is_located() {
        let d = nerve_domain(models::tetrahedron_boundary());
        let g = FinAbGroup::cyclic(3);
        let mut c = CechCochain::zero(d, 2, g.clone());
        c.set(&[0, 2, 1], None, g.elem(&[1]).unwrap()).unwrap();
        let r = c.check_norm_identities().unwrap();
        let v = r.first_violation.unwrap();
        assert!(v.tuple.contains(&0) && v.tuple.contains(&1) && v.tuple.contains(&2));
    }
}
