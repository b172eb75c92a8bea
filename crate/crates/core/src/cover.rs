//! Finite point sets, their covers, and nerves (abstract simplicial
//! complexes on the cover index set).
//!
//! Points and cover indices are carried by label but addressed internally by
//! position; the order in which labels are supplied is the total order used
//! for every tuple enumeration.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{malformed, Error, Result};

/// Largest number of indices allowed to meet at a single point, or to span a
/// single maximal simplex. Subsets of such a set are enumerated, so this is
/// an exponential guard.
pub const MAX_LOCAL_INDICES: usize = 16;

/// A finite ordered set of distinct point labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSpace {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl FinSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return malformed("a space needs at least one point");
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (n, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), n).is_some() {
                return malformed(format!("duplicate point {l:?}"));
            }
        }
        Ok(FinSpace { labels, index })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }
}

/// A finite cover `{U_i}` of a [`FinSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    space: FinSpace,
    set_labels: Vec<String>,
    /// sorted point positions of each `U_i`
    sets: Vec<Vec<usize>>,
    /// `I(x)` for each point, sorted
    at: Vec<Vec<usize>>,
}

impl Cover {
    /// Builds a cover from point labels and labelled member lists.
    pub fn new(points: Vec<String>, sets: Vec<(String, Vec<String>)>) -> Result<Self> {
        let space = FinSpace::new(points)?;
        if sets.is_empty() {
            return malformed("a cover needs at least one set");
        }
        let mut set_labels = Vec::with_capacity(sets.len());
        let mut seen = BTreeSet::new();
        let mut members = Vec::with_capacity(sets.len());
        for (label, pts) in sets {
            if !seen.insert(label.clone()) {
                return malformed(format!("duplicate set label {label:?}"));
            }
            let mut ids = BTreeSet::new();
            for p in &pts {
                let x = space
                    .position(p)
                    .ok_or_else(|| Error::Malformed(format!("set {label:?} mentions unknown point {p:?}")))?;
                ids.insert(x);
            }
            if ids.is_empty() {
                return malformed(format!("set {label:?} is empty"));
            }
            set_labels.push(label);
            members.push(ids.into_iter().collect());
        }
        Self::from_parts(space, set_labels, members)
    }

    fn from_parts(space: FinSpace, set_labels: Vec<String>, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut at = vec![Vec::new(); space.len()];
        for (i, s) in sets.iter().enumerate() {
            for &x in s {
                at[x].push(i);
            }
        }
        for (x, ix) in at.iter().enumerate() {
            if ix.is_empty() {
                return malformed(format!("point {:?} is not covered", space.label(x)));
            }
            if ix.len() > MAX_LOCAL_INDICES {
                return Err(Error::TooLarge(format!(
                    "point {:?} lies in {} sets (limit {MAX_LOCAL_INDICES})",
                    space.label(x),
                    ix.len()
                )));
            }
        }
        Ok(Cover { space, set_labels, sets, at })
    }

    /// The cover of the maximal simplices of `nerve` by vertex stars: the
    /// points are the maximal simplices and `U_v` is the set of maximal
    /// simplices containing `v`. Its nerve is `nerve` again.
    pub fn from_complex(nerve: &Nerve) -> Self {
        let maximal = nerve.maximal_simplices();
        let labels = maximal
            .iter()
            .map(|s| {
                let names: Vec<&str> = s.iter().map(|&v| nerve.vertex_label(v)).collect();
                format!("[{}]", names.join(","))
            })
            .collect();
        let space = FinSpace::new(labels).expect("maximal simplices are distinct");
        let mut sets = vec![Vec::new(); nerve.vertex_count()];
        for (x, s) in maximal.iter().enumerate() {
            for &v in s {
                sets[v].push(x);
            }
        }
        Self::from_parts(space, nerve.vertex_labels().to_vec(), sets).expect("stars cover the maximal simplices")
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn point_count(&self) -> usize {
        self.space.len()
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn set_label(&self, i: usize) -> &str {
        &self.set_labels[i]
    }

    pub fn set_labels(&self) -> &[String] {
        &self.set_labels
    }

    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    pub fn contains(&self, i: usize, x: usize) -> bool {
        self.at[x].binary_search(&i).is_ok()
    }

    /// `I(x)`, the indices of the sets containing point `x`, in index order.
    pub fn indices_at(&self, x: usize) -> &[usize] {
        &self.at[x]
    }

    /// `I(x)` looked up by point label.
    pub fn index_set_at(&self, x: &str) -> Result<Vec<usize>> {
        let p = self
            .space
            .position(x)
            .ok_or_else(|| Error::Malformed(format!("unknown point {x:?}")))?;
        Ok(self.at[p].clone())
    }

    /// Points of `U_{i_0} ∩ ... ∩ U_{i_p}`.
    pub fn overlap(&self, indices: &[usize]) -> Vec<usize> {
        match indices.split_first() {
            None => (0..self.point_count()).collect(),
            Some((&first, rest)) => self.sets[first]
                .iter()
                .copied()
                .filter(|&x| rest.iter().all(|&j| self.contains(j, x)))
                .collect(),
        }
    }

    /// Whether every index in `tuple` contains `x`.
    pub fn tuple_at(&self, tuple: &[usize], x: usize) -> bool {
        tuple.iter().all(|&i| self.contains(i, x))
    }
}

/// An abstract simplicial complex on the vertex set `0..n`, optionally
/// remembering the overlap set carried by each simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nerve {
    vertex_labels: Vec<String>,
    /// `by_dim[p]` lists the `p`-simplices as sorted vertex vectors, in
    /// lexicographic order
    by_dim: Vec<Vec<Vec<usize>>>,
    lookup: HashMap<Vec<usize>, usize>,
    carriers: Option<Vec<Vec<Vec<usize>>>>,
}

impl Nerve {
    /// The nerve of a cover: a set of indices spans a simplex iff the
    /// corresponding sets have a common point.
    pub fn from_cover(cover: &Cover) -> Self {
        let mut carriers: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for x in 0..cover.point_count() {
            for_each_subset(cover.indices_at(x), |s| carriers.entry(s.to_vec()).or_default().push(x));
        }
        let (by_dim, lookup) = index_simplices(carriers.keys().cloned());
        let carrier_table = by_dim
            .iter()
            .map(|layer| layer.iter().map(|s| carriers[s].clone()).collect())
            .collect();
        Nerve { vertex_labels: cover.set_labels.clone(), by_dim, lookup, carriers: Some(carrier_table) }
    }

    /// The downward closure of a list of simplices on labelled vertices.
    /// Vertices that appear in no simplex still form 0-simplices.
    pub fn from_maximal_simplices(vertices: Vec<String>, maximal: Vec<Vec<String>>) -> Result<Self> {
        let space = FinSpace::new(vertices).map_err(|e| match e {
            Error::Malformed(m) => Error::Malformed(m.replace("point", "vertex")),
            other => other,
        })?;
        let mut all = BTreeSet::new();
        for v in 0..space.len() {
            all.insert(vec![v]);
        }
        for simplex in &maximal {
            let mut ids = Vec::with_capacity(simplex.len());
            for v in simplex {
                let p = space
                    .position(v)
                    .ok_or_else(|| Error::Malformed(format!("simplex mentions unknown vertex {v:?}")))?;
                ids.push(p);
            }
            ids.sort_unstable();
            if ids.windows(2).any(|w| w[0] == w[1]) {
                return malformed(format!("simplex {simplex:?} repeats a vertex"));
            }
            if ids.is_empty() {
                return malformed("empty simplex");
            }
            if ids.len() > MAX_LOCAL_INDICES {
                return Err(Error::TooLarge(format!(
                    "simplex with {} vertices (limit {MAX_LOCAL_INDICES})",
                    ids.len()
                )));
            }
            for_each_subset(&ids, |s| {
                all.insert(s.to_vec());
            });
        }
        let (by_dim, lookup) = index_simplices(all.into_iter());
        Ok(Nerve { vertex_labels: space.labels, by_dim, lookup, carriers: None })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn vertex_position(&self, label: &str) -> Option<usize> {
        self.vertex_labels.iter().position(|l| l == label)
    }

    /// Largest simplex dimension.
    pub fn dimension(&self) -> usize {
        self.by_dim.len() - 1
    }

    /// The `p`-simplices, each a sorted vertex list, in lexicographic order.
    pub fn simplices(&self, p: usize) -> &[Vec<usize>] {
        self.by_dim.get(p).map_or(&[], |v| v.as_slice())
    }

    pub fn simplex_count(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    /// Position of a sorted simplex within [`Nerve::simplices`] of its
    /// dimension.
    pub fn simplex_index(&self, simplex: &[usize]) -> Option<usize> {
        self.lookup.get(simplex).copied()
    }

    /// Whether the set of vertices occurring in `tuple` (in any order, with
    /// repeats) spans a simplex.
    pub fn spans_simplex(&self, tuple: &[usize]) -> bool {
        let mut s = tuple.to_vec();
        s.sort_unstable();
        s.dedup();
        !s.is_empty() && self.lookup.contains_key(&s)
    }

    /// The overlap set of a simplex when the nerve came from a cover.
    pub fn carrier(&self, simplex: &[usize]) -> Option<&[usize]> {
        let carriers = self.carriers.as_ref()?;
        let idx = self.simplex_index(simplex)?;
        Some(&carriers[simplex.len() - 1][idx])
    }

    pub fn has_carriers(&self) -> bool {
        self.carriers.is_some()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(p, l)| if p % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Simplices not contained in a larger simplex, in lexicographic order.
    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for (p, layer) in self.by_dim.iter().enumerate() {
            for s in layer {
                let extendable = self.by_dim.get(p + 1).is_some_and(|_| {
                    (0..self.vertex_count()).any(|v| {
                        if s.binary_search(&v).is_ok() {
                            return false;
                        }
                        let mut t = s.clone();
                        t.push(v);
                        t.sort_unstable();
                        self.lookup.contains_key(&t)
                    })
                });
                if !extendable {
                    out.push(s.clone());
                }
            }
        }
        out.sort();
        out
    }
}

fn for_each_subset(set: &[usize], mut f: impl FnMut(&[usize])) {
    let n = set.len();
    let mut buf = Vec::with_capacity(n);
    for mask in 1u32..(1u32 << n) {
        buf.clear();
        for (k, &v) in set.iter().enumerate() {
            if mask & (1 << k) != 0 {
                buf.push(v);
            }
        }
        f(&buf);
    }
}

type SimplexIndex = (Vec<Vec<Vec<usize>>>, HashMap<Vec<usize>, usize>);

fn index_simplices(all: impl Iterator<Item = Vec<usize>>) -> SimplexIndex {
    let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
    for s in all {
        let p = s.len() - 1;
        if by_dim.len() <= p {
            by_dim.resize(p + 1, Vec::new());
        }
        by_dim[p].push(s);
    }
    let mut lookup = HashMap::new();
    for layer in &mut by_dim {
        layer.sort();
        for (n, s) in layer.iter().enumerate() {
            lookup.insert(s.clone(), n);
        }
    }
    (by_dim, lookup)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn two_set() -> Cover {
        Cover::new(strs(&["a", "b"]), vec![("1".into(), strs(&["a", "b"])), ("2".into(), strs(&["b"]))]).unwrap()
    }

    #[test]
    fn nerve_of_two_sets() {
        let c = two_set();
        let n = Nerve::from_cover(&c);
        assert_eq!(n.simplices(0), &[vec![0], vec![1]]);
        assert_eq!(n.simplices(1), &[vec![0, 1]]);
        assert_eq!(n.carrier(&[0, 1]), Some(&[1usize][..]));
        assert_eq!(c.index_set_at("b").unwrap(), vec![0, 1]);
        assert_eq!(c.index_set_at("a").unwrap(), vec![0]);
        assert!(matches!(c.index_set_at("z"), Err(Error::Malformed(_))));
    }

    #[test]
    fn disjoint_sets_have_no_edge() {
        let c = Cover::new(strs(&["a", "b"]), vec![("1".into(), strs(&["a"])), ("2".into(), strs(&["b"]))]).unwrap();
        assert!(Nerve::from_cover(&c).simplices(1).is_empty());
    }

    #[test]
    fn pairs_of_three_points() {
        let c = Cover::new(
            strs(&["a", "b", "c"]),
            vec![
                ("1".into(), strs(&["a", "b"])),
                ("2".into(), strs(&["b", "c"])),
                ("3".into(), strs(&["a", "c"])),
            ],
        )
        .unwrap();
        let n = Nerve::from_cover(&c);
        assert_eq!(n.simplices(1).len(), 3);
        assert!(n.simplices(2).is_empty());
    }

    #[test]
    fn tetrahedron_boundary_and_rp2() {
        let faces = vec![strs(&["0", "1", "2"]), strs(&["0", "1", "3"]), strs(&["0", "2", "3"]), strs(&["1", "2", "3"])];
        let n = Nerve::from_maximal_simplices(strs(&["0", "1", "2", "3"]), faces).unwrap();
        assert_eq!(n.simplex_count(), 14);
        let single = Nerve::from_maximal_simplices(strs(&["v"]), vec![strs(&["v"])]).unwrap();
        assert_eq!(single.simplex_count(), 1);
        let rp2 = crate::models::rp2();
        assert_eq!(rp2.simplices(2).len(), 10);
        assert_eq!(rp2.euler_characteristic(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Nerve::from_maximal_simplices(strs(&["a", "a"]), vec![]).is_err());
        assert!(Nerve::from_maximal_simplices(strs(&["a", "b"]), vec![strs(&["a", "a"])]).is_err());
        assert!(Cover::new(strs(&["a", "b"]), vec![("1".into(), strs(&["a"]))]).is_err());
        assert!(Cover::new(strs(&["a"]), vec![("1".into(), vec![])]).is_err());
    }

    #[test]
    fn star_cover_realizes_complex() {
        let rp2 = crate::models::rp2();
        let cover = Cover::from_complex(&rp2);
        let back = Nerve::from_cover(&cover);
        for p in 0..=2 {
            assert_eq!(back.simplices(p), rp2.simplices(p));
        }
    }
}
