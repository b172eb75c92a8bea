//! Finite abelian groups `Z/n_1 x ... x Z/n_k`, their duals, and exact
//! roots of unity.
//!
//! Elements are written additively. Character values are kept as rational
//! rotation angles ([`RootOfUnity`]) so that identities between cocycles
//! and characters can be checked without rounding.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{malformed, Error, Result};

/// Largest group order accepted by [`FinAbGroup::new`].
pub const MAX_GROUP_ORDER: u64 = 1 << 20;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// A finite abelian group presented as a product of cyclic factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupLiteral", into = "GroupLiteral")]
pub struct FinAbGroup {
    orders: Vec<u64>,
    strides: Vec<usize>,
    size: usize,
}

#[derive(Serialize, Deserialize)]
struct GroupLiteral {
    cyclic_orders: Vec<u64>,
}

impl TryFrom<GroupLiteral> for FinAbGroup {
    type Error = Error;
    fn try_from(lit: GroupLiteral) -> Result<Self> {
        FinAbGroup::new(lit.cyclic_orders)
    }
}

impl From<FinAbGroup> for GroupLiteral {
    fn from(g: FinAbGroup) -> Self {
        GroupLiteral { cyclic_orders: g.orders }
    }
}

/// An element of a [`FinAbGroup`], one reduced component per cyclic factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElem(pub Vec<u64>);

impl GroupElem {
    pub fn components(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (n, c) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FinAbGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.contains(&0) {
            return malformed("cyclic orders must be at least 1");
        }
        let mut size: u64 = 1;
        for &n in &orders {
            size = size
                .checked_mul(n)
                .filter(|&s| s <= MAX_GROUP_ORDER)
                .ok_or_else(|| Error::TooLarge(format!("group order exceeds {MAX_GROUP_ORDER}")))?;
        }
        let mut strides = vec![1usize; orders.len()];
        for j in (0..orders.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * orders[j + 1] as usize;
        }
        Ok(FinAbGroup { orders, strides, size: size as usize })
    }

    /// `Z/n`.
    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).expect("valid cyclic order")
    }

    pub fn trivial() -> Self {
        Self::new(Vec::new()).expect("trivial group")
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.size
    }

    /// Least common multiple of the cyclic orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &n| lcm(acc, n))
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem(vec![0; self.orders.len()])
    }

    /// Builds an element, reducing each component modulo its factor.
    pub fn elem(&self, comps: &[i64]) -> Result<GroupElem> {
        if comps.len() != self.orders.len() {
            return malformed(format!(
                "element has {} components, group has {} factors",
                comps.len(),
                self.orders.len()
            ));
        }
        Ok(GroupElem(
            comps
                .iter()
                .zip(&self.orders)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    pub fn contains(&self, g: &GroupElem) -> bool {
        g.0.len() == self.orders.len() && g.0.iter().zip(&self.orders).all(|(&c, &n)| c < n)
    }

    fn check(&self, g: &GroupElem) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::Mismatch(format!("element {g} does not belong to Z/{:?}", self.orders)))
        }
    }

    pub fn add(&self, g: &GroupElem, h: &GroupElem) -> Result<GroupElem> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.add_unchecked(g, h))
    }

    pub fn neg(&self, g: &GroupElem) -> Result<GroupElem> {
        self.check(g)?;
        Ok(self.neg_unchecked(g))
    }

    pub(crate) fn add_unchecked(&self, g: &GroupElem, h: &GroupElem) -> GroupElem {
        GroupElem(
            g.0.iter()
                .zip(&h.0)
                .zip(&self.orders)
                .map(|((&a, &b), &n)| (a + b) % n)
                .collect(),
        )
    }

    pub(crate) fn neg_unchecked(&self, g: &GroupElem) -> GroupElem {
        GroupElem(g.0.iter().zip(&self.orders).map(|(&a, &n)| (n - a) % n).collect())
    }

    pub(crate) fn sub_unchecked(&self, g: &GroupElem, h: &GroupElem) -> GroupElem {
        self.add_unchecked(g, &self.neg_unchecked(h))
    }

    pub fn is_zero(&self, g: &GroupElem) -> bool {
        g.0.iter().all(|&c| c == 0)
    }

    /// Position of `g` in the mixed-radix enumeration (first factor most
    /// significant).
    pub fn index_of(&self, g: &GroupElem) -> usize {
        g.0.iter().zip(&self.strides).map(|(&c, &s)| c as usize * s).sum()
    }

    pub fn elem_at(&self, mut idx: usize) -> GroupElem {
        let mut comps = vec![0u64; self.orders.len()];
        for j in 0..self.orders.len() {
            comps[j] = (idx / self.strides[j]) as u64;
            idx %= self.strides[j];
        }
        GroupElem(comps)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElem> + '_ {
        (0..self.size).map(move |i| self.elem_at(i))
    }

    /// Addition on enumeration indices.
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for j in 0..self.orders.len() {
            let n = self.orders[j] as usize;
            let s = self.strides[j];
            let ca = (a / s) % n;
            let cb = (b / s) % n;
            out += ((ca + cb) % n) * s;
        }
        out
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        let mut out = 0;
        for j in 0..self.orders.len() {
            let n = self.orders[j] as usize;
            let s = self.strides[j];
            let ca = (a / s) % n;
            out += ((n - ca) % n) * s;
        }
        out
    }

    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    /// All characters, enumerated in the same mixed-radix order as the
    /// elements (the exponent vector of a character runs over the group).
    pub fn dual(&self) -> Vec<Character> {
        self.elements().map(|g| Character { exponents: g.0 }).collect()
    }

    /// Evaluates `tau(g) = exp(2 pi i sum_j m_j g_j / n_j)` exactly.
    pub fn char_eval(&self, tau: &Character, g: &GroupElem) -> Result<RootOfUnity> {
        self.check(g)?;
        if tau.exponents.len() != self.orders.len() || tau.exponents.iter().zip(&self.orders).any(|(&m, &n)| m >= n) {
            return Err(Error::Mismatch("character does not belong to the dual of this group".into()));
        }
        Ok(self.char_eval_unchecked(tau, g))
    }

    pub(crate) fn char_eval_unchecked(&self, tau: &Character, g: &GroupElem) -> RootOfUnity {
        let den = self.exponent();
        let mut num: u64 = 0;
        for ((&m, &c), &n) in tau.exponents.iter().zip(&g.0).zip(&self.orders) {
            num = (num + (m * c % n) * (den / n)) % den;
        }
        RootOfUnity::new(num as i64, den)
    }

    /// Order of `tau` as an element of the dual group, i.e. the order of the
    /// cyclic group of values it takes.
    pub fn character_order(&self, tau: &Character) -> u64 {
        tau.exponents
            .iter()
            .zip(&self.orders)
            .fold(1, |acc, (&m, &n)| lcm(acc, n / gcd(m, n)))
    }
}

/// `tau(g) = exp(2 pi i sum_j m_j g_j / n_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character {
    pub exponents: Vec<u64>,
}

impl Character {
    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&m| m == 0)
    }
}

/// `exp(2 pi i num / den)` with `num/den` a reduced fraction in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };

    /// Panics if `den == 0`.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "root of unity with zero denominator");
        let n = num.rem_euclid(den as i64) as u64;
        let g = gcd(n, den);
        RootOfUnity { num: n / g, den: den / g }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn mul(self, other: RootOfUnity) -> RootOfUnity {
        let den = lcm(self.den, other.den);
        let num = self.num * (den / self.den) + other.num * (den / other.den);
        RootOfUnity::new((num % den) as i64, den)
    }

    pub fn conj(self) -> RootOfUnity {
        RootOfUnity::new(-(self.num as i64), self.den)
    }

    pub fn pow(self, k: i64) -> RootOfUnity {
        let n = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        RootOfUnity::new(n as i64, self.den)
    }

    pub fn angle(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.num as f64 / self.den as f64
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::from_polar(1.0, self.angle())
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e(2pi i {}/{})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_addition() {
        let g = FinAbGroup::cyclic(4);
        let a = g.elem(&[3]).unwrap();
        let b = g.elem(&[2]).unwrap();
        assert_eq!(g.add(&a, &b).unwrap(), g.elem(&[1]).unwrap());
        assert!(g.is_zero(&g.add(&a, &g.neg(&a).unwrap()).unwrap()));
    }

    #[test]
    fn product_addition() {
        let g = FinAbGroup::new(vec![2, 3]).unwrap();
        let a = g.elem(&[1, 2]).unwrap();
        assert_eq!(g.add(&a, &a).unwrap(), g.elem(&[0, 1]).unwrap());
    }

    #[test]
    fn mismatched_parent_rejected() {
        let g = FinAbGroup::cyclic(4);
        let h = FinAbGroup::new(vec![2, 2]).unwrap();
        let a = h.elem(&[1, 1]).unwrap();
        assert!(g.add(&a, &g.zero()).is_err());
        assert!(FinAbGroup::new(vec![0]).is_err());
    }

    #[test]
    fn index_roundtrip_and_idx_ops() {
        let g = FinAbGroup::new(vec![2, 3, 4]).unwrap();
        for a in 0..g.order() {
            assert_eq!(g.index_of(&g.elem_at(a)), a);
            for b in 0..g.order() {
                let sum = g.add_unchecked(&g.elem_at(a), &g.elem_at(b));
                assert_eq!(g.add_idx(a, b), g.index_of(&sum));
            }
            assert_eq!(g.add_idx(a, g.neg_idx(a)), 0);
        }
    }

    #[test]
    fn z2_dual() {
        let g = FinAbGroup::cyclic(2);
        let dual = g.dual();
        assert_eq!(dual.len(), 2);
        let one = g.elem(&[1]).unwrap();
        assert!(g.char_eval(&dual[0], &one).unwrap().is_one());
        assert_eq!(g.char_eval(&dual[1], &one).unwrap(), RootOfUnity::new(1, 2));
    }

    #[test]
    fn z3_dual_values_are_cube_roots() {
        let g = FinAbGroup::cyclic(3);
        for tau in g.dual() {
            for x in g.elements() {
                assert_eq!(3 % g.char_eval(&tau, &x).unwrap().order(), 0);
            }
        }
    }

    #[test]
    fn z4_exponent_one() {
        let g = FinAbGroup::cyclic(4);
        let tau = Character { exponents: vec![1] };
        assert_eq!(g.char_eval(&tau, &g.elem(&[1]).unwrap()).unwrap(), RootOfUnity::new(1, 4));
    }

    /// Brute-force oracle: enumerate every map G -> mu_e (e the exponent) and
    /// keep the homomorphisms; compare with the dual as a set of functions.
    #[test]
    fn klein_dual_matches_homomorphism_enumeration() {
        let g = FinAbGroup::new(vec![2, 2]).unwrap();
        let e = g.exponent();
        let n = g.order();
        let mut homs = Vec::new();
        let total = (e as usize).pow(n as u32);
        for code in 0..total {
            let mut vals = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                vals.push(RootOfUnity::new((c % e as usize) as i64, e));
                c /= e as usize;
            }
            let is_hom = (0..n).all(|a| (0..n).all(|b| vals[g.add_idx(a, b)] == vals[a].mul(vals[b])));
            if is_hom {
                homs.push(vals);
            }
        }
        let mut table: Vec<Vec<RootOfUnity>> = g
            .dual()
            .iter()
            .map(|t| g.elements().map(|x| g.char_eval(t, &x).unwrap()).collect())
            .collect();
        homs.sort();
        table.sort();
        assert_eq!(homs, table);
    }

    #[test]
    fn orthogonality_and_nondegeneracy() {
        for orders in [vec![2], vec![3], vec![4], vec![2, 2], vec![2, 3], vec![4, 2], vec![2, 2, 2]] {
            let g = FinAbGroup::new(orders).unwrap();
            for tau in g.dual() {
                // the angles of a nontrivial character are equidistributed over
                // its value group, so count them exactly
                let mut counts = std::collections::BTreeMap::new();
                for x in g.elements() {
                    *counts.entry(g.char_eval(&tau, &x).unwrap()).or_insert(0usize) += 1;
                }
                let d = g.character_order(&tau);
                assert_eq!(counts.len() as u64, d);
                assert!(counts.values().all(|&c| c == g.order() / d as usize));
            }
            for x in g.elements().filter(|x| !g.is_zero(x)) {
                assert!(g.dual().iter().any(|t| !g.char_eval(t, &x).unwrap().is_one()));
            }
        }
    }

    #[test]
    fn root_of_unity_arithmetic() {
        let a = RootOfUnity::new(1, 4);
        let b = RootOfUnity::new(1, 6);
        assert_eq!(a.mul(b), RootOfUnity::new(5, 12));
        assert!(a.mul(a.conj()).is_one());
        assert_eq!(a.pow(4), RootOfUnity::ONE);
        assert_eq!(RootOfUnity::new(2, 4), RootOfUnity::new(1, 2));
    }
}
