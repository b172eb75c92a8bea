//! The Dixmier–Douady class of `C*(Σ_c)`.
//!
//! [`m_star`] splits `c` into one circle-valued cocycle
//! `ν^c_τ = conj τ(c)` per character. [`dd_class`] sends each row to
//! `H³(nerve; Z)` by the connecting map of `0 → Z → R → T → 0` restricted
//! to `d`-th roots of unity: write `ν = exp(2πi a/d)`, lift `a` to an
//! integer cochain `ã`, and take the class of `δã / d`.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::UnimodularCochain;
use crate::cech::{coboundary_matrix, cohomology, CechCochain, Coefficients, Domain, Mode};
use crate::cover::{Cover, Nerve};
use crate::error::{precondition, Error, Result};
use crate::group::{Character, FinAbGroup, GroupElem, RootOfUnity};
use crate::groupoid::Blowup;
use crate::random::Rng64;
use crate::reps::pi_rep;
use crate::scalar::{Cyclotomic, Scalar};

/// One character's row of `m_*(c)`: `ν^c_τ = exp(2πi a/d)` with `a` a
/// `Z/d`-valued 2-cochain on the same domain as `c`.
#[derive(Clone, Debug)]
pub struct MStarRow {
    pub tau: Character,
    pub order: u64,
    pub exponent: CechCochain,
}

impl MStarRow {
    pub fn value(&self, tuple: &[usize], point: Option<usize>) -> RootOfUnity {
        RootOfUnity::new(self.exponent.get(tuple, point).0[0] as i64, self.order)
    }

    /// The row as a circle-valued cochain on `cover`.
    pub fn to_unimodular(&self, cover: &Arc<Cover>) -> Result<UnimodularCochain> {
        crate::groupoid::check_cochain_on_cover(&self.exponent, cover)?;
        let mut nu = UnimodularCochain::one(cover.clone());
        for x in 0..cover.point_count() {
            let ix = cover.indices_at(x);
            for &i in ix {
                for &j in ix {
                    for &k in ix {
                        nu.set(i, j, k, x, self.value(&[i, j, k], Some(x)))?;
                    }
                }
            }
        }
        Ok(nu)
    }
}

/// `s` with `τ(g) = exp(2πi s/d)`, `d` the order of `τ`.
fn char_exponent(group: &FinAbGroup, tau: &Character, d: u64, g: &GroupElem) -> u64 {
    let mut s: u128 = 0;
    for ((&e, &m), &x) in tau.exponents.iter().zip(group.cyclic_orders()).zip(&g.0) {
        let q = crate::group::gcd(e, m);
        s += (e / q) as u128 * x as u128 * (d / (m / q)) as u128;
    }
    (s % d as u128) as u64
}

/// `ν^c_τ = conj τ(c)` for every character (or the listed ones).
pub fn m_star(c: &CechCochain, characters: Option<&[usize]>) -> Result<Vec<MStarRow>> {
    if c.degree() != 2 {
        return precondition("m_* takes a 2-cochain");
    }
    if !c.is_normalized() {
        return precondition("m_* needs a normalized cocycle");
    }
    let group = c.group();
    let all = group.dual();
    let chosen: Vec<usize> = match characters {
        Some(list) => {
            if let Some(&t) = list.iter().find(|&&t| t >= all.len()) {
                return Err(Error::Malformed(format!("no character with index {t}")));
            }
            list.to_vec()
        }
        None => (0..all.len()).collect(),
    };
    chosen
        .into_iter()
        .map(|t| {
            let tau = all[t].clone();
            let d = group.character_order(&tau);
            let zd = FinAbGroup::cyclic(d);
            let entries = c
                .entries()
                .map(|(k, g)| {
                    let s = char_exponent(group, &tau, d, g);
                    (k.clone(), GroupElem(vec![(d - s) % d]))
                })
                .collect::<Vec<_>>();
            let exponent = CechCochain::from_entries(c.domain().clone(), 2, zd, entries)?;
            Ok(MStarRow { tau, order: d, exponent })
        })
        .collect()
}

/// One character's line of a [`DDReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DDRow {
    pub tau: Vec<u64>,
    pub order: u64,
    /// `ν^c_τ` is a coboundary with `d`-th root of unity coefficients
    pub mu_trivial: bool,
    /// coordinates of the class in `H³(·; Z)` (empty in pointwise mode)
    pub h3_class: Vec<i128>,
    pub trivial: bool,
    /// nonzero values of `b` with `a = δb` mod `d`, when one exists
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_b: Option<Vec<WitnessEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    pub tuple: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DDReport {
    pub schema_version: u32,
    pub mode: Mode,
    pub group: Vec<u64>,
    /// orders of the cyclic summands of `H³(nerve; Z)`, `0` meaning `Z`
    pub h3_orders: Vec<u64>,
    pub verdict: Verdict,
    pub rows: Vec<DDRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Trivial,
    Nontrivial,
}

impl DDReport {
    /// Equal up to the choice of coboundary witnesses.
    pub fn same_classes(&self, other: &DDReport) -> bool {
        self.verdict == other.verdict
            && self.h3_orders == other.h3_orders
            && self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| {
                a.tau == b.tau && a.order == b.order && a.mu_trivial == b.mu_trivial && a.h3_class == b.h3_class
            })
    }

    /// The verdict agrees with the rows, the trivial character's row is
    /// trivial, and every class is killed by the group exponent.
    pub fn is_consistent(&self, exponent: u64) -> bool {
        let all_trivial = self.rows.iter().all(|r| r.trivial);
        let verdict_ok = (self.verdict == Verdict::Trivial) == all_trivial;
        let tau0_ok = self.rows.iter().filter(|r| r.tau.iter().all(|&e| e == 0)).all(|r| r.trivial);
        let torsion_ok = self.rows.iter().all(|r| {
            r.h3_class.iter().zip(&self.h3_orders).all(|(&v, &m)| {
                let w = v * exponent as i128;
                if m == 0 {
                    w == 0
                } else {
                    w.rem_euclid(m as i128) == 0
                }
            })
        });
        verdict_ok && tau0_ok && torsion_ok
    }
}

#[derive(Clone, Debug, Default)]
pub struct DDOptions {
    /// restrict to these character indices
    pub characters: Option<Vec<usize>>,
    /// draw the integer lift `ã = a + d r` with random `r` from this seed
    pub lift_seed: Option<u64>,
}

/// Computes the class of `C*(Σ_c)` row by row.
///
/// In nerve mode a row is trivial exactly when its `H³(·; Z)` class is
/// zero; `mu_trivial` is reported alongside. In pointwise mode every
/// cocycle is a coboundary and the report is trivial.
pub fn dd_class(c: &CechCochain, opts: &DDOptions) -> Result<DDReport> {
    if c.degree() != 2 {
        return precondition("dd_class takes a 2-cochain");
    }
    if !c.is_cocycle()? {
        return precondition("the cochain is not a cocycle");
    }
    let c = if c.is_normalized() { c.clone() } else { c.normalize()?.0 };
    let rows = m_star(&c, opts.characters.as_deref())?;
    let mut rng = opts.lift_seed.map(crate::random::rng);
    match c.domain().as_ref() {
        Domain::Pointwise(_) => {
            let out = rows
                .iter()
                .map(|row| {
                    let b = row.exponent.solve_coboundary()?;
                    Ok(DDRow {
                        tau: row.tau.exponents.clone(),
                        order: row.order,
                        mu_trivial: b.is_some(),
                        h3_class: Vec::new(),
                        trivial: true,
                        witness_b: b.map(|b| witness(&b)),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(DDReport {
                schema_version: 1,
                mode: Mode::Pointwise,
                group: c.group().cyclic_orders().to_vec(),
                h3_orders: Vec::new(),
                verdict: Verdict::Trivial,
                rows: out,
                note: Some(
                    "pointwise mode: each point's index set is a full simplex, so every cocycle is a coboundary \
                     and the class is trivial"
                        .into(),
                ),
            })
        }
        Domain::Nerve(nerve) => {
            let h3 = cohomology(nerve, &Coefficients::Integers, 3)?;
            let d2 = coboundary_matrix(nerve, 2);
            let mut out = Vec::with_capacity(rows.len());
            for row in &rows {
                let a = row.exponent.oriented_component(0)?;
                let lift = match rng.as_mut() {
                    Some(r) => random_lift(&a, row.order, r),
                    None => a.clone(),
                };
                let class = h3_class(nerve, &d2, &h3, &lift, row.order)?;
                let b = row.exponent.solve_coboundary()?;
                let trivial = class.iter().all(|&v| v == 0);
                out.push(DDRow {
                    tau: row.tau.exponents.clone(),
                    order: row.order,
                    mu_trivial: b.is_some(),
                    h3_class: class,
                    trivial,
                    witness_b: b.map(|b| witness(&b)),
                });
            }
            let verdict = if out.iter().all(|r| r.trivial) { Verdict::Trivial } else { Verdict::Nontrivial };
            Ok(DDReport {
                schema_version: 1,
                mode: Mode::Nerve,
                group: c.group().cyclic_orders().to_vec(),
                h3_orders: h3.cyclic_orders(),
                verdict,
                rows: out,
                note: None,
            })
        }
    }
}

/// `ã + d r` with `r` uniform in `[-2, 2]` per simplex.
pub fn random_lift(a: &[i128], d: u64, rng: &mut Rng64) -> Vec<i128> {
    a.iter().map(|&v| v + d as i128 * rng.gen_range(-2i128..=2)).collect()
}

/// The class of `δã / d` in `H³(nerve; Z)`, for an integer lift `ã` (on
/// oriented 2-simplices) of a `Z/d`-cocycle.
pub fn h3_class(
    nerve: &Nerve,
    d2: &crate::linalg::IntMatrix,
    h3: &crate::cech::CohomologyGroup,
    lift: &[i128],
    d: u64,
) -> Result<Vec<i128>> {
    if lift.len() != nerve.simplices(2).len() {
        return Err(Error::Mismatch("lift has the wrong length".into()));
    }
    let z = d2.apply(lift);
    let d = d as i128;
    if let Some(k) = z.iter().position(|v| v % d != 0) {
        return Err(Error::Precondition(format!("lift is not a cocycle mod {d} on tetrahedron {k}")));
    }
    let z: Vec<i128> = z.into_iter().map(|v| v / d).collect();
    h3.class_of_integral(&z)
}

fn witness(b: &CechCochain) -> Vec<WitnessEntry> {
    let domain = b.domain();
    let point_label = |x: usize| match domain.as_ref() {
        Domain::Pointwise(cv) => cv.space().label(x).to_string(),
        Domain::Nerve(_) => x.to_string(),
    };
    b.entries()
        .filter(|(_, g)| g.0.iter().any(|&v| v != 0))
        .map(|((t, x), g)| WitnessEntry {
            tuple: t.iter().map(|&i| domain.index_label(i).to_string()).collect(),
            point: x.map(point_label),
            value: g.0[0],
        })
        .collect()
}

/// A failed relation in [`rank_one_relations_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    /// `"vv*=p"`, `"v*v=p'"` or `"product"`
    pub relation: &'static str,
    pub atom: usize,
    pub triple: (usize, usize, usize),
    pub point: usize,
    pub anchor: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const MAX_REPORTED_FAILURES: usize = 64;

/// Checks the partial-isometry relations of `A(ν)` in every representation
/// `π_{(a,q)}`, exactly.
///
/// The points of `ν`'s cover are grouped into atoms (`atoms[q]`; for the
/// cover `{Ĝ × U_i}` the atom of `(τ, x)` is `τ`). For an atom `n` and sets
/// `i, j, k`, `p(n,i)` is the indicator of the diagonal arrows `(i,q,i)`
/// over the atom and `v((n,i),(n,j))` that of `(i,q,j)`. At each point `q`
/// and anchor `a ∈ I(q)` the check verifies `π(vv*) = π(p(n,i))`,
/// `π(v*v) = π(p(n,j))` and
/// `π(v((n,i),(n,j))) π(v((n,j),(n,k))) = conj ν_ijk(q) π(v((n,i),(n,k)))`.
/// Points in different atoms never overlap, so mixed pairs vanish.
pub fn rank_one_relations_check(blowup: &Blowup, nu: &UnimodularCochain, atoms: &[usize]) -> Result<RelationReport> {
    let cover = nu.cover().clone();
    if atoms.len() != cover.point_count() {
        return Err(Error::Mismatch("one atom per point required".into()));
    }
    let units: usize = (0..cover.point_count()).map(|q| cover.indices_at(q).len()).sum();
    if blowup.groupoid.unit_count() != units {
        return Err(Error::Mismatch("blow-up does not belong to the cochain's cover".into()));
    }
    let nu_arc = Arc::new(nu.clone());
    let n = blowup.groupoid.arrow_count();
    let ind = |a: usize| {
        let mut v = vec![Cyclotomic::zero(); n];
        v[a] = Cyclotomic::one();
        v
    };
    let mut report = RelationReport::default();
    let fail = |report: &mut RelationReport, relation, q: usize, a, triple| {
        if report.failures.len() < MAX_REPORTED_FAILURES {
            report.failures.push(RelationFailure { relation, atom: atoms[q], triple, point: q, anchor: a });
        }
    };
    for q in 0..cover.point_count() {
        let ix = cover.indices_at(q);
        for &a in ix {
            let rep = pi_rep(blowup, nu_arc.clone(), a, q)?;
            let arrow = |i, j| blowup.arrow(i, q, j).expect("arrow in blow-up");
            for &i in ix {
                let p_i = rep.evaluate(&ind(arrow(i, i)));
                for &j in ix {
                    let v = ind(arrow(i, j));
                    let vs = crate::algebra::rt_star(blowup, nu, &v);
                    let p_j = rep.evaluate(&ind(arrow(j, j)));
                    report.checked += 2;
                    if rep.evaluate(&crate::algebra::rt_product(blowup, nu, &v, &vs)) != p_i {
                        fail(&mut report, "vv*=p", q, a, (i, j, j));
                    }
                    if rep.evaluate(&crate::algebra::rt_product(blowup, nu, &vs, &v)) != p_j {
                        fail(&mut report, "v*v=p'", q, a, (i, j, j));
                    }
                    let v_ij = rep.evaluate(&v);
                    for &k in ix {
                        report.checked += 1;
                        let lhs = v_ij.mul(&rep.evaluate(&ind(arrow(j, k))));
                        let scalar = Cyclotomic::from_root(nu.get(i, j, k, q).conj());
                        let rhs_m = rep.evaluate(&ind(arrow(i, k)));
                        let rhs: Vec<Cyclotomic> = rhs_m.entries().iter().map(|e| scalar.clone() * e.clone()).collect();
                        if lhs.entries() != rhs.as_slice() {
                            fail(&mut report, "product", q, a, (i, j, k));
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Twist;
    use crate::models;

    fn moore_generator() -> CechCochain {
        let domain = Arc::new(Domain::Nerve(models::moore_z2()));
        let Domain::Nerve(n) = domain.as_ref() else { unreachable!() };
        let h2 = cohomology(n, &Coefficients::Group(FinAbGroup::cyclic(2)), 2).unwrap();
        h2.generators(&domain).unwrap().remove(0)
    }

    #[test]
    fn moore_space_class_is_nontrivial() {
        let c = moore_generator();
        let report = dd_class(&c, &DDOptions::default()).unwrap();
        assert_eq!(report.h3_orders, vec![2]);
        assert_eq!(report.verdict, Verdict::Nontrivial);
        assert!(report.rows[0].trivial);
        assert_eq!(report.rows[1].h3_class, vec![1]);
        assert!(!report.rows[1].mu_trivial);
        assert!(report.is_consistent(2));
    }

    #[test]
    fn lifts_do_not_matter() {
        let c = moore_generator();
        let base = dd_class(&c, &DDOptions::default()).unwrap();
        for seed in 0..5 {
            let r = dd_class(&c, &DDOptions { characters: None, lift_seed: Some(seed) }).unwrap();
            assert!(r.same_classes(&base));
        }
    }

    #[test]
    fn two_dimensional_nerve_has_no_h3() {
        let domain = Arc::new(Domain::Nerve(models::rp2()));
        let c = CechCochain::zero(domain, 2, FinAbGroup::cyclic(2));
        let r = dd_class(&c, &DDOptions::default()).unwrap();
        assert!(r.h3_orders.is_empty());
        assert_eq!(r.verdict, Verdict::Trivial);
    }

    #[test]
    fn m_star_of_z4_character_of_order_two() {
        let domain = Arc::new(Domain::Nerve(models::tetrahedron_boundary()));
        let g = FinAbGroup::cyclic(4);
        let mut c = CechCochain::zero(domain.clone(), 2, g.clone());
        // δ of a 1-cochain supported on one edge, so c is a cocycle
        let mut b = CechCochain::zero(domain, 1, g.clone());
        b.set(&[0, 1], None, g.elem(&[1]).unwrap()).unwrap();
        c = c.add(&b.coboundary().unwrap()).unwrap().normalize().unwrap().0;
        let rows = m_star(&c, Some(&[2])).unwrap();
        assert_eq!(rows[0].order, 2);
        for ((t, x), v) in c.entries() {
            let expect = RootOfUnity::new(-2 * v.0[0] as i64, 4);
            assert_eq!(rows[0].value(t, *x), expect);
        }
    }

    #[test]
    fn relations_hold_and_detect_corruption() {
        let cover = Arc::new(Cover::from_complex(&models::tetrahedron_boundary()));
        let domain = Arc::new(Domain::Pointwise((*cover).clone()));
        let mut rng = crate::random::rng(3);
        let c = crate::random::normalized_cocycle(&mut rng, &domain, &FinAbGroup::cyclic(3)).unwrap();
        let twist = Twist::new(cover.clone(), &c).unwrap();
        let mut nu = twist.nu_c();
        let atoms: Vec<usize> = (0..twist.dual_cover.point_count()).map(|q| q / cover.point_count()).collect();
        assert!(rank_one_relations_check(&twist.dual_gamma, &nu, &atoms).unwrap().passed());
        let q = twist.point_of(1, 0);
        let v = nu.get(0, 1, 2, q);
        nu.set(0, 1, 2, q, v.mul(RootOfUnity::new(1, 3))).unwrap();
        let report = rank_one_relations_check(&twist.dual_gamma, &nu, &atoms).unwrap();
        assert!(report.failures.iter().any(|f| f.relation == "product" && f.triple == (0, 1, 2) && f.point == q));
    }
}
