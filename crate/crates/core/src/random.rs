//! Seeded generators for covers, cochains, cocycles and algebra elements.
//! Every generator takes the RNG explicitly so runs are reproducible.

use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cech::{cohomology, CechCochain, Coefficients, Domain};
use crate::cover::Cover;
use crate::error::Result;
use crate::group::{FinAbGroup, GroupElem, RootOfUnity};
use crate::groupoid::{FinGroupoid, GroupoidCocycle};
use crate::scalar::{Cyclotomic, Scalar};

pub type Rng64 = ChaCha8Rng;

/// Default seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 0x7457_6973_745f_6c62;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random cover of `points` points by `sets` sets in which every point
/// lies in between 1 and `max_local` sets and every set is nonempty. The
/// number of sets is capped at `points * max_local`.
pub fn cover(rng: &mut Rng64, points: usize, sets: usize, max_local: usize) -> Cover {
    assert!(points > 0 && sets > 0 && max_local > 0);
    let sets = sets.min(points * max_local);
    let max_local = max_local.min(sets);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); sets];
    let mut order: Vec<usize> = (0..points).collect();
    order.shuffle(rng);
    for i in 0..sets {
        members[i].push(order[i % points]);
    }
    let mut idx: Vec<usize> = (0..sets).collect();
    for x in 0..points {
        let have = members.iter().filter(|m| m.contains(&x)).count();
        let want = rng.gen_range(1..=max_local);
        idx.shuffle(rng);
        for &i in &idx {
            if members.iter().filter(|m| m.contains(&x)).count() >= want.max(have).max(1) {
                break;
            }
            if !members[i].contains(&x) {
                members[i].push(x);
            }
        }
    }
    for m in &mut members {
        m.sort_unstable();
    }
    let labels: Vec<String> = (0..points).map(|x| format!("x{x}")).collect();
    let sets = members
        .into_iter()
        .enumerate()
        .map(|(i, m)| (format!("U{i}"), m.into_iter().map(|x| labels[x].clone()).collect()))
        .collect();
    Cover::new(labels, sets).expect("generated cover is valid")
}

pub fn element(rng: &mut Rng64, group: &FinAbGroup) -> GroupElem {
    group.elem_at(rng.gen_range(0..group.order()))
}

/// Uniformly random values on every entry of the given degree.
pub fn cochain(rng: &mut Rng64, domain: &Arc<Domain>, degree: usize, group: &FinAbGroup) -> Result<CechCochain> {
    let entries: Vec<_> = domain
        .tuples(degree)?
        .into_iter()
        .map(|k| (k, element(rng, group)))
        .collect();
    CechCochain::from_entries(domain.clone(), degree, group.clone(), entries)
}

/// A random 2-cocycle: a random coboundary plus, in nerve mode, a random
/// combination of cohomology generators. Not normalized in general.
pub fn cocycle(rng: &mut Rng64, domain: &Arc<Domain>, group: &FinAbGroup) -> Result<CechCochain> {
    let b = cochain(rng, domain, 1, group)?;
    let mut c = b.coboundary()?;
    if let Domain::Nerve(n) = domain.as_ref() {
        let h2 = cohomology(n, &Coefficients::Group(group.clone()), 2)?;
        for gen in h2.generators(domain)? {
            for _ in 0..rng.gen_range(0..group.exponent().max(1)) {
                c = c.add(&gen)?;
            }
        }
    }
    Ok(c)
}

/// A random normalized 2-cocycle.
pub fn normalized_cocycle(rng: &mut Rng64, domain: &Arc<Domain>, group: &FinAbGroup) -> Result<CechCochain> {
    Ok(cocycle(rng, domain, group)?.normalize()?.0)
}

/// A random complex vector with roughly `density` of its entries nonzero.
pub fn complex_vector(rng: &mut Rng64, len: usize, density: f64) -> Vec<Complex64> {
    (0..len)
        .map(|_| {
            if rng.gen_bool(density) {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

/// A random exact vector: small integer multiples of `conductor`-th roots of
/// unity.
pub fn exact_vector(rng: &mut Rng64, len: usize, conductor: u64, density: f64) -> Vec<Cyclotomic> {
    (0..len)
        .map(|_| {
            if rng.gen_bool(density) {
                let k = rng.gen_range(-2i64..=2);
                let r = RootOfUnity::new(rng.gen_range(0..conductor as i64), conductor);
                Cyclotomic::from_int(k) * Cyclotomic::from_root(r)
            } else {
                Cyclotomic::zero()
            }
        })
        .collect()
}

/// A random normalized 2-coboundary on a finite groupoid: the
/// normalization of `d¹f` for uniformly random `f`.
pub fn groupoid_coboundary(rng: &mut Rng64, g: &FinGroupoid, group: &FinAbGroup) -> Result<GroupoidCocycle> {
    let f: Vec<usize> = (0..g.arrow_count()).map(|_| rng.gen_range(0..group.order())).collect();
    Ok(GroupoidCocycle::coboundary_of(g, group, &f).normalize(g)?.0)
}

/// `k` times the carry cocycle `(a, b) ↦ [a + b ≥ n]·(m/n)` in factor `fct`
/// of `group`, on [`crate::models::cyclic_group`]`(n)`; needs `n | m`.
pub fn carry_cocycle(n: usize, group: &FinAbGroup, fct: usize, k: u64) -> Result<GroupoidCocycle> {
    let m = *group
        .cyclic_orders()
        .get(fct)
        .ok_or_else(|| crate::error::Error::Malformed("no such cyclic factor".into()))?;
    if m % n as u64 != 0 {
        return crate::error::precondition("carry cocycle needs n | m");
    }
    let g = crate::models::cyclic_group(n);
    let mut out = GroupoidCocycle::zero(group.clone());
    for (a, b) in g.composable_pairs() {
        if a + b >= n {
            let mut e = group.zero();
            e.0[fct] = (k * (m / n as u64)) % m;
            out.set(a, b, group.index_of(&e));
        }
    }
    Ok(out)
}
