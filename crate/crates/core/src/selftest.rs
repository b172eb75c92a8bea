//! A quick, seeded run of the library's invariant checks, reported as one
//! line per check.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::algebra::{approx_eq, rt_product, rt_star, Twist};
use crate::cech::{cohomology, CechCochain, Coefficients, Domain};
use crate::cover::Cover;
use crate::dd::{dd_class, m_star, rank_one_relations_check, DDOptions, Verdict};
use crate::error::{Error, Result};
use crate::extension::{baer_sum, build_extension, properly_isomorphic};
use crate::group::FinAbGroup;
use crate::groupoid::Blowup;
use crate::models;
use crate::pipeline::{pipeline_local_homeo, sheeted_cover, to_pointwise, ExtensionData, PipelineInput, Sections};
use crate::random::{self, Rng64};
use crate::reps::{intertwine_check, spectrum, SpectrumOptions};
use crate::scalar::{Cyclotomic, Scalar};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub schema_version: u32,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

type Check = fn(&mut Rng64, f64) -> Result<String>;

/// Runs every check with the given seed and numeric tolerance.
pub fn run(seed: u64, tolerance: f64) -> SelftestReport {
    let checks: [(&'static str, Check); 8] = [
        ("normalization identities", identities),
        ("extension calculus", extensions),
        ("fourier transform and spectrum", fourier_and_spectrum),
        ("moore space class", moore),
        ("class well-definedness", well_defined),
        ("rank-one relations", relations),
        ("local homeomorphism pipeline", pipeline),
        ("pointwise collapse", pointwise),
    ];
    let mut rng = random::rng(seed);
    let results: Vec<CheckResult> = checks
        .iter()
        .map(|&(name, f)| {
            let start = Instant::now();
            let (passed, detail) = match f(&mut rng, tolerance) {
                Ok(d) => (true, d),
                Err(e) => (false, e.to_string()),
            };
            CheckResult { name, passed, detail, millis: start.elapsed().as_millis() }
        })
        .collect();
    SelftestReport { schema_version: 1, seed, passed: results.iter().all(|r| r.passed), checks: results }
}

fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Internal(msg.into()))
}

fn pointwise_domain(cover: &Cover) -> Arc<Domain> {
    Arc::new(Domain::Pointwise(cover.clone()))
}

fn identities(rng: &mut Rng64, _: f64) -> Result<String> {
    let mut n = 0;
    let mut domains: Vec<Arc<Domain>> =
        models::small_covers().into_iter().map(|(_, c)| pointwise_domain(&c)).collect();
    domains.push(Arc::new(Domain::Nerve(models::rp2())));
    domains.push(Arc::new(Domain::Nerve(models::tetrahedron_boundary())));
    for d in &domains {
        for g in models::small_groups() {
            let c = random::normalized_cocycle(rng, d, &g)?;
            let report = c.check_norm_identities()?;
            if let Some(v) = report.first_violation {
                return fail(format!("identity {} fails at {:?}", v.identity, v.tuple));
            }
            let b = random::cochain(rng, d, 1, &g)?;
            if !b.coboundary()?.coboundary()?.is_zero() {
                return fail("δδ ≠ 0");
            }
            n += 1;
        }
    }
    Ok(format!("{n} cocycles"))
}

fn extensions(rng: &mut Rng64, _: f64) -> Result<String> {
    let mut n = 0;
    for (_, cover) in models::small_covers().into_iter().take(5) {
        let base = Blowup::of_cover(&cover).groupoid;
        for g in models::small_groups() {
            let p1 = random::groupoid_coboundary(rng, &base, &g)?;
            let p2 = random::groupoid_coboundary(rng, &base, &g)?;
            let e1 = build_extension(&base, &p1)?;
            let back = e1.extract_cocycle(e1.section().expect("section"))?;
            if back != p1 {
                return fail("extract_cocycle does not invert build_extension");
            }
            let sum = baer_sum(&e1, &build_extension(&base, &p2)?)?;
            if properly_isomorphic(&sum, &build_extension(&base, &p1.add(&p2)?)?)?.is_none() {
                return fail("Baer sum is not isomorphic to the extension of the sum");
            }
            n += 1;
        }
    }
    for (n_order, g) in [(2usize, FinAbGroup::cyclic(2)), (2, FinAbGroup::cyclic(4)), (3, FinAbGroup::cyclic(3))] {
        let base = models::cyclic_group(n_order);
        let phi = random::carry_cocycle(n_order, &g, 0, 1)?;
        let e = build_extension(&base, &phi)?;
        if !e.check().is_empty() || e.extract_cocycle(e.section().expect("section"))? != phi {
            return fail("carry extension roundtrip fails");
        }
        n += 1;
    }
    Ok(format!("{n} extensions"))
}

fn fourier_and_spectrum(rng: &mut Rng64, tol: f64) -> Result<String> {
    let mut labels = 0;
    for (name, cover) in models::small_covers() {
        let cover = Arc::new(cover);
        for g in models::small_groups() {
            let c = random::normalized_cocycle(rng, &pointwise_domain(&cover), &g)?;
            let t = Twist::new(cover.clone(), &c)?;
            let nu = t.nu_c();
            let dim = t.sigma.total.arrow_count();
            for _ in 0..3 {
                let f1 = random::exact_vector(rng, dim, 12, 0.4);
                let f2 = random::exact_vector(rng, dim, 12, 0.4);
                let lhs = t.fourier(&t.convolve(&f1, &f2));
                let rhs = rt_product(&t.dual_gamma, &nu, &t.fourier(&f1), &t.fourier(&f2));
                if lhs != rhs {
                    return fail(format!("Φ is not multiplicative on {name}"));
                }
                if t.fourier(&t.star(&f1)) != rt_star(&t.dual_gamma, &nu, &t.fourier(&f1)) {
                    return fail(format!("Φ does not preserve * on {name}"));
                }
                let scaled: Vec<Cyclotomic> = f1.iter().map(|v| Cyclotomic::from_int(g.order() as i64) * v.clone()).collect();
                if t.fourier_inverse_scaled(&t.fourier(&f1)) != scaled {
                    return fail(format!("Φ is not invertible on {name}"));
                }
                let fc = random::complex_vector(rng, dim, 0.5);
                if !approx_eq(&t.fourier(&t.convolve(&fc, &fc)), &rt_product(&t.dual_gamma, &nu, &t.fourier(&fc), &t.fourier(&fc)), tol) {
                    return fail(format!("Φ is not multiplicative numerically on {name}"));
                }
                for x in 0..cover.point_count() {
                    for &i in cover.indices_at(x) {
                        for tau in 0..t.characters.len() {
                            if !intertwine_check(&t, &fc, i, x, tau, tol)? {
                                return fail(format!("intertwining fails on {name}"));
                            }
                        }
                    }
                }
            }
            let table = spectrum(&t, &SpectrumOptions { tolerance: tol, max_pairs: 16, ..Default::default() })?;
            if !table.is_consistent() {
                return fail(format!("spectrum table inconsistent on {name}: {table:?}"));
            }
            labels += table.labels.len();
        }
    }
    Ok(format!("{labels} labels"))
}

fn moore_generator() -> Result<CechCochain> {
    let domain = Arc::new(Domain::Nerve(models::moore_z2()));
    let Domain::Nerve(n) = domain.as_ref() else { unreachable!() };
    let h2 = cohomology(n, &Coefficients::Group(FinAbGroup::cyclic(2)), 2)?;
    h2.generators(&domain)?.into_iter().next().ok_or_else(|| Error::Internal("H² of the Moore space vanished".into()))
}

fn moore(_: &mut Rng64, _: f64) -> Result<String> {
    let c = moore_generator()?;
    let r = dd_class(&c, &DDOptions::default())?;
    if r.verdict != Verdict::Nontrivial || r.h3_orders != [2] || r.rows[1].h3_class != [1] {
        return fail(format!("unexpected report {r:?}"));
    }
    Ok("nontrivial, H³ = Z/2".into())
}

fn well_defined(rng: &mut Rng64, _: f64) -> Result<String> {
    let c = moore_generator()?;
    let base = dd_class(&c, &DDOptions::default())?;
    for _ in 0..10 {
        let b = random::cochain(rng, c.domain(), 1, c.group())?;
        let c2 = c.add(&b.coboundary()?)?.normalize()?.0;
        if !dd_class(&c2, &DDOptions::default())?.same_classes(&base) {
            return fail("class changed under a coboundary");
        }
    }
    for seed in 0..5 {
        let r = dd_class(&c, &DDOptions { characters: None, lift_seed: Some(seed) })?;
        if !r.same_classes(&base) {
            return fail("class depends on the integer lift");
        }
    }
    Ok("10 coboundaries, 5 lifts".into())
}

fn relations(rng: &mut Rng64, _: f64) -> Result<String> {
    let mut n = 0;
    for (_, cover) in models::small_covers().into_iter().skip(1).take(4) {
        let cover = Arc::new(cover);
        let c = random::normalized_cocycle(rng, &pointwise_domain(&cover), &FinAbGroup::cyclic(3))?;
        let t = Twist::new(cover.clone(), &c)?;
        let atoms: Vec<usize> = (0..t.dual_cover.point_count()).map(|q| q / cover.point_count()).collect();
        let report = rank_one_relations_check(&t.dual_gamma, &t.nu_c(), &atoms)?;
        if !report.passed() {
            return fail(format!("relation {:?} fails", report.failures[0]));
        }
        n += report.checked;
    }
    Ok(format!("{n} relations"))
}

fn pipeline(_: &mut Rng64, _: f64) -> Result<String> {
    let c0 = moore_generator()?;
    let Domain::Nerve(n) = c0.domain().as_ref() else { unreachable!() };
    let cover = Arc::new(Cover::from_complex(n));
    for sheets in [2, 3] {
        let (y_labels, psi, v_sets) = sheeted_cover(&cover, sheets)?;
        let input = PipelineInput {
            y_labels,
            psi,
            cover: cover.clone(),
            v_sets,
            extension: ExtensionData::Pullback(c0.clone()),
            sections: Sections::Canonical,
            nerve: Some(c0.domain().clone()),
        };
        let r = pipeline_local_homeo(&input, &DDOptions::default())?;
        let diff = r.cocycle.sub(&to_pointwise(&c0, &cover)?)?;
        if diff.solve_coboundary()?.is_none() || r.report.verdict != Verdict::Nontrivial {
            return fail(format!("{sheets}-sheeted pipeline did not recover the cocycle"));
        }
    }
    Ok("2- and 3-sheeted covers".into())
}

fn pointwise(rng: &mut Rng64, _: f64) -> Result<String> {
    let mut n = 0;
    for _ in 0..20 {
        let cover = random::cover(rng, 6, 5, 3);
        let g = FinAbGroup::cyclic(4);
        let c = random::cocycle(rng, &pointwise_domain(&cover), &g)?;
        if c.solve_coboundary()?.is_none() {
            return fail("a pointwise cocycle is not a coboundary");
        }
        let rows = m_star(&c.normalize()?.0, None)?;
        if rows.len() != 4 {
            return fail("wrong number of m_* rows");
        }
        n += 1;
    }
    Ok(format!("{n} cocycles"))
}
