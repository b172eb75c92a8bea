//! The eight acceptance criteria, each at its stated scale, tolerance and
//! time limit. Prints one PASS/FAIL line per criterion and exits nonzero if
//! any fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use twistlab::algebra::Twist;
use twistlab::cech::{cohomology, CechCochain, Coefficients, Domain};
use twistlab::cover::{Cover, Nerve};
use twistlab::dd::{dd_class, rank_one_relations_check, DDOptions, Verdict};
use twistlab::extension::{baer_sum, build_extension, check_proper_isomorphism, properly_isomorphic, CentralExtension};
use twistlab::group::{FinAbGroup, GroupElem, RootOfUnity};
use twistlab::groupoid::{Blowup, FinGroupoid, GroupoidCocycle};
use twistlab::models;
use twistlab::pipeline::{pipeline_local_homeo, sheeted_cover, to_pointwise, ExtensionData, PipelineInput, Sections};
use twistlab::random::{self, Rng64};
use twistlab::reps::{intertwine_check, spectrum, SpectrumOptions};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 8] = [
        ("identity suite", 10, identity_suite),
        ("extension calculus", 30, extension_calculus),
        ("fourier isomorphism and spectrum", 300, fourier_and_spectrum),
        ("moore space witness", 60, moore_witness),
        ("class well-definedness", 60, well_definedness),
        ("rank-one relations", 30, rank_one_relations),
        ("local homeomorphism pipeline", 60, pipeline),
        ("pointwise collapse", 10, pointwise_collapse),
    ];
    let mut failed = 0;
    for (n, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(d) if elapsed > Duration::from_secs(*limit) => Err(format!("{d}; over the time limit")),
            r => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        println!("{tag} [{}] {name}: {detail} ({:.2}s of {limit}s)", n + 1, elapsed.as_secs_f64());
        failed += usize::from(result.is_err());
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
}

fn rng(stream: u64) -> Rng64 {
    random::rng(random::DEFAULT_SEED ^ stream)
}

fn pointwise(cover: &Cover) -> Arc<Domain> {
    Arc::new(Domain::Pointwise(cover.clone()))
}

fn nerve(n: Nerve) -> Arc<Domain> {
    Arc::new(Domain::Nerve(n))
}

fn first_generator(domain: &Arc<Domain>, group: &FinAbGroup) -> CechCochain {
    let Domain::Nerve(n) = domain.as_ref() else { panic!("nerve domain expected") };
    cohomology(n, &Coefficients::Group(group.clone()), 2).unwrap().generators(domain).unwrap().remove(0)
}

// ---------------------------------------------------------------------------
// independent cochain arithmetic

fn add(g: &FinAbGroup, a: &GroupElem, b: &GroupElem) -> GroupElem {
    GroupElem(a.0.iter().zip(b.0.iter()).zip(g.cyclic_orders()).map(|((x, y), n)| (x + y) % n).collect())
}

fn neg(g: &FinAbGroup, a: &GroupElem) -> GroupElem {
    GroupElem(a.0.iter().zip(g.cyclic_orders()).map(|(x, n)| (n - x) % n).collect())
}

fn sub(g: &FinAbGroup, a: &GroupElem, b: &GroupElem) -> GroupElem {
    add(g, a, &neg(g, b))
}

/// `(δc)_{i0..i3} = c_{i1i2i3} − c_{i0i2i3} + c_{i0i1i3} − c_{i0i1i2}` on every tuple.
fn is_cocycle_oracle(c: &CechCochain) -> bool {
    let g = c.group();
    c.domain().tuples(3).unwrap().into_iter().all(|(t, x)| {
        let v = |a: usize, b: usize, d: usize| c.get(&[t[a], t[b], t[d]], x);
        let s = add(g, &sub(g, &v(1, 2, 3), &v(0, 2, 3)), &sub(g, &v(0, 1, 3), &v(0, 1, 2)));
        s.0.iter().all(|&e| e == 0)
    })
}

/// `(δb)_{ijk} = b_jk − b_ik + b_ij`.
fn coboundary_oracle(b: &CechCochain, t: &[usize], x: Option<usize>) -> GroupElem {
    let g = b.group();
    add(g, &sub(g, &b.get(&[t[1], t[2]], x), &b.get(&[t[0], t[2]], x)), &b.get(&[t[0], t[1]], x))
}

fn identities_oracle(c: &CechCochain) -> Option<(Vec<usize>, Option<usize>)> {
    let g = c.group();
    let zero = g.zero();
    for (t, x) in c.domain().tuples(2).unwrap() {
        let (i, j, k) = (t[0], t[1], t[2]);
        let v = |a: usize, b: usize, d: usize| c.get(&[a, b, d], x);
        let holds = v(i, i, i) == zero
            && v(i, i, j) == zero
            && v(i, j, j) == zero
            && v(i, j, i) == v(j, i, j)
            && v(i, j, k) == sub(g, &v(i, j, i), &v(j, i, k))
            && v(i, j, k) == sub(g, &v(j, k, j), &v(i, k, j))
            && add(g, &v(i, j, i), &v(j, k, i)) == add(g, &sub(g, &v(i, k, i), &v(i, k, j)), &v(j, k, j));
        if !holds {
            return Some((t, x));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// 1

fn identity_suite() -> Outcome {
    let mut rng = rng(1);
    let mut domains: Vec<(String, Arc<Domain>)> =
        models::small_covers().into_iter().map(|(n, c)| (format!("{n} (pointwise)"), pointwise(&c))).collect();
    for k in 0..3 {
        let cover = random::cover(&mut rng, 8, 6, 3);
        domains.push((format!("random cover {k} (nerve)"), nerve(Nerve::from_cover(&cover))));
        domains.push((format!("random cover {k} (pointwise)"), pointwise(&cover)));
    }
    domains.push(("circle".into(), nerve(models::triangle_boundary())));
    domains.push(("sphere".into(), nerve(models::tetrahedron_boundary())));
    domains.push(("projective plane".into(), nerve(models::rp2())));
    let mut count = 0;
    for (name, d) in &domains {
        for g in models::small_groups() {
            for _ in 0..2 {
                let c = ok(random::normalized_cocycle(&mut rng, d, &g))?;
                ensure!(is_cocycle_oracle(&c), "{name}: sample is not a cocycle");
                let report = ok(c.check_norm_identities())?;
                ensure!(report.passed(), "{name} {:?}: violation {:?}", g.cyclic_orders(), report.first_violation);
                ensure!(identities_oracle(&c).is_none(), "{name}: oracle disagrees");
                count += 1;
            }
        }
    }
    // negative control: a single corrupted value is reported where it sits
    let cover = models::small_covers().remove(3).1;
    let g = FinAbGroup::cyclic(3);
    let mut c = ok(random::normalized_cocycle(&mut rng, &pointwise(&cover), &g))?;
    let old = c.get(&[0, 1, 1], Some(1));
    ok(c.set(&[0, 1, 1], Some(1), add(&g, &old, &g.elem_at(1))))?;
    let v = ok(c.check_norm_identities())?.first_violation.ok_or("corruption not detected")?;
    ensure!(
        v.point == Some(1) && v.tuple.iter().all(|i| [0, 1].contains(i)),
        "violation reported at {:?} {:?}",
        v.tuple,
        v.point
    );
    Ok(format!("{count} cocycles on {} configurations, no violations; corruption caught", domains.len()))
}

// ---------------------------------------------------------------------------
// 2

/// `φ(a,b)` read off by `κ(a)κ(b) = ι(r(a), φ(a,b)) κ(ab)`.
fn extract_oracle(e: &CentralExtension, kappa: &[usize]) -> Option<GroupoidCocycle> {
    let base = &e.base;
    let mut phi = GroupoidCocycle::zero(e.group.clone());
    for (a, b) in base.composable_pairs() {
        let lhs = e.total.compose(kappa[a], kappa[b])?;
        let ab = base.compose(a, b)?;
        let u = e.total.range(kappa[a]);
        let g = (0..e.group.order()).find(|&g| e.total.compose(e.iota(u, g), kappa[ab]) == Some(lhs))?;
        phi.set(a, b, g);
    }
    Some(phi)
}

/// A proper isomorphism: bijective functor over the identity of the base
/// that fixes the embedded group.
fn proper_iso_oracle(e1: &CentralExtension, e2: &CentralExtension, map: &[usize]) -> bool {
    let (t1, t2) = (&e1.total, &e2.total);
    let n = t1.arrow_count();
    if map.len() != n || t2.arrow_count() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &m in map {
        if m >= n || std::mem::replace(&mut seen[m], true) {
            return false;
        }
    }
    for (a, b) in t1.composable_pairs() {
        if t2.compose(map[a], map[b]) != t1.compose(a, b).map(|ab| map[ab]) {
            return false;
        }
    }
    (0..n).all(|s| e2.pi(map[s]) == e1.pi(s))
        && (0..t1.unit_count()).all(|u| (0..e1.group.order()).all(|g| map[e1.iota(u, g)] == e2.iota(t2.range(map[e1.iota(u, g)]), g)))
}

/// Random normalized groupoid cocycles over a mix of base groupoids,
/// several of them cohomologically nontrivial.
fn random_base(rng: &mut Rng64, k: usize) -> (FinGroupoid, FinAbGroup, Box<dyn Fn(&mut Rng64) -> GroupoidCocycle>) {
    let groups = models::small_groups();
    let group = groups[k % groups.len()].clone();
    match k % 4 {
        0 => {
            let cover = random::cover(rng, 4, 3, 3);
            let blowup = Blowup::of_cover(&cover);
            let base = blowup.groupoid.clone();
            let g = group.clone();
            let domain = pointwise(&cover);
            (
                base,
                group,
                Box::new(move |r| {
                    let c = random::normalized_cocycle(r, &domain, &g).unwrap();
                    GroupoidCocycle::from_cech(&blowup, &cover, &c).unwrap()
                }),
            )
        }
        1 | 2 => {
            let m = group.cyclic_orders()[0] as usize;
            let n = if k % 4 == 1 { m } else { 2.min(m) };
            let base = models::cyclic_group(n);
            let (b2, g) = (base.clone(), group.clone());
            (
                base,
                group,
                Box::new(move |r| {
                    let kk = r.gen_range(0..n as u64);
                    let carry = random::carry_cocycle(n, &g, 0, kk).unwrap();
                    carry.add(&random::groupoid_coboundary(r, &b2, &g).unwrap()).unwrap().normalize(&b2).unwrap().0
                }),
            )
        }
        _ => {
            let base = models::pair_groupoid(3);
            let (b2, g) = (base.clone(), group.clone());
            (base, group, Box::new(move |r| random::groupoid_coboundary(r, &b2, &g).unwrap()))
        }
    }
}

fn extension_calculus() -> Outcome {
    let mut rng = rng(2);
    let mut roundtrips = 0;
    let mut pairs = 0;
    let mut k = 0;
    while roundtrips < 100 {
        let (base, _group, sample) = random_base(&mut rng, k);
        k += 1;
        for _ in 0..4 {
            let phi = sample(&mut rng);
            ensure!(phi.is_cocycle(&base), "sample is not a cocycle");
            let e = ok(build_extension(&base, &phi))?;
            ensure!(e.check().is_empty(), "extension axioms fail: {:?}", e.check());
            let kappa = e.section().ok_or("no section")?.to_vec();
            ensure!(ok(e.extract_cocycle(&kappa))? == phi, "extract_cocycle does not invert build_extension");
            ensure!(extract_oracle(&e, &kappa).as_ref() == Some(&phi), "oracle extraction disagrees");
            roundtrips += 1;
            if pairs < 50 && roundtrips % 2 == 0 {
                let phi2 = sample(&mut rng);
                let sum = ok(baer_sum(&e, &ok(build_extension(&base, &phi2))?))?;
                let target = ok(build_extension(&base, &ok(phi.add(&phi2))?))?;
                let map = ok(properly_isomorphic(&sum, &target))?.ok_or("Baer sum law fails")?;
                ok(check_proper_isomorphism(&sum, &target, &map))?;
                ensure!(proper_iso_oracle(&sum, &target, &map), "witness rejected by the oracle");
                pairs += 1;
            }
        }
    }
    // negative control: the carry class on Z/2 is not trivial
    let base = models::cyclic_group(2);
    let g = FinAbGroup::cyclic(2);
    let nontrivial = ok(build_extension(&base, &ok(random::carry_cocycle(2, &g, 0, 1))?))?;
    let trivial = ok(build_extension(&base, &GroupoidCocycle::zero(g)))?;
    ensure!(ok(properly_isomorphic(&nontrivial, &trivial))?.is_none(), "Z/4 is isomorphic to Z/2 x Z/2");
    Ok(format!("{roundtrips} roundtrips, {pairs} Baer sums with verified witnesses"))
}

// ---------------------------------------------------------------------------
// 3

fn char_value(t: &Twist, tau: usize, g: usize) -> Complex64 {
    let e = t.group.elem_at(g);
    let phase: f64 = t.characters[tau]
        .exponents
        .iter()
        .zip(&e.0)
        .zip(t.group.cyclic_orders())
        .map(|((&m, &x), &n)| (m * x) as f64 / n as f64)
        .sum();
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase)
}

/// `Φ(f)(i,(τ,x),j) = Σ_g τ(g) f(g,(i,x,j))`.
fn fourier_oracle(t: &Twist, f: &[Complex64]) -> HashMap<(usize, usize, usize, usize), Complex64> {
    let mut out = HashMap::new();
    for x in 0..t.cover.point_count() {
        for &i in t.cover.indices_at(x) {
            for &j in t.cover.indices_at(x) {
                for tau in 0..t.characters.len() {
                    let v = (0..t.group.order()).map(|g| char_value(t, tau, g) * f[t.sigma_arrow(g, i, x, j).unwrap()]).sum();
                    out.insert((tau, x, i, j), v);
                }
            }
        }
    }
    out
}

/// Convolution on the total groupoid of the extension, by enumerating
/// composable pairs.
fn groupoid_convolution(g: &FinGroupoid, f1: &[Complex64], f2: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); f1.len()];
    for (a, b) in g.composable_pairs() {
        out[g.compose(a, b).unwrap()] += f1[a] * f2[b];
    }
    out
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

fn fourier_and_spectrum() -> Outcome {
    let mut rng = rng(3);
    let tol = 1e-9;
    let (mut configs, mut labels, mut samples) = (0, 0, 0);
    for (name, cover) in models::small_covers() {
        let cover = Arc::new(cover);
        for group in models::small_groups() {
            configs += 1;
            let c = ok(random::normalized_cocycle(&mut rng, &pointwise(&cover), &group))?;
            let t = ok(Twist::new(cover.clone(), &c))?;
            let total = &t.sigma.total;
            let dim = total.arrow_count();
            let cval = |i: usize, j: usize, k: usize, x: usize| group.index_of(&c.get(&[i, j, k], Some(x)));

            // (i) multiplicative and *-preserving on random pairs, against
            // an independent groupoid convolution and twisted product
            for _ in 0..100 {
                let f1 = random::complex_vector(&mut rng, dim, 0.5);
                let f2 = random::complex_vector(&mut rng, dim, 0.5);
                let (p1, p2) = (fourier_oracle(&t, &f1), fourier_oracle(&t, &f2));
                let lhs = fourier_oracle(&t, &groupoid_convolution(total, &f1, &f2));
                let fstar: Vec<Complex64> = (0..dim).map(|s| f1[total.inverse(s)].conj()).collect();
                let lhs_star = fourier_oracle(&t, &fstar);
                for (&(tau, x, i, k), &v) in &lhs {
                    let rhs: Complex64 = t
                        .cover
                        .indices_at(x)
                        .iter()
                        .map(|&j| char_value(&t, tau, cval(i, j, k, x)) * p1[&(tau, x, i, j)] * p2[&(tau, x, j, k)])
                        .sum();
                    ensure!(close(v, rhs, tol), "{name}: Φ not multiplicative at {:?}", (tau, x, i, k));
                    let star = char_value(&t, tau, cval(i, k, i, x)).conj() * p1[&(tau, x, k, i)].conj();
                    ensure!(close(lhs_star[&(tau, x, i, k)], star, tol), "{name}: Φ does not preserve *");
                }
                let lib = t.fourier(&f1);
                for (b, &(i, p, j)) in t.dual_gamma.triples.iter().enumerate() {
                    let (tau, x) = (p / cover.point_count(), p % cover.point_count());
                    ensure!(close(lib[b], p1[&(tau, x, i, j)], tol), "{name}: library Φ disagrees with the oracle");
                }
                samples += 1;
            }
            // bijective: equal dimensions and the inverse recovers every basis vector
            ensure!(dim == t.dual_gamma.groupoid.arrow_count(), "{name}: dimensions differ");
            let order = group.order() as f64;
            for s in 0..dim {
                let mut e = vec![Complex64::new(0.0, 0.0); dim];
                e[s] = Complex64::new(1.0, 0.0);
                let back: Vec<Complex64> = t.fourier_inverse_scaled(&t.fourier(&e)).iter().map(|v| v / order).collect();
                ensure!(back.iter().zip(&e).all(|(a, b)| close(*a, *b, tol)), "{name}: Φ is not injective");
            }

            // (ii) intertwining, 100 elements per label and anchor
            for x in 0..cover.point_count() {
                for tau in 0..t.characters.len() {
                    labels += 1;
                    for _ in 0..100 {
                        let f = random::complex_vector(&mut rng, dim, 0.5);
                        for &i in cover.indices_at(x) {
                            ensure!(ok(intertwine_check(&t, &f, i, x, tau, tol))?, "{name}: intertwining fails");
                        }
                    }
                }
            }

            // (iii) dimension identity and (iv) irreducibility
            let local: usize = (0..cover.point_count()).map(|x| cover.indices_at(x).len().pow(2)).sum();
            let table = ok(spectrum(&t, &SpectrumOptions { tolerance: tol, ..Default::default() }))?;
            let squares: usize = table.labels.iter().map(|e| e.dimension * e.dimension).sum();
            ensure!(group.order() * local == dim && squares == dim, "{name}: dimension identity fails");
            ensure!(table.labels.len() == group.order() * cover.point_count(), "{name}: wrong label count");
            ensure!(
                table.labels.iter().all(|e| e.dimension == cover.indices_at(e.point_index).len() && e.commutant_dim == Some(1)),
                "{name}: a label is reducible or has the wrong dimension"
            );
            ensure!(table.is_consistent(), "{name}: spectrum table inconsistent");
        }
    }
    Ok(format!("{configs} configurations, {samples} pairs, {labels} labels"))
}

// ---------------------------------------------------------------------------
// 4

fn moore_generator() -> CechCochain {
    first_generator(&nerve(models::moore_z2()), &FinAbGroup::cyclic(2))
}

/// Exhaustive search for `b` with `δb = c` over Z/2 1-cochains on edges
/// outside a spanning tree (any `b` is gauge equivalent to one vanishing on
/// the tree).
fn brute_force_coboundary(n: &Nerve, c: &CechCochain) -> Option<Vec<u8>> {
    let edges = n.simplices(1).to_vec();
    let triangles = n.simplices(2).to_vec();
    let mut parent: Vec<usize> = (0..n.vertex_count()).collect();
    fn find(p: &mut [usize], v: usize) -> usize {
        if p[v] != v {
            let r = find(p, p[v]);
            p[v] = r;
        }
        p[v]
    }
    let mut free = Vec::new();
    for (k, e) in edges.iter().enumerate() {
        let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
        if a == b {
            free.push(k);
        } else {
            parent[a] = b;
        }
    }
    assert!(free.len() <= 24);
    let edge_index: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(k, e)| ((e[0], e[1]), k)).collect();
    let target: Vec<u8> = triangles.iter().map(|t| c.get(t, None).0[0] as u8).collect();
    let tri_edges: Vec<[usize; 3]> = triangles
        .iter()
        .map(|t| [edge_index[&(t[1], t[2])], edge_index[&(t[0], t[2])], edge_index[&(t[0], t[1])]])
        .collect();
    let mut b = vec![0u8; edges.len()];
    for mask in 0u32..(1 << free.len()) {
        for (bit, &k) in free.iter().enumerate() {
            b[k] = ((mask >> bit) & 1) as u8;
        }
        if tri_edges.iter().zip(&target).all(|(e, &v)| (b[e[0]] ^ b[e[1]] ^ b[e[2]]) == v) {
            return Some(b);
        }
    }
    None
}

/// Rank of an integer matrix mod a prime.
fn rank_mod(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col].rem_euclid(p) != 0) else { continue };
        m.swap(rank, piv);
        let inv = (1..p).find(|&k| (k * m[rank][col]).rem_euclid(p) == 1).unwrap();
        for r in 0..m.len() {
            if r != rank {
                let f = (m[r][col] * inv).rem_euclid(p);
                if f != 0 {
                    for k in 0..cols {
                        m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

fn moore_witness() -> Outcome {
    let moore = models::moore_z2();
    let c = moore_generator();
    let report = ok(dd_class(&c, &DDOptions::default()))?;
    ensure!(report.verdict == Verdict::Nontrivial, "verdict {:?}", report.verdict);
    ensure!(report.h3_orders == [2], "H³ orders {:?}", report.h3_orders);
    let row = report.rows.iter().find(|r| r.tau == [1]).ok_or("no row for the nontrivial character")?;
    ensure!(row.h3_class == [1] && !row.trivial, "nontrivial character row {row:?}");
    ensure!(report.rows.iter().any(|r| r.tau == [0] && r.trivial), "trivial character row is not trivial");

    // oracle 1: c is not a Z/2 coboundary (exhaustive search)
    ensure!(brute_force_coboundary(&moore, &c).is_none(), "c is a coboundary");

    // oracle 2: H³(·; Z) = coker δ². Over F_3..F_11 δ² is onto the 20
    // tetrahedra and over F_2 its rank drops by one
    let tris = moore.simplices(2).to_vec();
    let tets = moore.simplices(3).to_vec();
    let tri_index: HashMap<&Vec<usize>, usize> = tris.iter().enumerate().map(|(k, t)| (t, k)).collect();
    let mut d2 = vec![vec![0i64; tris.len()]; tets.len()];
    for (r, t) in tets.iter().enumerate() {
        for skip in 0..4 {
            let face: Vec<usize> = t.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect();
            d2[r][tri_index[&face]] += if skip % 2 == 0 { 1 } else { -1 };
        }
    }
    ensure!(tets.len() == 20 && moore.dimension() == 3, "unexpected triangulation");
    for p in [3, 5, 7, 11] {
        ensure!(rank_mod(d2.clone(), p) == 20, "odd torsion or free part in H³ (p = {p})");
    }
    ensure!(rank_mod(d2.clone(), 2) == 19, "2-torsion of H³ is not cyclic");
    // w = δc̃/2 pairs oddly with the sum of all tetrahedra (a mod-2 cycle),
    // so w is not in 2·coker and generates the cyclic 2-part; 2w = δc̃ is a
    // coboundary, so that part is Z/2 and w is its generator
    let c_lift: Vec<i64> = tris.iter().map(|t| c.get(t, None).0[0] as i64).collect();
    let w: Vec<i64> = d2.iter().map(|row| row.iter().zip(&c_lift).map(|(a, b)| a * b).sum::<i64>()).collect();
    ensure!(w.iter().all(|v| v % 2 == 0), "δc̃ is not divisible by 2");
    let pairing: i64 = w.iter().map(|v| v / 2).sum();
    ensure!(pairing.rem_euclid(2) == 1, "Bockstein of c pairs trivially with the mod-2 fundamental class");
    let mut face_count = vec![0; tris.len()];
    for row in &d2 {
        for (k, &v) in row.iter().enumerate() {
            if v != 0 {
                face_count[k] += 1;
            }
        }
    }
    ensure!(face_count.iter().all(|&n| n == 2), "tetrahedra do not form a mod-2 cycle");
    Ok("nontrivial, class 1 in Z/2; exhaustive search and mod-p ranks agree".into())
}

// ---------------------------------------------------------------------------
// 5

fn well_definedness() -> Outcome {
    let mut rng = rng(5);
    let moore = nerve(models::moore_z2());
    let mut configs: Vec<(String, CechCochain, Option<Verdict>)> = vec![
        ("moore Z/2".into(), moore_generator(), Some(Verdict::Nontrivial)),
        ("moore Z/4".into(), first_generator(&moore, &FinAbGroup::cyclic(4)), Some(Verdict::Nontrivial)),
        ("moore Z/2xZ/2".into(), first_generator(&moore, &FinAbGroup::new(vec![2, 2]).unwrap()), Some(Verdict::Nontrivial)),
        ("projective plane Z/2".into(), first_generator(&nerve(models::rp2()), &FinAbGroup::cyclic(2)), Some(Verdict::Trivial)),
        ("sphere Z/3".into(), first_generator(&nerve(models::tetrahedron_boundary()), &FinAbGroup::cyclic(3)), Some(Verdict::Trivial)),
    ];
    let cover = models::small_covers().remove(5).1;
    configs.push(("fan (pointwise) Z/4".into(), ok(random::normalized_cocycle(&mut rng, &pointwise(&cover), &FinAbGroup::cyclic(4)))?, None));
    let mut perturbations = 0;
    for (name, c, expected) in &configs {
        let base = ok(dd_class(c, &DDOptions::default()))?;
        if let Some(v) = expected {
            ensure!(base.verdict == *v, "{name}: verdict {:?}", base.verdict);
        }
        ensure!(base.is_consistent(c.group().exponent()), "{name}: inconsistent report");
        for _ in 0..50 {
            let b = ok(random::cochain(&mut rng, c.domain(), 1, c.group()))?;
            let c2 = ok(ok(c.add(&ok(b.coboundary())?))?.normalize())?.0;
            ensure!(ok(dd_class(&c2, &DDOptions::default()))?.same_classes(&base), "{name}: class moved under a coboundary");
            perturbations += 1;
        }
        for _ in 0..10 {
            let seed = rng.gen();
            let r = ok(dd_class(c, &DDOptions { characters: None, lift_seed: Some(seed) }))?;
            ensure!(r.same_classes(&base), "{name}: class depends on the lift");
        }
    }
    Ok(format!("{} configurations, {perturbations} perturbations, {} lifts", configs.len(), 10 * configs.len()))
}

// ---------------------------------------------------------------------------
// 6

fn rank_one_relations() -> Outcome {
    let mut rng = rng(6);
    let covers = models::small_covers();
    let groups = models::small_groups();
    let (mut checked, mut caught) = (0, 0);
    for k in 0..20 {
        let cover = Arc::new(covers[1 + k % (covers.len() - 1)].1.clone());
        let group = &groups[k % groups.len()];
        let c = ok(random::normalized_cocycle(&mut rng, &pointwise(&cover), group))?;
        let t = ok(Twist::new(cover.clone(), &c))?;
        let atoms = vec![0; cover.point_count()];
        for tau in 0..t.characters.len() {
            let nu = t.nu_row(tau);
            let r = ok(rank_one_relations_check(&t.gamma, &nu, &atoms))?;
            ensure!(r.passed(), "relation fails: {:?}", r.failures[0]);
            checked += r.checked;
        }
        // single-value corruption at a random entry over a point with at
        // least two sets
        let xs: Vec<usize> = (0..cover.point_count()).filter(|&x| cover.indices_at(x).len() > 1).collect();
        let x = xs[rng.gen_range(0..xs.len())];
        let ix = cover.indices_at(x);
        let pick = |r: &mut Rng64| ix[r.gen_range(0..ix.len())];
        let (i, j, kk) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let tau = rng.gen_range(0..t.characters.len());
        let mut nu = t.nu_row(tau);
        let old = nu.get(i, j, kk, x);
        ok(nu.set(i, j, kk, x, old.mul(RootOfUnity::new(1, 5))))?;
        let r = ok(rank_one_relations_check(&t.gamma, &nu, &atoms))?;
        ensure!(!r.passed(), "corruption of ν at {:?} went unnoticed", (i, j, kk, x));
        caught += 1;
    }
    Ok(format!("20 cocycles, {checked} relations exact, {caught} corruptions caught"))
}

// ---------------------------------------------------------------------------
// 7

/// The section offsets the canonical choice uses, plus a nerve 1-cochain.
fn offsets(input: &PipelineInput, c0: &CechCochain, b: &CechCochain) -> HashMap<(usize, usize, usize, usize), usize> {
    let g = c0.group();
    let ny = input.y_labels.len();
    let a: Vec<usize> = (0..ny).map(|y| (0..input.v_sets.len()).find(|&j| input.v_sets[j].contains(&y)).unwrap()).collect();
    let mut out = HashMap::new();
    for x in 0..ny {
        for y in 0..ny {
            if input.psi[x] != input.psi[y] {
                continue;
            }
            let w = input.psi[x];
            for &i in input.cover.indices_at(w) {
                for &j in input.cover.indices_at(w) {
                    let h = sub(g, &c0.get(&[i, j, a[y]], Some(w)), &c0.get(&[i, a[x], a[y]], Some(w)));
                    out.insert((i, x, y, j), g.index_of(&add(g, &h, &b.get(&[i, j], None))));
                }
            }
        }
    }
    out
}

fn pipeline() -> Outcome {
    let mut rng = rng(7);
    let cases = [
        ("moore", models::moore_z2(), FinAbGroup::cyclic(2)),
        ("moore", models::moore_z2(), FinAbGroup::cyclic(4)),
        ("projective plane", models::rp2(), FinAbGroup::cyclic(2)),
        ("sphere", models::tetrahedron_boundary(), FinAbGroup::cyclic(3)),
    ];
    let mut runs = 0;
    for (name, complex, group) in cases {
        let domain = nerve(complex.clone());
        let c0 = ok(random::cocycle(&mut rng, &domain, &group))?.add(&first_generator(&domain, &group)).unwrap();
        let c0 = ok(c0.normalize())?.0;
        let expected = ok(dd_class(&c0, &DDOptions::default()))?;
        let cover = Arc::new(Cover::from_complex(&complex));
        for sheets in [2, 3] {
            let (y_labels, psi, v_sets) = ok(sheeted_cover(&cover, sheets))?;
            let mut input = PipelineInput {
                y_labels,
                psi,
                cover: cover.clone(),
                v_sets,
                extension: ExtensionData::Pullback(c0.clone()),
                sections: Sections::Canonical,
                nerve: Some(domain.clone()),
            };
            let b = ok(random::cochain(&mut rng, &domain, 1, &group))?;
            let shifted = Sections::Offsets(offsets(&input, &c0, &b));
            for sections in [Sections::Canonical, shifted] {
                input.sections = sections;
                let r = ok(pipeline_local_homeo(&input, &DDOptions::default()))?;
                let cn = r.nerve_cocycle.as_ref().ok_or(format!("{name}/{sheets}: not constant on overlaps"))?;
                ensure!(
                    ok(ok(cn.sub(&c0))?.solve_coboundary())?.is_some(),
                    "{name}/{sheets}: recovered cocycle is not cohomologous to the input"
                );
                ensure!(r.report.same_classes(&expected) && r.report.verdict == expected.verdict, "{name}/{sheets}: report differs");
                let pw = ok(to_pointwise(&c0, &cover))?;
                ensure!(ok(ok(r.cocycle.sub(&pw))?.solve_coboundary())?.is_some(), "{name}/{sheets}: pointwise mismatch");
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} runs over 2- and 3-sheeted covers, classes recovered"))
}

// ---------------------------------------------------------------------------
// 8

fn pointwise_collapse() -> Outcome {
    let mut rng = rng(8);
    let mut count = 0;
    let mut check = |c: &CechCochain| -> Result<(), String> {
        ensure!(is_cocycle_oracle(c), "sample is not a cocycle");
        let b = ok(c.solve_coboundary())?.ok_or("pointwise cocycle not certified")?;
        for (t, x) in ok(c.domain().tuples(2))? {
            ensure!(coboundary_oracle(&b, &t, x) == c.get(&t, x), "δb ≠ c at {t:?}");
        }
        count += 1;
        Ok(())
    };
    for _ in 0..60 {
        let points = rng.gen_range(1..=8);
        let sets = rng.gen_range(1..=6);
        let cover = Arc::new(random::cover(&mut rng, points, sets, 4));
        let group = &models::small_groups()[rng.gen_range(0..4)];
        check(&ok(random::cocycle(&mut rng, &pointwise(&cover), group))?)?;
        let n = nerve(Nerve::from_cover(&cover));
        check(&ok(to_pointwise(&ok(random::cocycle(&mut rng, &n, group))?, &cover))?)?;
    }
    for (complex, group) in [
        (models::moore_z2(), FinAbGroup::cyclic(2)),
        (models::rp2(), FinAbGroup::cyclic(2)),
        (models::tetrahedron_boundary(), FinAbGroup::cyclic(4)),
    ] {
        let cover = Arc::new(Cover::from_complex(&complex));
        check(&ok(to_pointwise(&first_generator(&nerve(complex), &group), &cover))?)?;
    }
    Ok(format!("{count} pointwise cocycles certified, including nerve generators"))
}
