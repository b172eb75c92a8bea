//! From an extension of the relation groupoid of a local homeomorphism to
//! a Čech cocycle on the base and its class.
//!
//! Given `ψ: Y → X`, a cover `{W_j}` of `X` and sets `V_j ⊆ Y` on which `ψ`
//! is a bijection onto `W_j`, the blow-up `R'` of `R(ψ)` by `{V_j}` is
//! isomorphic to `Γ_𝒲` via `(i,(x,y),j) ↦ (i,ψ(x),j)`. A section of the
//! extension over `R'` gives a cocycle `φ`, and
//! `c_ijk(w) = φ((i,w,j),(j,w,k))` after transport.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::cech::{CechCochain, Domain};
use crate::cover::{Cover, Nerve};
use crate::dd::{dd_class, DDOptions, DDReport};
use crate::error::{precondition, Error, Result};
use crate::extension::{blowup_extension, build_extension, CentralExtension};
use crate::group::FinAbGroup;
use crate::groupoid::{check_cochain_on_cover, GroupoidCocycle, RelationGroupoid};

/// How the extension of `R(ψ)` is given.
#[derive(Clone, Debug)]
pub enum ExtensionData {
    /// `G × R(ψ)`
    Trivial(FinAbGroup),
    /// `𝔈(R(ψ), φ)` for a normalized cocycle on the arrows of
    /// [`RelationGroupoid`]
    Cocycle(GroupoidCocycle),
    /// the pullback of a normalized Čech 2-cocycle `c₀` on `{W_j}`:
    /// `φ((x,y),(y,z)) = c₀_{a(x) a(y) a(z)}(ψ(x))` with
    /// `a(y) = min{j : y ∈ V_j}`
    Pullback(CechCochain),
}

/// Sections `κ_ij` over `V_i × V_j`, as group offsets from the canonical
/// section `(x,y) ↦ (0,(x,y))`.
#[derive(Clone, Debug)]
pub enum Sections {
    /// zero offsets, except for [`ExtensionData::Pullback`], where the
    /// offsets `h_ij(x,y) = c₀_{i j a(y)} - c₀_{i a(x) a(y)}` make the
    /// recovered cocycle equal to `c₀`
    Canonical,
    /// `(i, x, y, j) ↦ offset index`; missing entries are 0
    Offsets(HashMap<(usize, usize, usize, usize), usize>),
}

#[derive(Clone, Debug)]
pub struct PipelineInput {
    pub y_labels: Vec<String>,
    /// `ψ(y)` as a point index of the cover's space
    pub psi: Vec<usize>,
    pub cover: Arc<Cover>,
    /// `V_j ⊆ Y`, one per set of the cover
    pub v_sets: Vec<Vec<usize>>,
    pub extension: ExtensionData,
    pub sections: Sections,
    /// where to compute the class; defaults to the nerve of the cover
    pub nerve: Option<Arc<Domain>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineResult {
    /// the recovered cocycle, pointwise on the cover
    #[serde(skip)]
    pub cocycle: CechCochain,
    /// the same cocycle in nerve mode, when its values are constant on
    /// overlaps
    #[serde(skip)]
    pub nerve_cocycle: Option<CechCochain>,
    pub overlap_constant: bool,
    pub report: DDReport,
}

fn validate(input: &PipelineInput) -> Result<RelationGroupoid> {
    let cover = &input.cover;
    let x_count = cover.point_count();
    if input.psi.len() != input.y_labels.len() {
        return Err(Error::Malformed("psi needs one value per point of Y".into()));
    }
    let rel = RelationGroupoid::new(input.y_labels.clone(), &input.psi, x_count)?;
    if input.v_sets.len() != cover.set_count() {
        return Err(Error::Malformed("one V set per cover set required".into()));
    }
    for (j, v) in input.v_sets.iter().enumerate() {
        let mut image: Vec<usize> = Vec::with_capacity(v.len());
        for &y in v {
            if y >= input.y_labels.len() {
                return Err(Error::Malformed(format!("V_{} mentions an unknown point", cover.set_label(j))));
            }
            image.push(input.psi[y]);
        }
        image.sort_unstable();
        if image.windows(2).any(|w| w[0] == w[1]) {
            return precondition(format!("psi is not injective on V_{}", cover.set_label(j)));
        }
        if image != cover.set(j) {
            return precondition(format!("psi does not map V_{} onto W_{}", cover.set_label(j), cover.set_label(j)));
        }
    }
    Ok(rel)
}

/// `ψ|V_j⁻¹(w)`.
fn lift_table(input: &PipelineInput) -> HashMap<(usize, usize), usize> {
    let mut out = HashMap::new();
    for (j, v) in input.v_sets.iter().enumerate() {
        for &y in v {
            out.insert((j, input.psi[y]), y);
        }
    }
    out
}

fn pullback_cocycle(input: &PipelineInput, rel: &RelationGroupoid, c0: &CechCochain) -> Result<GroupoidCocycle> {
    check_cochain_on_cover(c0, &input.cover)?;
    if c0.degree() != 2 || !c0.is_normalized() || !c0.is_cocycle()? {
        return precondition("the pulled-back cochain must be a normalized 2-cocycle");
    }
    let a = labels_a(input)?;
    let grp = c0.group().clone();
    let mut phi = GroupoidCocycle::zero(grp.clone());
    let g = &rel.groupoid;
    for (e, f) in g.composable_pairs() {
        let (x, y) = rel.pairs[e];
        let (_, z) = rel.pairs[f];
        let v = c0.get(&[a[x], a[y], a[z]], Some(input.psi[x]));
        phi.set(e, f, grp.index_of(&v));
    }
    Ok(phi)
}

/// `a(y) = min{j : y ∈ V_j}`.
fn labels_a(input: &PipelineInput) -> Result<Vec<usize>> {
    let mut a = vec![usize::MAX; input.y_labels.len()];
    for (j, v) in input.v_sets.iter().enumerate() {
        for &y in v {
            a[y] = a[y].min(j);
        }
    }
    if let Some(y) = a.iter().position(|&v| v == usize::MAX) {
        return precondition(format!("point {} of Y lies in no V set", input.y_labels[y]));
    }
    Ok(a)
}

/// Runs the whole construction and returns the recovered cocycle together
/// with its class.
pub fn pipeline_local_homeo(input: &PipelineInput, opts: &DDOptions) -> Result<PipelineResult> {
    let rel = validate(input)?;
    let cover = &input.cover;
    let (ext, phi0): (CentralExtension, Option<&CechCochain>) = match &input.extension {
        ExtensionData::Trivial(g) => (build_extension(&rel.groupoid, &GroupoidCocycle::zero(g.clone()))?, None),
        ExtensionData::Cocycle(phi) => {
            if let Some((a, b, c)) = phi.cocycle_failure(&rel.groupoid) {
                return precondition(format!("extension cocycle fails at arrows ({a}, {b}, {c})"));
            }
            (build_extension(&rel.groupoid, phi)?, None)
        }
        ExtensionData::Pullback(c0) => (build_extension(&rel.groupoid, &pullback_cocycle(input, &rel, c0)?)?, Some(c0)),
    };
    let grp = ext.group.clone();
    let n = grp.order();
    let labels = cover.set_labels().to_vec();
    let (bext, _bt, bb) = blowup_extension(&ext, &labels, &input.v_sets)?;
    let a = phi0.map(|_| labels_a(input)).transpose()?;

    // κ'(i,(x,y),j) = (i, ι(x, h_ij(x,y)) (0,(x,y)), j) in the blown-up total
    let canonical = bext.section().expect("built extensions carry a section").to_vec();
    let mut kappa = Vec::with_capacity(bb.triples.len());
    for (arrow, &(i, e, j)) in bb.triples.iter().enumerate() {
        let (x, y) = rel.pairs[e];
        let h = match (&input.sections, phi0, &a) {
            (Sections::Offsets(map), _, _) => map.get(&(i, x, y, j)).copied().unwrap_or(0),
            (Sections::Canonical, Some(c0), Some(a)) => {
                let w = Some(input.psi[x]);
                let v1 = c0.get(&[i, j, a[y]], w);
                let v2 = c0.get(&[i, a[x], a[y]], w);
                grp.index_of(&grp.sub_unchecked(&v1, &v2))
            }
            _ => 0,
        };
        if h >= n {
            return Err(Error::Malformed(format!("section offset {h} is not a group element index")));
        }
        let base_unit = bb.groupoid.range(arrow);
        let lifted = bext.total.compose(bext.iota(base_unit, h), canonical[arrow]).expect("composable");
        kappa.push(lifted);
    }
    let phi = bext.extract_cocycle(&kappa)?;

    // transport to Γ_𝒲 and read off c
    let lift = lift_table(input);
    let domain = Arc::new(Domain::Pointwise((**cover).clone()));
    let mut c = CechCochain::zero(domain, 2, grp.clone());
    for w in 0..cover.point_count() {
        let ix = cover.indices_at(w);
        for &i in ix {
            for &j in ix {
                for &k in ix {
                    let (x, y, z) = (lift[&(i, w)], lift[&(j, w)], lift[&(k, w)]);
                    let e1 = bb.arrow(i, rel.arrow(x, y).expect("same fibre"), j).expect("arrow of R'");
                    let e2 = bb.arrow(j, rel.arrow(y, z).expect("same fibre"), k).expect("arrow of R'");
                    c.set(&[i, j, k], Some(w), grp.elem_at(phi.get(e1, e2)))?;
                }
            }
        }
    }
    let c = if c.is_normalized() { c } else { c.normalize()?.0 };

    let nerve_domain = match &input.nerve {
        Some(d) => d.clone(),
        None => Arc::new(Domain::Nerve(Nerve::from_cover(cover))),
    };
    let nerve_cocycle = to_nerve(&c, cover, &nerve_domain)?;
    let report = match &nerve_cocycle {
        Some(cn) => dd_class(cn, opts)?,
        None => dd_class(&c, opts)?,
    };
    Ok(PipelineResult { overlap_constant: nerve_cocycle.is_some(), cocycle: c, nerve_cocycle, report })
}

/// The nerve-mode cochain with the same values, if `c`'s values on each
/// tuple do not depend on the point.
pub fn to_nerve(c: &CechCochain, cover: &Cover, nerve: &Arc<Domain>) -> Result<Option<CechCochain>> {
    let Domain::Nerve(n) = nerve.as_ref() else {
        return precondition("a nerve domain is required");
    };
    if n.vertex_count() != cover.set_count() {
        return Err(Error::Mismatch("nerve and cover have different index sets".into()));
    }
    let mut out = CechCochain::zero(nerve.clone(), c.degree(), c.group().clone());
    let mut seen: HashMap<Vec<usize>, crate::group::GroupElem> = HashMap::new();
    for x in 0..cover.point_count() {
        let ix = cover.indices_at(x);
        if !n.spans_simplex(ix) {
            return Err(Error::Mismatch("cover has an overlap that is not a simplex of the nerve".into()));
        }
        let mut t = vec![0; c.degree() + 1];
        let count = ix.len().pow(t.len() as u32);
        for code in 0..count {
            let mut r = code;
            for slot in t.iter_mut().rev() {
                *slot = ix[r % ix.len()];
                r /= ix.len();
            }
            let v = c.get(&t, Some(x));
            match seen.get(&t) {
                Some(prev) if *prev != v => return Ok(None),
                Some(_) => {}
                None => {
                    seen.insert(t.clone(), v.clone());
                    out.set(&t, None, v)?;
                }
            }
        }
    }
    Ok(Some(out))
}

/// A nerve-mode or pointwise cochain evaluated at the points of `cover`,
/// as a pointwise cochain.
pub fn to_pointwise(c: &CechCochain, cover: &Arc<Cover>) -> Result<CechCochain> {
    check_cochain_on_cover(c, cover)?;
    let domain = Arc::new(Domain::Pointwise((**cover).clone()));
    let entries = domain
        .tuples(c.degree())?
        .into_iter()
        .map(|(t, x)| {
            let v = c.get(&t, x);
            ((t, x), v)
        })
        .collect::<Vec<_>>();
    CechCochain::from_entries(domain, c.degree(), c.group().clone(), entries)
}

/// The `n`-sheeted cover `Y = X × {0..n-1}` of the points of `cover`, with
/// `V_j = {(w, s_j(w))}` where `s_j(w)` is the position of `j` in `I(w)`
/// modulo `n`. Every sheet meets some `V_j` when `|I(w)| ≥ n`.
pub fn sheeted_cover(cover: &Cover, sheets: usize) -> Result<(Vec<String>, Vec<usize>, Vec<Vec<usize>>)> {
    if sheets == 0 {
        return precondition("at least one sheet is required");
    }
    let xn = cover.point_count();
    let mut y_labels = Vec::with_capacity(xn * sheets);
    let mut psi = Vec::with_capacity(xn * sheets);
    for s in 0..sheets {
        for w in 0..xn {
            y_labels.push(format!("{}#{s}", cover.space().label(w)));
            psi.push(w);
        }
    }
    let mut v_sets = vec![Vec::new(); cover.set_count()];
    for w in 0..xn {
        for (pos, &j) in cover.indices_at(w).iter().enumerate() {
            v_sets[j].push((pos % sheets) * xn + w);
        }
    }
    Ok((y_labels, psi, v_sets))
}
