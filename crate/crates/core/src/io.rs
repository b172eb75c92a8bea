//! JSON documents. Every document carries `"schema_version": 1`.
//!
//! A problem document bundles whatever a command needs:
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "group": [2],
//!   "cover": {"points": ["a", "b"], "sets": {"U1": ["a", "b"], "U2": ["b"]}},
//!   "complex": {"vertices": ["0", "1"], "maximal_simplices": [["0", "1"]]},
//!   "cochain": {"degree": 2, "mode": "pointwise",
//!               "values": [{"tuple": ["U1", "U2", "U1"], "point": "b", "elem": [1]}]},
//!   "groupoid": {"units": ["u"], "arrows": [{"label": "g", "source": "u", "range": "u"}],
//!                "composition": [["g", "g", "u"]]},
//!   "cocycle": [{"pair": ["g", "g"], "elem": [1]}]
//! }
//! ```
//!
//! Every field other than `schema_version` is optional. A cochain with
//! `"alternating": true` lists values on strictly increasing tuples only and
//! is extended by sign. Identity arrows of a groupoid are implicit and carry
//! the unit's label. Pipeline inputs have their own document, see
//! [`parse_pipeline_input`].

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::cech::{CechCochain, Domain, Mode};
use crate::cover::{Cover, Nerve};
use crate::error::{malformed, Error, Result};
use crate::group::{FinAbGroup, GroupElem};
use crate::groupoid::{ArrowSpec, FinGroupoid, GroupoidCocycle};
use crate::pipeline::{sheeted_cover, ExtensionData, PipelineInput, Sections};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest accepted document, in bytes.
pub const MAX_INPUT_BYTES: usize = 64 << 20;
pub const MAX_POINTS: usize = 100_000;
pub const MAX_SETS: usize = 10_000;
pub const MAX_DEGREE: usize = 6;
/// Explicit groupoids are stored with a full composition table.
pub const MAX_ARROWS: usize = 2_000;
/// Bound on the total number of faces generated from maximal simplices.
pub const MAX_FACES: usize = 4_000_000;

#[derive(Debug, Deserialize, Serialize)]
pub struct CoverDoc {
    pub points: Vec<String>,
    pub sets: Map<String, Value>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct ComplexDoc {
    pub vertices: Vec<String>,
    pub maximal_simplices: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct EntryDoc {
    pub tuple: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    pub elem: Vec<i64>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct CochainDoc {
    pub degree: usize,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub alternating: bool,
    pub values: Vec<EntryDoc>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct ArrowDoc {
    pub label: String,
    pub source: String,
    pub range: String,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct GroupoidDoc {
    pub units: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    pub composition: Vec<[String; 3]>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct PairDoc {
    pub pair: [String; 2],
    pub elem: Vec<i64>,
}

#[derive(Debug, Deserialize)]
struct ProblemDoc {
    schema_version: Option<u32>,
    group: Option<Vec<u64>>,
    cover: Option<CoverDoc>,
    complex: Option<ComplexDoc>,
    cochain: Option<CochainDoc>,
    groupoid: Option<GroupoidDoc>,
    cocycle: Option<Vec<PairDoc>>,
}

/// A parsed problem document.
#[derive(Clone, Debug, Default)]
pub struct Problem {
    pub group: Option<FinAbGroup>,
    pub cover: Option<Arc<Cover>>,
    /// the complex, as a nerve-mode domain
    pub complex: Option<Arc<Domain>>,
    pub cochain: Option<CechCochain>,
    pub groupoid: Option<FinGroupoid>,
    pub groupoid_cocycle: Option<GroupoidCocycle>,
}

fn check_version(v: Option<u32>) -> Result<()> {
    match v {
        Some(SCHEMA_VERSION) => Ok(()),
        Some(v) => malformed(format!("unsupported schema_version {v}")),
        None => malformed("missing schema_version"),
    }
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    if text.len() > MAX_INPUT_BYTES {
        return Err(Error::TooLarge(format!("input exceeds {MAX_INPUT_BYTES} bytes")));
    }
    serde_json::from_str(text).map_err(|e| Error::Malformed(format!("invalid JSON: {e}")))
}

pub fn parse_group(orders: &[u64]) -> Result<FinAbGroup> {
    FinAbGroup::new(orders.to_vec())
}

pub fn build_cover(doc: &CoverDoc) -> Result<Cover> {
    if doc.points.len() > MAX_POINTS {
        return Err(Error::TooLarge(format!("more than {MAX_POINTS} points")));
    }
    if doc.sets.len() > MAX_SETS {
        return Err(Error::TooLarge(format!("more than {MAX_SETS} sets")));
    }
    let mut sets = Vec::with_capacity(doc.sets.len());
    for (label, members) in &doc.sets {
        let members: Vec<String> = serde_json::from_value(members.clone())
            .map_err(|_| Error::Malformed(format!("set {label:?} must be a list of point labels")))?;
        sets.push((label.clone(), members));
    }
    Cover::new(doc.points.clone(), sets)
}

pub fn build_complex(doc: &ComplexDoc) -> Result<Nerve> {
    if doc.vertices.len() > MAX_SETS {
        return Err(Error::TooLarge(format!("more than {MAX_SETS} vertices")));
    }
    let mut faces: usize = 0;
    for s in &doc.maximal_simplices {
        if s.len() > crate::cover::MAX_LOCAL_INDICES {
            return Err(Error::TooLarge(format!("simplex with {} vertices", s.len())));
        }
        faces = faces.saturating_add(1 << s.len());
    }
    if faces > MAX_FACES {
        return Err(Error::TooLarge(format!("complex would have more than {MAX_FACES} faces")));
    }
    Nerve::from_maximal_simplices(doc.vertices.clone(), doc.maximal_simplices.clone())
}

fn index_of(domain: &Domain, label: &str) -> Result<usize> {
    let found = match domain {
        Domain::Nerve(n) => n.vertex_position(label),
        Domain::Pointwise(c) => c.set_labels().iter().position(|l| l == label),
    };
    found.ok_or_else(|| Error::Malformed(format!("unknown index {label:?}")))
}

/// Builds a cochain on `domain` from its document.
pub fn build_cochain(doc: &CochainDoc, domain: Arc<Domain>, group: &FinAbGroup) -> Result<CechCochain> {
    if doc.degree > MAX_DEGREE {
        return Err(Error::TooLarge(format!("degree {} exceeds {MAX_DEGREE}", doc.degree)));
    }
    if doc.mode != domain.mode() {
        return Err(Error::Mismatch(format!("cochain mode {} does not match its domain", doc.mode)));
    }
    if doc.values.len() > crate::cech::MAX_TUPLES {
        return Err(Error::TooLarge("too many cochain values".into()));
    }
    let mut seen = std::collections::HashSet::new();
    let mut entries = Vec::with_capacity(doc.values.len());
    for e in &doc.values {
        if e.tuple.len() != doc.degree + 1 {
            return malformed(format!("tuple {:?} has the wrong length for degree {}", e.tuple, doc.degree));
        }
        let tuple = e.tuple.iter().map(|l| index_of(&domain, l)).collect::<Result<Vec<_>>>()?;
        let point = match (&e.point, domain.as_ref()) {
            (Some(p), Domain::Pointwise(c)) => Some(
                c.space()
                    .position(p)
                    .ok_or_else(|| Error::Malformed(format!("unknown point {p:?}")))?,
            ),
            (None, Domain::Nerve(_)) => None,
            (None, Domain::Pointwise(_)) => return malformed(format!("entry {:?} needs a point", e.tuple)),
            (Some(_), Domain::Nerve(_)) => return malformed(format!("nerve-mode entry {:?} has a point", e.tuple)),
        };
        if !seen.insert((tuple.clone(), point)) {
            return malformed(format!("duplicate entry {:?}", e.tuple));
        }
        if !domain.is_valid(&tuple, point) {
            return malformed(format!("entry {:?} is not in the domain", e.tuple));
        }
        entries.push(((tuple, point), group.elem(&e.elem)?));
    }
    if doc.alternating {
        let Domain::Nerve(n) = domain.as_ref() else {
            return malformed("alternating values are only meaningful in nerve mode");
        };
        let mut values = vec![group.zero(); n.simplices(doc.degree).len()];
        for ((t, _), g) in entries {
            if t.windows(2).any(|w| w[0] >= w[1]) {
                return malformed(format!("alternating entry {t:?} is not strictly increasing"));
            }
            let k = n.simplex_index(&t).ok_or_else(|| Error::Malformed("tuple is not a simplex".into()))?;
            values[k] = g;
        }
        return CechCochain::alternating(domain, doc.degree, group.clone(), &values);
    }
    CechCochain::from_entries(domain, doc.degree, group.clone(), entries)
}

/// Builds a groupoid with implicit identities: arrow `u` (for `u` below the
/// unit count) is the identity of unit `u`, explicit arrows follow.
pub fn build_groupoid(doc: &GroupoidDoc) -> Result<FinGroupoid> {
    let nu = doc.units.len();
    if nu == 0 {
        return malformed("a groupoid needs at least one unit");
    }
    if nu + doc.arrows.len() > MAX_ARROWS {
        return Err(Error::TooLarge(format!("more than {MAX_ARROWS} arrows")));
    }
    let mut by_label: HashMap<&str, usize> = HashMap::new();
    let mut units: HashMap<&str, usize> = HashMap::new();
    for (u, l) in doc.units.iter().enumerate() {
        if units.insert(l, u).is_some() {
            return malformed(format!("duplicate unit {l:?}"));
        }
        by_label.insert(l, u);
    }
    let mut arrows: Vec<ArrowSpec> =
        doc.units.iter().enumerate().map(|(u, l)| ArrowSpec { label: l.clone(), range: u, source: u }).collect();
    for a in &doc.arrows {
        let unit = |l: &str| units.get(l).copied().ok_or_else(|| Error::Malformed(format!("unknown unit {l:?}")));
        let (r, s) = (unit(&a.range)?, unit(&a.source)?);
        if by_label.insert(&a.label, arrows.len()).is_some() {
            return malformed(format!("duplicate arrow label {:?}", a.label));
        }
        arrows.push(ArrowSpec { label: a.label.clone(), range: r, source: s });
    }
    let arrow = |l: &str| by_label.get(l).copied().ok_or_else(|| Error::Malformed(format!("unknown arrow {l:?}")));
    let mut table = HashMap::new();
    for (a, spec) in arrows.iter().enumerate() {
        table.insert((spec.range, a), a);
        table.insert((a, spec.source), a);
    }
    for [a, b, ab] in &doc.composition {
        let key = (arrow(a)?, arrow(b)?);
        let v = arrow(ab)?;
        if let Some(prev) = table.insert(key, v) {
            if prev != v {
                return malformed(format!("conflicting products for ({a}, {b})"));
            }
        }
    }
    let g = FinGroupoid::from_table(doc.units.clone(), arrows, (0..nu).collect(), table)?;
    g.check_axioms().map_err(Error::Malformed)?;
    Ok(g)
}

pub fn build_groupoid_cocycle(doc: &[PairDoc], g: &FinGroupoid, group: &FinAbGroup) -> Result<GroupoidCocycle> {
    let labels: HashMap<&str, usize> = (0..g.arrow_count()).map(|a| (g.arrow_label(a), a)).collect();
    let arrow = |l: &str| labels.get(l).copied().ok_or_else(|| Error::Malformed(format!("unknown arrow {l:?}")));
    let mut phi = GroupoidCocycle::zero(group.clone());
    for e in doc {
        let (a, b) = (arrow(&e.pair[0])?, arrow(&e.pair[1])?);
        if g.compose(a, b).is_none() {
            return malformed(format!("pair ({}, {}) is not composable", e.pair[0], e.pair[1]));
        }
        phi.set(a, b, group.index_of(&group.elem(&e.elem)?));
    }
    Ok(phi)
}

/// Parses a problem document.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let doc: ProblemDoc = from_json(text)?;
    check_version(doc.schema_version)?;
    let group = doc.group.as_deref().map(parse_group).transpose()?;
    let cover = doc.cover.as_ref().map(build_cover).transpose()?.map(Arc::new);
    let complex = doc.complex.as_ref().map(build_complex).transpose()?.map(|n| Arc::new(Domain::Nerve(n)));
    let mut problem = Problem { group, cover, complex, ..Default::default() };
    if let Some(cd) = &doc.cochain {
        let group = match (&problem.group, &cd.group) {
            (Some(g), Some(o)) if g.cyclic_orders() != o.as_slice() => {
                return Err(Error::Mismatch("cochain group differs from the problem group".into()))
            }
            (Some(g), _) => g.clone(),
            (None, Some(o)) => parse_group(o)?,
            (None, None) => return malformed("a cochain needs a group"),
        };
        problem.group = Some(group.clone());
        let domain = match cd.mode {
            Mode::Pointwise => Arc::new(Domain::Pointwise(
                problem.cover.as_deref().cloned().ok_or_else(|| Error::Malformed("pointwise cochain needs a cover".into()))?,
            )),
            Mode::Nerve => match (&problem.complex, &problem.cover) {
                (Some(d), _) => d.clone(),
                (None, Some(c)) => Arc::new(Domain::Nerve(Nerve::from_cover(c))),
                (None, None) => return malformed("nerve-mode cochain needs a complex or a cover"),
            },
        };
        problem.cochain = Some(build_cochain(cd, domain, &group)?);
    }
    if let Some(gd) = &doc.groupoid {
        problem.groupoid = Some(build_groupoid(gd)?);
    }
    if let Some(pd) = &doc.cocycle {
        let group = problem.group.clone().ok_or_else(|| Error::Malformed("a cocycle needs a group".into()))?;
        let g = problem
            .groupoid
            .as_ref()
            .ok_or_else(|| Error::Malformed("a groupoid cocycle needs a groupoid".into()))?;
        problem.groupoid_cocycle = Some(build_groupoid_cocycle(pd, g, &group)?);
    }
    Ok(problem)
}

/// Parses a standalone cover document `{"schema_version", "points", "sets"}`.
pub fn parse_cover(text: &str) -> Result<Cover> {
    #[derive(Deserialize)]
    struct Doc {
        schema_version: Option<u32>,
        #[serde(flatten)]
        cover: CoverDoc,
    }
    let doc: Doc = from_json(text)?;
    check_version(doc.schema_version)?;
    build_cover(&doc.cover)
}

/// Parses a standalone complex document
/// `{"schema_version", "vertices", "maximal_simplices"}`.
pub fn parse_complex(text: &str) -> Result<Nerve> {
    #[derive(Deserialize)]
    struct Doc {
        schema_version: Option<u32>,
        #[serde(flatten)]
        complex: ComplexDoc,
    }
    let doc: Doc = from_json(text)?;
    check_version(doc.schema_version)?;
    build_complex(&doc.complex)
}

/// Parses a problem document that must contain a cochain.
pub fn parse_cochain(text: &str) -> Result<CechCochain> {
    parse_problem(text)?.cochain.ok_or_else(|| Error::Malformed("document has no cochain".into()))
}

/// Parses a problem document that must contain a groupoid.
pub fn parse_groupoid(text: &str) -> Result<FinGroupoid> {
    parse_problem(text)?.groupoid.ok_or_else(|| Error::Malformed("document has no groupoid".into()))
}

pub fn cover_doc(cover: &Cover) -> CoverDoc {
    let labels = cover.space().labels();
    let mut sets = Map::new();
    for i in 0..cover.set_count() {
        let members: Vec<Value> = cover.set(i).iter().map(|&x| Value::String(labels[x].clone())).collect();
        sets.insert(cover.set_label(i).to_string(), Value::Array(members));
    }
    CoverDoc { points: labels.to_vec(), sets }
}

pub fn complex_doc(nerve: &Nerve) -> ComplexDoc {
    ComplexDoc {
        vertices: nerve.vertex_labels().to_vec(),
        maximal_simplices: nerve
            .maximal_simplices()
            .into_iter()
            .map(|s| s.iter().map(|&v| nerve.vertex_label(v).to_string()).collect())
            .collect(),
    }
}

fn entry_doc(domain: &Domain, tuple: &[usize], point: Option<usize>, g: &GroupElem) -> EntryDoc {
    EntryDoc {
        tuple: tuple.iter().map(|&i| domain.index_label(i).to_string()).collect(),
        point: match (domain, point) {
            (Domain::Pointwise(c), Some(x)) => Some(c.space().label(x).to_string()),
            _ => None,
        },
        elem: g.0.iter().map(|&v| v as i64).collect(),
    }
}

/// The nonzero entries of a cochain.
pub fn cochain_doc(c: &CechCochain) -> CochainDoc {
    let domain = c.domain();
    CochainDoc {
        degree: c.degree(),
        mode: c.mode(),
        group: Some(c.group().cyclic_orders().to_vec()),
        alternating: false,
        values: c.entries().map(|((t, x), g)| entry_doc(domain, t, *x, g)).collect(),
    }
}

/// The nonzero values on strictly increasing tuples of a nerve-mode
/// cochain, to be read back with `"alternating": true`.
pub fn alternating_doc(c: &CechCochain) -> Result<CochainDoc> {
    let Domain::Nerve(n) = c.domain().as_ref() else {
        return malformed("alternating form needs nerve mode");
    };
    let values = n
        .simplices(c.degree())
        .iter()
        .filter_map(|s| {
            let g = c.get(s, None);
            (!c.group().is_zero(&g)).then(|| entry_doc(c.domain(), s, None, &g))
        })
        .collect();
    Ok(CochainDoc { degree: c.degree(), mode: Mode::Nerve, group: Some(c.group().cyclic_orders().to_vec()), alternating: true, values })
}

/// A full problem document for a cochain together with its domain.
pub fn problem_json(c: &CechCochain, alternating: bool) -> Result<Value> {
    let cochain = if alternating { alternating_doc(c)? } else { cochain_doc(c) };
    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "group": c.group().cyclic_orders(),
    });
    match c.domain().as_ref() {
        Domain::Nerve(n) => out["complex"] = serde_json::to_value(complex_doc(n)).expect("serializable"),
        Domain::Pointwise(cv) => out["cover"] = serde_json::to_value(cover_doc(cv)).expect("serializable"),
    }
    out["cochain"] = serde_json::to_value(cochain).expect("serializable");
    Ok(out)
}

/// Serializes an extension's total groupoid with its maps.
pub fn extension_json(e: &crate::extension::CentralExtension) -> Value {
    let t = &e.total;
    let arrows: Vec<Value> = (0..t.arrow_count())
        .map(|s| {
            json!({
                "label": t.arrow_label(s),
                "source": t.unit_label(t.source(s)),
                "range": t.unit_label(t.range(s)),
                "pi": e.base.arrow_label(e.pi(s)),
            })
        })
        .collect();
    let iota: Vec<Value> = (0..t.unit_count())
        .flat_map(|u| {
            (0..e.group.order()).map(move |g| {
                json!({"unit": t.unit_label(u), "elem": e.group.elem_at(g).0, "arrow": t.arrow_label(e.iota(u, g))})
            })
        })
        .collect();
    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "group": e.group.cyclic_orders(),
        "units": t.unit_labels(),
        "arrows": arrows,
        "iota": iota,
    });
    if let Some(sec) = e.section() {
        let m: Map<String, Value> = sec
            .iter()
            .enumerate()
            .map(|(a, &s)| (e.base.arrow_label(a).to_string(), Value::String(t.arrow_label(s).to_string())))
            .collect();
        out["section"] = Value::Object(m);
    }
    out
}

#[derive(Debug, Deserialize)]
struct PipelineDoc {
    schema_version: Option<u32>,
    group: Vec<u64>,
    cover: CoverDoc,
    #[serde(default)]
    complex: Option<ComplexDoc>,
    #[serde(default)]
    sheets: Option<usize>,
    #[serde(default)]
    y_points: Option<Vec<String>>,
    #[serde(default)]
    psi: Option<BTreeMap<String, String>>,
    #[serde(default)]
    v_sets: Option<Map<String, Value>>,
    extension: ExtensionDoc,
    #[serde(default)]
    sections: Option<SectionsDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ExtensionDoc {
    Trivial,
    Pullback { cochain: CochainDoc },
    Cocycle { values: Vec<RelPairDoc> },
}

#[derive(Debug, Deserialize)]
struct RelPairDoc {
    pair: [[String; 2]; 2],
    elem: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SectionsDoc {
    Canonical,
    Offsets { offsets: Vec<OffsetDoc> },
}

#[derive(Debug, Deserialize)]
struct OffsetDoc {
    sets: [String; 2],
    pair: [String; 2],
    elem: Vec<i64>,
}

/// Parses a pipeline document:
///
/// ```json
/// {
///   "schema_version": 1,
///   "group": [2],
///   "cover": {"points": [...], "sets": {...}},
///   "complex": {...},
///   "y_points": ["a#0", ...], "psi": {"a#0": "a", ...},
///   "v_sets": {"U1": ["a#0", ...], ...},
///   "extension": {"kind": "pullback", "cochain": {...}},
///   "sections": {"kind": "canonical"}
/// }
/// ```
///
/// `cover` is the cover `{W_j}` of `X`. Instead of `y_points`, `psi` and
/// `v_sets` a document may give `"sheets": n` for the `n`-sheeted cover
/// built by [`sheeted_cover`]. `extension.kind` is `trivial`, `pullback`
/// (with a 2-cochain on the cover or complex) or `cocycle` (values on pairs
/// of composable arrows `[[y1,y2],[y2,y3]]` of `R(ψ)`). `sections` defaults
/// to `canonical`; `offsets` lists `{"sets": [Ui, Uj], "pair": [x, y],
/// "elem": [...]}`. `complex`, when present, is where the class is computed.
pub fn parse_pipeline_input(text: &str) -> Result<PipelineInput> {
    let doc: PipelineDoc = from_json(text)?;
    check_version(doc.schema_version)?;
    let group = parse_group(&doc.group)?;
    let cover = Arc::new(build_cover(&doc.cover)?);
    let nerve = doc.complex.as_ref().map(build_complex).transpose()?.map(|n| Arc::new(Domain::Nerve(n)));
    let (y_labels, psi, v_sets) = match (doc.sheets, &doc.y_points, &doc.psi, &doc.v_sets) {
        (Some(n), None, None, None) => {
            if n == 0 || n.saturating_mul(cover.point_count()) > MAX_POINTS {
                return Err(Error::TooLarge(format!("{n} sheets")));
            }
            sheeted_cover(&cover, n)?
        }
        (None, Some(ys), Some(psi), Some(vs)) => {
            if ys.len() > MAX_POINTS {
                return Err(Error::TooLarge(format!("more than {MAX_POINTS} points")));
            }
            let ypos: HashMap<&str, usize> = ys.iter().enumerate().map(|(k, l)| (l.as_str(), k)).collect();
            if ypos.len() != ys.len() {
                return malformed("duplicate point in y_points");
            }
            let mut map = vec![usize::MAX; ys.len()];
            for (y, x) in psi {
                let k = *ypos.get(y.as_str()).ok_or_else(|| Error::Malformed(format!("psi: unknown point {y:?}")))?;
                map[k] = cover
                    .space()
                    .position(x)
                    .ok_or_else(|| Error::Malformed(format!("psi: unknown base point {x:?}")))?;
            }
            if let Some(k) = map.iter().position(|&v| v == usize::MAX) {
                return malformed(format!("psi is not defined at {:?}", ys[k]));
            }
            let mut sets = vec![Vec::new(); cover.set_count()];
            for (label, members) in vs {
                let j = cover
                    .set_labels()
                    .iter()
                    .position(|l| l == label)
                    .ok_or_else(|| Error::Malformed(format!("v_sets: unknown set {label:?}")))?;
                let members: Vec<String> = serde_json::from_value(members.clone())
                    .map_err(|_| Error::Malformed(format!("v_sets: {label:?} must list points")))?;
                for m in members {
                    sets[j].push(*ypos.get(m.as_str()).ok_or_else(|| Error::Malformed(format!("v_sets: unknown point {m:?}")))?);
                }
            }
            (ys.clone(), map, sets)
        }
        _ => return malformed("give either \"sheets\" or all of \"y_points\", \"psi\" and \"v_sets\""),
    };
    let ylabel: HashMap<&str, usize> = y_labels.iter().enumerate().map(|(k, l)| (l.as_str(), k)).collect();
    let ypos = |l: &str| ylabel.get(l).copied().ok_or_else(|| Error::Malformed(format!("unknown point {l:?}")));
    let extension = match &doc.extension {
        ExtensionDoc::Trivial => ExtensionData::Trivial(group),
        ExtensionDoc::Pullback { cochain } => {
            let domain = match cochain.mode {
                Mode::Pointwise => Arc::new(Domain::Pointwise((*cover).clone())),
                Mode::Nerve => nerve.clone().unwrap_or_else(|| Arc::new(Domain::Nerve(Nerve::from_cover(&cover)))),
            };
            ExtensionData::Pullback(build_cochain(cochain, domain, &group)?)
        }
        ExtensionDoc::Cocycle { values } => {
            if y_labels.len().saturating_mul(y_labels.len()) > MAX_POINTS {
                return Err(Error::TooLarge("relation groupoid too large for an explicit cocycle".into()));
            }
            let rel = crate::groupoid::RelationGroupoid::new(y_labels.clone(), &psi, cover.point_count())?;
            let mut phi = GroupoidCocycle::zero(group.clone());
            for v in values {
                let e = rel
                    .arrow(ypos(&v.pair[0][0])?, ypos(&v.pair[0][1])?)
                    .ok_or_else(|| Error::Malformed("cocycle pair is not an arrow of R(psi)".into()))?;
                let f = rel
                    .arrow(ypos(&v.pair[1][0])?, ypos(&v.pair[1][1])?)
                    .ok_or_else(|| Error::Malformed("cocycle pair is not an arrow of R(psi)".into()))?;
                if rel.groupoid.compose(e, f).is_none() {
                    return malformed("cocycle pair is not composable");
                }
                phi.set(e, f, group.index_of(&group.elem(&v.elem)?));
            }
            ExtensionData::Cocycle(phi)
        }
    };
    let sections = match doc.sections {
        None | Some(SectionsDoc::Canonical) => Sections::Canonical,
        Some(SectionsDoc::Offsets { offsets }) => {
            let g = match &extension {
                ExtensionData::Trivial(g) => g.clone(),
                ExtensionData::Cocycle(p) => p.group().clone(),
                ExtensionData::Pullback(c) => c.group().clone(),
            };
            let set = |l: &str| {
                cover
                    .set_labels()
                    .iter()
                    .position(|s| s == l)
                    .ok_or_else(|| Error::Malformed(format!("unknown set {l:?}")))
            };
            let mut map = HashMap::new();
            for o in offsets {
                let key = (set(&o.sets[0])?, ypos(&o.pair[0])?, ypos(&o.pair[1])?, set(&o.sets[1])?);
                map.insert(key, g.index_of(&g.elem(&o.elem)?));
            }
            Sections::Offsets(map)
        }
    };
    Ok(PipelineInput { y_labels, psi, cover, v_sets, extension, sections, nerve })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cover_roundtrip_keeps_label_order() {
        let text = r#"{"schema_version":1,"points":["b","a"],"sets":{"V":["a"],"U":["a","b"]}}"#;
        let c = parse_cover(text).unwrap();
        assert_eq!(c.set_labels(), &["V".to_string(), "U".to_string()]);
        let back = serde_json::to_string(&cover_doc(&c)).unwrap();
        assert_eq!(back, r#"{"points":["b","a"],"sets":{"V":["a"],"U":["b","a"]}}"#);
    }

    #[test]
    fn missing_version_is_rejected() {
        assert!(parse_cover(r#"{"points":["a"],"sets":{"U":["a"]}}"#).is_err());
        assert!(parse_cover(r#"{"schema_version":2,"points":["a"],"sets":{"U":["a"]}}"#).is_err());
    }

    #[test]
    fn cochain_problem_roundtrip() {
        let nerve = crate::models::rp2();
        let domain = Arc::new(Domain::Nerve(nerve));
        let mut rng = crate::random::rng(5);
        let c = crate::random::normalized_cocycle(&mut rng, &domain, &FinAbGroup::cyclic(2)).unwrap();
        let text = problem_json(&c, false).unwrap().to_string();
        let back = parse_cochain(&text).unwrap();
        assert_eq!(back.entries().collect::<Vec<_>>(), c.entries().collect::<Vec<_>>());
    }

    #[test]
    fn groupoid_with_implicit_identities() {
        let text = r#"{"schema_version":1,"groupoid":{"units":["u","v"],
            "arrows":[{"label":"f","source":"u","range":"v"},{"label":"g","source":"v","range":"u"}],
            "composition":[["f","g","v"],["g","f","u"]]}}"#;
        let g = parse_groupoid(text).unwrap();
        assert_eq!(g.arrow_count(), 4);
        assert!(g.is_principal());
    }

    #[test]
    fn garbage_is_an_error() {
        for t in ["", "{", "[]", "null", r#"{"schema_version":1,"cochain":{"degree":99,"mode":"nerve","values":[]}}"#] {
            assert!(parse_problem(t).is_err());
        }
    }
}
