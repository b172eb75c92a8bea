//! Small named complexes used by tests, examples and the self-test.

use crate::cover::{Cover, Nerve};
use crate::groupoid::{ArrowSpec, FinGroupoid};

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|v| v.to_string()).collect()
}

fn build(vertices: Vec<String>, simplices: &[&[usize]]) -> Nerve {
    let maximal = simplices
        .iter()
        .map(|s| s.iter().map(|&v| vertices[v].clone()).collect())
        .collect();
    Nerve::from_maximal_simplices(vertices, maximal).expect("well-formed model complex")
}

/// Boundary of a triangle (a circle).
pub fn triangle_boundary() -> Nerve {
    build(labels(3), &[&[0, 1], &[1, 2], &[0, 2]])
}

/// Boundary of a tetrahedron (a 2-sphere).
pub fn tetrahedron_boundary() -> Nerve {
    build(labels(4), &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])
}

/// Six-vertex triangulation of the real projective plane.
pub fn rp2() -> Nerve {
    build(
        labels(6),
        &[
            &[0, 1, 2],
            &[0, 2, 3],
            &[0, 3, 4],
            &[0, 4, 5],
            &[0, 1, 5],
            &[1, 2, 4],
            &[2, 3, 5],
            &[1, 3, 4],
            &[2, 4, 5],
            &[1, 3, 5],
        ],
    )
}

/// Simplicial suspension: joins every maximal simplex with two new cone
/// points `N` and `S`.
pub fn suspension(base: &Nerve) -> Nerve {
    let mut vertices = base.vertex_labels().to_vec();
    vertices.push("N".into());
    vertices.push("S".into());
    let maximal = base
        .maximal_simplices()
        .into_iter()
        .flat_map(|s| {
            let names: Vec<String> = s.iter().map(|&v| base.vertex_label(v).to_string()).collect();
            ["N", "S"].map(|pole| {
                let mut t = names.clone();
                t.push(pole.to_string());
                t
            })
        })
        .collect();
    Nerve::from_maximal_simplices(vertices, maximal).expect("suspension of a valid complex")
}

/// The mod-2 Moore space `S^2 ∪_2 e^3`, as the suspension of [`rp2`]:
/// eight vertices, twenty tetrahedra.
pub fn moore_z2() -> Nerve {
    suspension(&rp2())
}

fn cover(points: &[&str], sets: &[(&str, &[&str])]) -> Cover {
    Cover::new(
        points.iter().map(|p| p.to_string()).collect(),
        sets.iter().map(|(l, m)| (l.to_string(), m.iter().map(|p| p.to_string()).collect())).collect(),
    )
    .expect("well-formed model cover")
}

/// `U1 = {a, b}`, `U2 = {b}`.
pub fn two_set_cover() -> Cover {
    cover(&["a", "b"], &[("U1", &["a", "b"]), ("U2", &["b"])])
}

/// A fixed family of covers with at most four points and four sets.
pub fn small_covers() -> Vec<(&'static str, Cover)> {
    vec![
        ("point", cover(&["a"], &[("U1", &["a"])])),
        ("two-set", two_set_cover()),
        ("nested", cover(&["a", "b", "c"], &[("U1", &["a", "b", "c"]), ("U2", &["b", "c"]), ("U3", &["c"])])),
        ("triangle", cover(&["a", "b", "c"], &[("U1", &["a", "b"]), ("U2", &["b", "c"]), ("U3", &["c", "a"])])),
        (
            "square",
            cover(
                &["a", "b", "c", "d"],
                &[("U1", &["a", "b"]), ("U2", &["b", "c"]), ("U3", &["c", "d"]), ("U4", &["d", "a"])],
            ),
        ),
        (
            "fan",
            cover(
                &["a", "b", "c", "d"],
                &[("U1", &["a", "b", "c", "d"]), ("U2", &["a", "b"]), ("U3", &["a", "c"]), ("U4", &["a", "d"])],
            ),
        ),
        ("stacked", cover(&["a", "b"], &[("U1", &["a", "b"]), ("U2", &["a", "b"]), ("U3", &["a", "b"]), ("U4", &["a", "b"])])),
        (
            "staircase",
            cover(&["a", "b", "c", "d"], &[("U1", &["a", "b", "c", "d"]), ("U2", &["b", "c", "d"]), ("U3", &["c", "d"])]),
        ),
    ]
}

/// The coefficient groups used by tests and the self-test.
pub fn small_groups() -> Vec<crate::group::FinAbGroup> {
    use crate::group::FinAbGroup;
    vec![
        FinAbGroup::cyclic(2),
        FinAbGroup::cyclic(3),
        FinAbGroup::cyclic(4),
        FinAbGroup::new(vec![2, 2]).expect("Z/2 x Z/2"),
    ]
}

/// The cyclic group `Z/n` as a groupoid with one unit.
pub fn cyclic_group(n: usize) -> FinGroupoid {
    assert!(n > 0);
    let arrows = (0..n).map(|k| ArrowSpec { label: format!("g{k}"), range: 0, source: 0 }).collect();
    FinGroupoid::build(vec!["*".into()], arrows, vec![0], |a| (n - a) % n, |a, b| (a + b) % n)
        .expect("cyclic group groupoid")
}

/// The pair groupoid `X × X` on `n` points.
pub fn pair_groupoid(n: usize) -> FinGroupoid {
    assert!(n > 0);
    let labels: Vec<String> = (0..n).map(|x| format!("p{x}")).collect();
    let arrows = (0..n * n)
        .map(|a| ArrowSpec { label: format!("({},{})", labels[a / n], labels[a % n]), range: a / n, source: a % n })
        .collect();
    FinGroupoid::build(labels, arrows, (0..n).map(|x| x * n + x).collect(), |a| (a % n) * n + a / n, |a, b| {
        (a / n) * n + b % n
    })
    .expect("pair groupoid")
}
