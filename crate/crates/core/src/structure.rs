//! The star graph of a maximal family at a point `x`.
//!
//! Every triangle `{x,a,b}` contributes the edge `{a,b}`. In a maximal
//! family the vertices of degree at least two form a triangulated polygon
//! `x+1 = v_1, ..., v_r = x-1` in `<_x` order, and every other vertex is a
//! leaf hanging off one of them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{greedy_complete, Family};
use crate::ground::{GroundSet, Triangle};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarGraph {
    x: usize,
    ground: GroundSet,
    adjacency: BTreeMap<usize, BTreeSet<usize>>,
    /// Degree ≥ 2, sorted by `<_x`.
    triangulation_points: Vec<usize>,
    /// Degree-1 vertex → its neighbour.
    leaves: BTreeMap<usize, usize>,
}

impl StarGraph {
    /// A graph on `[n] \ {x}` given by its edges. Nothing beyond basic
    /// well-formedness is checked; see [`verify_structure_theorem`] and
    /// [`check_converse_conditions`].
    pub fn from_edges(
        ground: GroundSet,
        x: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<StarGraph> {
        ground.check_point(x)?;
        let mut adjacency: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (a, b) in edges {
            ground.check_point(a)?;
            ground.check_point(b)?;
            if a == x || b == x {
                return Err(Error::invalid(format!("edge {{{a},{b}}} touches x = {x}")));
            }
            if a == b {
                return Err(Error::invalid(format!("loop at {a}")));
            }
            adjacency.entry(a).or_default().insert(b);
            adjacency.entry(b).or_default().insert(a);
        }
        Ok(StarGraph::classify(ground, x, adjacency))
    }

    pub(crate) fn of_family(family: &Family, x: usize) -> StarGraph {
        let mut adjacency: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for t in family.iter() {
            if let Some((a, b)) = t.others(x) {
                adjacency.entry(a).or_default().insert(b);
                adjacency.entry(b).or_default().insert(a);
            }
        }
        StarGraph::classify(family.ground(), x, adjacency)
    }

    fn classify(
        ground: GroundSet,
        x: usize,
        adjacency: BTreeMap<usize, BTreeSet<usize>>,
    ) -> StarGraph {
        let mut triangulation_points: Vec<usize> = adjacency
            .iter()
            .filter(|(_, nb)| nb.len() >= 2)
            .map(|(v, _)| *v)
            .collect();
        triangulation_points.sort_by_key(|&p| ground.rank_from(x, p));
        let leaves = adjacency
            .iter()
            .filter(|(_, nb)| nb.len() == 1)
            .map(|(v, nb)| (*v, *nb.iter().next().unwrap()))
            .collect();
        StarGraph {
            x,
            ground,
            adjacency,
            triangulation_points,
            leaves,
        }
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.adjacency.contains_key(&v)
    }

    /// Each edge once, as `(min, max)`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .flat_map(|(&a, nb)| nb.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(|nb| nb.len()).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency.get(&a).is_some_and(|nb| nb.contains(&b))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency.get(&v).map_or(0, |nb| nb.len())
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.get(&v).into_iter().flatten().copied()
    }

    pub fn triangulation_points(&self) -> &[usize] {
        &self.triangulation_points
    }

    pub fn leaves(&self) -> &BTreeMap<usize, usize> {
        &self.leaves
    }

    pub fn is_triangulation_point(&self, p: usize) -> bool {
        self.degree(p) >= 2
    }

    /// The vertex a leaf hangs off.
    pub fn attachment(&self, leaf: usize) -> Option<usize> {
        self.leaves.get(&leaf).copied()
    }

    fn position(&self, p: usize) -> Option<usize> {
        self.triangulation_points.iter().position(|&v| v == p)
    }

    /// The triangulation point before `p`, wrapping from `v_1` to `v_r`.
    pub fn prev_point(&self, p: usize) -> usize {
        let tp = &self.triangulation_points;
        let i = self.position(p).expect("p is a triangulation point");
        tp[(i + tp.len() - 1) % tp.len()]
    }

    /// The triangulation point after `p`, wrapping from `v_r` to `v_1`.
    pub fn next_point(&self, p: usize) -> usize {
        let tp = &self.triangulation_points;
        let i = self.position(p).expect("p is a triangulation point");
        tp[(i + 1) % tp.len()]
    }

    /// Leaves attached to `p`, sorted by `<_x`.
    pub fn leaves_of(&self, p: usize) -> Vec<usize> {
        let mut ls: Vec<usize> = self
            .leaves
            .iter()
            .filter(|(_, &a)| a == p)
            .map(|(&l, _)| l)
            .collect();
        ls.sort_by_key(|&l| self.ground.rank_from(self.x, l));
        ls
    }

    /// `P_0, ..., P_{s+1}`: previous triangulation point, the leaves of `p`,
    /// next triangulation point.
    pub fn incident_sequence(&self, p: usize) -> Vec<usize> {
        let mut seq = vec![self.prev_point(p)];
        seq.extend(self.leaves_of(p));
        seq.push(self.next_point(p));
        seq
    }

    /// `{B, P_j, P_{j+1}}` for every triangulation point `B`, in order,
    /// without the first one at `v_1` and the last one at `v_r`.
    pub fn border_triangles(&self) -> Vec<Triangle> {
        let tp = &self.triangulation_points;
        let r = tp.len();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        if r < 2 {
            return out;
        }
        for (i, &b) in tp.iter().enumerate() {
            let seq = self.incident_sequence(b);
            for j in 0..seq.len() - 1 {
                if (i == 0 && j == 0) || (i == r - 1 && j == seq.len() - 2) {
                    continue;
                }
                let (p, q) = (seq[j], seq[j + 1]);
                if p == q || p == b || q == b {
                    continue;
                }
                let t = Triangle::sorted(b, p, q);
                if seen.insert(t) {
                    out.push(t);
                }
            }
        }
        out
    }

    pub fn to_file(&self) -> StarGraphFile {
        StarGraphFile {
            schema_version: Some(SCHEMA_VERSION),
            x: self.x,
            n: self.ground.n(),
            edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        crate::to_json_lines(&self.to_file())
    }

    pub fn from_json(text: &str) -> Result<StarGraph> {
        let file: StarGraphFile = serde_json::from_str(text)
            .map_err(|e| Error::Format(format!("star graph file: {e}")))?;
        file.into_graph()
    }
}

/// On-disk star graph: `{"x": 1, "n": 8, "edges": [[2,3], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarGraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    pub x: usize,
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl StarGraphFile {
    pub fn into_graph(self) -> Result<StarGraph> {
        let ground = GroundSet::new(self.n).map_err(|e| Error::Format(e.to_string()))?;
        StarGraph::from_edges(ground, self.x, self.edges.into_iter().map(|[a, b]| (a, b)))
            .map_err(|e| Error::Format(e.to_string()))
    }
}

/// The star graph of a maximal family at `x`.
pub fn build_star_graph(family: &Family, x: usize) -> Result<StarGraph> {
    family.ground().check_point(x)?;
    family.require_maximal()?;
    Ok(StarGraph::of_family(family, x))
}

/// Border triangles of the star graph at `x`, each checked to lie in the
/// family.
pub fn border_triangles(family: &Family, x: usize) -> Result<Vec<Triangle>> {
    let g = build_star_graph(family, x)?;
    let ts = g.border_triangles();
    if let Some(missing) = ts.iter().find(|t| !family.contains(t)) {
        return Err(Error::internal(format!(
            "border triangle {missing} at x = {x} is not in the family"
        )));
    }
    Ok(ts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `v_1 = x+1` and `v_r = x-1`.
    Endpoints,
    /// `x+2` and `x-2` are vertices.
    FrozenVertices,
    /// The triangulation points span a triangulated polygon.
    Triangulation,
    /// Every other vertex has degree 1 and hangs off a triangulation point.
    LeafDegree,
    /// Each leaf sits between the neighbours of its triangulation point.
    LeafLocation,
}

impl Rule {
    pub fn id(&self) -> &'static str {
        match self {
            Rule::Endpoints => "endpoints",
            Rule::FrozenVertices => "frozen-vertices",
            Rule::Triangulation => "triangulation",
            Rule::LeafDegree => "leaf-degree",
            Rule::LeafLocation => "leaf-location",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub violations: Vec<Violation>,
}

impl StructureReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, rule: Rule, witness: impl Into<String>) {
        self.violations.push(Violation {
            rule,
            witness: witness.into(),
        });
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "structure: ok");
        }
        writeln!(f, "structure: {} violation(s)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  [{}] {}", v.rule, v.witness)?;
        }
        Ok(())
    }
}

/// Strictly between `lo` and `hi` going counter-clockwise.
fn between(ground: &GroundSet, lo: usize, hi: usize, p: usize) -> bool {
    p != lo && p != hi && ground.ccw(lo, p, hi)
}

fn chords_cross(ground: &GroundSet, (a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    if a == c || a == d || b == c || b == d {
        return false;
    }
    between(ground, a, b, c) != between(ground, a, b, d)
}

/// Problems with the triangulation points as a polygon triangulation.
fn triangulation_problems(g: &StarGraph) -> Vec<String> {
    let tp = &g.triangulation_points;
    let r = tp.len();
    let mut out = Vec::new();
    if r < 2 {
        out.push(format!("only {r} triangulation point(s)"));
        return out;
    }
    for i in 0..r {
        let (a, b) = (tp[i], tp[(i + 1) % r]);
        if !g.has_edge(a, b) {
            out.push(format!(
                "consecutive triangulation points {a} and {b} are not adjacent"
            ));
        }
    }
    let chords: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(a, b)| g.is_triangulation_point(a) && g.is_triangulation_point(b))
        .collect();
    for (i, &e) in chords.iter().enumerate() {
        for &f in &chords[i + 1..] {
            if chords_cross(&g.ground, e, f) {
                out.push(format!(
                    "chords {{{},{}}} and {{{},{}}} cross",
                    e.0, e.1, f.0, f.1
                ));
            }
        }
    }
    if out.is_empty() && chords.len() != 2 * r - 3 {
        out.push(format!(
            "{} edges among {r} triangulation points, a triangulated polygon has {}",
            chords.len(),
            2 * r - 3
        ));
    }
    out
}

/// Checks the shape a star graph of a maximal family must have.
pub fn verify_structure_theorem(g: &StarGraph) -> StructureReport {
    let ground = g.ground;
    let x = g.x;
    let mut report = StructureReport::default();
    let tp = &g.triangulation_points;
    let (xp1, xm1) = (ground.shift(x, 1), ground.shift(x, -1));

    if tp.first() != Some(&xp1) {
        report.push(
            Rule::Endpoints,
            format!(
                "first triangulation point is {:?}, expected x+1 = {xp1}",
                tp.first()
            ),
        );
    }
    if tp.last() != Some(&xm1) {
        report.push(
            Rule::Endpoints,
            format!(
                "last triangulation point is {:?}, expected x-1 = {xm1}",
                tp.last()
            ),
        );
    }
    for (k, p) in [(2isize, ground.shift(x, 2)), (-2, ground.shift(x, -2))] {
        if !g.has_vertex(p) {
            report.push(
                Rule::FrozenVertices,
                format!("x{k:+} = {p} is not a vertex"),
            );
        }
    }
    for problem in triangulation_problems(g) {
        report.push(Rule::Triangulation, problem);
    }
    for (&leaf, &at) in &g.leaves {
        if !g.is_triangulation_point(at) {
            report.push(
                Rule::LeafDegree,
                format!("leaf {leaf} hangs off {at}, which is not a triangulation point"),
            );
        }
    }
    let r = tp.len();
    if r >= 2 {
        for (&leaf, &at) in &g.leaves {
            let Some(i) = g.position(at) else { continue };
            let (lo, hi) = if i == 0 {
                (tp[0], tp[1])
            } else if i == r - 1 {
                (tp[r - 2], tp[r - 1])
            } else {
                (tp[i - 1], tp[i + 1])
            };
            if !between(&ground, lo, hi, leaf) {
                report.push(
                    Rule::LeafLocation,
                    format!("leaf {leaf} in {at} lies outside ({lo},{hi})"),
                );
            }
        }
    }
    report
}

pub const CONVERSE_CONDITIONS: [&str; 5] = ["(v)", "(i)", "(ii)", "(iii)", "(iv)"];

/// Checks the hypotheses of the realization theorem in the order
/// (v), (i), (ii), (iii), (iv), reporting the first that fails.
pub fn check_converse_conditions(g: &StarGraph) -> Result<()> {
    let ground = g.ground;
    let x = g.x;
    let fail = |condition: &'static str, detail: String| {
        Err(Error::ConverseCondition { condition, detail })
    };
    let (xp1, xm1, xp2, xm2) = (
        ground.shift(x, 1),
        ground.shift(x, -1),
        ground.shift(x, 2),
        ground.shift(x, -2),
    );

    for p in [xm2, xp2] {
        if !g.has_vertex(p) {
            return fail("(v)", format!("{p} is not a vertex"));
        }
    }
    for (a, b) in [(xm2, xm1), (xp1, xp2)] {
        if !g.has_edge(a, b) {
            return fail("(v)", format!("edge {{{a},{b}}} is missing"));
        }
    }

    for p in [xp1, xm1] {
        if !g.is_triangulation_point(p) {
            return fail("(i)", format!("{p} is not a triangulation point"));
        }
    }
    if let Some(problem) = triangulation_problems(g).into_iter().next() {
        return fail("(i)", problem);
    }

    if let Some(v) = g
        .vertices()
        .find(|&v| !g.is_triangulation_point(v) && g.degree(v) != 1)
    {
        return fail("(ii)", format!("{v} has degree {}", g.degree(v)));
    }

    let tp = &g.triangulation_points;
    let rank = |p: usize| ground.rank_from(x, p);
    for (&leaf, &at) in &g.leaves {
        let below = tp.iter().copied().rfind(|&t| rank(t) < rank(leaf));
        let above = tp.iter().copied().find(|&t| rank(t) > rank(leaf));
        if Some(at) != below && Some(at) != above {
            return fail(
                "(iii)",
                format!(
                    "leaf {leaf} hangs off {at}, not its nearest triangulation point on either side"
                ),
            );
        }
    }

    for (&l1, &t1) in &g.leaves {
        for (&l2, &t2) in &g.leaves {
            if rank(t1) < rank(t2) && rank(l1) > rank(l2) {
                return fail(
                    "(iv)",
                    format!("leaf {l1} in {t1} comes after leaf {l2} in {t2}"),
                );
            }
        }
    }
    Ok(())
}

/// A maximal family whose star graph at `x` is exactly `g`.
///
/// The triangles `{x,a,b}` for the edges of `g` together with the border
/// triangles of `g` are weakly separated, and any maximal completion of
/// them has star graph `g` at `x`.
pub fn realize_star_graph(g: &StarGraph) -> Result<Family> {
    check_converse_conditions(g)?;
    let ground = g.ground;
    let x = g.x;
    let mut ts: BTreeSet<Triangle> = g
        .edges()
        .into_iter()
        .map(|(a, b)| Triangle::sorted(x, a, b))
        .collect();
    ts.extend(g.border_triangles());
    let seed = Family::new(ground, ts)?;
    if let Some((a, b)) = seed.first_crossing_pair() {
        return Err(Error::internal(format!(
            "edge and border triangles are not weakly separated: {a} crosses {b}"
        )));
    }
    let family = greedy_complete(&seed)?;
    let got = StarGraph::of_family(&family, x);
    if got != *g {
        return Err(Error::internal(format!(
            "completed family has star graph edges {:?} at x = {x}, expected {:?}",
            got.edges(),
            g.edges()
        )));
    }
    Ok(family)
}

/// The order `⪯` on `F_x`, the interval `(A,B)_x`, and the statements of
/// the lemmas built on them, as checkable predicates.
pub mod lemmas {
    use super::*;

    /// The two points of `t` other than `x`, sorted by `<_x`.
    pub fn ends(ground: &GroundSet, x: usize, t: &Triangle) -> Option<(usize, usize)> {
        let (a, b) = t.others(x)?;
        Some(if ground.rank_from(x, a) < ground.rank_from(x, b) {
            (a, b)
        } else {
            (b, a)
        })
    }

    /// `A ⪯ B`: `B` is nested inside `A` as seen from `x`.
    pub fn precedes_eq(ground: &GroundSet, x: usize, a: &Triangle, b: &Triangle) -> bool {
        let (Some((a1, b1)), Some((c1, d1))) = (ends(ground, x, a), ends(ground, x, b)) else {
            return false;
        };
        let rank = |p| ground.rank_from(x, p);
        rank(a1) <= rank(c1) && rank(d1) <= rank(b1)
    }

    pub fn precedes(ground: &GroundSet, x: usize, a: &Triangle, b: &Triangle) -> bool {
        a != b && precedes_eq(ground, x, a, b)
    }

    /// `(A,B)_x`: triangles of `F_x` strictly between `A` and `B`.
    pub fn open_interval(family: &Family, x: usize, a: &Triangle, b: &Triangle) -> Vec<Triangle> {
        let ground = family.ground();
        family
            .iter()
            .filter(|c| c.contains(x))
            .filter(|c| precedes(&ground, x, a, c) && precedes(&ground, x, c, b))
            .copied()
            .collect()
    }

    /// Pairs `A ⪯ B` in `F_x` with `(A,B)_x` empty but `|A ∩ B| < 2`.
    pub fn empty_interval_violations(family: &Family, x: usize) -> Vec<(Triangle, Triangle)> {
        let ground = family.ground();
        let fx: Vec<Triangle> = family.star(x).iter().copied().collect();
        let mut out = Vec::new();
        for a in &fx {
            for b in &fx {
                if precedes_eq(&ground, x, a, b)
                    && a.shared(b) < 2
                    && open_interval(family, x, a, b).is_empty()
                {
                    out.push((*a, *b));
                }
            }
        }
        out
    }

    /// Nested pairs `A = {x,a,b}`, `B = {x,c,d}` with `a <_x c <_x d <_x b`
    /// for which no `y ∈ (a,c] ∪ [d,b)` has `{x,a,y}, {x,y,b}` in the
    /// family.
    pub fn new_triangle_violations(family: &Family, x: usize) -> Vec<(Triangle, Triangle)> {
        let ground = family.ground();
        let rank = |p| ground.rank_from(x, p);
        let fx: Vec<Triangle> = family.star(x).iter().copied().collect();
        let mut out = Vec::new();
        for ta in &fx {
            let (a, b) = ends(&ground, x, ta).unwrap();
            for tb in &fx {
                let (c, d) = ends(&ground, x, tb).unwrap();
                if !(rank(a) < rank(c) && rank(c) < rank(d) && rank(d) < rank(b)) {
                    continue;
                }
                let found = ground.points().filter(|&y| y != x).any(|y| {
                    let ry = rank(y);
                    let in_range =
                        (rank(a) < ry && ry <= rank(c)) || (rank(d) <= ry && ry < rank(b));
                    in_range
                        && family.contains(&Triangle::sorted(x, a, y))
                        && family.contains(&Triangle::sorted(x, y, b))
                });
                if !found {
                    out.push((*ta, *tb));
                }
            }
        }
        out
    }
}
