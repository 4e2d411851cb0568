//! Square moves on maximal families and the values they carry.
//!
//! A move `z:(a,b,c,d)` with `a, b, c, d` cyclically ordered trades `{z,a,c}`
//! for `{z,b,d}` when `{z,a,b}, {z,b,c}, {z,c,d}, {z,d,a}, {z,a,c}` are all
//! present. The new triangle's value follows from the 3-term relation
//!
//! ```text
//! v(zac) v(zbd) = v(zab) v(zcd) + v(zad) v(zbc)
//! ```
//!
//! on sorted index sets, so no permutation signs ever appear.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::ground::{GroundSet, Triangle};
use crate::structure::StarGraph;
use crate::Rational;

/// A maximal family with a nonzero value on every triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedFamily {
    family: Family,
    values: BTreeMap<Triangle, Rational>,
}

impl ValuedFamily {
    pub fn new(family: Family, values: BTreeMap<Triangle, Rational>) -> Result<ValuedFamily> {
        family.require_maximal()?;
        for t in family.iter() {
            match values.get(t) {
                None => return Err(Error::invalid(format!("no value given for {t}"))),
                Some(v) if v.is_zero() => {
                    return Err(Error::invalid(format!("value of {t} is zero")))
                }
                Some(_) => {}
            }
        }
        if let Some(extra) = values.keys().find(|t| !family.contains(t)) {
            return Err(Error::invalid(format!(
                "value given for {extra}, which is not in the family"
            )));
        }
        Ok(ValuedFamily { family, values })
    }

    /// The specialization of the cluster to 1.
    pub fn all_ones(family: Family) -> Result<ValuedFamily> {
        let values = family.iter().map(|t| (*t, Rational::one())).collect();
        ValuedFamily::new(family, values)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn ground(&self) -> GroundSet {
        self.family.ground()
    }

    pub fn values(&self) -> &BTreeMap<Triangle, Rational> {
        &self.values
    }

    pub fn value(&self, t: &Triangle) -> Option<&Rational> {
        self.values.get(t)
    }

    pub(crate) fn value_or_err(&self, t: &Triangle) -> Result<&Rational> {
        self.values
            .get(t)
            .ok_or_else(|| Error::invalid_move(format!("{t} is not in the family")))
    }

    /// The common value of all triangles through `x`, if there is one.
    pub fn unitary_value(&self, x: usize) -> Option<Rational> {
        let mut through_x = self
            .values
            .iter()
            .filter(|(t, _)| t.contains(x))
            .map(|(_, v)| v);
        let first = through_x.next()?.clone();
        through_x.all(|v| *v == first).then_some(first)
    }

    pub(crate) fn require_unitary(&self, x: usize) -> Result<Rational> {
        self.ground().check_point(x)?;
        self.unitary_value(x).ok_or_else(|| Error::NotUnitary {
            x,
            detail: "triangles through x carry different values".into(),
        })
    }

    pub fn is_all_ones(&self) -> bool {
        self.values.values().all(|v| v.is_one())
    }
}

/// `z:(a,b,c,d)`: remove `{z,a,c}`, add `{z,b,d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MutationMove {
    pub z: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl MutationMove {
    pub fn new(
        ground: &GroundSet,
        z: usize,
        a: usize,
        b: usize,
        c: usize,
        d: usize,
    ) -> Result<MutationMove> {
        let m = MutationMove { z, a, b, c, d };
        m.check(ground)?;
        Ok(m)
    }

    fn check(&self, ground: &GroundSet) -> Result<()> {
        let pts = [self.z, self.a, self.b, self.c, self.d];
        for (i, &p) in pts.iter().enumerate() {
            ground.check_point(p)?;
            if pts[..i].contains(&p) {
                return Err(Error::invalid(format!("move {self} repeats point {p}")));
            }
        }
        if !ground.cyclically_ordered(&[self.a, self.b, self.c, self.d])? {
            return Err(Error::invalid(format!(
                "move {self}: ({},{},{},{}) is not cyclically ordered",
                self.a, self.b, self.c, self.d
            )));
        }
        Ok(())
    }

    pub fn removed(&self) -> Triangle {
        Triangle::sorted(self.z, self.a, self.c)
    }

    pub fn added(&self) -> Triangle {
        Triangle::sorted(self.z, self.b, self.d)
    }

    /// The move that undoes this one.
    pub fn inverse(&self) -> MutationMove {
        MutationMove {
            z: self.z,
            a: self.b,
            b: self.c,
            c: self.d,
            d: self.a,
        }
    }

    /// `{z,a,b}, {z,b,c}, {z,c,d}, {z,d,a}, {z,a,c}`.
    pub fn required(&self) -> [Triangle; 5] {
        let MutationMove { z, a, b, c, d } = *self;
        [
            Triangle::sorted(z, a, b),
            Triangle::sorted(z, b, c),
            Triangle::sorted(z, c, d),
            Triangle::sorted(z, d, a),
            Triangle::sorted(z, a, c),
        ]
    }
}

impl fmt::Display for MutationMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:({},{},{},{})",
            self.z, self.a, self.b, self.c, self.d
        )
    }
}

/// `(v_zab · v_zcd + v_zad · v_zbc) / v_zac`.
pub fn exchange_value(
    v_zac: &Rational,
    v_zab: &Rational,
    v_zcd: &Rational,
    v_zad: &Rational,
    v_zbc: &Rational,
) -> Result<Rational> {
    if v_zac.is_zero() {
        return Err(Error::ZeroPivot("exchange pivot v(z,a,c) is zero".into()));
    }
    Ok((v_zab * v_zcd + v_zad * v_zbc) / v_zac)
}

pub(crate) fn move_value(
    m: &MutationMove,
    value: impl Fn(&Triangle) -> Option<Rational>,
) -> Result<Rational> {
    let [zab, zbc, zcd, zda, zac] = m.required();
    let get = |t: &Triangle| {
        value(t).ok_or_else(|| Error::invalid_move(format!("move {m} needs {t}, which is missing")))
    };
    exchange_value(
        &get(&zac)?,
        &get(&zab)?,
        &get(&zcd)?,
        &get(&zda)?,
        &get(&zbc)?,
    )
}

pub fn mutate(vf: &ValuedFamily, m: &MutationMove) -> Result<ValuedFamily> {
    m.check(&vf.ground())?;
    for t in m.required() {
        if !vf.family.contains(&t) {
            return Err(Error::invalid_move(format!(
                "move {m} needs {t}, which is not in the family"
            )));
        }
    }
    let added = m.added();
    if vf.family.contains(&added) {
        return Err(Error::invalid_move(format!(
            "move {m} would add {added}, which is already present"
        )));
    }
    let value = move_value(m, |t| vf.values.get(t).cloned())?;
    let removed = m.removed();
    let family = vf.family.exchanged(&removed, added);
    let mut values = vf.values.clone();
    values.remove(&removed);
    values.insert(added, value);
    Ok(ValuedFamily { family, values })
}

#[inline]
fn bit(p: usize) -> u128 {
    1u128 << (p - 1)
}

fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let p = mask.trailing_zeros() as usize + 1;
            mask &= mask - 1;
            Some(p)
        }
    })
}

/// Every applicable move, sorted by `(z, a, b, c, d)`. Each mutation is
/// listed once, in the representative with `a < c`.
pub fn available_moves(family: &Family) -> Vec<MutationMove> {
    moves_of(family.ground().n(), family.triangles())
}

pub(crate) fn moves_of(n: usize, triangles: &BTreeSet<Triangle>) -> Vec<MutationMove> {
    let mut moves = Vec::new();
    let mut adj = vec![0u128; n + 1];
    let mut pivots = Vec::new();
    for z in 1..=n {
        adj.iter_mut().for_each(|m| *m = 0);
        pivots.clear();
        for t in triangles {
            if let Some((a, c)) = t.others(z) {
                adj[a] |= bit(c);
                adj[c] |= bit(a);
                pivots.push((a, c));
            }
        }
        for &(a, c) in &pivots {
            let common = adj[a] & adj[c];
            if common.count_ones() < 2 {
                continue;
            }
            for b in bits(common).filter(|&b| a < b && b < c) {
                for d in bits(common).filter(|&d| d < a || d > c) {
                    moves.push(MutationMove { z, a, b, c, d });
                }
            }
        }
    }
    moves.sort_unstable();
    moves
}

/// Removes leaf `q2` hanging off triangulation point `p` in the star graph
/// at `x`, where `q1` and `q3` are its neighbours in the ordered sequence of
/// points incident to `p`. Trades `{x,p,q2}` for `{p,q1,q3}`; when the
/// family is unitary in `x` the new value is `v(p,q1,q2) + v(p,q2,q3)`.
pub fn remove_leaf(
    vf: &ValuedFamily,
    x: usize,
    p: usize,
    q1: usize,
    q2: usize,
    q3: usize,
) -> Result<ValuedFamily> {
    let ground = vf.ground();
    if q2 == ground.shift(x, 2) || q2 == ground.shift(x, -2) {
        return Err(Error::FrozenLeaf { x, leaf: q2 });
    }
    vf.require_unitary(x)?;
    let g = StarGraph::of_family(vf.family(), x);
    if !g.is_triangulation_point(p) {
        return Err(Error::invalid_move(format!(
            "{p} is not a triangulation point at x = {x}"
        )));
    }
    if g.attachment(q2) != Some(p) {
        return Err(Error::invalid_move(format!("{q2} is not a leaf in {p}")));
    }
    let seq = g.incident_sequence(p);
    let at = seq
        .iter()
        .position(|&q| q == q2)
        .ok_or_else(|| Error::internal(format!("leaf {q2} missing from sequence at {p}")))?;
    if seq[at - 1] != q1 || seq[at + 1] != q3 {
        return Err(Error::invalid_move(format!(
            "the neighbours of leaf {q2} around {p} are {} and {}, not {q1} and {q3}",
            seq[at - 1],
            seq[at + 1]
        )));
    }
    let m = MutationMove::new(&ground, p, x, q1, q2, q3)?;
    mutate(vf, &m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Trade `{x, P_{i-1}, P_i}` for `{Q1, P_{i-1}, P_{i+1}}`.
    Left,
    /// Trade `{x, P_i, P_{i+1}}` for `{P_{i-1}, P_{i+1}, Q2}`.
    Right,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Side> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::invalid(format!(
                "side must be left or right, got '{other}'"
            ))),
        }
    }
}

/// Detaches a degree-2 triangulation point `p` from one of its two
/// neighbours. Afterwards `p` is a leaf of the other one.
pub fn contract_degree2(vf: &ValuedFamily, x: usize, p: usize, side: Side) -> Result<ValuedFamily> {
    let ground = vf.ground();
    vf.require_unitary(x)?;
    ground.check_point(p)?;
    if p == ground.shift(x, 1) || p == ground.shift(x, -1) {
        return Err(Error::invalid_move(format!(
            "{p} is adjacent to x = {x} and cannot be contracted"
        )));
    }
    match side {
        Side::Left if p == ground.shift(x, 2) => {
            return Err(Error::invalid_move(format!(
                "{p} = x+2 can only be detached on the right"
            )))
        }
        Side::Right if p == ground.shift(x, -2) => {
            return Err(Error::invalid_move(format!(
                "{p} = x-2 can only be detached on the left"
            )))
        }
        _ => {}
    }
    let g = StarGraph::of_family(vf.family(), x);
    if !g.is_triangulation_point(p) || g.degree(p) != 2 {
        return Err(Error::invalid_move(format!(
            "{p} is not a triangulation point of degree 2 at x = {x} (degree {})",
            g.degree(p)
        )));
    }
    let prev = g.prev_point(p);
    let next = g.next_point(p);
    let m = match side {
        Side::Left => {
            let seq = g.incident_sequence(prev);
            let q1 = seq[seq.len() - 2];
            MutationMove::new(&ground, prev, x, q1, p, next)?
        }
        Side::Right => {
            let seq = g.incident_sequence(next);
            let q2 = seq[1];
            MutationMove::new(&ground, next, x, prev, p, q2)?
        }
    };
    mutate(vf, &m)
}

/// One line of a mutation trace:
/// `z:(a,b,c,d) removed={..} added={..} value=p/q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine {
    pub mv: MutationMove,
    pub removed: Triangle,
    pub added: Triangle,
    pub value: Rational,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} removed={} added={} value={}",
            self.mv, self.removed, self.added, self.value
        )
    }
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Format(format!("bad {what} '{s}'")))
}

fn parse_triangle_set(s: &str) -> Result<Triangle> {
    let inner = s
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| Error::Format(format!("expected {{a,b,c}}, got '{s}'")))?;
    let pts: Vec<usize> = inner
        .split(',')
        .map(|p| parse_usize(p, "point"))
        .collect::<Result<_>>()?;
    if pts.len() != 3 {
        return Err(Error::Format(format!("expected three points in '{s}'")));
    }
    Triangle::new(pts[0], pts[1], pts[2]).map_err(|e| Error::Format(e.to_string()))
}

impl FromStr for TraceLine {
    type Err = Error;

    fn from_str(line: &str) -> Result<TraceLine> {
        let mut fields = line.split_whitespace();
        let head = fields
            .next()
            .ok_or_else(|| Error::Format("empty trace line".into()))?;
        let (z, rest) = head
            .split_once(':')
            .ok_or_else(|| Error::Format(format!("expected z:(a,b,c,d), got '{head}'")))?;
        let quad = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Format(format!("expected (a,b,c,d), got '{rest}'")))?;
        let q: Vec<usize> = quad
            .split(',')
            .map(|p| parse_usize(p, "point"))
            .collect::<Result<_>>()?;
        if q.len() != 4 {
            return Err(Error::Format(format!("expected four points in '{rest}'")));
        }
        let mv = MutationMove {
            z: parse_usize(z, "pivot")?,
            a: q[0],
            b: q[1],
            c: q[2],
            d: q[3],
        };
        let mut removed = None;
        let mut added = None;
        let mut value = None;
        for field in fields {
            let (key, val) = field
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("expected key=value, got '{field}'")))?;
            match key {
                "removed" => removed = Some(parse_triangle_set(val)?),
                "added" => added = Some(parse_triangle_set(val)?),
                "value" => {
                    value =
                        Some(crate::parse_rational(val).map_err(|e| Error::Format(e.to_string()))?)
                }
                other => return Err(Error::Format(format!("unknown trace field '{other}'"))),
            }
        }
        let missing = |k: &str| Error::Format(format!("trace line lacks {k}=: '{line}'"));
        Ok(TraceLine {
            mv,
            removed: removed.ok_or_else(|| missing("removed"))?,
            added: added.ok_or_else(|| missing("added"))?,
            value: value.ok_or_else(|| missing("value"))?,
        })
    }
}

/// Parses a trace, skipping blank lines and `#` comments.
pub fn parse_trace(text: &str) -> Result<Vec<TraceLine>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.parse::<TraceLine>()
                .map_err(|e| Error::Format(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

/// Applies `m` and records it as a trace line.
pub fn mutate_traced(vf: &ValuedFamily, m: &MutationMove) -> Result<(ValuedFamily, TraceLine)> {
    let next = mutate(vf, m)?;
    let added = m.added();
    let line = TraceLine {
        mv: *m,
        removed: m.removed(),
        added,
        value: next.values[&added].clone(),
    };
    Ok((next, line))
}

/// A seeded random walk of `steps` moves, each drawn uniformly from the
/// moves available at that point, recorded as a trace.
pub fn random_walk(
    vf: &ValuedFamily,
    steps: usize,
    seed: u64,
) -> Result<(ValuedFamily, Vec<TraceLine>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = vf.clone();
    let mut lines = Vec::with_capacity(steps);
    for _ in 0..steps {
        let moves = available_moves(cur.family());
        if moves.is_empty() {
            break;
        }
        let (next, line) = mutate_traced(&cur, &moves[rng.gen_range(0..moves.len())])?;
        cur = next;
        lines.push(line);
    }
    Ok((cur, lines))
}

/// Re-applies a recorded trace, checking that every line's removed and
/// added triangles and its value agree with what the move produces.
pub fn replay(vf: &ValuedFamily, trace: &[TraceLine]) -> Result<ValuedFamily> {
    let mut cur = vf.clone();
    for (i, line) in trace.iter().enumerate() {
        let (next, got) = mutate_traced(&cur, &line.mv)
            .map_err(|e| Error::invalid_move(format!("trace step {}: {e}", i + 1)))?;
        if got.removed != line.removed || got.added != line.added {
            return Err(Error::invalid_move(format!(
                "trace step {}: move {} removes {} and adds {}, trace says {} and {}",
                i + 1,
                line.mv,
                got.removed,
                got.added,
                line.removed,
                line.added
            )));
        }
        if got.value != line.value {
            return Err(Error::invalid_move(format!(
                "trace step {}: move {} yields value {}, trace says {}",
                i + 1,
                line.mv,
                got.value,
                line.value
            )));
        }
        cur = next;
    }
    Ok(cur)
}
