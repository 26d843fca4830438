//! Spans of finite G-sets, composed by pullback, and their isomorphism classes.
//!
//! `compose_spans(s, t)` is `s` followed by `t`. For the trivial group the
//! class of a span `X <- T -> Y` is its `|X| x |Y|` fiber-count matrix, and
//! composition is the matrix product `M_s * M_t`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::gset::{equivariance_failure, pullback_raw, same_group, EquivariantMap, GSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    left: GSet,
    right: GSet,
    apex: GSet,
    leg_l: Vec<usize>,
    leg_r: Vec<usize>,
}

impl Span {
    pub fn new(left: GSet, right: GSet, apex: GSet, leg_l: Vec<usize>, leg_r: Vec<usize>) -> Result<Span> {
        if !same_group(left.group(), right.group()) || !same_group(left.group(), apex.group()) {
            return Err(Error::GroupMismatch);
        }
        for (leg, foot) in [(&leg_l, &left), (&leg_r, &right)] {
            if leg.len() != apex.size() || leg.iter().any(|&y| y >= foot.size()) {
                return Err(Error::NotEquivariant("leg has the wrong shape".into()));
            }
            if let Some((x, g)) = equivariance_failure(&apex, foot, leg) {
                return Err(Error::NotEquivariant(format!("leg fails at {x}.{g}")));
            }
        }
        Ok(Span { left, right, apex, leg_l, leg_r })
    }

    pub(crate) fn new_unchecked(left: GSet, right: GSet, apex: GSet, leg_l: Vec<usize>, leg_r: Vec<usize>) -> Span {
        Span { left, right, apex, leg_l, leg_r }
    }

    pub fn from_maps(l: &EquivariantMap, r: &EquivariantMap) -> Result<Span> {
        if l.source() != r.source() {
            return Err(Error::FeetMismatch);
        }
        Ok(Span {
            left: l.target().clone(),
            right: r.target().clone(),
            apex: l.source().clone(),
            leg_l: l.map().to_vec(),
            leg_r: r.map().to_vec(),
        })
    }

    pub fn identity(x: &GSet) -> Span {
        let id: Vec<usize> = (0..x.size()).collect();
        Span { left: x.clone(), right: x.clone(), apex: x.clone(), leg_l: id.clone(), leg_r: id }
    }

    pub fn zero(x: &GSet, y: &GSet) -> Span {
        Span { left: x.clone(), right: y.clone(), apex: GSet::empty(x.group().clone()), leg_l: vec![], leg_r: vec![] }
    }

    /// `X <- X -> Y` with the identity on the left.
    pub fn graph(f: &EquivariantMap) -> Span {
        let x = f.source();
        Span {
            left: x.clone(),
            right: f.target().clone(),
            apex: x.clone(),
            leg_l: (0..x.size()).collect(),
            leg_r: f.map().to_vec(),
        }
    }

    /// `Y <- X -> X` with the identity on the right.
    pub fn cograph(f: &EquivariantMap) -> Span {
        Span::graph(f).reversed()
    }

    pub fn reversed(&self) -> Span {
        Span {
            left: self.right.clone(),
            right: self.left.clone(),
            apex: self.apex.clone(),
            leg_l: self.leg_r.clone(),
            leg_r: self.leg_l.clone(),
        }
    }

    pub fn left(&self) -> &GSet {
        &self.left
    }

    pub fn right(&self) -> &GSet {
        &self.right
    }

    pub fn apex(&self) -> &GSet {
        &self.apex
    }

    pub fn leg_l(&self) -> &[usize] {
        &self.leg_l
    }

    pub fn leg_r(&self) -> &[usize] {
        &self.leg_r
    }

    pub fn group(&self) -> &Arc<Group> {
        self.apex.group()
    }

    pub fn left_leg(&self) -> EquivariantMap {
        EquivariantMap::new(self.apex.clone(), self.left.clone(), self.leg_l.clone()).expect("validated leg")
    }

    pub fn right_leg(&self) -> EquivariantMap {
        EquivariantMap::new(self.apex.clone(), self.right.clone(), self.leg_r.clone()).expect("validated leg")
    }

    /// Disjoint union of apexes over the same feet.
    pub fn sum(&self, other: &Span) -> Result<Span> {
        if self.left != other.left || self.right != other.right {
            return Err(Error::FeetMismatch);
        }
        let k = self.apex.size();
        Ok(Span {
            left: self.left.clone(),
            right: self.right.clone(),
            apex: self.apex.coproduct(&other.apex)?,
            leg_l: self.leg_l.iter().chain(&other.leg_l).copied().collect(),
            leg_r: self.leg_r.iter().chain(&other.leg_r).copied().collect(),
        })
        .inspect(|s| debug_assert_eq!(s.apex.size(), k + other.apex.size()))
    }

    pub fn class(&self) -> SpanClass {
        span_class(self)
    }
}

/// `s` followed by `t`; the apex is the pullback of `s.right_leg` and `t.left_leg`.
pub fn compose_spans(s: &Span, t: &Span) -> Result<Span> {
    if s.right != t.left {
        return Err(Error::FeetMismatch);
    }
    let (apex, p1, p2) = pullback_raw(&s.apex, &s.leg_r, &t.apex, &t.leg_l, s.right.size());
    Ok(Span {
        left: s.left.clone(),
        right: t.right.clone(),
        apex,
        leg_l: p1.iter().map(|&a| s.leg_l[a]).collect(),
        leg_r: p2.iter().map(|&b| t.leg_r[b]).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassEntry {
    /// Least element `x * |Y| + y` of an orbit of `X x Y`.
    pub base: usize,
    /// Lattice index of a subgroup of `Stab(base)`, least in its `Stab(base)`-conjugacy class.
    pub stabilizer: usize,
    pub multiplicity: usize,
}

/// Canonical form of a span over fixed feet: apex orbits as a multiset of atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpanClass {
    pub entries: Vec<ClassEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub base: usize,
    pub stabilizer: usize,
}

impl SpanClass {
    pub fn from_atoms(atoms: impl IntoIterator<Item = (Atom, usize)>) -> SpanClass {
        let mut m: BTreeMap<Atom, usize> = BTreeMap::new();
        for (a, k) in atoms {
            if k > 0 {
                *m.entry(a).or_default() += k;
            }
        }
        SpanClass {
            entries: m
                .into_iter()
                .map(|(a, k)| ClassEntry { base: a.base, stabilizer: a.stabilizer, multiplicity: k })
                .collect(),
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = (Atom, usize)> + '_ {
        self.entries.iter().map(|e| (Atom { base: e.base, stabilizer: e.stabilizer }, e.multiplicity))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &SpanClass) -> SpanClass {
        SpanClass::from_atoms(self.atoms().chain(other.atoms()))
    }

    pub fn apex_size(&self, group: &Group) -> usize {
        let lat = group.lattice();
        self.entries.iter().map(|e| e.multiplicity * group.order() / lat.subgroup(e.stabilizer).order()).sum()
    }

    /// A representative span with the given feet.
    pub fn realize(&self, left: &GSet, right: &GSet) -> Span {
        let mut span = Span::zero(left, right);
        for (atom, k) in self.atoms() {
            let one = atom_span(left, right, atom);
            for _ in 0..k {
                span = span.sum(&one).expect("same feet");
            }
        }
        span
    }
}

/// The transitive span `Stab \ G -> X x Y` hitting `atom.base`.
pub fn atom_span(left: &GSet, right: &GSet, atom: Atom) -> Span {
    let g = left.group();
    let orbit = GSet::orbit_of_subgroup(g, atom.stabilizer);
    let ny = right.size();
    let (x0, y0) = (atom.base / ny, atom.base % ny);
    let mut leg_l = vec![0; orbit.size()];
    let mut leg_r = vec![0; orbit.size()];
    for h in 0..g.order() {
        let k = orbit.act(0, h);
        leg_l[k] = left.act(x0, h);
        leg_r[k] = right.act(y0, h);
    }
    Span::new_unchecked(left.clone(), right.clone(), orbit, leg_l, leg_r)
}

/// Least element of the orbit of `b = x * |Y| + y` in `X x Y` and an element moving `b` there.
fn orbit_min(left: &GSet, right: &GSet, b: usize) -> (usize, usize) {
    let ny = right.size();
    let (x, y) = (b / ny, b % ny);
    let mut best = (b, 0);
    for g in 1..left.group().order() {
        let c = left.act(x, g) * ny + right.act(y, g);
        if c < best.0 {
            best = (c, g);
        }
    }
    best
}

fn stabilizer_of_pair(left: &GSet, right: &GSet, b: usize) -> Vec<usize> {
    let ny = right.size();
    let (x, y) = (b / ny, b % ny);
    (0..left.group().order()).filter(|&g| left.act(x, g) == x && right.act(y, g) == y).collect()
}

pub fn span_class(s: &Span) -> SpanClass {
    let g = s.group();
    let lat = g.lattice();
    let ny = s.right.size();
    let mut atoms = Vec::new();
    for orbit in s.apex.orbit_decomposition() {
        let t0 = orbit.base;
        let b = s.leg_l[t0] * ny + s.leg_r[t0];
        let (b0, c) = orbit_min(&s.left, &s.right, b);
        // Stab(t0 . c) = c^-1 Stab(t0) c
        let s1 = lat.conjugate(orbit.stabilizer, c);
        let stabilizer = stabilizer_of_pair(&s.left, &s.right, b0)
            .into_iter()
            .map(|l| lat.conjugate(s1, l))
            .min()
            .expect("identity stabilizes");
        atoms.push((Atom { base: b0, stabilizer }, 1));
    }
    SpanClass::from_atoms(atoms)
}

/// Transitive spans `X <- O -> Y` up to isomorphism, with their apex sizes.
pub fn atoms(left: &GSet, right: &GSet) -> Result<Vec<(Atom, usize)>> {
    if !same_group(left.group(), right.group()) {
        return Err(Error::GroupMismatch);
    }
    let g = left.group();
    let lat = g.lattice();
    let ny = right.size();
    let total = left.size() * ny;
    let mut seen = vec![false; total];
    let mut out = Vec::new();
    for b in 0..total {
        if seen[b] {
            continue;
        }
        for h in 0..g.order() {
            seen[left.act(b / ny, h) * ny + right.act(b % ny, h)] = true;
        }
        let stab = stabilizer_of_pair(left, right, b);
        let mut mask = vec![false; g.order()];
        for &l in &stab {
            mask[l] = true;
        }
        let mut reps: Vec<usize> = (0..lat.len())
            .filter(|&i| lat.subgroup(i).elements().iter().all(|&x| mask[x]))
            .map(|i| stab.iter().map(|&l| lat.conjugate(i, l)).min().expect("nonempty"))
            .collect();
        reps.sort_unstable();
        reps.dedup();
        for s in reps {
            out.push((Atom { base: b, stabilizer: s }, g.order() / lat.subgroup(s).order()));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct HomMonoid {
    pub left: GSet,
    pub right: GSet,
    pub bound: usize,
    pub classes: Vec<SpanClass>,
}

impl HomMonoid {
    pub fn contains(&self, c: &SpanClass) -> bool {
        self.classes.binary_search(c).is_ok()
    }

    /// Sum of two classes; `None` when it leaves the bound.
    pub fn add(&self, a: &SpanClass, b: &SpanClass) -> Option<SpanClass> {
        let sum = a.add(b);
        (sum.apex_size(self.left.group()) <= self.bound).then_some(sum)
    }
}

/// Every class of spans `X -> Y` whose apex has at most `bound` elements.
pub fn hom_monoid(left: &GSet, right: &GSet, bound: usize) -> Result<HomMonoid> {
    let atoms = atoms(left, right)?;
    let mut classes = Vec::new();
    let mut current: Vec<(Atom, usize)> = Vec::new();
    fn rec(
        atoms: &[(Atom, usize)],
        from: usize,
        room: usize,
        current: &mut Vec<(Atom, usize)>,
        out: &mut Vec<SpanClass>,
    ) {
        out.push(SpanClass::from_atoms(current.iter().copied()));
        for i in from..atoms.len() {
            let (a, size) = atoms[i];
            if size <= room {
                current.push((a, 1));
                rec(atoms, i, room - size, current, out);
                current.pop();
            }
        }
    }
    rec(&atoms, 0, bound, &mut current, &mut classes);
    classes.sort();
    classes.dedup();
    Ok(HomMonoid { left: left.clone(), right: right.clone(), bound, classes })
}

/// Apex isomorphism commuting with both legs, by backtracking over orbits.
pub fn span_iso(s: &Span, t: &Span) -> Option<Vec<usize>> {
    if s.left != t.left || s.right != t.right || s.apex.size() != t.apex.size() {
        return None;
    }
    let g = s.group().clone();
    let bases: Vec<usize> = s.apex.orbit_decomposition().iter().map(|o| o.base).collect();
    let mut map = vec![usize::MAX; s.apex.size()];
    let mut used = vec![false; t.apex.size()];
    fn rec(
        k: usize,
        bases: &[usize],
        s: &Span,
        t: &Span,
        g: &Group,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == bases.len() {
            return true;
        }
        let t0 = bases[k];
        for u in 0..t.apex.size() {
            if used[u] || t.leg_l[u] != s.leg_l[t0] || t.leg_r[u] != s.leg_r[t0] {
                continue;
            }
            let mut assigned = Vec::new();
            let mut ok = true;
            for h in 0..g.order() {
                let (a, b) = (s.apex.act(t0, h), t.apex.act(u, h));
                if map[a] == usize::MAX {
                    if used[b] {
                        ok = false;
                        break;
                    }
                    map[a] = b;
                    used[b] = true;
                    assigned.push(a);
                } else if map[a] != b {
                    ok = false;
                    break;
                }
            }
            if ok && rec(k + 1, bases, s, t, g, map, used) {
                return true;
            }
            for a in assigned {
                used[map[a]] = false;
                map[a] = usize::MAX;
            }
        }
        false
    }
    rec(0, &bases, s, t, &g, &mut map, &mut used).then_some(map)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NatMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u64>>,
}

impl NatMatrix {
    pub fn new(entries: Vec<Vec<u64>>, cols: usize) -> Result<NatMatrix> {
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged matrix".into()));
        }
        Ok(NatMatrix { rows: entries.len(), cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> NatMatrix {
        NatMatrix { rows, cols, entries: vec![vec![0; cols]; rows] }
    }

    pub fn identity(n: usize) -> NatMatrix {
        let mut m = NatMatrix::zero(n, n);
        for i in 0..n {
            m.entries[i][i] = 1;
        }
        m
    }

    pub fn mul(&self, other: &NatMatrix) -> Result<NatMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = NatMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i][j] += a * other.entries[k][j];
                }
            }
        }
        Ok(out)
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().flatten().sum()
    }
}

/// `M[i][j] = #{t : left(t) = i, right(t) = j}`.
pub fn span_to_matrix(s: &Span) -> Result<NatMatrix> {
    if s.group().order() != 1 {
        return Err(Error::NontrivialGroup);
    }
    let mut m = NatMatrix::zero(s.left.size(), s.right.size());
    for t in 0..s.apex.size() {
        m.entries[s.leg_l[t]][s.leg_r[t]] += 1;
    }
    Ok(m)
}

/// Apex elements listed row by row, `M[i][j]` copies of `(i, j)`.
pub fn matrix_to_span(m: &NatMatrix) -> Span {
    let e = Arc::new(Group::trivial());
    let legs = fin::from_matrix(m);
    fin::to_span(&e, m.rows, m.cols, &legs)
}

/// Allocation-light spans of plain finite sets, as lists of `(left, right)` images.
pub mod fin {
    use super::*;

    pub fn from_matrix(m: &NatMatrix) -> Vec<(usize, usize)> {
        let mut legs = Vec::with_capacity(m.total() as usize);
        for i in 0..m.rows {
            for j in 0..m.cols {
                for _ in 0..m.entries[i][j] {
                    legs.push((i, j));
                }
            }
        }
        legs
    }

    /// Pullback over the middle set: pairs `(t, u)` in lexicographic order with
    /// `right(t) = left(u)`, legs `(left(t), right(u))`.
    pub fn compose_into(s: &[(usize, usize)], t: &[(usize, usize)], out: &mut Vec<(usize, usize)>) {
        out.clear();
        for &(a, m) in s {
            for &(m2, c) in t {
                if m == m2 {
                    out.push((a, c));
                }
            }
        }
    }

    pub fn compose(s: &[(usize, usize)], t: &[(usize, usize)]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        compose_into(s, t, &mut out);
        out
    }

    pub fn count_matrix(rows: usize, cols: usize, legs: &[(usize, usize)]) -> NatMatrix {
        let mut m = NatMatrix::zero(rows, cols);
        for &(i, j) in legs {
            m.entries[i][j] += 1;
        }
        m
    }

    pub fn set(e: &Arc<Group>, n: usize) -> GSet {
        GSet::from_flat(e.clone(), n, (0..n).collect())
    }

    pub fn to_span(e: &Arc<Group>, rows: usize, cols: usize, legs: &[(usize, usize)]) -> Span {
        Span::new_unchecked(
            set(e, rows),
            set(e, cols),
            set(e, legs.len()),
            legs.iter().map(|p| p.0).collect(),
            legs.iter().map(|p| p.1).collect(),
        )
    }

    /// All `rows x cols` matrices with entries summing to at most `bound`.
    pub fn matrices(rows: usize, cols: usize, bound: usize) -> Vec<NatMatrix> {
        let cells = rows * cols;
        let mut out = Vec::new();
        let mut cur = vec![0u64; cells];
        fn rec(i: usize, room: u64, cur: &mut Vec<u64>, rows: usize, cols: usize, out: &mut Vec<NatMatrix>) {
            if i == cur.len() {
                let entries = (0..rows).map(|r| cur[r * cols..(r + 1) * cols].to_vec()).collect();
                out.push(NatMatrix { rows, cols, entries });
                return;
            }
            for v in 0..=room {
                cur[i] = v;
                rec(i + 1, room - v, cur, rows, cols, out);
            }
            cur[i] = 0;
        }
        rec(0, bound as u64, &mut cur, rows, cols, &mut out);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LegKind {
    Bijective,
    Injective,
    Arbitrary,
}

impl LegKind {
    pub const ALL: [LegKind; 3] = [LegKind::Bijective, LegKind::Injective, LegKind::Arbitrary];

    /// Whether a leg of kind `other` is allowed in the class `self`.
    pub fn admits(self, other: LegKind) -> bool {
        other <= self
    }
}

pub fn leg_kind(map: &[usize], target: usize) -> LegKind {
    let mut hit = vec![0u32; target];
    for &y in map {
        hit[y] += 1;
    }
    if hit.iter().any(|&c| c > 1) {
        LegKind::Arbitrary
    } else if hit.iter().all(|&c| c == 1) {
        LegKind::Bijective
    } else {
        LegKind::Injective
    }
}

/// Finest `(left, right)` leg kinds.
pub fn structured_span_type(s: &Span) -> (LegKind, LegKind) {
    (leg_kind(&s.leg_l, s.left.size()), leg_kind(&s.leg_r, s.right.size()))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub pairs_checked: usize,
    /// Indices into the corpus of composable pairs whose composite leaves the class.
    pub violations: Vec<(usize, usize)>,
}

/// Composes every composable pair of `(p, q)`-spans in the corpus and checks the composite stays in `(p, q)`.
pub fn check_closure(p: LegKind, q: LegKind, corpus: &[Span]) -> ClosureReport {
    let members: Vec<usize> = (0..corpus.len())
        .filter(|&i| {
            let (a, b) = structured_span_type(&corpus[i]);
            p.admits(a) && q.admits(b)
        })
        .collect();
    let mut report = ClosureReport::default();
    for &i in &members {
        for &j in &members {
            if corpus[i].right != corpus[j].left {
                continue;
            }
            report.pairs_checked += 1;
            let c = compose_spans(&corpus[i], &corpus[j]).expect("composable");
            let (a, b) = structured_span_type(&c);
            if !(p.admits(a) && q.admits(b)) {
                report.violations.push((i, j));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<Group> {
        Arc::new(Group::cyclic(2))
    }

    #[test]
    fn identity_is_neutral() {
        let g = Arc::new(Group::symmetric(3));
        let x = GSet::orbit_of_subgroup(&g, 1).coproduct(&GSet::point(g.clone())).unwrap();
        let y = GSet::orbit_of_subgroup(&g, 4);
        for c in hom_monoid(&x, &y, 6).unwrap().classes {
            let s = c.realize(&x, &y);
            assert_eq!(span_class(&s), c);
            assert_eq!(span_class(&compose_spans(&Span::identity(&x), &s).unwrap()), c);
            assert_eq!(span_class(&compose_spans(&s, &Span::identity(&y)).unwrap()), c);
        }
    }

    #[test]
    fn two_times_three() {
        let a = matrix_to_span(&NatMatrix::new(vec![vec![2]], 1).unwrap());
        let b = matrix_to_span(&NatMatrix::new(vec![vec![3]], 1).unwrap());
        let c = compose_spans(&a, &b).unwrap();
        assert_eq!(span_to_matrix(&c).unwrap().entries, vec![vec![6]]);
    }

    #[test]
    fn c2_regular_through_point() {
        let g = c2();
        let free = GSet::regular(g.clone());
        let pt = GSet::point(g.clone());
        let s = Span::new(free.clone(), pt.clone(), free.clone(), vec![0, 1], vec![0, 0]).unwrap();
        let t = s.reversed();
        let c = compose_spans(&s, &t).unwrap();
        assert_eq!(c.apex().size(), 4);
        // explicit pullback over the point: G/e x G/e = two free orbits over G/e x G/e
        let regular = atom_span(&free, &free, Atom { base: 0, stabilizer: 0 });
        let twice = regular.sum(&atom_span(&free, &free, Atom { base: 1, stabilizer: 0 })).unwrap();
        assert_eq!(span_class(&c), span_class(&twice));
        assert_eq!(c.apex().orbit_decomposition().len(), 2);
    }

    #[test]
    fn classes_separate_and_identify() {
        let m1 = matrix_to_span(&NatMatrix::new(vec![vec![1, 2], vec![0, 1]], 2).unwrap());
        let m2 = matrix_to_span(&NatMatrix::new(vec![vec![1, 0], vec![2, 1]], 2).unwrap());
        assert_ne!(span_class(&m1), span_class(&m2));
        // relabeled apex
        let mut l = m1.leg_l().to_vec();
        let mut r = m1.leg_r().to_vec();
        l.reverse();
        r.reverse();
        let relabeled = Span::new(m1.left().clone(), m1.right().clone(), m1.apex().clone(), l, r).unwrap();
        assert_eq!(span_class(&relabeled), span_class(&m1));
        assert!(span_iso(&relabeled, &m1).is_some());
        assert!(span_iso(&m1, &m2).is_none());
    }

    #[test]
    fn hom_monoid_counts() {
        let e = Arc::new(Group::trivial());
        let pt = GSet::point(e.clone());
        assert_eq!(hom_monoid(&pt, &pt, 3).unwrap().classes.len(), 4);
        assert_eq!(hom_monoid(&pt, &pt, 0).unwrap().classes, vec![SpanClass::default()]);
        let g = c2();
        let p = GSet::point(g.clone());
        assert_eq!(hom_monoid(&p, &p, 2).unwrap().classes.len(), 4);
    }

    /// Brute force: all C2-sets over X x Y of size at most `bound`, up to span isomorphism.
    #[test]
    fn hom_monoid_matches_brute_force() {
        let g = c2();
        let free = GSet::regular(g.clone());
        let pt = GSet::point(g.clone());
        let x = free.coproduct(&pt).unwrap();
        let y = free.clone();
        let bound = 4;
        let mut reps: Vec<Span> = Vec::new();
        // apexes: a points and b free orbits with a + 2b <= bound
        for a in 0..=bound {
            for b in 0..=(bound - a) / 2 {
                let apex = (0..b).fold((0..a).fold(GSet::empty(g.clone()), |acc, _| acc.coproduct(&pt).unwrap()), |acc, _| acc.coproduct(&free).unwrap());
                let n = apex.size();
                let total = (x.size() * y.size()).pow(n as u32);
                for code in 0..total {
                    let mut c = code;
                    let mut l = vec![0; n];
                    let mut r = vec![0; n];
                    for t in 0..n {
                        let v = c % (x.size() * y.size());
                        c /= x.size() * y.size();
                        l[t] = v / y.size();
                        r[t] = v % y.size();
                    }
                    if let Ok(s) = Span::new(x.clone(), y.clone(), apex.clone(), l, r) {
                        if !reps.iter().any(|q| span_iso(q, &s).is_some()) {
                            reps.push(s);
                        }
                    }
                }
            }
        }
        let hom = hom_monoid(&x, &y, bound).unwrap();
        assert_eq!(hom.classes.len(), reps.len());
        for s in &reps {
            assert!(hom.contains(&span_class(s)));
        }
    }

    #[test]
    fn matrix_examples() {
        let id = Span::identity(&fin::set(&Arc::new(Group::trivial()), 3));
        assert_eq!(span_to_matrix(&id).unwrap(), NatMatrix::identity(3));
        let e = Arc::new(Group::trivial());
        let s = fin::to_span(&e, 2, 1, &[(0, 0), (0, 0), (1, 0)]);
        assert_eq!(span_to_matrix(&s).unwrap().entries, vec![vec![2], vec![1]]);
        let g = c2();
        let p = GSet::point(g);
        assert_eq!(span_to_matrix(&Span::identity(&p)), Err(Error::NontrivialGroup));
    }

    #[test]
    fn structured_examples() {
        let e = Arc::new(Group::trivial());
        let x = fin::set(&e, 3);
        assert_eq!(structured_span_type(&Span::identity(&x)), (LegKind::Bijective, LegKind::Bijective));
        let f = EquivariantMap::new(x.clone(), fin::set(&e, 2), vec![0, 0, 1]).unwrap();
        assert_eq!(structured_span_type(&Span::graph(&f)), (LegKind::Bijective, LegKind::Arbitrary));
        let inj = fin::to_span(&e, 3, 3, &[(0, 1), (2, 2)]);
        let corpus = vec![inj.clone(), inj.reversed(), Span::identity(&x)];
        let r = check_closure(LegKind::Injective, LegKind::Injective, &corpus);
        assert_eq!(r.pairs_checked, 9);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn feet_mismatch() {
        let e = Arc::new(Group::trivial());
        let a = Span::identity(&fin::set(&e, 2));
        let b = Span::identity(&fin::set(&e, 3));
        assert_eq!(compose_spans(&a, &b), Err(Error::FeetMismatch));
    }
}
