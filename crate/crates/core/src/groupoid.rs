//! Finite groupoids, discrete fibrations, action groupoids and spans of
//! groupoids whose left leg is a discrete fibration.
//!
//! Composition is written diagrammatically: `then(f, g)` is `f` followed by `g`.
//! The one-object groupoid `BG` has the elements of `G` as morphisms.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{catalog, enumerate_homomorphisms, isomorphic, Group};
use crate::gset::{same_group, Biset, EquivariantMap, GSet};
use crate::span::Span;

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Groupoid {
    objects: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    /// `comp[f * m + g]`, `NONE` when `tgt f != src g`
    comp: Vec<usize>,
    ident: Vec<usize>,
    inverse: Vec<usize>,
}

/// Interchange format: `comp[f][g]` is `f` then `g`, or null.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidData {
    pub objects: usize,
    pub morphisms: Vec<MorphismData>,
    pub comp: Vec<Vec<Option<usize>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismData {
    pub src: usize,
    pub tgt: usize,
}

impl Groupoid {
    /// Validates the category axioms exhaustively and that every morphism is invertible.
    pub fn new(objects: usize, src: Vec<usize>, tgt: Vec<usize>, comp: &[Vec<Option<usize>>]) -> Result<Groupoid> {
        let m = src.len();
        let bad = |s: String| Err(Error::InvalidGroupoid(s));
        if tgt.len() != m || comp.len() != m || comp.iter().any(|r| r.len() != m) {
            return bad("table shapes disagree".into());
        }
        if src.iter().chain(&tgt).any(|&x| x >= objects) {
            return bad("endpoint out of range".into());
        }
        let mut flat = vec![NONE; m * m];
        for f in 0..m {
            for g in 0..m {
                match comp[f][g] {
                    Some(h) if tgt[f] == src[g] => {
                        if h >= m || src[h] != src[f] || tgt[h] != tgt[g] {
                            return bad(format!("composite of {f} and {g} has wrong endpoints"));
                        }
                        flat[f * m + g] = h;
                    }
                    None if tgt[f] != src[g] => {}
                    _ => return bad(format!("composite of {f} and {g} defined incorrectly")),
                }
            }
        }
        let ident = (0..objects)
            .map(|x| {
                (0..m)
                    .find(|&e| {
                        src[e] == x
                            && tgt[e] == x
                            && (0..m).all(|f| (src[f] != x || flat[e * m + f] == f) && (tgt[f] != x || flat[f * m + e] == f))
                    })
                    .ok_or_else(|| Error::InvalidGroupoid(format!("object {x} has no identity")))
            })
            .collect::<Result<Vec<_>>>()?;
        for f in 0..m {
            for g in (0..m).filter(|&g| tgt[f] == src[g]) {
                let fg = flat[f * m + g];
                for h in (0..m).filter(|&h| tgt[g] == src[h]) {
                    if flat[fg * m + h] != flat[f * m + flat[g * m + h]] {
                        return bad(format!("not associative at {f}, {g}, {h}"));
                    }
                }
            }
        }
        let inverse = (0..m)
            .map(|f| {
                (0..m)
                    .find(|&g| flat[f * m + g] == ident[src[f]] && flat[g * m + f] == ident[tgt[f]])
                    .ok_or_else(|| Error::InvalidGroupoid(format!("morphism {f} is not invertible")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Groupoid { objects, src, tgt, comp: flat, ident, inverse })
    }

    /// Built from data known to be valid; identities and inverses are located.
    fn assemble(objects: usize, src: Vec<usize>, tgt: Vec<usize>, comp: Vec<usize>, ident: Vec<usize>) -> Groupoid {
        let m = src.len();
        let inverse = (0..m)
            .map(|f| (0..m).find(|&g| comp[f * m + g] == ident[src[f]]).expect("groupoid"))
            .collect();
        Groupoid { objects, src, tgt, comp, ident, inverse }
    }

    pub fn from_data(data: &GroupoidData) -> Result<Groupoid> {
        Groupoid::new(
            data.objects,
            data.morphisms.iter().map(|m| m.src).collect(),
            data.morphisms.iter().map(|m| m.tgt).collect(),
            &data.comp,
        )
    }

    pub fn to_data(&self) -> GroupoidData {
        let m = self.morphisms();
        GroupoidData {
            objects: self.objects,
            morphisms: (0..m).map(|f| MorphismData { src: self.src[f], tgt: self.tgt[f] }).collect(),
            comp: (0..m).map(|f| (0..m).map(|g| self.then(f, g)).collect()).collect(),
        }
    }

    /// `BG`: one object, morphisms the elements of `G`.
    pub fn from_group(g: &Group) -> Groupoid {
        Groupoid::connected(1, g)
    }

    /// `n` objects, one morphism between any two.
    pub fn codiscrete(n: usize) -> Groupoid {
        Groupoid::connected(n, &Group::trivial())
    }

    /// Codiscrete on `n` objects times `BG`; morphism `(i, j, a)` has id `(i n + j) |G| + a`.
    pub fn connected(n: usize, g: &Group) -> Groupoid {
        let k = g.order();
        let m = n * n * k;
        let id = |i: usize, j: usize, a: usize| (i * n + j) * k + a;
        let mut src = Vec::with_capacity(m);
        let mut tgt = Vec::with_capacity(m);
        for i in 0..n {
            for j in 0..n {
                for _ in 0..k {
                    src.push(i);
                    tgt.push(j);
                }
            }
        }
        let mut comp = vec![NONE; m * m];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    for a in 0..k {
                        for b in 0..k {
                            comp[id(i, j, a) * m + id(j, l, b)] = id(i, l, g.mul(a, b));
                        }
                    }
                }
            }
        }
        let ident = (0..n).map(|i| id(i, i, 0)).collect();
        Groupoid::assemble(n, src, tgt, comp, ident)
    }

    pub fn disjoint_union(&self, other: &Groupoid) -> Groupoid {
        let (m1, m2) = (self.morphisms(), other.morphisms());
        let m = m1 + m2;
        let src = self.src.iter().copied().chain(other.src.iter().map(|&x| x + self.objects)).collect();
        let tgt = self.tgt.iter().copied().chain(other.tgt.iter().map(|&x| x + self.objects)).collect();
        let mut comp = vec![NONE; m * m];
        for f in 0..m1 {
            for g in 0..m1 {
                comp[f * m + g] = self.comp[f * m1 + g];
            }
        }
        for f in 0..m2 {
            for g in 0..m2 {
                let c = other.comp[f * m2 + g];
                comp[(f + m1) * m + g + m1] = if c == NONE { NONE } else { c + m1 };
            }
        }
        let ident = self.ident.iter().copied().chain(other.ident.iter().map(|&e| e + m1)).collect();
        Groupoid::assemble(self.objects + other.objects, src, tgt, comp, ident)
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn morphisms(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn then(&self, f: usize, g: usize) -> Option<usize> {
        let c = self.comp[f * self.morphisms() + g];
        (c != NONE).then_some(c)
    }

    pub fn identity(&self, x: usize) -> usize {
        self.ident[x]
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inverse[f]
    }

    /// Connected component of each object, numbered by least object.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![NONE; self.objects];
        let mut count = 0;
        for x in 0..self.objects {
            if comp[x] != NONE {
                continue;
            }
            for f in 0..self.morphisms() {
                if self.src[f] == x {
                    comp[self.tgt[f]] = count;
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// Automorphisms of `x` as a group, with their morphism ids in group order.
    pub fn automorphism_group(&self, x: usize) -> (Group, Vec<usize>) {
        let m = self.morphisms();
        let mut auts: Vec<usize> = (0..m).filter(|&f| self.src[f] == x && self.tgt[f] == x).collect();
        auts.sort_by_key(|&f| (f != self.ident[x], f));
        let pos: HashMap<usize, usize> = auts.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let table: Vec<Vec<usize>> = auts.iter().map(|&f| auts.iter().map(|&g| pos[&self.comp[f * m + g]]).collect()).collect();
        (Group::from_table(&table).expect("automorphisms form a group"), auts)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidFunctor {
    source: Groupoid,
    target: Groupoid,
    obj: Vec<usize>,
    mor: Vec<usize>,
}

impl GroupoidFunctor {
    pub fn new(source: Groupoid, target: Groupoid, obj: Vec<usize>, mor: Vec<usize>) -> Result<GroupoidFunctor> {
        let bad = |s: String| Err(Error::InvalidFunctor(s));
        if obj.len() != source.objects || mor.len() != source.morphisms() {
            return bad("map lengths disagree with the source".into());
        }
        if obj.iter().any(|&x| x >= target.objects) || mor.iter().any(|&f| f >= target.morphisms()) {
            return bad("image out of range".into());
        }
        for f in 0..source.morphisms() {
            if target.src[mor[f]] != obj[source.src[f]] || target.tgt[mor[f]] != obj[source.tgt[f]] {
                return bad(format!("morphism {f} changes endpoints"));
            }
        }
        for x in 0..source.objects {
            if mor[source.ident[x]] != target.ident[obj[x]] {
                return bad(format!("identity of {x} not preserved"));
            }
        }
        let m = source.morphisms();
        for f in 0..m {
            for g in 0..m {
                let c = source.comp[f * m + g];
                if c != NONE && target.then(mor[f], mor[g]) != Some(mor[c]) {
                    return bad(format!("composite of {f} and {g} not preserved"));
                }
            }
        }
        Ok(GroupoidFunctor { source, target, obj, mor })
    }

    pub fn identity(g: &Groupoid) -> GroupoidFunctor {
        GroupoidFunctor { source: g.clone(), target: g.clone(), obj: (0..g.objects).collect(), mor: (0..g.morphisms()).collect() }
    }

    pub fn source(&self) -> &Groupoid {
        &self.source
    }

    pub fn target(&self) -> &Groupoid {
        &self.target
    }

    pub fn on_object(&self, x: usize) -> usize {
        self.obj[x]
    }

    pub fn on_morphism(&self, f: usize) -> usize {
        self.mor[f]
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupoidFunctor) -> Result<GroupoidFunctor> {
        if self.target != next.source {
            return Err(Error::FeetMismatch);
        }
        Ok(GroupoidFunctor {
            source: self.source.clone(),
            target: next.target.clone(),
            obj: self.obj.iter().map(|&x| next.obj[x]).collect(),
            mor: self.mor.iter().map(|&f| next.mor[f]).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibrationCheck {
    pub holds: bool,
    /// `(morphism of the target, object of the source, number of lifts)`
    pub counterexample: Option<(usize, usize, usize)>,
}

/// Every target morphism out of `F(x)` lifts to exactly one morphism out of `x`.
pub fn is_discrete_fibration(f: &GroupoidFunctor) -> FibrationCheck {
    let (s, t) = (&f.source, &f.target);
    let mut lifts = vec![0usize; t.morphisms()];
    for x in 0..s.objects {
        let outs: Vec<usize> = (0..s.morphisms()).filter(|&a| s.src[a] == x).collect();
        for &a in &outs {
            lifts[f.mor[a]] += 1;
        }
        for phi in (0..t.morphisms()).filter(|&phi| t.src[phi] == f.obj[x]) {
            if lifts[phi] != 1 {
                return FibrationCheck { holds: false, counterexample: Some((phi, x, lifts[phi])) };
            }
        }
        for &a in &outs {
            lifts[f.mor[a]] = 0;
        }
    }
    FibrationCheck { holds: true, counterexample: None }
}

/// Strict pullback `A x_C B` with its projections; objects and morphisms are
/// matching pairs in lexicographic order.
pub fn groupoid_pullback(f: &GroupoidFunctor, g: &GroupoidFunctor) -> Result<(Groupoid, GroupoidFunctor, GroupoidFunctor)> {
    if f.target != g.target {
        return Err(Error::FeetMismatch);
    }
    let (a, b) = (&f.source, &g.source);
    let mut obj_id = vec![NONE; a.objects * b.objects];
    let mut objs = Vec::new();
    for x in 0..a.objects {
        for y in 0..b.objects {
            if f.obj[x] == g.obj[y] {
                obj_id[x * b.objects + y] = objs.len();
                objs.push((x, y));
            }
        }
    }
    let mb = b.morphisms();
    let mut mor_id = vec![NONE; a.morphisms() * mb];
    let mut mors = Vec::new();
    for p in 0..a.morphisms() {
        for q in 0..mb {
            if f.mor[p] == g.mor[q] {
                mor_id[p * mb + q] = mors.len();
                mors.push((p, q));
            }
        }
    }
    let m = mors.len();
    let src: Vec<usize> = mors.iter().map(|&(p, q)| obj_id[a.src[p] * b.objects + b.src[q]]).collect();
    let tgt: Vec<usize> = mors.iter().map(|&(p, q)| obj_id[a.tgt[p] * b.objects + b.tgt[q]]).collect();
    let mut comp = vec![NONE; m * m];
    for (i, &(p, q)) in mors.iter().enumerate() {
        for (j, &(p2, q2)) in mors.iter().enumerate() {
            if tgt[i] == src[j] {
                let (c1, c2) = (a.comp[p * a.morphisms() + p2], b.comp[q * mb + q2]);
                comp[i * m + j] = mor_id[c1 * mb + c2];
            }
        }
    }
    let ident = objs.iter().map(|&(x, y)| mor_id[a.ident[x] * mb + b.ident[y]]).collect();
    let p = Groupoid::assemble(objs.len(), src, tgt, comp, ident);
    let p1 = GroupoidFunctor {
        source: p.clone(),
        target: a.clone(),
        obj: objs.iter().map(|o| o.0).collect(),
        mor: mors.iter().map(|o| o.0).collect(),
    };
    let p2 = GroupoidFunctor {
        source: p.clone(),
        target: b.clone(),
        obj: objs.iter().map(|o| o.1).collect(),
        mor: mors.iter().map(|o| o.1).collect(),
    };
    Ok((p, p1, p2))
}

/// `B_G X`: objects the points of `X`, a morphism `(x, g): x -> x g` with id
/// `x |G| + g`; and its projection to `BG`.
pub fn action_groupoid(x: &GSet) -> (Groupoid, GroupoidFunctor) {
    let g = x.group();
    let (n, k) = (x.size(), g.order());
    let m = n * k;
    let src: Vec<usize> = (0..m).map(|f| f / k).collect();
    let tgt: Vec<usize> = (0..m).map(|f| x.act(f / k, f % k)).collect();
    let mut comp = vec![NONE; m * m];
    for f in 0..m {
        let y = tgt[f];
        for b in 0..k {
            comp[f * m + y * k + b] = (f / k) * k + g.mul(f % k, b);
        }
    }
    let ident = (0..n).map(|p| p * k).collect();
    let gpd = Groupoid::assemble(n, src, tgt, comp, ident);
    let bg = Groupoid::from_group(g);
    let proj = GroupoidFunctor { source: gpd.clone(), target: bg, obj: vec![0; n], mor: (0..m).map(|f| f % k).collect() };
    (gpd, proj)
}

/// `B_G f: B_G X -> B_G Y`.
pub fn action_functor(f: &EquivariantMap) -> GroupoidFunctor {
    let (s, _) = action_groupoid(f.source());
    let (t, _) = action_groupoid(f.target());
    let k = f.source().group().order();
    GroupoidFunctor {
        obj: f.map().to_vec(),
        mor: (0..s.morphisms()).map(|a| f.apply(a / k) * k + a % k).collect(),
        source: s,
        target: t,
    }
}

/// `left <- apex -> right`, the left leg a discrete fibration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalSpan {
    ingressive: GroupoidFunctor,
    egressive: GroupoidFunctor,
}

impl GlobalSpan {
    pub fn new(ingressive: GroupoidFunctor, egressive: GroupoidFunctor) -> Result<GlobalSpan> {
        if ingressive.source != egressive.source {
            return Err(Error::FeetMismatch);
        }
        let check = is_discrete_fibration(&ingressive);
        if let Some((phi, x, n)) = check.counterexample {
            return Err(Error::IngressiveNotFibration(format!("morphism {phi} has {n} lifts at object {x}")));
        }
        Ok(GlobalSpan { ingressive, egressive })
    }

    pub fn left(&self) -> &Groupoid {
        &self.ingressive.target
    }

    pub fn right(&self) -> &Groupoid {
        &self.egressive.target
    }

    pub fn apex(&self) -> &Groupoid {
        &self.ingressive.source
    }

    pub fn ingressive(&self) -> &GroupoidFunctor {
        &self.ingressive
    }

    pub fn egressive(&self) -> &GroupoidFunctor {
        &self.egressive
    }

    pub fn identity(g: &Groupoid) -> GlobalSpan {
        let id = GroupoidFunctor::identity(g);
        GlobalSpan { ingressive: id.clone(), egressive: id }
    }

    /// `B_G` of a span of G-sets.
    pub fn from_gset_span(s: &Span) -> GlobalSpan {
        let l = action_functor(&s.left_leg());
        let r = action_functor(&s.right_leg());
        GlobalSpan::new(l, r).expect("maps of G-sets give discrete fibrations")
    }
}

/// `s` then `t`: the apex is the strict pullback along the fibration leg of `t`.
pub fn compose_global_spans(s: &GlobalSpan, t: &GlobalSpan) -> Result<GlobalSpan> {
    if s.right() != t.left() {
        return Err(Error::FeetMismatch);
    }
    let (_, p1, p2) = groupoid_pullback(&s.egressive, &t.ingressive)?;
    GlobalSpan::new(p1.then(&s.ingressive)?, p2.then(&t.egressive)?)
}

#[derive(Clone, Debug)]
pub struct SkeletonEntry {
    pub objects: usize,
    pub group: Arc<Group>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkeletonData {
    pub objects: usize,
    pub group_order: usize,
    pub group_table: Vec<Vec<usize>>,
}

impl SkeletonEntry {
    pub fn data(&self) -> SkeletonData {
        SkeletonData { objects: self.objects, group_order: self.group.order(), group_table: self.group.table() }
    }
}

/// One entry per component, in order of least object.
pub fn groupoid_equivalence_skeleton(g: &Groupoid) -> Vec<SkeletonEntry> {
    let (comp, count) = g.components();
    (0..count)
        .map(|c| {
            let base = comp.iter().position(|&k| k == c).expect("nonempty component");
            SkeletonEntry { objects: comp.iter().filter(|&&k| k == c).count(), group: Arc::new(g.automorphism_group(base).0) }
        })
        .collect()
}

/// Components can be matched with isomorphic automorphism groups, and equal
/// object counts when `strict`.
pub fn skeleta_match(a: &[SkeletonEntry], b: &[SkeletonEntry], strict: bool) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let ok: Vec<Vec<bool>> = a
        .iter()
        .map(|x| b.iter().map(|y| (!strict || x.objects == y.objects) && isomorphic(&x.group, &y.group)).collect())
        .collect();
    // bipartite matching by augmenting paths
    fn augment(i: usize, ok: &[Vec<bool>], seen: &mut [bool], owner: &mut [usize]) -> bool {
        for j in 0..ok[i].len() {
            if ok[i][j] && !seen[j] {
                seen[j] = true;
                if owner[j] == NONE || augment(owner[j], ok, seen, owner) {
                    owner[j] = i;
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![NONE; b.len()];
    (0..a.len()).all(|i| augment(i, &ok, &mut vec![false; b.len()], &mut owner))
}

pub fn equivalent(a: &Groupoid, b: &Groupoid) -> bool {
    skeleta_match(&groupoid_equivalence_skeleton(a), &groupoid_equivalence_skeleton(b), false)
}

/// All functors `A -> B`, through a spanning tree of each component of `A` and
/// homomorphisms between automorphism groups.
pub fn functors(a: &Groupoid, b: &Groupoid) -> Vec<GroupoidFunctor> {
    let (comp, count) = a.components();
    // per component: base, tree arrow base -> x for each object, automorphism data
    struct Part {
        base: usize,
        objects: Vec<usize>,
        tree: Vec<usize>,
        auts: Vec<usize>,
        group: Group,
    }
    let parts: Vec<Part> = (0..count)
        .map(|c| {
            let objects: Vec<usize> = (0..a.objects).filter(|&x| comp[x] == c).collect();
            let base = objects[0];
            let tree = objects
                .iter()
                .map(|&x| (0..a.morphisms()).find(|&f| a.src[f] == base && a.tgt[f] == x).expect("connected"))
                .collect();
            let (group, auts) = a.automorphism_group(base);
            Part { base, objects, tree, auts, group }
        })
        .collect();
    // per component: every local assignment (object map, morphism map restricted)
    let locals: Vec<Vec<Vec<(usize, usize)>>> = parts
        .iter()
        .map(|p| {
            let mut out = Vec::new();
            for y in 0..b.objects {
                let (bg, bauts) = b.automorphism_group(y);
                let homs = enumerate_homomorphisms(&Arc::new(p.group.clone()), &Arc::new(bg)).unwrap_or_default();
                let outs: Vec<usize> = (0..b.morphisms()).filter(|&f| b.src[f] == y).collect();
                // images of the tree arrows other than the identity at the base
                let slots = p.objects.len() - 1;
                let mut pick = vec![0usize; slots];
                loop {
                    let mut tree_img = vec![b.ident[y]];
                    tree_img.extend(pick.iter().map(|&i| outs[i]));
                    for hom in &homs {
                        let mut assign = Vec::with_capacity(a.morphisms());
                        let idx: HashMap<usize, usize> = p.objects.iter().enumerate().map(|(i, &x)| (x, i)).collect();
                        for f in (0..a.morphisms()).filter(|&f| comp[a.src[f]] == comp[p.base]) {
                            let (i, j) = (idx[&a.src[f]], idx[&a.tgt[f]]);
                            // f = t_i^-1 . (t_i f t_j^-1) . t_j
                            let loop_f = a.then(a.then(p.tree[i], f).expect("composable"), a.inverse[p.tree[j]]).expect("composable");
                            let k = p.auts.iter().position(|&x| x == loop_f).expect("automorphism");
                            let img = bauts[hom.apply(k)];
                            let v = b.then(b.then(b.inverse[tree_img[i]], img).expect("composable"), tree_img[j]).expect("composable");
                            assign.push((f, v));
                        }
                        out.push(assign);
                    }
                    // next tree assignment
                    let mut i = 0;
                    while i < slots {
                        pick[i] += 1;
                        if pick[i] < outs.len() {
                            break;
                        }
                        pick[i] = 0;
                        i += 1;
                    }
                    if i == slots {
                        break;
                    }
                }
            }
            out
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; count];
    if locals.iter().any(|l| l.is_empty()) {
        return out;
    }
    loop {
        let mut mor = vec![0; a.morphisms()];
        for (c, &i) in choice.iter().enumerate() {
            for &(f, v) in &locals[c][i] {
                mor[f] = v;
            }
        }
        let obj = (0..a.objects).map(|x| b.tgt[mor[a.ident[x]]]).collect();
        out.push(GroupoidFunctor { source: a.clone(), target: b.clone(), obj, mor });
        let mut c = 0;
        while c < count {
            choice[c] += 1;
            if choice[c] < locals[c].len() {
                break;
            }
            choice[c] = 0;
            c += 1;
        }
        if c == count {
            break;
        }
    }
    out
}

/// Connected groupoids `codiscrete(n) x BG` with at most `max_objects` objects
/// and `max_morphisms` morphisms, over the catalog groups.
pub fn groupoid_corpus(max_objects: usize, max_morphisms: usize) -> Vec<Groupoid> {
    let groups = catalog();
    let mut out = Vec::new();
    for n in 1..=max_objects {
        for g in &groups {
            if n * n * g.order() <= max_morphisms {
                out.push(Groupoid::connected(n, g));
            }
        }
    }
    out
}

/// `BG <- B_G X -> BH` for a left-free biset `Z` in `^H Fin_G` with `X = H \ Z`;
/// the right leg records `c(x, g)` with `s(x) g = c(x, g) s(x g)` for the least
/// point `s(x)` of each left orbit.
pub fn biset_to_global_span(z: &Biset) -> Result<GlobalSpan> {
    z.check_left_free()?;
    let (h, g) = (z.left_group(), z.right_group());
    let (x, ids) = z.left_quotient();
    let section: Vec<usize> = (0..x.size()).map(|o| ids.iter().position(|&i| i == o).expect("nonempty")).collect();
    let (k, proj) = action_groupoid(&x);
    let ng = g.order();
    let mor = (0..k.morphisms())
        .map(|f| {
            let (p, a) = (f / ng, f % ng);
            let moved = z.right_act(section[p], a);
            let target = section[x.act(p, a)];
            (0..h.order()).find(|&c| z.left_act(c, target) == moved).expect("left orbits")
        })
        .collect();
    let e = GroupoidFunctor::new(k.clone(), Groupoid::from_group(h), vec![0; k.objects()], mor)?;
    GlobalSpan::new(proj, e)
}

/// Inverse of [`biset_to_global_span`]: `Z = H x K_0` with `a (c, x) = (a c, x)`
/// and `(c, x) g = (c E(lift), x g)`.
pub fn global_span_to_biset(s: &GlobalSpan, g: &Arc<Group>, h: &Arc<Group>) -> Result<Biset> {
    if *s.left() != Groupoid::from_group(g) || *s.right() != Groupoid::from_group(h) {
        return Err(Error::FeetMismatch);
    }
    let k = s.apex();
    let n = k.objects();
    let (ng, nh) = (g.order(), h.order());
    let mut lift = vec![NONE; n * ng];
    for f in 0..k.morphisms() {
        lift[k.src(f) * ng + s.ingressive.on_morphism(f)] = f;
    }
    let left: Vec<Vec<usize>> = (0..nh * n).map(|z| (0..nh).map(|a| h.mul(a, z / n) * n + z % n).collect()).collect();
    let right: Vec<Vec<usize>> = (0..nh * n)
        .map(|z| {
            let (c, x) = (z / n, z % n);
            (0..ng)
                .map(|a| {
                    let f = lift[x * ng + a];
                    h.mul(c, s.egressive.on_morphism(f)) * n + k.tgt(f)
                })
                .collect()
        })
        .collect();
    Biset::new(h.clone(), g.clone(), &left, &right, true)
}

/// The one-object span realizes the biset: round trip through a span.
pub fn one_object_round_trip(z: &Biset) -> Result<bool> {
    let s = biset_to_global_span(z)?;
    let back = global_span_to_biset(&s, z.right_group(), z.left_group())?;
    Ok(crate::gset::biset_iso(&back, z)?.is_some())
}

/// Composition of one-object spans against `W x_H Z`.
pub fn one_object_composition(z: &Biset, w: &Biset) -> Result<bool> {
    if !same_group(z.left_group(), w.right_group()) {
        return Err(Error::GroupMismatch);
    }
    let s = compose_global_spans(&biset_to_global_span(z)?, &biset_to_global_span(w)?)?;
    let via_spans = global_span_to_biset(&s, z.right_group(), w.left_group())?;
    let direct = crate::duality::biset_compose(w, z)?;
    Ok(crate::gset::biset_iso(&via_spans, &direct)?.is_some())
}
