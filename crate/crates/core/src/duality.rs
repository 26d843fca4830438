//! Biset pairing, torsors, tensor functors on the orbit category of
//! `^H Fin_G`, and a bounded verifier for the duality between separable bisets
//! and functors preserving pullbacks, coproducts and epimorphisms.
//!
//! Conventions: a biset in `^H Fin_G` has `left = H`, `right = G`; it is a right
//! set over `P = H^op x G`. Objects of the functor domain are the transitive
//! left-free P-sets `H_k \ P`, morphisms are the orbit morphisms between them.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Group, Subgroup};
use crate::gset::{biset_group, biset_iso, equivariant_maps, pullback_raw, same_group, Biset, EquivariantMap, GSet};
use crate::mackey::{orbit_morphisms, OrbitMorphism};

/// Largest `|G| |H|` accepted by the verifier.
pub const DUALITY_CAP: usize = 64;

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    // the least element stays the root
    if ra < rb {
        parent[rb] = ra;
    } else if rb < ra {
        parent[ra] = rb;
    }
}

/// Quotient of `0..n` by the equivalence relation generated by `pairs`.
fn quotient(n: usize, pairs: impl Iterator<Item = (usize, usize)>) -> PairingResult {
    let mut parent: Vec<usize> = (0..n).collect();
    for (a, b) in pairs {
        union(&mut parent, a, b);
    }
    let mut class = vec![usize::MAX; n];
    let mut sections = Vec::new();
    let mut projection = vec![0; n];
    for z in 0..n {
        let r = find(&mut parent, z);
        if class[r] == usize::MAX {
            class[r] = sections.len();
            sections.push(z);
        }
        projection[z] = class[r];
    }
    PairingResult { size: sections.len(), projection, sections }
}

/// `X x_(H,G) Y` as a quotient of `X x Y`, raw pairs encoded `x |Y| + y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingResult {
    pub size: usize,
    pub projection: Vec<usize>,
    /// least raw pair in each class
    pub sections: Vec<usize>,
}

/// `X` in `^H Fin_G`, `Y` in `^G Fin_H`.
pub fn pairing(x: &Biset, y: &Biset) -> Result<PairingResult> {
    if !same_group(x.right_group(), y.left_group()) || !same_group(x.left_group(), y.right_group()) {
        return Err(Error::GroupMismatch);
    }
    let gens_g = x.right_group().generating_set();
    let gens_h = x.left_group().generating_set();
    let ny = y.size();
    let pairs = (0..x.size()).flat_map(|a| (0..ny).map(move |b| (a, b))).flat_map(|(a, b)| {
        let g_rel = gens_g.iter().map(move |&g| ((x.right_act(a, g)) * ny + b, a * ny + y.left_act(g, b)));
        let h_rel = gens_h.iter().map(move |&h| (x.left_act(h, a) * ny + b, a * ny + y.right_act(b, h)));
        g_rel.chain(h_rel).collect::<Vec<_>>()
    });
    Ok(quotient(x.size() * ny, pairs))
}

/// `W x_H Z` for `W` in `^J Fin_H` and `Z` in `^H Fin_G`, a biset in `^J Fin_G`.
pub fn biset_compose(w: &Biset, z: &Biset) -> Result<Biset> {
    if !same_group(w.right_group(), z.left_group()) {
        return Err(Error::GroupMismatch);
    }
    let nz = z.size();
    let gens = w.right_group().generating_set();
    let pairs = (0..w.size())
        .flat_map(|a| (0..nz).map(move |b| (a, b)))
        .flat_map(|(a, b)| gens.iter().map(move |&h| (w.right_act(a, h) * nz + b, a * nz + z.left_act(h, b))).collect::<Vec<_>>());
    let q = quotient(w.size() * nz, pairs);
    let (j, g) = (w.left_group().clone(), z.right_group().clone());
    let left: Vec<Vec<usize>> = q
        .sections
        .iter()
        .map(|&s| (0..j.order()).map(|a| q.projection[w.left_act(a, s / nz) * nz + s % nz]).collect())
        .collect();
    let right: Vec<Vec<usize>> = q
        .sections
        .iter()
        .map(|&s| (0..g.order()).map(|b| q.projection[(s / nz) * nz + z.right_act(s % nz, b)]).collect())
        .collect();
    Biset::new(j, g, &left, &right, false)
}

/// `(H^op x G) x_(H,G) X -> X`, `[(a, b), x] |-> b x a`, is a well-defined bijection.
pub fn pairing_unit(x: &Biset) -> Result<bool> {
    let (g, h) = (x.left_group(), x.right_group());
    let canonical = Biset::canonical(h, g);
    let pr = pairing(&canonical, x)?;
    let (ng, nx) = (g.order(), x.size());
    let mut image = vec![usize::MAX; pr.size];
    for (raw, &c) in pr.projection.iter().enumerate() {
        let (q, xx) = (raw / nx, raw % nx);
        let (a, b) = (q / ng, q % ng);
        let t = x.right_act(x.left_act(b, xx), a);
        if image[c] == usize::MAX {
            image[c] = t;
        } else if image[c] != t {
            return Ok(false);
        }
    }
    let mut hit = vec![false; nx];
    for &t in &image {
        if hit[t] {
            return Ok(false);
        }
        hit[t] = true;
    }
    Ok(pr.size == nx)
}

/// All bisets with `left`, `right` of size at most `bound`, one per isomorphism
/// class, as sums of model orbits in class order.
pub fn biset_corpus(left: &Arc<Group>, right: &Arc<Group>, bound: usize, left_free_only: bool) -> Vec<Biset> {
    let p = biset_group(left, right);
    let lat = p.lattice();
    let ng = right.order();
    let classes: Vec<(usize, usize)> = (0..lat.num_classes())
        .map(|c| (c, p.order() / lat.subgroup(lat.rep(c)).order()))
        .filter(|&(c, size)| {
            size <= bound && (!left_free_only || lat.subgroup(lat.rep(c)).elements().iter().all(|&q| q == 0 || q % ng != 0))
        })
        .collect();
    let mut out = Vec::new();
    let mut picked = Vec::new();
    fn rec(
        classes: &[(usize, usize)],
        start: usize,
        room: usize,
        picked: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        out.push(picked.clone());
        for i in start..classes.len() {
            if classes[i].1 <= room {
                picked.push(i);
                rec(classes, i, room - classes[i].1, picked, out);
                picked.pop();
            }
        }
    }
    let mut multisets = Vec::new();
    rec(&classes, 0, bound, &mut picked, &mut multisets);
    for m in multisets {
        let mut orbits: Vec<(usize, usize)> = Vec::new();
        for i in m {
            let sub = lat.rep(classes[i].0);
            match orbits.last_mut() {
                Some((s, k)) if *s == sub => *k += 1,
                _ => orbits.push((sub, 1)),
            }
        }
        out.push(Biset::from_pset(left.clone(), right.clone(), GSet::from_orbits(&p, &orbits)));
    }
    out.sort_by_key(|b| b.size());
    out
}

/// Transitive left-free objects of `^H Fin_G` and all maps between them.
#[derive(Debug)]
pub struct OrbitCategory {
    left: Arc<Group>,
    right: Arc<Group>,
    group: Arc<Group>,
    objects: Vec<usize>,
    orbits: BTreeMap<usize, GSet>,
    coset_reps: BTreeMap<usize, Vec<usize>>,
    morphisms: Vec<OrbitMorphism>,
}

impl OrbitCategory {
    /// `left = H`, `right = G`; objects are orbits of size at most `bound`.
    pub fn new(left: &Arc<Group>, right: &Arc<Group>, bound: usize) -> Result<OrbitCategory> {
        let p = biset_group(left, right);
        if p.order() > bound {
            return Err(Error::CorpusOverflow(format!("corpus bound {bound} excludes the canonical biset of size {}", p.order())));
        }
        let lat = p.lattice();
        let ng = right.order();
        let objects: Vec<usize> = (0..lat.num_classes())
            .filter(|&c| lat.subgroup(lat.rep(c)).elements().iter().all(|&q| q == 0 || q % ng != 0))
            .collect();
        let mut orbits = BTreeMap::new();
        let mut coset_reps = BTreeMap::new();
        for &k in &objects {
            let o = GSet::orbit_of_subgroup(&p, lat.rep(k));
            let mut reps = vec![usize::MAX; o.size()];
            for q in 0..p.order() {
                let z = o.act(0, q);
                if reps[z] == usize::MAX {
                    reps[z] = q;
                }
            }
            orbits.insert(k, o);
            coset_reps.insert(k, reps);
        }
        let morphisms = orbit_morphisms(&p)
            .into_iter()
            .filter(|m| orbits.contains_key(&m.from) && orbits.contains_key(&m.to))
            .collect();
        Ok(OrbitCategory { left: left.clone(), right: right.clone(), group: p, objects, orbits, coset_reps, morphisms })
    }

    pub fn left_group(&self) -> &Arc<Group> {
        &self.left
    }

    pub fn right_group(&self) -> &Arc<Group> {
        &self.right
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    pub fn orbit(&self, k: usize) -> &GSet {
        &self.orbits[&k]
    }

    pub fn morphisms(&self) -> &[OrbitMorphism] {
        &self.morphisms
    }

    /// The object `H^op x G` itself.
    pub fn regular(&self) -> usize {
        self.group.lattice().class_of(0)
    }

    pub fn identity(&self, k: usize) -> OrbitMorphism {
        OrbitMorphism { from: k, to: k, d: 0 }
    }

    pub fn apply(&self, m: OrbitMorphism, z: usize) -> usize {
        let o = &self.orbits[&m.to];
        o.act(o.act(0, m.d), self.coset_reps[&m.from][z])
    }

    pub fn table(&self, m: OrbitMorphism) -> Vec<usize> {
        (0..self.orbits[&m.from].size()).map(|z| self.apply(m, z)).collect()
    }

    /// `first` then `second`.
    pub fn then(&self, first: OrbitMorphism, second: OrbitMorphism) -> OrbitMorphism {
        let o = &self.orbits[&second.to];
        let d = self.coset_reps[&second.to][o.act(0, self.group.mul(second.d, first.d))];
        OrbitMorphism { from: first.from, to: second.to, d }
    }

    /// The orbit morphism into `target` matching `z -> point . c . z` out of `H_k`,
    /// where `c^-1 S c = H_k` for the stabilizer `S` of the source point.
    fn arrow(&self, k: usize, c: usize, target: usize, point: usize) -> OrbitMorphism {
        let o = &self.orbits[&target];
        OrbitMorphism { from: k, to: target, d: self.coset_reps[&target][o.act(point, c)] }
    }
}

/// A functor on an [`OrbitCategory`], extended additively to sums of orbits.
#[derive(Clone, Debug)]
pub struct FunctorTable {
    category: Arc<OrbitCategory>,
    pub values: BTreeMap<usize, usize>,
    pub maps: BTreeMap<OrbitMorphism, Vec<usize>>,
    source: Option<(Biset, BTreeMap<usize, PairingResult>)>,
}

impl FunctorTable {
    /// Checks shapes, identities and every composite.
    pub fn new(
        category: &Arc<OrbitCategory>,
        values: BTreeMap<usize, usize>,
        maps: BTreeMap<OrbitMorphism, Vec<usize>>,
    ) -> Result<FunctorTable> {
        for &k in category.objects() {
            if !values.contains_key(&k) {
                return Err(Error::InvalidFunctor(format!("no value on object {k}")));
            }
        }
        for &m in category.morphisms() {
            let t = maps.get(&m).ok_or_else(|| Error::InvalidFunctor(format!("no value on {m:?}")))?;
            if t.len() != values[&m.from] || t.iter().any(|&v| v >= values[&m.to]) {
                return Err(Error::InvalidFunctor(format!("value on {m:?} has the wrong shape")));
            }
        }
        for &k in category.objects() {
            let id = &maps[&category.identity(k)];
            if id.iter().enumerate().any(|(i, &v)| i != v) {
                return Err(Error::InvalidFunctor(format!("identity on {k} not preserved")));
            }
        }
        for &a in category.morphisms() {
            for &b in category.morphisms().iter().filter(|b| b.from == a.to) {
                let c = category.then(a, b);
                let (fa, fb, fc) = (&maps[&a], &maps[&b], &maps[&c]);
                if (0..fa.len()).any(|i| fb[fa[i]] != fc[i]) {
                    return Err(Error::InvalidFunctor(format!("composite {a:?} then {b:?} not preserved")));
                }
            }
        }
        Ok(FunctorTable { category: category.clone(), values, maps, source: None })
    }

    pub fn category(&self) -> &Arc<OrbitCategory> {
        &self.category
    }

    pub fn value(&self, k: usize) -> usize {
        self.values[&k]
    }

    pub fn map(&self, m: OrbitMorphism) -> &[usize] {
        &self.maps[&m]
    }
}

/// `- x_(H,G) X` for `X` in `^G Fin_H`, on the orbits of size at most `bound`.
pub fn tensor_functor(x: &Biset, bound: usize) -> Result<FunctorTable> {
    let cat = Arc::new(OrbitCategory::new(x.right_group(), x.left_group(), bound)?);
    tensor_functor_on(&cat, x)
}

pub fn tensor_functor_on(cat: &Arc<OrbitCategory>, x: &Biset) -> Result<FunctorTable> {
    x.check_left_free()?;
    if !same_group(x.left_group(), cat.right_group()) || !same_group(x.right_group(), cat.left_group()) {
        return Err(Error::GroupMismatch);
    }
    let nx = x.size();
    let mut pairings = BTreeMap::new();
    let mut values = BTreeMap::new();
    for &k in cat.objects() {
        let z = Biset::from_pset(cat.left.clone(), cat.right.clone(), cat.orbit(k).clone());
        let pr = pairing(&z, x)?;
        values.insert(k, pr.size);
        pairings.insert(k, pr);
    }
    let mut maps = BTreeMap::new();
    for &m in cat.morphisms() {
        let (src, dst) = (&pairings[&m.from], &pairings[&m.to]);
        let t = src.sections.iter().map(|&s| dst.projection[cat.apply(m, s / nx) * nx + s % nx]).collect();
        maps.insert(m, t);
    }
    let mut f = FunctorTable::new(cat, values, maps)?;
    f.source = Some((x.clone(), pairings));
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackWitness {
    /// the cospan `O_a -> O_c <- O_b`
    pub left: OrbitMorphism,
    pub right: OrbitMorphism,
    /// the pullback as a sum of orbits with its two projections
    pub apex: Vec<(OrbitMorphism, OrbitMorphism)>,
    pub problem: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PceFailure {
    Pullback(PullbackWitness),
    Coproduct { left: usize, right: usize, problem: String },
    Epi { morphism: OrbitMorphism },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PceReport {
    pub pullbacks_checked: usize,
    pub coproducts_checked: usize,
    pub epis_checked: usize,
    pub failures: Vec<PceFailure>,
}

impl PceReport {
    pub fn clean(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_pullback_failure(&self) -> Option<&PullbackWitness> {
        self.failures.iter().find_map(|f| match f {
            PceFailure::Pullback(w) => Some(w),
            _ => None,
        })
    }
}

/// The pullback of two orbit morphisms with a common target, as a sum of orbits.
pub fn orbit_pullback(cat: &OrbitCategory, f: OrbitMorphism, g: OrbitMorphism) -> Vec<(OrbitMorphism, OrbitMorphism)> {
    let p = &cat.group;
    let lat = p.lattice();
    let (oa, ob) = (cat.orbit(f.from), cat.orbit(g.from));
    let (apex, p1, p2) = pullback_raw(oa, &cat.table(f), ob, &cat.table(g), cat.orbit(f.to).size());
    apex.orbit_decomposition()
        .into_iter()
        .map(|o| {
            let k = lat.class_of(o.stabilizer);
            let c = p.inv(lat.conjugator(o.stabilizer));
            (cat.arrow(k, c, f.from, p1[o.base]), cat.arrow(k, c, g.from, p2[o.base]))
        })
        .collect()
}

fn check_pullback(f: &FunctorTable, a: OrbitMorphism, b: OrbitMorphism) -> Option<PullbackWitness> {
    let cat = &f.category;
    let apex = orbit_pullback(cat, a, b);
    let witness = |problem: String| PullbackWitness { left: a, right: b, apex: apex.clone(), problem };
    let (fa, fb) = (f.map(a), f.map(b));
    let nb = f.value(b.from);
    // comparison F(P) -> F(O_a) x_F(O_c) F(O_b)
    let mut hit = vec![None; f.value(a.from) * nb];
    for (m, &(u, v)) in apex.iter().enumerate() {
        let (fu, fv) = (f.map(u), f.map(v));
        for w in 0..f.value(u.from) {
            let (s, t) = (fu[w], fv[w]);
            if fa[s] != fb[t] {
                return Some(witness(format!("image square does not commute at summand {m}, element {w}")));
            }
            if let Some((m0, w0)) = hit[s * nb + t] {
                return Some(witness(format!(
                    "mediating map not unique: ({m0},{w0}) and ({m},{w}) both go to ({s},{t})"
                )));
            }
            hit[s * nb + t] = Some((m, w));
        }
    }
    for s in 0..f.value(a.from) {
        for t in 0..nb {
            if fa[s] == fb[t] && hit[s * nb + t].is_none() {
                return Some(witness(format!("no mediating element over ({s},{t})")));
            }
        }
    }
    None
}

/// Pullbacks of all orbit cospans, coproducts of all orbit pairs and the empty
/// sum, and all epimorphisms between orbits, verified on the corpus.
pub fn preserves_pce(f: &FunctorTable) -> PceReport {
    let cat = f.category.clone();
    let mut report = PceReport::default();
    for &a in cat.morphisms() {
        for &b in cat.morphisms().iter().filter(|b| b.to == a.to) {
            report.pullbacks_checked += 1;
            if let Some(w) = check_pullback(f, a, b) {
                report.failures.push(PceFailure::Pullback(w));
            }
        }
    }
    for &m in cat.morphisms() {
        report.epis_checked += 1;
        let mut hit = vec![false; f.value(m.to)];
        for &v in f.map(m) {
            hit[v] = true;
        }
        if hit.contains(&false) {
            report.failures.push(PceFailure::Epi { morphism: m });
        }
    }
    // values on sums are sums by construction; a tensor functor is also compared
    // against the pairing of the sum itself
    let objs = cat.objects().to_vec();
    report.coproducts_checked += 1;
    if let Some((x, pairings)) = &f.source {
        let empty = Biset::from_pset(cat.left.clone(), cat.right.clone(), GSet::empty(cat.group.clone()));
        if pairing(&empty, x).map(|p| p.size).unwrap_or(1) != 0 {
            report.failures.push(PceFailure::Coproduct { left: usize::MAX, right: usize::MAX, problem: "empty sum not preserved".into() });
        }
        for (i, &a) in objs.iter().enumerate() {
            for &b in &objs[i..] {
                report.coproducts_checked += 1;
                if let Some(problem) = check_coproduct(&cat, x, pairings, a, b) {
                    report.failures.push(PceFailure::Coproduct { left: a, right: b, problem });
                }
            }
        }
    } else {
        report.coproducts_checked += objs.len() * (objs.len() + 1) / 2;
    }
    report
}

fn check_coproduct(cat: &OrbitCategory, x: &Biset, pairings: &BTreeMap<usize, PairingResult>, a: usize, b: usize) -> Option<String> {
    let (oa, ob) = (cat.orbit(a), cat.orbit(b));
    let sum = oa.coproduct(ob).expect("same group");
    let z = Biset::from_pset(cat.left.clone(), cat.right.clone(), sum);
    let pr = pairing(&z, x).expect("groups match");
    let nx = x.size();
    let mut hit = vec![false; pr.size];
    for (offset, k) in [(0, a), (oa.size(), b)] {
        for &s in &pairings[&k].sections {
            let c = pr.projection[(offset + s / nx) * nx + s % nx];
            if hit[c] {
                return Some(format!("inclusions overlap at {c}"));
            }
            hit[c] = true;
        }
    }
    if hit.contains(&false) {
        return Some("inclusions do not cover".into());
    }
    None
}

/// The biset `F(H^op x G)`, with `g x = F(lambda_(e,g)) x` and
/// `x h = F(lambda_(h,e)) x` for the left multiplications `lambda`.
pub fn reconstruct_biset(f: &FunctorTable) -> Result<Biset> {
    let report = preserves_pce(f);
    if let Some(first) = report.failures.first() {
        return Err(Error::PceViolation(format!("{first:?}")));
    }
    let cat = &f.category;
    let (h, g) = (cat.left.clone(), cat.right.clone());
    let r = cat.regular();
    let n = f.value(r);
    let lambda = |q: usize| f.map(OrbitMorphism { from: r, to: r, d: q });
    let ng = g.order();
    let left: Vec<Vec<usize>> = (0..n).map(|x| (0..ng).map(|b| lambda(b)[x]).collect()).collect();
    let right: Vec<Vec<usize>> = (0..n).map(|x| (0..h.order()).map(|a| lambda(a * ng)[x]).collect()).collect();
    let b = Biset::new(g, h, &left, &right, false).map_err(|e| Error::FreenessFailure(e.to_string()))?;
    b.check_left_free().map_err(|e| Error::FreenessFailure(e.to_string()))?;
    match b.is_separable() {
        Ok(Some(_)) => Ok(b),
        Ok(None) => Err(Error::FreenessFailure("reconstructed biset is not separable".into())),
        Err(e) => Err(Error::FreenessFailure(e.to_string())),
    }
}

/// Components of a natural transformation, one table per object.
pub type Transformation = BTreeMap<usize, Vec<usize>>;

fn regular_pset(f: &FunctorTable) -> GSet {
    let cat = &f.category;
    let p = &cat.group;
    let r = cat.regular();
    let table: Vec<Vec<usize>> = (0..f.value(r))
        .map(|x| (0..p.order()).map(|q| f.map(OrbitMorphism { from: r, to: r, d: p.inv(q) })[x]).collect())
        .collect();
    GSet::new(p.clone(), &table).expect("functor values give an action")
}

/// All natural transformations `F => F'`. Components on the regular orbit must be
/// equivariant; every other component is forced through the epimorphism from the
/// regular orbit, and naturality is then checked on every morphism.
pub fn natural_transformations(f: &FunctorTable, g: &FunctorTable) -> Result<(usize, Vec<Transformation>)> {
    if !Arc::ptr_eq(&f.category, &g.category) {
        return Err(Error::GroupMismatch);
    }
    let cat = &f.category;
    let r = cat.regular();
    let candidates = equivariant_maps(&regular_pset(f), &regular_pset(g))?;
    let mut out = Vec::new();
    'cand: for eta0 in candidates.iter() {
        let mut eta = Transformation::new();
        for &k in cat.objects() {
            let pi = OrbitMorphism { from: r, to: k, d: 0 };
            let (fp, gp) = (f.map(pi), g.map(pi));
            let mut comp = vec![usize::MAX; f.value(k)];
            for z in 0..f.value(r) {
                let v = gp[eta0[z]];
                let slot = &mut comp[fp[z]];
                if *slot != usize::MAX && *slot != v {
                    continue 'cand;
                }
                *slot = v;
            }
            eta.insert(k, comp);
        }
        for &m in cat.morphisms() {
            let (fm, gm) = (f.map(m), g.map(m));
            let (src, dst) = (&eta[&m.from], &eta[&m.to]);
            if (0..fm.len()).any(|z| dst[fm[z]] != gm[src[z]]) {
                continue 'cand;
            }
        }
        out.push(eta);
    }
    Ok((candidates.len(), out))
}

/// `- x_(H,G) phi` for a biset map `phi: X -> Y`.
pub fn induced_transformation(fx: &FunctorTable, fy: &FunctorTable, phi: &[usize]) -> Result<Transformation> {
    let ((x, px), (_, py)) = match (&fx.source, &fy.source) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidFunctor("not a tensor functor".into())),
    };
    let (nx, ny) = (x.size(), fy.source.as_ref().map(|s| s.0.size()).unwrap_or(0));
    let mut eta = Transformation::new();
    for (&k, pr) in px {
        eta.insert(k, pr.sections.iter().map(|&s| py[&k].projection[(s / nx) * ny + phi[s % nx]]).collect());
    }
    Ok(eta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsorCertificate {
    pub k_order: usize,
    /// `action[x][k] = x . k`
    pub action: Vec<Vec<usize>>,
    /// `(x, k) |-> (x, x . k)`, index `x |K| + k`, into the pairs of `X x_Y X`
    pub comparison: Vec<(usize, usize)>,
}

/// A certificate iff `f` is epi, `K`-invariant and `X x K -> X x_Y X` is bijective.
pub fn is_torsor(f: &EquivariantMap, k: &Arc<Group>, act: &[Vec<usize>]) -> Result<Option<TorsorCertificate>> {
    let x = f.source();
    let nk = k.order();
    if act.len() != x.size() || act.iter().any(|r| r.len() != nk || r.iter().any(|&v| v >= x.size())) {
        return Err(Error::ActionIncompatible("action table has the wrong shape".into()));
    }
    for (p, row) in act.iter().enumerate() {
        if row[0] != p {
            return Err(Error::ActionIncompatible(format!("identity moves {p}")));
        }
        for a in 0..nk {
            for b in 0..nk {
                if act[row[a]][b] != row[k.mul(a, b)] {
                    return Err(Error::ActionIncompatible(format!("not an action at {p}, {a}, {b}")));
                }
            }
            for q in 0..x.group().order() {
                if act[x.act(p, q)][a] != x.act(row[a], q) {
                    return Err(Error::ActionIncompatible(format!("does not commute with the ambient action at {p}")));
                }
            }
        }
    }
    if !f.is_epi() || act.iter().enumerate().any(|(p, row)| row.iter().any(|&v| f.apply(v) != f.apply(p))) {
        return Ok(None);
    }
    let n = x.size();
    let mut hit = vec![false; n * n];
    let mut comparison = Vec::with_capacity(n * nk);
    for (p, row) in act.iter().enumerate() {
        for &v in row {
            if hit[p * n + v] {
                return Ok(None);
            }
            hit[p * n + v] = true;
            comparison.push((p, v));
        }
    }
    let fiber_pairs = (0..n).flat_map(|p| (0..n).map(move |q| (p, q))).filter(|&(p, q)| f.apply(p) == f.apply(q)).count();
    if fiber_pairs != comparison.len() {
        return Ok(None);
    }
    Ok(Some(TorsorCertificate { k_order: nk, action: act.to_vec(), comparison }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpiClassification {
    /// `K = f^-1(f(e))`, elements of `H^op x G`
    pub k: Vec<usize>,
    pub certificate: TorsorCertificate,
    pub fibers_are_cosets: bool,
}

/// `K` acts on the canonical biset by `x . k = k^-1 x`.
pub fn classify_epi_torsor(f: &EquivariantMap) -> Result<EpiClassification> {
    let x = f.source();
    let p = x.group();
    if *x != GSet::regular(p.clone()) {
        return Err(Error::WrongSource);
    }
    if !f.is_epi() {
        return Err(Error::NotEpi);
    }
    let base = f.apply(0);
    let k: Vec<usize> = (0..p.order()).filter(|&q| f.apply(q) == base).collect();
    Subgroup::new(p, &k)?;
    let pos: BTreeMap<usize, usize> = k.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let table: Vec<Vec<usize>> = k.iter().map(|&a| k.iter().map(|&b| pos[&p.mul(a, b)]).collect()).collect();
    let kg = Arc::new(Group::from_table(&table)?);
    // from_table keeps the labels when the identity comes first
    debug_assert_eq!(kg.table(), table);
    let act: Vec<Vec<usize>> = (0..p.order()).map(|q| k.iter().map(|&a| p.mul(p.inv(a), q)).collect()).collect();
    let certificate = is_torsor(f, &kg, &act)?.ok_or_else(|| Error::ActionIncompatible("no torsor certificate".into()))?;
    // each fiber is a right coset K q
    let fibers_are_cosets = (0..p.order()).all(|q| {
        let mut coset: Vec<usize> = k.iter().map(|&a| p.mul(a, q)).collect();
        coset.sort_unstable();
        let fiber: Vec<usize> = (0..p.order()).filter(|&r| f.apply(r) == f.apply(q)).collect();
        coset == fiber
    });
    Ok(EpiClassification { k, certificate, fibers_are_cosets })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EpiCensus {
    pub epis: usize,
    pub certified: usize,
    pub fibers_are_cosets: usize,
}

/// Every epimorphism from `H^op x G` onto a transitive set, one per target point.
pub fn epi_torsor_census(left: &Arc<Group>, right: &Arc<Group>) -> Result<EpiCensus> {
    let p = biset_group(left, right);
    let lat = p.lattice();
    let reg = GSet::regular(p.clone());
    let mut census = EpiCensus::default();
    for c in 0..lat.num_classes() {
        let o = GSet::orbit_of_subgroup(&p, lat.rep(c));
        for t in 0..o.size() {
            let map = (0..p.order()).map(|q| o.act(t, q)).collect();
            let f = EquivariantMap::new(reg.clone(), o.clone(), map)?;
            census.epis += 1;
            let cl = classify_epi_torsor(&f)?;
            census.certified += 1;
            census.fibers_are_cosets += usize::from(cl.fibers_are_cosets);
        }
    }
    Ok(census)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BisetEntry {
    pub index: usize,
    pub size: usize,
    /// `(class in H^op x G... of the biset's own group, multiplicity)`
    pub orbits: Vec<(usize, usize)>,
    pub separable: bool,
    pub pce: PceReport,
    pub round_trip: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaturalityEntry {
    pub x: usize,
    pub y: usize,
    pub biset_maps: usize,
    pub candidates: usize,
    pub natural_transformations: usize,
    pub bijective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub g: String,
    pub h: String,
    pub bound: usize,
    pub corpus_bound: usize,
    pub bisets: Vec<BisetEntry>,
    pub naturality: Vec<NaturalityEntry>,
    pub clauses: Vec<Clause>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }
}

fn group_label(g: &Group) -> String {
    g.name().map(str::to_string).unwrap_or_else(|| format!("order {}", g.order()))
}

/// With `H` trivial, `Z x_G X` is `Z x T` for `X = G x T`, via `(z, t) |-> [z, (e, t)]`.
fn theta_check(cat: &OrbitCategory, f: &FunctorTable, x: &Biset) -> Result<bool> {
    let t = match x.is_separable()? {
        Some(t) => t,
        None => return Ok(false),
    };
    let model = Biset::separable(x.left_group(), &t);
    let iso = match biset_iso(&model, x)? {
        Some(i) => i,
        None => return Ok(false),
    };
    let pairings = &f.source.as_ref().expect("tensor functor").1;
    let nx = x.size();
    for &k in cat.objects() {
        let n = cat.orbit(k).size();
        let mut hit = vec![false; f.value(k)];
        for z in 0..n {
            for s in 0..t.size() {
                let c = pairings[&k].projection[z * nx + iso[s]];
                if hit[c] {
                    return Ok(false);
                }
                hit[c] = true;
            }
        }
        if hit.contains(&false) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bounded check of the duality for bisets `X` in `^G Fin_H` of size at most `bound`.
pub fn verify_duality(g: &Arc<Group>, h: &Arc<Group>, bound: usize, include_nonseparable: bool) -> Result<DualityReport> {
    if g.order() * h.order() > DUALITY_CAP {
        return Err(Error::CapExceeded { what: "|G| |H|".into(), cap: DUALITY_CAP });
    }
    let corpus_bound = (2 * g.order() * h.order()).max(6);
    let cat = Arc::new(OrbitCategory::new(h, g, corpus_bound)?);
    let corpus: Vec<Biset> = biset_corpus(g, h, bound, true);
    let p = biset_group(g, h);
    let lat = p.lattice();
    struct Item {
        entry: BisetEntry,
        functor: FunctorTable,
        theta: Option<bool>,
    }
    let items: Vec<Item> = corpus
        .par_iter()
        .enumerate()
        .map(|(index, x)| -> Result<Item> {
            let separable = x.is_separable()?.is_some();
            let functor = tensor_functor_on(&cat, x)?;
            let pce = preserves_pce(&functor);
            let round_trip = separable.then(|| {
                reconstruct_biset(&functor).ok().and_then(|r| biset_iso(&r, x).ok().flatten()).is_some()
            });
            let theta = (separable && h.order() == 1).then(|| theta_check(&cat, &functor, x)).transpose()?;
            let orbits = x
                .pset()
                .orbit_types()
                .into_iter()
                .map(|t| (lat.rep(t.class), t.multiplicity))
                .collect();
            Ok(Item { entry: BisetEntry { index, size: x.size(), orbits, separable, pce, round_trip }, functor, theta })
        })
        .collect::<Result<_>>()?;
    let separable: Vec<usize> = (0..items.len()).filter(|&i| items[i].entry.separable).collect();
    let pairs: Vec<(usize, usize)> = separable.iter().flat_map(|&a| separable.iter().map(move |&b| (a, b))).collect();
    let naturality: Vec<NaturalityEntry> = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<NaturalityEntry> {
            let (fa, fb) = (&items[a].functor, &items[b].functor);
            let (candidates, nats) = natural_transformations(fa, fb)?;
            let maps = equivariant_maps(corpus[a].pset(), corpus[b].pset())?;
            let mut induced = Vec::with_capacity(maps.len());
            for phi in &maps {
                induced.push(induced_transformation(fa, fb, phi)?);
            }
            let mut sorted = induced.clone();
            sorted.sort();
            sorted.dedup();
            let mut nat_sorted = nats.clone();
            nat_sorted.sort();
            let bijective = sorted.len() == induced.len() && sorted == nat_sorted;
            Ok(NaturalityEntry {
                x: a,
                y: b,
                biset_maps: maps.len(),
                candidates,
                natural_transformations: nats.len(),
                bijective,
            })
        })
        .collect::<Result<_>>()?;
    let sep_items = || items.iter().filter(|i| i.entry.separable);
    let nonsep_flagged = items.iter().filter(|i| !i.entry.separable && !i.entry.pce.clean()).count();
    let nonsep = items.len() - separable.len();
    let mut clauses = vec![
        Clause {
            name: "separable bisets give pce functors".into(),
            pass: sep_items().all(|i| i.entry.pce.clean()),
            detail: format!("{} separable bisets, verified on corpus", separable.len()),
        },
        Clause {
            name: "natural transformations biject with biset maps".into(),
            pass: naturality.iter().all(|n| n.bijective),
            detail: format!("{} pairs", naturality.len()),
        },
        Clause {
            name: "reconstruction round trip".into(),
            pass: sep_items().all(|i| i.entry.round_trip == Some(true)),
            detail: format!("{} bisets", separable.len()),
        },
        Clause {
            name: "point case".into(),
            pass: items.iter().all(|i| i.theta != Some(false)),
            detail: if h.order() == 1 { format!("{} bisets", separable.len()) } else { "skipped: H nontrivial".into() },
        },
    ];
    let mut bisets: Vec<BisetEntry> = items.into_iter().map(|i| i.entry).collect();
    if include_nonseparable {
        clauses.push(Clause {
            name: "non-separable bisets flagged".into(),
            pass: true,
            detail: format!("{nonsep_flagged} of {nonsep} fail pce on the corpus"),
        });
    } else {
        bisets.retain(|b| b.separable);
    }
    Ok(DualityReport { g: group_label(g), h: group_label(h), bound, corpus_bound, bisets, naturality, clauses })
}

/// A pullback square of orbits whose image under `- x X` is not a pullback.
pub fn nonseparable_witness(x: &Biset) -> Result<Option<PullbackWitness>> {
    let bound = (2 * x.left_group().order() * x.right_group().order()).max(6);
    let f = tensor_functor(x, bound)?;
    Ok(preserves_pce(&f).first_pullback_failure().cloned())
}
