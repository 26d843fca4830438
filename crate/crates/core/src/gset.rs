//! Finite right G-sets, equivariant maps, and bisets.
//!
//! An `(H, G)`-biset (left `H`, right `G`) is stored as a right P-set for
//! `P = H^op x G`, with `x . (h, g) = h x g`. Element `(h, g)` of `P` has id
//! `h * |G| + g`, so every orbit, iso and pullback routine below applies to
//! bisets unchanged.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::group::Group;

#[derive(Clone, Debug)]
pub struct GSet {
    group: Arc<Group>,
    size: usize,
    act: Vec<usize>,
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.size == other.size && self.act == other.act
    }
}

impl Eq for GSet {}

pub(crate) fn same_group(a: &Arc<Group>, b: &Arc<Group>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub elements: Vec<usize>,
    pub base: usize,
    /// Index into the group's subgroup lattice.
    pub stabilizer: usize,
    pub class: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitType {
    pub class: usize,
    pub multiplicity: usize,
}

impl GSet {
    /// `table[x][g] = x . g`
    pub fn new(group: Arc<Group>, table: &[Vec<usize>]) -> Result<GSet> {
        let n = group.order();
        let size = table.len();
        let mut act = Vec::with_capacity(size * n);
        for (x, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAnAction(format!("row {x} has length {}", row.len())));
            }
            if let Some(&y) = row.iter().find(|&&y| y >= size) {
                return Err(Error::NotAnAction(format!("image {y} out of range")));
            }
            act.extend_from_slice(row);
        }
        let x = GSet { group, size, act };
        x.validate()?;
        Ok(x)
    }

    pub(crate) fn from_flat(group: Arc<Group>, size: usize, act: Vec<usize>) -> GSet {
        debug_assert_eq!(act.len(), size * group.order());
        GSet { group, size, act }
    }

    fn validate(&self) -> Result<()> {
        let n = self.group.order();
        for x in 0..self.size {
            if self.act(x, 0) != x {
                return Err(Error::NotAnAction(format!("identity moves {x}")));
            }
            for g in 0..n {
                let xg = self.act(x, g);
                for h in 0..n {
                    if self.act(xg, h) != self.act(x, self.group.mul(g, h)) {
                        return Err(Error::NotAnAction(format!("(x.g).h != x.(gh) at x={x}, g={g}, h={h}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn empty(group: Arc<Group>) -> GSet {
        GSet { group, size: 0, act: vec![] }
    }

    pub fn point(group: Arc<Group>) -> GSet {
        let n = group.order();
        GSet { group, size: 1, act: vec![0; n] }
    }

    /// `G` acting on itself by right multiplication.
    pub fn regular(group: Arc<Group>) -> GSet {
        let n = group.order();
        let act = (0..n * n).map(|k| group.mul(k / n, k % n)).collect();
        GSet { group, size: n, act }
    }

    /// Right cosets `Hg`, numbered by least element. The coset `H` is `0`.
    pub fn cosets(group: Arc<Group>, subgroup: &[bool]) -> GSet {
        let n = group.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            for h in (0..n).filter(|&h| subgroup[h]) {
                coset_of[group.mul(h, g)] = reps.len();
            }
            reps.push(g);
        }
        let act = reps
            .iter()
            .flat_map(|&r| (0..n).map(move |g| (r, g)))
            .map(|(r, g)| coset_of[group.mul(r, g)])
            .collect();
        GSet { group: group.clone(), size: reps.len(), act }
    }

    /// Coset set of the `i`-th subgroup of the lattice.
    pub fn orbit_of_subgroup(group: &Arc<Group>, i: usize) -> GSet {
        let mask = group.lattice().subgroup(i).mask().to_vec();
        GSet::cosets(group.clone(), &mask)
    }

    /// Disjoint union of coset sets, one per `(subgroup index, multiplicity)`.
    pub fn from_orbits(group: &Arc<Group>, orbits: &[(usize, usize)]) -> GSet {
        let mut x = GSet::empty(group.clone());
        for &(i, m) in orbits {
            let o = GSet::orbit_of_subgroup(group, i);
            for _ in 0..m {
                x = x.coproduct(&o).expect("same group");
            }
        }
        x
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, x: usize, g: usize) -> usize {
        self.act[x * self.group.order() + g]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        let n = self.group.order();
        if n == 0 {
            return vec![];
        }
        self.act.chunks(n).map(|r| r.to_vec()).collect()
    }

    pub fn stabilizer(&self, x: usize) -> Vec<bool> {
        (0..self.group.order()).map(|g| self.act(x, g) == x).collect()
    }

    pub fn fixed_points(&self, subgroup: &[bool]) -> usize {
        let n = self.group.order();
        (0..self.size)
            .filter(|&x| (0..n).all(|g| !subgroup[g] || self.act(x, g) == x))
            .count()
    }

    pub fn is_transitive(&self) -> bool {
        self.size > 0 && self.orbit_ids().1 == 1
    }

    /// Orbit id per element (orbits numbered by least element) and orbit count.
    pub fn orbit_ids(&self) -> (Vec<usize>, usize) {
        let mut id = vec![usize::MAX; self.size];
        let mut count = 0;
        for x in 0..self.size {
            if id[x] != usize::MAX {
                continue;
            }
            for g in 0..self.group.order() {
                id[self.act(x, g)] = count;
            }
            count += 1;
        }
        (id, count)
    }

    pub fn orbit_decomposition(&self) -> Vec<Orbit> {
        let (ids, count) = self.orbit_ids();
        let mut elements = vec![Vec::new(); count];
        for (x, &o) in ids.iter().enumerate() {
            elements[o].push(x);
        }
        let lat = self.group.lattice();
        elements
            .into_iter()
            .map(|elements| {
                let base = elements[0];
                let stabilizer = lat.find(&self.stabilizer(base)).expect("stabilizer is a subgroup");
                Orbit { elements, base, stabilizer, class: lat.class_of(stabilizer) }
            })
            .collect()
    }

    /// Multiset of stabilizer classes, sorted by class id.
    pub fn orbit_types(&self) -> Vec<OrbitType> {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for o in self.orbit_decomposition() {
            *counts.entry(o.class).or_default() += 1;
        }
        counts.into_iter().map(|(class, multiplicity)| OrbitType { class, multiplicity }).collect()
    }

    pub fn coproduct(&self, other: &GSet) -> Result<GSet> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let mut act = self.act.clone();
        act.extend(other.act.iter().map(|&y| y + self.size));
        Ok(GSet { group: self.group.clone(), size: self.size + other.size, act })
    }

    /// Pair `(x, y)` has id `x * |Y| + y`.
    pub fn product(&self, other: &GSet) -> Result<GSet> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let n = self.group.order();
        let m = other.size;
        let size = self.size * m;
        let mut act = Vec::with_capacity(size * n);
        for x in 0..self.size {
            for y in 0..m {
                for g in 0..n {
                    act.push(self.act(x, g) * m + other.act(y, g));
                }
            }
        }
        Ok(GSet { group: self.group.clone(), size, act })
    }

    pub fn identity_map(&self) -> EquivariantMap {
        EquivariantMap { source: self.clone(), target: self.clone(), map: (0..self.size).collect() }
    }

    pub fn inclusions(&self, other: &GSet) -> Result<(EquivariantMap, EquivariantMap)> {
        let sum = self.coproduct(other)?;
        let i1 = EquivariantMap { source: self.clone(), target: sum.clone(), map: (0..self.size).collect() };
        let i2 = EquivariantMap {
            source: other.clone(),
            target: sum,
            map: (0..other.size).map(|y| y + self.size).collect(),
        };
        Ok((i1, i2))
    }

    pub fn projections(&self, other: &GSet) -> Result<(EquivariantMap, EquivariantMap)> {
        let prod = self.product(other)?;
        let m = other.size;
        let p1 = EquivariantMap {
            source: prod.clone(),
            target: self.clone(),
            map: (0..prod.size).map(|z| z / m).collect(),
        };
        let p2 = EquivariantMap { source: prod, target: other.clone(), map: (0..self.size * m).map(|z| z % m).collect() };
        Ok((p1, p2))
    }

    /// Restriction of the action along a subgroup given by its elements.
    pub fn restrict(&self, sub: Arc<Group>, embed: &[usize]) -> GSet {
        let act = (0..self.size).flat_map(|x| embed.iter().map(move |&g| (x, g))).map(|(x, g)| self.act(x, g)).collect();
        GSet { group: sub, size: self.size, act }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantMap {
    source: GSet,
    target: GSet,
    map: Vec<usize>,
}

impl EquivariantMap {
    pub fn new(source: GSet, target: GSet, map: Vec<usize>) -> Result<EquivariantMap> {
        if !same_group(&source.group, &target.group) {
            return Err(Error::GroupMismatch);
        }
        if map.len() != source.size || map.iter().any(|&y| y >= target.size) {
            return Err(Error::NotEquivariant("table has the wrong shape".into()));
        }
        if let Some((x, g)) = equivariance_failure(&source, &target, &map) {
            return Err(Error::NotEquivariant(format!("f({x}.{g}) != f({x}).{g}")));
        }
        Ok(EquivariantMap { source, target, map })
    }

    pub fn source(&self) -> &GSet {
        &self.source
    }

    pub fn target(&self) -> &GSet {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_epi(&self) -> bool {
        is_surjective(&self.map, self.target.size)
    }

    pub fn is_mono(&self) -> bool {
        is_injective(&self.map, self.target.size)
    }

    pub fn is_iso(&self) -> bool {
        self.source.size == self.target.size && self.is_mono()
    }

    /// `self` then `next`.
    pub fn then(&self, next: &EquivariantMap) -> Result<EquivariantMap> {
        if self.target != next.source {
            return Err(Error::TargetMismatch);
        }
        Ok(EquivariantMap {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&y| next.map[y]).collect(),
        })
    }
}

pub(crate) fn equivariance_failure(source: &GSet, target: &GSet, map: &[usize]) -> Option<(usize, usize)> {
    for x in 0..source.size {
        for g in 0..source.group.order() {
            if map[source.act(x, g)] != target.act(map[x], g) {
                return Some((x, g));
            }
        }
    }
    None
}

pub(crate) fn is_surjective(map: &[usize], target: usize) -> bool {
    let mut hit = vec![false; target];
    for &y in map {
        hit[y] = true;
    }
    hit.into_iter().all(|h| h)
}

pub(crate) fn is_injective(map: &[usize], target: usize) -> bool {
    let mut hit = vec![false; target];
    for &y in map {
        if hit[y] {
            return false;
        }
        hit[y] = true;
    }
    true
}

/// Fiber product of `f: A -> C` and `g: B -> C` on lexicographically sorted pairs.
pub fn pullback(f: &EquivariantMap, g: &EquivariantMap) -> Result<(GSet, EquivariantMap, EquivariantMap)> {
    if f.target != g.target {
        return Err(Error::TargetMismatch);
    }
    let (p, p1, p2) = pullback_raw(&f.source, &f.map, &g.source, &g.map, f.target.size);
    Ok((
        p.clone(),
        EquivariantMap { source: p.clone(), target: f.source.clone(), map: p1 },
        EquivariantMap { source: p, target: g.source.clone(), map: p2 },
    ))
}

/// Pullback on raw tables; returns the apex and both projections.
pub(crate) fn pullback_raw(
    a: &GSet,
    f: &[usize],
    b: &GSet,
    g: &[usize],
    c_size: usize,
) -> (GSet, Vec<usize>, Vec<usize>) {
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); c_size];
    let mut rank = vec![0; b.size];
    for y in 0..b.size {
        rank[y] = buckets[g[y]].len();
        buckets[g[y]].push(y);
    }
    let mut start = vec![0; a.size];
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    for x in 0..a.size {
        start[x] = p1.len();
        for &y in &buckets[f[x]] {
            p1.push(x);
            p2.push(y);
        }
    }
    let n = a.group.order();
    let size = p1.len();
    let mut act = Vec::with_capacity(size * n);
    for k in 0..size {
        for h in 0..n {
            let (x, y) = (a.act(p1[k], h), b.act(p2[k], h));
            act.push(start[x] + rank[y]);
        }
    }
    (GSet { group: a.group.clone(), size, act }, p1, p2)
}

/// An equivariant bijection `X -> Y` if one exists.
pub fn gset_iso(x: &GSet, y: &GSet) -> Result<Option<EquivariantMap>> {
    if !same_group(&x.group, &y.group) {
        return Err(Error::GroupMismatch);
    }
    Ok(iso_table(x, y).map(|map| EquivariantMap { source: x.clone(), target: y.clone(), map }))
}

pub(crate) fn iso_table(x: &GSet, y: &GSet) -> Option<Vec<usize>> {
    if x.size != y.size {
        return None;
    }
    let ox = x.orbit_decomposition();
    let oy = y.orbit_decomposition();
    if ox.len() != oy.len() {
        return None;
    }
    let mut by_class: BTreeMap<usize, (Vec<&Orbit>, Vec<&Orbit>)> = BTreeMap::new();
    for o in &ox {
        by_class.entry(o.class).or_default().0.push(o);
    }
    for o in &oy {
        by_class.entry(o.class).or_default().1.push(o);
    }
    let g = &x.group;
    let lat = g.lattice();
    let mut map = vec![usize::MAX; x.size];
    for (_, (xs, ys)) in by_class {
        if xs.len() != ys.len() {
            return None;
        }
        for (a, b) in xs.iter().zip(ys) {
            // c^-1 Stab(b) c = Stab(a), so b.c has the same stabilizer as a
            let c = g.mul(g.inv(lat.conjugator(b.stabilizer)), lat.conjugator(a.stabilizer));
            let y1 = y.act(b.base, c);
            for h in 0..g.order() {
                map[x.act(a.base, h)] = y.act(y1, h);
            }
        }
    }
    debug_assert!(equivariance_failure(x, y, &map).is_none() && is_injective(&map, y.size));
    Some(map)
}

/// All equivariant maps `X -> Y`, in lexicographic order of their tables.
pub fn equivariant_maps(x: &GSet, y: &GSet) -> Result<Vec<Vec<usize>>> {
    if !same_group(&x.group, &y.group) {
        return Err(Error::GroupMismatch);
    }
    let g = &x.group;
    let orbits = x.orbit_decomposition();
    // a base may go to t iff Stab(base) <= Stab(t)
    let choices: Vec<Vec<usize>> = orbits
        .iter()
        .map(|o| {
            let stab = x.stabilizer(o.base);
            (0..y.size).filter(|&t| (0..g.order()).all(|h| !stab[h] || y.act(t, h) == t)).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut map = vec![0; x.size];
    fill_maps(x, y, &orbits, &choices, 0, &mut map, &mut out);
    out.sort();
    Ok(out)
}

fn fill_maps(
    x: &GSet,
    y: &GSet,
    orbits: &[Orbit],
    choices: &[Vec<usize>],
    i: usize,
    map: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if i == orbits.len() {
        out.push(map.clone());
        return;
    }
    for &t in &choices[i] {
        for h in 0..x.group.order() {
            map[x.act(orbits[i].base, h)] = y.act(t, h);
        }
        fill_maps(x, y, orbits, choices, i + 1, map, out);
    }
}

pub fn isomorphic(x: &GSet, y: &GSet) -> bool {
    same_group(&x.group, &y.group) && x.size == y.size && x.orbit_types() == y.orbit_types()
}

/// Shared `H^op x G` groups, so subgroup lattices are computed once per pair.
pub fn biset_group(left: &Arc<Group>, right: &Arc<Group>) -> Arc<Group> {
    type Key = (Vec<Vec<usize>>, Vec<Vec<usize>>);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Group>>>> = OnceLock::new();
    let key = (left.table(), right.table());
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("cache lock");
    guard
        .entry(key)
        .or_insert_with(|| {
            let name = match (left.name(), right.name()) {
                (Some(a), Some(b)) => Some(format!("{a}^op x {b}")),
                _ => None,
            };
            let p = Group::direct_product(&left.opposite(), right);
            Arc::new(match name {
                Some(n) => p.with_name(n),
                None => p,
            })
        })
        .clone()
}

/// Set with a left `left`-action and a commuting right `right`-action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biset {
    left: Arc<Group>,
    right: Arc<Group>,
    pset: GSet,
    left_free: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BiOrbitType {
    /// Class id of the orbit's stabilizer in `left^op x right`.
    pub class: usize,
    /// `K <= right`, sorted elements.
    pub k: Vec<usize>,
    /// `phi(k)` for each element of `k`, with `phi(k) x = x k` at the base point.
    pub phi: Vec<usize>,
    pub multiplicity: usize,
}

impl Biset {
    /// `left_table[x][h] = h x`, `right_table[x][g] = x g`.
    pub fn new(
        left: Arc<Group>,
        right: Arc<Group>,
        left_table: &[Vec<usize>],
        right_table: &[Vec<usize>],
        require_left_free: bool,
    ) -> Result<Biset> {
        let size = left_table.len();
        if right_table.len() != size {
            return Err(Error::NotAnAction("left and right tables differ in size".into()));
        }
        let (nh, ng) = (left.order(), right.order());
        for (x, row) in left_table.iter().enumerate() {
            if row.len() != nh || row.iter().any(|&y| y >= size) {
                return Err(Error::NotAnAction(format!("left row {x} malformed")));
            }
            if row[0] != x {
                return Err(Error::NotAnAction(format!("left identity moves {x}")));
            }
            for a in 0..nh {
                for b in 0..nh {
                    // (ab) x = a (b x)
                    if row[left.mul(a, b)] != left_table[row[b]][a] {
                        return Err(Error::NotAnAction(format!("left action fails at x={x}, {a}, {b}")));
                    }
                }
            }
        }
        GSet::new(right.clone(), right_table)?;
        for x in 0..size {
            for h in 0..nh {
                for g in 0..ng {
                    if left_table[right_table[x][g]][h] != right_table[left_table[x][h]][g] {
                        return Err(Error::ActionsDoNotCommute { point: x });
                    }
                }
            }
        }
        let p = biset_group(&left, &right);
        let mut act = Vec::with_capacity(size * nh * ng);
        for x in 0..size {
            for h in 0..nh {
                for g in 0..ng {
                    act.push(right_table[left_table[x][h]][g]);
                }
            }
        }
        let b = Biset::from_pset(left, right, GSet::from_flat(p, size, act));
        if require_left_free {
            b.check_left_free()?;
        }
        Ok(b)
    }

    /// Wraps a right P-set for `P = biset_group(left, right)`.
    pub fn from_pset(left: Arc<Group>, right: Arc<Group>, pset: GSet) -> Biset {
        let ng = right.order();
        let nh = left.order();
        let left_free = (0..pset.size()).all(|x| (1..nh).all(|h| pset.act(x, h * ng) != x));
        Biset { left, right, pset, left_free }
    }

    pub fn check_left_free(&self) -> Result<()> {
        let ng = self.right.order();
        for x in 0..self.size() {
            for h in 1..self.left.order() {
                if self.pset.act(x, h * ng) == x {
                    return Err(Error::LeftActionNotFree { element: h, point: x });
                }
            }
        }
        Ok(())
    }

    /// `left^op x right` acting on itself: `h (a, b) g = (h a, b g)`, id `a * |right| + b`.
    pub fn canonical(left: &Arc<Group>, right: &Arc<Group>) -> Biset {
        let p = biset_group(left, right);
        Biset::from_pset(left.clone(), right.clone(), GSet::regular(p))
    }

    /// `G` acting on itself from both sides.
    pub fn conjugation(g: &Arc<Group>) -> Biset {
        let n = g.order();
        let left: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|h| g.mul(h, x)).collect()).collect();
        let right: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|h| g.mul(x, h)).collect()).collect();
        Biset::new(g.clone(), g.clone(), &left, &right, false).expect("conjugation biset")
    }

    /// `G x T` with `g (a, t) h = (g a, t h)`, id `a * |T| + t`.
    pub fn separable(g: &Arc<Group>, t: &GSet) -> Biset {
        let h = t.group().clone();
        let p = biset_group(g, &h);
        let (ng, nh, m) = (g.order(), h.order(), t.size());
        let mut act = Vec::with_capacity(ng * m * ng * nh);
        for a in 0..ng {
            for s in 0..m {
                for l in 0..ng {
                    for r in 0..nh {
                        act.push(g.mul(l, a) * m + t.act(s, r));
                    }
                }
            }
        }
        Biset::from_pset(g.clone(), h, GSet::from_flat(p, ng * m, act))
    }

    pub fn left_group(&self) -> &Arc<Group> {
        &self.left
    }

    pub fn right_group(&self) -> &Arc<Group> {
        &self.right
    }

    pub fn pset(&self) -> &GSet {
        &self.pset
    }

    pub fn size(&self) -> usize {
        self.pset.size()
    }

    pub fn left_free(&self) -> bool {
        self.left_free
    }

    #[inline]
    pub fn left_act(&self, h: usize, x: usize) -> usize {
        self.pset.act(x, h * self.right.order())
    }

    #[inline]
    pub fn right_act(&self, x: usize, g: usize) -> usize {
        self.pset.act(x, g)
    }

    pub fn left_table(&self) -> Vec<Vec<usize>> {
        (0..self.size()).map(|x| (0..self.left.order()).map(|h| self.left_act(h, x)).collect()).collect()
    }

    pub fn right_table(&self) -> Vec<Vec<usize>> {
        (0..self.size()).map(|x| (0..self.right.order()).map(|g| self.right_act(x, g)).collect()).collect()
    }

    /// Left orbits `left \ X` as a right G-set; orbit ids follow least elements.
    pub fn left_quotient(&self) -> (GSet, Vec<usize>) {
        let n = self.size();
        let mut id = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if id[x] != usize::MAX {
                continue;
            }
            for h in 0..self.left.order() {
                id[self.left_act(h, x)] = reps.len();
            }
            reps.push(x);
        }
        let ng = self.right.order();
        let act = reps.iter().flat_map(|&r| (0..ng).map(move |g| (r, g))).map(|(r, g)| id[self.right_act(r, g)]).collect();
        (GSet::from_flat(self.right.clone(), reps.len(), act), id)
    }

    /// For a left-free biset: `Some(T)` with `X = left x T` iff `l x r = x` forces `l = e`.
    /// The isomorphism `left x T -> X` is built and validated.
    pub fn is_separable(&self) -> Result<Option<GSet>> {
        self.check_left_free()?;
        let ng = self.right.order();
        for x in 0..self.size() {
            for p in 0..self.pset.group().order() {
                if p / ng != 0 && self.pset.act(x, p) == x {
                    return Ok(None);
                }
            }
        }
        let (t, id) = self.left_quotient();
        // equivariant section s: T -> X
        let mut section = vec![usize::MAX; t.size()];
        for orbit in t.orbit_decomposition() {
            let x0 = (0..self.size()).find(|&x| id[x] == orbit.base).expect("nonempty");
            for r in 0..ng {
                section[t.act(orbit.base, r)] = self.right_act(x0, r);
            }
        }
        let model = Biset::separable(&self.left, &t);
        let m = t.size();
        let map: Vec<usize> = (0..model.size()).map(|z| self.left_act(z / m, section[z % m])).collect();
        if equivariance_failure(model.pset(), &self.pset, &map).is_some() || !is_injective(&map, self.size()) {
            return Err(Error::NotEquivariant("separability witness failed".into()));
        }
        Ok(Some(t))
    }

    /// Orbits under both actions, classified by `(K <= right, phi: K -> left)` and
    /// grouped by the conjugacy class of their stabilizer in `left^op x right`.
    pub fn orbit_types(&self) -> Result<Vec<BiOrbitType>> {
        self.check_left_free()?;
        let p = self.pset.group();
        let lat = p.lattice();
        let ng = self.right.order();
        let mut out: Vec<BiOrbitType> = Vec::new();
        for t in self.pset.orbit_types() {
            let rep = lat.subgroup(lat.rep(t.class));
            // stabilizer {(phi(k)^-1, k)}
            let mut pairs: Vec<(usize, usize)> = rep
                .elements()
                .iter()
                .map(|&q| (q % ng, self.left.inv(q / ng)))
                .collect();
            pairs.sort_unstable();
            out.push(BiOrbitType {
                class: t.class,
                k: pairs.iter().map(|&(k, _)| k).collect(),
                phi: pairs.iter().map(|&(_, f)| f).collect(),
                multiplicity: t.multiplicity,
            });
        }
        Ok(out)
    }

    /// Disjoint union of the model orbits `Stab \ (left^op x right)`.
    pub fn from_orbit_types(left: &Arc<Group>, right: &Arc<Group>, types: &[BiOrbitType]) -> Biset {
        let p = biset_group(left, right);
        let lat = p.lattice();
        let orbits: Vec<(usize, usize)> = types.iter().map(|t| (lat.rep(t.class), t.multiplicity)).collect();
        Biset::from_pset(left.clone(), right.clone(), GSet::from_orbits(&p, &orbits))
    }

    pub fn coproduct(&self, other: &Biset) -> Result<Biset> {
        if !same_group(&self.left, &other.left) || !same_group(&self.right, &other.right) {
            return Err(Error::GroupMismatch);
        }
        Ok(Biset::from_pset(self.left.clone(), self.right.clone(), self.pset.coproduct(&other.pset)?))
    }
}

pub fn biset_iso(x: &Biset, y: &Biset) -> Result<Option<Vec<usize>>> {
    if !same_group(&x.left, &y.left) || !same_group(&x.right, &y.right) {
        return Err(Error::GroupMismatch);
    }
    Ok(iso_table(&x.pset, &y.pset))
}
