//! Finite groups carried by full Cayley tables.
//!
//! Elements are `0..order` and the identity is always `0`. Permutations are
//! composed left to right: `a * b` applies `a` first.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub const DEFAULT_CLOSURE_CAP: usize = 10080;
pub const DEFAULT_HOM_CAP: usize = 1_000_000;

#[derive(Clone)]
pub struct Group {
    name: Option<String>,
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    lattice: OnceLock<SubgroupLattice>,
    classes: OnceLock<Vec<Vec<usize>>>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl Eq for Group {}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, order {})", self.name().unwrap_or("?"), self.order)
    }
}

impl Group {
    fn from_validated(order: usize, mul: Vec<usize>, name: Option<String>) -> Group {
        let mut inv = vec![0; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] == 0 {
                    inv[a] = b;
                    break;
                }
            }
        }
        Group { name, order, mul, inv, lattice: OnceLock::new(), classes: OnceLock::new() }
    }

    /// Validates a Cayley table and relabels so that the identity comes
    /// first, keeping the input order for everything else.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Group> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::MalformedTable(format!("entry {bad} out of range in row {i}")));
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(Error::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NonAssociative(a, b, c));
                    }
                }
            }
        }
        for a in 0..n {
            if !(0..n).any(|b| table[a][b] == e && table[b][a] == e) {
                return Err(Error::NoInverse(a));
            }
        }
        let old_of_new: Vec<usize> =
            std::iter::once(e).chain((0..n).filter(|&x| x != e)).collect();
        let mut new_of_old = vec![0; n];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut mul = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = new_of_old[table[old_of_new[i]][old_of_new[j]]];
            }
        }
        Ok(Group::from_validated(n, mul, None))
    }

    /// Closes permutation generators given in 1-based cycle notation.
    pub fn from_permutations(degree: usize, generators: &[Vec<Vec<usize>>]) -> Result<Group> {
        Group::from_permutations_capped(degree, generators, DEFAULT_CLOSURE_CAP)
    }

    pub fn from_permutations_capped(
        degree: usize,
        generators: &[Vec<Vec<usize>>],
        cap: usize,
    ) -> Result<Group> {
        let gens: Vec<Vec<usize>> = generators
            .iter()
            .map(|cycles| permutation_from_cycles(degree, cycles))
            .collect::<Result<_>>()?;
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        // right[x][s] = x * gens[s]; parent[x] = (p, s) with x = p * gens[s]
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
        let mut next = 0;
        while next < elems.len() {
            let mut row = Vec::with_capacity(gens.len());
            for (s, g) in gens.iter().enumerate() {
                let y: Vec<usize> = elems[next].iter().map(|&i| g[i]).collect();
                let idx = match index.get(&y) {
                    Some(&i) => i,
                    None => {
                        if elems.len() >= cap {
                            return Err(Error::GeneratorClosureOverflow { cap });
                        }
                        let i = elems.len();
                        index.insert(y.clone(), i);
                        elems.push(y);
                        parent.push((next, s));
                        i
                    }
                };
                row.push(idx);
            }
            right.push(row);
            next += 1;
        }
        let n = elems.len();
        let mut mul = vec![0; n * n];
        for i in 0..n {
            mul[i * n] = i;
            for j in 1..n {
                let (p, s) = parent[j];
                mul[i * n + j] = right[mul[i * n + p]][s];
            }
        }
        Ok(Group::from_validated(n, mul, None))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Group {
        self.name = Some(name.into());
        self
    }

    pub fn trivial() -> Group {
        Group::cyclic(1).with_name("C1")
    }

    pub fn cyclic(n: usize) -> Group {
        assert!(n > 0);
        let mul = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Group::from_validated(n, mul, Some(format!("C{n}")))
    }

    /// Symmetries of the regular `n`-gon, order `2n`. Element `r^k s^j` is `2k + j`.
    pub fn dihedral(n: usize) -> Group {
        assert!(n > 0);
        let m = 2 * n;
        let mut mul = vec![0; m * m];
        for a in 0..m {
            for b in 0..m {
                let (k, j) = (a / 2, a % 2);
                let (l, i) = (b / 2, b % 2);
                let r = if j == 0 { (k + l) % n } else { (k + n - l) % n };
                mul[a * m + b] = 2 * r + (j ^ i);
            }
        }
        let name = if n == 3 { "S3".to_string() } else { format!("D{n}") };
        Group::from_validated(m, mul, Some(name))
    }

    /// Dicyclic group of order `4n`: `a` of order `2n`, `x^2 = a^n`, `x a x^-1 = a^-1`.
    pub fn dicyclic(n: usize) -> Group {
        assert!(n > 0);
        let m = 4 * n;
        let t = 2 * n;
        let mut mul = vec![0; m * m];
        for p in 0..m {
            for q in 0..m {
                let (k, j) = (p / 2, p % 2);
                let (l, i) = (q / 2, q % 2);
                let (r, s) = match (j, i) {
                    (0, _) => ((k + l) % t, i),
                    (1, 0) => ((k + t - l) % t, 1),
                    _ => ((k + t - l + n) % t, 0),
                };
                mul[p * m + q] = 2 * r + s;
            }
        }
        let name = if n == 2 { "Q8".to_string() } else { format!("Dic{n}") };
        Group::from_validated(m, mul, Some(name))
    }

    /// Element `(a, b)` is `a * |B| + b`.
    pub fn direct_product(a: &Group, b: &Group) -> Group {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut mul = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                mul[x * n + y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
            }
        }
        let name = match (&a.name, &b.name) {
            (Some(p), Some(q)) => Some(format!("{p}x{q}")),
            _ => None,
        };
        Group::from_validated(n, mul, name)
    }

    pub fn symmetric(n: usize) -> Group {
        let gens: Vec<Vec<Vec<usize>>> = if n < 2 {
            vec![]
        } else if n == 2 {
            vec![vec![vec![1, 2]]]
        } else {
            vec![vec![vec![1, 2]], vec![(1..=n).collect()]]
        };
        Group::from_permutations(n.max(1), &gens).expect("symmetric group").with_name(format!("S{n}"))
    }

    pub fn alternating(n: usize) -> Group {
        let gens: Vec<Vec<Vec<usize>>> = (3..=n).map(|k| vec![vec![1, 2, k]]).collect();
        Group::from_permutations(n.max(1), &gens).expect("alternating group").with_name(format!("A{n}"))
    }

    /// Same carrier with `a *op b = b * a`.
    pub fn opposite(&self) -> Group {
        let n = self.order;
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = self.mul(b, a);
            }
        }
        Group::from_validated(n, mul, self.name.as_ref().map(|s| format!("{s}^op")))
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `c^-1 x c`
    #[inline]
    pub fn conj(&self, x: usize, c: usize) -> usize {
        self.mul(self.mul(self.inv[c], x), c)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inv
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted element orders, an isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    queue.push_back(y);
                }
            }
        }
        mask
    }

    /// Greedy generating set: scan elements in order, keep those not yet generated.
    pub fn generating_set(&self) -> Vec<usize> {
        generating_set_of(self, &vec![true; self.order])
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        self.lattice.get_or_init(|| SubgroupLattice::build(self))
    }

    /// Partition into conjugacy classes, ordered by least element.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut seen = vec![false; n];
            let mut out = Vec::new();
            for x in 0..n {
                if seen[x] {
                    continue;
                }
                let mut class: Vec<usize> = Vec::new();
                for c in 0..n {
                    let y = self.conj(x, c);
                    if !seen[y] {
                        seen[y] = true;
                        class.push(y);
                    }
                }
                class.sort_unstable();
                out.push(class);
            }
            out
        })
    }

    pub fn normalizer(&self, mask: &[bool]) -> Vec<bool> {
        (0..self.order)
            .map(|c| (0..self.order).filter(|&x| mask[x]).all(|x| mask[self.conj(x, c)]))
            .collect()
    }

    pub fn conjugate_mask(&self, mask: &[bool], c: usize) -> Vec<bool> {
        let mut out = vec![false; self.order];
        for x in 0..self.order {
            if mask[x] {
                out[self.conj(x, c)] = true;
            }
        }
        out
    }
}

fn generating_set_of(g: &Group, mask: &[bool]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = g.closure(&gens);
    for x in 0..g.order() {
        if mask[x] && !span[x] {
            gens.push(x);
            span = g.closure(&gens);
        }
    }
    gens
}

/// Converts 1-based cycles into a 0-based image table.
pub fn permutation_from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut p: Vec<usize> = (0..degree).collect();
    let mut used = vec![false; degree];
    for cycle in cycles {
        for &i in cycle {
            if i == 0 || i > degree {
                return Err(Error::MalformedPermutation(format!("point {i} outside 1..={degree}")));
            }
            if used[i - 1] {
                return Err(Error::MalformedPermutation(format!("point {i} repeated")));
            }
            used[i - 1] = true;
        }
        for w in 0..cycle.len() {
            p[cycle[w] - 1] = cycle[(w + 1) % cycle.len()] - 1;
        }
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    /// Validates closure, identity and Lagrange.
    pub fn new(group: &Group, elements: &[usize]) -> Result<Subgroup> {
        let n = group.order();
        let mut mask = vec![false; n];
        for &x in elements {
            if x >= n {
                return Err(Error::NotASubgroup(format!("element {x} out of range")));
            }
            mask[x] = true;
        }
        if !mask[0] {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        let s = Subgroup::from_mask(mask);
        for &a in &s.elements {
            if !s.mask[group.inv(a)] {
                return Err(Error::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &s.elements {
                if !s.mask[group.mul(a, b)] {
                    return Err(Error::NotASubgroup(format!("{a}*{b} missing")));
                }
            }
        }
        if n % s.order() != 0 {
            return Err(Error::NotASubgroup("order does not divide the group order".into()));
        }
        Ok(s)
    }

    pub(crate) fn from_mask(mask: Vec<bool>) -> Subgroup {
        let elements = (0..mask.len()).filter(|&i| mask[i]).collect();
        Subgroup { elements, mask }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.mask[x])
    }
}

/// All subgroups sorted by `(order, elements)`, with conjugacy classes.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    subgroups: Vec<Subgroup>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    conjugator: Vec<usize>,
    // conj[i * n + c] = index of c^-1 S_i c
    conj: Vec<usize>,
    order: usize,
    index: HashMap<Vec<bool>, usize>,
}

impl SubgroupLattice {
    fn build(g: &Group) -> SubgroupLattice {
        let n = g.order();
        let trivial = g.closure(&[]);
        let mut found: Vec<(Vec<bool>, Vec<usize>)> = vec![(trivial.clone(), vec![])];
        let mut seen: HashMap<Vec<bool>, ()> = HashMap::from([(trivial, ())]);
        let mut i = 0;
        while i < found.len() {
            let (mask, gens) = found[i].clone();
            for x in 0..n {
                if mask[x] {
                    continue;
                }
                let mut more = gens.clone();
                more.push(x);
                let m = g.closure(&more);
                if !seen.contains_key(&m) {
                    seen.insert(m.clone(), ());
                    found.push((m, more));
                }
            }
            i += 1;
        }
        let mut subgroups: Vec<Subgroup> =
            found.into_iter().map(|(m, _)| Subgroup::from_mask(m)).collect();
        subgroups.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        let index: HashMap<Vec<bool>, usize> =
            subgroups.iter().enumerate().map(|(i, s)| (s.mask.clone(), i)).collect();
        let m = subgroups.len();
        let mut conj = vec![0; m * n];
        for s in 0..m {
            for c in 0..n {
                conj[s * n + c] = index[&g.conjugate_mask(&subgroups[s].mask, c)];
            }
        }
        let mut class_of = vec![usize::MAX; m];
        let mut conjugator = vec![0; m];
        let mut classes = Vec::new();
        for s in 0..m {
            if class_of[s] != usize::MAX {
                continue;
            }
            let cid = classes.len();
            let mut members = Vec::new();
            for c in 0..n {
                let t = conj[s * n + c];
                if class_of[t] == usize::MAX {
                    class_of[t] = cid;
                    conjugator[t] = c;
                    members.push(t);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        SubgroupLattice { subgroups, class_of, classes, conjugator, conj, order: n, index }
    }

    /// Index of `c^-1 S_i c`.
    #[inline]
    pub fn conjugate(&self, i: usize, c: usize) -> usize {
        self.conj[i * self.order + c]
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn find(&self, mask: &[bool]) -> Option<usize> {
        self.index.get(mask).copied()
    }

    pub fn find_elements(&self, elements: &[usize]) -> Option<usize> {
        let n = self.subgroups[0].mask.len();
        let mut mask = vec![false; n];
        for &x in elements {
            if x >= n {
                return None;
            }
            mask[x] = true;
        }
        self.find(&mask)
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn class_members(&self, cid: usize) -> &[usize] {
        &self.classes[cid]
    }

    /// Index of the representative (least member) of a class.
    pub fn rep(&self, cid: usize) -> usize {
        self.classes[cid][0]
    }

    pub fn reps(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    /// `c` with `c^-1 R c = S`, where `R` is the representative of the class of `S`.
    pub fn conjugator(&self, i: usize) -> usize {
        self.conjugator[i]
    }

    /// Some member of class `a` is contained in the representative of class `b`.
    pub fn subconjugate(&self, a: usize, b: usize) -> bool {
        let big = &self.subgroups[self.rep(b)];
        self.classes[a].iter().any(|&s| self.subgroups[s].is_subgroup_of(big))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: Arc<Group>,
    target: Arc<Group>,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: Arc<Group>, target: Arc<Group>, map: Vec<usize>) -> Result<GroupHom> {
        if map.len() != source.order() || map.iter().any(|&y| y >= target.order()) {
            return Err(Error::MalformedTable("homomorphism table has the wrong shape".into()));
        }
        check_hom(&source, &target, &map)?;
        Ok(GroupHom { source, target, map })
    }

    pub fn source(&self) -> &Arc<Group> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Group> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_injective(&self) -> bool {
        (1..self.map.len()).all(|x| self.map[x] != 0)
    }
}

fn check_hom(k: &Group, g: &Group, map: &[usize]) -> Result<()> {
    for a in 0..k.order() {
        for b in 0..k.order() {
            if map[k.mul(a, b)] != g.mul(map[a], map[b]) {
                return Err(Error::NotAHomomorphism(a, b));
            }
        }
    }
    Ok(())
}

pub fn enumerate_homomorphisms(k: &Arc<Group>, g: &Arc<Group>) -> Result<Vec<GroupHom>> {
    enumerate_homomorphisms_capped(k, g, DEFAULT_HOM_CAP)
}

/// All homomorphisms `K -> G`, sorted by their tables. The trivial one is first.
pub fn enumerate_homomorphisms_capped(
    k: &Arc<Group>,
    g: &Arc<Group>,
    cap: usize,
) -> Result<Vec<GroupHom>> {
    Ok(hom_tables(k, g, cap)?
        .into_iter()
        .map(|map| GroupHom { source: k.clone(), target: g.clone(), map })
        .collect())
}

pub(crate) fn hom_tables(k: &Group, g: &Group, cap: usize) -> Result<Vec<Vec<usize>>> {
    if k.order().saturating_mul(g.order()) > cap {
        return Err(Error::CapExceeded {
            what: format!("|K|*|G| = {}", k.order() * g.order()),
            cap,
        });
    }
    let mut out = Vec::new();
    search_homs(k, g, &|_, _| true, &mut |m| {
        out.push(m);
        true
    });
    out.sort();
    Ok(out)
}

/// Backtracks over generator images; `visit` returns false to stop.
fn search_homs(
    k: &Group,
    g: &Group,
    allow: &dyn Fn(usize, usize) -> bool,
    visit: &mut dyn FnMut(Vec<usize>) -> bool,
) {
    let gens = k.generating_set();
    // words: x = parent * gens[s], in BFS order from the identity
    let mut order = vec![0usize];
    let mut parent = vec![(0usize, 0usize); k.order()];
    let mut seen = vec![false; k.order()];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for (s, &gen) in gens.iter().enumerate() {
            let y = k.mul(x, gen);
            if !seen[y] {
                seen[y] = true;
                parent[y] = (x, s);
                order.push(y);
            }
        }
        i += 1;
    }
    let gen_orders: Vec<usize> = gens.iter().map(|&x| k.element_order(x)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .enumerate()
        .map(|(s, &x)| {
            (0..g.order())
                .filter(|&y| gen_orders[s] % g.element_order(y) == 0 && allow(x, y))
                .collect()
        })
        .collect();
    let mut images = vec![0; gens.len()];
    fn rec(
        depth: usize,
        images: &mut Vec<usize>,
        candidates: &[Vec<usize>],
        k: &Group,
        g: &Group,
        order: &[usize],
        parent: &[(usize, usize)],
        visit: &mut dyn FnMut(Vec<usize>) -> bool,
    ) -> bool {
        if depth == images.len() {
            let mut map = vec![0; k.order()];
            for &x in &order[1..] {
                let (p, s) = parent[x];
                map[x] = g.mul(map[p], images[s]);
            }
            if check_hom(k, g, &map).is_ok() {
                return visit(map);
            }
            return true;
        }
        for &y in &candidates[depth] {
            images[depth] = y;
            if !rec(depth + 1, images, candidates, k, g, order, parent, visit) {
                return false;
            }
        }
        true
    }
    rec(0, &mut images, &candidates, k, g, &order, &parent, visit);
}

/// Backtracking isomorphism search for small groups.
pub(crate) fn isomorphism(a: &Group, b: &Group) -> Option<Vec<usize>> {
    if a.order() != b.order() || a.order_profile() != b.order_profile() {
        return None;
    }
    let mut found = None;
    search_homs(
        a,
        b,
        &|x, y| a.element_order(x) == b.element_order(y),
        &mut |m| {
            let mut hit = vec![false; b.order()];
            for &y in &m {
                hit[y] = true;
            }
            if hit.iter().all(|&h| h) {
                found = Some(m);
                false
            } else {
                true
            }
        },
    );
    found
}

pub(crate) fn isomorphic(a: &Group, b: &Group) -> bool {
    isomorphism(a, b).is_some()
}

/// Named groups: every group of order at most 12, plus a few of order up to 24.
pub fn catalog() -> Vec<Arc<Group>> {
    let c = Group::cyclic;
    let x = |a: Group, b: Group| Group::direct_product(&a, &b);
    let groups = vec![
        Group::trivial(),
        c(2),
        c(3),
        c(4),
        x(c(2), c(2)),
        c(5),
        c(6),
        Group::dihedral(3),
        c(7),
        c(8),
        x(c(4), c(2)),
        x(x(c(2), c(2)), c(2)),
        Group::dihedral(4),
        Group::dicyclic(2),
        c(9),
        x(c(3), c(3)),
        c(10),
        Group::dihedral(5),
        c(11),
        c(12),
        x(c(6), c(2)),
        Group::dihedral(6),
        Group::alternating(4),
        Group::dicyclic(3),
        Group::dihedral(7),
        x(c(4), c(4)),
        Group::dihedral(8),
        Group::dicyclic(4),
        x(Group::dihedral(3), c(3)),
        Group::symmetric(4),
        x(Group::alternating(4), c(2)),
        Group::dihedral(12),
    ];
    groups.into_iter().map(Arc::new).collect()
}

pub fn catalog_up_to(order: usize) -> Vec<Arc<Group>> {
    catalog().into_iter().filter(|g| g.order() <= order).collect()
}

pub fn catalog_group(name: &str) -> Option<Arc<Group>> {
    let key = name.replace('×', "x").replace(['₂', '₃'], "");
    catalog().into_iter().find(|g| g.name() == Some(key.as_str())).or_else(|| {
        let parse = |p: &str| p.parse::<usize>().ok().filter(|&n| n > 0 && n <= 12);
        match key.split_at(1.min(key.len())) {
            ("S", rest) => parse(rest).filter(|&n| n <= 6).map(|n| Arc::new(Group::symmetric(n))),
            ("A", rest) => parse(rest).filter(|&n| n <= 6).map(|n| Arc::new(Group::alternating(n))),
            _ => None,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subset_closure_count(g: &Group) -> usize {
        let n = g.order();
        (0u32..(1 << n))
            .filter(|bits| {
                let has = |x: usize| bits & (1 << x) != 0;
                has(0)
                    && (0..n).all(|a| !has(a) || (0..n).all(|b| !has(b) || has(g.mul(a, b))))
            })
            .count()
    }

    #[test]
    fn from_table_c2() {
        let g = Group::from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn from_table_relabels_identity_first() {
        // identity is element 1 in the input
        let g = Group::from_table(&[vec![2, 0, 1], vec![0, 1, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 0), 1);
        assert_eq!(g.order(), 3);
    }

    #[test]
    fn from_table_errors() {
        let bad = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 1]];
        assert!(matches!(Group::from_table(&bad), Err(Error::NonAssociative(..))));
        let noid = vec![vec![1, 0], vec![0, 0]];
        assert_eq!(Group::from_table(&noid), Err(Error::NoIdentity));
        let noinv = vec![vec![0, 1], vec![1, 1]];
        assert_eq!(Group::from_table(&noinv), Err(Error::NoInverse(1)));
        assert!(matches!(Group::from_table(&[vec![0, 1]]), Err(Error::MalformedTable(_))));
    }

    #[test]
    fn permutation_closure_s3() {
        let g = Group::from_permutations(3, &[vec![vec![1, 2]], vec![vec![1, 2, 3]]]).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        let t = g.table();
        let again = Group::from_table(&t).unwrap();
        assert!(isomorphic(&again, &Group::dihedral(3)));
    }

    #[test]
    fn closure_cap() {
        let r = Group::from_permutations_capped(5, &[vec![vec![1, 2]], vec![vec![1, 2, 3, 4, 5]]], 100);
        assert_eq!(r, Err(Error::GeneratorClosureOverflow { cap: 100 }));
        assert!(Group::from_permutations(4, &[vec![vec![1, 5]]]).is_err());
    }

    #[test]
    fn subgroup_counts_match_subset_scan() {
        for g in catalog_up_to(8) {
            assert_eq!(g.lattice().len(), subset_closure_count(&g), "{g:?}");
        }
        let s3 = Group::dihedral(3);
        assert_eq!(s3.lattice().len(), 6);
        assert_eq!(s3.lattice().num_classes(), 4);
        let v4 = Group::direct_product(&Group::cyclic(2), &Group::cyclic(2));
        assert_eq!(v4.lattice().len(), 5);
        assert_eq!(v4.lattice().num_classes(), 5);
        assert_eq!(Group::trivial().lattice().len(), 1);
    }

    #[test]
    fn conjugators_witness_classes() {
        for g in catalog_up_to(24) {
            let lat = g.lattice();
            assert_eq!(lat.subgroup(0).order(), 1);
            for i in 0..lat.len() {
                let rep = lat.subgroup(lat.rep(lat.class_of(i)));
                let conj = g.conjugate_mask(rep.mask(), lat.conjugator(i));
                assert_eq!(conj, lat.subgroup(i).mask());
                assert_eq!(g.order() % lat.subgroup(i).order(), 0);
            }
        }
    }

    #[test]
    fn conjugacy_classes_s3() {
        let s3 = Group::symmetric(3);
        let sizes: Vec<usize> = s3.conjugacy_classes().iter().map(|c| c.len()).collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 3]);
        assert_eq!(s3.conjugacy_classes()[0], vec![0]);
        assert_eq!(Group::cyclic(3).conjugacy_classes().len(), 3);
        for g in catalog() {
            for c in g.conjugacy_classes() {
                assert_eq!(g.order() % c.len(), 0);
            }
        }
    }

    #[test]
    fn hom_counts() {
        let c2 = Arc::new(Group::cyclic(2));
        let c3 = Arc::new(Group::cyclic(3));
        let e = Arc::new(Group::trivial());
        assert_eq!(enumerate_homomorphisms(&c2, &c2).unwrap().len(), 2);
        assert_eq!(enumerate_homomorphisms(&c3, &c2).unwrap().len(), 1);
        let s3 = Arc::new(Group::symmetric(3));
        assert_eq!(enumerate_homomorphisms(&s3, &e).unwrap().len(), 1);
        // brute force over all maps S3 -> C2: 2^6
        let brute = (0u32..64)
            .filter(|bits| {
                let map: Vec<usize> = (0..6).map(|i| ((bits >> i) & 1) as usize).collect();
                check_hom(&s3, &c2, &map).is_ok()
            })
            .count();
        assert_eq!(enumerate_homomorphisms(&s3, &c2).unwrap().len(), brute);
        let homs = enumerate_homomorphisms(&s3, &s3).unwrap();
        assert_eq!(homs.len(), 10);
        assert!(homs[0].map().iter().all(|&y| y == 0));
        assert!(matches!(
            enumerate_homomorphisms_capped(&s3, &s3, 10),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn catalog_is_complete_up_to_twelve() {
        let small = catalog_up_to(12);
        assert_eq!(small.len(), 24);
        for (i, a) in small.iter().enumerate() {
            for b in &small[..i] {
                assert!(!isomorphic(a, b), "{a:?} ~ {b:?}");
            }
        }
        assert_eq!(catalog_group("S3").unwrap().order(), 6);
        assert_eq!(catalog_group("C2xC2").unwrap().order(), 4);
    }

    #[test]
    fn opposite_is_isomorphic() {
        for g in catalog_up_to(12) {
            let op = g.opposite();
            assert_eq!(op.mul(1 % g.order(), 0), 1 % g.order());
            assert!(isomorphic(&g, &op));
        }
    }
}
