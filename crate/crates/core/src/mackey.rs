//! Mackey functors presented by restriction and transfer matrices on orbit
//! morphisms, evaluated on spans and checked against span composition.
//!
//! Matrices act on row vectors: the value on `X -> Y` is `dim X x dim Y`, and
//! `eval(s then t) = eval(s) * eval(t)`. A transitive span
//! `G/H_i <- O -> G/H_j` with `O = G/H_k` factors as the restriction along its
//! left leg followed by the transfer along its right leg.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::burnside::{orbit_basis, OrbitBasis, VirtualHom};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::gset::GSet;
use crate::span::{atom_span, atoms, compose_spans, span_class, Atom, SpanClass};

pub type IntMatrix = Vec<Vec<i64>>;

/// `G/H_from -> G/H_to`, `H_from x |-> H_to d x`, with `d` least in its coset `H_to d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OrbitMorphism {
    pub from: usize,
    pub to: usize,
    pub d: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub morphism: OrbitMorphism,
    /// `dim to x dim from`
    pub restriction: IntMatrix,
    /// `dim from x dim to`
    pub transfer: IntMatrix,
}

#[derive(Clone, Debug)]
pub struct MackeyData {
    group: Arc<Group>,
    pub ranks: Vec<usize>,
    pub generators: BTreeMap<OrbitMorphism, Generator>,
    basis: OrbitBasis,
    coset_reps: Vec<Vec<usize>>,
}

/// Every morphism between basis orbits.
pub fn orbit_morphisms(group: &Arc<Group>) -> Vec<OrbitMorphism> {
    let lat = group.lattice();
    let reps = lat.reps();
    let n = group.order();
    let mut out = Vec::new();
    for (from, &hk) in reps.iter().enumerate() {
        for (to, &hi) in reps.iter().enumerate() {
            let big = lat.subgroup(hi);
            let mut seen = vec![false; n];
            for d in 0..n {
                if seen[d] {
                    continue;
                }
                for &h in big.elements() {
                    seen[group.mul(h, d)] = true;
                }
                // d H_k d^-1 <= H_i
                if lat.subgroup(hk).elements().iter().all(|&h| big.contains(group.conj(h, group.inv(d)))) {
                    out.push(OrbitMorphism { from, to, d });
                }
            }
        }
    }
    out
}

fn coset_reps(basis: &OrbitBasis) -> Vec<Vec<usize>> {
    (0..basis.len())
        .map(|i| {
            let o = basis.orbit(i);
            let mut reps = vec![usize::MAX; o.size()];
            for g in 0..basis.group.order() {
                let u = o.act(0, g);
                if reps[u] == usize::MAX {
                    reps[u] = g;
                }
            }
            reps
        })
        .collect()
}

fn matmul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect()
        })
        .collect()
}

fn zeros(r: usize, c: usize) -> IntMatrix {
    vec![vec![0; c]; r]
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisSpan {
    pub from: usize,
    pub to: usize,
    pub atom: Atom,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub first: BasisSpan,
    pub second: BasisSpan,
    pub composite: IntMatrix,
    pub product: IntMatrix,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MackeyReport {
    pub identities_checked: usize,
    pub identity_failures: Vec<usize>,
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl MackeyReport {
    pub fn passed(&self) -> bool {
        self.identity_failures.is_empty() && self.violations.is_empty()
    }
}

impl MackeyData {
    pub fn new(group: &Arc<Group>, ranks: Vec<usize>, generators: Vec<Generator>) -> Result<MackeyData> {
        let basis = orbit_basis(group);
        if ranks.len() != basis.len() {
            return Err(Error::ShapeMismatch(format!("{} ranks for {} orbits", ranks.len(), basis.len())));
        }
        let mut map = BTreeMap::new();
        for g in generators {
            let m = g.morphism;
            if m.from >= basis.len() || m.to >= basis.len() {
                return Err(Error::ShapeMismatch(format!("morphism {m:?} out of range")));
            }
            let shaped = |a: &IntMatrix, r: usize, c: usize| a.len() == r && a.iter().all(|row| row.len() == c);
            if !shaped(&g.restriction, ranks[m.to], ranks[m.from]) || !shaped(&g.transfer, ranks[m.from], ranks[m.to]) {
                return Err(Error::ShapeMismatch(format!("generator {m:?} has the wrong shape")));
            }
            map.insert(m, g);
        }
        let coset_reps = coset_reps(&basis);
        Ok(MackeyData { group: group.clone(), ranks, generators: map, basis, coset_reps })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn basis(&self) -> &OrbitBasis {
        &self.basis
    }

    fn generator(&self, m: OrbitMorphism) -> Result<&Generator> {
        self.generators.get(&m).ok_or_else(|| Error::UnfactorableSpan(format!("no generator for {m:?}")))
    }

    /// The factorization of a transitive span between basis orbits `i` and `j`:
    /// the orbit morphisms of its left and right legs out of `G/H_k`.
    pub fn factor(&self, i: usize, j: usize, atom: Atom) -> (OrbitMorphism, OrbitMorphism) {
        let g = &self.group;
        let lat = g.lattice();
        let k = lat.class_of(atom.stabilizer);
        // c^-1 S c = H_k
        let c = g.inv(lat.conjugator(atom.stabilizer));
        let oi = self.basis.orbit(i);
        let oj = self.basis.orbit(j);
        let ny = oj.size();
        let (x, y) = (atom.base / ny, atom.base % ny);
        let d = self.coset_reps[i][oi.act(x, c)];
        let e = self.coset_reps[j][oj.act(y, c)];
        (OrbitMorphism { from: k, to: i, d }, OrbitMorphism { from: k, to: j, d: e })
    }

    pub fn label(&self, i: usize, j: usize, atom: Atom) -> String {
        let (a, b) = self.factor(i, j, atom);
        let iso = |m: OrbitMorphism| m.from == m.to;
        let name = |m: OrbitMorphism| format!("{}->{}@{}", m.from, m.to, m.d);
        match (iso(a), iso(b)) {
            (true, true) => format!("conj[{};{}]", name(a), name(b)),
            (true, false) => format!("tr[{}]", name(b)),
            (false, true) => format!("res[{}]", name(a)),
            (false, false) => format!("res[{}]tr[{}]", name(a), name(b)),
        }
    }

    pub fn evaluate_atom(&self, i: usize, j: usize, atom: Atom) -> Result<IntMatrix> {
        let (a, b) = self.factor(i, j, atom);
        let r = &self.generator(a)?.restriction;
        let t = &self.generator(b)?.transfer;
        Ok(matmul(r, t, self.ranks[a.from], self.ranks[j]))
    }

    /// Value on a span class between sums of basis orbits, as a block matrix.
    pub fn evaluate_class(&self, left: &[usize], right: &[usize], class: &SpanClass) -> Result<IntMatrix> {
        let mut out = VirtualHom::zero(&self.group, left.to_vec(), right.to_vec());
        for (a, k) in class.atoms() {
            out.coeffs.insert(a, k as i64);
        }
        self.evaluate(&out)
    }

    pub fn evaluate(&self, s: &VirtualHom) -> Result<IntMatrix> {
        let locate = |parts: &[usize], z: usize| -> (usize, usize, usize) {
            // (summand, local element, row offset)
            let (mut off, mut row) = (0, 0);
            for (p, &i) in parts.iter().enumerate() {
                let size = self.basis.orbit(i).size();
                if z < off + size {
                    return (p, z - off, row);
                }
                off += size;
                row += self.ranks[i];
            }
            unreachable!("element outside the foot")
        };
        let dim = |parts: &[usize]| parts.iter().map(|&i| self.ranks[i]).sum::<usize>();
        let (x, y) = s.feet();
        let ny = y.size();
        let mut out = zeros(dim(&s.left), dim(&s.right));
        for (&atom, &coeff) in &s.coeffs {
            let (p, lx, r0) = locate(&s.left, atom.base / ny);
            let (q, ly, c0) = locate(&s.right, atom.base % ny);
            let (i, j) = (s.left[p], s.right[q]);
            let oi = self.basis.orbit(i);
            let oj = self.basis.orbit(j);
            // the same atom, seen between the two single orbits
            let local = SpanClass::from_atoms([(Atom { base: lx * oj.size() + ly, stabilizer: atom.stabilizer }, 1)]);
            let local = span_class(&local.realize(&oi, &oj));
            let la = local.entries[0];
            let block = self.evaluate_atom(i, j, Atom { base: la.base, stabilizer: la.stabilizer })?;
            for (r, row) in block.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    out[r0 + r][c0 + c] += coeff * v;
                }
            }
        }
        let _ = x;
        Ok(out)
    }

    /// Identity spans go to identities, and every composable pair of transitive
    /// spans between basis orbits with apex at most `bound` composes correctly.
    pub fn check(&self, bound: usize) -> MackeyReport {
        let r = self.basis.len();
        let mut report = MackeyReport::default();
        for i in 0..r {
            report.identities_checked += 1;
            let id = OrbitMorphism { from: i, to: i, d: 0 };
            let ok = self
                .generators
                .get(&id)
                .map(|g| matmul(&g.restriction, &g.transfer, self.ranks[i], self.ranks[i]) == identity(self.ranks[i]))
                .unwrap_or(false);
            if !ok {
                report.identity_failures.push(i);
            }
        }
        let orbits: Vec<GSet> = (0..r).map(|i| self.basis.orbit(i)).collect();
        let atom_lists: Vec<Vec<Vec<(Atom, usize)>>> = (0..r)
            .map(|i| (0..r).map(|j| atoms(&orbits[i], &orbits[j]).expect("same group")).collect())
            .collect();
        for i in 0..r {
            for j in 0..r {
                for &(a, sa) in &atom_lists[i][j] {
                    if sa > bound {
                        continue;
                    }
                    let s = atom_span(&orbits[i], &orbits[j], a);
                    let ea = self.evaluate_atom(i, j, a);
                    for l in 0..r {
                        for &(b, sb) in &atom_lists[j][l] {
                            if sb > bound {
                                continue;
                            }
                            report.pairs_checked += 1;
                            let t = atom_span(&orbits[j], &orbits[l], b);
                            let c = span_class(&compose_spans(&s, &t).expect("composable"));
                            let composite = self.evaluate_class(&[i], &[l], &c);
                            let eb = self.evaluate_atom(j, l, b);
                            let (composite, product) = match (composite, &ea, eb) {
                                (Ok(c), Ok(x), Ok(y)) => {
                                    let p = matmul(x, &y, self.ranks[j], self.ranks[l]);
                                    (c, p)
                                }
                                _ => (vec![], vec![vec![]]),
                            };
                            if composite != product {
                                report.violations.push(Violation {
                                    first: BasisSpan { from: i, to: j, atom: a, label: self.label(i, j, a) },
                                    second: BasisSpan { from: j, to: l, atom: b, label: self.label(j, l, b) },
                                    composite,
                                    product,
                                });
                            }
                        }
                    }
                }
            }
        }
        report
    }
}

pub fn evaluate_mackey(m: &MackeyData, s: &VirtualHom) -> Result<IntMatrix> {
    m.evaluate(s)
}

pub fn check_mackey(m: &MackeyData, bound: usize) -> MackeyReport {
    m.check(bound)
}

#[derive(Clone, Debug)]
pub enum MackeyKind {
    Burnside,
    /// Fixed points of the permutation module of a G-set.
    Permutation(GSet),
}

pub fn standard_mackey(kind: &MackeyKind, group: &Arc<Group>) -> Result<MackeyData> {
    match kind {
        MackeyKind::Burnside => Ok(burnside_functor(group)),
        MackeyKind::Permutation(x) => {
            if !crate::gset::same_group(x.group(), group) {
                return Err(Error::GroupMismatch);
            }
            Ok(permutation_functor(group, x))
        }
    }
}

/// Least `H`-conjugate of subgroup `s` (lattice indices), for `H` given by its elements.
fn canonical_in(group: &Group, h: &[usize], s: usize) -> usize {
    let lat = group.lattice();
    h.iter().map(|&c| lat.conjugate(s, c)).min().expect("nonempty")
}

/// Value at `G/H` is the Burnside group of `H`, on the basis of `H`-orbits `H/L`.
fn burnside_functor(group: &Arc<Group>) -> MackeyData {
    let lat = group.lattice();
    let reps = lat.reps();
    let elems: Vec<Vec<usize>> = reps.iter().map(|&h| lat.subgroup(h).elements().to_vec()).collect();
    let bases: Vec<Vec<usize>> = elems
        .iter()
        .map(|h| {
            let mut b: Vec<usize> = (0..lat.len())
                .filter(|&s| lat.subgroup(s).elements().iter().all(|x| h.binary_search(x).is_ok()))
                .map(|s| canonical_in(group, h, s))
                .collect();
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();
    let position = |i: usize, s: usize| bases[i].binary_search(&canonical_in(group, &elems[i], s)).expect("basis member");
    let mut generators = Vec::new();
    for m in orbit_morphisms(group) {
        let (k, i, d) = (m.from, m.to, m.d);
        let dinv = group.inv(d);
        let mut transfer = zeros(bases[k].len(), bases[i].len());
        for (row, &l) in bases[k].iter().enumerate() {
            // d L d^-1
            transfer[row][position(i, lat.conjugate(l, dinv))] += 1;
        }
        let mut restriction = zeros(bases[i].len(), bases[k].len());
        for (row, &l) in bases[i].iter().enumerate() {
            // H_k acts on L \ H_i by (L z) h = L z d h d^-1
            let big = &elems[i];
            let small = lat.subgroup(l);
            let coset_of = |z: usize| big.iter().copied().filter(|&w| small.contains(group.mul(w, group.inv(z)))).min().expect("coset");
            let mut seen = std::collections::BTreeSet::new();
            for &z in big {
                let z = coset_of(z);
                if seen.contains(&z) {
                    continue;
                }
                for &h in &elems[k] {
                    seen.insert(coset_of(group.mul(group.mul(z, d), group.mul(h, dinv))));
                }
                let zd = group.mul(z, d);
                let stab: Vec<bool> = (0..group.order())
                    .map(|h| elems[k].binary_search(&h).is_ok() && small.contains(group.conj(h, group.inv(zd))))
                    .collect();
                let s = lat.find(&stab).expect("stabilizer is a subgroup");
                restriction[row][position(k, s)] += 1;
            }
        }
        generators.push(Generator { morphism: m, restriction, transfer });
    }
    let ranks = bases.iter().map(|b| b.len()).collect();
    MackeyData::new(group, ranks, generators).expect("well-shaped")
}

/// Value at `G/H` is `Z[X]^H`, on the basis of `H`-orbit sums.
fn permutation_functor(group: &Arc<Group>, x: &GSet) -> MackeyData {
    let lat = group.lattice();
    let reps = lat.reps();
    let elems: Vec<Vec<usize>> = reps.iter().map(|&h| lat.subgroup(h).elements().to_vec()).collect();
    // orbit id of each point and base point of each orbit, per basis subgroup
    let orbits: Vec<(Vec<usize>, Vec<usize>)> = elems
        .iter()
        .map(|h| {
            let mut id = vec![usize::MAX; x.size()];
            let mut bases = Vec::new();
            for p in 0..x.size() {
                if id[p] == usize::MAX {
                    for &g in h {
                        id[x.act(p, g)] = bases.len();
                    }
                    bases.push(p);
                }
            }
            (id, bases)
        })
        .collect();
    let coords = |i: usize, v: &[i64]| -> Vec<i64> { orbits[i].1.iter().map(|&p| v[p]).collect() };
    let mut generators = Vec::new();
    for m in orbit_morphisms(group) {
        let (k, i, d) = (m.from, m.to, m.d);
        let dinv = group.inv(d);
        let restriction = (0..orbits[i].1.len())
            .map(|o| {
                let mut v = vec![0i64; x.size()];
                for p in (0..x.size()).filter(|&p| orbits[i].0[p] == o) {
                    v[x.act(p, d)] += 1;
                }
                coords(k, &v)
            })
            .collect();
        // right cosets of d H_k d^-1 in H_i
        let conj: Vec<bool> = {
            let mut mask = vec![false; group.order()];
            for &h in &elems[k] {
                mask[group.conj(h, dinv)] = true;
            }
            mask
        };
        let mut coset_reps = Vec::new();
        let mut covered = vec![false; group.order()];
        for &r in &elems[i] {
            if !covered[r] {
                coset_reps.push(r);
                for a in (0..group.order()).filter(|&a| conj[a]) {
                    covered[group.mul(a, r)] = true;
                }
            }
        }
        let transfer = (0..orbits[k].1.len())
            .map(|o| {
                let mut v = vec![0i64; x.size()];
                for p in (0..x.size()).filter(|&p| orbits[k].0[p] == o) {
                    for &r in &coset_reps {
                        v[x.act(x.act(p, dinv), r)] += 1;
                    }
                }
                coords(i, &v)
            })
            .collect();
        generators.push(Generator { morphism: m, restriction, transfer });
    }
    let ranks = orbits.iter().map(|o| o.1.len()).collect();
    MackeyData::new(group, ranks, generators).expect("well-shaped")
}
