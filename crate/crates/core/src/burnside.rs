//! Burnside categories of a finite group and the table of marks.
//!
//! Orbits are indexed by subgroup conjugacy classes in lattice order, so the
//! trivial subgroup comes first and the whole group last.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::gset::{gset_iso, same_group, GSet};
use crate::span::{atom_span, compose_spans, span_class, Atom, SpanClass};

#[derive(Clone, Debug)]
pub struct OrbitBasis {
    pub group: Arc<Group>,
    /// Lattice indices of the class representatives, by class id.
    pub reps: Vec<usize>,
}

impl OrbitBasis {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// The coset set `H_i \ G`.
    pub fn orbit(&self, i: usize) -> GSet {
        GSet::orbit_of_subgroup(&self.group, self.reps[i])
    }

    /// Coproduct of basis orbits in the given order.
    pub fn sum(&self, parts: &[usize]) -> GSet {
        parts.iter().fold(GSet::empty(self.group.clone()), |acc, &i| acc.coproduct(&self.orbit(i)).expect("same group"))
    }
}

pub fn orbit_basis(group: &Arc<Group>) -> OrbitBasis {
    OrbitBasis { group: group.clone(), reps: group.lattice().reps() }
}

/// Rows are orbits `G/K`, columns subgroups `H`; entry `|(G/K)^H|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarksMatrix {
    pub rows: Vec<Vec<i64>>,
}

impl MarksMatrix {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Zero above the diagonal.
    pub fn is_lower_triangular(&self) -> bool {
        (0..self.size()).all(|i| (i + 1..self.size()).all(|j| self.rows[i][j] == 0))
    }

    pub fn diagonal_positive(&self) -> bool {
        (0..self.size()).all(|i| self.rows[i][i] > 0)
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        let rows: Vec<Vec<BigInt>> =
            self.rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        bareiss_determinant(rows)
    }

    /// Coordinates of a G-set from its marks, by forward substitution.
    pub fn solve(&self, marks: &[i64]) -> Option<Vec<i64>> {
        let n = self.size();
        let mut coords = vec![0i64; n];
        // marks[H] = sum_K c_K m[K][H]; column H only sees rows K >= H
        for h in (0..n).rev() {
            let mut rest = marks[h];
            for k in h + 1..n {
                rest -= coords[k] * self.rows[k][h];
            }
            if rest % self.rows[h][h] != 0 {
                return None;
            }
            coords[h] = rest / self.rows[h][h];
        }
        Some(coords)
    }
}

pub(crate) fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn table_of_marks(group: &Arc<Group>) -> MarksMatrix {
    let basis = orbit_basis(group);
    let lat = group.lattice();
    let rows = (0..basis.len())
        .map(|k| {
            let orbit = basis.orbit(k);
            basis.reps.iter().map(|&h| orbit.fixed_points(lat.subgroup(h).mask()) as i64).collect()
        })
        .collect();
    MarksMatrix { rows }
}

/// `|X^H|` for each basis subgroup `H`.
pub fn marks(x: &GSet) -> Vec<i64> {
    let lat = x.group().lattice();
    lat.reps().iter().map(|&h| x.fixed_points(lat.subgroup(h).mask()) as i64).collect()
}

/// Orbit multiplicities of `X x Y`, checked against the marks and by an explicit isomorphism.
pub fn burnside_product(x: &GSet, y: &GSet) -> Result<Vec<i64>> {
    let p = x.product(y)?;
    let lat = x.group().lattice();
    let mut coords = vec![0i64; lat.num_classes()];
    for t in p.orbit_types() {
        coords[t.class] = t.multiplicity as i64;
    }
    let table = table_of_marks(x.group());
    let product_marks: Vec<i64> = marks(x).iter().zip(marks(y)).map(|(a, b)| a * b).collect();
    if table.solve(&product_marks).as_deref() != Some(&coords[..]) {
        return Err(Error::NotEquivariant("marks disagree with the orbit decomposition".into()));
    }
    let basis = orbit_basis(x.group());
    let parts: Vec<usize> =
        coords.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize)).collect();
    if gset_iso(&basis.sum(&parts), &p)?.is_none() {
        return Err(Error::NotEquivariant("no isomorphism to the orbit sum".into()));
    }
    Ok(coords)
}

/// A ℤ-linear combination of transitive spans between sums of basis orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualHom {
    group: Arc<Group>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub coeffs: BTreeMap<Atom, i64>,
}

impl VirtualHom {
    pub fn zero(group: &Arc<Group>, left: Vec<usize>, right: Vec<usize>) -> VirtualHom {
        VirtualHom { group: group.clone(), left, right, coeffs: BTreeMap::new() }
    }

    pub fn from_class(group: &Arc<Group>, left: Vec<usize>, right: Vec<usize>, class: &SpanClass) -> VirtualHom {
        let mut v = VirtualHom::zero(group, left, right);
        for (a, k) in class.atoms() {
            *v.coeffs.entry(a).or_default() += k as i64;
        }
        v
    }

    pub fn identity(group: &Arc<Group>, feet: Vec<usize>) -> VirtualHom {
        let basis = orbit_basis(group);
        let x = basis.sum(&feet);
        let class = span_class(&crate::span::Span::identity(&x));
        VirtualHom::from_class(group, feet.clone(), feet, &class)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn feet(&self) -> (GSet, GSet) {
        let basis = orbit_basis(&self.group);
        (basis.sum(&self.left), basis.sum(&self.right))
    }

    fn normalize(mut self) -> VirtualHom {
        self.coeffs.retain(|_, v| *v != 0);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|&v| v == 0)
    }

    pub fn add(&self, other: &VirtualHom) -> Result<VirtualHom> {
        if self.left != other.left || self.right != other.right || !same_group(&self.group, &other.group) {
            return Err(Error::FeetMismatch);
        }
        let mut out = self.clone();
        for (a, v) in &other.coeffs {
            *out.coeffs.entry(*a).or_default() += v;
        }
        Ok(out.normalize())
    }

    pub fn scale(&self, k: i64) -> VirtualHom {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= k;
        }
        out.normalize()
    }

    pub fn sub(&self, other: &VirtualHom) -> Result<VirtualHom> {
        self.add(&other.scale(-1))
    }

    /// The span class when every coefficient is nonnegative.
    pub fn effective(&self) -> Option<SpanClass> {
        if self.coeffs.values().any(|&v| v < 0) {
            return None;
        }
        Some(SpanClass::from_atoms(self.coeffs.iter().map(|(&a, &v)| (a, v as usize))))
    }
}

/// Bilinear extension of span composition; `a` then `b`.
pub fn virtual_compose(a: &VirtualHom, b: &VirtualHom) -> Result<VirtualHom> {
    if a.right != b.left || !same_group(&a.group, &b.group) {
        return Err(Error::FeetMismatch);
    }
    let (x, y) = a.feet();
    let (_, z) = b.feet();
    let mut out = VirtualHom::zero(&a.group, a.left.clone(), b.right.clone());
    for (&p, &u) in &a.coeffs {
        let s = atom_span(&x, &y, p);
        for (&q, &v) in &b.coeffs {
            let t = atom_span(&y, &z, q);
            let c = span_class(&compose_spans(&s, &t)?);
            for (r, k) in c.atoms() {
                *out.coeffs.entry(r).or_default() += u * v * k as i64;
            }
        }
    }
    Ok(out.normalize())
}
