//! Single-colored operads in sets, truncated at a maximal arity, and spans whose
//! right-leg fibers are decorated by operations.
//!
//! `Sigma_n` acts on the left: `sigma . mu` relabels input `i` as `sigma(i)`.
//! Composition `gamma(mu; nu_1, ..., nu_n)` numbers the inputs block by block.
//! Permutations of `0..n` are indexed by their rank in lexicographic order.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

pub fn perm_rank(p: &[usize]) -> usize {
    let n = p.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&v| v < p[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

pub fn perm_unrank(n: usize, mut rank: usize) -> Vec<usize> {
    let mut digits = vec![0; n];
    for i in (0..n).rev() {
        let base = n - i;
        digits[i] = rank % base;
        rank /= base;
    }
    let mut pool: Vec<usize> = (0..n).collect();
    digits.iter().map(|&d| pool.remove(d)).collect()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Comm,
    Assoc,
    Table {
        sizes: Vec<usize>,
        /// `action[n][rank][x]`
        action: Vec<Vec<Vec<usize>>>,
        unit: usize,
        gamma: HashMap<(usize, usize, Vec<(usize, usize)>), usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetOperad {
    name: String,
    max_arity: usize,
    repr: Repr,
}

/// Interchange format for table operads.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperadData {
    pub name: String,
    pub max_arity: usize,
    /// one per arity `0..=max_arity`
    pub components: Vec<ComponentData>,
    pub unit: usize,
    pub gamma: Vec<GammaEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentData {
    pub size: usize,
    /// `action[rank][x]` for the permutations of `0..arity` in lexicographic order
    pub action: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaEntry {
    pub op: (usize, usize),
    pub inputs: Vec<(usize, usize)>,
    pub result: usize,
}

/// Input arity lists `k_1..k_n` with sum at most `room`.
fn arity_lists(n: usize, room: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for k in 0..=room {
        for mut rest in arity_lists(n - 1, room - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

fn product_of(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &s in sizes {
        out = out.into_iter().flat_map(|v| (0..s).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

impl SetOperad {
    /// One operation in each arity.
    pub fn comm(max_arity: usize) -> SetOperad {
        SetOperad { name: "Comm".into(), max_arity, repr: Repr::Comm }
    }

    /// `Sigma_n` in arity `n`: the orders in which inputs are multiplied.
    pub fn assoc(max_arity: usize) -> SetOperad {
        SetOperad { name: "Assoc".into(), max_arity, repr: Repr::Assoc }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn size(&self, n: usize) -> usize {
        match &self.repr {
            Repr::Comm => 1,
            Repr::Assoc => factorial(n),
            Repr::Table { sizes, .. } => sizes.get(n).copied().unwrap_or(0),
        }
    }

    pub fn unit(&self) -> usize {
        match &self.repr {
            Repr::Table { unit, .. } => *unit,
            _ => 0,
        }
    }

    /// `sigma . x` for `x` in arity `sigma.len()`.
    pub fn act(&self, sigma: &[usize], x: usize) -> usize {
        match &self.repr {
            Repr::Comm => 0,
            Repr::Assoc => {
                let w = perm_unrank(sigma.len(), x);
                perm_rank(&w.iter().map(|&i| sigma[i]).collect::<Vec<_>>())
            }
            Repr::Table { action, .. } => action[sigma.len()][perm_rank(sigma)][x],
        }
    }

    /// `gamma(mu; nu_1, ..., nu_n)` with `mu` in arity `inputs.len()` and inputs `(k_i, nu_i)`.
    pub fn gamma(&self, mu: usize, inputs: &[(usize, usize)]) -> Result<usize> {
        let total: usize = inputs.iter().map(|i| i.0).sum();
        if total > self.max_arity || inputs.len() > self.max_arity {
            return Err(Error::ArityOverflow { arity: total.max(inputs.len()), max: self.max_arity });
        }
        match &self.repr {
            Repr::Comm => Ok(0),
            Repr::Assoc => {
                let w = perm_unrank(inputs.len(), mu);
                let mut offsets = Vec::with_capacity(inputs.len());
                let mut acc = 0;
                for &(k, _) in inputs {
                    offsets.push(acc);
                    acc += k;
                }
                let word: Vec<usize> = w
                    .iter()
                    .flat_map(|&b| {
                        let off = offsets[b];
                        perm_unrank(inputs[b].0, inputs[b].1).into_iter().map(move |r| off + r)
                    })
                    .collect();
                Ok(perm_rank(&word))
            }
            Repr::Table { gamma, .. } => gamma
                .get(&(inputs.len(), mu, inputs.to_vec()))
                .copied()
                .ok_or_else(|| Error::AxiomViolation { name: "gamma completeness".into(), witness: format!("{mu} {inputs:?}") }),
        }
    }

    /// Every operation list `(k_i, nu_i)` with arities summing to at most `room`.
    fn input_lists(&self, n: usize, room: usize) -> Vec<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for ks in arity_lists(n, room) {
            let sizes: Vec<usize> = ks.iter().map(|&k| self.size(k)).collect();
            for elems in product_of(&sizes) {
                out.push(ks.iter().copied().zip(elems).collect());
            }
        }
        out
    }

    /// Unit, associativity and both equivariance laws, exhaustively up to `max_arity`.
    pub fn check_axioms(&self) -> Result<()> {
        let max = self.max_arity;
        let fail = |name: &str, witness: String| Err(Error::AxiomViolation { name: name.into(), witness });
        for n in 0..=max {
            let perms = permutations(n);
            for x in 0..self.size(n) {
                if self.act(&perms[0], x) != x {
                    return fail("action identity", format!("arity {n}, {x}"));
                }
                for s in &perms {
                    for t in &perms {
                        let st: Vec<usize> = t.iter().map(|&i| s[i]).collect();
                        if self.act(&st, x) != self.act(s, self.act(t, x)) {
                            return fail("action composition", format!("arity {n}, {x}, {s:?}, {t:?}"));
                        }
                    }
                }
            }
        }
        let one = self.unit();
        if max >= 1 {
            for k in 0..=max {
                for nu in 0..self.size(k) {
                    if self.gamma(one, &[(k, nu)])? != nu {
                        return fail("left unit", format!("arity {k}, {nu}"));
                    }
                }
            }
            for n in 0..=max {
                for mu in 0..self.size(n) {
                    if self.gamma(mu, &vec![(1, one); n])? != mu {
                        return fail("right unit", format!("arity {n}, {mu}"));
                    }
                }
            }
        }
        for n in 0..=max {
            let perms = permutations(n);
            for mu in 0..self.size(n) {
                for inputs in self.input_lists(n, max) {
                    let composite = self.gamma(mu, &inputs)?;
                    let m: usize = inputs.iter().map(|i| i.0).sum();
                    // associativity
                    for outer in self.input_lists(m, max) {
                        let left = self.gamma(composite, &outer)?;
                        let mut start = 0;
                        let mut inner = Vec::with_capacity(n);
                        for &(k, nu) in &inputs {
                            let block = &outer[start..start + k];
                            start += k;
                            inner.push((block.iter().map(|b| b.0).sum(), self.gamma(nu, block)?));
                        }
                        if self.gamma(mu, &inner)? != left {
                            return fail("associativity", format!("{mu} {inputs:?} {outer:?}"));
                        }
                    }
                    // equivariance in the top operation
                    for s in &perms {
                        let lhs = self.gamma(self.act(s, mu), &inputs)?;
                        let permuted: Vec<(usize, usize)> = s.iter().map(|&i| inputs[i]).collect();
                        let rhs = self.gamma(mu, &permuted)?;
                        if lhs != self.act(&block_permutation(s, &inputs), rhs) {
                            return fail("equivariance", format!("{mu} {inputs:?} {s:?}"));
                        }
                    }
                    // equivariance in the inputs
                    let each: Vec<Vec<Vec<usize>>> = inputs.iter().map(|&(k, _)| permutations(k)).collect();
                    let counts: Vec<usize> = each.iter().map(|e| e.len()).collect();
                    for choice in product_of(&counts) {
                        let moved: Vec<(usize, usize)> =
                            inputs.iter().zip(&choice).enumerate().map(|(i, (&(k, nu), &c))| (k, self.act(&each[i][c], nu))).collect();
                        let mut sum = Vec::with_capacity(m);
                        for (i, &c) in choice.iter().enumerate() {
                            let off = sum.len();
                            sum.extend(each[i][c].iter().map(|&v| off + v));
                        }
                        if self.gamma(mu, &moved)? != self.act(&sum, composite) {
                            return fail("input equivariance", format!("{mu} {inputs:?} {choice:?}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Block `i` of `gamma(mu; nu_s(0), ...)` moved to the place of block `s(i)`.
fn block_permutation(s: &[usize], inputs: &[(usize, usize)]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(inputs.len());
    let mut acc = 0;
    for &(k, _) in inputs {
        offsets.push(acc);
        acc += k;
    }
    let mut out = Vec::with_capacity(acc);
    for &b in s {
        out.extend((0..inputs[b].0).map(|r| offsets[b] + r));
    }
    out
}

/// Validates shapes and every axiom.
pub fn build_operad(data: &OperadData) -> Result<SetOperad> {
    let max = data.max_arity;
    let shape = |w: String| Error::AxiomViolation { name: "shape".into(), witness: w };
    if data.components.len() != max + 1 {
        return Err(shape(format!("{} components for max arity {max}", data.components.len())));
    }
    for (n, c) in data.components.iter().enumerate() {
        if c.action.len() != factorial(n) || c.action.iter().any(|r| r.len() != c.size || r.iter().any(|&v| v >= c.size)) {
            return Err(shape(format!("action table of arity {n}")));
        }
    }
    if max >= 1 && data.unit >= data.components[1].size {
        return Err(shape("unit outside arity 1".into()));
    }
    let mut gamma = HashMap::new();
    for e in &data.gamma {
        let (n, mu) = e.op;
        let total: usize = e.inputs.iter().map(|i| i.0).sum();
        let ok = n == e.inputs.len()
            && n <= max
            && total <= max
            && mu < data.components[n].size
            && e.inputs.iter().all(|&(k, nu)| k <= max && nu < data.components[k].size)
            && e.result < data.components[total].size;
        if !ok {
            return Err(shape(format!("gamma entry {e:?}")));
        }
        if gamma.insert((n, mu, e.inputs.clone()), e.result).is_some() {
            return Err(shape(format!("gamma entry {e:?} repeated")));
        }
    }
    let op = SetOperad {
        name: data.name.clone(),
        max_arity: max,
        repr: Repr::Table {
            sizes: data.components.iter().map(|c| c.size).collect(),
            action: data.components.iter().map(|c| c.action.clone()).collect(),
            unit: data.unit,
            gamma,
        },
    };
    op.check_axioms()?;
    Ok(op)
}

/// Table form of any operad, e.g. to write it out or to corrupt it in tests.
pub fn operad_data(op: &SetOperad) -> Result<OperadData> {
    let max = op.max_arity;
    let components = (0..=max)
        .map(|n| ComponentData {
            size: op.size(n),
            action: permutations(n).iter().map(|s| (0..op.size(n)).map(|x| op.act(s, x)).collect()).collect(),
        })
        .collect();
    let mut gamma = Vec::new();
    for n in 0..=max {
        for mu in 0..op.size(n) {
            for inputs in op.input_lists(n, max) {
                let result = op.gamma(mu, &inputs)?;
                gamma.push(GammaEntry { op: (n, mu), inputs, result });
            }
        }
    }
    Ok(OperadData { name: op.name.clone(), max_arity: max, components, unit: op.unit(), gamma })
}

/// `X <- T -> Y` with an operation of arity `|T_y|` on each fiber; fibers are
/// ordered by apex index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperadicSpan {
    pub left: usize,
    pub right: usize,
    pub apex: usize,
    pub leg_l: Vec<usize>,
    pub leg_r: Vec<usize>,
    pub decoration: Vec<usize>,
}

impl OperadicSpan {
    pub fn new(op: &SetOperad, left: usize, right: usize, leg_l: Vec<usize>, leg_r: Vec<usize>, decoration: Vec<usize>) -> Result<OperadicSpan> {
        let apex = leg_l.len();
        if leg_r.len() != apex || decoration.len() != right || leg_l.iter().any(|&x| x >= left) || leg_r.iter().any(|&y| y >= right) {
            return Err(Error::MalformedInput("operadic span legs out of range".into()));
        }
        let s = OperadicSpan { left, right, apex, leg_l, leg_r, decoration };
        for y in 0..right {
            let n = s.fiber(y).len();
            if n > op.max_arity() {
                return Err(Error::ArityOverflow { arity: n, max: op.max_arity() });
            }
            if s.decoration[y] >= op.size(n) {
                return Err(Error::MalformedInput(format!("decoration over {y} outside arity {n}")));
            }
        }
        Ok(s)
    }

    pub fn identity(op: &SetOperad, x: usize) -> OperadicSpan {
        OperadicSpan { left: x, right: x, apex: x, leg_l: (0..x).collect(), leg_r: (0..x).collect(), decoration: vec![op.unit(); x] }
    }

    /// Apex points over `y`, in increasing order.
    pub fn fiber(&self, y: usize) -> Vec<usize> {
        (0..self.apex).filter(|&t| self.leg_r[t] == y).collect()
    }
}

/// `s` then `t`: the apex is the pullback in lexicographic order, and the
/// decoration over `z` is `gamma` of `t`'s operation with those of `s` along
/// the fiber of `t`, relabelled into apex order.
pub fn operadic_span_compose(op: &SetOperad, s: &OperadicSpan, t: &OperadicSpan) -> Result<OperadicSpan> {
    if s.right != t.left {
        return Err(Error::FeetMismatch);
    }
    let mut pairs = Vec::new();
    for a in 0..s.apex {
        for b in 0..t.apex {
            if s.leg_r[a] == t.leg_l[b] {
                pairs.push((a, b));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let leg_l: Vec<usize> = pairs.iter().map(|&(a, _)| s.leg_l[a]).collect();
    let leg_r: Vec<usize> = pairs.iter().map(|&(_, b)| t.leg_r[b]).collect();
    let mut decoration = Vec::with_capacity(t.right);
    for z in 0..t.right {
        let tz = t.fiber(z);
        let mut inputs = Vec::with_capacity(tz.len());
        // apex index of each input in block order
        let mut order = Vec::new();
        for &b in &tz {
            let y = t.leg_l[b];
            let sy = s.fiber(y);
            inputs.push((sy.len(), s.decoration[y]));
            order.extend(sy.iter().map(|&a| index[&(a, b)]));
        }
        let composite = op.gamma(t.decoration[z], &inputs)?;
        // block position -> rank among the fiber over z in apex order
        let mut sorted = order.clone();
        sorted.sort_unstable();
        let rho: Vec<usize> = order.iter().map(|p| sorted.binary_search(p).expect("member")).collect();
        decoration.push(op.act(&rho, composite));
    }
    OperadicSpan::new(op, s.left, t.right, leg_l, leg_r, decoration)
}

/// An apex bijection commuting with both legs and carrying decorations along
/// the induced fiber bijections.
pub fn operadic_span_iso(op: &SetOperad, s: &OperadicSpan, t: &OperadicSpan) -> Option<Vec<usize>> {
    if s.left != t.left || s.right != t.right || s.apex != t.apex {
        return None;
    }
    let mut map = vec![0; s.apex];
    for y in 0..s.right {
        let (fs, ft) = (s.fiber(y), t.fiber(y));
        if fs.len() != ft.len() {
            return None;
        }
        let beta = permutations(fs.len()).into_iter().find(|beta| {
            (0..fs.len()).all(|r| s.leg_l[fs[r]] == t.leg_l[ft[beta[r]]]) && op.act(beta, s.decoration[y]) == t.decoration[y]
        })?;
        for r in 0..fs.len() {
            map[fs[r]] = ft[beta[r]];
        }
    }
    Some(map)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub apex: usize,
    pub span_side: usize,
    pub formula_side: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub operad: String,
    pub generators: usize,
    pub rows: Vec<CensusRow>,
}

impl Census {
    pub fn agrees(&self) -> bool {
        self.rows.iter().all(|r| r.span_side == r.formula_side)
    }

    pub fn total(&self) -> usize {
        self.rows.iter().map(|r| r.span_side).sum()
    }
}

/// Iso classes of spans `{0..k} <- T -> 1` with `|T| = t`, against the orbit
/// count of `O(t) x {0..k}^t` under `Sigma_t` by Burnside's lemma.
pub fn free_algebra_census(op: &SetOperad, k: usize, bound: usize) -> Result<Census> {
    if bound > op.max_arity() {
        return Err(Error::CapExceeded { what: "census apex".into(), cap: op.max_arity() });
    }
    let mut rows = Vec::new();
    for t in 0..=bound {
        let perms = permutations(t);
        let colorings = product_of(&vec![k; t]);
        // span side: classes by iso testing, bucketed by the sorted left leg
        let mut classes: BTreeMap<Vec<usize>, Vec<OperadicSpan>> = BTreeMap::new();
        for leg in &colorings {
            let mut key = leg.clone();
            key.sort_unstable();
            for mu in 0..op.size(t) {
                let s = OperadicSpan { left: k, right: 1, apex: t, leg_l: leg.clone(), leg_r: vec![0; t], decoration: vec![mu] };
                let bucket = classes.entry(key.clone()).or_default();
                if !bucket.iter().any(|r| operadic_span_iso(op, r, &s).is_some()) {
                    bucket.push(s);
                }
            }
        }
        let span_side = classes.values().map(Vec::len).sum();
        // formula side
        let mut fixed = 0usize;
        for s in &perms {
            let cycles = cycle_count(s);
            let fixed_ops = (0..op.size(t)).filter(|&mu| op.act(s, mu) == mu).count();
            fixed += k.pow(cycles as u32) * fixed_ops;
        }
        rows.push(CensusRow { apex: t, span_side, formula_side: fixed / perms.len() });
    }
    Ok(Census { operad: op.name().to_string(), generators: k, rows })
}

fn cycle_count(s: &[usize]) -> usize {
    let mut seen = vec![false; s.len()];
    let mut count = 0;
    for i in 0..s.len() {
        if !seen[i] {
            count += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = s[j];
            }
        }
    }
    count
}

/// Every operadic span with the given feet and apex at most `bound`.
pub fn operadic_spans(op: &SetOperad, left: usize, right: usize, bound: usize) -> Vec<OperadicSpan> {
    let mut out = Vec::new();
    for apex in 0..=bound {
        for leg_l in product_of(&vec![left; apex]) {
            for leg_r in product_of(&vec![right; apex]) {
                let arities: Vec<usize> = (0..right).map(|y| leg_r.iter().filter(|&&v| v == y).count()).collect();
                if arities.iter().any(|&a| a > op.max_arity()) {
                    continue;
                }
                let sizes: Vec<usize> = arities.iter().map(|&a| op.size(a)).collect();
                for decoration in product_of(&sizes) {
                    out.push(OperadicSpan { left, right, apex, leg_l: leg_l.clone(), leg_r: leg_r.clone(), decoration });
                }
            }
        }
    }
    out
}
