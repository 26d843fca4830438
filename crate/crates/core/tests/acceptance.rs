//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run a subset with `cargo test -p finspan --test acceptance -- 3 7`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use finspan::burnside::{burnside_product, marks, orbit_basis, table_of_marks};
use finspan::duality::{
    biset_corpus, epi_torsor_census, nonseparable_witness, pairing, pairing_unit, verify_duality,
    OrbitCategory,
};
use finspan::group::catalog_up_to;
use finspan::groupoid::{
    biset_to_global_span, compose_global_spans, functors, groupoid_corpus, groupoid_equivalence_skeleton,
    groupoid_pullback, is_discrete_fibration, one_object_composition, one_object_round_trip, skeleta_match,
    GlobalSpan, GroupoidFunctor,
};
use finspan::gset::{pullback, Biset, EquivariantMap, GSet};
use finspan::mackey::{check_mackey, standard_mackey, MackeyKind};
use finspan::operad::{free_algebra_census, SetOperad};
use finspan::span::{
    check_closure, compose_spans, fin, hom_monoid, span_iso, span_to_matrix, LegKind, NatMatrix, Span, SpanClass,
};
use finspan::Group;

type Outcome = Result<String, String>;

fn lib<T>(r: finspan::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn grp(g: Group) -> Arc<Group> {
    Arc::new(g)
}

fn c(n: usize) -> Arc<Group> {
    grp(Group::cyclic(n))
}

fn trivial() -> Arc<Group> {
    grp(Group::trivial())
}

fn s3() -> Arc<Group> {
    grp(Group::symmetric(3))
}

fn klein() -> Arc<Group> {
    grp(Group::direct_product(&Group::cyclic(2), &Group::cyclic(2)))
}

fn label(g: &Group) -> String {
    g.name().map(str::to_string).unwrap_or_else(|| format!("order {}", g.order()))
}

// ---------------------------------------------------------------- helpers

fn oracle_product(m: &NatMatrix, n: &NatMatrix) -> Vec<Vec<u64>> {
    let mut out = vec![vec![0u64; n.cols]; m.rows];
    for i in 0..m.rows {
        for j in 0..m.cols {
            for k in 0..n.cols {
                out[i][k] += m.entries[i][j] * n.entries[j][k];
            }
        }
    }
    out
}

/// Orbit sums of total size at most `max_size`, in a fixed order.
fn orbit_sums(g: &Arc<Group>, max_size: usize) -> Vec<GSet> {
    let basis = orbit_basis(g);
    let sizes: Vec<usize> = (0..basis.len()).map(|i| basis.orbit(i).size()).collect();
    let mut out = Vec::new();
    fn rec(sizes: &[usize], start: usize, room: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for i in start..sizes.len() {
            if sizes[i] <= room {
                cur.push(i);
                rec(sizes, i, room - sizes[i], cur, out);
                cur.pop();
            }
        }
    }
    let mut parts = Vec::new();
    rec(&sizes, 0, max_size, &mut Vec::new(), &mut parts);
    for p in parts {
        out.push(basis.sum(&p));
    }
    out
}

/// Realized classes `X -> Y` with apex at most `bound`, grouped by apex size.
fn classes_by_weight(x: &GSet, y: &GSet, bound: usize) -> Result<Vec<Vec<Span>>, String> {
    let hm = lib(hom_monoid(x, y, bound))?;
    let mut out = vec![Vec::new(); bound + 1];
    for cl in &hm.classes {
        out[cl.apex_size(x.group())].push(cl.realize(x, y));
    }
    Ok(out)
}

fn compose_class(s: &Span, t: &Span) -> Result<SpanClass, String> {
    Ok(lib(compose_spans(s, t))?.class())
}

// ---------------------------------------------------------------- 1

fn criterion_1() -> Outcome {
    let mut pairs = 0u64;
    let mut mismatches = 0u64;
    let mut buf = Vec::new();
    for a in 0..=3 {
        for b in 0..=3 {
            let ms = fin::matrices(a, b, 6);
            let ml: Vec<_> = ms.iter().map(fin::from_matrix).collect();
            for cc in 0..=3 {
                let ns = fin::matrices(b, cc, 6);
                let nl: Vec<_> = ns.iter().map(fin::from_matrix).collect();
                for (m, sl) in ms.iter().zip(&ml) {
                    for (n, tl) in ns.iter().zip(&nl) {
                        pairs += 1;
                        fin::compose_into(sl, tl, &mut buf);
                        if fin::count_matrix(a, cc, &buf).entries != oracle_product(m, n) {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
    }
    // every Fin span with small feet is iso to the span of its count matrix
    let e = trivial();
    let mut spans = 0u64;
    let mut iso_failures = 0u64;
    for a in 0..=2 {
        for b in 0..=2 {
            for t in 0..=3usize {
                let cells: usize = a * b;
                let total = if t == 0 { 1 } else { cells.pow(t as u32) };
                for code in 0..total {
                    let mut rest = code;
                    let legs: Vec<(usize, usize)> = (0..t)
                        .map(|_| {
                            let cell = rest % cells;
                            rest /= cells;
                            (cell / b, cell % b)
                        })
                        .collect();
                    spans += 1;
                    let s = fin::to_span(&e, a, b, &legs);
                    let m = lib(span_to_matrix(&s))?;
                    let canonical = fin::to_span(&e, a, b, &fin::from_matrix(&m));
                    if span_iso(&s, &canonical).is_none() {
                        iso_failures += 1;
                    }
                }
            }
        }
    }
    // the generic pullback composite agrees with the matrix product
    let mut generic = 0u64;
    let mut generic_failures = 0u64;
    for a in 0..=2 {
        for b in 0..=2 {
            for cc in 0..=2 {
                for m in fin::matrices(a, b, 3) {
                    for n in fin::matrices(b, cc, 3) {
                        generic += 1;
                        let s = fin::to_span(&e, a, b, &fin::from_matrix(&m));
                        let t = fin::to_span(&e, b, cc, &fin::from_matrix(&n));
                        let comp = lib(compose_spans(&s, &t))?;
                        if lib(span_to_matrix(&comp))?.entries != oracle_product(&m, &n) {
                            generic_failures += 1;
                        }
                    }
                }
            }
        }
    }
    let detail = format!(
        "{pairs} composable pairs, {mismatches} mismatches; {spans} spans vs count matrix, {iso_failures} non-iso; \
         {generic} generic composites, {generic_failures} mismatches"
    );
    if mismatches == 0 && iso_failures == 0 && generic_failures == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------- 2

/// Bound on the summed apex sizes of a G-set triple.
const GSET_TRIPLE_APEX: usize = 5;

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let e = trivial();
    // Fin: feet <= 3, total apex of the triple <= 6; count matrices are the iso classes (criterion 1)
    let mut by_weight: BTreeMap<(usize, usize), Vec<Vec<Vec<(usize, usize)>>>> = BTreeMap::new();
    for a in 0..=3 {
        for b in 0..=3 {
            let mut w = vec![Vec::new(); 7];
            for m in fin::matrices(a, b, 6) {
                w[m.total() as usize].push(fin::from_matrix(&m));
            }
            by_weight.insert((a, b), w);
        }
    }
    let mut fin_triples = 0u64;
    let mut fin_bad = 0u64;
    let mut iso_checked = 0u64;
    let mut st = Vec::new();
    let mut tu = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for a in 0..=3 {
        for b in 0..=3 {
            for cc in 0..=3 {
                for d in 0..=3 {
                    let (ws, wt, wu) = (&by_weight[&(a, b)], &by_weight[&(b, cc)], &by_weight[&(cc, d)]);
                    for i in 0..=6 {
                        for j in 0..=6 - i {
                            for k in 0..=6 - i - j {
                                for s in &ws[i] {
                                    for t in &wt[j] {
                                        fin::compose_into(s, t, &mut st);
                                        for u in &wu[k] {
                                            fin_triples += 1;
                                            fin::compose_into(&st, u, &mut left);
                                            fin::compose_into(t, u, &mut tu);
                                            fin::compose_into(s, &tu, &mut right);
                                            let (l, r) = (fin::count_matrix(a, d, &left), fin::count_matrix(a, d, &right));
                                            if l != r {
                                                fin_bad += 1;
                                            } else if a <= 2 && d <= 2 && i + j + k <= 4 {
                                                iso_checked += 1;
                                                let ls = fin::to_span(&e, a, d, &left);
                                                let rs = fin::to_span(&e, a, d, &right);
                                                if span_iso(&ls, &rs).is_none() {
                                                    fin_bad += 1;
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let fin_secs = start.elapsed().as_secs_f64();
    // G-sets: orbit sums of size <= 3, total apex of the triple <= GSET_TRIPLE_APEX
    
    let mut gset_bad = 0u64;
    let mut per_group = Vec::new();
    for g in [c(2), c(3), s3()] {
        let feet = orbit_sums(&g, 3);
        let nf = feet.len();
        let mut homs = BTreeMap::new();
        for i in 0..nf {
            for j in 0..nf {
                homs.insert((i, j), classes_by_weight(&feet[i], &feet[j], GSET_TRIPLE_APEX)?);
            }
        }
        let mut count = 0u64;
        for i0 in 0..nf {
            for i1 in 0..nf {
                for i2 in 0..nf {
                    for i3 in 0..nf {
                        let (hs, ht, hu) = (&homs[&(i0, i1)], &homs[&(i1, i2)], &homs[&(i2, i3)]);
                        for b in 0..=GSET_TRIPLE_APEX {
                            for t in &ht[b] {
                                // s;t for every s light enough
                                let mut st = Vec::new();
                                for a in 0..=GSET_TRIPLE_APEX - b {
                                    for s in &hs[a] {
                                        st.push((a, s, lib(compose_spans(s, t))?));
                                    }
                                }
                                for k in 0..=GSET_TRIPLE_APEX - b {
                                    for u in &hu[k] {
                                        let tu = lib(compose_spans(t, u))?;
                                        for (a, s, st) in &st {
                                            if a + b + k > GSET_TRIPLE_APEX {
                                                break;
                                            }
                                            count += 1;
                                            if compose_class(st, u)? != compose_class(s, &tu)? {
                                                gset_bad += 1;
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        per_group.push(format!("{} {count}", label(&g)));
    }
    let detail = format!(
        "Fin: {fin_triples} triples ({iso_checked} also by apex iso), {fin_bad} mismatches, {fin_secs:.1}s; \
         G-sets [{}]: {gset_bad} mismatches",
        per_group.join(", ")
    );
    if fin_bad == 0 && gset_bad == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------- 3

struct Biproduct {
    sum: GSet,
    inj: [Span; 2],
    proj: [Span; 2],
}

fn biproduct(x: &GSet, y: &GSet) -> Result<Biproduct, String> {
    let (i1, i2) = lib(x.inclusions(y))?;
    Ok(Biproduct {
        sum: i1.target().clone(),
        inj: [Span::graph(&i1), Span::graph(&i2)],
        proj: [Span::cograph(&i1), Span::cograph(&i2)],
    })
}

/// Universal properties of `X + Y` on the hom classes with apex at most `bound`.
fn biproduct_checks(objects: &[GSet], bound: usize) -> Result<(u64, Vec<String>), String> {
    let mut checks = 0u64;
    let mut failures = Vec::new();
    for (xi, x) in objects.iter().enumerate() {
        for (yi, y) in objects.iter().enumerate() {
            let bp = biproduct(x, y)?;
            let factors = [x, y];
            // identities
            for a in 0..2 {
                for b in 0..2 {
                    checks += 1;
                    let comp = compose_class(&bp.inj[a], &bp.proj[b])?;
                    let expected =
                        if a == b { Span::identity(factors[a]).class() } else { SpanClass::default() };
                    if comp != expected {
                        failures.push(format!("i{a};p{b} on ({xi},{yi})"));
                    }
                }
            }
            checks += 1;
            let lhs = lib(compose_spans(&bp.proj[0], &bp.inj[0]))?;
            let rhs = lib(compose_spans(&bp.proj[1], &bp.inj[1]))?;
            if lib(lhs.sum(&rhs))?.class() != Span::identity(&bp.sum).class() {
                failures.push(format!("p0;i0 + p1;i1 on ({xi},{yi})"));
            }
            for (zi, z) in objects.iter().enumerate() {
                let g = z.group();
                // product: h |-> (h;p0, h;p1)
                let into = lib(hom_monoid(z, &bp.sum, bound))?;
                let to_x = lib(hom_monoid(z, x, bound))?;
                let to_y = lib(hom_monoid(z, y, bound))?;
                let mut image = BTreeSet::new();
                for h in &into.classes {
                    checks += 1;
                    let hs = h.realize(z, &bp.sum);
                    let pair = (compose_class(&hs, &bp.proj[0])?, compose_class(&hs, &bp.proj[1])?);
                    if pair.0.apex_size(g) + pair.1.apex_size(g) != h.apex_size(g) || !image.insert(pair) {
                        failures.push(format!("product map not injective/additive at ({xi},{yi},{zi})"));
                    }
                }
                let expected = to_x
                    .classes
                    .iter()
                    .flat_map(|a| to_y.classes.iter().map(move |b| (a, b)))
                    .filter(|(a, b)| a.apex_size(g) + b.apex_size(g) <= bound)
                    .count();
                if expected != image.len() {
                    failures.push(format!("product map not onto at ({xi},{yi},{zi})"));
                }
                // coproduct: h |-> (i0;h, i1;h)
                let out_of = lib(hom_monoid(&bp.sum, z, bound))?;
                let from_x = lib(hom_monoid(x, z, bound))?;
                let from_y = lib(hom_monoid(y, z, bound))?;
                let mut image = BTreeSet::new();
                for h in &out_of.classes {
                    checks += 1;
                    let hs = h.realize(&bp.sum, z);
                    let pair = (compose_class(&bp.inj[0], &hs)?, compose_class(&bp.inj[1], &hs)?);
                    if pair.0.apex_size(g) + pair.1.apex_size(g) != h.apex_size(g) || !image.insert(pair) {
                        failures.push(format!("coproduct map not injective/additive at ({xi},{yi},{zi})"));
                    }
                }
                let expected = from_x
                    .classes
                    .iter()
                    .flat_map(|a| from_y.classes.iter().map(move |b| (a, b)))
                    .filter(|(a, b)| a.apex_size(g) + b.apex_size(g) <= bound)
                    .count();
                if expected != image.len() {
                    failures.push(format!("coproduct map not onto at ({xi},{yi},{zi})"));
                }
            }
        }
    }
    Ok((checks, failures))
}

fn criterion_3() -> Outcome {
    let e = trivial();
    let fin_objects: Vec<GSet> = (0..=2).map(|n| fin::set(&e, n)).collect();
    let (fin_checks, mut failures) = biproduct_checks(&fin_objects, 4)?;
    let c2 = c(2);
    let c2_objects = vec![GSet::point(c2.clone()), GSet::regular(c2.clone())];
    let (c2_checks, more) = biproduct_checks(&c2_objects, 4)?;
    failures.extend(more);
    let detail = format!("Fin {fin_checks} checks, Fin_C2 {c2_checks} checks, {} failures", failures.len());
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}: {}", failures[0]))
    }
}

// ---------------------------------------------------------------- 4

fn kind_of(images: impl Iterator<Item = usize>, target: usize) -> LegKind {
    let mut hit = [0u8; 64];
    for y in images {
        hit[y] += 1;
        if hit[y] > 1 {
            return LegKind::Arbitrary;
        }
    }
    if hit[..target].iter().all(|&h| h == 1) {
        LegKind::Bijective
    } else {
        LegKind::Injective
    }
}

fn criterion_4() -> Outcome {
    const N: usize = 4;
    struct Entry {
        legs: Vec<(usize, usize)>,
        kinds: (LegKind, LegKind),
        function: Option<Vec<usize>>,
    }
    let mut corpus: BTreeMap<(usize, usize), Vec<Entry>> = BTreeMap::new();
    for a in 0..=N {
        for b in 0..=N {
            let list = fin::matrices(a, b, N)
                .iter()
                .map(|m| {
                    let legs = fin::from_matrix(m);
                    let kinds = (kind_of(legs.iter().map(|p| p.0), a), kind_of(legs.iter().map(|p| p.1), b));
                    let function = (kinds.0 == LegKind::Bijective).then(|| {
                        let mut f = vec![0; a];
                        for &(x, y) in &legs {
                            f[x] = y;
                        }
                        f
                    });
                    Entry { legs, kinds, function }
                })
                .collect();
            corpus.insert((a, b), list);
        }
    }
    let all = LegKind::ALL;
    let mut pairs = [[0u64; 3]; 3];
    let mut violations = [[0u64; 3]; 3];
    let mut function_pairs = 0u64;
    let mut function_mismatches = 0u64;
    let mut buf = Vec::new();
    for a in 0..=N {
        for b in 0..=N {
            for cc in 0..=N {
                for s in &corpus[&(a, b)] {
                    for t in &corpus[&(b, cc)] {
                        fin::compose_into(&s.legs, &t.legs, &mut buf);
                        let kinds = (kind_of(buf.iter().map(|p| p.0), a), kind_of(buf.iter().map(|p| p.1), cc));
                        for (pi, &p) in all.iter().enumerate() {
                            for (qi, &q) in all.iter().enumerate() {
                                if p.admits(s.kinds.0) && p.admits(t.kinds.0) && q.admits(s.kinds.1) && q.admits(t.kinds.1)
                                {
                                    pairs[pi][qi] += 1;
                                    if !(p.admits(kinds.0) && q.admits(kinds.1)) {
                                        violations[pi][qi] += 1;
                                    }
                                }
                            }
                        }
                        if let (Some(f), Some(g)) = (&s.function, &t.function) {
                            function_pairs += 1;
                            let mut seen = vec![false; a];
                            let ok = buf.len() == a
                                && buf.iter().all(|&(x, z)| !std::mem::replace(&mut seen[x], true) && z == g[f[x]]);
                            if !ok {
                                function_mismatches += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    // the library closure check on a small corpus of genuine spans
    let e = trivial();
    let mut small = Vec::new();
    for a in 0..=2 {
        for b in 0..=2 {
            for m in fin::matrices(a, b, 2) {
                small.push(fin::to_span(&e, a, b, &fin::from_matrix(&m)));
            }
        }
    }
    let mut lib_violations = 0usize;
    for &p in &all {
        for &q in &all {
            lib_violations += check_closure(p, q, &small).violations.len();
        }
    }
    let total_violations: u64 = violations.iter().flatten().sum();
    let counts: Vec<String> = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| format!("{:?}/{:?} {}", all[i], all[j], pairs[i][j]).to_lowercase())
        .collect();
    let detail = format!(
        "pairs per class [{}]; {total_violations} violations; {function_pairs} function pairs, {function_mismatches} \
         mismatches; library closure on {} spans: {lib_violations} violations",
        counts.join(", "),
        small.len()
    );
    if total_violations == 0 && function_mismatches == 0 && lib_violations == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Outcome {
    let groups = catalog_up_to(4);
    let mut epis = 0usize;
    let mut certified = 0usize;
    let mut cosets = 0usize;
    let mut brute = 0usize;
    for g in &groups {
        for h in &groups {
            let census = lib(epi_torsor_census(h, g))?;
            epis += census.epis;
            certified += census.certified;
            cosets += census.fibers_are_cosets;
            // oracle: maps out of the regular P-set onto each transitive model
            let p = finspan::gset::biset_group(h, g);
            let reg = GSet::regular(p.clone());
            let lat = p.lattice();
            for cl in 0..lat.num_classes() {
                let o = GSet::orbit_of_subgroup(&p, lat.rep(cl));
                let maps = lib(finspan::gset::equivariant_maps(&reg, &o))?;
                brute += maps
                    .into_iter()
                    .filter(|m| lib(EquivariantMap::new(reg.clone(), o.clone(), m.clone())).map(|f| f.is_epi()).unwrap_or(false))
                    .count();
            }
        }
    }
    let detail = format!(
        "{} group pairs, {epis} epis (oracle {brute}), {certified} certified, {cosets} with coset fibers",
        groups.len() * groups.len()
    );
    if epis == brute && certified == epis && cosets == epis {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Outcome {
    let groups = catalog_up_to(4);
    let mut bisets = 0usize;
    let mut failures = Vec::new();
    for g in &groups {
        for h in &groups {
            for x in biset_corpus(g, h, 8, false) {
                bisets += 1;
                if !lib(pairing_unit(&x))? {
                    failures.push(format!("{} x {} size {}", label(g), label(h), x.size()));
                }
            }
        }
    }
    let detail = format!("{bisets} bisets over {} group pairs, {} failures", groups.len() * groups.len(), failures.len());
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}: {}", failures[0]))
    }
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    let cases = [(trivial(), trivial()), (c(2), trivial()), (c(3), trivial()), (c(2), c(2)), (s3(), trivial())];
    let mut lines = Vec::new();
    let mut pass = true;
    for (g, h) in &cases {
        let report = lib(verify_duality(g, h, 6, true))?;
        let failed: Vec<&str> = report.clauses.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        pass &= report.passed();
        lines.push(format!(
            "({},{}) {} bisets {}",
            label(g),
            label(h),
            report.bisets.len(),
            if failed.is_empty() { "ok".to_string() } else { format!("failed {}", failed.join("/")) }
        ));
    }
    let detail = lines.join("; ");
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let g = c(2);
    let x = Biset::conjugation(&g);
    let w = lib(nonseparable_witness(&x))?.ok_or("no witness produced")?;
    if w.left.to != w.right.to {
        return Err("witness is not a cospan".into());
    }
    // independent recheck: the square is a genuine pullback of G-sets, and
    // applying - x X directly by pairing breaks it
    let cat = lib(OrbitCategory::new(&g, &g, 8))?;
    let (oa, ob, oc) = (cat.orbit(w.left.from).clone(), cat.orbit(w.right.from).clone(), cat.orbit(w.left.to).clone());
    let f = lib(EquivariantMap::new(oa.clone(), oc.clone(), cat.table(w.left)))?;
    let h = lib(EquivariantMap::new(ob.clone(), oc.clone(), cat.table(w.right)))?;
    let (pb, p1, p2) = lib(pullback(&f, &h))?;
    let apply = |set: &GSet| pairing(&Biset::from_pset(g.clone(), g.clone(), set.clone()), &x);
    let (fp, fa, fb, fc) = (lib(apply(&pb))?, lib(apply(&oa))?, lib(apply(&ob))?, lib(apply(&oc))?);
    let nx = x.size();
    // F(m)[z, y] = [m z, y], read through section representatives
    let push = |src: &finspan::duality::PairingResult, dst: &finspan::duality::PairingResult, m: &EquivariantMap| -> Vec<usize> {
        src.sections.iter().map(|&raw| dst.projection[m.apply(raw / nx) * nx + raw % nx]).collect()
    };
    let (fp1, fp2, ff, fh) = (push(&fp, &fa, &p1), push(&fp, &fb, &p2), push(&fa, &fc, &f), push(&fb, &fc, &h));
    let target: BTreeSet<(usize, usize)> =
        (0..fa.size).flat_map(|u| (0..fb.size).map(move |v| (u, v))).filter(|&(u, v)| ff[u] == fh[v]).collect();
    let image: BTreeSet<(usize, usize)> = (0..fp.size).map(|k| (fp1[k], fp2[k])).collect();
    let bijective = image.len() == fp.size && image == target;
    let detail = format!(
        "square {:?} x {:?}: |F(P)| = {}, |F(A) x_F(C) F(B)| = {}, comparison bijective: {bijective}",
        (w.left.from, w.left.to, w.left.d),
        (w.right.from, w.right.to, w.right.d),
        fp.size,
        target.len()
    );
    if !bijective {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------- 9

fn brute_conjugacy_classes(g: &Group) -> usize {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut classes = 0;
    for x in 0..n {
        if !seen[x] {
            classes += 1;
            for y in 0..n {
                seen[g.mul(g.mul(g.inv(y), x), y)] = true;
            }
        }
    }
    classes
}

fn criterion_9() -> Outcome {
    let mut rows = Vec::new();
    let mut pass = true;
    for g in catalog_up_to(12) {
        let b = Biset::conjugation(&g);
        let size = lib(pairing(&b, &b))?.size;
        let brute = brute_conjugacy_classes(&g);
        pass &= size == brute;
        rows.push(format!("{} {size}/{brute}", label(&g)));
    }
    let detail = format!("{} groups: {}", rows.len(), rows.join(", "));
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------- 10

fn brute_marks(x: &GSet, subgroup: &[usize]) -> i64 {
    (0..x.size()).filter(|&p| subgroup.iter().all(|&h| x.act(p, h) == p)).count() as i64
}

fn criterion_10() -> Outcome {
    let mut groups = 0;
    let mut product_pairs = 0;
    let mut failures = Vec::new();
    for g in catalog_up_to(12) {
        groups += 1;
        let tom = table_of_marks(&g);
        if !tom.is_lower_triangular() || !tom.diagonal_positive() || tom.determinant() == 0.into() {
            failures.push(format!("{} table shape", label(&g)));
        }
        let basis = orbit_basis(&g);
        let lat = g.lattice();
        let reps = lat.reps();
        let orbits: Vec<GSet> = (0..basis.len()).map(|i| basis.orbit(i)).collect();
        for (i, o) in orbits.iter().enumerate() {
            let brute: Vec<i64> = reps.iter().map(|&h| brute_marks(o, lat.subgroup(h).elements())).collect();
            if marks(o) != brute || tom.rows[i] != brute {
                failures.push(format!("{} marks of orbit {i}", label(&g)));
            }
        }
        for i in 0..orbits.len() {
            for j in 0..orbits.len() {
                product_pairs += 1;
                let prod = lib(orbits[i].product(&orbits[j]))?;
                let entrywise: Vec<i64> = marks(&orbits[i]).iter().zip(marks(&orbits[j])).map(|(a, b)| a * b).collect();
                let coeffs = lib(burnside_product(&orbits[i], &orbits[j]))?;
                let recombined: Vec<i64> = (0..reps.len())
                    .map(|col| coeffs.iter().enumerate().map(|(k, &n)| n * tom.rows[k][col]).sum())
                    .collect();
                if marks(&prod) != entrywise || recombined != entrywise {
                    failures.push(format!("{} product ({i},{j})", label(&g)));
                }
            }
        }
    }
    let detail = format!("{groups} groups, {product_pairs} product pairs, {} failures", failures.len());
    if failures.is_empty() && product_pairs >= 100 {
        Ok(detail)
    } else {
        Err(format!("{detail} {}", failures.first().cloned().unwrap_or_default()))
    }
}

// ---------------------------------------------------------------- 11

fn criterion_11() -> Outcome {
    let mut rows = Vec::new();
    let mut pass = true;
    for g in [c(2), c(3), c(4), klein(), s3()] {
        let n = g.order();
        let basis = orbit_basis(&g);
        let all_orbits = basis.sum(&(0..basis.len()).collect::<Vec<_>>());
        let kinds = [
            ("burnside", MackeyKind::Burnside),
            ("perm(regular)", MackeyKind::Permutation(GSet::regular(g.clone()))),
            ("perm(all orbits)", MackeyKind::Permutation(all_orbits)),
        ];
        let mut parts = Vec::new();
        for (name, kind) in &kinds {
            let data = lib(standard_mackey(kind, &g))?;
            if let MackeyKind::Permutation(x) = kind {
                // rank at G/H is the number of H-orbits on X
                let lat = g.lattice();
                for (i, &h) in basis.reps.iter().enumerate() {
                    let elems = lat.subgroup(h).elements();
                    let mut seen = vec![false; x.size()];
                    let mut orbits = 0;
                    for p in 0..x.size() {
                        if !seen[p] {
                            orbits += 1;
                            for &a in elems {
                                seen[x.act(p, a)] = true;
                            }
                        }
                    }
                    if data.ranks[i] != orbits {
                        pass = false;
                        parts.push(format!("{name} rank {i} wrong"));
                    }
                }
            }
            let report = check_mackey(&data, n);
            pass &= report.passed();
            parts.push(format!("{name} {} pairs {} violations", report.pairs_checked, report.violations.len()));
        }
        // negative control: perturb one transfer between distinct orbits
        let mut bad = lib(standard_mackey(&MackeyKind::Burnside, &g))?;
        let key = *bad.generators.keys().find(|m| m.from != m.to).ok_or("no non-identity orbit morphism")?;
        bad.generators.get_mut(&key).expect("key").transfer[0][0] += 1;
        let caught = check_mackey(&bad, n).violations.len();
        pass &= caught >= 1;
        parts.push(format!("corrupted {caught} violations"));
        rows.push(format!("{}: {}", label(&g), parts.join(", ")));
    }
    let detail = rows.join("; ");
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------- 12

fn fibration_oracle(f: &GroupoidFunctor) -> bool {
    let (s, t) = (f.source(), f.target());
    (0..s.objects()).all(|x| {
        (0..t.morphisms()).filter(|&phi| t.src(phi) == f.on_object(x)).all(|phi| {
            (0..s.morphisms()).filter(|&a| s.src(a) == x && f.on_morphism(a) == phi).count() == 1
        })
    })
}

/// Bound on the summed apex sizes of a composable pair pushed through `B_G`.
const BG_PAIR_APEX: usize = 4;

fn criterion_12() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    // (a) pullback of a discrete fibration along any functor
    let corpus = groupoid_corpus(6, 24);
    let outdegree = |g: &finspan::groupoid::Groupoid| (0..g.morphisms()).filter(|&a| g.src(a) == 0).count();
    let mut fibrations = 0u64;
    let mut pullbacks = 0u64;
    let mut oracle_disagreements = 0u64;
    for b in &corpus {
        let mut fibs = Vec::new();
        for e in corpus.iter().filter(|e| outdegree(e) == outdegree(b)) {
            for p in functors(e, b) {
                let holds = is_discrete_fibration(&p).holds;
                if holds != fibration_oracle(&p) {
                    oracle_disagreements += 1;
                }
                if holds {
                    fibs.push(p);
                }
            }
        }
        fibrations += fibs.len() as u64;
        if fibs.is_empty() {
            continue;
        }
        for cdom in &corpus {
            for f in functors(cdom, b) {
                for p in &fibs {
                    pullbacks += 1;
                    let (_, _, q) = lib(groupoid_pullback(p, &f))?;
                    let holds = is_discrete_fibration(&q).holds;
                    // the quadratic oracle on a fixed sample
                    if pullbacks % 61 == 0 && holds != fibration_oracle(&q) {
                        oracle_disagreements += 1;
                    }
                    if !holds {
                        failures.push("pullback of a fibration is not a fibration".to_string());
                    }
                }
            }
        }
    }
    let pullback_secs = start.elapsed().as_secs_f64();
    // (b) B_G on spans of G-sets preserves composition up to skeleton; pairs with summed apex <= BG_PAIR_APEX
    let mut compositions = 0u64;
    for g in [c(2), s3()] {
        let feet = orbit_sums(&g, 3);
        let nf = feet.len();
        let mut homs = BTreeMap::new();
        for i in 0..nf {
            for j in 0..nf {
                homs.insert((i, j), classes_by_weight(&feet[i], &feet[j], BG_PAIR_APEX)?);
            }
        }
        for i in 0..nf {
            for j in 0..nf {
                for k in 0..nf {
                    let (hs, ht) = (&homs[&(i, j)], &homs[&(j, k)]);
                    for a in 0..=BG_PAIR_APEX {
                        for bb in 0..=BG_PAIR_APEX - a {
                            for s in &hs[a] {
                                for t in &ht[bb] {
                                    compositions += 1;
                                    let direct = GlobalSpan::from_gset_span(&lib(compose_spans(s, t))?);
                                    let global = lib(compose_global_spans(
                                        &GlobalSpan::from_gset_span(s),
                                        &GlobalSpan::from_gset_span(t),
                                    ))?;
                                    let same_feet = direct.left() == global.left() && direct.right() == global.right();
                                    let sk = (
                                        groupoid_equivalence_skeleton(direct.apex()),
                                        groupoid_equivalence_skeleton(global.apex()),
                                    );
                                    if !same_feet || !skeleta_match(&sk.0, &sk.1, true) {
                                        failures.push(format!("B_{} composite ({i},{j},{k})", label(&g)));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let bg_secs = start.elapsed().as_secs_f64() - pullback_secs;
    // (c) one-object global spans and bisets
    let groups = catalog_up_to(4);
    let mut round_trips = 0u64;
    for g in &groups {
        for h in &groups {
            for z in biset_corpus(h, g, 8, true) {
                round_trips += 1;
                let span = lib(biset_to_global_span(&z))?;
                let orbits = z.left_quotient().0.size();
                if span.apex().objects() != orbits || !lib(one_object_round_trip(&z))? {
                    failures.push(format!("round trip {} {} size {}", label(h), label(g), z.size()));
                }
            }
        }
    }
    let small = [trivial(), c(2), c(3)];
    let mut composites = 0u64;
    for g in &small {
        for h in &small {
            for j in &small {
                let zs = biset_corpus(h, g, 6, true);
                let ws = biset_corpus(j, h, 6, true);
                for z in &zs {
                    for w in &ws {
                        composites += 1;
                        if !lib(one_object_composition(z, w))? {
                            failures.push(format!("composition {} {} {}", label(j), label(h), label(g)));
                        }
                    }
                }
            }
        }
    }
    let detail = format!(
        "{} groupoids, {fibrations} fibrations, {pullbacks} pullbacks, {oracle_disagreements} oracle disagreements, \
         {pullback_secs:.1}s; {compositions} B_G composites, {bg_secs:.1}s; {round_trips} round trips, {composites} one-object composites; {} failures",
        corpus.len(),
        failures.len()
    );
    if failures.is_empty() && oracle_disagreements == 0 {
        Ok(detail)
    } else {
        Err(format!("{detail}: {}", failures.first().cloned().unwrap_or_default()))
    }
}

// ---------------------------------------------------------------- 13

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_13() -> Outcome {
    let mut rows = Vec::new();
    let mut pass = true;
    for op in [SetOperad::comm(4), SetOperad::assoc(4)] {
        lib(op.check_axioms())?;
        for k in 0..=3 {
            let census = lib(free_algebra_census(&op, k, 4))?;
            pass &= census.agrees();
            // closed forms: multisets for Comm, words for Assoc
            for row in &census.rows {
                let t = row.apex;
                let closed = match op.name() {
                    "Comm" => {
                        if k == 0 {
                            usize::from(t == 0)
                        } else {
                            binomial(k + t - 1, t)
                        }
                    }
                    _ => k.pow(t as u32),
                };
                pass &= row.span_side == closed;
            }
            let sides: Vec<String> = census.rows.iter().map(|r| format!("{}", r.span_side)).collect();
            rows.push(format!("{} k={k} [{}]", op.name(), sides.join(" ")));
        }
    }
    let detail = rows.join("; ");
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------- 14

fn reports() -> Result<String, String> {
    let mut out = Vec::new();
    let json = |v: serde_json::Result<String>| v.map_err(|e| e.to_string());
    for (g, h) in [(c(2), trivial()), (c(3), trivial()), (c(2), c(2))] {
        out.push(json(serde_json::to_string(&lib(verify_duality(&g, &h, 6, true))?))?);
    }
    let s = s3();
    out.push(json(serde_json::to_string(&check_mackey(&lib(standard_mackey(&MackeyKind::Burnside, &s))?, 6)))?);
    out.push(json(serde_json::to_string(&lib(epi_torsor_census(&c(2), &c(3)))?))?);
    out.push(json(serde_json::to_string(&lib(free_algebra_census(&SetOperad::assoc(4), 2, 4))?))?);
    out.push(json(serde_json::to_string(&table_of_marks(&s)))?);
    Ok(out.join("\n"))
}

fn criterion_14() -> Outcome {
    let mut runs = Vec::new();
    for threads in [1, 8, 1, 8] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        runs.push(pool.install(reports)?);
    }
    let identical = runs.windows(2).all(|w| w[0] == w[1]);
    let detail = format!("{} runs (1, 8, 1, 8 threads), {} bytes each, identical: {identical}", runs.len(), runs[0].len());
    if identical {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------- main

fn main() {
    let criteria: [(usize, &str, fn() -> Outcome); 14] = [
        (1, "matrix correspondence", criterion_1),
        (2, "span associativity", criterion_2),
        (3, "biproducts", criterion_3),
        (4, "structured closure", criterion_4),
        (5, "torsor classification", criterion_5),
        (6, "pairing unit", criterion_6),
        (7, "duality verification", criterion_7),
        (8, "non-separable counterexample", criterion_8),
        (9, "conjugacy pairing", criterion_9),
        (10, "table of marks", criterion_10),
        (11, "mackey axiom", criterion_11),
        (12, "global spans", criterion_12),
        (13, "operadic census", criterion_13),
        (14, "determinism", criterion_14),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n:>2} {name}: PASS ({secs:.1}s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2} {name}: FAIL ({secs:.1}s) {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
