//! JSON input and output formats.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use finspan::group::catalog_group;
use finspan::groupoid::{GlobalSpan, Groupoid, GroupoidData, GroupoidFunctor};
use finspan::gset::GSet;
use finspan::mackey::{Generator, MackeyData};
use finspan::operad::{build_operad, OperadData, SetOperad};
use finspan::span::Span;
use finspan::{Error, Group, Result, Subgroup};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Raw bytes of every file read, in order, for the report digest.
#[derive(Default)]
pub struct Inputs {
    pub consumed: Vec<(String, Vec<u8>)>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<Value> {
        let bytes = std::fs::read(path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
        let value = serde_json::from_slice(&bytes).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
        self.consumed.push((path.display().to_string(), bytes));
        Ok(value)
    }

    /// A group argument: a file, or a catalog name such as `C2` or `S3`.
    pub fn group(&mut self, arg: &str) -> Result<Arc<Group>> {
        let path = Path::new(arg);
        if path.exists() {
            let v = self.read(path)?;
            return group_from_value(&v, path.parent(), self);
        }
        let g = catalog_group(arg).ok_or_else(|| malformed(format!("no file or catalog group named {arg}")))?;
        self.consumed.push((format!("catalog:{arg}"), Vec::new()));
        Ok(g)
    }

    pub fn file(&mut self, arg: &str) -> Result<(Value, Option<PathBuf>)> {
        let path = Path::new(arg);
        let v = self.read(path)?;
        Ok((v, path.parent().map(Path::to_path_buf)))
    }
}

pub fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedInput(msg.into())
}

fn parse<T: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| malformed(format!("{what}: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableGroup {
    order: usize,
    mul: Vec<Vec<usize>>,
    name: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PermGroup {
    degree: usize,
    generators: Vec<Vec<Vec<usize>>>,
    name: Option<String>,
}

/// Inline group object, catalog name, or path relative to `base`.
pub fn group_from_value(v: &Value, base: Option<&Path>, inputs: &mut Inputs) -> Result<Arc<Group>> {
    match v {
        Value::String(s) => {
            let candidate = base.map(|b| b.join(s)).unwrap_or_else(|| PathBuf::from(s));
            if candidate.exists() {
                let inner = inputs.read(&candidate)?;
                group_from_value(&inner, candidate.parent(), inputs)
            } else {
                catalog_group(s).ok_or_else(|| malformed(format!("unknown group {s}")))
            }
        }
        Value::Object(m) if m.contains_key("mul") => {
            let t: TableGroup = parse(v, "group")?;
            if t.mul.len() != t.order {
                return Err(malformed(format!("group order {} but {} table rows", t.order, t.mul.len())));
            }
            let g = Group::from_table(&t.mul)?;
            Ok(Arc::new(match t.name {
                Some(n) => g.with_name(n),
                None => g,
            }))
        }
        Value::Object(m) if m.contains_key("generators") => {
            let p: PermGroup = parse(v, "permutation group")?;
            let g = Group::from_permutations(p.degree, &p.generators)?;
            Ok(Arc::new(match p.name {
                Some(n) => g.with_name(n),
                None => g,
            }))
        }
        _ => Err(malformed("group must be a name, a path, a table or permutation generators")),
    }
}

#[derive(Serialize)]
pub struct GroupOut {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

pub fn group_out(g: &Group) -> GroupOut {
    GroupOut { order: g.order(), mul: g.table(), name: g.name().map(str::to_string) }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitSpec {
    stabilizer: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GSetIn {
    group: Option<Value>,
    size: Option<usize>,
    act: Option<Vec<Vec<usize>>>,
    orbits: Option<Vec<OrbitSpec>>,
    orbit: Option<OrbitSpec>,
}

/// A G-set object; `default_group` is used when it carries no `group` field.
pub fn gset_from_value(
    v: &Value,
    default_group: Option<&Arc<Group>>,
    base: Option<&Path>,
    inputs: &mut Inputs,
) -> Result<GSet> {
    let mut raw: GSetIn = parse(v, "gset")?;
    if let Some(o) = raw.orbit.take() {
        if raw.orbits.is_some() {
            return Err(malformed("gset has both orbit and orbits"));
        }
        raw.orbits = Some(vec![o]);
    }
    let group = match (&raw.group, default_group) {
        (Some(g), _) => group_from_value(g, base, inputs)?,
        (None, Some(g)) => g.clone(),
        (None, None) => Arc::new(Group::trivial()),
    };
    match (raw.act, raw.orbits, raw.size) {
        (Some(act), None, size) => {
            if size.is_some_and(|n| n != act.len()) {
                return Err(malformed("gset size disagrees with act"));
            }
            GSet::new(group, &act)
        }
        (None, Some(orbits), size) => {
            let mut x = GSet::empty(group.clone());
            for o in orbits {
                let sub = Subgroup::new(&group, &o.stabilizer)?;
                x = x.coproduct(&GSet::cosets(group.clone(), sub.mask()))?;
            }
            if size.is_some_and(|n| n != x.size()) {
                return Err(malformed("gset size disagrees with orbits"));
            }
            Ok(x)
        }
        (None, None, Some(n)) if group.order() == 1 => GSet::new(group, &(0..n).map(|i| vec![i]).collect::<Vec<_>>()),
        (None, None, Some(_)) => Err(malformed("a gset over a nontrivial group needs act or orbits")),
        _ => Err(malformed("gset needs exactly one of act, orbits, or size over the trivial group")),
    }
}

#[derive(Serialize)]
pub struct GSetOut {
    pub size: usize,
    pub act: Vec<Vec<usize>>,
}

pub fn gset_out(x: &GSet) -> GSetOut {
    GSetOut { size: x.size(), act: x.table() }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct SpanIn {
    group: Option<Value>,
    left: Value,
    right: Value,
    apex: Value,
    leg_l: Vec<usize>,
    leg_r: Vec<usize>,
}

pub fn span_from_value(v: &Value, base: Option<&Path>, inputs: &mut Inputs) -> Result<Span> {
    let raw: SpanIn = parse(v, "span")?;
    let group = raw.group.as_ref().map(|g| group_from_value(g, base, inputs)).transpose()?;
    let left = gset_from_value(&raw.left, group.as_ref(), base, inputs)?;
    let right = gset_from_value(&raw.right, group.as_ref(), base, inputs)?;
    let apex = gset_from_value(&raw.apex, group.as_ref(), base, inputs)?;
    Span::new(left, right, apex, raw.leg_l, raw.leg_r)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpanOut {
    pub group: GroupOut,
    pub left: GSetOut,
    pub right: GSetOut,
    pub apex: GSetOut,
    pub leg_l: Vec<usize>,
    pub leg_r: Vec<usize>,
}

pub fn span_out(s: &Span) -> SpanOut {
    SpanOut {
        group: group_out(s.group()),
        left: gset_out(s.left()),
        right: gset_out(s.right()),
        apex: gset_out(s.apex()),
        leg_l: s.leg_l().to_vec(),
        leg_r: s.leg_r().to_vec(),
    }
}

/// A groupoid table, or `{"group": ...}` for the one-object groupoid.
pub fn groupoid_from_value(v: &Value, base: Option<&Path>, inputs: &mut Inputs) -> Result<Groupoid> {
    if let Some(g) = v.get("group") {
        if v.as_object().is_some_and(|m| m.len() == 1) {
            return Ok(Groupoid::from_group(&*group_from_value(g, base, inputs)?));
        }
    }
    let data: GroupoidData = parse(v, "groupoid")?;
    Groupoid::from_data(&data)
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorIn {
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GlobalSpanIn {
    left: Value,
    right: Value,
    apex: Value,
    ingressive: FunctorIn,
    egressive: FunctorIn,
}

pub fn global_span_from_value(v: &Value, base: Option<&Path>, inputs: &mut Inputs) -> Result<GlobalSpan> {
    let raw: GlobalSpanIn = parse(v, "global span")?;
    let left = groupoid_from_value(&raw.left, base, inputs)?;
    let right = groupoid_from_value(&raw.right, base, inputs)?;
    let apex = groupoid_from_value(&raw.apex, base, inputs)?;
    let i = GroupoidFunctor::new(apex.clone(), left, raw.ingressive.obj, raw.ingressive.mor)?;
    let e = GroupoidFunctor::new(apex, right, raw.egressive.obj, raw.egressive.mor)?;
    GlobalSpan::new(i, e)
}

#[derive(Serialize)]
pub struct GlobalSpanOut {
    pub left: GroupoidData,
    pub right: GroupoidData,
    pub apex: GroupoidData,
    pub ingressive: FunctorIn,
    pub egressive: FunctorIn,
}

fn functor_out(f: &GroupoidFunctor) -> FunctorIn {
    FunctorIn {
        obj: (0..f.source().objects()).map(|x| f.on_object(x)).collect(),
        mor: (0..f.source().morphisms()).map(|m| f.on_morphism(m)).collect(),
    }
}

pub fn global_span_out(s: &GlobalSpan) -> GlobalSpanOut {
    GlobalSpanOut {
        left: s.left().to_data(),
        right: s.right().to_data(),
        apex: s.apex().to_data(),
        ingressive: functor_out(s.ingressive()),
        egressive: functor_out(s.egressive()),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MackeyIn {
    group: Value,
    ranks: Vec<usize>,
    generators: Vec<Generator>,
}

pub fn mackey_from_value(v: &Value, base: Option<&Path>, inputs: &mut Inputs) -> Result<MackeyData> {
    let raw: MackeyIn = parse(v, "mackey data")?;
    let group = group_from_value(&raw.group, base, inputs)?;
    MackeyData::new(&group, raw.ranks, raw.generators)
}

/// `comm`, `assoc` (truncated at `max_arity`) or an operad table file.
pub fn operad(arg: &str, max_arity: usize, inputs: &mut Inputs) -> Result<SetOperad> {
    match arg.to_ascii_lowercase().as_str() {
        "comm" => {
            inputs.consumed.push(("builtin:comm".into(), Vec::new()));
            Ok(SetOperad::comm(max_arity))
        }
        "assoc" => {
            inputs.consumed.push(("builtin:assoc".into(), Vec::new()));
            Ok(SetOperad::assoc(max_arity))
        }
        _ => {
            let (v, _) = inputs.file(arg)?;
            let data: OperadData = parse(&v, "operad")?;
            build_operad(&data)
        }
    }
}
