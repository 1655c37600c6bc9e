//! JSON bundles: an algebra, a bimodule, a twisting cocycle and named
//! operators, cochains, elements and series over them.
//!
//! Table records use 1-based basis indices and polynomial text in `D`
//! and `L1..Ln`; an entry's value maps basis names to coefficients:
//!
//! ```json
//! { "args": [1, 2], "value": { "e2": "D + 2*L1" } }
//! ```
//!
//! A document whose top level is `{"value": {...}}` (the JSON form of a CLI
//! report) is unwrapped before loading.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::conformal::{regular_bimodule, ConformalAlgebra, ConformalBimodule};
use crate::exactpoly::MPoly;
use crate::hochschild::{Cochain, Frame};
use crate::multilinear::{tuples, LambdaExpr, StructureMap};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("JSON syntax: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {msg}")]
    Poly { line: usize, msg: String },
    #[error("{0}")]
    Schema(String),
}

type LResult<T> = std::result::Result<T, LoadError>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EntryRec {
    pub args: Vec<usize>,
    pub value: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraRec {
    pub basis: Vec<String>,
    #[serde(default)]
    pub product: Vec<EntryRec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BimoduleRec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub left: Vec<EntryRec>,
    #[serde(default)]
    pub right: Vec<EntryRec>,
}

/// Space a named cochain reads from or writes to.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub enum Space {
    T,
    U,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MapRec {
    pub from: Space,
    pub to: Space,
    pub arity: usize,
    #[serde(default)]
    pub entries: Vec<EntryRec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OptionsRec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BundleRec {
    pub algebra: AlgebraRec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bimodule: Option<BimoduleRec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<Vec<EntryRec>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operators: BTreeMap<String, Vec<EntryRec>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MapRec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub series: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsRec>,
}

/// A cochain together with the spaces it maps between.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedMap {
    pub from: Space,
    pub to: Space,
    pub cochain: Cochain,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Options {
    pub truncation: Option<u32>,
    pub degree: Option<usize>,
}

/// Everything a bundle file describes, in library types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workspace {
    pub frame: Frame,
    pub operators: BTreeMap<String, Cochain>,
    pub maps: BTreeMap<String, NamedMap>,
    pub elements: BTreeMap<String, LambdaExpr>,
    pub series: BTreeMap<String, Vec<String>>,
    pub options: Options,
}

impl Workspace {
    pub fn new(frame: Frame) -> Self {
        Workspace {
            frame,
            operators: BTreeMap::new(),
            maps: BTreeMap::new(),
            elements: BTreeMap::new(),
            series: BTreeMap::new(),
            options: Options::default(),
        }
    }

    fn names(&self, s: Space) -> &[String] {
        match s {
            Space::T => self.frame.algebra.basis_names(),
            Space::U => self.frame.bimodule.basis_names(),
        }
    }
}

struct Loader<'a> {
    source: &'a str,
}

impl Loader<'_> {
    /// Line of the first occurrence of `text` as a JSON string literal.
    fn line_of(&self, text: &str) -> usize {
        let lit = serde_json::to_string(text).unwrap_or_default();
        match self.source.find(&lit) {
            Some(pos) => self.source[..pos].matches('\n').count() + 1,
            None => 0,
        }
    }

    fn poly(&self, text: &str, nvars: usize) -> LResult<MPoly> {
        MPoly::parse(text, nvars).map_err(|e| LoadError::Poly { line: self.line_of(text), msg: format!("{e} in \"{text}\"") })
    }

    fn element(&self, value: &BTreeMap<String, String>, names: &[String], nvars: usize) -> LResult<LambdaExpr> {
        let mut out = LambdaExpr::zero(names.len(), nvars);
        for (name, text) in value {
            let k = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| LoadError::Schema(format!("unknown basis element \"{name}\" (expected one of {names:?})")))?;
            out.set_coeff(k, self.poly(text, nvars)?);
        }
        Ok(out)
    }

    fn table(&self, what: &str, entries: &[EntryRec], in_ranks: Vec<usize>, out: &[String]) -> LResult<StructureMap> {
        let arity = in_ranks.len();
        let nvars = arity.saturating_sub(1);
        let mut map = StructureMap::zero(in_ranks.clone(), out.len());
        for e in entries {
            if e.args.len() != arity {
                return Err(LoadError::Schema(format!("{what}: entry {:?} has {} indices, expected {arity}", e.args, e.args.len())));
            }
            let tuple = e
                .args
                .iter()
                .zip(&in_ranks)
                .map(|(&a, &r)| {
                    if a == 0 || a > r {
                        Err(LoadError::Schema(format!("{what}: index {a} out of range 1..={r}")))
                    } else {
                        Ok(a - 1)
                    }
                })
                .collect::<LResult<Vec<_>>>()?;
            let v = self.element(&e.value, out, nvars)?;
            map.set_entry(&tuple, v).map_err(|e| LoadError::Schema(format!("{what}: {e}")))?;
        }
        Ok(map)
    }
}

fn schema<T>(r: crate::error::Result<T>) -> LResult<T> {
    r.map_err(|e| LoadError::Schema(e.to_string()))
}

/// Parses a bundle, or a report wrapping one under `"value"`.
pub fn parse_bundle(source: &str) -> LResult<Workspace> {
    let mut doc: Value = serde_json::from_str(source)?;
    if let Value::Object(map) = &mut doc {
        if !map.contains_key("algebra") {
            if let Some(inner) = map.remove("value") {
                doc = inner;
            }
        }
    }
    let rec: BundleRec = serde_json::from_value(doc)?;
    from_record(&rec, source)
}

pub fn from_record(rec: &BundleRec, source: &str) -> LResult<Workspace> {
    let ld = Loader { source };
    let tb = &rec.algebra.basis;
    let t = tb.len();
    let product = ld.table("algebra product", &rec.algebra.product, vec![t, t], tb)?;
    let algebra = schema(ConformalAlgebra::new(tb.clone(), product))?;
    let bimodule = match &rec.bimodule {
        None => regular_bimodule(&algebra),
        Some(b) if b.regular == Some(true) => {
            if !b.left.is_empty() || !b.right.is_empty() {
                return Err(LoadError::Schema("a regular bimodule takes no action tables".into()));
            }
            let reg = regular_bimodule(&algebra);
            match &b.basis {
                Some(names) => schema(ConformalBimodule::new(names.clone(), t, reg.left().clone(), reg.right().clone()))?,
                None => reg,
            }
        }
        Some(b) => {
            let ub = b.basis.clone().ok_or_else(|| LoadError::Schema("bimodule needs a basis".into()))?;
            let u = ub.len();
            let left = ld.table("left action", &b.left, vec![t, u], &ub)?;
            let right = ld.table("right action", &b.right, vec![u, t], &ub)?;
            schema(ConformalBimodule::new(ub, t, left, right))?
        }
    };
    let ub = bimodule.basis_names().to_vec();
    let u = ub.len();
    let cocycle = match &rec.cocycle {
        None => Cochain::zero(2, t, u),
        Some(entries) => schema(Cochain::from_map(t, ld.table("cocycle", entries, vec![t, t], &ub)?))?,
    };
    let frame = schema(Frame::new(algebra, bimodule, cocycle))?;
    let mut ws = Workspace::new(frame);
    for (name, entries) in &rec.operators {
        let map = ld.table(&format!("operator {name}"), entries, vec![u], tb)?;
        ws.operators.insert(name.clone(), schema(Cochain::from_map(u, map))?);
    }
    for (name, m) in &rec.maps {
        let (src, out) = (ws.names(m.from).to_vec(), ws.names(m.to).to_vec());
        let map = ld.table(&format!("map {name}"), &m.entries, vec![src.len(); m.arity], &out)?;
        let cochain = schema(Cochain::from_map(src.len(), map))?;
        ws.maps.insert(name.clone(), NamedMap { from: m.from, to: m.to, cochain });
    }
    for (name, value) in &rec.elements {
        ws.elements.insert(name.clone(), ld.element(value, tb, 0)?);
    }
    for (name, terms) in &rec.series {
        if terms.is_empty() {
            return Err(LoadError::Schema(format!("series {name} is empty")));
        }
        for op in terms {
            if !ws.operators.contains_key(op) {
                return Err(LoadError::Schema(format!("series {name} names unknown operator {op}")));
            }
        }
        ws.series.insert(name.clone(), terms.clone());
    }
    if let Some(o) = &rec.options {
        ws.options = Options { truncation: o.truncation, degree: o.degree };
    }
    Ok(ws)
}

pub fn element_record(x: &LambdaExpr, names: &[String]) -> BTreeMap<String, String> {
    x.coeffs()
        .iter()
        .zip(names)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, n)| (n.clone(), c.to_string()))
        .collect()
}

pub fn table_records(map: &StructureMap, out: &[String]) -> Vec<EntryRec> {
    tuples(map.in_ranks())
        .into_iter()
        .filter(|t| !map.entry(t).is_zero())
        .map(|t| EntryRec { value: element_record(map.entry(&t), out), args: t.iter().map(|i| i + 1).collect() })
        .collect()
}

pub fn to_record(ws: &Workspace) -> BundleRec {
    let f = &ws.frame;
    let tb = f.algebra.basis_names();
    let ub = f.bimodule.basis_names();
    BundleRec {
        algebra: AlgebraRec { basis: tb.to_vec(), product: table_records(f.algebra.product(), tb) },
        bimodule: Some(BimoduleRec {
            regular: None,
            basis: Some(ub.to_vec()),
            left: table_records(f.bimodule.left(), ub),
            right: table_records(f.bimodule.right(), ub),
        }),
        cocycle: if f.cocycle.is_zero() { None } else { Some(table_records(f.cocycle.map(), ub)) },
        operators: ws.operators.iter().map(|(k, r)| (k.clone(), table_records(r.map(), tb))).collect(),
        maps: ws
            .maps
            .iter()
            .map(|(k, m)| {
                let rec = MapRec { from: m.from, to: m.to, arity: m.cochain.arity(), entries: table_records(m.cochain.map(), ws.names(m.to)) };
                (k.clone(), rec)
            })
            .collect(),
        elements: ws.elements.iter().map(|(k, x)| (k.clone(), element_record(x, tb))).collect(),
        series: ws.series.clone(),
        options: if ws.options == Options::default() {
            None
        } else {
            Some(OptionsRec { truncation: ws.options.truncation, degree: ws.options.degree })
        },
    }
}

pub fn to_json(ws: &Workspace) -> Value {
    serde_json::to_value(to_record(ws)).expect("bundle records serialize")
}
