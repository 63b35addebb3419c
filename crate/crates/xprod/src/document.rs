//! The JSON document format: a field, named algebras, pointed spaces,
//! coalgebras and maps, and named datasets that reference them by name.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use xprod_core::algebra::{Coalgebra, FinAlgebra, PointedSpace};
use xprod_core::constructions::{iterated_data, ma_data, MaData};
use xprod_core::crossed::{BrzData, MirrorData};
use xprod_core::search::{Frozen, SearchMode, SearchSpec, DEFAULT_CAP};
use xprod_core::twosided::TwoSidedData;
use xprod_core::{Field, Scalar, TensorMap, TensorShape};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{path}: unresolved reference {name:?}")]
    Unresolved { path: String, name: String },
}

impl InputError {
    pub fn kind(&self) -> &'static str {
        match self {
            InputError::Syntax { .. } => "syntax",
            InputError::Invalid { .. } => "invalid",
            InputError::Unresolved { .. } => "unresolved-reference",
        }
    }
}

fn invalid(path: &str, message: impl ToString) -> InputError {
    InputError::Invalid { path: path.to_string(), message: message.to_string() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    TwoSided,
    Brzezinski,
    Mirror,
    Ttp,
    Ma,
    Iterated,
    Search,
    Extract,
    Universal,
}

const KINDS: [(&str, Kind); 9] = [
    ("twosided", Kind::TwoSided),
    ("brzezinski", Kind::Brzezinski),
    ("mirror", Kind::Mirror),
    ("ttp", Kind::Ttp),
    ("ma", Kind::Ma),
    ("iterated", Kind::Iterated),
    ("search", Kind::Search),
    ("extract", Kind::Extract),
    ("universal", Kind::Universal),
];

impl Kind {
    pub fn name(self) -> &'static str {
        KINDS.iter().find(|(_, k)| *k == self).map(|(n, _)| *n).expect("listed")
    }

    fn roles(self) -> &'static [(&'static str, Role, bool)] {
        use Role::*;
        match self {
            Kind::TwoSided => &[
                ("A", Algebra, true),
                ("V", Pointed, true),
                ("C", Algebra, true),
                ("R1", Map, true),
                ("R2", Map, true),
                ("R3", Map, true),
                ("E", Map, true),
            ],
            Kind::Brzezinski => &[("A", Algebra, true), ("V", Pointed, true), ("R", Map, true), ("sigma", Map, true)],
            Kind::Mirror => &[("W", Pointed, true), ("B", Algebra, true), ("P", Map, true), ("nu", Map, true)],
            Kind::Ttp => &[("A", Algebra, true), ("B", Algebra, true), ("R", Map, true)],
            Kind::Ma => &[
                ("H", Coalgebra, true),
                ("A", Algebra, true),
                ("B", Algebra, true),
                ("G", Map, true),
                ("R", Map, true),
                ("T", Map, true),
                ("tau", Map, true),
            ],
            Kind::Iterated => &[
                ("A", Algebra, true),
                ("B", Algebra, true),
                ("C", Algebra, true),
                ("R1", Map, true),
                ("R2", Map, true),
                ("R3", Map, true),
            ],
            Kind::Search => &[
                ("A", Algebra, true),
                ("V", Pointed, true),
                ("C", Algebra, true),
                ("R1", Map, false),
                ("R2", Map, false),
                ("R3", Map, false),
                ("E", Map, false),
            ],
            Kind::Extract => &[("M", Algebra, true), ("A", Algebra, true), ("V", Pointed, true), ("C", Algebra, true)],
            Kind::Universal => &[
                ("data", Dataset, true),
                ("X", Algebra, true),
                ("fA", Map, true),
                ("fV", Map, true),
                ("fC", Map, true),
            ],
        }
    }

    fn params(self) -> &'static [&'static str] {
        match self {
            Kind::Search => &["mode", "budget", "cap"],
            _ => &[],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Algebra,
    Pointed,
    Coalgebra,
    Map,
    Dataset,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedMap {
    /// Names of the domain factors (each an algebra, space, coalgebra or `k`).
    pub domain: Vec<String>,
    pub codomain: Vec<String>,
    pub map: TensorMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub kind: Kind,
    /// Role name to object name.
    pub refs: BTreeMap<String, String>,
    /// Extra parameters (search mode, budget, cap).
    pub params: BTreeMap<String, Value>,
}

/// A dataset with every reference resolved into core objects.
#[derive(Clone, Debug)]
pub enum Instance {
    TwoSided(TwoSidedData),
    Brzezinski(BrzData),
    Mirror(MirrorData),
    Ttp { a: FinAlgebra, b: FinAlgebra, r: TensorMap },
    Ma(MaData),
    Iterated { a: FinAlgebra, b: FinAlgebra, c: FinAlgebra, r1: TensorMap, r2: TensorMap, r3: TensorMap },
    Search { spec: SearchSpec, a: FinAlgebra, v: PointedSpace, c: FinAlgebra },
    Extract { m: FinAlgebra, a: FinAlgebra, v: PointedSpace, c: FinAlgebra },
    Universal { data: TwoSidedData, x: FinAlgebra, fa: TensorMap, fv: TensorMap, fc: TensorMap },
}

impl Instance {
    /// Two-sided data for kinds that produce it.
    pub fn twosided(&self) -> Option<TwoSidedData> {
        match self {
            Instance::TwoSided(d) => Some(d.clone()),
            Instance::Ma(m) => ma_data(m).ok(),
            Instance::Iterated { a, b, c, r1, r2, r3 } => iterated_data(a, b, c, r1, r2, r3).ok(),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub field: Field,
    pub algebras: BTreeMap<String, FinAlgebra>,
    pub spaces: BTreeMap<String, PointedSpace>,
    pub coalgebras: BTreeMap<String, Coalgebra>,
    pub maps: BTreeMap<String, NamedMap>,
    pub datasets: BTreeMap<String, Dataset>,
}

pub fn parse_field(text: &str) -> Result<Field, String> {
    match text {
        "Q" | "rationals" => Ok(Field::Rationals),
        _ => {
            let p = text
                .strip_prefix("GF(")
                .and_then(|t| t.strip_suffix(')'))
                .and_then(|t| t.parse::<u64>().ok())
                .ok_or_else(|| format!("unknown field {text:?}; use \"Q\" or \"GF(p)\""))?;
            Field::prime(p).map_err(|e| e.to_string())
        }
    }
}

/// Parses and fully validates a document.
pub fn parse_document(text: &str) -> Result<Document, InputError> {
    let root: Value = serde_json::from_str(text).map_err(|e| InputError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = as_object(&root, "document")?;
    check_keys(obj, "document", &["field", "algebras", "spaces", "coalgebras", "maps", "datasets"])?;
    let field_text =
        obj.get("field").and_then(Value::as_str).ok_or_else(|| invalid("field", "missing or not a string"))?;
    let field = parse_field(field_text).map_err(|m| invalid("field", m))?;
    let mut doc = Document::new(field);
    let p = Parser { field };
    for (name, v) in section(obj, "algebras")? {
        let path = format!("algebras.{name}");
        doc.algebras.insert(name.clone(), p.algebra(v, &path)?);
    }
    for (name, v) in section(obj, "spaces")? {
        let path = format!("spaces.{name}");
        doc.spaces.insert(name.clone(), p.space(v, &path)?);
    }
    for (name, v) in section(obj, "coalgebras")? {
        let path = format!("coalgebras.{name}");
        doc.coalgebras.insert(name.clone(), p.coalgebra(v, &path)?);
    }
    for (name, v) in section(obj, "maps")? {
        let path = format!("maps.{name}");
        let m = p.map(&doc, v, &path)?;
        doc.maps.insert(name.clone(), m);
    }
    for (name, v) in section(obj, "datasets")? {
        let path = format!("datasets.{name}");
        let ds = p.dataset(v, &path)?;
        doc.datasets.insert(name.clone(), ds);
    }
    for name in doc.datasets.keys() {
        doc.instance(name)?;
    }
    Ok(doc)
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, InputError> {
    v.as_object().ok_or_else(|| invalid(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, InputError> {
    v.as_array().ok_or_else(|| invalid(path, "expected an array"))
}

fn check_keys(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<(), InputError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(invalid(&format!("{path}.{k}"), "unknown key")),
        None => Ok(()),
    }
}

fn section<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<Vec<(&'a String, &'a Value)>, InputError> {
    match obj.get(key) {
        None => Ok(Vec::new()),
        Some(v) => Ok(as_object(v, key)?.iter().collect()),
    }
}

fn field_of<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, InputError> {
    obj.get(key).ok_or_else(|| invalid(&format!("{path}.{key}"), "missing"))
}

fn as_dim(v: &Value, path: &str) -> Result<usize, InputError> {
    match v.as_u64() {
        Some(n) if n > 0 => Ok(n as usize),
        _ => Err(invalid(path, "expected a positive integer")),
    }
}

struct Parser {
    field: Field,
}

impl Parser {
    fn scalar(&self, v: &Value, path: &str) -> Result<Scalar, InputError> {
        let text = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
            _ => return Err(invalid(path, "expected a scalar string such as \"-1/2\"")),
        };
        self.field.parse(&text).map_err(|e| invalid(path, e))
    }

    fn vector(&self, v: &Value, len: usize, path: &str) -> Result<Vec<Scalar>, InputError> {
        let items = as_array(v, path)?;
        if items.len() != len {
            return Err(invalid(path, format!("expected {len} entries, found {}", items.len())));
        }
        items.iter().enumerate().map(|(i, x)| self.scalar(x, &format!("{path}[{i}]"))).collect()
    }

    fn matrix(&self, v: &Value, rows: usize, cols: usize, path: &str) -> Result<Vec<Vec<Scalar>>, InputError> {
        let items = as_array(v, path)?;
        if items.len() != rows {
            return Err(invalid(path, format!("expected {rows} rows, found {}", items.len())));
        }
        items.iter().enumerate().map(|(i, r)| self.vector(r, cols, &format!("{path}[{i}]"))).collect()
    }

    fn algebra(&self, v: &Value, path: &str) -> Result<FinAlgebra, InputError> {
        let obj = as_object(v, path)?;
        check_keys(obj, path, &["dim", "unit", "table"])?;
        let n = as_dim(field_of(obj, path, "dim")?, &format!("{path}.dim"))?;
        let unit = self.vector(field_of(obj, path, "unit")?, n, &format!("{path}.unit"))?;
        let tpath = format!("{path}.table");
        let rows = as_array(field_of(obj, path, "table")?, &tpath)?;
        if rows.len() != n {
            return Err(invalid(&tpath, format!("expected {n} rows, found {}", rows.len())));
        }
        let table = rows
            .iter()
            .enumerate()
            .map(|(i, r)| self.matrix(r, n, n, &format!("{tpath}[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        FinAlgebra::from_table(self.field, table, unit).map_err(|e| invalid(path, e))
    }

    fn space(&self, v: &Value, path: &str) -> Result<PointedSpace, InputError> {
        let obj = as_object(v, path)?;
        check_keys(obj, path, &["dim", "unit"])?;
        let n = as_dim(field_of(obj, path, "dim")?, &format!("{path}.dim"))?;
        let unit = self.vector(field_of(obj, path, "unit")?, n, &format!("{path}.unit"))?;
        PointedSpace::new(self.field, unit).map_err(|e| invalid(path, e))
    }

    fn coalgebra(&self, v: &Value, path: &str) -> Result<Coalgebra, InputError> {
        let obj = as_object(v, path)?;
        check_keys(obj, path, &["dim", "unit", "comul", "counit"])?;
        let f = self.field;
        let n = as_dim(field_of(obj, path, "dim")?, &format!("{path}.dim"))?;
        let unit = self.vector(field_of(obj, path, "unit")?, n, &format!("{path}.unit"))?;
        let comul = self.matrix(field_of(obj, path, "comul")?, n * n, n, &format!("{path}.comul"))?;
        let counit = self.matrix(field_of(obj, path, "counit")?, 1, n, &format!("{path}.counit"))?;
        let sh = |d: Vec<usize>| TensorShape::new(d).expect("positive dims");
        let err = |e| invalid(path, e);
        let comul = TensorMap::from_rows(f, sh(vec![n]), sh(vec![n, n]), comul).map_err(err)?;
        let counit = TensorMap::from_rows(f, sh(vec![n]), sh(vec![1]), counit).map_err(err)?;
        Coalgebra::new(f, n, comul, counit, unit).map_err(err)
    }

    fn names(&self, doc: &Document, v: &Value, path: &str) -> Result<(Vec<String>, Vec<usize>), InputError> {
        let items = as_array(v, path)?;
        if items.is_empty() {
            return Err(invalid(path, "expected at least one factor"));
        }
        let mut names = Vec::new();
        let mut dims = Vec::new();
        for (i, item) in items.iter().enumerate() {
            let p = format!("{path}[{i}]");
            let name = item.as_str().ok_or_else(|| invalid(&p, "expected a name"))?;
            let dim =
                doc.dim_of(name).ok_or_else(|| InputError::Unresolved { path: p.clone(), name: name.to_string() })?;
            names.push(name.to_string());
            dims.push(dim);
        }
        Ok((names, dims))
    }

    fn map(&self, doc: &Document, v: &Value, path: &str) -> Result<NamedMap, InputError> {
        let obj = as_object(v, path)?;
        check_keys(obj, path, &["domain", "codomain", "matrix"])?;
        let (domain, ddims) = self.names(doc, field_of(obj, path, "domain")?, &format!("{path}.domain"))?;
        let (codomain, cdims) = self.names(doc, field_of(obj, path, "codomain")?, &format!("{path}.codomain"))?;
        let (rows, cols) = (cdims.iter().product(), ddims.iter().product());
        let m = self.matrix(field_of(obj, path, "matrix")?, rows, cols, &format!("{path}.matrix"))?;
        let sh = |d: Vec<usize>| TensorShape::new(d).expect("positive dims");
        let map = TensorMap::from_rows(self.field, sh(ddims), sh(cdims), m).map_err(|e| invalid(path, e))?;
        Ok(NamedMap { domain, codomain, map })
    }

    fn dataset(&self, v: &Value, path: &str) -> Result<Dataset, InputError> {
        let obj = as_object(v, path)?;
        let kind_text = field_of(obj, path, "kind")?
            .as_str()
            .ok_or_else(|| invalid(&format!("{path}.kind"), "expected a string"))?;
        let kind = KINDS
            .iter()
            .find(|(n, _)| *n == kind_text)
            .map(|(_, k)| *k)
            .ok_or_else(|| invalid(&format!("{path}.kind"), format!("unknown dataset kind {kind_text:?}")))?;
        let mut allowed: Vec<&str> = vec!["kind"];
        allowed.extend(kind.roles().iter().map(|r| r.0));
        allowed.extend(kind.params());
        check_keys(obj, path, &allowed)?;
        let mut refs = BTreeMap::new();
        for &(role, _, required) in kind.roles() {
            match obj.get(role) {
                Some(Value::String(s)) => {
                    refs.insert(role.to_string(), s.clone());
                }
                Some(_) => return Err(invalid(&format!("{path}.{role}"), "expected a name")),
                None if required => return Err(invalid(&format!("{path}.{role}"), "missing")),
                None => {}
            }
        }
        let mut params = BTreeMap::new();
        for &key in kind.params() {
            if let Some(v) = obj.get(key) {
                params.insert(key.to_string(), v.clone());
            }
        }
        Ok(Dataset { kind, refs, params })
    }
}

impl Document {
    pub fn new(field: Field) -> Self {
        Document {
            field,
            algebras: BTreeMap::new(),
            spaces: BTreeMap::new(),
            coalgebras: BTreeMap::new(),
            maps: BTreeMap::new(),
            datasets: BTreeMap::new(),
        }
    }

    /// Dimension of a named object; `k` is the ground field.
    pub fn dim_of(&self, name: &str) -> Option<usize> {
        if let Some(a) = self.algebras.get(name) {
            return Some(a.dim());
        }
        if let Some(v) = self.spaces.get(name) {
            return Some(v.dim());
        }
        if let Some(h) = self.coalgebras.get(name) {
            return Some(h.dim());
        }
        (name == "k").then_some(1)
    }

    fn lookup(&self, ds: &str, role: &str) -> Result<&str, InputError> {
        self.datasets[ds]
            .refs
            .get(role)
            .map(String::as_str)
            .ok_or_else(|| invalid(&format!("datasets.{ds}.{role}"), "missing"))
    }

    fn unresolved(ds: &str, role: &str, name: &str) -> InputError {
        InputError::Unresolved { path: format!("datasets.{ds}.{role}"), name: name.to_string() }
    }

    fn get_algebra(&self, ds: &str, role: &str) -> Result<FinAlgebra, InputError> {
        let name = self.lookup(ds, role)?;
        if name == "k" && !self.algebras.contains_key("k") {
            return Ok(FinAlgebra::ground(self.field));
        }
        self.algebras.get(name).cloned().ok_or_else(|| Self::unresolved(ds, role, name))
    }

    /// Pointed spaces, algebras and coalgebras all serve as pointed spaces.
    fn get_pointed(&self, ds: &str, role: &str) -> Result<PointedSpace, InputError> {
        let name = self.lookup(ds, role)?;
        if let Some(v) = self.spaces.get(name) {
            return Ok(v.clone());
        }
        if let Some(a) = self.algebras.get(name) {
            return Ok(a.as_pointed());
        }
        if let Some(h) = self.coalgebras.get(name) {
            return Ok(h.as_pointed());
        }
        if name == "k" {
            return Ok(FinAlgebra::ground(self.field).as_pointed());
        }
        Err(Self::unresolved(ds, role, name))
    }

    fn get_map(&self, ds: &str, role: &str) -> Result<TensorMap, InputError> {
        let name = self.lookup(ds, role)?;
        self.maps.get(name).map(|m| m.map.clone()).ok_or_else(|| Self::unresolved(ds, role, name))
    }

    fn opt_map(&self, ds: &str, role: &str) -> Result<Option<TensorMap>, InputError> {
        if self.datasets[ds].refs.contains_key(role) {
            self.get_map(ds, role).map(Some)
        } else {
            Ok(None)
        }
    }

    /// Resolves a dataset into core objects, checking every shape.
    pub fn instance(&self, name: &str) -> Result<Instance, InputError> {
        let ds = self
            .datasets
            .get(name)
            .ok_or_else(|| InputError::Unresolved { path: "datasets".into(), name: name.to_string() })?;
        let path = format!("datasets.{name}");
        let err = |e: xprod_core::Error| invalid(&path, e);
        let alg = |r| self.get_algebra(name, r);
        let pt = |r| self.get_pointed(name, r);
        let map = |r| self.get_map(name, r);
        Ok(match ds.kind {
            Kind::TwoSided => Instance::TwoSided(
                TwoSidedData::new(alg("A")?, pt("V")?, alg("C")?, map("R1")?, map("R2")?, map("R3")?, map("E")?)
                    .map_err(err)?,
            ),
            Kind::Brzezinski => {
                Instance::Brzezinski(BrzData::new(alg("A")?, pt("V")?, map("R")?, map("sigma")?).map_err(err)?)
            }
            Kind::Mirror => Instance::Mirror(MirrorData::new(pt("W")?, alg("B")?, map("P")?, map("nu")?).map_err(err)?),
            Kind::Ttp => {
                let (a, b, r) = (alg("A")?, alg("B")?, map("R")?);
                if r.domain().dims() != [b.dim(), a.dim()] || r.codomain().dims() != [a.dim(), b.dim()] {
                    return Err(invalid(&format!("{path}.R"), "expected a map B ⊗ A → A ⊗ B"));
                }
                Instance::Ttp { a, b, r }
            }
            Kind::Ma => {
                let hname = self.lookup(name, "H")?;
                let h = self.coalgebras.get(hname).cloned().ok_or_else(|| Self::unresolved(name, "H", hname))?;
                Instance::Ma(
                    MaData::new(h, alg("A")?, alg("B")?, map("G")?, map("R")?, map("T")?, map("tau")?).map_err(err)?,
                )
            }
            Kind::Iterated => {
                let (a, b, c) = (alg("A")?, alg("B")?, alg("C")?);
                let (r1, r2, r3) = (map("R1")?, map("R2")?, map("R3")?);
                iterated_data(&a, &b, &c, &r1, &r2, &r3).map_err(err)?;
                Instance::Iterated { a, b, c, r1, r2, r3 }
            }
            Kind::Search => {
                let mode = match ds.params.get("mode").map(|v| v.as_str()) {
                    None | Some(Some("exhaustive")) => SearchMode::Exhaustive,
                    Some(Some("randomized")) => {
                        let budget = ds
                            .params
                            .get("budget")
                            .and_then(Value::as_u64)
                            .ok_or_else(|| invalid(&format!("{path}.budget"), "randomized mode needs a budget"))?;
                        SearchMode::Randomized { budget, seed: 0 }
                    }
                    _ => return Err(invalid(&format!("{path}.mode"), "expected \"exhaustive\" or \"randomized\"")),
                };
                let cap = match ds.params.get("cap") {
                    None => DEFAULT_CAP,
                    Some(v) => {
                        v.as_u64().ok_or_else(|| invalid(&format!("{path}.cap"), "expected an integer"))? as u128
                    }
                };
                let frozen = Frozen {
                    r1: self.opt_map(name, "R1")?,
                    r2: self.opt_map(name, "R2")?,
                    r3: self.opt_map(name, "R3")?,
                    e: self.opt_map(name, "E")?,
                };
                let spec = SearchSpec { field: self.field, mode, frozen, cap };
                let (a, v, c) = (alg("A")?, pt("V")?, alg("C")?);
                let [na, nv, nc] = [a.dim(), v.dim(), c.dim()];
                let expect = [("R1", [nv, na], [na, nv]), ("R2", [nc, nv], [nv, nc]), ("R3", [nc, na], [na, nc])];
                for (role, dom, cod) in expect {
                    if let Some(m) = self.opt_map(name, role)? {
                        if m.domain().dims() != dom || m.codomain().dims() != cod {
                            return Err(invalid(&format!("{path}.{role}"), "frozen map has the wrong shape"));
                        }
                    }
                }
                if let Some(e) = &spec.frozen.e {
                    if e.domain().dims() != [nv, nv] || e.codomain().dims() != [na, nv, nc] {
                        return Err(invalid(&format!("{path}.E"), "frozen map has the wrong shape"));
                    }
                }
                Instance::Search { spec, a, v, c }
            }
            Kind::Extract => Instance::Extract { m: alg("M")?, a: alg("A")?, v: pt("V")?, c: alg("C")? },
            Kind::Universal => {
                let target = self.lookup(name, "data")?;
                if !self.datasets.contains_key(target) || target == name {
                    return Err(Self::unresolved(name, "data", target));
                }
                let data = self
                    .instance(target)?
                    .twosided()
                    .ok_or_else(|| invalid(&format!("{path}.data"), "expected two-sided data"))?;
                let (x, fa, fv, fc) = (alg("X")?, map("fA")?, map("fV")?, map("fC")?);
                let [na, nv, nc] = data.dims();
                for (role, m, n) in [("fA", &fa, na), ("fV", &fv, nv), ("fC", &fc, nc)] {
                    if m.domain().total() != n || m.codomain().total() != x.dim() {
                        return Err(invalid(&format!("{path}.{role}"), "map has the wrong shape"));
                    }
                }
                Instance::Universal { data, x, fa, fv, fc }
            }
        })
    }

    pub fn to_json(&self) -> Value {
        let s = |x: &Scalar| Value::String(x.to_string());
        let vec = |v: &[Scalar]| Value::Array(v.iter().map(s).collect());
        let rows = |m: &TensorMap| Value::Array(m.to_rows().iter().map(|r| vec(r)).collect());
        let algebras: Map<String, Value> = self.algebras.iter().map(|(n, a)| (n.clone(), algebra_json(a))).collect();
        let spaces: Map<String, Value> =
            self.spaces.iter().map(|(n, v)| (n.clone(), json!({"dim": v.dim(), "unit": vec(v.unit())}))).collect();
        let coalgebras: Map<String, Value> = self
            .coalgebras
            .iter()
            .map(|(n, h)| {
                (n.clone(), json!({"dim": h.dim(), "unit": vec(h.unit()), "comul": rows(h.comul()), "counit": rows(h.counit())}))
            })
            .collect();
        let maps: Map<String, Value> = self
            .maps
            .iter()
            .map(|(n, m)| (n.clone(), json!({"domain": m.domain, "codomain": m.codomain, "matrix": rows(&m.map)})))
            .collect();
        let datasets: Map<String, Value> = self
            .datasets
            .iter()
            .map(|(n, d)| {
                let mut o = Map::new();
                o.insert("kind".into(), Value::String(d.kind.name().into()));
                for (k, v) in &d.refs {
                    o.insert(k.clone(), Value::String(v.clone()));
                }
                for (k, v) in &d.params {
                    o.insert(k.clone(), v.clone());
                }
                (n.clone(), Value::Object(o))
            })
            .collect();
        let mut root = Map::new();
        root.insert("field".into(), Value::String(self.field.to_string()));
        for (key, section) in [
            ("algebras", algebras),
            ("spaces", spaces),
            ("coalgebras", coalgebras),
            ("maps", maps),
            ("datasets", datasets),
        ] {
            if !section.is_empty() {
                root.insert(key.into(), Value::Object(section));
            }
        }
        Value::Object(root)
    }
}

/// `{"dim", "unit", "table"}` with `table[i][j][k]` the coefficient of
/// `e_k` in `e_i · e_j`.
pub fn algebra_json(a: &FinAlgebra) -> Value {
    let s = |x: &Scalar| Value::String(x.to_string());
    let table: Vec<Value> = a
        .table()
        .iter()
        .map(|row| Value::Array(row.iter().map(|v| Value::Array(v.iter().map(s).collect())).collect()))
        .collect();
    json!({"dim": a.dim(), "unit": a.unit().iter().map(s).collect::<Vec<_>>(), "table": table})
}

/// Canonical text: sorted keys, two-space indentation, LF line endings and a
/// final newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    out.push('\n');
    out
}

pub fn serialize_document(doc: &Document) -> String {
    to_canonical_string(&doc.to_json())
}

impl Document {
    /// Adds `d` under dataset name `name`, its objects named `{name}.A`,
    /// `{name}.R1` and so on.
    pub fn insert_twosided(&mut self, name: &str, d: &TwoSidedData) {
        let n = |s: &str| format!("{name}.{s}");
        self.algebras.insert(n("A"), d.a.clone());
        self.spaces.insert(n("V"), d.v.clone());
        self.algebras.insert(n("C"), d.c.clone());
        let names = |xs: &[&str]| xs.iter().map(|s| n(s)).collect::<Vec<_>>();
        let mut refs = BTreeMap::new();
        for role in ["A", "V", "C"] {
            refs.insert(role.to_string(), n(role));
        }
        let maps: [(&str, &TensorMap, &[&str], &[&str]); 4] = [
            ("R1", &d.r1, &["V", "A"], &["A", "V"]),
            ("R2", &d.r2, &["C", "V"], &["V", "C"]),
            ("R3", &d.r3, &["C", "A"], &["A", "C"]),
            ("E", &d.e, &["V", "V"], &["A", "V", "C"]),
        ];
        for (role, m, dom, cod) in maps {
            self.maps.insert(n(role), NamedMap { domain: names(dom), codomain: names(cod), map: m.clone() });
            refs.insert(role.to_string(), n(role));
        }
        self.datasets.insert(name.to_string(), Dataset { kind: Kind::TwoSided, refs, params: BTreeMap::new() });
    }
}
