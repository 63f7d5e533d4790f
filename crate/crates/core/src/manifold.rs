//! Homological models of oriented 3-manifolds.
//!
//! A model records only what the skein computations consume: the ranks of
//! `H1/torsion` and `H2/torsion`, the intersection pairing `H2 ⊗ H1 -> Z`, the
//! homology classes of tori swept by moving a loop of a given class around in
//! the free loop space, and the Hurewicz image of `π2`.
//!
//! Models come from [`ManifoldModel::builtin`] or from a JSON manifold
//! document ([`ManifoldModel::from_json`]):
//!
//! ```json
//! { "name": "S2xS1", "h1_rank": 1, "h2_rank": 1, "pairing": [[1]],
//!   "torus_default": [[1]], "torus_exceptions": {}, "sphere_gens": [[1]] }
//! ```
//!
//! Optional fields: `torus_rule` (`"sweep"`), `classes`
//! (`[{"id": .., "h": [..], "torsion_tag": ..}]`) and `boundary_note`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// A class in `H1(M)`: free coordinates plus an optional torsion label that
/// never enters a pairing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HomologyClass1 {
    pub free: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torsion_tag: Option<String>,
}

impl HomologyClass1 {
    pub fn new(free: Vec<i64>) -> Self {
        HomologyClass1 {
            free,
            torsion_tag: None,
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        v[k] = 1;
        Self::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for HomologyClass1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_vec(&self.free))?;
        if let Some(tag) = &self.torsion_tag {
            write!(f, "+{tag}")?;
        }
        Ok(())
    }
}

/// A class in `H2(M)/torsion`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct HomologyClass2(pub Vec<i64>);

impl HomologyClass2 {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for HomologyClass2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_vec(&self.0))
    }
}

pub(crate) fn render_vec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// A free homotopy class of loops, at the fidelity the model supports: an id
/// and its homology class. Distinct ids may share a homology class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassLabel {
    pub id: String,
    pub h: HomologyClass1,
}

impl ClassLabel {
    pub fn new(id: impl Into<String>, h: HomologyClass1) -> Self {
        ClassLabel { id: id.into(), h }
    }

    /// A label whose id is the rendering of its free coordinates.
    pub fn from_vector(free: Vec<i64>) -> Self {
        let id = free
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        ClassLabel::new(id, HomologyClass1::new(free))
    }
}

// Sorting by homology first keeps enumerated tables in numeric order.
impl PartialOrd for ClassLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ClassLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.h, &self.id).cmp(&(&other.h, &other.id))
    }
}

/// Structured rules that compute torus generators from a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TorusRule {
    /// For flat models with `n = m = 3` and `H2` basis
    /// `(e2∧e3, e3∧e1, e1∧e2)`: the tori `h∧e_k` swept by translating a loop
    /// of class `h` around the basis directions.
    Sweep,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldModel {
    pub name: String,
    /// Rank of `H1/torsion`.
    pub n: usize,
    /// Rank of `H2/torsion`.
    pub m: usize,
    /// `m × n` matrix of the pairing `λ(s, h) = sᵀ Λ h`.
    pub pairing: Vec<Vec<i64>>,
    pub torus_default: Vec<HomologyClass2>,
    pub torus_exceptions: BTreeMap<String, Vec<HomologyClass2>>,
    pub torus_rule: Option<TorusRule>,
    pub sphere_gens: Vec<HomologyClass2>,
    pub classes: Vec<ClassLabel>,
    pub boundary_note: String,
}

impl ManifoldModel {
    /// A model with no tori, no spheres and a zero pairing.
    pub fn empty(name: impl Into<String>, n: usize, m: usize) -> Self {
        ManifoldModel {
            name: name.into(),
            n,
            m,
            pairing: vec![vec![0; n]; m],
            torus_default: Vec::new(),
            torus_exceptions: BTreeMap::new(),
            torus_rule: None,
            sphere_gens: Vec::new(),
            classes: Vec::new(),
            boundary_note: String::new(),
        }
    }

    /// Built-in models: `S3`, `S2xS1`, `T3`, `lens` (params `p, q`) and
    /// `handlebody` (param `g`).
    pub fn builtin(name: &str, params: &[i64]) -> Result<Self> {
        let arity = |k: usize| -> Result<()> {
            if params.len() != k {
                return Err(Error::InvalidParams {
                    name: name.to_string(),
                    msg: format!("expected {k} parameter(s), got {}", params.len()),
                });
            }
            Ok(())
        };
        match name {
            "S3" => {
                arity(0)?;
                let mut m = ManifoldModel::empty("S3", 0, 0);
                m.boundary_note = "closed; H1 = H2 = 0".into();
                Ok(m)
            }
            "S2xS1" => {
                arity(0)?;
                let mut m = ManifoldModel::empty("S2xS1", 1, 1);
                m.pairing = vec![vec![1]];
                m.torus_default = vec![HomologyClass2(vec![1])];
                m.sphere_gens = vec![HomologyClass2(vec![1])];
                m.boundary_note =
                    "closed; H2 generated by S2 x *, which meets a loop of class k in k points"
                        .into();
                Ok(m)
            }
            "T3" => {
                arity(0)?;
                let mut m = ManifoldModel::empty("T3", 3, 3);
                m.pairing = (0..3)
                    .map(|i| (0..3).map(|j| i64::from(i == j)).collect())
                    .collect();
                m.torus_rule = Some(TorusRule::Sweep);
                m.boundary_note =
                    "closed, aspherical; H2 basis (e2^e3, e3^e1, e1^e2), pairing = determinant"
                        .into();
                Ok(m)
            }
            "lens" => {
                arity(2)?;
                let (p, q) = (params[0], params[1]);
                if p <= 0 {
                    return Err(Error::InvalidParams {
                        name: name.into(),
                        msg: format!("p must be positive, got {p}"),
                    });
                }
                if p.gcd(&q) != 1 {
                    return Err(Error::InvalidParams {
                        name: name.into(),
                        msg: format!("p and q must be coprime, got ({p},{q})"),
                    });
                }
                let mut m = ManifoldModel::empty(format!("L({p},{q})"), 0, 0);
                m.classes = (0..p)
                    .map(|k| {
                        ClassLabel::new(
                            format!("t{k}"),
                            HomologyClass1 {
                                free: Vec::new(),
                                torsion_tag: Some(format!("{k}/{p}")),
                            },
                        )
                    })
                    .collect();
                m.boundary_note = format!("closed; H1 = Z/{p}, H2 = 0");
                Ok(m)
            }
            "handlebody" => {
                arity(1)?;
                let g = params[0];
                if g < 0 {
                    return Err(Error::InvalidParams {
                        name: name.into(),
                        msg: format!("genus must be non-negative, got {g}"),
                    });
                }
                let mut m = ManifoldModel::empty(format!("H{g}"), g as usize, 0);
                m.boundary_note =
                    format!("H1 = Z^{g}, H2 = 0; every torus is homologous into the boundary");
                Ok(m)
            }
            _ => Err(Error::UnknownBuiltin(name.to_string())),
        }
    }

    pub fn check_h1(&self, what: impl fmt::Display, h: &HomologyClass1) -> Result<()> {
        if h.free.len() != self.n {
            return Err(Error::dimension(
                format!("{what} {h}"),
                self.n,
                h.free.len(),
            ));
        }
        Ok(())
    }

    pub fn check_h2(&self, what: impl fmt::Display, s: &HomologyClass2) -> Result<()> {
        if s.0.len() != self.m {
            return Err(Error::dimension(format!("{what} {s}"), self.m, s.0.len()));
        }
        Ok(())
    }

    /// `λ(s, h) = sᵀ Λ h`.
    pub fn pairing_eval(&self, s: &HomologyClass2, h: &HomologyClass1) -> Result<i64> {
        self.check_h2("surface class", s)?;
        self.check_h1("loop class", h)?;
        Ok(self.pair_unchecked(&s.0, &h.free))
    }

    pub(crate) fn pair_unchecked(&self, s: &[i64], h: &[i64]) -> i64 {
        self.pairing
            .iter()
            .zip(s)
            .map(|(row, si)| si * row.iter().zip(h).map(|(a, b)| a * b).sum::<i64>())
            .sum()
    }

    /// Generators of the torus classes swept by loops of class `c`: the
    /// exception list for `c.id` if present, else the rule output, else the
    /// default list.
    pub fn torus_subgroup(&self, c: &ClassLabel) -> Vec<HomologyClass2> {
        if let Some(list) = self.torus_exceptions.get(&c.id) {
            return list.clone();
        }
        match self.torus_rule {
            Some(TorusRule::Sweep) => sweep(&c.h.free),
            None => self.torus_default.clone(),
        }
    }

    pub fn sphere_subgroup(&self) -> &[HomologyClass2] {
        &self.sphere_gens
    }

    /// Every torus generator the model can produce: the default list, all
    /// exception lists, and the rule applied to each `H1` basis class.
    pub fn all_torus_generators(&self) -> Vec<HomologyClass2> {
        let mut out: Vec<HomologyClass2> = Vec::new();
        if self.torus_rule.is_none() {
            out.extend(self.torus_default.iter().cloned());
        }
        for list in self.torus_exceptions.values() {
            out.extend(list.iter().cloned());
        }
        if let Some(TorusRule::Sweep) = self.torus_rule {
            for k in 0..self.n {
                out.extend(sweep(&HomologyClass1::basis(self.n, k).free));
            }
        }
        out
    }

    pub fn class(&self, id: &str) -> Option<&ClassLabel> {
        self.classes.iter().find(|c| c.id == id)
    }

    /// Whether `t` is an integer combination of the torus generators of `c`.
    pub fn torus_span_contains(&self, c: &ClassLabel, t: &HomologyClass2) -> bool {
        let gens: Vec<Vec<i64>> = self.torus_subgroup(c).into_iter().map(|g| g.0).collect();
        span_contains(&gens, &t.0)
    }

    pub fn to_document(&self) -> ManifoldDocument {
        ManifoldDocument {
            name: self.name.clone(),
            h1_rank: self.n,
            h2_rank: self.m,
            pairing: self.pairing.clone(),
            torus_default: self.torus_default.clone(),
            torus_exceptions: self.torus_exceptions.clone(),
            torus_rule: self.torus_rule.map(|TorusRule::Sweep| "sweep".to_string()),
            sphere_gens: self.sphere_gens.clone(),
            classes: self
                .classes
                .iter()
                .map(|c| ClassEntry {
                    id: c.id.clone(),
                    h: c.h.free.clone(),
                    torsion_tag: c.h.torsion_tag.clone(),
                })
                .collect(),
            boundary_note: (!self.boundary_note.is_empty()).then(|| self.boundary_note.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::parse("manifold document", e.to_string()))?;
        DocumentReader::default().read(&value)
    }
}

/// `h ∧ e_k` in the basis `(e2∧e3, e3∧e1, e1∧e2)` is the cross product
/// `h × e_k`. Zero classes are dropped.
fn sweep(h: &[i64]) -> Vec<HomologyClass2> {
    if h.len() != 3 {
        return Vec::new();
    }
    (0..3)
        .map(|k| {
            let mut e = [0i64; 3];
            e[k] = 1;
            HomologyClass2(vec![
                h[1] * e[2] - h[2] * e[1],
                h[2] * e[0] - h[0] * e[2],
                h[0] * e[1] - h[1] * e[0],
            ])
        })
        .filter(|c| !c.is_zero())
        .collect()
}

/// Integer span membership via row echelon form over `Z`.
fn span_contains(gens: &[Vec<i64>], v: &[i64]) -> bool {
    let dim = v.len();
    let mut rows: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| g.iter().map(|&x| x as i128).collect())
        .collect();
    let mut echelon: Vec<(usize, Vec<i128>)> = Vec::new();
    for col in 0..dim {
        let mut active: Vec<Vec<i128>> = Vec::new();
        let mut rest = Vec::new();
        for r in rows.drain(..) {
            if r[col] != 0 {
                active.push(r);
            } else {
                rest.push(r);
            }
        }
        // Euclid on the column until a single row carries the gcd.
        while active.len() > 1 {
            active.sort_by_key(|r| r[col].abs());
            let pivot = active[0].clone();
            for r in active.iter_mut().skip(1) {
                let k = r[col].div_euclid(pivot[col]);
                for (x, p) in r.iter_mut().zip(&pivot) {
                    *x -= k * p;
                }
            }
            let (keep, zeroed): (Vec<_>, Vec<_>) = active.into_iter().partition(|r| r[col] != 0);
            active = keep;
            rest.extend(zeroed);
        }
        if let Some(p) = active.pop() {
            echelon.push((col, p));
        }
        rows = rest;
    }
    let mut t: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    for (col, row) in &echelon {
        if t[*col] % row[*col] != 0 {
            return false;
        }
        let k = t[*col] / row[*col];
        for (x, p) in t.iter_mut().zip(row) {
            *x -= k * p;
        }
    }
    t.iter().all(|&x| x == 0)
}

/// Serialized form of a [`ManifoldModel`].
#[derive(Debug, Clone, Serialize)]
pub struct ManifoldDocument {
    pub name: String,
    pub h1_rank: usize,
    pub h2_rank: usize,
    pub pairing: Vec<Vec<i64>>,
    pub torus_default: Vec<HomologyClass2>,
    pub torus_exceptions: BTreeMap<String, Vec<HomologyClass2>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torus_rule: Option<String>,
    pub sphere_gens: Vec<HomologyClass2>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_note: Option<String>,
}

/// One entry of a document's `classes` table.
#[derive(Debug, Clone, Serialize)]
pub struct ClassEntry {
    pub id: String,
    pub h: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torsion_tag: Option<String>,
}

const DOCUMENT_FIELDS: &[&str] = &[
    "name",
    "h1_rank",
    "h2_rank",
    "pairing",
    "torus_default",
    "torus_exceptions",
    "torus_rule",
    "sphere_gens",
    "classes",
    "boundary_note",
];

/// Reads a manifold document, collecting every problem before failing.
#[derive(Default)]
struct DocumentReader {
    schema: Vec<String>,
    dims: Vec<String>,
}

impl DocumentReader {
    fn read(mut self, value: &Value) -> Result<ManifoldModel> {
        let Some(obj) = value.as_object() else {
            return Err(Error::Schema(vec!["document must be a JSON object".into()]));
        };
        for key in obj.keys() {
            if !DOCUMENT_FIELDS.contains(&key.as_str()) {
                self.schema.push(format!("unknown field `{key}`"));
            }
        }
        let name = match obj.get("name") {
            Some(Value::String(s)) => s.clone(),
            Some(_) => {
                self.schema.push("`name` must be a string".into());
                String::new()
            }
            None => {
                self.schema.push("missing field `name`".into());
                String::new()
            }
        };
        let n = self.rank(obj, "h1_rank");
        let m = self.rank(obj, "h2_rank");

        let pairing = match obj.get("pairing") {
            None => {
                self.schema.push("missing field `pairing`".into());
                Vec::new()
            }
            Some(v) => self.matrix(v, "pairing"),
        };
        if let (Some(n), Some(m)) = (n, m) {
            if pairing.len() != m {
                self.dims
                    .push(format!("pairing: expected {m} rows, got {}", pairing.len()));
            }
            for (i, row) in pairing.iter().enumerate() {
                if row.len() != n {
                    self.dims.push(format!(
                        "pairing row {i}: expected length {n}, got {}",
                        row.len()
                    ));
                }
            }
        }

        let torus_default = self.h2_list(obj.get("torus_default"), "torus_default", m, true);
        let sphere_gens = self.h2_list(obj.get("sphere_gens"), "sphere_gens", m, true);

        let mut torus_exceptions = BTreeMap::new();
        match obj.get("torus_exceptions") {
            None => self.schema.push("missing field `torus_exceptions`".into()),
            Some(Value::Object(map)) => {
                for (id, list) in map {
                    let field = format!("torus_exceptions.{id}");
                    let gens = self.h2_list(Some(list), &field, m, true);
                    torus_exceptions.insert(id.clone(), gens);
                }
            }
            Some(_) => self
                .schema
                .push("`torus_exceptions` must be an object".into()),
        }

        let torus_rule = match obj.get("torus_rule") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) if s == "sweep" => {
                if n != Some(3) || m != Some(3) {
                    self.dims
                        .push("torus_rule `sweep` requires h1_rank = h2_rank = 3".into());
                }
                Some(TorusRule::Sweep)
            }
            Some(other) => {
                self.schema.push(format!(
                    "`torus_rule` must be absent or \"sweep\", got {other}"
                ));
                None
            }
        };

        let classes = match obj.get("classes") {
            None => Vec::new(),
            Some(Value::Array(items)) => items
                .iter()
                .enumerate()
                .filter_map(|(i, item)| self.class_entry(item, i, n))
                .collect(),
            Some(_) => {
                self.schema.push("`classes` must be an array".into());
                Vec::new()
            }
        };

        let boundary_note = match obj.get("boundary_note") {
            None => String::new(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => {
                self.schema.push("`boundary_note` must be a string".into());
                String::new()
            }
        };

        if !self.schema.is_empty() {
            self.schema.extend(self.dims);
            return Err(Error::Schema(self.schema));
        }
        if !self.dims.is_empty() {
            return Err(Error::Dimension(self.dims));
        }
        Ok(ManifoldModel {
            name,
            n: n.unwrap_or_default(),
            m: m.unwrap_or_default(),
            pairing,
            torus_default,
            torus_exceptions,
            torus_rule,
            sphere_gens,
            classes,
            boundary_note,
        })
    }

    fn rank(&mut self, obj: &Map<String, Value>, key: &str) -> Option<usize> {
        match obj.get(key) {
            None => {
                self.schema.push(format!("missing field `{key}`"));
                None
            }
            Some(v) => match v.as_u64() {
                Some(k) => Some(k as usize),
                None => {
                    self.schema
                        .push(format!("`{key}` must be a non-negative integer, got {v}"));
                    None
                }
            },
        }
    }

    fn int_vec(&mut self, v: &Value, field: &str) -> Option<Vec<i64>> {
        let Some(items) = v.as_array() else {
            self.schema
                .push(format!("`{field}` must be an array of integers, got {v}"));
            return None;
        };
        // Bad entries become 0 so that shapes are still checked.
        let mut out = Vec::with_capacity(items.len());
        for (i, x) in items.iter().enumerate() {
            match x.as_i64() {
                Some(k) => out.push(k),
                None => {
                    self.schema
                        .push(format!("`{field}[{i}]` must be an integer, got {x}"));
                    out.push(0);
                }
            }
        }
        Some(out)
    }

    fn matrix(&mut self, v: &Value, field: &str) -> Vec<Vec<i64>> {
        let Some(rows) = v.as_array() else {
            self.schema
                .push(format!("`{field}` must be an array of rows"));
            return Vec::new();
        };
        rows.iter()
            .enumerate()
            .filter_map(|(i, r)| self.int_vec(r, &format!("{field}[{i}]")))
            .collect()
    }

    fn h2_list(
        &mut self,
        v: Option<&Value>,
        field: &str,
        m: Option<usize>,
        required: bool,
    ) -> Vec<HomologyClass2> {
        let Some(v) = v else {
            if required {
                self.schema.push(format!("missing field `{field}`"));
            }
            return Vec::new();
        };
        let rows = self.matrix(v, field);
        if let Some(m) = m {
            for (i, r) in rows.iter().enumerate() {
                if r.len() != m {
                    self.dims.push(format!(
                        "{field}[{i}]: expected length {m}, got {}",
                        r.len()
                    ));
                }
            }
        }
        rows.into_iter().map(HomologyClass2).collect()
    }

    fn class_entry(&mut self, item: &Value, i: usize, n: Option<usize>) -> Option<ClassLabel> {
        let field = format!("classes[{i}]");
        let Some(obj) = item.as_object() else {
            self.schema.push(format!("`{field}` must be an object"));
            return None;
        };
        for key in obj.keys() {
            if !["id", "h", "torsion_tag"].contains(&key.as_str()) {
                self.schema.push(format!("unknown field `{field}.{key}`"));
            }
        }
        let id = match obj.get("id") {
            Some(Value::String(s)) => s.clone(),
            _ => {
                self.schema.push(format!("`{field}.id` must be a string"));
                return None;
            }
        };
        let free = match obj.get("h") {
            Some(v) => self.int_vec(v, &format!("{field}.h"))?,
            None => {
                self.schema.push(format!("missing field `{field}.h`"));
                return None;
            }
        };
        if let Some(n) = n {
            if free.len() != n {
                self.dims.push(format!(
                    "{field}.h: expected length {n}, got {}",
                    free.len()
                ));
            }
        }
        let torsion_tag = match obj.get("torsion_tag") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => {
                self.schema
                    .push(format!("`{field}.torsion_tag` must be a string"));
                None
            }
        };
        Some(ClassLabel::new(id, HomologyClass1 { free, torsion_tag }))
    }
}
