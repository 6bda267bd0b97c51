//! JSON records describing graded algebras, operator families and options.
//!
//! A record is one JSON object. `basis` and `structure` are required, the
//! rest defaults: rational coefficients, trivial grading group, trivial
//! bicharacter, all-zero degrees, identity map, the plain ternary flavor.
//! Coefficients are strings in the field syntax ("1/2 - 3*z") or plain
//! integers. Structure rows are 0-based `[i, j, k, l, c]`, read as "the
//! product of basis elements i, j, k contains c times element l". A record
//! with `"arity": 2` drops the third input slot and describes a binary
//! algebra, the raw material for reconstruction. `masa` rows are either
//! `[i, j]` integer pairs naming the operator built from basis elements i
//! and j, or arrays of coefficient strings giving coordinates in the
//! operator basis. `eigen_hints` is one flat list shared by every family
//! element, or one list per element. A singular `phi` parses fine; the
//! validation stage reports it.

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{structure_from_entries, Flavor, GradedAlgebra};
use crate::descent::{binary_structure_from_entries, BinaryColorAlgebra};
use crate::field::{FieldSpec, Scalar};
use crate::grading::{Bicharacter, GradingGroup};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    /// Malformed JSON, or a shape the deserializer refuses outright.
    #[error("invalid input: {0}")]
    Json(String),
    /// Well-formed JSON carrying a value of the wrong kind.
    #[error("{path}: {detail}")]
    Schema { path: String, detail: String },
    /// Numbers or indices outside the usable range.
    #[error("{path}: {detail}")]
    Range { path: String, detail: String },
}

fn schema(path: impl Into<String>, detail: impl Into<String>) -> InputError {
    InputError::Schema {
        path: path.into(),
        detail: detail.into(),
    }
}

fn range(path: impl Into<String>, detail: impl Into<String>) -> InputError {
    InputError::Range {
        path: path.into(),
        detail: detail.into(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    field: Option<RawField>,
    group: Option<RawGroup>,
    bicharacter: Option<Vec<Vec<Value>>>,
    arity: Option<u64>,
    basis: Vec<String>,
    degrees: Option<Vec<Vec<i64>>>,
    structure: Vec<Vec<Value>>,
    phi: Option<Vec<Vec<Value>>>,
    flavor: Option<String>,
    masa: Option<Vec<Vec<Value>>>,
    eigen_hints: Option<Value>,
    options: Option<RawOptions>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    order: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    cyclic_orders: Vec<u64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    talphabeta_wide: Option<bool>,
    via_dehom: Option<bool>,
}

/// One designated operator, before the operator basis exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MasaEntry {
    /// The operator produced by a pair of basis elements.
    AdPair(usize, usize),
    /// Explicit coordinates in the operator basis.
    OpCoords(Vec<Scalar>),
}

/// Candidate eigenvalues supplied with the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HintSpec {
    None,
    /// One list shared by every family element.
    Flat(Vec<Scalar>),
    /// One list per family element, in order.
    PerElement(Vec<Vec<Scalar>>),
}

impl HintSpec {
    pub fn for_family(&self, len: usize) -> Vec<Vec<Scalar>> {
        match self {
            HintSpec::None => Vec::new(),
            HintSpec::Flat(h) => vec![h.clone(); len],
            HintSpec::PerElement(rows) => rows.clone(),
        }
    }

    /// Every hint in one list, for seeding searches.
    pub fn flat(&self) -> Vec<Scalar> {
        match self {
            HintSpec::None => Vec::new(),
            HintSpec::Flat(h) => h.clone(),
            HintSpec::PerElement(rows) => rows.iter().flatten().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InputOptions {
    pub talphabeta_wide: bool,
    pub via_dehom: Option<bool>,
}

#[derive(Debug, Clone)]
pub enum AlgebraRecord {
    Ternary(GradedAlgebra),
    Binary(BinaryColorAlgebra),
}

#[derive(Debug, Clone)]
pub struct InputDoc {
    pub record: AlgebraRecord,
    pub masa: Option<Vec<MasaEntry>>,
    pub hints: HintSpec,
    pub options: InputOptions,
}

impl InputDoc {
    pub fn ternary(&self) -> Option<&GradedAlgebra> {
        match &self.record {
            AlgebraRecord::Ternary(a) => Some(a),
            AlgebraRecord::Binary(_) => None,
        }
    }

    pub fn binary(&self) -> Option<&BinaryColorAlgebra> {
        match &self.record {
            AlgebraRecord::Ternary(_) => None,
            AlgebraRecord::Binary(b) => Some(b),
        }
    }
}

fn scalar_value(spec: FieldSpec, v: &Value, path: &str) -> Result<Scalar, InputError> {
    match v {
        Value::Number(num) => match num.as_i64() {
            Some(k) => Ok(spec.integer(k)),
            None => Err(range(
                path,
                "coefficients must be exact: use an integer or a string",
            )),
        },
        Value::String(s) => spec.parse(s).map_err(|e| schema(path, e.to_string())),
        other => Err(schema(
            path,
            format!("expected a coefficient, found {other}"),
        )),
    }
}

fn index_value(v: &Value, dim: usize, path: &str) -> Result<usize, InputError> {
    let k = v
        .as_u64()
        .ok_or_else(|| schema(path, format!("expected a basis index, found {v}")))?;
    let k = usize::try_from(k).map_err(|_| range(path, "index does not fit this platform"))?;
    if k >= dim {
        return Err(range(
            path,
            format!("index {k} is out of range for dimension {dim}"),
        ));
    }
    Ok(k)
}

fn matrix_value(
    spec: FieldSpec,
    rows: &[Vec<Value>],
    n: usize,
    path: &str,
) -> Result<Matrix, InputError> {
    if rows.len() != n {
        return Err(schema(
            path,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    let mut out = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(schema(
                format!("{path}[{i}]"),
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        let mut r = Vec::with_capacity(n);
        for (j, v) in row.iter().enumerate() {
            r.push(scalar_value(spec, v, &format!("{path}[{i}][{j}]"))?);
        }
        out.push(r);
    }
    Ok(Matrix::from_rows(spec, n, out))
}

fn masa_entries(
    spec: FieldSpec,
    rows: &[Vec<Value>],
    dim: usize,
) -> Result<Vec<MasaEntry>, InputError> {
    let mut out = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let path = format!("masa[{r}]");
        if row.is_empty() {
            return Err(schema(path, "empty entry"));
        }
        if row.iter().all(Value::is_number) {
            if row.len() != 2 {
                return Err(schema(
                    path,
                    "an operator pair is exactly two indices; quote the entries to give operator coordinates",
                ));
            }
            let i = index_value(&row[0], dim, &format!("{path}[0]"))?;
            let j = index_value(&row[1], dim, &format!("{path}[1]"))?;
            out.push(MasaEntry::AdPair(i, j));
        } else {
            let mut coords = Vec::with_capacity(row.len());
            for (j, v) in row.iter().enumerate() {
                if !v.is_string() {
                    return Err(schema(
                        format!("{path}[{j}]"),
                        "operator coordinates must be strings",
                    ));
                }
                coords.push(scalar_value(spec, v, &format!("{path}[{j}]"))?);
            }
            out.push(MasaEntry::OpCoords(coords));
        }
    }
    Ok(out)
}

fn hint_spec(
    spec: FieldSpec,
    v: Option<&Value>,
    masa_len: Option<usize>,
) -> Result<HintSpec, InputError> {
    let Some(v) = v else {
        return Ok(HintSpec::None);
    };
    let rows = v
        .as_array()
        .ok_or_else(|| schema("eigen_hints", "expected an array"))?;
    if rows.is_empty() {
        return Ok(HintSpec::None);
    }
    if rows.iter().all(Value::is_array) {
        let Some(len) = masa_len else {
            return Err(schema(
                "eigen_hints",
                "per-element hints need a masa to attach to",
            ));
        };
        if rows.len() != len {
            return Err(schema(
                "eigen_hints",
                format!(
                    "expected one list per masa element ({len}), found {}",
                    rows.len()
                ),
            ));
        }
        let mut out = Vec::with_capacity(len);
        for (i, row) in rows.iter().enumerate() {
            let entries = row.as_array().expect("checked above");
            let mut h = Vec::with_capacity(entries.len());
            for (j, v) in entries.iter().enumerate() {
                h.push(scalar_value(spec, v, &format!("eigen_hints[{i}][{j}]"))?);
            }
            out.push(h);
        }
        Ok(HintSpec::PerElement(out))
    } else if rows.iter().any(Value::is_array) {
        Err(schema(
            "eigen_hints",
            "mixing flat hints and per-element lists",
        ))
    } else {
        let mut h = Vec::with_capacity(rows.len());
        for (j, v) in rows.iter().enumerate() {
            h.push(scalar_value(spec, v, &format!("eigen_hints[{j}]"))?);
        }
        Ok(HintSpec::Flat(h))
    }
}

/// Parses one JSON record. Every structural defect is reported eagerly,
/// with the path of the offending value.
pub fn parse_input(text: &str) -> Result<InputDoc, InputError> {
    let raw: RawDoc = serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;

    let order = raw.field.map_or(1, |f| f.order);
    let spec = FieldSpec::new(order).map_err(|e| range("field.order", e.to_string()))?;

    let group = GradingGroup::new(raw.group.map_or_else(Vec::new, |g| g.cyclic_orders));
    let rank = group.rank();

    let eps = match &raw.bicharacter {
        None => Bicharacter::trivial(spec, rank),
        Some(rows) => {
            if rows.len() != rank {
                return Err(schema(
                    "bicharacter",
                    format!("expected one row per group generator ({rank}), found {}", rows.len()),
                ));
            }
            let mut table = Vec::with_capacity(rank);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != rank {
                    return Err(schema(
                        format!("bicharacter[{i}]"),
                        format!("expected {rank} entries, found {}", row.len()),
                    ));
                }
                let mut out = Vec::with_capacity(rank);
                for (j, v) in row.iter().enumerate() {
                    out.push(scalar_value(spec, v, &format!("bicharacter[{i}][{j}]"))?);
                }
                table.push(out);
            }
            Bicharacter::new(spec, table)
        }
    };

    let n = raw.basis.len();
    if n == 0 {
        return Err(schema("basis", "at least one basis element is required"));
    }
    {
        let mut seen = std::collections::BTreeSet::new();
        for (i, name) in raw.basis.iter().enumerate() {
            if !seen.insert(name) {
                return Err(schema(format!("basis[{i}]"), format!("duplicate name {name:?}")));
            }
        }
    }

    let degrees = match raw.degrees {
        None => vec![group.zero(); n],
        Some(rows) => {
            if rows.len() != n {
                return Err(schema(
                    "degrees",
                    format!("expected one degree per basis element ({n}), found {}", rows.len()),
                ));
            }
            let mut out = Vec::with_capacity(n);
            for (i, coords) in rows.into_iter().enumerate() {
                out.push(
                    group
                        .element(coords)
                        .map_err(|e| schema(format!("degrees[{i}]"), e.to_string()))?,
                );
            }
            out
        }
    };

    let arity = raw.arity.unwrap_or(3);
    if arity != 2 && arity != 3 {
        return Err(range(
            "arity",
            format!("only arities 2 and 3 are supported, found {arity}"),
        ));
    }

    let phi = match &raw.phi {
        None => Matrix::identity(spec, n),
        Some(rows) => matrix_value(spec, rows, n, "phi")?,
    };

    let options = raw.options.unwrap_or_default();
    let options = InputOptions {
        talphabeta_wide: options.talphabeta_wide.unwrap_or(false),
        via_dehom: options.via_dehom,
    };

    if arity == 2 {
        for (name, present) in [
            ("flavor", raw.flavor.is_some()),
            ("masa", raw.masa.is_some()),
            ("eigen_hints", raw.eigen_hints.is_some()),
        ] {
            if present {
                return Err(schema(name, "not applicable to a binary record"));
            }
        }
        let mut entries = Vec::with_capacity(raw.structure.len());
        for (r, row) in raw.structure.iter().enumerate() {
            let path = format!("structure[{r}]");
            if row.len() != 4 {
                return Err(schema(
                    path,
                    format!("a binary row is [i, j, l, c], found {} entries", row.len()),
                ));
            }
            let i = index_value(&row[0], n, &format!("{path}[0]"))?;
            let j = index_value(&row[1], n, &format!("{path}[1]"))?;
            let l = index_value(&row[2], n, &format!("{path}[2]"))?;
            let c = scalar_value(spec, &row[3], &format!("{path}[3]"))?;
            entries.push((i, j, l, c));
        }
        let record = BinaryColorAlgebra {
            field: spec,
            group,
            eps,
            basis_names: raw.basis,
            degrees,
            structure: binary_structure_from_entries(entries),
            phi,
        };
        return Ok(InputDoc {
            record: AlgebraRecord::Binary(record),
            masa: None,
            hints: HintSpec::None,
            options,
        });
    }

    let flavor = match &raw.flavor {
        None => Flavor::LeibnizWithAutomorphism,
        Some(s) => Flavor::parse(s).ok_or_else(|| {
            schema(
                "flavor",
                format!(
                    "unknown flavor {s:?}; expected leibniz_with_automorphism, \
                     hom_leibniz, hom_lie_3 or hom_lie_triple"
                ),
            )
        })?,
    };

    let mut entries = Vec::with_capacity(raw.structure.len());
    for (r, row) in raw.structure.iter().enumerate() {
        let path = format!("structure[{r}]");
        if row.len() != 5 {
            return Err(schema(
                path,
                format!("a product row is [i, j, k, l, c], found {} entries", row.len()),
            ));
        }
        let i = index_value(&row[0], n, &format!("{path}[0]"))?;
        let j = index_value(&row[1], n, &format!("{path}[1]"))?;
        let k = index_value(&row[2], n, &format!("{path}[2]"))?;
        let l = index_value(&row[3], n, &format!("{path}[3]"))?;
        let c = scalar_value(spec, &row[4], &format!("{path}[4]"))?;
        entries.push((i, j, k, l, c));
    }

    let masa = match &raw.masa {
        None => None,
        Some(rows) => Some(masa_entries(spec, rows, n)?),
    };
    let hints = hint_spec(spec, raw.eigen_hints.as_ref(), masa.as_ref().map(Vec::len))?;

    let algebra = GradedAlgebra::new(
        spec,
        group,
        eps,
        raw.basis,
        degrees,
        structure_from_entries(entries),
        phi,
        flavor,
    );

    Ok(InputDoc {
        record: AlgebraRecord::Ternary(algebra),
        masa,
        hints,
        options,
    })
}

/// Parses a standalone masa array, the payload of a masa override.
pub fn parse_masa(spec: FieldSpec, text: &str, dim: usize) -> Result<Vec<MasaEntry>, InputError> {
    let rows: Vec<Vec<Value>> =
        serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
    masa_entries(spec, &rows, dim)
}

/// Renders an algebra back into the record shape `parse_input` reads.
/// Deterministic: structure rows follow the stored product order.
pub fn render_ternary(a: &GradedAlgebra) -> Value {
    let spec = a.field();
    let n = a.dim();
    let mut doc = serde_json::Map::new();
    if spec.order() != 1 {
        doc.insert("field".into(), json!({ "order": spec.order() }));
    }
    if a.group().rank() > 0 {
        doc.insert("group".into(), json!({ "cyclic_orders": a.group().orders() }));
        let table: Vec<Vec<String>> = a
            .bicharacter()
            .table()
            .iter()
            .map(|row| row.iter().map(Scalar::to_string).collect())
            .collect();
        doc.insert("bicharacter".into(), json!(table));
        let degrees: Vec<&[i64]> = a.degrees().iter().map(|d| d.coords()).collect();
        doc.insert("degrees".into(), json!(degrees));
    }
    doc.insert("basis".into(), json!(a.basis_names()));
    let mut rows: Vec<Value> = Vec::new();
    for (&(i, j, k), outs) in a.structure() {
        for (l, c) in outs {
            rows.push(json!([i, j, k, l, c.to_string()]));
        }
    }
    doc.insert("structure".into(), Value::Array(rows));
    if *a.phi() != Matrix::identity(spec, n) {
        let phi: Vec<Vec<String>> = (0..n)
            .map(|i| (0..n).map(|j| a.phi().at(i, j).to_string()).collect())
            .collect();
        doc.insert("phi".into(), json!(phi));
    }
    doc.insert("flavor".into(), json!(a.flavor().as_str()));
    Value::Object(doc)
}
