//! JSON region and solid files, CSV rule files, trim-point files and moment
//! tables.
//!
//! Region file:
//!
//! ```json
//! {"loops": [[{"degree": 2, "points": [[1, 0], [1, 1], [0, 1]], "weights": [1, 0.7071, 1]}, ...]]}
//! ```
//!
//! Solid file:
//!
//! ```json
//! {"closed": true, "patches": [{"degree_u": 1, "degree_v": 1,
//!   "points": [[[0, 0, 0], [0, 1, 0]], [[1, 0, 0], [1, 1, 0]]],
//!   "weights": [[1, 1], [1, 1]], "trim_loops": [[{curve in (u, v)}, ...]]}]}
//! ```
//!
//! Omitted `weights` mean all ones; omitted `trim_loops` mean untrimmed.
//! Numbers are written with 17 significant digits so that files reload
//! bit for bit.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::bezier::{Point2, Point3, RationalBezierCurve, RationalBezierPatch};
use crate::error::{Error, Result};
use crate::moments::MomentVector;
use crate::planar::{PlanarRegion, Provenance2D, Rule2D};
use crate::surface::{SurfaceProvenance, SurfaceRule, TrimmedPatch};
use crate::volume::{Provenance3D, Rule3D, SolidModel};

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: if path.is_empty() {
            "$".into()
        } else {
            path.into()
        },
        message: message.into(),
    }
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema(path, "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(schema(path, format!("unknown field '{k}'")));
    }
    Ok(obj)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(path, format!("missing field '{key}'")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| schema(path, "expected an array"))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    match v.as_f64() {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(schema(path, format!("expected a finite number, found {v}"))),
    }
}

fn count(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| schema(path, format!("expected a nonnegative integer, found {v}")))
}

fn coords<const D: usize>(v: &Value, path: &str) -> Result<[f64; D]> {
    let a = array(v, path)?;
    if a.len() != D {
        return Err(schema(
            path,
            format!("expected {D} coordinates, found {}", a.len()),
        ));
    }
    let mut out = [0.0; D];
    for (k, c) in a.iter().enumerate() {
        out[k] = number(c, &format!("{path}[{k}]"))?;
    }
    Ok(out)
}

fn weight(v: &Value, path: &str) -> Result<f64> {
    let w = number(v, path)?;
    if w <= 0.0 {
        return Err(schema(path, format!("weight must be positive, found {w}")));
    }
    Ok(w)
}

fn parse_curve(v: &Value, path: &str) -> Result<RationalBezierCurve> {
    let obj = object(v, path, &["degree", "points", "weights"])?;
    let degree = count(field(obj, "degree", path)?, &format!("{path}.degree"))?;
    let pp = format!("{path}.points");
    let raw = array(field(obj, "points", path)?, &pp)?;
    if raw.len() != degree + 1 {
        return Err(schema(
            &pp,
            format!(
                "degree {degree} needs {} points, found {}",
                degree + 1,
                raw.len()
            ),
        ));
    }
    let points = raw
        .iter()
        .enumerate()
        .map(|(j, p)| coords::<2>(p, &format!("{pp}[{j}]")).map(|c| Point2::new(c[0], c[1])))
        .collect::<Result<Vec<_>>>()?;
    let weights = match obj.get("weights") {
        None => vec![1.0; degree + 1],
        Some(w) => {
            let wp = format!("{path}.weights");
            let raw = array(w, &wp)?;
            if raw.len() != degree + 1 {
                return Err(schema(
                    &wp,
                    format!("expected {} weights, found {}", degree + 1, raw.len()),
                ));
            }
            raw.iter()
                .enumerate()
                .map(|(j, w)| weight(w, &format!("{wp}[{j}]")))
                .collect::<Result<Vec<_>>>()?
        }
    };
    RationalBezierCurve::new(points, weights).map_err(|e| schema(path, e.to_string()))
}

fn parse_loops(v: &Value, path: &str) -> Result<Vec<Vec<RationalBezierCurve>>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let lp = format!("{path}[{k}]");
            array(l, &lp)?
                .iter()
                .enumerate()
                .map(|(i, c)| parse_curve(c, &format!("{lp}[{i}]")))
                .collect()
        })
        .collect()
}

fn loop_error(path: &str, e: Error) -> Error {
    match e {
        Error::OpenLoop { loop_index, .. } => {
            schema(&format!("{path}[{loop_index}]"), e.to_string())
        }
        other => schema(path, other.to_string()),
    }
}

pub fn parse_region(text: &str) -> Result<PlanarRegion> {
    let doc: Value = serde_json::from_str(text)?;
    region_from_value(&doc)
}

fn region_from_value(doc: &Value) -> Result<PlanarRegion> {
    let obj = object(doc, "", &["loops"])?;
    let loops = parse_loops(field(obj, "loops", "")?, "loops")?;
    PlanarRegion::new(loops).map_err(|e| loop_error("loops", e))
}

fn parse_patch(v: &Value, path: &str) -> Result<TrimmedPatch> {
    let obj = object(
        v,
        path,
        &["degree_u", "degree_v", "points", "weights", "trim_loops"],
    )?;
    let m = count(field(obj, "degree_u", path)?, &format!("{path}.degree_u"))?;
    let n = count(field(obj, "degree_v", path)?, &format!("{path}.degree_v"))?;
    let grid = |key: &str| -> Result<Option<Vec<&Value>>> {
        let Some(v) = obj.get(key) else {
            return Ok(None);
        };
        let gp = format!("{path}.{key}");
        let rows = array(v, &gp)?;
        if rows.len() != m + 1 {
            return Err(schema(
                &gp,
                format!("degree_u {m} needs {} rows, found {}", m + 1, rows.len()),
            ));
        }
        let mut cells = Vec::with_capacity((m + 1) * (n + 1));
        for (i, row) in rows.iter().enumerate() {
            let rp = format!("{gp}[{i}]");
            let row = array(row, &rp)?;
            if row.len() != n + 1 {
                return Err(schema(
                    &rp,
                    format!("degree_v {n} needs {} entries, found {}", n + 1, row.len()),
                ));
            }
            cells.extend(row.iter());
        }
        Ok(Some(cells))
    };
    let pp = format!("{path}.points");
    let cells = grid("points")?.ok_or_else(|| schema(path, "missing field 'points'"))?;
    let mut points = vec![Vec::with_capacity(n + 1); m + 1];
    for (idx, c) in cells.into_iter().enumerate() {
        let (i, j) = (idx / (n + 1), idx % (n + 1));
        let p = coords::<3>(c, &format!("{pp}[{i}][{j}]"))?;
        points[i].push(Point3::new(p[0], p[1], p[2]));
    }
    let weights = match grid("weights")? {
        None => vec![vec![1.0; n + 1]; m + 1],
        Some(cells) => {
            let mut w = vec![Vec::with_capacity(n + 1); m + 1];
            for (idx, c) in cells.into_iter().enumerate() {
                let (i, j) = (idx / (n + 1), idx % (n + 1));
                w[i].push(weight(c, &format!("{path}.weights[{i}][{j}]"))?);
            }
            w
        }
    };
    let patch =
        RationalBezierPatch::new(points, weights).map_err(|e| schema(path, e.to_string()))?;
    let tp = format!("{path}.trim_loops");
    let loops = match obj.get("trim_loops") {
        None => Vec::new(),
        Some(v) => parse_loops(v, &tp)?,
    };
    TrimmedPatch::new(patch, loops).map_err(|e| loop_error(&tp, e))
}

pub fn parse_solid(text: &str) -> Result<SolidModel> {
    let doc: Value = serde_json::from_str(text)?;
    solid_from_value(&doc)
}

fn solid_from_value(doc: &Value) -> Result<SolidModel> {
    let obj = object(doc, "", &["closed", "patches"])?;
    let closed = field(obj, "closed", "")?
        .as_bool()
        .ok_or_else(|| schema("closed", "expected true or false"))?;
    let patches = array(field(obj, "patches", "")?, "patches")?
        .iter()
        .enumerate()
        .map(|(i, p)| parse_patch(p, &format!("patches[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(SolidModel::new(patches, closed))
}

/// A region or a solid, told apart by their top-level keys.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Region(PlanarRegion),
    Solid(SolidModel),
}

pub fn parse_model(text: &str) -> Result<Model> {
    let doc: Value = serde_json::from_str(text)?;
    let obj = doc
        .as_object()
        .ok_or_else(|| schema("", "expected an object"))?;
    if obj.contains_key("loops") {
        Ok(Model::Region(region_from_value(&doc)?))
    } else if obj.contains_key("patches") {
        Ok(Model::Solid(solid_from_value(&doc)?))
    } else {
        Err(schema(
            "",
            "expected a region ('loops') or a solid ('patches')",
        ))
    }
}

pub fn load_region(path: impl AsRef<Path>) -> Result<PlanarRegion> {
    parse_region(&fs::read_to_string(path)?)
}

pub fn load_solid(path: impl AsRef<Path>) -> Result<SolidModel> {
    parse_solid(&fs::read_to_string(path)?)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    parse_model(&fs::read_to_string(path)?)
}

fn curve_value(c: &RationalBezierCurve) -> Value {
    json!({
        "degree": c.degree(),
        "points": c.points().iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
        "weights": c.weights(),
    })
}

pub fn loops_to_json(loops: &[Vec<RationalBezierCurve>]) -> Value {
    Value::Array(
        loops
            .iter()
            .map(|l| Value::Array(l.iter().map(curve_value).collect()))
            .collect(),
    )
}

pub fn region_to_json(region: &PlanarRegion) -> Value {
    json!({ "loops": loops_to_json(region.loops()) })
}

pub fn solid_to_json(solid: &SolidModel) -> Value {
    let patches: Vec<Value> = solid
        .patches
        .iter()
        .map(|tp| {
            let p = tp.patch();
            let mut v = json!({
                "degree_u": p.degree_u(),
                "degree_v": p.degree_v(),
                "points": p.points().iter()
                    .map(|row| row.iter().map(|q| [q.x, q.y, q.z]).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "weights": p.weights(),
            });
            if tp.is_trimmed() {
                v["trim_loops"] = loops_to_json(tp.trim_loops());
            }
            v
        })
        .collect();
    json!({ "closed": solid.closed, "patches": patches })
}

pub fn save_json(value: &Value, path: impl AsRef<Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// 17 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rules that serialise to a CSV table, one row per point.
pub trait CsvRule {
    fn header() -> &'static [&'static str];
    fn rows(&self) -> Vec<Vec<String>>;
}

impl CsvRule for Rule2D {
    fn header() -> &'static [&'static str] {
        &["x", "y", "weight", "curve", "q", "zeta"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.points
            .iter()
            .zip(&self.weights)
            .zip(&self.provenance)
            .map(|((p, &w), o)| {
                vec![
                    format_number(p.x),
                    format_number(p.y),
                    format_number(w),
                    o.curve.to_string(),
                    o.q.to_string(),
                    o.zeta.to_string(),
                ]
            })
            .collect()
    }
}

impl CsvRule for SurfaceRule {
    fn header() -> &'static [&'static str] {
        &[
            "x", "y", "z", "weight", "u", "v", "patch", "loop", "segment", "mu", "eta",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.points
            .iter()
            .zip(&self.weights)
            .zip(self.params.iter().zip(&self.provenance))
            .map(|((p, &w), (uv, o))| {
                vec![
                    format_number(p.x),
                    format_number(p.y),
                    format_number(p.z),
                    format_number(w),
                    format_number(uv.x),
                    format_number(uv.y),
                    o.patch.to_string(),
                    o.loop_index.to_string(),
                    o.segment.to_string(),
                    o.mu.to_string(),
                    o.eta.to_string(),
                ]
            })
            .collect()
    }
}

impl CsvRule for Rule3D {
    fn header() -> &'static [&'static str] {
        &["x", "y", "z", "weight", "patch", "sigma", "psi"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.points
            .iter()
            .zip(&self.weights)
            .zip(&self.provenance)
            .map(|((p, &w), o)| {
                vec![
                    format_number(p.x),
                    format_number(p.y),
                    format_number(p.z),
                    format_number(w),
                    o.patch.to_string(),
                    o.sigma.to_string(),
                    o.psi.to_string(),
                ]
            })
            .collect()
    }
}

pub fn write_rule<R: CsvRule, W: Write>(rule: &R, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::header())?;
    for row in rule.rows() {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_rule<R: CsvRule>(rule: &R, path: impl AsRef<Path>) -> Result<()> {
    write_rule(rule, fs::File::create(path)?)
}

/// A rule read back from CSV; the header decides the kind.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleFile {
    Planar(Rule2D),
    Surface(SurfaceRule),
    Volume(Rule3D),
}

impl RuleFile {
    pub fn len(&self) -> usize {
        match self {
            RuleFile::Planar(r) => r.len(),
            RuleFile::Surface(r) => r.len(),
            RuleFile::Volume(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn integrate_expr(&self, e: &crate::expr::Expr) -> Result<f64> {
        match self {
            RuleFile::Planar(r) => r.integrate_expr(e),
            RuleFile::Surface(r) => r.integrate_expr(e),
            RuleFile::Volume(r) => r.integrate_expr(e),
        }
    }
}

fn cell<T: std::str::FromStr>(
    record: &csv::StringRecord,
    k: usize,
    line: usize,
    name: &str,
) -> Result<T> {
    let raw = record.get(k).unwrap_or("");
    raw.trim().parse().map_err(|_| {
        schema(
            &format!("line {line}, column '{name}'"),
            format!("cannot parse '{raw}'"),
        )
    })
}

pub fn read_rule<R: Read>(input: R) -> Result<RuleFile> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let names: Vec<&str> = header.iter().map(String::as_str).collect();
    let records = reader
        .records()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let rows = records.iter().enumerate().map(|(i, r)| (i + 2, r));

    if names == Rule2D::header() {
        let mut rule = Rule2D::default();
        for (line, r) in rows {
            let h = Rule2D::header();
            rule.points.push(Point2::new(
                cell(r, 0, line, h[0])?,
                cell(r, 1, line, h[1])?,
            ));
            rule.weights.push(cell(r, 2, line, h[2])?);
            rule.provenance.push(Provenance2D {
                curve: cell(r, 3, line, h[3])?,
                q: cell(r, 4, line, h[4])?,
                zeta: cell(r, 5, line, h[5])?,
            });
        }
        Ok(RuleFile::Planar(rule))
    } else if names == SurfaceRule::header() {
        let mut rule = SurfaceRule::default();
        for (line, r) in rows {
            let h = SurfaceRule::header();
            rule.points.push(Point3::new(
                cell(r, 0, line, h[0])?,
                cell(r, 1, line, h[1])?,
                cell(r, 2, line, h[2])?,
            ));
            rule.weights.push(cell(r, 3, line, h[3])?);
            rule.params.push(Point2::new(
                cell(r, 4, line, h[4])?,
                cell(r, 5, line, h[5])?,
            ));
            rule.provenance.push(SurfaceProvenance {
                patch: cell(r, 6, line, h[6])?,
                loop_index: cell(r, 7, line, h[7])?,
                segment: cell(r, 8, line, h[8])?,
                mu: cell(r, 9, line, h[9])?,
                eta: cell(r, 10, line, h[10])?,
            });
        }
        Ok(RuleFile::Surface(rule))
    } else if names == Rule3D::header() {
        let mut rule = Rule3D::default();
        for (line, r) in rows {
            let h = Rule3D::header();
            rule.points.push(Point3::new(
                cell(r, 0, line, h[0])?,
                cell(r, 1, line, h[1])?,
                cell(r, 2, line, h[2])?,
            ));
            rule.weights.push(cell(r, 3, line, h[3])?);
            rule.provenance.push(Provenance3D {
                patch: cell(r, 4, line, h[4])?,
                sigma: cell(r, 5, line, h[5])?,
                psi: cell(r, 6, line, h[6])?,
            });
        }
        Ok(RuleFile::Volume(rule))
    } else {
        Err(schema(
            "line 1",
            format!("unrecognised rule header '{}'", header.join(",")),
        ))
    }
}

pub fn load_rule(path: impl AsRef<Path>) -> Result<RuleFile> {
    read_rule(fs::File::open(path)?)
}

/// Ordered `(u, v)` point lists, one per blank-line separated block. Lines
/// starting with `#` are comments; a `u,v` header line is allowed at the top
/// of a block.
pub fn parse_trim_points(text: &str) -> Result<Vec<Vec<Point2>>> {
    let mut blocks: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            if !blocks.last().expect("nonempty").is_empty() {
                blocks.push(Vec::new());
            }
        } else if !line.trim_start().starts_with('#') {
            blocks.last_mut().expect("nonempty").push((i + 1, line));
        }
    }
    blocks.retain(|b| !b.is_empty());

    blocks
        .iter()
        .map(|block| {
            let mut lines = block.as_slice();
            if let Some((_, first)) = lines.first() {
                let cols: Vec<&str> = first.split(',').map(str::trim).collect();
                if cols == ["u", "v"] {
                    lines = &lines[1..];
                }
            }
            let body: String = lines.iter().map(|(_, l)| format!("{l}\n")).collect();
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(false)
                .trim(csv::Trim::All)
                .from_reader(body.as_bytes());
            reader
                .records()
                .zip(lines)
                .map(|(r, &(line, _))| {
                    let r = r?;
                    if r.len() != 2 {
                        return Err(schema(
                            &format!("line {line}"),
                            format!("expected 2 columns, found {}", r.len()),
                        ));
                    }
                    let u: f64 = cell(&r, 0, line, "u")?;
                    let v: f64 = cell(&r, 1, line, "v")?;
                    if !(u.is_finite() && v.is_finite()) {
                        return Err(schema(
                            &format!("line {line}"),
                            "coordinates must be finite",
                        ));
                    }
                    Ok(Point2::new(u, v))
                })
                .collect()
        })
        .collect()
}

pub fn load_trim_points(path: impl AsRef<Path>) -> Result<Vec<Vec<Point2>>> {
    parse_trim_points(&fs::read_to_string(path)?)
}

/// One row per monomial: exponents, then the moment.
pub fn write_moments<W: Write>(m: &MomentVector, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let names: &[&str] = if m.dim == 2 {
        &["a", "b", "value"]
    } else {
        &["a", "b", "c", "value"]
    };
    w.write_record(names)?;
    for (e, v) in m.exponents.iter().zip(&m.values) {
        let mut row: Vec<String> = e[..m.dim].iter().map(u32::to_string).collect();
        row.push(format_number(*v));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
