//! Text exporters for meshes and polylines. Output is byte-deterministic:
//! floats use nine significant digits, `-0` prints as `0`, and nothing
//! depends on the locale or the clock.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::mesh::{MeshBundle, MeshStats, Polyline, Projection, RunConfig};
use crate::singular::SINGULAR_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportFormat {
    Obj,
    Ply,
    Csv,
    JsonMeta,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Obj => "obj",
            ExportFormat::Ply => "ply",
            ExportFormat::Csv => "csv",
            ExportFormat::JsonMeta => "json",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "obj" => Ok(ExportFormat::Obj),
            "ply" | "ply_ascii" => Ok(ExportFormat::Ply),
            "csv" => Ok(ExportFormat::Csv),
            "json" | "json_meta" | "meta" => Ok(ExportFormat::JsonMeta),
            other => Err(Error::Config(format!("unknown export format `{other}`"))),
        }
    }
}

/// `printf("%.9g")`-style formatting.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn region_name(bundle: &MeshBundle, k: usize) -> &'static str {
    let meta = &bundle.vertex_meta[k];
    match meta.region {
        Some(r) => r.as_str(),
        None if meta.residual.abs() <= SINGULAR_TOL => "singular",
        None => "regular",
    }
}

pub fn render_obj(bundle: &MeshBundle) -> String {
    let mut s = String::new();
    for v in &bundle.vertices {
        let _ = writeln!(s, "v {} {} {}", fmt_float(v[0]), fmt_float(v[1]), fmt_float(v[2]));
    }
    for t in &bundle.triangles {
        let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    for line in &bundle.polylines {
        s.push('l');
        for i in line {
            let _ = write!(s, " {}", i + 1);
        }
        s.push('\n');
    }
    s
}

pub fn render_ply(bundle: &MeshBundle) -> String {
    let edges: Vec<[usize; 2]> = bundle
        .polylines
        .iter()
        .flat_map(|l| l.windows(2).map(|w| [w[0], w[1]]))
        .collect();
    let mut s = String::new();
    s.push_str("ply\nformat ascii 1.0\ncomment catenoid mesh\n");
    let _ = writeln!(s, "element vertex {}", bundle.vertices.len());
    s.push_str("property float x\nproperty float y\nproperty float z\n");
    let _ = writeln!(s, "element face {}", bundle.triangles.len());
    s.push_str("property list uchar int vertex_indices\n");
    if !edges.is_empty() {
        let _ = writeln!(s, "element edge {}", edges.len());
        s.push_str("property int vertex1\nproperty int vertex2\n");
    }
    s.push_str("end_header\n");
    for v in &bundle.vertices {
        let _ = writeln!(s, "{} {} {}", fmt_float(v[0]), fmt_float(v[1]), fmt_float(v[2]));
    }
    for t in &bundle.triangles {
        let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
    }
    for e in &edges {
        let _ = writeln!(s, "{} {}", e[0], e[1]);
    }
    s
}

/// One row per vertex: `r,theta,x0,x1,x2,x3[,px,py,pz],region,residual`.
pub fn render_csv(bundle: &MeshBundle) -> String {
    let projected = bundle.provenance.projection != Projection::None;
    let mut s = String::from("r,theta,x0,x1,x2,x3");
    if projected {
        s.push_str(",px,py,pz");
    }
    s.push_str(",region,residual\n");
    for (k, meta) in bundle.vertex_meta.iter().enumerate() {
        let p = bundle.ambient[k];
        let mut row = [meta.r, meta.theta, p.t, p.x, p.y, p.z]
            .iter()
            .map(|&x| fmt_float(x))
            .collect::<Vec<_>>();
        if projected {
            row.extend(bundle.vertices[k].iter().map(|&x| fmt_float(x)));
        }
        row.push(region_name(bundle, k).to_string());
        row.push(fmt_float(meta.residual));
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Planar curves: `param,x,y`; ambient curves: `param,x0,x1,x2,x3,px,py,pz`.
pub fn render_polyline_csv(poly: &Polyline) -> String {
    let mut s = String::new();
    if poly.ambient.is_empty() {
        s.push_str("param,x,y\n");
        for (t, c) in poly.params.iter().zip(&poly.coords) {
            let _ = writeln!(s, "{},{},{}", fmt_float(*t), fmt_float(c[0]), fmt_float(c[1]));
        }
    } else {
        s.push_str("param,x0,x1,x2,x3,px,py,pz\n");
        for ((t, p), c) in poly.params.iter().zip(&poly.ambient).zip(&poly.coords) {
            let row = [*t, p.t, p.x, p.y, p.z, c[0], c[1], c[2]]
                .iter()
                .map(|&x| fmt_float(x))
                .collect::<Vec<_>>();
            s.push_str(&row.join(","));
            s.push('\n');
        }
    }
    s
}

pub fn render_polyline_obj(poly: &Polyline) -> String {
    let mut s = String::new();
    for c in &poly.coords {
        let _ = writeln!(s, "v {} {} {}", fmt_float(c[0]), fmt_float(c[1]), fmt_float(c[2]));
    }
    if !poly.coords.is_empty() {
        s.push('l');
        for i in 0..poly.coords.len() {
            let _ = write!(s, " {}", i + 1);
        }
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    /// File name relative to the metadata document.
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LibraryInfo {
    pub name: String,
    pub version: String,
}

impl Default for LibraryInfo {
    fn default() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaDocument {
    pub library: LibraryInfo,
    pub config: Option<RunConfig>,
    pub stats: Option<MeshStats>,
    pub files: Vec<FileRecord>,
}

impl MetaDocument {
    pub fn new(config: Option<RunConfig>, stats: Option<MeshStats>, files: Vec<FileRecord>) -> Self {
        Self {
            library: LibraryInfo::default(),
            config,
            stats,
            files,
        }
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("metadata serializes");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `contents` to `path` and returns its record.
pub fn write_file(path: &Path, contents: &str) -> Result<FileRecord> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))?;
    Ok(FileRecord {
        name: path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        bytes: contents.len(),
        sha256: sha256_hex(contents.as_bytes()),
    })
}

pub fn render_bundle(bundle: &MeshBundle, format: ExportFormat) -> String {
    match format {
        ExportFormat::Obj => render_obj(bundle),
        ExportFormat::Ply => render_ply(bundle),
        ExportFormat::Csv => render_csv(bundle),
        ExportFormat::JsonMeta => MetaDocument::new(
            Some(bundle.provenance.config.clone()),
            Some(bundle.provenance.stats),
            Vec::new(),
        )
        .render(),
    }
}

pub fn export_bundle(bundle: &MeshBundle, format: ExportFormat, path: &Path) -> Result<FileRecord> {
    write_file(path, &render_bundle(bundle, format))
}

pub fn render_polyline(poly: &Polyline, format: ExportFormat) -> Result<String> {
    match format {
        ExportFormat::Csv => Ok(render_polyline_csv(poly)),
        ExportFormat::Obj => Ok(render_polyline_obj(poly)),
        other => Err(Error::Config(format!(
            "polylines export to CSV or OBJ, not {}",
            other.extension()
        ))),
    }
}

pub fn export_polyline(poly: &Polyline, format: ExportFormat, path: &Path) -> Result<FileRecord> {
    write_file(path, &render_polyline(poly, format)?)
}
