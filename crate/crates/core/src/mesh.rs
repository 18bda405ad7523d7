//! Domain sampling and triangulation, plus polylines for the curves that
//! accompany the surfaces (trochoids, light-like lines, singular images and
//! hyperbola slices).

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catenoid::{alpha, check_m, components_i, components_ii, Family, SurfaceSpec};
use crate::error::{Error, Result};
use crate::export::ExportFormat;
use crate::lorentz::{involution_iota, minkowski_inner, Point4};
use crate::projection::{hollowball_project, solid_torus_project};
use crate::singular::{classify_region, light_lines, singular_residual, RegionLabel};
use crate::trochoid::{fit_hypotrochoid, gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Projection {
    Hollowball,
    SolidTorus,
    /// Raw spatial coordinates `(x, y, z)`; the full point goes to CSV.
    None,
}

impl Projection {
    pub fn name(self) -> &'static str {
        match self {
            Projection::Hollowball => "hollowball",
            Projection::SolidTorus => "solid_torus",
            Projection::None => "none",
        }
    }

    pub fn default_for(family: Family) -> Self {
        match family {
            Family::AdS => Projection::SolidTorus,
            _ => Projection::Hollowball,
        }
    }

    /// Maps a point of the ambient quadric to 3-space.
    pub fn apply(self, p: &Point4) -> Result<[f64; 3]> {
        match self {
            Projection::Hollowball => hollowball_project(p),
            Projection::SolidTorus => solid_torus_project(p),
            Projection::None => Ok([p.x, p.y, p.z]),
        }
    }
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Projection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "hollowball" => Ok(Projection::Hollowball),
            "solid_torus" | "torus" => Ok(Projection::SolidTorus),
            "none" | "raw" => Ok(Projection::None),
            other => Err(Error::Config(format!("unknown projection `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Quadric membership, relative to `max(1, |p|^2)`.
    pub membership: f64,
    /// Triangles with smaller projected area are dropped.
    pub degenerate_area: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            membership: 1e-8,
            degenerate_area: 1e-14,
        }
    }
}

/// Everything that determines a mesh and its export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub family: Family,
    pub m: u32,
    /// Bounds on `|r|`; the grid is uniform in `log|r|`. Ignored for AdS,
    /// whose first coordinate is periodic on `[0, 2 pi)`.
    pub r_min: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub projection: Projection,
    pub format: ExportFormat,
    pub output: Option<PathBuf>,
    pub include_lines: bool,
    /// Type I: also mesh the `r < 0` sheet. Type II with even `m`: append the
    /// image under the involution `iota`.
    pub include_second_sheet: bool,
    /// Light-like lines are drawn for `|t| <= line_t_max`.
    pub line_t_max: f64,
    pub refine_singular: bool,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn new(family: Family, m: u32) -> Self {
        Self {
            family,
            m,
            r_min: (-4.0f64).exp(),
            r_max: 4.0f64.exp(),
            n_r: 64,
            n_theta: 128,
            projection: Projection::default_for(family),
            format: ExportFormat::Obj,
            output: None,
            include_lines: false,
            include_second_sheet: false,
            line_t_max: 4.0,
            refine_singular: true,
            tolerances: Tolerances::default(),
        }
    }

    pub fn spec(&self) -> Result<SurfaceSpec> {
        SurfaceSpec::new(self.family, self.m)
    }

    pub fn validate(&self) -> Result<()> {
        check_m(self.m)?;
        if self.n_r < 2 || self.n_theta < 2 {
            return Err(Error::Config(format!(
                "grid must be at least 2 x 2 (got {} x {})",
                self.n_r, self.n_theta
            )));
        }
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(Error::Config(format!(
                "need 0 < r_min < r_max < inf (got {}, {})",
                self.r_min, self.r_max
            )));
        }
        match (self.projection, self.family) {
            (Projection::Hollowball, Family::AdS) => {
                return Err(Error::Config(
                    "the hollowball model is for de Sitter space; use solid_torus for AdS".into(),
                ))
            }
            (Projection::SolidTorus, Family::I | Family::II) => {
                return Err(Error::Config(
                    "the solid torus model is for anti-de Sitter space; use hollowball".into(),
                ))
            }
            _ => {}
        }
        if self.projection == Projection::None && self.format != ExportFormat::Csv {
            return Err(Error::Config(
                "projection `none` only supports CSV output".into(),
            ));
        }
        if self.include_lines && self.family == Family::AdS {
            return Err(Error::Config("the AdS family has no light-like lines".into()));
        }
        if !(self.line_t_max > 0.0 && self.line_t_max.is_finite()) {
            return Err(Error::Config(format!("bad line range {}", self.line_t_max)));
        }
        let t = self.tolerances;
        if !(t.membership > 0.0 && t.degenerate_area >= 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexMeta {
    /// Domain coordinates; for AdS `r` holds the periodic parameter `s`.
    pub r: f64,
    pub theta: f64,
    /// Type I only.
    pub region: Option<RegionLabel>,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshStats {
    pub sheets: usize,
    pub grid_vertices: usize,
    pub refined_cells: usize,
    pub transition_cells: usize,
    pub midpoint_vertices: usize,
    pub centre_vertices: usize,
    /// Triangles produced by fans around cell centres (before dropping).
    pub fan_triangles: usize,
    pub dropped_triangles: usize,
    pub line_vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub spec: SurfaceSpec,
    pub projection: Projection,
    pub config: RunConfig,
    pub stats: MeshStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshBundle {
    pub vertices: Vec<[f64; 3]>,
    pub ambient: Vec<Point4>,
    pub triangles: Vec<[usize; 3]>,
    pub vertex_meta: Vec<VertexMeta>,
    /// Vertex index chains (light-like lines).
    pub polylines: Vec<Vec<usize>>,
    pub provenance: Provenance,
}

impl MeshBundle {
    /// Checks index validity and metadata length.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if self.vertex_meta.len() != n || self.ambient.len() != n {
            return Err(Error::Config("per-vertex arrays differ in length".into()));
        }
        let bad = self
            .triangles
            .iter()
            .flatten()
            .chain(self.polylines.iter().flatten())
            .any(|&i| i >= n);
        if bad {
            return Err(Error::Config("mesh index out of range".into()));
        }
        Ok(())
    }
}

pub fn triangle_area(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let x = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sheet {
    Primary,
    NegativeR,
    Iota,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Edge {
    /// `(i, j) -> (i + 1, j)`.
    U(usize, usize),
    /// `(i, j) -> (i, j + 1)`.
    V(usize, usize),
}

struct Sampler<'a> {
    spec: SurfaceSpec,
    config: &'a RunConfig,
}

struct Sample {
    coords: [f64; 3],
    ambient: Point4,
    meta: VertexMeta,
}

impl Sampler<'_> {
    fn eval(&self, sheet: Sheet, u: f64, theta: f64) -> Result<Sample> {
        let m = self.spec.m;
        let (ambient, meta) = match self.spec.family {
            Family::AdS => {
                let p = self.spec.evaluate(u, theta)?;
                let res = (m as f64 * theta).cos();
                (p, VertexMeta { r: u, theta, region: None, residual: res })
            }
            Family::I => {
                let r = if sheet == Sheet::NegativeR { -u.exp() } else { u.exp() };
                let p = components_i(m, r, theta)?;
                let res = singular_residual(self.spec, r, theta)?;
                let region = classify_region(m, r, theta)?;
                (p, VertexMeta { r, theta, region: Some(region), residual: res })
            }
            Family::II => {
                let r = u.exp();
                let mut p = components_ii(m, r, theta)?;
                if sheet == Sheet::Iota {
                    p = involution_iota(&p);
                }
                let res = singular_residual(self.spec, r, theta)?;
                (p, VertexMeta { r, theta, region: None, residual: res })
            }
        };
        self.check_membership(&ambient)?;
        Ok(Sample {
            coords: self.config.projection.apply(&ambient)?,
            ambient,
            meta,
        })
    }

    fn check_membership(&self, p: &Point4) -> Result<()> {
        let sig = self.spec.family.signature();
        let scale = (p.t * p.t + p.x * p.x + p.y * p.y + p.z * p.z).max(1.0);
        let residual = (minkowski_inner(p, p, sig) - sig.curvature_level()).abs();
        if !(residual <= self.config.tolerances.membership * scale) {
            return Err(Error::OffSurface {
                space: sig.space_name(),
                residual,
            });
        }
        Ok(())
    }
}

/// Samples the configured surface on its grid and triangulates it.
pub fn sample_and_mesh(config: &RunConfig) -> Result<MeshBundle> {
    config.validate()?;
    let spec = config.spec()?;
    let sheets: Vec<Sheet> = match (spec.family, config.include_second_sheet) {
        (Family::I, true) => vec![Sheet::Primary, Sheet::NegativeR],
        (Family::II, true) if spec.m % 2 == 0 => vec![Sheet::Primary, Sheet::Iota],
        _ => vec![Sheet::Primary],
    };
    let sampler = Sampler { spec, config };
    let mut bundle = MeshBundle {
        vertices: Vec::new(),
        ambient: Vec::new(),
        triangles: Vec::new(),
        vertex_meta: Vec::new(),
        polylines: Vec::new(),
        provenance: Provenance {
            spec,
            projection: config.projection,
            config: config.clone(),
            stats: MeshStats {
                sheets: sheets.len(),
                ..MeshStats::default()
            },
        },
    };
    for sheet in sheets {
        mesh_sheet(&sampler, sheet, &mut bundle)?;
    }
    if config.include_lines {
        add_lines(spec, config, &mut bundle)?;
    }
    log::debug!(
        "meshed {spec}: {} vertices, {} triangles",
        bundle.vertices.len(),
        bundle.triangles.len()
    );
    Ok(bundle)
}

fn mesh_sheet(sampler: &Sampler<'_>, sheet: Sheet, out: &mut MeshBundle) -> Result<()> {
    let config = sampler.config;
    let (n_u, n_t) = (config.n_r, config.n_theta);
    let periodic_u = sampler.spec.family == Family::AdS;
    let (u0, du) = if periodic_u {
        (0.0, TAU / n_u as f64)
    } else {
        let lo = config.r_min.ln();
        (lo, (config.r_max.ln() - lo) / (n_u - 1) as f64)
    };
    let dt = TAU / n_t as f64;
    let n_cells_u = if periodic_u { n_u } else { n_u - 1 };
    let grid_index = |i: usize, j: usize| (i % n_u) * n_t + j % n_t;

    // Grid vertices.
    let coords: Vec<(f64, f64)> = (0..n_u)
        .flat_map(|i| (0..n_t).map(move |j| (u0 + du * i as f64, dt * j as f64)))
        .collect();
    let grid: Vec<Sample> = coords
        .par_iter()
        .map(|&(u, t)| sampler.eval(sheet, u, t))
        .collect::<Result<_>>()?;

    // Cells whose corners straddle the singular set.
    let positive = |i: usize, j: usize| grid[grid_index(i, j)].meta.residual > 0.0;
    let mut refined = BTreeSet::new();
    if config.refine_singular {
        for i in 0..n_cells_u {
            for j in 0..n_t {
                let c = [
                    positive(i, j),
                    positive(i + 1, j),
                    positive(i + 1, j + 1),
                    positive(i, j + 1),
                ];
                if c.iter().any(|&x| x != c[0]) {
                    refined.insert((i, j));
                }
            }
        }
    }
    let cell_edges = |i: usize, j: usize| {
        [
            Edge::U(i % n_u, j % n_t),
            Edge::V((i + 1) % n_u, j % n_t),
            Edge::U(i % n_u, (j + 1) % n_t),
            Edge::V(i % n_u, j % n_t),
        ]
    };
    let split: BTreeSet<Edge> = refined
        .iter()
        .flat_map(|&(i, j)| cell_edges(i, j))
        .collect();
    let mut centred: Vec<(usize, usize)> = Vec::new();
    for i in 0..n_cells_u {
        for j in 0..n_t {
            if refined.contains(&(i, j)) || cell_edges(i, j).iter().any(|e| split.contains(e)) {
                centred.push((i, j));
            }
        }
    }

    let edge_point = |e: &Edge| match *e {
        Edge::U(i, j) => (u0 + du * (i as f64 + 0.5), dt * j as f64),
        Edge::V(i, j) => (u0 + du * i as f64, dt * (j as f64 + 0.5)),
    };
    let mids: Vec<Sample> = split
        .par_iter()
        .map(|e| {
            let (u, t) = edge_point(e);
            sampler.eval(sheet, u, t)
        })
        .collect::<Result<_>>()?;
    let centres: Vec<Sample> = centred
        .par_iter()
        .map(|&(i, j)| {
            sampler.eval(sheet, u0 + du * (i as f64 + 0.5), dt * (j as f64 + 0.5))
        })
        .collect::<Result<_>>()?;

    let base = out.vertices.len();
    let mid_base = base + grid.len();
    let centre_base = mid_base + mids.len();
    let mid_index: BTreeMap<Edge, usize> = split
        .iter()
        .enumerate()
        .map(|(k, e)| (*e, mid_base + k))
        .collect();
    let centre_index: BTreeMap<(usize, usize), usize> = centred
        .iter()
        .enumerate()
        .map(|(k, c)| (*c, centre_base + k))
        .collect();

    let stats = &mut out.provenance.stats;
    stats.grid_vertices += grid.len();
    stats.midpoint_vertices += mids.len();
    stats.centre_vertices += centres.len();
    stats.refined_cells += refined.len();
    stats.transition_cells += centred.len() - refined.len();

    for s in grid.into_iter().chain(mids).chain(centres) {
        out.vertices.push(s.coords);
        out.ambient.push(s.ambient);
        out.vertex_meta.push(s.meta);
    }

    let mut dropped = 0;
    let mut fan = 0;
    let mut push = |tri: [usize; 3], out: &mut MeshBundle| {
        let [a, b, c] = tri.map(|k| out.vertices[k]);
        if triangle_area(&a, &b, &c) < config.tolerances.degenerate_area {
            dropped += 1;
        } else {
            out.triangles.push(tri);
        }
    };
    for i in 0..n_cells_u {
        for j in 0..n_t {
            let corner = |a: usize, b: usize| base + grid_index(i + a, j + b);
            let (c0, c1, c2, c3) = (corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1));
            match centre_index.get(&(i, j)) {
                None => {
                    push([c0, c1, c2], out);
                    push([c0, c2, c3], out);
                }
                Some(&centre) => {
                    let edges = cell_edges(i, j);
                    let mut ring = Vec::with_capacity(8);
                    for (corner, edge) in [c0, c1, c2, c3].into_iter().zip(edges.iter()) {
                        ring.push(corner);
                        if let Some(&mid) = mid_index.get(edge) {
                            ring.push(mid);
                        }
                    }
                    fan += ring.len();
                    for k in 0..ring.len() {
                        push([centre, ring[k], ring[(k + 1) % ring.len()]], out);
                    }
                }
            }
        }
    }
    out.provenance.stats.dropped_triangles += dropped;
    out.provenance.stats.fan_triangles += fan;
    Ok(())
}

fn add_lines(spec: SurfaceSpec, config: &RunConfig, out: &mut MeshBundle) -> Result<()> {
    let n = config.n_r.max(2);
    let t_max = config.line_t_max;
    for k in 0..2 * spec.m as i64 {
        let theta = alpha(spec.m, k as u32);
        for line in light_lines(spec, k)? {
            let mut chain = Vec::with_capacity(n);
            for j in 0..n {
                let t = -t_max + 2.0 * t_max * j as f64 / (n - 1) as f64;
                let p = line.point(t);
                chain.push(out.vertices.len());
                out.vertices.push(config.projection.apply(&p)?);
                out.ambient.push(p);
                out.vertex_meta.push(VertexMeta {
                    r: 0.0,
                    theta,
                    region: (spec.family == Family::I).then_some(RegionLabel::Singular),
                    residual: 0.0,
                });
            }
            out.provenance.stats.line_vertices += n;
            out.polylines.push(chain);
        }
    }
    Ok(())
}

/// Curves that can be drawn as polylines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CurveKind {
    /// `gamma_m` over `[0, 2 pi)`, planar.
    Trochoid { m: u32 },
    /// The best-fitting hypo-trochoid for `gamma_m` over one period, planar.
    FittedHypotrochoid { m: u32 },
    /// `branch` selects among the lines returned for index `k` (two for type II).
    LightLine {
        spec: SurfaceSpec,
        k: i64,
        branch: usize,
        t_min: f64,
        t_max: f64,
    },
    /// Image of one of the `2m` components of the type I singular set; the
    /// first `m` lie in `r > 0`.
    SingularImage { spec: SurfaceSpec, component: usize },
    /// The type II catenoid along the ray `theta`, `r` log-spaced.
    HyperbolaSlice {
        m: u32,
        theta: f64,
        r_min: f64,
        r_max: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub label: String,
    pub params: Vec<f64>,
    /// Points of the ambient quadric; empty for planar curves.
    pub ambient: Vec<Point4>,
    pub coords: Vec<[f64; 3]>,
}

fn spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| a + (b - a) * j as f64 / (n - 1) as f64).collect()
}

/// Samples a curve and maps it through `projection` (planar curves ignore it).
pub fn curve_polyline(kind: CurveKind, samples: usize, projection: Projection) -> Result<Polyline> {
    if samples < 2 {
        return Err(Error::InvalidKind(format!("need at least 2 samples (got {samples})")));
    }
    let planar = |label: String, params: Vec<f64>, pts: Vec<[f64; 2]>| Polyline {
        label,
        params,
        ambient: Vec::new(),
        coords: pts.iter().map(|p| [p[0], p[1], 0.0]).collect(),
    };
    let ambient = |label: String, params: Vec<f64>, pts: Vec<Point4>| -> Result<Polyline> {
        let coords = pts.iter().map(|p| projection.apply(p)).collect::<Result<_>>()?;
        Ok(Polyline {
            label,
            params,
            ambient: pts,
            coords,
        })
    };
    match kind {
        CurveKind::Trochoid { m } => {
            check_m(m)?;
            let params: Vec<f64> = (0..samples).map(|j| TAU * j as f64 / samples as f64).collect();
            let pts = params.iter().map(|&t| gamma(m, t)).collect();
            Ok(planar(format!("trochoid m={m}"), params, pts))
        }
        CurveKind::FittedHypotrochoid { m } => {
            let fit = fit_hypotrochoid(m, 2000)?;
            let period = fit.roulette.period();
            let params: Vec<f64> = (0..samples).map(|j| period * j as f64 / samples as f64).collect();
            let pts = params.iter().map(|&s| fit.roulette.point(s)).collect();
            Ok(planar(format!("hypotrochoid m={m}"), params, pts))
        }
        CurveKind::LightLine {
            spec,
            k,
            branch,
            t_min,
            t_max,
        } => {
            if !(t_min < t_max && t_min.is_finite() && t_max.is_finite()) {
                return Err(Error::InvalidKind(format!("bad t-range [{t_min}, {t_max}]")));
            }
            let lines = light_lines(spec, k)?;
            let line = lines.get(branch).ok_or_else(|| {
                Error::InvalidKind(format!("{spec} has {} lines at k = {k}", lines.len()))
            })?;
            let params = spaced(t_min, t_max, samples);
            let pts = params.iter().map(|&t| line.point(t)).collect();
            ambient(format!("light line {spec} k={k} branch={branch}"), params, pts)
        }
        CurveKind::SingularImage { spec, component } => {
            let (params, pts) = singular_image(spec, component, samples)?;
            ambient(format!("singular image {spec} component={component}"), params, pts)
        }
        CurveKind::HyperbolaSlice {
            m,
            theta,
            r_min,
            r_max,
        } => {
            if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
                return Err(Error::InvalidKind(format!("bad r-range [{r_min}, {r_max}]")));
            }
            let params: Vec<f64> = spaced(r_min.ln(), r_max.ln(), samples)
                .into_iter()
                .map(f64::exp)
                .collect();
            let pts = params
                .iter()
                .map(|&r| components_ii(m, r, theta))
                .collect::<Result<_>>()?;
            ambient(format!("hyperbola slice m={m} theta={theta}"), params, pts)
        }
    }
}

/// Samples `theta -> f(r(theta), theta)` along one singular component, with
/// the endpoints replaced by their limits `(0, gamma_m(a_k), 0)`.
fn singular_image(spec: SurfaceSpec, component: usize, samples: usize) -> Result<(Vec<f64>, Vec<Point4>)> {
    if spec.family != Family::I {
        return Err(Error::InvalidKind(format!(
            "singular images are traced for type I only (type II collapses its singular rays to cone points), got {spec}"
        )));
    }
    let m = spec.m;
    if component >= 2 * m as usize {
        return Err(Error::InvalidKind(format!(
            "component {component} out of range 0..{}",
            2 * m
        )));
    }
    let j = (component % m as usize) as i64;
    let negative = component >= m as usize;
    // Index range [a, b] of the arc in terms of a_k, and the sign of r.
    let (ka, kb, sign) = if negative && m % 2 == 1 {
        (2 * j - 1, 2 * j, -1.0)
    } else {
        (2 * j, 2 * j + 1, if negative { -1.0 } else { 1.0 })
    };
    let mf = m as f64;
    let angle = |k: i64| (2 * k + 1) as f64 * std::f64::consts::PI / (2.0 * mf);
    let (ta, tb) = (angle(ka), angle(kb));
    // |r| grows like the square root of the angular distance to an end, so
    // cosine spacing keeps the image samples evenly spread.
    let params: Vec<f64> = spaced(0.0, std::f64::consts::PI, samples)
        .into_iter()
        .map(|s| ta + (tb - ta) * 0.5 * (1.0 - s.cos()))
        .collect();
    let end_point = |k: i64| {
        let g = gamma(m, angle(k));
        Point4::new(0.0, g[0], g[1], 0.0)
    };
    let pts = params
        .iter()
        .enumerate()
        .map(|(n, &theta)| {
            if n == 0 {
                return Ok(end_point(ka));
            }
            if n == samples - 1 {
                return Ok(end_point(kb));
            }
            // |r|^m = -2 e^m cos(m theta), with e^m = sign^m.
            let em = if sign < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
            let rm = (-2.0 * em * (mf * theta).cos()).max(0.0);
            let r = sign * rm.powf(1.0 / mf);
            if r == 0.0 {
                return Ok(end_point(if n < samples / 2 { ka } else { kb }));
            }
            components_i(m, r, theta)
        })
        .collect::<Result<_>>()?;
    Ok((params, pts))
}
