//! Typed, validated scenarios.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;
use std::sync::Arc;

use hopf_core::canned;
use hopf_core::duality::sample_variety;
use hopf_core::hypersurface::{Chart, NormalOrientation, DEFAULT_FD_STEP};
use hopf_core::polynomial::AlgebraicHypersurface;
use hopf_core::space_forms::{CVec, Curvature, ModelPoint, SpaceForm};
use hopf_core::tubes::{
    AlgebraicBase, BaseSubmanifold, ComplexLinearBase, RealFormBase, TubeSpec, DEFAULT_RANK_TOL,
};
use serde::Serialize;

use crate::charts::{AffineChart, Relabeled};
use crate::config::{Config, ConfigError, Entry};

/// Where referenced files (`file:...`) are looked up.
#[derive(Debug, Clone)]
pub enum FileSource {
    Dir(PathBuf),
    Embedded,
}

impl FileSource {
    pub fn read(&self, name: &str) -> Result<String, String> {
        match self {
            FileSource::Dir(dir) => {
                let path = dir.join(name);
                std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))
            }
            FileSource::Embedded => crate::canned::embedded_file(name)
                .map(str::to_string)
                .ok_or_else(|| format!("no bundled file `{name}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Spectrum,
    Hopf,
    Lemma4,
    Structure,
    Miquel,
    Focal,
    RankSweep,
    Duality,
    Blowup,
    SingularLocus,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::Spectrum,
        CheckKind::Hopf,
        CheckKind::Lemma4,
        CheckKind::Structure,
        CheckKind::Miquel,
        CheckKind::Focal,
        CheckKind::RankSweep,
        CheckKind::Duality,
        CheckKind::Blowup,
        CheckKind::SingularLocus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Spectrum => "spectrum",
            CheckKind::Hopf => "hopf",
            CheckKind::Lemma4 => "lemma4",
            CheckKind::Structure => "structure",
            CheckKind::Miquel => "miquel",
            CheckKind::Focal => "focal",
            CheckKind::RankSweep => "rank_sweep",
            CheckKind::Duality => "duality",
            CheckKind::Blowup => "blowup",
            CheckKind::SingularLocus => "singular_locus",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub spectrum: f64,
    pub hopf: f64,
    pub mu_stddev: f64,
    pub lemma4: f64,
    pub pairing: f64,
    pub structure: f64,
    pub miquel: f64,
    pub distance: f64,
    pub duality: f64,
    /// Singular-value ratio for rank counting; not touched by `--tol`.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            spectrum: 1e-5,
            hopf: 1e-6,
            mu_stddev: 1e-6,
            lemma4: 1e-5,
            pairing: 1e-5,
            structure: 1e-9,
            miquel: 1e-9,
            distance: 1e-9,
            duality: 1e-8,
            rank: DEFAULT_RANK_TOL,
        }
    }
}

impl Tolerances {
    pub fn override_all(&mut self, tol: f64) {
        let rank = self.rank;
        *self = Self {
            spectrum: tol,
            hopf: tol,
            mu_stddev: tol,
            lemma4: tol,
            pairing: tol,
            structure: tol,
            miquel: tol,
            distance: tol,
            duality: tol,
            rank,
        };
    }

    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "spectrum" => &mut self.spectrum,
            "hopf" => &mut self.hopf,
            "mu_stddev" => &mut self.mu_stddev,
            "lemma4" => &mut self.lemma4,
            "pairing" => &mut self.pairing,
            "structure" => &mut self.structure,
            "miquel" => &mut self.miquel,
            "distance" => &mut self.distance,
            "duality" => &mut self.duality,
            "rank" => &mut self.rank,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BidualityExpectation {
    Holds,
    Inapplicable,
    /// No sample may fail; degenerate samples are allowed.
    NoFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupExpectation {
    Diverge,
    Bounded,
}

#[derive(Debug, Clone)]
pub struct Params {
    pub cells: usize,
    pub interval: (f64, f64),
    pub radii: Vec<f64>,
    pub rank_grid: Option<Vec<usize>>,
    pub samples: usize,
    pub duality_radii: Vec<f64>,
    pub duality_samples: usize,
    pub biduality_points: usize,
    pub expect_biduality: BidualityExpectation,
    pub dual_point: Option<ModelPoint>,
    pub scales: Vec<f64>,
    pub probe_radius: f64,
    pub target: Option<ModelPoint>,
    pub direction: Option<CVec>,
    pub transversal: Option<CVec>,
    pub blowup_expect: BlowupExpectation,
    pub blowup_threshold: f64,
    pub bounded_factor: f64,
    pub singular_grid: usize,
    pub expect_singular: bool,
    pub miquel_equality: bool,
    pub miquel_fd_step: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            cells: 50,
            interval: (0.0, PI),
            radii: (1..=7).map(|k| 0.2 * k as f64).collect(),
            rank_grid: None,
            samples: 50,
            duality_radii: (1..=20).map(|k| FRAC_PI_2 * k as f64 / 21.0).collect(),
            duality_samples: 20,
            biduality_points: 20,
            expect_biduality: BidualityExpectation::NoFailure,
            dual_point: None,
            scales: vec![1e-1, 3e-2, 1e-2, 3e-3, 1e-3],
            probe_radius: 0.5,
            target: None,
            direction: None,
            transversal: None,
            blowup_expect: BlowupExpectation::Diverge,
            blowup_threshold: 1e3,
            bounded_factor: 10.0,
            singular_grid: 5,
            expect_singular: false,
            miquel_equality: false,
            miquel_fd_step: 5e-3,
        }
    }
}

#[derive(Clone)]
pub enum BaseSpec {
    /// `CP^k` or `CH^k` through `e_0`; `k = 0` is a point.
    Linear(usize),
    RealForm,
    Polynomial {
        f: AlgebraicHypersurface,
        point: ModelPoint,
    },
}

#[derive(Clone)]
pub enum Object {
    Sphere {
        radius: f64,
        center: usize,
        orientation: NormalOrientation,
    },
    Tube {
        base: BaseSpec,
        radius: f64,
        orientation: NormalOrientation,
    },
    CustomChart {
        chart: AffineChart,
        orientation: NormalOrientation,
    },
    Variety {
        f: AlgebraicHypersurface,
        point: Option<ModelPoint>,
    },
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Sphere { .. } => "sphere",
            Object::Tube { .. } => "tube",
            Object::CustomChart { .. } => "custom_chart",
            Object::Variety { .. } => "variety",
        }
    }

    /// The tube construction behind a sphere or tube object, centered at
    /// `e_0`.
    pub fn tube(&self, space: SpaceForm) -> Option<TubeSpec> {
        let (base, radius): (Arc<dyn BaseSubmanifold>, f64) = match self {
            Object::Sphere { radius, .. } => {
                (Arc::new(ComplexLinearBase::point(space).ok()?), *radius)
            }
            Object::Tube { base, radius, .. } => {
                let b: Arc<dyn BaseSubmanifold> = match base {
                    BaseSpec::Linear(k) => Arc::new(ComplexLinearBase::new(space, *k).ok()?),
                    BaseSpec::RealForm => Arc::new(RealFormBase::new(space).ok()?),
                    BaseSpec::Polynomial { f, point } => {
                        Arc::new(AlgebraicBase::new(f.clone(), point).ok()?)
                    }
                };
                (b, *radius)
            }
            _ => return None,
        };
        TubeSpec::new(base, radius).ok()
    }

    pub fn chart(&self, space: SpaceForm) -> Option<Arc<dyn Chart>> {
        match self {
            Object::Sphere { center, .. } if *center != 0 => Some(Arc::new(Relabeled {
                inner: self.tube(space)?,
                k: *center,
            })),
            Object::Sphere { .. } | Object::Tube { .. } => Some(Arc::new(self.tube(space)?)),
            Object::CustomChart { chart, .. } => Some(Arc::new(chart.clone())),
            Object::Variety { .. } => None,
        }
    }

    pub fn orientation(&self) -> Option<NormalOrientation> {
        match self {
            Object::Sphere { orientation, .. }
            | Object::Tube { orientation, .. }
            | Object::CustomChart { orientation, .. } => Some(*orientation),
            Object::Variety { .. } => None,
        }
    }

    pub fn polynomial(&self) -> Option<&AlgebraicHypersurface> {
        match self {
            Object::Variety { f, .. } => Some(f),
            Object::Tube {
                base: BaseSpec::Polynomial { f, .. },
                ..
            } => Some(f),
            _ => None,
        }
    }

    pub fn polynomial_point(&self) -> Option<&ModelPoint> {
        match self {
            Object::Variety { point, .. } => point.as_ref(),
            Object::Tube {
                base: BaseSpec::Polynomial { point, .. },
                ..
            } => Some(point),
            _ => None,
        }
    }
}

#[derive(Clone)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub seed: u64,
    pub space: SpaceForm,
    pub object: Object,
    pub checks: Vec<CheckKind>,
    pub grid: Vec<usize>,
    pub fd_step: f64,
    pub tol: Tolerances,
    pub params: Params,
    /// Every configuration entry as `section.key = value`.
    pub echo: BTreeMap<String, String>,
}

/// Command-line overrides applied after parsing.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub fd_step: Option<f64>,
    pub tol: Option<f64>,
}

const KNOWN: &[(&str, &[&str])] = &[
    (
        "scenario",
        &["name", "description", "seed", "checks", "grid", "fd_step"],
    ),
    ("space", &["kind", "n"]),
    (
        "object",
        &[
            "type",
            "radius",
            "center",
            "orientation",
            "base",
            "k",
            "polynomial",
            "point",
            "file",
        ],
    ),
    (
        "tolerances",
        &[
            "spectrum",
            "hopf",
            "mu_stddev",
            "lemma4",
            "pairing",
            "structure",
            "miquel",
            "distance",
            "duality",
            "rank",
        ],
    ),
    (
        "params",
        &[
            "cells",
            "interval",
            "radii",
            "rank_grid",
            "samples",
            "duality_radii",
            "duality_samples",
            "biduality_points",
            "expect_biduality",
            "dual_point",
            "scales",
            "probe_radius",
            "target",
            "direction",
            "transversal",
            "blowup_expect",
            "blowup_threshold",
            "bounded_factor",
            "singular_grid",
            "expect_singular",
            "miquel_equality",
            "miquel_fd_step",
        ],
    ),
];

fn check_known_keys(cfg: &Config) -> Result<(), ConfigError> {
    for section in cfg.sections() {
        let Some((_, keys)) = KNOWN.iter().find(|(s, _)| *s == section) else {
            return Err(ConfigError::at(
                cfg.section_line(section).unwrap_or(1),
                format!("unknown section [{section}]"),
            ));
        };
        for (key, entry) in cfg.keys(section) {
            if !keys.contains(&key) {
                return Err(ConfigError::at(
                    entry.line,
                    format!("unknown key `{key}` in [{section}]"),
                ));
            }
        }
    }
    Ok(())
}

fn orientation(
    entry: Option<&Entry>,
    default: NormalOrientation,
) -> Result<NormalOrientation, ConfigError> {
    match entry {
        None => Ok(default),
        Some(e) => match e.value.as_str() {
            "inward" => Ok(NormalOrientation::Inward),
            "outward" => Ok(NormalOrientation::Outward),
            v => Err(ConfigError::at(
                e.line,
                format!("orientation must be inward or outward, got `{v}`"),
            )),
        },
    }
}

fn point_in(space: SpaceForm, e: &Entry) -> Result<ModelPoint, ConfigError> {
    let v = e.complexes()?;
    if v.len() != space.ambient_len() {
        return Err(ConfigError::at(
            e.line,
            format!(
                "expected {} coordinates, got {}",
                space.ambient_len(),
                v.len()
            ),
        ));
    }
    ModelPoint::new(space, CVec::from_vec(v))
        .map_err(|err| ConfigError::at(e.line, err.to_string()))
}

fn vector_in(space: SpaceForm, e: &Entry) -> Result<CVec, ConfigError> {
    let v = e.complexes()?;
    if v.len() != space.ambient_len() {
        return Err(ConfigError::at(
            e.line,
            format!(
                "expected {} coordinates, got {}",
                space.ambient_len(),
                v.len()
            ),
        ));
    }
    Ok(CVec::from_vec(v))
}

fn radius(space: SpaceForm, e: &Entry) -> Result<f64, ConfigError> {
    let r = e.real()?;
    let ok = match space.curvature() {
        Curvature::Projective => r > 0.0 && r < FRAC_PI_2,
        Curvature::Hyperbolic => r > 0.0,
    };
    if !ok {
        let range = match space.curvature() {
            Curvature::Projective => "(0, pi/2)",
            Curvature::Hyperbolic => "(0, inf)",
        };
        return Err(ConfigError::at(
            e.line,
            format!("radius {r} outside {range}"),
        ));
    }
    Ok(r)
}

fn polynomial(
    space: SpaceForm,
    e: &Entry,
    k: Option<&Entry>,
    files: &FileSource,
) -> Result<AlgebraicHypersurface, ConfigError> {
    if space.curvature() != Curvature::Projective {
        return Err(ConfigError::at(e.line, "polynomial objects live in CP^n"));
    }
    let n = space.n();
    let f = match e.value.as_str() {
        "quadric" => AlgebraicHypersurface::quadric(n),
        "sextic" => AlgebraicHypersurface::singular_sextic(),
        "hyperplane" => {
            let k = match k {
                Some(k) => k.uint()? as usize,
                None => n,
            };
            if k > n {
                return Err(ConfigError::at(
                    e.line,
                    format!("hyperplane index {k} exceeds {n}"),
                ));
            }
            AlgebraicHypersurface::coordinate_hyperplane(n, k)
        }
        v => {
            let Some(name) = v.strip_prefix("file:") else {
                return Err(ConfigError::at(
                    e.line,
                    format!(
                        "polynomial must be quadric, sextic, hyperplane or file:<path>, got `{v}`"
                    ),
                ));
            };
            let text = files
                .read(name.trim())
                .map_err(|m| ConfigError::at(e.line, m))?;
            AlgebraicHypersurface::parse(&text)
                .map_err(|err| ConfigError::at(e.line, format!("{}: {err}", name.trim())))?
        }
    };
    if f.vars() != space.ambient_len() {
        return Err(ConfigError::at(
            e.line,
            format!(
                "polynomial has {} variables, CP^{n} needs {}",
                f.vars(),
                n + 1
            ),
        ));
    }
    Ok(f)
}

fn variety_point(
    space: SpaceForm,
    f: &AlgebraicHypersurface,
    e: Option<&Entry>,
    seed: u64,
    line: usize,
) -> Result<ModelPoint, ConfigError> {
    match e.map(|e| (e, e.value.as_str())) {
        None | Some((_, "auto")) => {
            if *f == AlgebraicHypersurface::quadric(space.n()) {
                return canned::quadric_point(space.n())
                    .map_err(|err| ConfigError::at(line, err.to_string()));
            }
            let pts =
                sample_variety(f, 1, seed).map_err(|err| ConfigError::at(line, err.to_string()))?;
            Ok(pts.into_iter().next().expect("one sample requested"))
        }
        Some((e, _)) => {
            let p = point_in(space, e)?;
            let res = f
                .eval(p.coords())
                .map_err(|err| ConfigError::at(e.line, err.to_string()))?;
            if res.norm() > 1e-9 * f.scale() {
                return Err(ConfigError::at(
                    e.line,
                    format!("point is off the variety: |f| = {:.3e}", res.norm()),
                ));
            }
            Ok(p)
        }
    }
}

impl Scenario {
    pub fn from_config(
        cfg: &Config,
        files: &FileSource,
        ov: &Overrides,
    ) -> Result<Self, ConfigError> {
        check_known_keys(cfg)?;
        let name = cfg.require("scenario", "name")?.value.clone();
        let description = cfg
            .entry("scenario", "description")
            .map(|e| e.value.clone())
            .unwrap_or_default();
        let seed = match ov.seed {
            Some(s) => s,
            None => cfg
                .entry("scenario", "seed")
                .map(Entry::uint)
                .transpose()?
                .unwrap_or(0),
        };

        let kind = cfg.require("space", "kind")?;
        let n_entry = cfg.require("space", "n")?;
        let n = n_entry.uint()? as usize;
        let space = match kind.value.as_str() {
            "cp" => SpaceForm::projective(n),
            "ch" => SpaceForm::hyperbolic(n),
            v => {
                return Err(ConfigError::at(
                    kind.line,
                    format!("space kind must be cp or ch, got `{v}`"),
                ))
            }
        }
        .map_err(|e| ConfigError::at(n_entry.line, e.to_string()))?;

        let ty = cfg.require("object", "type")?;
        let obj = |key: &str| cfg.entry("object", key);
        let object = match ty.value.as_str() {
            "sphere" => {
                let center = obj("center").map(Entry::uint).transpose()?.unwrap_or(0) as usize;
                if center > n || (center != 0 && space.curvature() == Curvature::Hyperbolic) {
                    return Err(ConfigError::at(
                        obj("center").map_or(ty.line, |e| e.line),
                        format!("center e_{center} is not a point of the space"),
                    ));
                }
                Object::Sphere {
                    radius: radius(space, cfg.require("object", "radius")?)?,
                    center,
                    orientation: orientation(obj("orientation"), NormalOrientation::Inward)?,
                }
            }
            "tube" => {
                let base_e = cfg.require("object", "base")?;
                let base = match base_e.value.as_str() {
                    "point" => BaseSpec::Linear(0),
                    "linear" => {
                        let k = cfg.require("object", "k")?;
                        let kv = k.uint()? as usize;
                        if kv + 1 > n {
                            return Err(ConfigError::at(
                                k.line,
                                format!("need k < n, got k = {kv}"),
                            ));
                        }
                        BaseSpec::Linear(kv)
                    }
                    "real_form" => {
                        if space.curvature() != Curvature::Projective {
                            return Err(ConfigError::at(
                                base_e.line,
                                "real_form bases live in CP^n",
                            ));
                        }
                        BaseSpec::RealForm
                    }
                    "polynomial" => {
                        let f = polynomial(
                            space,
                            cfg.require("object", "polynomial")?,
                            obj("k"),
                            files,
                        )?;
                        let point = variety_point(space, &f, obj("point"), seed, base_e.line)?;
                        BaseSpec::Polynomial { f, point }
                    }
                    v => {
                        return Err(ConfigError::at(
                            base_e.line,
                            format!(
                                "base must be point, linear, real_form or polynomial, got `{v}`"
                            ),
                        ))
                    }
                };
                Object::Tube {
                    base,
                    radius: radius(space, cfg.require("object", "radius")?)?,
                    orientation: orientation(obj("orientation"), NormalOrientation::Outward)?,
                }
            }
            "custom_chart" => {
                let fe = cfg.require("object", "file")?;
                let text = files
                    .read(&fe.value)
                    .map_err(|m| ConfigError::at(fe.line, m))?;
                let chart = AffineChart::parse(space, &text).map_err(|(l, m)| {
                    ConfigError::at(fe.line, format!("{} line {l}: {m}", fe.value))
                })?;
                Object::CustomChart {
                    chart,
                    orientation: orientation(obj("orientation"), NormalOrientation::Inward)?,
                }
            }
            "variety" => {
                let f = polynomial(space, cfg.require("object", "polynomial")?, obj("k"), files)?;
                let point = match obj("point") {
                    None => None,
                    Some(e) => Some(variety_point(space, &f, Some(e), seed, e.line)?),
                };
                Object::Variety { f, point }
            }
            v => {
                return Err(ConfigError::at(
                    ty.line,
                    format!("object type must be sphere, tube, custom_chart or variety, got `{v}`"),
                ))
            }
        };

        let checks_e = cfg.require("scenario", "checks")?;
        let mut checks = Vec::new();
        for w in checks_e.words() {
            let c = CheckKind::parse(&w)
                .ok_or_else(|| ConfigError::at(checks_e.line, format!("unknown check `{w}`")))?;
            if !checks.contains(&c) {
                checks.push(c);
            }
        }
        if checks.is_empty() {
            return Err(ConfigError::at(checks_e.line, "no checks listed"));
        }

        let chart = object.chart(space);
        let grid = match cfg.entry("scenario", "grid") {
            Some(e) => {
                let g = e.uints()?;
                if let Some(c) = &chart {
                    if g.len() != c.dim() {
                        return Err(ConfigError::at(
                            e.line,
                            format!(
                                "grid needs {} counts for this object, got {}",
                                c.dim(),
                                g.len()
                            ),
                        ));
                    }
                }
                g
            }
            None => chart.as_ref().map(|c| vec![2; c.dim()]).unwrap_or_default(),
        };

        let fd_step = match ov.fd_step {
            Some(h) => h,
            None => cfg
                .entry("scenario", "fd_step")
                .map(Entry::real)
                .transpose()?
                .unwrap_or(DEFAULT_FD_STEP),
        };
        if !(fd_step > 0.0 && fd_step < 0.1) {
            let line = cfg.entry("scenario", "fd_step").map_or(1, |e| e.line);
            return Err(ConfigError::at(
                line,
                format!("fd_step {fd_step} outside (0, 0.1)"),
            ));
        }

        let mut tol = Tolerances::default();
        for (key, e) in cfg.keys("tolerances") {
            let v = e.real()?;
            if !(v > 0.0) {
                return Err(ConfigError::at(e.line, "tolerances must be positive"));
            }
            *tol.slot(key).expect("keys were validated") = v;
        }
        if let Some(t) = ov.tol {
            tol.override_all(t);
        }

        let params = parse_params(cfg, space, &object)?;

        let scenario = Scenario {
            name,
            description,
            seed,
            space,
            object,
            checks,
            grid,
            fd_step,
            tol,
            params,
            echo: cfg.flatten(),
        };
        scenario.validate_checks(checks_e.line)?;
        Ok(scenario)
    }

    fn validate_checks(&self, line: usize) -> Result<(), ConfigError> {
        let cp = self.space.curvature() == Curvature::Projective;
        for &c in &self.checks {
            let problem = match c {
                CheckKind::Spectrum
                | CheckKind::Hopf
                | CheckKind::Lemma4
                | CheckKind::Structure => self
                    .object
                    .chart(self.space)
                    .is_none()
                    .then_some("needs a hypersurface object"),
                CheckKind::Miquel => {
                    if self.object.chart(self.space).is_none() {
                        Some("needs a hypersurface object")
                    } else {
                        (!cp).then_some("is stated in CP^n")
                    }
                }
                CheckKind::Focal => {
                    if self.object.tube(self.space).is_none() {
                        Some("needs a sphere or tube object")
                    } else {
                        (!cp).then_some("is computed in CP^n")
                    }
                }
                CheckKind::RankSweep => self
                    .object
                    .tube(self.space)
                    .is_none()
                    .then_some("needs a sphere or tube object"),
                CheckKind::Duality | CheckKind::SingularLocus => self
                    .object
                    .polynomial()
                    .is_none()
                    .then_some("needs a polynomial object"),
                CheckKind::Blowup => {
                    if self.object.polynomial().is_none() {
                        Some("needs a polynomial object")
                    } else if self.params.direction.is_none() || self.params.transversal.is_none() {
                        Some("needs params direction and transversal")
                    } else if self.params.target.is_none()
                        && self.object.polynomial_point().is_none()
                    {
                        Some("needs params target or an object point")
                    } else {
                        None
                    }
                }
            };
            if let Some(p) = problem {
                return Err(ConfigError::at(line, format!("check `{}` {p}", c.name())));
            }
        }
        Ok(())
    }
}

fn parse_params(cfg: &Config, space: SpaceForm, object: &Object) -> Result<Params, ConfigError> {
    let mut p = Params {
        miquel_equality: matches!(object, Object::Sphere { .. }),
        ..Params::default()
    };
    for (key, e) in cfg.keys("params") {
        match key {
            "cells" => {
                p.cells = e.uint()? as usize;
                if p.cells == 0 {
                    return Err(ConfigError::at(e.line, "cells must be positive"));
                }
            }
            "interval" => match e.reals()?.as_slice() {
                [a, b] if a < b => p.interval = (*a, *b),
                _ => {
                    return Err(ConfigError::at(
                        e.line,
                        "interval needs two increasing numbers",
                    ))
                }
            },
            "radii" => p.radii = e.reals()?,
            "rank_grid" => p.rank_grid = Some(e.uints()?),
            "samples" => p.samples = e.uint()? as usize,
            "duality_radii" => {
                p.duality_radii = e.reals()?;
                if p.duality_radii
                    .iter()
                    .any(|r| !(*r > 0.0 && *r < FRAC_PI_2))
                {
                    return Err(ConfigError::at(
                        e.line,
                        "duality radii must lie in (0, pi/2)",
                    ));
                }
            }
            "duality_samples" => p.duality_samples = e.uint()? as usize,
            "biduality_points" => p.biduality_points = e.uint()? as usize,
            "expect_biduality" => {
                p.expect_biduality = match e.value.as_str() {
                    "holds" => BidualityExpectation::Holds,
                    "inapplicable" => BidualityExpectation::Inapplicable,
                    "no_failure" => BidualityExpectation::NoFailure,
                    v => {
                        return Err(ConfigError::at(
                            e.line,
                            format!(
                            "expect_biduality must be holds, inapplicable or no_failure, got `{v}`"
                        ),
                        ))
                    }
                }
            }
            "dual_point" => p.dual_point = Some(point_in(space, e)?),
            "scales" => {
                p.scales = e.reals()?;
                if p.scales.iter().any(|s| !(*s > 0.0)) {
                    return Err(ConfigError::at(e.line, "scales must be positive"));
                }
            }
            "probe_radius" => p.probe_radius = radius(space, e)?,
            "target" => p.target = Some(point_in(space, e)?),
            "direction" => p.direction = Some(vector_in(space, e)?),
            "transversal" => p.transversal = Some(vector_in(space, e)?),
            "blowup_expect" => {
                p.blowup_expect = match e.value.as_str() {
                    "diverge" => BlowupExpectation::Diverge,
                    "bounded" => BlowupExpectation::Bounded,
                    v => {
                        return Err(ConfigError::at(
                            e.line,
                            format!("blowup_expect must be diverge or bounded, got `{v}`"),
                        ))
                    }
                }
            }
            "blowup_threshold" => p.blowup_threshold = e.real()?,
            "bounded_factor" => p.bounded_factor = e.real()?,
            "singular_grid" => {
                p.singular_grid = e.uint()? as usize;
                if p.singular_grid < 2 {
                    return Err(ConfigError::at(e.line, "singular_grid must be at least 2"));
                }
            }
            "expect_singular" => p.expect_singular = e.boolean()?,
            "miquel_equality" => p.miquel_equality = e.boolean()?,
            "miquel_fd_step" => p.miquel_fd_step = e.real()?,
            _ => unreachable!("keys were validated"),
        }
    }
    Ok(p)
}
