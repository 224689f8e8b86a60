//! Scenario configuration: one TOML file bundles the medium, boundary
//! impedance, geometry, source impulse, time grid, evaluation point, and
//! the series controls (`nMax`, `tolerance`). Every key is optional and
//! defaults to the baseline scenario: a tissue-like half space
//! (`gamma = 0.06` mm^2/ps, `b = 0.001` /ps, `beta = 0.005` mm/ps)
//! observed on the axis at `x3 = 20` mm over `t` in `[200, 4000]` ps.
//! Command-line flags override file values; the file overrides the
//! defaults.
//!
//! ```toml
//! gamma = 0.06
//! b = 0.001
//! beta = 0.005
//! nMax = 70
//! tolerance = 0.01
//!
//! [geometry]
//! kind = "halfspace"   # or "slab", which needs L (mm) and takes M
//!
//! [source]
//! y1 = 0.0
//! y2 = 0.0
//! s = 0.0
//!
//! [grid]
//! tStart = 200.0
//! tEnd = 4000.0
//! count = 96
//!
//! [point]
//! x1 = 0.0
//! x2 = 0.0
//! x3 = 20.0
//! ```

use std::fs;
use std::path::Path;

use photondiff_core::model::{
    BoundaryImpulse, Geometry, MediumParams, RobinCoefficient, SpaceTimePoint, TimeGrid,
};
use serde::Deserialize;

/// Hard cap on the series order: beyond it the terms of every scenario
/// in range are far below any useful tolerance.
pub const N_MAX_LIMIT: u32 = 200;

const DEFAULT_SLAB_IMAGES: u32 = 30;

/// A fully resolved scenario, ready to evaluate.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub medium: MediumParams,
    pub beta: RobinCoefficient,
    pub geometry: Geometry,
    pub source: BoundaryImpulse,
    pub grid: TimeGrid,
    /// Spatial evaluation point; the time coordinate runs over the grid.
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub n_max: u32,
    pub tolerance: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            medium: MediumParams { gamma: 0.06, b: 0.001 },
            beta: RobinCoefficient { beta: 0.005 },
            geometry: Geometry::HalfSpace,
            source: BoundaryImpulse { y1: 0.0, y2: 0.0, s: 0.0 },
            grid: TimeGrid { t_start: 200.0, t_end: 4000.0, count: 96 },
            x1: 0.0,
            x2: 0.0,
            x3: 20.0,
            n_max: 70,
            tolerance: 0.01,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    gamma: Option<f64>,
    b: Option<f64>,
    beta: Option<f64>,
    #[serde(rename = "nMax")]
    n_max: Option<u32>,
    tolerance: Option<f64>,
    geometry: Option<RawGeometry>,
    source: Option<RawSource>,
    grid: Option<RawGrid>,
    point: Option<RawPoint>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    kind: String,
    #[serde(rename = "L")]
    width: Option<f64>,
    #[serde(rename = "M")]
    images: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSource {
    y1: Option<f64>,
    y2: Option<f64>,
    s: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(rename = "tStart")]
    t_start: Option<f64>,
    #[serde(rename = "tEnd")]
    t_end: Option<f64>,
    count: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    x1: Option<f64>,
    x2: Option<f64>,
    x3: Option<f64>,
}

impl Scenario {
    /// Read a TOML file and lay it over the defaults. Unknown keys and
    /// malformed values are reported as configuration errors.
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text =
            fs::read_to_string(path).map_err(|e| format!("config {}: {e}", path.display()))?;
        let raw: RawConfig =
            toml::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))?;
        let mut scenario = Scenario::default();
        if let Some(v) = raw.gamma {
            scenario.medium.gamma = v;
        }
        if let Some(v) = raw.b {
            scenario.medium.b = v;
        }
        if let Some(v) = raw.beta {
            scenario.beta.beta = v;
        }
        if let Some(v) = raw.n_max {
            scenario.n_max = v;
        }
        if let Some(v) = raw.tolerance {
            scenario.tolerance = v;
        }
        if let Some(g) = raw.geometry {
            scenario.geometry = match g.kind.as_str() {
                "halfspace" => Geometry::HalfSpace,
                "slab" => {
                    let width = g
                        .width
                        .ok_or_else(|| String::from("geometry.L: required when kind = \"slab\""))?;
                    Geometry::Slab {
                        width,
                        image_truncation: g.images.unwrap_or(DEFAULT_SLAB_IMAGES),
                    }
                }
                other => {
                    return Err(format!(
                        "geometry.kind: \"{other}\" is not one of \"halfspace\", \"slab\""
                    ))
                }
            };
        }
        if let Some(s) = raw.source {
            if let Some(v) = s.y1 {
                scenario.source.y1 = v;
            }
            if let Some(v) = s.y2 {
                scenario.source.y2 = v;
            }
            if let Some(v) = s.s {
                scenario.source.s = v;
            }
        }
        if let Some(g) = raw.grid {
            if let Some(v) = g.t_start {
                scenario.grid.t_start = v;
            }
            if let Some(v) = g.t_end {
                scenario.grid.t_end = v;
            }
            if let Some(v) = g.count {
                scenario.grid.count = v;
            }
        }
        if let Some(p) = raw.point {
            if let Some(v) = p.x1 {
                scenario.x1 = v;
            }
            if let Some(v) = p.x2 {
                scenario.x2 = v;
            }
            if let Some(v) = p.x3 {
                scenario.x3 = v;
            }
        }
        Ok(scenario)
    }

    /// The evaluation point at one grid time.
    pub fn point_at(&self, t: f64) -> SpaceTimePoint {
        SpaceTimePoint { x1: self.x1, x2: self.x2, x3: self.x3, t }
    }

    /// Every violated invariant, one `field: requires constraint` line
    /// per violation; empty means the scenario is evaluable.
    pub fn violations(&self) -> Vec<String> {
        let mut out: Vec<String> =
            photondiff_core::model::validate(self.medium, self.beta, self.geometry)
                .violations
                .iter()
                .map(ToString::to_string)
                .collect();
        out.extend(self.source.violations().iter().map(ToString::to_string));
        out.extend(self.grid.violations().iter().map(ToString::to_string));
        if !(self.grid.t_start >= 0.0) {
            out.push(String::from("grid.tStart: requires tStart >= 0"));
        }
        out.extend(
            self.point_at(self.grid.t_end)
                .violations_in(self.geometry)
                .iter()
                .map(ToString::to_string),
        );
        if self.n_max > N_MAX_LIMIT {
            out.push(format!("nMax: requires nMax <= {N_MAX_LIMIT}"));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            out.push(String::from("tolerance: requires 0 < tolerance < 1"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn parse(text: &str) -> Result<Scenario, String> {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(text.as_bytes()).unwrap();
        Scenario::from_file(file.path())
    }

    #[test]
    fn defaults_describe_the_baseline_scenario() {
        let s = Scenario::default();
        assert_eq!(s.medium, MediumParams { gamma: 0.06, b: 0.001 });
        assert_eq!(s.beta.beta, 0.005);
        assert_eq!(s.geometry, Geometry::HalfSpace);
        assert_eq!(s.grid, TimeGrid { t_start: 200.0, t_end: 4000.0, count: 96 });
        assert_eq!((s.x1, s.x2, s.x3), (0.0, 0.0, 20.0));
        assert_eq!(s.n_max, 70);
        assert_eq!(s.tolerance, 0.01);
        assert!(s.violations().is_empty());
    }

    #[test]
    fn file_values_override_defaults_field_by_field() {
        let s =
            parse("beta = 0.015\nnMax = 20\n[grid]\ntEnd = 2000.0\n[point]\nx3 = 5.0\n").unwrap();
        assert_eq!(s.beta.beta, 0.015);
        assert_eq!(s.n_max, 20);
        assert_eq!(s.grid, TimeGrid { t_start: 200.0, t_end: 2000.0, count: 96 });
        assert_eq!(s.x3, 5.0);
        // Untouched keys keep their defaults.
        assert_eq!(s.medium.gamma, 0.06);
        assert_eq!(s.tolerance, 0.01);
    }

    #[test]
    fn slab_geometry_needs_a_width() {
        let err = parse("[geometry]\nkind = \"slab\"\n").unwrap_err();
        assert!(err.contains("geometry.L"), "{err}");
        let s = parse("[geometry]\nkind = \"slab\"\nL = 50.0\n").unwrap();
        assert_eq!(
            s.geometry,
            Geometry::Slab { width: 50.0, image_truncation: DEFAULT_SLAB_IMAGES }
        );
    }

    #[test]
    fn unknown_keys_and_bad_kinds_are_rejected() {
        assert!(parse("gamm = 0.06\n").is_err());
        assert!(parse("[geometry]\nkind = \"sphere\"\n").unwrap_err().contains("geometry.kind"));
    }

    #[test]
    fn violations_name_the_offending_fields() {
        let s = Scenario { tolerance: 1.5, n_max: 500, x3: -1.0, ..Scenario::default() };
        let msgs = s.violations().join("\n");
        assert!(msgs.contains("tolerance:"), "{msgs}");
        assert!(msgs.contains("nMax:"), "{msgs}");
        assert!(msgs.contains("point.x3:"), "{msgs}");
    }
}
