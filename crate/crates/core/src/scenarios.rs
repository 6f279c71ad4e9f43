//! Worked physical narratives: the equator phase trace on the sphere and
//! the deflection/reflection table on the torus, with CSV output.
//!
//! The equator trace follows a particle that travels from a start point at
//! colatitude θ₀ on the zero meridian down to the equator, is deflected
//! east, and circles the equator. At each longitude the particle carries
//! the weight of the pair (initial leg, traveled equator prefix). Over a
//! full loop the continuously unwound phase changes by `n·π`; the growth
//! is linear exactly for a pole start, and an equator start (θ₀ = π/2)
//! degenerates to a bare sign `(−1)ⁿ` switching at the antipode, where the
//! weight is undefined.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::coeffs::Weight;
use crate::deformation::{Deformation, DeformationError};
use crate::geometry::{
    GeometryError, Manifold, Sphere, SphereGeodesic, SpherePoint, Torus, TorusClass, TorusGeodesic,
};
use crate::monoid::Eval;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("colatitude must lie in [0, π/2], got {0}")]
    ColatitudeOutOfRange(f64),
    #[error("need at least 2 steps, got {0}")]
    TooFewSteps(usize),
    #[error("deflection leg length must be positive, got {0}")]
    NonPositiveLeg(f64),
    #[error("deflected path class has zero length, direction is undefined")]
    ZeroLengthLeg,
    #[error(transparent)]
    Deformation(#[from] DeformationError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("writing {path:?}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Configuration of an equator trace.
#[derive(Debug, Clone, Copy)]
pub struct EquatorTraceConfig {
    /// Colatitude of the start point on the zero meridian, in `[0, π/2]`.
    pub colatitude: f64,
    /// Quantum number of the deformation.
    pub quantum: i64,
    /// Number of steps around the equator; rows are emitted at
    /// `x = 2πk/K` for `k = 0..=K`.
    pub steps: usize,
    /// Area form scale (modulus `4π·|scale|`).
    pub scale: f64,
}

impl EquatorTraceConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&self.colatitude) {
            return Err(ScenarioError::ColatitudeOutOfRange(self.colatitude));
        }
        if self.steps < 2 {
            return Err(ScenarioError::TooFewSteps(self.steps));
        }
        Ok(())
    }
}

/// Values of one defined trace row.
#[derive(Debug, Clone, Copy)]
pub struct TraceValues {
    /// Canonical representative of the area cocycle in `[0, 4π·|c|)`.
    pub area_mod: f64,
    /// Continuously unwound phase angle.
    pub phase: f64,
    pub weight: Weight,
}

/// One row of the trace; `values` is `None` where the weight is undefined
/// (the closing geodesic hits the cut locus).
#[derive(Debug, Clone, Copy)]
pub struct TraceRow {
    pub longitude: f64,
    pub values: Option<TraceValues>,
}

/// A full equator trace with its phase summary.
#[derive(Debug, Clone)]
pub struct EquatorTrace {
    pub rows: Vec<TraceRow>,
    /// Unwound phase change between the first and last defined rows.
    pub total_phase: f64,
    /// `n·π` (times the sign of the form scale).
    pub expected_phase: f64,
    pub undefined_rows: usize,
}

/// Runs the equator scenario.
pub fn equator_trace(cfg: &EquatorTraceConfig) -> Result<EquatorTrace, ScenarioError> {
    cfg.validate()?;
    let sphere = Sphere;
    let deformation = Deformation::quantized(&sphere, cfg.scale, cfg.quantum)?;
    let modulus = deformation.form().modulus();

    let start = SpherePoint::from_colat_lon(cfg.colatitude, 0.0);
    let equator_point = SpherePoint::from_colat_lon(std::f64::consts::FRAC_PI_2, 0.0);
    let leg = sphere
        .path_class(start, equator_point)
        .expect_defined("start and deflection point are within a quarter circle");
    let east = [0.0, 1.0, 0.0];
    let arc = SphereGeodesic::from_direction(equator_point, east, std::f64::consts::TAU)?;

    let phase_rate = 2.0 * std::f64::consts::PI * cfg.quantum as f64 / modulus;
    let mut rows = Vec::with_capacity(cfg.steps + 1);
    let mut undefined_rows = 0;
    let mut prev_unwound: Option<f64> = None;
    let mut first_phase: Option<f64> = None;
    let mut last_phase = 0.0;

    for k in 0..=cfg.steps {
        let x = std::f64::consts::TAU * k as f64 / cfg.steps as f64;
        match deformation.memory_weight_with_area(&leg, &arc, x.min(std::f64::consts::TAU)) {
            Eval::Undefined => {
                undefined_rows += 1;
                rows.push(TraceRow {
                    longitude: x,
                    values: None,
                });
            }
            Eval::Defined((area, weight)) => {
                let unwound = match prev_unwound {
                    None => area.value(),
                    Some(prev) => nearest_branch(area.value(), prev, modulus),
                };
                prev_unwound = Some(unwound);
                let phase = phase_rate * unwound;
                if first_phase.is_none() {
                    first_phase = Some(phase);
                }
                last_phase = phase;
                rows.push(TraceRow {
                    longitude: x,
                    values: Some(TraceValues {
                        area_mod: area.value(),
                        phase,
                        weight,
                    }),
                });
            }
        }
    }

    let total_phase = last_phase - first_phase.unwrap_or(0.0);
    Ok(EquatorTrace {
        rows,
        total_phase,
        expected_phase: std::f64::consts::PI * cfg.quantum as f64 * cfg.scale.signum(),
        undefined_rows,
    })
}

/// The representative of `raw` modulo `modulus` nearest to `prev`; ties
/// break toward the larger value so a genuine half-modulus jump unwinds
/// forward.
fn nearest_branch(raw: f64, prev: f64, modulus: f64) -> f64 {
    if modulus == 0.0 {
        return raw;
    }
    let k = ((prev - raw) / modulus).floor();
    let lo = raw + modulus * k;
    let hi = lo + modulus;
    if (lo - prev).abs() < (hi - prev).abs() {
        lo
    } else {
        hi
    }
}

/// One entry of the torus deflection table.
#[derive(Debug, Clone, Copy)]
pub struct DeflectionRow {
    pub angle: f64,
    pub weight: Weight,
    pub mirror_weight: Weight,
    /// `w(θ)·w(−θ)`; equal to one because mirroring negates the area.
    pub product: Weight,
}

/// Weights picked up by a particle that traveled `gamma` and is deflected
/// by each angle in `angles` (measured from straight continuation), moving
/// a further distance `leg`; the mirror column deflects by `−θ`.
pub fn deflection_table(
    deformation: &Deformation<Torus>,
    gamma: &TorusClass,
    angles: &[f64],
    leg: f64,
) -> Result<Vec<DeflectionRow>, ScenarioError> {
    if leg <= 0.0 {
        return Err(ScenarioError::NonPositiveLeg(leg));
    }
    let torus = deformation.manifold();
    let geo = torus
        .shortest_geodesic(gamma)
        .expect_defined("torus geodesics are total");
    if geo.length() <= 0.0 {
        return Err(ScenarioError::ZeroLengthLeg);
    }
    let dir = geo.direction();
    let mut rows = Vec::with_capacity(angles.len());
    for &angle in angles {
        let (s, c) = angle.sin_cos();
        let turned = [c * dir[0] - s * dir[1], s * dir[0] + c * dir[1]];
        let mirrored = [c * dir[0] + s * dir[1], -s * dir[0] + c * dir[1]];
        let start = torus.lift_end(gamma);
        let weight = deformation
            .memory_weight(
                gamma,
                &TorusGeodesic::from_direction(start, turned, leg)?,
                leg,
            )
            .expect_defined("torus weights are total");
        let mirror_weight = deformation
            .memory_weight(
                gamma,
                &TorusGeodesic::from_direction(start, mirrored, leg)?,
                leg,
            )
            .expect_defined("torus weights are total");
        rows.push(DeflectionRow {
            angle,
            weight,
            mirror_weight,
            product: weight * mirror_weight,
        });
    }
    Ok(rows)
}

/// CSV header for equator traces.
pub const TRACE_CSV_HEADER: &str =
    "x_longitude,omega_tilde_mod,phase_unwound,weight_re,weight_im,defined";

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the trace in the fixed CSV schema: floats with 17 significant
/// digits, undefined rows flagged with empty numeric fields. Row order is
/// by longitude index.
pub fn write_trace_csv<W: Write>(trace: &EquatorTrace, mut out: W) -> io::Result<()> {
    writeln!(out, "{TRACE_CSV_HEADER}")?;
    for row in &trace.rows {
        match &row.values {
            Some(v) => writeln!(
                out,
                "{},{},{},{},{},true",
                fmt17(row.longitude),
                fmt17(v.area_mod),
                fmt17(v.phase),
                fmt17(v.weight.re()),
                fmt17(v.weight.im()),
            )?,
            None => writeln!(out, "{},,,,,false", fmt17(row.longitude))?,
        }
    }
    Ok(())
}

/// Writes the trace CSV to a file, reporting the path on failure.
pub fn write_trace_csv_file(trace: &EquatorTrace, path: &Path) -> Result<(), ScenarioError> {
    let wrap = |source: io::Error| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(wrap)?;
    let mut w = BufWriter::new(file);
    write_trace_csv(trace, &mut w).map_err(wrap)?;
    w.flush().map_err(wrap)
}
