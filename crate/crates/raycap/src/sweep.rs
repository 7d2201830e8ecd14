//! Deterministic parameter sweeps over antenna count, ray count, SNR,
//! and fan azimuth.
//!
//! Every sweep point is an independent capacity evaluation, so points may
//! run in parallel; rows are always assembled in sweep order and repeated
//! runs produce byte-identical output. CSV starts with the format line
//! `# raycap sweep v1`, then the column header, then one row per value;
//! the run parameters follow as trailing `#` comment lines, with the
//! timestamp line omitted when [`SweepMetadata::timestamp`] is `None`.

use std::io::{self, Write};

use rayon::prelude::*;
use serde_json::json;

use crate::capacity::{capacity, siso_awgn_capacity, snr_db_to_linear, CapacityConfig, PowerSetup};
use crate::channel::{build_channel, ChannelMatrix, RayFan};
use crate::geometry::ArrayParams;
use crate::{Error, Result};

/// First line of every sweep CSV.
pub const CSV_FORMAT_LINE: &str = "# raycap sweep v1";

/// Which parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptVariable {
    AntennaCount,
    RayCount,
    SnrDb,
    PhiDeg,
}

impl SweptVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweptVariable::AntennaCount => "antenna_count",
            SweptVariable::RayCount => "ray_count",
            SweptVariable::SnrDb => "snr_db",
            SweptVariable::PhiDeg => "phi_deg",
        }
    }
}

/// Extra series computed next to the main one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    None,
    AgainstSiso,
    LinearVsSquare,
}

impl Comparison {
    pub fn as_str(self) -> &'static str {
        match self {
            Comparison::None => "none",
            Comparison::AgainstSiso => "against_siso",
            Comparison::LinearVsSquare => "linear_vs_square",
        }
    }
}

/// Echo of what a sweep evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub swept: SweptVariable,
    pub values: Vec<f64>,
    pub fixed_n_t: Option<usize>,
    pub fixed_n_r: Option<usize>,
    /// Linear `P/sigma^2` when it is fixed across the sweep.
    pub snr: Option<f64>,
    /// Fan azimuth when it is fixed across the sweep.
    pub phi_deg: Option<f64>,
    pub comparison: Comparison,
}

/// Run parameters echoed into every output.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepMetadata {
    pub wavelength: f64,
    pub spacing: f64,
    pub setup: PowerSetup,
    /// Unix seconds; `None` suppresses the timestamp line for
    /// byte-reproducible output.
    pub timestamp: Option<u64>,
}

/// One sweep point: the swept value and the named y-columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub ys: Vec<f64>,
}

/// An evaluated sweep, ready for CSV or JSON emission.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSeries {
    pub spec: SweepSpec,
    pub x_label: &'static str,
    pub y_labels: Vec<&'static str>,
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMetadata,
}

fn validate_usize_values(values: &[usize]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptySweep);
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnorderedSweep);
    }
    Ok(())
}

fn validate_f64_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptySweep);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::UnorderedSweep);
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnorderedSweep);
    }
    Ok(())
}

fn capacity_bits(h: &ChannelMatrix, cfg: &CapacityConfig) -> f64 {
    capacity(h, cfg).bits()
}

/// Capacity of a linear array versus its element count, with the ray count
/// held fixed.
pub fn sweep_antennas(
    params: ArrayParams,
    n_t: usize,
    n_r_values: &[usize],
    cfg: &CapacityConfig,
    phi_deg: f64,
) -> Result<SweepSeries> {
    validate_usize_values(n_r_values)?;
    let fan = RayFan::equal_angle(n_t, phi_deg)?;
    for &n_r in n_r_values {
        params.linear(n_r)?;
    }
    let rows: Vec<SweepRow> = n_r_values
        .par_iter()
        .map(|&n_r| {
            let geom = params.linear(n_r).expect("validated above");
            let h = build_channel(&geom, &fan);
            SweepRow {
                x: n_r as f64,
                ys: vec![capacity_bits(&h, cfg)],
            }
        })
        .collect();
    Ok(SweepSeries {
        spec: SweepSpec {
            swept: SweptVariable::AntennaCount,
            values: n_r_values.iter().map(|&v| v as f64).collect(),
            fixed_n_t: Some(n_t),
            fixed_n_r: None,
            snr: Some(cfg.snr()),
            phi_deg: Some(phi_deg),
            comparison: Comparison::None,
        },
        x_label: "n_r",
        y_labels: vec!["capacity_bits"],
        rows,
        metadata: SweepMetadata {
            wavelength: params.wavelength,
            spacing: params.spacing,
            setup: cfg.setup(),
            timestamp: None,
        },
    })
}

/// Capacity of a linear array versus the ray count, with the element count
/// held fixed.
pub fn sweep_rays(
    params: ArrayParams,
    n_r: usize,
    n_t_values: &[usize],
    cfg: &CapacityConfig,
    phi_deg: f64,
) -> Result<SweepSeries> {
    validate_usize_values(n_t_values)?;
    let geom = params.linear(n_r)?;
    for &n_t in n_t_values {
        if n_t == 0 {
            return Err(Error::EmptyFan);
        }
    }
    let rows: Vec<SweepRow> = n_t_values
        .par_iter()
        .map(|&n_t| {
            let fan = RayFan::equal_angle(n_t, phi_deg).expect("validated above");
            let h = build_channel(&geom, &fan);
            SweepRow {
                x: n_t as f64,
                ys: vec![capacity_bits(&h, cfg)],
            }
        })
        .collect();
    Ok(SweepSeries {
        spec: SweepSpec {
            swept: SweptVariable::RayCount,
            values: n_t_values.iter().map(|&v| v as f64).collect(),
            fixed_n_t: None,
            fixed_n_r: Some(n_r),
            snr: Some(cfg.snr()),
            phi_deg: Some(phi_deg),
            comparison: Comparison::None,
        },
        x_label: "n_t",
        y_labels: vec!["capacity_bits"],
        rows,
        metadata: SweepMetadata {
            wavelength: params.wavelength,
            spacing: params.spacing,
            setup: cfg.setup(),
            timestamp: None,
        },
    })
}

/// MIMO capacity of a fixed linear configuration next to the SISO AWGN
/// baseline, over an SNR grid in dB.
pub fn sweep_snr_vs_siso(
    params: ArrayParams,
    n_r: usize,
    n_t: usize,
    snr_db_values: &[f64],
    setup: PowerSetup,
) -> Result<SweepSeries> {
    validate_f64_values(snr_db_values)?;
    let geom = params.linear(n_r)?;
    let fan = RayFan::equal_angle(n_t, 0.0)?;
    let h = build_channel(&geom, &fan);
    let rows: Vec<SweepRow> = snr_db_values
        .par_iter()
        .map(|&db| {
            let snr = snr_db_to_linear(db);
            let cfg = CapacityConfig::from_snr(snr, setup).expect("dB conversion is positive");
            let mimo = capacity_bits(&h, &cfg);
            let siso = siso_awgn_capacity(snr).expect("dB conversion is nonnegative");
            SweepRow {
                x: db,
                ys: vec![mimo, siso],
            }
        })
        .collect();
    Ok(SweepSeries {
        spec: SweepSpec {
            swept: SweptVariable::SnrDb,
            values: snr_db_values.to_vec(),
            fixed_n_t: Some(n_t),
            fixed_n_r: Some(n_r),
            snr: None,
            phi_deg: Some(0.0),
            comparison: Comparison::AgainstSiso,
        },
        x_label: "snr_db",
        y_labels: vec!["mimo_bits", "siso_bits"],
        rows,
        metadata: SweepMetadata {
            wavelength: params.wavelength,
            spacing: params.spacing,
            setup,
            timestamp: None,
        },
    })
}

/// Capacity of a square planar array versus the fan azimuth.
pub fn sweep_phi(
    params: ArrayParams,
    square_side: usize,
    n_t: usize,
    phi_deg_values: &[f64],
    cfg: &CapacityConfig,
) -> Result<SweepSeries> {
    validate_f64_values(phi_deg_values)?;
    for &phi in phi_deg_values {
        if !(0.0..=90.0).contains(&phi) {
            return Err(Error::PhiOutOfRange(phi));
        }
    }
    let geom = params.square(square_side)?;
    if n_t == 0 {
        return Err(Error::EmptyFan);
    }
    let rows: Vec<SweepRow> = phi_deg_values
        .par_iter()
        .map(|&phi| {
            let fan = RayFan::equal_angle(n_t, phi).expect("validated above");
            let h = build_channel(&geom, &fan);
            SweepRow {
                x: phi,
                ys: vec![capacity_bits(&h, cfg)],
            }
        })
        .collect();
    Ok(SweepSeries {
        spec: SweepSpec {
            swept: SweptVariable::PhiDeg,
            values: phi_deg_values.to_vec(),
            fixed_n_t: Some(n_t),
            fixed_n_r: Some(square_side * square_side),
            snr: Some(cfg.snr()),
            phi_deg: None,
            comparison: Comparison::None,
        },
        x_label: "phi_deg",
        y_labels: vec!["capacity_bits"],
        rows,
        metadata: SweepMetadata {
            wavelength: params.wavelength,
            spacing: params.spacing,
            setup: cfg.setup(),
            timestamp: None,
        },
    })
}

/// Linear versus square array with the same element count, at the
/// capacity-maximizing azimuth `phi = 90` degrees, over an SNR grid.
pub fn compare_linear_square(
    params: ArrayParams,
    n_elements: usize,
    n_t: usize,
    snr_db_values: &[f64],
    setup: PowerSetup,
) -> Result<SweepSeries> {
    let side = (n_elements as f64).sqrt().round() as usize;
    if side * side != n_elements {
        return Err(Error::NotASquare(n_elements));
    }
    validate_f64_values(snr_db_values)?;
    let linear = params.linear(n_elements)?;
    let square = params.square(side)?;
    let fan = RayFan::equal_angle(n_t, 90.0)?;
    let h_linear = build_channel(&linear, &fan);
    let h_square = build_channel(&square, &fan);
    let rows: Vec<SweepRow> = snr_db_values
        .par_iter()
        .map(|&db| {
            let cfg = CapacityConfig::from_snr(snr_db_to_linear(db), setup)
                .expect("dB conversion is positive");
            SweepRow {
                x: db,
                ys: vec![
                    capacity_bits(&h_linear, &cfg),
                    capacity_bits(&h_square, &cfg),
                ],
            }
        })
        .collect();
    Ok(SweepSeries {
        spec: SweepSpec {
            swept: SweptVariable::SnrDb,
            values: snr_db_values.to_vec(),
            fixed_n_t: Some(n_t),
            fixed_n_r: Some(n_elements),
            snr: None,
            phi_deg: Some(90.0),
            comparison: Comparison::LinearVsSquare,
        },
        x_label: "snr_db",
        y_labels: vec!["linear_bits", "square_bits"],
        rows,
        metadata: SweepMetadata {
            wavelength: params.wavelength,
            spacing: params.spacing,
            setup,
            timestamp: None,
        },
    })
}

/// 9 significant digits, scientific.
fn fmt9(v: f64) -> String {
    format!("{:.8e}", v)
}

fn fmt_x(swept: SweptVariable, x: f64) -> String {
    match swept {
        SweptVariable::AntennaCount | SweptVariable::RayCount => format!("{}", x as u64),
        SweptVariable::SnrDb | SweptVariable::PhiDeg => fmt9(x),
    }
}

impl SweepSeries {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "{CSV_FORMAT_LINE}")?;
        write!(w, "{}", self.x_label)?;
        for label in &self.y_labels {
            write!(w, ",{label}")?;
        }
        writeln!(w)?;
        for row in &self.rows {
            write!(w, "{}", fmt_x(self.spec.swept, row.x))?;
            for y in &row.ys {
                write!(w, ",{}", fmt9(*y))?;
            }
            writeln!(w)?;
        }
        writeln!(
            w,
            "# lambda={} spacing={} setup={}",
            fmt9(self.metadata.wavelength),
            fmt9(self.metadata.spacing),
            self.metadata.setup
        )?;
        if let Some(ts) = self.metadata.timestamp {
            writeln!(w, "# timestamp={ts}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }

    /// JSON mirror of the CSV content. Keys are emitted in sorted order, so
    /// reruns are byte-identical whenever the CSV is.
    pub fn to_json_string(&self) -> String {
        let mut metadata = json!({
            "lambda": self.metadata.wavelength,
            "spacing": self.metadata.spacing,
            "setup": self.metadata.setup.name(),
        });
        if let Some(ts) = self.metadata.timestamp {
            metadata["timestamp"] = json!(ts);
        }
        json!({
            "format": "raycap sweep v1",
            "swept": self.spec.swept.as_str(),
            "comparison": self.spec.comparison.as_str(),
            "x_label": self.x_label,
            "y_labels": self.y_labels,
            "metadata": metadata,
            "rows": self
                .rows
                .iter()
                .map(|r| json!({ "x": r.x, "y": r.ys }))
                .collect::<Vec<_>>(),
        })
        .to_string()
    }

    /// `(min, max)` of one y-column; quantifies how flat a series is.
    pub fn y_extent(&self, column: usize) -> Option<(f64, f64)> {
        if column >= self.y_labels.len() || self.rows.is_empty() {
            return None;
        }
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for row in &self.rows {
            min = min.min(row.ys[column]);
            max = max.max(row.ys[column]);
        }
        Some((min, max))
    }
}
