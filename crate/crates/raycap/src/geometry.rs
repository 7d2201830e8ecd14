//! Antenna array layouts and plane-wave steering gains.
//!
//! An [`ArrayGeometry`] places the elements of a uniform linear or planar
//! array in 3-D space. [`steering_gain`] gives the unit-modulus complex
//! gain a plane wave from a [`RayDirection`] induces at a single element:
//! `exp(j * k * r_hat . r)` with wavenumber `k = 2*pi/lambda`.
//!
//! Angles are degrees at every interface and converted to radians once,
//! internally.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

/// A point (or free vector) in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(&self, other: Position3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(&self) -> f64 {
        self.dot(*self).sqrt()
    }
}

/// Element arrangement of a uniform array, spacings in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArrayLayout {
    /// `elements` points along the z-axis, `spacing` apart, first at the origin.
    Linear { elements: usize, spacing: f64 },
    /// `rows x cols` grid in the yz-plane starting at the origin; row index
    /// advances along y by `spacing_y`, column index along z by `spacing_z`.
    Planar {
        rows: usize,
        cols: usize,
        spacing_y: f64,
        spacing_z: f64,
    },
}

/// A uniform antenna array: layout plus carrier wavelength.
///
/// The wavenumber `k = 2*pi/lambda` is always derived on demand so the two
/// can never disagree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    layout: ArrayLayout,
    wavelength: f64,
}

fn check_wavelength(wavelength: f64) -> Result<()> {
    if !wavelength.is_finite() || wavelength <= 0.0 {
        return Err(Error::BadWavelength(wavelength));
    }
    Ok(())
}

fn check_spacing(spacing: f64) -> Result<()> {
    if !spacing.is_finite() || spacing <= 0.0 {
        return Err(Error::BadSpacing(spacing));
    }
    Ok(())
}

impl ArrayGeometry {
    /// Uniform linear array of `elements` points along the z-axis.
    pub fn linear(elements: usize, wavelength: f64, spacing: f64) -> Result<Self> {
        if elements == 0 {
            return Err(Error::EmptyArray);
        }
        check_wavelength(wavelength)?;
        check_spacing(spacing)?;
        Ok(Self {
            layout: ArrayLayout::Linear { elements, spacing },
            wavelength,
        })
    }

    /// Uniform `rows x cols` planar array in the yz-plane.
    pub fn planar(
        rows: usize,
        cols: usize,
        wavelength: f64,
        spacing_y: f64,
        spacing_z: f64,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyArray);
        }
        check_wavelength(wavelength)?;
        check_spacing(spacing_y)?;
        check_spacing(spacing_z)?;
        Ok(Self {
            layout: ArrayLayout::Planar {
                rows,
                cols,
                spacing_y,
                spacing_z,
            },
            wavelength,
        })
    }

    pub fn layout(&self) -> ArrayLayout {
        self.layout
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Wavenumber `k = 2*pi/lambda`, derived, never stored.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn n_elements(&self) -> usize {
        match self.layout {
            ArrayLayout::Linear { elements, .. } => elements,
            ArrayLayout::Planar { rows, cols, .. } => rows * cols,
        }
    }

    /// Element positions in construction order.
    ///
    /// Linear arrays place element `m` at `(0, 0, m*d)`. Planar arrays place
    /// element `(m, n)` at `(0, m*d_y, n*d_z)` flattened row-major, so the
    /// flat index is `m*cols + n`.
    pub fn positions(&self) -> Vec<Position3> {
        match self.layout {
            ArrayLayout::Linear { elements, spacing } => (0..elements)
                .map(|m| Position3::new(0.0, 0.0, m as f64 * spacing))
                .collect(),
            ArrayLayout::Planar {
                rows,
                cols,
                spacing_y,
                spacing_z,
            } => {
                let mut out = Vec::with_capacity(rows * cols);
                for m in 0..rows {
                    for n in 0..cols {
                        out.push(Position3::new(
                            0.0,
                            m as f64 * spacing_y,
                            n as f64 * spacing_z,
                        ));
                    }
                }
                out
            }
        }
    }

    /// Positions of a linear array; rejects planar layouts.
    pub fn linear_positions(&self) -> Result<Vec<Position3>> {
        match self.layout {
            ArrayLayout::Linear { .. } => Ok(self.positions()),
            ArrayLayout::Planar { .. } => Err(Error::NotLinear),
        }
    }

    /// Positions of a planar array; rejects linear layouts.
    pub fn planar_positions(&self) -> Result<Vec<Position3>> {
        match self.layout {
            ArrayLayout::Planar { .. } => Ok(self.positions()),
            ArrayLayout::Linear { .. } => Err(Error::NotPlanar),
        }
    }
}

impl fmt::Display for ArrayGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.layout {
            ArrayLayout::Linear { elements, spacing } => write!(
                f,
                "linear(n={}, d={} m, lambda={} m)",
                elements, spacing, self.wavelength
            ),
            ArrayLayout::Planar {
                rows,
                cols,
                spacing_y,
                spacing_z,
            } => write!(
                f,
                "planar({}x{}, d_y={} m, d_z={} m, lambda={} m)",
                rows, cols, spacing_y, spacing_z, self.wavelength
            ),
        }
    }
}

/// Wavelength and spacing shared by every array a sweep constructs.
///
/// Element counts are supplied per sweep point; the spacing is an explicit
/// parameter everywhere so a half-wavelength default stays a configuration
/// choice, not a constant baked into the math.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayParams {
    pub wavelength: f64,
    pub spacing: f64,
}

impl ArrayParams {
    /// The conventional `d = lambda/2` spacing.
    pub fn half_wavelength(wavelength: f64) -> Self {
        Self {
            wavelength,
            spacing: wavelength / 2.0,
        }
    }

    pub fn linear(&self, elements: usize) -> Result<ArrayGeometry> {
        ArrayGeometry::linear(elements, self.wavelength, self.spacing)
    }

    pub fn square(&self, side: usize) -> Result<ArrayGeometry> {
        ArrayGeometry::planar(side, side, self.wavelength, self.spacing, self.spacing)
    }

    pub fn planar(&self, rows: usize, cols: usize) -> Result<ArrayGeometry> {
        ArrayGeometry::planar(rows, cols, self.wavelength, self.spacing, self.spacing)
    }
}

/// Incident ray direction: polar angle `theta` from the z-axis in
/// `[0, 180]` degrees, azimuth `phi` normalized to `[0, 360)` degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayDirection {
    theta_deg: f64,
    phi_deg: f64,
}

impl RayDirection {
    pub fn new(theta_deg: f64, phi_deg: f64) -> Result<Self> {
        if !theta_deg.is_finite() || !(0.0..=180.0).contains(&theta_deg) {
            return Err(Error::ThetaOutOfRange(theta_deg));
        }
        if !phi_deg.is_finite() {
            return Err(Error::NonFiniteAngle(phi_deg));
        }
        Ok(Self {
            theta_deg,
            phi_deg: phi_deg.rem_euclid(360.0),
        })
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }

    pub fn phi_deg(&self) -> f64 {
        self.phi_deg
    }

    /// Unit vector `(sin t cos p, sin t sin p, cos t)` pointing along the ray.
    pub fn unit_vector(&self) -> Position3 {
        let (st, ct) = self.theta_deg.to_radians().sin_cos();
        let (sp, cp) = self.phi_deg.to_radians().sin_cos();
        Position3::new(st * cp, st * sp, ct)
    }
}

impl fmt::Display for RayDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(theta={} deg, phi={} deg)",
            self.theta_deg, self.phi_deg
        )
    }
}

/// Complex gain `exp(j * (2*pi/lambda) * (r_hat . pos))` at one element.
///
/// Always unit modulus up to floating rounding.
pub fn steering_gain(pos: Position3, dir: RayDirection, wavelength: f64) -> Result<Complex64> {
    check_wavelength(wavelength)?;
    Ok(phase_gain(pos, dir.unit_vector(), 2.0 * PI / wavelength))
}

/// Gain from a precomputed unit vector; hot path for matrix construction.
pub(crate) fn phase_gain(pos: Position3, unit: Position3, wavenumber: f64) -> Complex64 {
    Complex64::cis(wavenumber * unit.dot(pos))
}
