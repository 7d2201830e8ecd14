//! Channel matrix construction and the Gram-matrix diagnostic.
//!
//! A [`RayFan`] holds the incident directions carrying the transmit
//! streams; [`build_channel`] evaluates the steering gain of every
//! (element, ray) pair into an `n_R x n_T` matrix whose columns are the
//! steering vectors of the rays.
//!
//! [`gram_diagnostic`] measures how close `H*H'/n_T` comes to the identity
//! for a given fan. The diagonal is exactly `n_T`; for a linear array under
//! the equal-angle fan the off-diagonal `(i, j)` converges to
//! `J0(k*d*|i-j|)` instead of zero, so the deviation is reported as data
//! rather than asserted away.

use std::fmt;
use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::geometry::{ArrayGeometry, ArrayLayout, Position3, RayDirection};
use crate::{Error, Result};

/// Ordered set of incident ray directions; one transmit stream per ray.
#[derive(Debug, Clone, PartialEq)]
pub struct RayFan {
    directions: Vec<RayDirection>,
}

impl RayFan {
    /// Fan from explicit directions, kept in construction order.
    pub fn new(directions: Vec<RayDirection>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::EmptyFan);
        }
        Ok(Self { directions })
    }

    /// The equal-angle fan: `theta_j = j * 180/n_T` degrees for
    /// `j = 0..n_T-1`, all sharing the azimuth `phi_deg`.
    pub fn equal_angle(n_t: usize, phi_deg: f64) -> Result<Self> {
        if n_t == 0 {
            return Err(Error::EmptyFan);
        }
        let step = 180.0 / n_t as f64;
        let directions = (0..n_t)
            .map(|j| RayDirection::new(j as f64 * step, phi_deg))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { directions })
    }

    pub fn n_t(&self) -> usize {
        self.directions.len()
    }

    pub fn directions(&self) -> &[RayDirection] {
        &self.directions
    }
}

impl fmt::Display for RayFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let first = &self.directions[0];
        let last = &self.directions[self.directions.len() - 1];
        write!(
            f,
            "fan(n_T={}, theta {}..{} deg, phi[0]={} deg)",
            self.n_t(),
            first.theta_deg(),
            last.theta_deg(),
            first.phi_deg()
        )
    }
}

/// Where a [`ChannelMatrix`] came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub geometry: String,
    pub fan: String,
}

/// Complex `n_R x n_T` gain matrix; entry `(i, j)` is the gain the `i`th
/// element receives from the `j`th ray. All entries are pure phases.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    entries: DMatrix<Complex64>,
    provenance: Provenance,
}

impl ChannelMatrix {
    pub fn n_r(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_t(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Gram matrix `H * H'` (`n_R x n_R`, Hermitian positive semidefinite).
    pub fn gram(&self) -> DMatrix<Complex64> {
        &self.entries * self.entries.adjoint()
    }

    /// CSV export: header `i,j,re,im`, one row per entry, 17 significant
    /// digits so a reload reproduces every f64 bit for bit.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "i,j,re,im")?;
        for i in 0..self.n_r() {
            for j in 0..self.n_t() {
                let z = self.entries[(i, j)];
                writeln!(w, "{},{},{:.16e},{:.16e}", i, j, z.re, z.im)?;
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }

    /// Parse the `write_csv` format back into a matrix.
    pub fn from_csv_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        match lines.next() {
            Some("i,j,re,im") => {}
            other => {
                return Err(Error::ChannelCsv(format!(
                    "expected header 'i,j,re,im', got {:?}",
                    other.unwrap_or("")
                )))
            }
        }
        let mut cells: Vec<(usize, usize, Complex64)> = Vec::new();
        let mut n_r = 0usize;
        let mut n_t = 0usize;
        for (lineno, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::ChannelCsv(format!(
                    "line {}: expected 4 fields, got {}",
                    lineno + 2,
                    fields.len()
                )));
            }
            let parse_err =
                |what: &str| Error::ChannelCsv(format!("line {}: bad {what}", lineno + 2));
            let i: usize = fields[0].parse().map_err(|_| parse_err("row index"))?;
            let j: usize = fields[1].parse().map_err(|_| parse_err("column index"))?;
            let re: f64 = fields[2].parse().map_err(|_| parse_err("re"))?;
            let im: f64 = fields[3].parse().map_err(|_| parse_err("im"))?;
            n_r = n_r.max(i + 1);
            n_t = n_t.max(j + 1);
            cells.push((i, j, Complex64::new(re, im)));
        }
        if cells.len() != n_r * n_t {
            return Err(Error::ChannelCsv(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                n_r * n_t,
                n_r,
                n_t,
                cells.len()
            )));
        }
        let mut entries = DMatrix::from_element(n_r, n_t, Complex64::new(0.0, 0.0));
        for (i, j, z) in cells {
            entries[(i, j)] = z;
        }
        Ok(Self {
            entries,
            provenance: Provenance {
                geometry: "csv import".to_string(),
                fan: "csv import".to_string(),
            },
        })
    }
}

/// Build `H` for a geometry and fan: `H[i][j] = exp(j*k*(r_hat_j . r_i))`.
///
/// Row 0 is all ones because the first element sits at the origin. Each
/// entry depends only on its own indices, so the result is independent of
/// evaluation order.
pub fn build_channel(geometry: &ArrayGeometry, fan: &RayFan) -> ChannelMatrix {
    let positions = geometry.positions();
    let k = geometry.wavenumber();
    let units: Vec<Position3> = fan.directions().iter().map(|d| d.unit_vector()).collect();
    let entries = DMatrix::from_fn(positions.len(), fan.n_t(), |i, j| {
        crate::geometry::phase_gain(positions[i], units[j], k)
    });
    ChannelMatrix {
        entries,
        provenance: Provenance {
            geometry: geometry.to_string(),
            fan: fan.to_string(),
        },
    }
}

/// Measured distance of `H*H'/n_T` from the identity, with the Bessel
/// prediction for linear arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct GramDiagnostic {
    n_t: usize,
    max_diag_error: f64,
    offdiag_normalized: DMatrix<Complex64>,
    bessel_prediction: Option<DMatrix<f64>>,
    max_bessel_deviation: Option<f64>,
}

impl GramDiagnostic {
    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// `max_i |(H*H')_ii - n_T|`.
    pub fn max_diag_error(&self) -> f64 {
        self.max_diag_error
    }

    /// `H*H'/n_T` with the diagonal zeroed.
    pub fn offdiag_normalized(&self) -> &DMatrix<Complex64> {
        &self.offdiag_normalized
    }

    /// Largest off-diagonal modulus of `H*H'/n_T`.
    pub fn max_offdiag_modulus(&self) -> f64 {
        let n = self.offdiag_normalized.nrows();
        let mut max = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    max = max.max(self.offdiag_normalized[(i, j)].norm());
                }
            }
        }
        max
    }

    /// `J0(k*d*|i-j|)`, the large-`n_T` limit of the normalized Gram entry
    /// for a linear array under the equal-angle fan. Absent for planar
    /// geometries. The diagonal holds `J0(0) = 1`.
    pub fn bessel_prediction(&self) -> Option<&DMatrix<f64>> {
        self.bessel_prediction.as_ref()
    }

    /// Largest off-diagonal `|gram/n_T - J0|`; absent for planar geometries.
    pub fn max_bessel_deviation(&self) -> Option<f64> {
        self.max_bessel_deviation
    }
}

/// Compare `H*H'` against `n_T * I` and, for linear arrays, against the
/// Bessel limit of the equal-angle fan.
pub fn gram_diagnostic(h: &ChannelMatrix, geometry: &ArrayGeometry) -> Result<GramDiagnostic> {
    if geometry.n_elements() != h.n_r() {
        return Err(Error::DimensionMismatch {
            matrix_rows: h.n_r(),
            geometry_elements: geometry.n_elements(),
        });
    }
    let n_r = h.n_r();
    let n_t = h.n_t();
    let nt_f = n_t as f64;
    let gram = h.gram();

    let mut max_diag_error = 0.0f64;
    for i in 0..n_r {
        max_diag_error = max_diag_error.max((gram[(i, i)] - Complex64::new(nt_f, 0.0)).norm());
    }

    let mut offdiag_normalized = gram.map(|z| z / nt_f);
    for i in 0..n_r {
        offdiag_normalized[(i, i)] = Complex64::new(0.0, 0.0);
    }

    let (bessel_prediction, max_bessel_deviation) = match geometry.layout() {
        ArrayLayout::Linear { spacing, .. } => {
            let kd = geometry.wavenumber() * spacing;
            let pred = DMatrix::from_fn(n_r, n_r, |i, j| j0(kd * (i as f64 - j as f64).abs()));
            let mut dev = 0.0f64;
            for i in 0..n_r {
                for j in 0..n_r {
                    if i != j {
                        let delta =
                            (offdiag_normalized[(i, j)] - Complex64::new(pred[(i, j)], 0.0)).norm();
                        dev = dev.max(delta);
                    }
                }
            }
            (Some(pred), Some(dev))
        }
        ArrayLayout::Planar { .. } => (None, None),
    };

    Ok(GramDiagnostic {
        n_t,
        max_diag_error,
        offdiag_normalized,
        bessel_prediction,
        max_bessel_deviation,
    })
}

/// Bessel function of the first kind, order zero.
///
/// Power series below [`J0_SERIES_CUTOFF`], Hankel asymptotic expansion
/// with smallest-term truncation above it; absolute error below 1e-9 over
/// `|x| <= 1000`.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFiniteArgument(x));
    }
    Ok(j0(x))
}

/// Switch point between the power series and the asymptotic expansion.
/// Both sides are accurate to ~1e-12 here; the boundary agreement is
/// checked in the tests.
pub(crate) const J0_SERIES_CUTOFF: f64 = 14.0;

pub(crate) fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < J0_SERIES_CUTOFF {
        j0_series(ax)
    } else {
        j0_asymptotic(ax)
    }
}

/// `J0(x) = sum_m (-1)^m (x/2)^(2m) / (m!)^2` by term recurrence.
pub(crate) fn j0_series(x: f64) -> f64 {
    let q = (x / 2.0) * (x / 2.0);
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for m in 1..=220u32 {
        let mf = m as f64;
        term *= -q / (mf * mf);
        sum += term;
        if term.abs() < 1e-17 {
            break;
        }
    }
    sum
}

/// Hankel expansion `J0(x) = sqrt(2/(pi x)) (P cos(x - pi/4) - Q sin(x - pi/4))`
/// with `P + iQ = sum_k i^k A_k / x^k`, `A_(k+1) = -A_k (2k+1)^2 / (8(k+1))`.
/// The series is truncated at its smallest term.
pub(crate) fn j0_asymptotic(x: f64) -> f64 {
    let mut p = 0.0f64;
    let mut q = 0.0f64;
    let mut term = 1.0f64; // A_k / x^k
    let mut prev_mag = f64::INFINITY;
    for k in 0..40u32 {
        let mag = term.abs();
        if mag >= prev_mag || mag < 1e-18 {
            break;
        }
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        prev_mag = mag;
        let kf = k as f64;
        term *= -((2.0 * kf + 1.0) * (2.0 * kf + 1.0)) / (8.0 * (kf + 1.0) * x);
    }
    let chi = x - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (chi.cos() * p - chi.sin() * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ArrayGeometry;
    use std::f64::consts::PI;

    #[test]
    fn equal_angle_fan_grids() {
        let thetas =
            |fan: &RayFan| -> Vec<f64> { fan.directions().iter().map(|d| d.theta_deg()).collect() };
        assert_eq!(thetas(&RayFan::equal_angle(1, 0.0).unwrap()), vec![0.0]);
        assert_eq!(
            thetas(&RayFan::equal_angle(2, 0.0).unwrap()),
            vec![0.0, 90.0]
        );
        assert_eq!(
            thetas(&RayFan::equal_angle(4, 0.0).unwrap()),
            vec![0.0, 45.0, 90.0, 135.0]
        );
    }

    #[test]
    fn empty_fan_rejected() {
        assert_eq!(RayFan::equal_angle(0, 0.0).unwrap_err(), Error::EmptyFan);
        assert_eq!(RayFan::new(vec![]).unwrap_err(), Error::EmptyFan);
    }

    #[test]
    fn single_element_channel_is_all_ones() {
        let geom = ArrayGeometry::linear(1, 1.0, 0.5).unwrap();
        let fan = RayFan::equal_angle(7, 30.0).unwrap();
        let h = build_channel(&geom, &fan);
        assert_eq!(h.n_r(), 1);
        assert_eq!(h.n_t(), 7);
        for j in 0..7 {
            assert_eq!(h.entry(0, j), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn two_by_two_half_wavelength_channel() {
        let geom = ArrayGeometry::linear(2, 1.0, 0.5).unwrap();
        let fan = RayFan::equal_angle(2, 0.0).unwrap();
        let h = build_channel(&geom, &fan);
        let tol = 1e-12;
        let expect = [[(1.0, 0.0), (1.0, 0.0)], [(-1.0, 0.0), (1.0, 0.0)]];
        for (i, row) in expect.iter().enumerate() {
            for (j, &(re, im)) in row.iter().enumerate() {
                let z = h.entry(i, j);
                assert!(
                    (z.re - re).abs() < tol && (z.im - im).abs() < tol,
                    "entry ({i},{j}) = {z}"
                );
            }
        }
    }

    #[test]
    fn broadside_column_is_all_ones() {
        let geom = ArrayGeometry::linear(3, 1.0, 0.5).unwrap();
        let fan =
            RayFan::new(vec![crate::geometry::RayDirection::new(90.0, 0.0).unwrap()]).unwrap();
        let h = build_channel(&geom, &fan);
        for i in 0..3 {
            let z = h.entry(i, 0);
            assert!((z.re - 1.0).abs() < 1e-12 && z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn unit_modulus_entries() {
        let geom = ArrayGeometry::planar(3, 4, 0.7, 0.41, 0.32).unwrap();
        let fan = RayFan::equal_angle(9, 72.0).unwrap();
        let h = build_channel(&geom, &fan);
        for i in 0..h.n_r() {
            for j in 0..h.n_t() {
                assert!((h.entry(i, j).norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gram_diagnostic_orthogonal_two_by_two() {
        let geom = ArrayGeometry::linear(2, 1.0, 0.5).unwrap();
        let h = build_channel(&geom, &RayFan::equal_angle(2, 0.0).unwrap());
        let d = gram_diagnostic(&h, &geom).unwrap();
        assert!(d.max_diag_error() < 1e-12);
        assert!(d.max_offdiag_modulus() < 1e-12);
        assert_eq!(d.n_t(), 2);
    }

    #[test]
    fn gram_diagnostic_single_row() {
        let geom = ArrayGeometry::linear(1, 1.0, 0.5).unwrap();
        let h = build_channel(&geom, &RayFan::equal_angle(7, 0.0).unwrap());
        let d = gram_diagnostic(&h, &geom).unwrap();
        assert_eq!(d.max_diag_error(), 0.0);
        assert_eq!(d.max_offdiag_modulus(), 0.0);
        assert_eq!(d.max_bessel_deviation(), Some(0.0));
    }

    #[test]
    fn gram_diagnostic_dimension_mismatch() {
        let geom2 = ArrayGeometry::linear(2, 1.0, 0.5).unwrap();
        let geom3 = ArrayGeometry::linear(3, 1.0, 0.5).unwrap();
        let h = build_channel(&geom2, &RayFan::equal_angle(4, 0.0).unwrap());
        assert_eq!(
            gram_diagnostic(&h, &geom3).unwrap_err(),
            Error::DimensionMismatch {
                matrix_rows: 2,
                geometry_elements: 3
            }
        );
    }

    #[test]
    fn gram_offdiag_approaches_bessel_limit() {
        // Off-diagonal of H*H'/n_T under the equal-angle fan tends to J0(kd),
        // not zero. Cross-check the matrix product against a direct sum.
        let n_t = 100_000;
        let geom = ArrayGeometry::linear(2, 1.0, 0.5).unwrap();
        let h = build_channel(&geom, &RayFan::equal_angle(n_t, 0.0).unwrap());
        let d = gram_diagnostic(&h, &geom).unwrap();

        let entry = d.offdiag_normalized()[(0, 1)];
        let j0_pi = -0.3042421776440939;
        assert!((entry.re - j0_pi).abs() < 1e-2, "re = {}", entry.re);
        assert!((entry - Complex64::new(j0_pi, 0.0)).norm() < 1e-2);
        assert!(d.max_bessel_deviation().unwrap() < 5.0 / (n_t as f64).sqrt());

        // Direct Riemann sum over the fan as an independent route.
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 0..n_t {
            let theta = (t as f64 * 180.0 / n_t as f64).to_radians();
            acc += Complex64::cis(-PI * theta.cos());
        }
        acc /= n_t as f64;
        assert!((entry - acc).norm() < 1e-9);
    }

    #[test]
    fn bessel_j0_reference_points() {
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
        // Frozen from the alternating power series evaluated independently.
        assert!((bessel_j0(PI).unwrap() - (-0.3042421776440939)).abs() < 1e-12);
        assert!(bessel_j0(2.404826).unwrap().abs() < 1e-5);
        assert!((bessel_j0(14.0).unwrap() - 0.17107347611045866).abs() < 1e-9);
        assert!((bessel_j0(1000.0).unwrap() - 0.024786686152420175).abs() < 1e-6);
        assert_eq!(bessel_j0(-PI).unwrap(), bessel_j0(PI).unwrap());
        assert!(bessel_j0(f64::NAN).is_err());
        assert!(bessel_j0(f64::INFINITY).is_err());
    }

    #[test]
    fn bessel_routes_agree_at_crossover() {
        let x = J0_SERIES_CUTOFF;
        let delta = (j0_series(x) - j0_asymptotic(x)).abs();
        assert!(delta < 1e-9, "series/asymptotic gap at {x}: {delta:e}");
        // And just inside each regime.
        assert!((j0_series(x - 0.5) - j0_asymptotic(x - 0.5)).abs() < 1e-9);
        assert!((j0_series(x + 0.5) - j0_asymptotic(x + 0.5)).abs() < 1e-9);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let geom = ArrayGeometry::linear(2, 1.0, 0.37).unwrap();
        let fan = RayFan::equal_angle(3, 11.0).unwrap();
        let h = build_channel(&geom, &fan);
        let csv = h.to_csv_string();
        assert!(csv.starts_with("i,j,re,im\n"));
        let back = ChannelMatrix::from_csv_str(&csv).unwrap();
        assert_eq!(back.n_r(), 2);
        assert_eq!(back.n_t(), 3);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(h.entry(i, j).re.to_bits(), back.entry(i, j).re.to_bits());
                assert_eq!(h.entry(i, j).im.to_bits(), back.entry(i, j).im.to_bits());
            }
        }
    }

    #[test]
    fn csv_rejects_malformed_input() {
        assert!(ChannelMatrix::from_csv_str("").is_err());
        assert!(ChannelMatrix::from_csv_str("a,b,c\n").is_err());
        assert!(ChannelMatrix::from_csv_str("i,j,re,im\n0,0,1.0\n").is_err());
        // Missing entry of a 1x2 matrix.
        assert!(ChannelMatrix::from_csv_str("i,j,re,im\n0,1,1.0,0.0\n").is_err());
    }
}
