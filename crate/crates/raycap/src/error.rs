use thiserror::Error;

/// Errors reported by the raycap library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("array must have at least one element")]
    EmptyArray,
    #[error("element spacing must be positive and finite, got {0}")]
    BadSpacing(f64),
    #[error("wavelength must be positive and finite, got {0}")]
    BadWavelength(f64),
    #[error("theta must lie in [0, 180] degrees, got {0}")]
    ThetaOutOfRange(f64),
    #[error("angle must be finite, got {0}")]
    NonFiniteAngle(f64),
    #[error("operation requires a linear array layout")]
    NotLinear,
    #[error("operation requires a planar array layout")]
    NotPlanar,
    #[error("ray fan must contain at least one direction")]
    EmptyFan,
    #[error("channel has {matrix_rows} rows but the geometry has {geometry_elements} elements")]
    DimensionMismatch {
        matrix_rows: usize,
        geometry_elements: usize,
    },
    #[error("argument must be finite, got {0}")]
    NonFiniteArgument(f64),
    #[error("snr must be nonnegative and finite, got {0}")]
    NegativeSnr(f64),
    #[error("power must be positive and finite, got {0}")]
    BadPower(f64),
    #[error("noise power must be positive and finite, got {0}")]
    BadNoisePower(f64),
    #[error("log-det oracle supports at most 8 receive antennas, got {0}")]
    OracleTooLarge(usize),
    #[error("N={0} is outside the tabulated range {min}..={max}", min = crate::sphere::MIN_N, max = crate::sphere::MAX_N)]
    SphereTableRange(u32),
    #[error("cap angular radius must lie in (0, 180] degrees, got {0}")]
    BadCapRadius(f64),
    #[error("sweep values must not be empty")]
    EmptySweep,
    #[error("sweep values must be strictly increasing")]
    UnorderedSweep,
    #[error("phi must lie in [0, 90] degrees for this sweep, got {0}")]
    PhiOutOfRange(f64),
    #[error("element count {0} is not a perfect square")]
    NotASquare(usize),
    #[error("channel csv: {0}")]
    ChannelCsv(String),
}

pub type Result<T> = std::result::Result<T, Error>;
