use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The RIS centre lies in the plane `y = y_t`, so the surface contains the transmitter.
    #[error("ris_center: RIS plane contains the transmitter (y_s == y_t)")]
    RisInTxPlane,

    /// A beam edge is parallel to or misses the RIS plane.
    #[error("hpbw: degenerate beam, edge does not intersect the RIS plane ({0})")]
    DegenerateBeam(String),

    #[error("fraunhofer: zero effective aperture (n_eff = 0)")]
    ZeroAperture,

    #[error("layout: empty element layout")]
    EmptyLayout,

    #[error("layout: {available} elements available, {required} required")]
    InsufficientElements { available: usize, required: usize },

    #[error("{function}: argument out of domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    /// Clamp of an inverse-trig argument exceeded the rounding tolerance.
    #[error("{0}: inverse trig argument outside [-1, 1] beyond tolerance")]
    TrigArgument(&'static str),

    #[error("{key}: {message}")]
    Parameter { key: String, message: String },

    #[error("scenario invalid: {0}")]
    Invalid(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parameter(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parameter {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
