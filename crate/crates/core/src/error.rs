use thiserror::Error;

use crate::dynamics::Trajectory;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("composition requires a zero constant term, found {0}")]
    NonzeroConstantTerm(String),

    #[error("reciprocal requires a nonzero constant term")]
    ZeroConstantTerm,

    #[error("not a diffeomorphism germ: {0}")]
    NotDiffeo(String),

    #[error("germ vanishes through order {order}; truncated data cannot decide")]
    ZeroGerm { order: usize },

    #[error("no rational scaling: c^{exponent} = {target} has no rational solution")]
    IrrationalScaling { exponent: u32, target: String },

    #[error("normal form obstructed at degree {degree}: residue {residue} is an RK invariant")]
    Obstructed { degree: usize, residue: String },

    #[error("expected a Liouville field, got a general plane field")]
    KindMismatch,

    #[error("field is not of Liouville kind")]
    NotLiouville,

    #[error("family at the parameter origin does not match the model")]
    FamilyMismatch,

    #[error("multiplier {0} is resonant (a = ±1)")]
    ResonantMultiplier(String),

    #[error("Hamiltonian depends on z")]
    HamiltonianDependsOnZ,

    #[error("x/y components depend on z")]
    ComponentsDependOnZ,

    #[error("linear part vanishes (a = 0)")]
    ZeroLinearPart,

    #[error("field is not a combination of the homogeneous Liouville fields: {0}")]
    NotInLiouvilleSpan(String),

    #[error("trajectory escaped at t = {time}")]
    StepOverflow { time: f64, partial: Box<Trajectory> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Stable machine-readable name, used by the CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonzeroConstantTerm(_) => "NonzeroConstantTerm",
            Error::ZeroConstantTerm => "ZeroConstantTerm",
            Error::NotDiffeo(_) => "NotDiffeo",
            Error::ZeroGerm { .. } => "ZeroGerm",
            Error::IrrationalScaling { .. } => "IrrationalScaling",
            Error::Obstructed { .. } => "Obstructed",
            Error::KindMismatch => "KindMismatch",
            Error::NotLiouville => "NotLiouville",
            Error::FamilyMismatch => "FamilyMismatch",
            Error::ResonantMultiplier(_) => "ResonantMultiplier",
            Error::HamiltonianDependsOnZ => "HamiltonianDependsOnZ",
            Error::ComponentsDependOnZ => "ComponentsDependOnZ",
            Error::ZeroLinearPart => "ZeroLinearPart",
            Error::NotInLiouvilleSpan(_) => "NotInLiouvilleSpan",
            Error::StepOverflow { .. } => "StepOverflow",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Invariant(_) => "Invariant",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
