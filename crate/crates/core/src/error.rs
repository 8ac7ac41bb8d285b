use thiserror::Error;

/// Every failure surfaced by the library, qualified by the module that raised it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("fan-core: {0}")]
    Fan(#[from] FanError),

    #[error("moduli-numerics: {0}")]
    Degree(#[from] DegreeError),

    #[error("theta-ring: parameter mismatch (left r={left_r}, g={left_g}; right r={right_r}, g={right_g})")]
    ThetaMismatch {
        left_r: usize,
        left_g: u32,
        right_r: usize,
        right_g: u32,
    },

    #[error("localization-engine: {0}")]
    Localization(#[from] LocalizationError),

    #[error("jacobian-integration: {0}")]
    Jacobian(#[from] JacobianError),

    #[error("document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("fan has no rays")]
    Empty,
    #[error("ray {ray} has {found} coordinates, expected {expected}")]
    RayDimension {
        ray: usize,
        expected: usize,
        found: usize,
    },
    #[error("ray {ray} is zero")]
    ZeroRay { ray: usize },
    #[error("ray {ray} not primitive (gcd of entries is {gcd})")]
    NotPrimitive { ray: usize, gcd: i64 },
    #[error("duplicate ray: rays {first} and {second} coincide")]
    DuplicateRay { first: usize, second: usize },
    #[error("max cone {cone} references ray {index}, which does not exist")]
    RayIndexOutOfRange { cone: usize, index: usize },
    #[error("max cone {cone} has {found} distinct rays, expected {expected}")]
    ConeSize {
        cone: usize,
        expected: usize,
        found: usize,
    },
    #[error("max cones {first} and {second} coincide")]
    DuplicateCone { first: usize, second: usize },
    #[error("max cone {cone} is not unimodular (determinant {det})")]
    NonUnimodular { cone: usize, det: i64 },
    #[error("facet {facet:?} of max cone {cone} lies in {count} max cones, expected 2")]
    FacetPairing {
        cone: usize,
        facet: Vec<usize>,
        count: usize,
    },
    #[error("max cones do not form a connected complex (cone {cone} unreachable from cone 1)")]
    Disconnected { cone: usize },
    #[error("ray {ray} lies in no max cone")]
    UnusedRay { ray: usize },
    #[error("distinguished index {index} out of range (there are {count} max cones)")]
    DistinguishedOutOfRange { index: usize, count: usize },
    #[error("max cone index {index} out of range (there are {count} max cones)")]
    ConeIndexOutOfRange { index: usize, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("expected {expected} free degrees (one per ray outside the distinguished cone), got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("d_rho <= 2g-1 at rho={ray} (d={degree}, g={genus})")]
    BelowBound { ray: usize, degree: i64, genus: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizationError {
    #[error("direction pairing vanishes at max cone {cone}, ray {ray}")]
    DegenerateDirection { cone: usize, ray: usize },
    #[error("weight c = 0 in the expansion of the factor for ray {ray}")]
    ZeroWeight { ray: usize },
    #[error("direction has {found} coordinates, expected {expected}")]
    DirectionDimension { expected: usize, found: usize },
    #[error("exponent vector has {found} entries, expected {expected}")]
    ExponentLength { expected: usize, found: usize },
    #[error("noncancellation: coefficient of t^{exponent} is {coefficient}")]
    Noncancellation { exponent: i64, coefficient: String },
    #[error("m_r not positive (m_r = {value})")]
    ExplicitInfeasible { value: i64 },
    #[error("explicit exponents: {0}")]
    ExplicitShape(String),
    #[error("ray subset index {index} out of range")]
    SubsetIndex { index: usize },
    #[error("output not homogeneous of theta degree {expected}")]
    Inhomogeneous { expected: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JacobianError {
    #[error("degree mismatch: sum of exponents {found} != dim_V {expected}")]
    DegreeMismatch { expected: i64, found: i64 },
    #[error("2gl = {0} exceeds the 64 supported odd generators")]
    TooManyGenerators(usize),
    #[error("parameter mismatch: class over r={class_rays}, g={class_genus}; map over r={map_rays}, g={map_genus}")]
    ParameterMismatch {
        class_rays: usize,
        class_genus: u32,
        map_rays: usize,
        map_genus: u32,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
