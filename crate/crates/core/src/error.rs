//! Error type shared by all modules of the crate.

use core::fmt;

/// Everything that can go wrong in the numerical pipeline.
///
/// Variants carry the index or stage at which a computation failed when
/// that is meaningful for diagnosis.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Curve has zero chordal length or too few distinct samples.
    DegenerateCurve,
    /// Chart image of a curve is not a graph over the expected axis.
    NotAGraph,
    /// No interior quadratic critical point (no sign change of the
    /// derivative, or curvature below the floor).
    NoQuadraticCritical,
    /// Point outside a chart domain or target rectangle.
    OutOfDomain,
    /// Newton inversion failed to converge.
    NewtonDiverged,
    /// Orbit left the map domain; payload is the first escape index.
    EscapedDomain(usize),
    /// Sampled 1D profile has more than one critical point.
    NotUnimodal,
    /// Singular values too close to separate contracting/expanding axes.
    SingularValueTie,
    /// Direction estimate did not reach the requested residual; payload is
    /// the last iterate count tried.
    NoConvergence(usize),
    /// Operation requires an invertible map but `b = 0` was supplied.
    NotADiffeomorphism,
    /// Parameter bracketing failed at the given cascade depth.
    BisectionFailed(usize),
    /// Candidate domain failed the periodicity or disjointness check.
    NoPeriodicDomain,
    /// Strong-stable foliation could not be integrated across the domain.
    FoliationIntegrationFailed,
    /// Straightened return failed the Hénon-like shape test.
    ShapeTestFailed,
    /// Cocycle norm exceeded 1e300 at the given iterate.
    CocycleOverflow(usize),
    /// No irregularity factor below the cap closes the inequality system.
    NoFit,
    /// Orbit too short for the requested diagnostic.
    InsufficientLength,
    /// Tangent-angle functional has no sign change along the section.
    NoTangency,
    /// Normal-form residual exceeded the tolerance; payload is the residual.
    NormalFormResidualTooLarge(f64),
    /// First-entry map failed strict monotonicity on samples.
    NotMonotone,
    /// Quadratic factorization rejected: second derivative at 0 is negative
    /// or below the curvature floor.
    NegativeCurvature,
    /// Map has a second sampled critical point.
    NotSingleCritical,
    /// Intersection of nested regions came out empty (numeric inconsistency).
    EmptyIntersection,
    /// Same-residue arcs overlap; payload is the offending index pair.
    OverlapDetected(usize, usize),
    /// Map is not injective along the sampled curve.
    NotInjectiveOnCurve,
    /// Cross-ratio configuration has an empty side interval.
    DegenerateConfiguration,
    /// Sampled iterate is not a diffeomorphism on the interval.
    NotDiffeomorphic,
    /// A Koebe hypothesis failed; payload names which one.
    HypothesisFailed(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateCurve => write!(f, "degenerate curve"),
            Error::NotAGraph => write!(f, "curve is not a graph in chart coordinates"),
            Error::NoQuadraticCritical => write!(f, "no quadratic critical point"),
            Error::OutOfDomain => write!(f, "point out of domain"),
            Error::NewtonDiverged => write!(f, "Newton iteration diverged"),
            Error::EscapedDomain(m) => write!(f, "orbit escaped domain at iterate {m}"),
            Error::NotUnimodal => write!(f, "profile is not unimodal"),
            Error::SingularValueTie => write!(f, "singular values too close to separate"),
            Error::NoConvergence(m) => write!(f, "no convergence after {m} iterates"),
            Error::NotADiffeomorphism => write!(f, "map is not a diffeomorphism (b = 0)"),
            Error::BisectionFailed(n) => write!(f, "bisection failed at depth {n}"),
            Error::NoPeriodicDomain => write!(f, "no verified periodic domain"),
            Error::FoliationIntegrationFailed => write!(f, "foliation integration failed"),
            Error::ShapeTestFailed => write!(f, "Henon-like shape test failed"),
            Error::CocycleOverflow(m) => write!(f, "cocycle overflow at iterate {m}"),
            Error::NoFit => write!(f, "no irregularity factor below cap"),
            Error::InsufficientLength => write!(f, "orbit too short"),
            Error::NoTangency => write!(f, "no tangency sign change found"),
            Error::NormalFormResidualTooLarge(r) => {
                write!(f, "normal form residual {r} exceeds tolerance")
            }
            Error::NotMonotone => write!(f, "first-entry map not strictly monotone"),
            Error::NegativeCurvature => write!(f, "second derivative at 0 not positive"),
            Error::NotSingleCritical => write!(f, "extra sampled critical point"),
            Error::EmptyIntersection => write!(f, "empty intersection of nested regions"),
            Error::OverlapDetected(i, k) => write!(f, "arcs {i} and {k} overlap"),
            Error::NotInjectiveOnCurve => write!(f, "map not injective on curve"),
            Error::DegenerateConfiguration => write!(f, "degenerate cross-ratio configuration"),
            Error::NotDiffeomorphic => write!(f, "iterate not diffeomorphic on interval"),
            Error::HypothesisFailed(which) => write!(f, "hypothesis failed: {which}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
