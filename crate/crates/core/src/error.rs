use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `(n, m)` outside `m <= n` and (`m >= 2` or `m = 1, n >= 3`).
    InvalidBipartite { n: usize, m: usize },
    /// Complete graph with fewer than three vertices.
    InvalidComplete { n: usize },
    /// Graph failed validation at construction.
    InvalidGraph(&'static str),
    /// A configuration, log or start set does not fit the graph it is used with.
    Mismatch(&'static str),
    /// Parameter outside its domain.
    Domain(&'static str),
    /// Dense enumeration would exceed the state-space guard.
    StateSpaceTooLarge { states: u128, limit: usize },
    /// The restricted kernel is reducible, so the QSD is not unique.
    Reducible,
    /// Power iteration ran out of iterations.
    NoConvergence { iterations: usize, residual: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidBipartite { n, m } => write!(
                f,
                "invalid K_{{n,m}} with n = {n}, m = {m}: need m <= n and either m >= 2 or (m = 1 and n >= 3)"
            ),
            Error::InvalidComplete { n } => {
                write!(f, "complete graph needs at least 3 vertices, got {n}")
            }
            Error::InvalidGraph(why) => write!(f, "invalid graph: {why}"),
            Error::Mismatch(why) => write!(f, "mismatch: {why}"),
            Error::Domain(why) => write!(f, "parameter out of range: {why}"),
            Error::StateSpaceTooLarge { states, limit } => write!(
                f,
                "state space of {states} states exceeds the enumeration limit of {limit}"
            ),
            Error::Reducible => write!(f, "restricted transition kernel is reducible"),
            Error::NoConvergence {
                iterations,
                residual,
            } => write!(
                f,
                "power iteration did not converge after {iterations} iterations (last residual {residual:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// True for failures of a numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}
