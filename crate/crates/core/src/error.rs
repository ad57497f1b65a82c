use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{n} has a composite cofactor {cofactor} beyond trial bound {trial_bound}")]
    NotFullyFactored {
        n: u128,
        cofactor: u128,
        trial_bound: u64,
    },
    #[error("degenerate triple ({0}, {1}, {2}): entries must be nonzero and sum to zero")]
    Degenerate(i128, i128, i128),
    #[error("integer overflow: values are limited to 2^127")]
    Overflow,
    #[error("height {0} < 3: log log H is not positive")]
    HeightTooSmall(u128),
    #[error("result exceeds the memory cap of {cap} entries")]
    TooLarge { cap: usize },
    #[error("zeta pole: argument {0} <= 1")]
    ZetaPole(f64),
    #[error("zeta pole: argument {0} <= 1")]
    Pole(f64),
    #[error("no bracket found for saddle point (x = {x}, y = {y})")]
    NoBracket { x: f64, y: f64 },
    #[error("{what} = {value} outside supported range")]
    RangeExceeded { what: &'static str, value: f64 },
    #[error("pi(y) = {pi_y} < 3K = {}", 3 * .k)]
    InsufficientPrimes { pi_y: u64, k: u64 },
    #[error("divergent parameter c = {c}: requires c > {abscissa}")]
    DivergentParameter { c: f64, abscissa: f64 },
    #[error("epsilon = {0} must lie in (0, 1/2)")]
    BadEpsilon(f64),
    #[error("delta = {0} must lie in (0, 1/4]")]
    BadDelta(f64),
    #[error("Euler factor at p = {0} has a pole")]
    PoleFactor(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
