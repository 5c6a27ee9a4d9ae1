//! Search subroutines built on a [`Backend`]: minimal-index search, the
//! five vertex functions and their boosted (repeated) versions.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::backend::{Backend, BackendError, Bucket, Extremum};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("vertex function applied to an empty argument list")]
    EmptyArgs,
    #[error("{kind} expects Boolean arguments, got {value}")]
    NonBoolean { kind: VertexFn, value: f64 },
    #[error("repetition count must be at least 1")]
    ZeroRepetitions,
    #[error("start {start} is past the end of a list of length {len}")]
    StartOutOfRange { start: usize, len: usize },
    #[error(transparent)]
    Backend(#[from] BackendError),
}

/// `max(1, ceil(2 log2 x))`, the repetition count that drives a
/// `1/2`-error search down to `1/x^2`.
pub fn log_reps(x: usize) -> u32 {
    if x <= 1 {
        return 1;
    }
    ((2.0 * (x as f64).log2()).ceil() as u32).max(1)
}

/// Returns the minimal position `z > start` in `1..=len` with `pred(z)`.
///
/// Charges `ceil(c_grover * sqrt(z - start)) * log_reps(n_hat)` queries
/// (`z = len` when there is no hit); one share goes to the search bucket
/// and the repetitions to the boosting bucket. If every repetition misses,
/// the true minimum is skipped and the next hit after it (if any) is
/// returned instead. Any returned position satisfies `pred`.
pub fn first_one_search(
    backend: &mut Backend,
    len: usize,
    start: usize,
    n_hat: usize,
    pred: impl Fn(usize) -> bool,
) -> Result<Option<usize>, SearchError> {
    if start > len {
        return Err(SearchError::StartOutOfRange { start, len });
    }
    let hit = (start + 1..=len).find(|&p| pred(p));
    let span = hit.unwrap_or(len) - start;
    let reps = log_reps(n_hat);
    let unit = (backend.config().c_grover * (span as f64).sqrt()).ceil() as u64;
    backend.charge(Bucket::Search, unit);
    backend.charge(Bucket::Boosting, unit * u64::from(reps - 1));
    match hit {
        None => Ok(None),
        Some(z) => {
            if backend.repeated_miss(span, reps)? {
                Ok((z + 1..=len).find(|&p| pred(p)))
            } else {
                Ok(Some(z))
            }
        }
    }
}

/// [`first_one_search`] over an out-list with the predicate
/// "not yet visited and not a sink".
///
/// `visited` and `degree` are indexed by vertex id.
pub fn first_one_search_prime(
    backend: &mut Backend,
    list: &[usize],
    visited: &[bool],
    degree: impl Fn(usize) -> usize,
    start: usize,
    n_hat: usize,
) -> Result<Option<usize>, SearchError> {
    first_one_search(backend, list.len(), start, n_hat, |p| {
        let u = list[p - 1];
        !visited[u - 1] && degree(u) > 0
    })
}

/// The per-vertex functions with quantum search implementations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexFn {
    And,
    Or,
    Nand,
    Max,
    Min,
}

impl VertexFn {
    pub const ALL: [VertexFn; 5] = [Self::And, Self::Or, Self::Nand, Self::Max, Self::Min];

    pub fn is_boolean(self) -> bool {
        matches!(self, Self::And | Self::Or | Self::Nand)
    }

    /// Exact classical evaluation.
    pub fn apply(self, args: &[f64]) -> f64 {
        match self {
            Self::And => bool_val(args.iter().all(|&a| a == 1.0)),
            Self::Or => bool_val(args.contains(&1.0)),
            Self::Nand => bool_val(args.contains(&0.0)),
            Self::Max => args.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Self::Min => args.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    /// For Boolean kinds: the searched-for argument value and the result
    /// reported when one is found.
    fn search_target(self) -> Option<(f64, f64)> {
        match self {
            Self::And => Some((0.0, 0.0)),
            Self::Or => Some((1.0, 1.0)),
            Self::Nand => Some((0.0, 1.0)),
            Self::Max | Self::Min => None,
        }
    }
}

fn bool_val(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

impl fmt::Display for VertexFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::And => "AND",
            Self::Or => "OR",
            Self::Nand => "NAND",
            Self::Max => "MAX",
            Self::Min => "MIN",
        })
    }
}

impl FromStr for VertexFn {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "AND" => Ok(Self::And),
            "OR" => Ok(Self::Or),
            "NAND" => Ok(Self::Nand),
            "MAX" => Ok(Self::Max),
            "MIN" => Ok(Self::Min),
            _ => Err(format!("unknown vertex function {s:?}")),
        }
    }
}

/// Value of a vertex function plus the (1-based) argument that produced it,
/// when the search returned one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub value: f64,
    pub arg: Option<usize>,
}

/// A single, unboosted invocation.
pub fn vertex_fn(backend: &mut Backend, kind: VertexFn, args: &[f64]) -> Result<Outcome, SearchError> {
    if args.is_empty() {
        return Err(SearchError::EmptyArgs);
    }
    match kind.search_target() {
        Some((target, found_value)) => {
            if let Some(&value) = args.iter().find(|&&a| a != 0.0 && a != 1.0) {
                return Err(SearchError::NonBoolean { kind, value });
            }
            let found = backend.grover_detect(args.len(), |p| args[p - 1] == target)?;
            Ok(match found {
                Some(p) => Outcome { value: found_value, arg: Some(p) },
                None => Outcome { value: 1.0 - found_value, arg: None },
            })
        }
        None => {
            let mode = if kind == VertexFn::Max { Extremum::Max } else { Extremum::Min };
            let (p, value) = backend.extremum_search(args, mode)?;
            Ok(Outcome { value, arg: Some(p) })
        }
    }
}

/// Runs [`vertex_fn`] `k` times and combines the results one-sidedly:
/// best value for MAX/MIN, "any run found its target" for AND, OR and NAND.
pub fn boosted(backend: &mut Backend, kind: VertexFn, args: &[f64], k: u32) -> Result<Outcome, SearchError> {
    if k == 0 {
        return Err(SearchError::ZeroRepetitions);
    }
    let previous = backend.set_bucket(Bucket::Search);
    let result = boosted_runs(backend, kind, args, k);
    backend.set_bucket(previous);
    result
}

fn boosted_runs(backend: &mut Backend, kind: VertexFn, args: &[f64], k: u32) -> Result<Outcome, SearchError> {
    let mut best = vertex_fn(backend, kind, args)?;
    backend.set_bucket(Bucket::Boosting);
    for _ in 1..k {
        let run = vertex_fn(backend, kind, args)?;
        let improves = match kind {
            VertexFn::Max => run.value > best.value,
            VertexFn::Min => run.value < best.value,
            // the found target is certain, so a single hit decides
            _ => best.arg.is_none() && run.arg.is_some(),
        };
        if improves {
            best = run;
        }
    }
    Ok(best)
}

/// How many repetitions boosted searches use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoostPolicy {
    /// `ceil(2 log2 n_hat)`.
    LogNHat,
    /// `ceil(2 log2 q)` with `q` the longest path from the answer vertex.
    LogQ,
    Explicit(u32),
}

impl FromStr for BoostPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "log-n" | "log-n-hat" | "log-nhat" => Ok(Self::LogNHat),
            "log-q" => Ok(Self::LogQ),
            other => other
                .parse::<u32>()
                .ok()
                .filter(|&k| k >= 1)
                .map(Self::Explicit)
                .ok_or_else(|| format!("policy must be log-n, log-q or a positive integer, got {s:?}")),
        }
    }
}

impl fmt::Display for BoostPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LogNHat => f.write_str("log-n"),
            Self::LogQ => f.write_str("log-q"),
            Self::Explicit(k) => write!(f, "{k}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::BackendConfig;

    fn zero() -> Backend {
        Backend::new(BackendConfig::zero_error()).unwrap()
    }

    #[test]
    fn log_reps_values() {
        assert_eq!(log_reps(0), 1);
        assert_eq!(log_reps(1), 1);
        assert_eq!(log_reps(2), 2);
        assert_eq!(log_reps(5), 5);
        assert_eq!(log_reps(16), 8);
    }

    #[test]
    fn first_one_examples() {
        let mut b = zero();
        let p = [false, true, true];
        assert_eq!(first_one_search(&mut b, 3, 0, 4, |i| p[i - 1]).unwrap(), Some(2));
        assert_eq!(first_one_search(&mut b, 3, 0, 4, |_| false).unwrap(), None);
        let p = [true, false, true];
        assert_eq!(first_one_search(&mut b, 3, 1, 4, |i| p[i - 1]).unwrap(), Some(3));
        assert!(first_one_search(&mut b, 3, 4, 4, |_| true).is_err());
    }

    #[test]
    fn first_one_charge_formula() {
        let mut b = zero();
        // hit at 5 from start 1: ceil(sqrt 4) * ceil(2 log2 16) = 2 * 8
        first_one_search(&mut b, 9, 1, 16, |i| i >= 5).unwrap();
        assert_eq!(b.ledger().search, 2);
        assert_eq!(b.ledger().boosting, 14);
        // no hit: span runs to the end of the list
        let mut b = zero();
        first_one_search(&mut b, 10, 1, 16, |_| false).unwrap();
        assert_eq!(b.ledger().quantum(), 3 * 8);
    }

    #[test]
    fn first_one_skips_are_genuine() {
        let mut b = Backend::new(BackendConfig::default().with_seed(11)).unwrap();
        let p = [false, true, false, true, true, false];
        let mut skipped = 0;
        for _ in 0..2000 {
            match first_one_search(&mut b, 6, 0, 2, |i| p[i - 1]).unwrap() {
                Some(2) => {}
                Some(z) => {
                    assert!(p[z - 1]);
                    skipped += 1;
                }
                None => panic!("later hits exist"),
            }
        }
        // n_hat = 2 gives two repetitions at error 1/2 each
        assert!((skipped as f64 / 2000.0 - 0.25).abs() < 0.05, "{skipped}");
    }

    #[test]
    fn prime_variant_skips_sinks_and_visited() {
        let mut b = zero();
        // D_1 = [2, 3], vertex 2 is a sink, vertex 3 has out-degree 2
        let degree = |v: usize| [2usize, 0, 2][v - 1];
        let visited = [true, false, false];
        assert_eq!(first_one_search_prime(&mut b, &[2, 3], &visited, degree, 0, 2).unwrap(), Some(2));
        let visited = [true, false, true];
        assert_eq!(first_one_search_prime(&mut b, &[2, 3], &visited, degree, 0, 2).unwrap(), None);
        let all_sinks = |_: usize| 0;
        assert_eq!(first_one_search_prime(&mut b, &[2, 3], &[false; 3], all_sinks, 0, 2).unwrap(), None);
    }

    #[test]
    fn vertex_fn_examples() {
        let mut b = zero();
        assert_eq!(vertex_fn(&mut b, VertexFn::And, &[1.0, 1.0, 1.0]).unwrap().value, 1.0);
        assert_eq!(vertex_fn(&mut b, VertexFn::Nand, &[1.0, 0.0, 1.0]).unwrap().value, 1.0);
        assert_eq!(vertex_fn(&mut b, VertexFn::Or, &[0.0, 0.0]).unwrap().value, 0.0);
        let max = vertex_fn(&mut b, VertexFn::Max, &[2.0, 7.0, 7.0]).unwrap();
        assert_eq!(max.value, 7.0);
        assert!(matches!(max.arg, Some(2) | Some(3)));
        assert_eq!(vertex_fn(&mut b, VertexFn::Min, &[]), Err(SearchError::EmptyArgs));
        assert!(matches!(
            vertex_fn(&mut b, VertexFn::Or, &[0.5]),
            Err(SearchError::NonBoolean { .. })
        ));
    }

    #[test]
    fn zero_error_boosting_is_exact_and_charges_k_runs() {
        for k in [1, 3, 8] {
            let mut b = zero();
            let args = [4.0, 9.0, 1.0, 9.0, 3.0, 0.0, 2.0, 5.0, 6.0];
            assert_eq!(boosted(&mut b, VertexFn::Max, &args, k).unwrap().value, 9.0);
            assert_eq!(b.ledger().quantum(), u64::from(k) * 6);
            assert_eq!(b.ledger().boosting, u64::from(k - 1) * 6);

            let mut b = zero();
            assert_eq!(boosted(&mut b, VertexFn::And, &[1.0; 9], k).unwrap().value, 1.0);
            assert_eq!(b.ledger().quantum(), u64::from(k) * 3);
        }
        assert_eq!(boosted(&mut zero(), VertexFn::Or, &[1.0], 0), Err(SearchError::ZeroRepetitions));
    }

    #[test]
    fn policy_parsing() {
        assert_eq!("log-n".parse(), Ok(BoostPolicy::LogNHat));
        assert_eq!("log-q".parse(), Ok(BoostPolicy::LogQ));
        assert_eq!("3".parse(), Ok(BoostPolicy::Explicit(3)));
        assert!("0".parse::<BoostPolicy>().is_err());
        assert_eq!(BoostPolicy::Explicit(4).to_string().parse(), Ok(BoostPolicy::Explicit(4)));
    }
}
