//! Execution backends for the search primitives.
//!
//! A [`Backend`] owns a [`BackendConfig`], a [`QueryLedger`] and a call
//! counter. Every primitive invocation draws its randomness from a ChaCha
//! stream keyed by `(seed, call index)`, so runs are reproducible and
//! independent trials can execute on separate threads.
//!
//! Two kinds are available:
//!
//! * `CostModel` charges idealized query counts and fails with probability
//!   `base_error` per invocation. Failures are one-sided: a search never
//!   reports an unmarked item and an extremum search always returns a real
//!   element.
//! * `Statevector` charges the same counts but decides success by actually
//!   simulating Grover amplitudes, and runs extremum finding as a
//!   budget-truncated threshold search. Lists larger than
//!   `statevector_cap` are rejected.

pub mod statevector;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BackendError {
    #[error("list of size {size} exceeds the statevector cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("statevector size {0} is not a power of two")]
    NonPowerOfTwo(usize),
    #[error("invalid backend configuration: {0}")]
    InvalidConfig(String),
    #[error("search over an empty list")]
    EmptyInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    Statevector,
    CostModel,
}

impl FromStr for BackendKind {
    type Err = BackendError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "statevector" => Ok(Self::Statevector),
            "cost-model" | "cost" => Ok(Self::CostModel),
            _ => Err(BackendError::InvalidConfig(format!("unknown backend {s:?}"))),
        }
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Statevector => "statevector",
            Self::CostModel => "cost-model",
        })
    }
}

pub const DEFAULT_STATEVECTOR_CAP: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq)]
pub struct BackendConfig {
    pub kind: BackendKind,
    pub seed: u64,
    /// Multiplier on `sqrt(N)`-type Grover charges.
    pub c_grover: f64,
    /// Multiplier on the `sqrt(N)` extremum-search charge.
    pub c_dh: f64,
    /// Failure probability of one cost-model invocation, in `[0, 1/2]`.
    pub base_error: f64,
    pub statevector_cap: usize,
}

impl Default for BackendConfig {
    fn default() -> Self {
        Self {
            kind: BackendKind::CostModel,
            seed: 0,
            c_grover: 1.0,
            c_dh: 2.0,
            base_error: 0.5,
            statevector_cap: DEFAULT_STATEVECTOR_CAP,
        }
    }
}

impl BackendConfig {
    /// Cost model with `base_error = 0`: every search succeeds.
    pub fn zero_error() -> Self {
        Self {
            base_error: 0.0,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_base_error(mut self, base_error: f64) -> Self {
        self.base_error = base_error;
        self
    }

    pub fn validate(&self) -> Result<(), BackendError> {
        let bad = |msg: String| Err(BackendError::InvalidConfig(msg));
        if !(self.c_grover > 0.0 && self.c_grover.is_finite()) {
            return bad(format!("c_grover must be positive, got {}", self.c_grover));
        }
        if !(self.c_dh > 0.0 && self.c_dh.is_finite()) {
            return bad(format!("c_dh must be positive, got {}", self.c_dh));
        }
        if !(0.0..=0.5).contains(&self.base_error) {
            return bad(format!("base_error must lie in [0, 0.5], got {}", self.base_error));
        }
        if self.statevector_cap == 0 {
            return bad("statevector_cap must be positive".into());
        }
        Ok(())
    }

    /// Sets one field from a `key=value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), BackendError> {
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| BackendError::InvalidConfig(format!("{key}: not a number: {v:?}")))
        };
        match key {
            "backend" | "kind" => self.kind = value.parse()?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| BackendError::InvalidConfig(format!("seed: {value:?}")))?
            }
            "c_grover" => self.c_grover = num(value)?,
            "c_dh" => self.c_dh = num(value)?,
            "base_error" => self.base_error = num(value)?,
            "statevector_cap" => {
                self.statevector_cap = value
                    .parse()
                    .map_err(|_| BackendError::InvalidConfig(format!("statevector_cap: {value:?}")))?
            }
            _ => return Err(BackendError::InvalidConfig(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Parses a `key=value` config file; `#` starts a comment.
    pub fn from_kv_str(text: &str) -> Result<Self, BackendError> {
        let mut cfg = Self::default();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| BackendError::InvalidConfig(format!("expected key=value, got {line:?}")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Ledger bucket that a charge goes to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bucket {
    /// First (or only) run of every search.
    Search,
    /// Repetitions 2..k of a boosted search.
    Boosting,
    /// Classical work outside the query model, e.g. building in-lists.
    Preprocessing,
}

/// Charged oracle queries, per bucket.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryLedger {
    pub search: u64,
    pub boosting: u64,
    pub preprocessing: u64,
}

impl QueryLedger {
    pub fn charge(&mut self, bucket: Bucket, queries: u64) {
        match bucket {
            Bucket::Search => self.search += queries,
            Bucket::Boosting => self.boosting += queries,
            Bucket::Preprocessing => self.preprocessing += queries,
        }
    }

    /// Search plus boosting queries.
    pub fn quantum(&self) -> u64 {
        self.search + self.boosting
    }

    pub fn total(&self) -> u64 {
        self.search + self.boosting + self.preprocessing
    }

    pub fn merge(&mut self, other: &QueryLedger) {
        self.search += other.search;
        self.boosting += other.boosting;
        self.preprocessing += other.preprocessing;
    }
}

impl fmt::Display for QueryLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "queries total={} search={} boosting={} preprocessing={}",
            self.total(),
            self.search,
            self.boosting,
            self.preprocessing
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

impl Extremum {
    /// `a` is strictly better than `b`.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Self::Min => a < b,
            Self::Max => a > b,
        }
    }
}

pub struct Backend {
    config: BackendConfig,
    ledger: QueryLedger,
    calls: u64,
    bucket: Bucket,
}

impl Backend {
    pub fn new(config: BackendConfig) -> Result<Self, BackendError> {
        config.validate()?;
        Ok(Self {
            config,
            ledger: QueryLedger::default(),
            calls: 0,
            bucket: Bucket::Search,
        })
    }

    pub fn config(&self) -> &BackendConfig {
        &self.config
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn take_ledger(&mut self) -> QueryLedger {
        std::mem::take(&mut self.ledger)
    }

    /// Number of primitive invocations so far.
    pub fn calls(&self) -> u64 {
        self.calls
    }

    pub fn charge(&mut self, bucket: Bucket, queries: u64) {
        self.ledger.charge(bucket, queries);
    }

    pub(crate) fn set_bucket(&mut self, bucket: Bucket) -> Bucket {
        std::mem::replace(&mut self.bucket, bucket)
    }

    fn charge_current(&mut self, queries: u64) {
        self.ledger.charge(self.bucket, queries);
    }

    fn next_rng(&mut self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(self.calls);
        self.calls += 1;
        rng
    }

    /// `ceil(c * x)`.
    fn scaled(c: f64, x: f64) -> u64 {
        (c * x).ceil() as u64
    }

    /// Whether a single base invocation misses, given `t` marked among `n`.
    fn base_miss(&self, rng: &mut ChaCha8Rng, n: usize, t: usize) -> Result<bool, BackendError> {
        if t == 0 {
            return Ok(true);
        }
        match self.config.kind {
            BackendKind::CostModel => Ok(rng.gen_bool(self.config.base_error)),
            BackendKind::Statevector => {
                // success probability depends only on (n, t), so mark a prefix
                let mask: Vec<bool> = (0..n).map(|i| i < t).collect();
                Ok(statevector::search_once(&mask, self.config.statevector_cap, rng)?.is_none())
            }
        }
    }

    /// Finds a marked index in `1..=n`, charging `ceil(c_grover * sqrt(n / max(t, 1)))`.
    ///
    /// Returns a uniformly random marked index unless the invocation misses.
    /// With nothing marked it always returns `None`.
    pub fn grover_search(
        &mut self,
        n: usize,
        marked: impl Fn(usize) -> bool,
    ) -> Result<Option<usize>, BackendError> {
        let hits: Vec<usize> = (1..=n).filter(|&i| marked(i)).collect();
        let t = hits.len();
        self.charge_current(Self::scaled(self.config.c_grover, (n as f64 / t.max(1) as f64).sqrt()));
        self.search_among(n, &hits)
    }

    /// Fixed-budget detection search used by the Boolean vertex functions:
    /// charges `ceil(c_grover * sqrt(n))` whatever the number of marked items.
    pub fn grover_detect(
        &mut self,
        n: usize,
        marked: impl Fn(usize) -> bool,
    ) -> Result<Option<usize>, BackendError> {
        let hits: Vec<usize> = (1..=n).filter(|&i| marked(i)).collect();
        self.charge_current(Self::scaled(self.config.c_grover, (n as f64).sqrt()));
        self.search_among(n, &hits)
    }

    fn search_among(&mut self, n: usize, hits: &[usize]) -> Result<Option<usize>, BackendError> {
        let mut rng = self.next_rng();
        if hits.is_empty() {
            return Ok(None);
        }
        match self.config.kind {
            BackendKind::CostModel => {
                if rng.gen_bool(self.config.base_error) {
                    Ok(None)
                } else {
                    Ok(Some(hits[rng.gen_range(0..hits.len())]))
                }
            }
            BackendKind::Statevector => {
                let mut mask = vec![false; n];
                for &h in hits {
                    mask[h - 1] = true;
                }
                Ok(statevector::search_once(&mask, self.config.statevector_cap, &mut rng)?.map(|i| i + 1))
            }
        }
    }

    /// Whether all `reps` independent base searches for a single marked item
    /// among `n` miss. Consumes one call index.
    pub(crate) fn repeated_miss(&mut self, n: usize, reps: u32) -> Result<bool, BackendError> {
        let mut rng = self.next_rng();
        for _ in 0..reps {
            if !self.base_miss(&mut rng, n, 1)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Extremum finding over `values` (1-based result), charging `ceil(c_dh * sqrt(n))`.
    ///
    /// On failure the result is a genuine element strictly worse than the
    /// extremum: the second-best value under the cost model, or the
    /// threshold reached when the statevector run exhausts its budget.
    pub fn extremum_search(&mut self, values: &[f64], mode: Extremum) -> Result<(usize, f64), BackendError> {
        let n = values.len();
        if n == 0 {
            return Err(BackendError::EmptyInput);
        }
        self.charge_current(Self::scaled(self.config.c_dh, (n as f64).sqrt()));
        let mut rng = self.next_rng();
        match self.config.kind {
            BackendKind::CostModel => Ok(self.cost_model_extremum(values, mode, &mut rng)),
            BackendKind::Statevector => self.truncated_threshold_search(values, mode, &mut rng),
        }
    }

    fn cost_model_extremum(&self, values: &[f64], mode: Extremum, rng: &mut ChaCha8Rng) -> (usize, f64) {
        let best = values
            .iter()
            .copied()
            .reduce(|a, b| if mode.better(b, a) { b } else { a })
            .expect("non-empty");
        let runner_up = values
            .iter()
            .copied()
            .filter(|&v| mode.better(best, v))
            .reduce(|a, b| if mode.better(b, a) { b } else { a });
        let target = match runner_up {
            Some(second) if rng.gen_bool(self.config.base_error) => second,
            _ => best,
        };
        let idx: Vec<usize> = (0..values.len()).filter(|&i| values[i] == target).collect();
        let i = idx[rng.gen_range(0..idx.len())];
        (i + 1, values[i])
    }

    /// Threshold search in the Dürr–Høyer style with BBHT-style random
    /// iteration counts, stopped once the query budget is spent.
    fn truncated_threshold_search(
        &self,
        values: &[f64],
        mode: Extremum,
        rng: &mut ChaCha8Rng,
    ) -> Result<(usize, f64), BackendError> {
        let n = values.len();
        let size = n.next_power_of_two();
        if size > self.config.statevector_cap {
            return Err(BackendError::SizeCapExceeded { size, cap: self.config.statevector_cap });
        }
        let budget = Self::scaled(self.config.c_dh, (n as f64).sqrt());
        let max_m = (size as f64).sqrt();
        let mut y = rng.gen_range(0..n);
        let mut spent = 0u64;
        let mut m: f64 = 1.0;
        loop {
            let mask: Vec<bool> = (0..size).map(|i| i < n && mode.better(values[i], values[y])).collect();
            if !mask.iter().any(|&b| b) {
                break;
            }
            let j = rng.gen_range(0..m.ceil().max(1.0) as u64);
            if spent + j + 1 > budget {
                break;
            }
            spent += j + 1;
            let mut state = statevector::GroverState::uniform(size)?;
            for _ in 0..j {
                state.iterate(&mask);
            }
            let o = state.measure(rng);
            if mask[o] {
                y = o;
                m = 1.0;
            } else {
                m = (m * 6.0 / 5.0).min(max_m);
            }
        }
        Ok((y + 1, values[y]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero() -> Backend {
        Backend::new(BackendConfig::zero_error()).unwrap()
    }

    #[test]
    fn zero_error_search_finds_the_mark() {
        let mut b = zero();
        assert_eq!(b.grover_search(16, |i| i == 5).unwrap(), Some(5));
        assert_eq!(b.ledger().search, 4);
    }

    #[test]
    fn empty_search_still_pays() {
        let mut b = zero();
        assert_eq!(b.grover_search(16, |_| false).unwrap(), None);
        assert_eq!(b.ledger().total(), 4);
    }

    #[test]
    fn charge_uses_marked_count() {
        let mut b = zero();
        b.grover_search(16, |i| i <= 4).unwrap();
        assert_eq!(b.ledger().search, 2);
        b.grover_detect(16, |i| i <= 4).unwrap();
        assert_eq!(b.ledger().search, 6);
    }

    #[test]
    fn extremum_examples() {
        let mut b = zero();
        assert_eq!(b.extremum_search(&[3.0, 1.0, 4.0, 1.0, 5.0], Extremum::Max).unwrap(), (5, 5.0));
        assert_eq!(b.ledger().search, (2.0 * 5f64.sqrt()).ceil() as u64);

        let mut noisy = Backend::new(BackendConfig::default()).unwrap();
        for _ in 0..50 {
            assert_eq!(noisy.extremum_search(&[9.0], Extremum::Min).unwrap(), (1, 9.0));
            let (_, v) = noisy.extremum_search(&[2.0, 2.0, 2.0], Extremum::Min).unwrap();
            assert_eq!(v, 2.0);
        }
        assert_eq!(b.extremum_search(&[], Extremum::Min), Err(BackendError::EmptyInput));
    }

    #[test]
    fn cost_model_failure_returns_runner_up() {
        let mut b = Backend::new(BackendConfig::default().with_seed(3)).unwrap();
        let values = [1.0, 7.0, 4.0, 7.0, 6.0];
        let mut seen_fail = false;
        for _ in 0..200 {
            let (i, v) = b.extremum_search(&values, Extremum::Max).unwrap();
            assert_eq!(values[i - 1], v);
            assert!(v == 7.0 || v == 6.0);
            seen_fail |= v == 6.0;
        }
        assert!(seen_fail);
    }

    #[test]
    fn config_validation_and_kv() {
        assert!(BackendConfig::default().with_base_error(0.6).validate().is_err());
        let cfg = BackendConfig::from_kv_str(
            "# comment\nbackend = statevector\nseed=9\nc_grover=1.5\nbase_error=0.25\n",
        )
        .unwrap();
        assert_eq!(cfg.kind, BackendKind::Statevector);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.c_grover, 1.5);
        assert_eq!(cfg.base_error, 0.25);
        assert!(BackendConfig::from_kv_str("colour=blue").is_err());
        assert!(BackendConfig::from_kv_str("c_dh=-1").is_err());
    }

    #[test]
    fn statevector_kind_is_one_sided_and_capped() {
        let cfg = BackendConfig {
            kind: BackendKind::Statevector,
            statevector_cap: 64,
            ..BackendConfig::default()
        };
        let mut b = Backend::new(cfg).unwrap();
        for _ in 0..100 {
            if let Some(i) = b.grover_search(20, |i| i % 7 == 0).unwrap() {
                assert_eq!(i % 7, 0);
            }
            let values: Vec<f64> = (0..20).map(|i| ((i * 13) % 20) as f64).collect();
            let (i, v) = b.extremum_search(&values, Extremum::Max).unwrap();
            assert_eq!(values[i - 1], v);
        }
        assert!(matches!(
            b.grover_search(100, |_| true),
            Err(BackendError::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn statevector_extremum_converges_with_large_budget() {
        let cfg = BackendConfig {
            kind: BackendKind::Statevector,
            c_dh: 60.0,
            ..BackendConfig::default()
        };
        let mut b = Backend::new(cfg).unwrap();
        let values: Vec<f64> = (0..32).map(|i| ((i * 11) % 32) as f64).collect();
        let hits = (0..100)
            .filter(|_| b.extremum_search(&values, Extremum::Min).unwrap().1 == 0.0)
            .count();
        assert!(hits >= 90, "{hits}");
    }

    #[test]
    fn ledger_merges() {
        let mut a = QueryLedger { search: 1, boosting: 2, preprocessing: 3 };
        a.merge(&QueryLedger { search: 10, boosting: 20, preprocessing: 30 });
        assert_eq!(a.total(), 66);
        assert_eq!(a.quantum(), 33);
    }
}
