//! Exact amplitude simulation of Grover iterations over an `N`-item list.
//!
//! Grover amplitudes stay real, so the state is a plain `Vec<f64>`. The
//! oracle flips the sign of marked amplitudes and the diffusion reflects
//! every amplitude about the mean.

use rand::Rng;

use super::BackendError;

/// Real amplitude vector over `N = 2^q` basis states.
#[derive(Debug, Clone)]
pub struct GroverState {
    amps: Vec<f64>,
}

impl GroverState {
    /// Uniform superposition. `n` must be a power of two.
    pub fn uniform(n: usize) -> Result<Self, BackendError> {
        if n == 0 || !n.is_power_of_two() {
            return Err(BackendError::NonPowerOfTwo(n));
        }
        let a = 1.0 / (n as f64).sqrt();
        Ok(Self { amps: vec![a; n] })
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    /// One oracle call followed by the diffusion operator.
    pub fn iterate(&mut self, marked: &[bool]) {
        for (a, &m) in self.amps.iter_mut().zip(marked) {
            if m {
                *a = -*a;
            }
        }
        let mean = self.amps.iter().sum::<f64>() / self.amps.len() as f64;
        for a in &mut self.amps {
            *a = 2.0 * mean - *a;
        }
    }

    pub fn probability_of(&self, marked: &[bool]) -> f64 {
        self.amps
            .iter()
            .zip(marked)
            .filter(|(_, &m)| m)
            .map(|(a, _)| a * a)
            .sum()
    }

    /// Samples a basis state (0-based) from the Born distribution.
    pub fn measure<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total: f64 = self.amps.iter().map(|a| a * a).sum();
        let mut r = rng.gen::<f64>() * total;
        for (i, a) in self.amps.iter().enumerate() {
            r -= a * a;
            if r < 0.0 {
                return i;
            }
        }
        self.amps.len() - 1
    }
}

/// Result of [`statevector_grover`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroverRun {
    /// Measured index, 1-based.
    pub outcome: usize,
    /// Exact probability mass on marked items before measurement.
    pub success_probability: f64,
}

/// Runs `iterations` Grover steps over `1..=n` and measures once.
pub fn statevector_grover(
    n: usize,
    marked: impl Fn(usize) -> bool,
    iterations: usize,
    seed: u64,
    cap: usize,
) -> Result<GroverRun, BackendError> {
    use rand::SeedableRng;
    if n > cap {
        return Err(BackendError::SizeCapExceeded { size: n, cap });
    }
    let mut state = GroverState::uniform(n)?;
    let mask: Vec<bool> = (1..=n).map(marked).collect();
    for _ in 0..iterations {
        state.iterate(&mask);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    Ok(GroverRun {
        outcome: state.measure(&mut rng) + 1,
        success_probability: state.probability_of(&mask),
    })
}

/// Iteration count maximizing success for `t` marked out of `n`:
/// `floor(pi / (4 theta))` with `sin(theta) = sqrt(t / n)`.
pub fn optimal_iterations(n: usize, t: usize) -> usize {
    if t == 0 || t >= n {
        return 0;
    }
    let theta = ((t as f64) / (n as f64)).sqrt().asin();
    (std::f64::consts::FRAC_PI_4 / theta).floor() as usize
}

/// Measures after the optimal number of iterations; `Some` only if the
/// outcome is marked. `mask` may be shorter than a power of two and is
/// padded with unmarked items.
pub(crate) fn search_once<R: Rng + ?Sized>(
    mask: &[bool],
    cap: usize,
    rng: &mut R,
) -> Result<Option<usize>, BackendError> {
    let padded = padded_mask(mask, cap)?;
    let t = padded.iter().filter(|&&m| m).count();
    let mut state = GroverState::uniform(padded.len())?;
    for _ in 0..optimal_iterations(padded.len(), t) {
        state.iterate(&padded);
    }
    let o = state.measure(rng);
    Ok(padded[o].then_some(o))
}

pub(crate) fn padded_mask(mask: &[bool], cap: usize) -> Result<Vec<bool>, BackendError> {
    let size = mask.len().max(1).next_power_of_two();
    if size > cap {
        return Err(BackendError::SizeCapExceeded { size, cap });
    }
    let mut padded = mask.to_vec();
    padded.resize(size, false);
    Ok(padded)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_items_one_marked_is_certain() {
        let run = statevector_grover(4, |i| i == 3, 1, 7, 1024).unwrap();
        assert!((run.success_probability - 1.0).abs() < 1e-9);
        assert_eq!(run.outcome, 3);
    }

    #[test]
    fn nothing_marked_means_zero_mass() {
        for j in 0..5 {
            let run = statevector_grover(4, |_| false, j, 1, 1024).unwrap();
            assert_eq!(run.success_probability, 0.0);
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(
            statevector_grover(6, |_| true, 1, 0, 1024),
            Err(BackendError::NonPowerOfTwo(6))
        );
        assert_eq!(
            statevector_grover(2048, |_| true, 1, 0, 1024),
            Err(BackendError::SizeCapExceeded { size: 2048, cap: 1024 })
        );
    }

    #[test]
    fn optimal_iterations_small_cases() {
        assert_eq!(optimal_iterations(4, 1), 1);
        assert_eq!(optimal_iterations(8, 1), 2);
        assert_eq!(optimal_iterations(8, 0), 0);
        assert_eq!(optimal_iterations(8, 8), 0);
    }
}
