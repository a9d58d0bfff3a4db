//! Probability that two projections of an i.i.d. error pattern agree.
//!
//! For s-dimensional `B₁`, `B₂` meeting in a subspace of size `2^d` and
//! errors of probability ε, the parities `e_{/B₁}(z + B₁)` and
//! `e_{/B₂}(z + B₂)` are equal with probability
//! `½ (1 + (1 − 2ε)^(2^(s+1) − 2·2^d))`: the shared part `z + D` cancels and
//! the two private parts of size `2^s − 2^d` are independent parities.

use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, mismatch, Result};
use crate::subspace::{Point, Subspace, MAX_M};

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(invalid(format!(
            "error probability {epsilon} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Closed form for subspace dimension `s` and intersection dimension `d`.
pub fn theorem1_probability(s: usize, d: usize, epsilon: f64) -> Result<f64> {
    if d > s || s >= MAX_M {
        return Err(invalid(format!(
            "need 0 <= d <= s < {MAX_M}, got s = {s}, d = {d}"
        )));
    }
    check_epsilon(epsilon)?;
    let exponent = (1i32 << (s + 1)) - 2 * (1i32 << d);
    Ok(0.5 * (1.0 + (1.0 - 2.0 * epsilon).powi(exponent)))
}

/// Two s-dimensional coordinate subspaces of F₂^m sharing exactly the first
/// `d` unit vectors. Needs `2s − d ≤ m`.
pub fn subspace_pair(m: usize, s: usize, d: usize) -> Result<(Subspace, Subspace)> {
    if d > s || 2 * s - d > m {
        return Err(invalid(format!(
            "cannot place two {s}-dim subspaces meeting in dimension {d} inside F2^{m}"
        )));
    }
    let unit = |j: usize| -> Point { 1 << (m - 1 - j) };
    let first: Vec<Point> = (0..s).map(unit).collect();
    let second: Vec<Point> = (0..d).chain(s..2 * s - d).map(unit).collect();
    Ok((Subspace::span(&first, m)?, Subspace::span(&second, m)?))
}

/// Fraction of `trials` Bernoulli(ε) error words of length 2^m whose
/// parities over `z + b1` and `z + b2` agree.
pub fn theorem1_monte_carlo(
    b1: &Subspace,
    b2: &Subspace,
    epsilon: f64,
    z: Point,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    if b1.ambient_dim() != b2.ambient_dim() || b1.dim() != b2.dim() {
        return Err(mismatch("both subspaces need the same m and s"));
    }
    check_epsilon(epsilon)?;
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let n = 1usize << b1.ambient_dim();
    if z as usize >= n {
        return Err(invalid(format!(
            "point {z} outside F2^{}",
            b1.ambient_dim()
        )));
    }
    let coset1: Vec<usize> = b1.elements().iter().map(|&e| (z ^ e) as usize).collect();
    let coset2: Vec<usize> = b2.elements().iter().map(|&e| (z ^ e) as usize).collect();
    let flip = Bernoulli::new(epsilon).map_err(|e| invalid(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut error = vec![false; n];
    let mut agree = 0u64;
    for _ in 0..trials {
        for e in error.iter_mut() {
            *e = flip.sample(&mut rng);
        }
        let p1 = coset1.iter().fold(false, |acc, &i| acc ^ error[i]);
        let p2 = coset2.iter().fold(false, |acc, &i| acc ^ error[i]);
        agree += u64::from(p1 == p2);
    }
    Ok(agree as f64 / trials as f64)
}
