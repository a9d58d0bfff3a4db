//! BPSK over additive white Gaussian noise.
//!
//! Bit 0 is sent as +1 and bit 1 as −1. The SNR is Eb/N0 in dB with rate
//! R = k/n, so the noise variance is `σ² = 1 / (2 R 10^(snr/10))` and the
//! channel LLR of an output `y` is `2y / σ²`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::codec::RmCode;
use crate::error::{invalid, Result};

/// Noise standard deviation for Eb/N0 `snr_db` at code rate `rate`.
pub fn noise_sigma(rate: f64, snr_db: f64) -> f64 {
    (1.0 / (2.0 * rate * 10f64.powf(snr_db / 10.0))).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSample {
    pub transmitted: Vec<u8>,
    /// Unclamped `2y / σ²`.
    pub llr: Vec<f64>,
    pub snr_db: f64,
    pub sigma: f64,
}

/// Random stream for one trial: keyed by the master seed and the SNR point,
/// with the trial index selecting the ChaCha stream. Trials are independent
/// of how they are scheduled.
pub fn trial_rng(seed: u64, point: u64, trial: u64) -> ChaCha8Rng {
    // splitmix64 finalizer to spread the point key
    let mut k = point.wrapping_add(0x9E37_79B9_7F4A_7C15);
    k = (k ^ (k >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    k = (k ^ (k >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    k ^= k >> 31;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ k);
    rng.set_stream(trial);
    rng
}

/// Sends `codeword` through the channel with noise deviation `sigma`.
pub fn transmit<R: Rng + ?Sized>(codeword: &[u8], sigma: f64, rng: &mut R) -> Vec<f64> {
    let scale = 2.0 / (sigma * sigma);
    codeword
        .iter()
        .map(|&b| {
            let x = if b & 1 == 0 { 1.0 } else { -1.0 };
            let noise: f64 = rng.sample(StandardNormal);
            scale * (x + sigma * noise)
        })
        .collect()
}

pub fn random_message<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<u8> {
    (0..k).map(|_| u8::from(rng.random::<bool>())).collect()
}

/// Encodes `message` (or a random one drawn from `rng`) and transmits it.
pub fn simulate_with_rng<R: Rng + ?Sized>(
    code: &RmCode,
    message: Option<&[u8]>,
    snr_db: f64,
    rng: &mut R,
) -> Result<ChannelSample> {
    if !snr_db.is_finite() {
        return Err(invalid(format!("SNR must be finite, got {snr_db}")));
    }
    let message = match message {
        Some(m) => m.to_vec(),
        None => random_message(code.dimension(), rng),
    };
    let transmitted = code.encode(&message)?;
    let sigma = noise_sigma(code.rate(), snr_db);
    let llr = transmit(&transmitted, sigma, rng);
    Ok(ChannelSample {
        transmitted,
        llr,
        snr_db,
        sigma,
    })
}

/// One channel use drawn from stream `stream` of `seed`.
pub fn simulate_channel(
    code: &RmCode,
    message: Option<&[u8]>,
    snr_db: f64,
    seed: u64,
    stream: u64,
) -> Result<ChannelSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    simulate_with_rng(code, message, snr_db, &mut rng)
}
