//! Pinned pseudo-random number generation.
//!
//! Every random draw in the crate goes through [`SplitMix64`] so that results
//! are reproducible bit-for-bit from a seed on any platform:
//!
//! - uniforms take the top 53 bits of the next output: `(x >> 11) * 2^-53`, in `[0, 1)`;
//! - normals use Box–Muller on two consecutive uniforms `u1, u2`, keeping only the
//!   cosine branch: `sqrt(-2 ln(1 - u1)) * cos(2π u2)`;
//! - a uniform index into `n` items is `floor(u * n)`;
//! - independent sub-streams (one per bootstrap path) are seeded with
//!   [`derive_seed`].

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 generator (Steele, Lea, Flood). Non-cryptographic.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 * SCALE
    }

    /// Uniform index in `0..n`. `n` must be positive.
    #[inline]
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        let i = (self.next_f64() * n as f64) as usize;
        // guards the (unreachable in exact arithmetic) u*n == n rounding case
        i.min(n - 1)
    }

    /// Standard normal draw.
    #[inline]
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// Seed for sub-stream `stream` of a generator family rooted at `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    SplitMix64::new(seed ^ stream.wrapping_mul(GOLDEN_GAMMA)).next_u64()
}
