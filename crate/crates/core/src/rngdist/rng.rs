//! A self-contained PCG generator (XSL-RR 128/64) with explicit stream
//! selection, so that every chain owns an independent, reproducible stream.
//!
//! Stream-split rule: the 128-bit LCG increment is derived from
//! `(seed, stream_id)` through a SplitMix64 chain and forced odd, and the
//! 128-bit state is seeded from `seed` alone. Identical `(seed, stream_id)`
//! pairs therefore replay bit-identical draw sequences, while distinct
//! stream ids select distinct LCG orbits.

const PCG_MULT: u128 = 0x2360_ed05_1fc6_5da4_4385_df64_9fcc_f645;

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a fresh 64-bit seed from a base seed and a path of indices.
///
/// Used to hand each simulation replicate its own seed deterministically:
/// `derive_seed(seed, &[cell_index, replicate_index])`.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut s = base;
    let mut out = splitmix64(&mut s);
    for &p in parts {
        let mut t = out ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        out = splitmix64(&mut t);
    }
    out
}

/// Seedable deterministic random stream; one per MCMC chain.
#[derive(Debug, Clone)]
pub struct RngStream {
    state: u128,
    inc: u128,
    seed: u64,
    stream_id: u32,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u32) -> Self {
        let mut sm = seed;
        let s_lo = splitmix64(&mut sm);
        let s_hi = splitmix64(&mut sm);
        let mut sm2 = seed ^ (u64::from(stream_id).wrapping_mul(0x9e37_79b9_7f4a_7c15)) ^ 0xda3e_39cb_94b9_5bdb;
        let i_lo = splitmix64(&mut sm2);
        let i_hi = splitmix64(&mut sm2);

        let initial = (u128::from(s_hi) << 64) | u128::from(s_lo);
        let inc = (((u128::from(i_hi) << 64) | u128::from(i_lo)) << 1) | 1;

        let mut rng = Self {
            state: 0,
            inc,
            seed,
            stream_id,
        };
        rng.step();
        rng.state = rng.state.wrapping_add(initial);
        rng.step();
        rng
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u32 {
        self.stream_id
    }

    #[inline]
    fn step(&mut self) {
        self.state = self.state.wrapping_mul(PCG_MULT).wrapping_add(self.inc);
    }

    /// Next raw 64-bit output (XSL-RR permutation of the pre-step state).
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let old = self.state;
        self.step();
        let xored = ((old >> 64) as u64) ^ (old as u64);
        let rot = (old >> 122) as u32;
        xored.rotate_right(rot)
    }

    /// Uniform draw on the open interval (0, 1).
    ///
    /// Uses the top 53 bits plus a half-step offset so neither endpoint can
    /// be returned, which keeps quantile transforms finite.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        (((self.next_u64() >> 11) as f64) + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform draw on [lo, hi).
    #[inline]
    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform_open()
    }
}
