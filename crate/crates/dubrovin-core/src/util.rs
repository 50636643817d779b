//! Small shared utilities: a seedable PRNG and deterministic parallel helpers.

/// SplitMix64: tiny, fast, reproducible across platforms and releases.
/// Used everywhere a seeded sample stream is needed so that identical
/// seeds give identical artifacts.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn next_unit(&mut self) -> f64 {
        let v = self.next_u64() >> 11; // 53 bits
        v as f64 / (1u64 << 52) as f64 - 1.0
    }

    /// Uniform integer in [lo, hi] inclusive.
    pub fn next_in(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }
}

/// Map over a slice, in parallel when the `parallel` feature is on.
/// Output order always matches input order.
pub fn map_ordered<T: Sync, U: Send, F: Fn(&T) -> U + Sync>(items: &[T], f: F) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(|t| f(t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(|t| f(t)).collect()
    }
}

/// Sequential version of [`map_ordered`], kept available in all builds so the
/// bench suite can compare the two paths.
pub fn map_ordered_seq<T, U, F: Fn(&T) -> U>(items: &[T], f: F) -> Vec<U> {
    items.iter().map(|t| f(t)).collect()
}
