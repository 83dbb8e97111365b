//! Counter-based SplitMix64.
//!
//! Every draw is a pure function of `(seed, stream, index)`:
//!
//! ```text
//! key(seed, stream) = mix(seed ^ mix(stream + GAMMA))
//! word(key, i)      = mix(key + (i + 1) * GAMMA)
//! uniform           = ((word >> 12) + 0.5) * 2^-52        in (0, 1)
//! ```
//!
//! `GAMMA = 0x9E3779B97F4A7C15` and `mix` is the SplitMix64 finalizer
//! (Stafford's variant 13: xor-shift 30, multiply `0xBF58476D1CE4E5B9`,
//! xor-shift 27, multiply `0x94D049BB133111EB`, xor-shift 31). Since no
//! state is carried between draws, runs can be generated on any number of
//! threads and still reproduce the sequential output bit for bit.

pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the key of an independent stream from a master seed.
#[inline]
pub fn stream_key(seed: u64, stream: u64) -> u64 {
    mix64(seed ^ mix64(stream.wrapping_add(GAMMA)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self::from_key(stream_key(seed, 0))
    }

    pub fn for_stream(seed: u64, stream: u64) -> Self {
        Self::from_key(stream_key(seed, stream))
    }

    pub fn from_key(key: u64) -> Self {
        CounterRng { key, counter: 0 }
    }

    /// The word at an absolute position, independent of the cursor.
    #[inline]
    pub fn word_at(&self, index: u64) -> u64 {
        mix64(self.key.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let w = self.word_at(self.counter);
        self.counter = self.counter.wrapping_add(1);
        w
    }

    /// Uniform on the open interval (0, 1).
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        to_open01(self.next_u64())
    }

    pub fn position(&self) -> u64 {
        self.counter
    }
}

#[inline]
pub fn to_open01(word: u64) -> f64 {
    ((word >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}
