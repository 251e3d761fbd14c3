//! Deterministic random substreams.
//!
//! Every random choice in the crate draws from a [`RandomStream`] handed in by
//! the caller. Streams are derived from a 128-bit [`StreamKey`]: the root key
//! is the SHA-256 of the master seed, and each child key is the SHA-256 of the
//! parent key followed by a 64-bit tag (point index, trial index, role tag).
//! The ChaCha seed of a stream is the SHA-256 of its key, so two streams with
//! different derivation paths are independent for all practical purposes and
//! the result never depends on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type RandomStream = ChaCha8Rng;

/// Role tags used when a single trial needs several independent streams.
pub mod role {
    pub const LABELS: u64 = 0x6c61_6265_6c73;
    pub const PARENT: u64 = 0x7061_7265_6e74;
    pub const SUBSAMPLE: u64 = 0x7375_6273;
    pub const PERMUTATION: u64 = 0x7065_726d;
    pub const MATCHER: u64 = 0x006d_6174_6368;
    pub const RECOVERY: u64 = 0x0072_6563_6f76;
    pub const SPLIT: u64 = 0x0073_706c_6974;
    pub const FAMILY: u64 = 0x6661_6d69_6c79;
    pub const PGF: u64 = 0x0070_6766;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey([u8; 16]);

impl StreamKey {
    pub fn root(master_seed: u64) -> Self {
        let mut h = Sha256::new();
        h.update(b"csbm/root");
        h.update(master_seed.to_le_bytes());
        Self::from_digest(h)
    }

    pub fn child(&self, tag: u64) -> Self {
        let mut h = Sha256::new();
        h.update(b"csbm/child");
        h.update(self.0);
        h.update(tag.to_le_bytes());
        Self::from_digest(h)
    }

    /// Shorthand for a chain of [`child`](Self::child) derivations.
    pub fn path(&self, tags: &[u64]) -> Self {
        tags.iter().fold(*self, |k, &t| k.child(t))
    }

    pub fn rng(&self) -> RandomStream {
        let mut h = Sha256::new();
        h.update(b"csbm/stream");
        h.update(self.0);
        let seed: [u8; 32] = h.finalize().into();
        ChaCha8Rng::from_seed(seed)
    }

    pub fn as_bytes(&self) -> &[u8; 16] {
        &self.0
    }

    fn from_digest(h: Sha256) -> Self {
        let out = h.finalize();
        let mut key = [0u8; 16];
        key.copy_from_slice(&out[..16]);
        StreamKey(key)
    }
}

/// Stream for `seed` with no further derivation; handy in tests and the CLI.
pub fn stream(seed: u64) -> RandomStream {
    StreamKey::root(seed).rng()
}
