//! Reproducible random streams.
//!
//! A run is driven by one root seed. Every consumer (an oracle, a round, a
//! trial) derives its own stream by hashing the parent key with a label, so
//! adding a consumer never perturbs the draws seen by another one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// The random stream type handed to generators and samplers.
pub type StreamRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeedTree {
    key: [u8; 32],
}

impl SeedTree {
    pub fn new(root: u64) -> Self {
        let mut h = Sha256::new();
        h.update(b"unionscope/root");
        h.update(root.to_le_bytes());
        Self { key: h.finalize().into() }
    }

    pub fn child(&self, label: &str) -> Self {
        self.derive(label.as_bytes(), None)
    }

    pub fn child_indexed(&self, label: &str, index: u64) -> Self {
        self.derive(label.as_bytes(), Some(index))
    }

    fn derive(&self, label: &[u8], index: Option<u64>) -> Self {
        let mut h = Sha256::new();
        h.update(self.key);
        h.update((label.len() as u64).to_le_bytes());
        h.update(label);
        if let Some(i) = index {
            h.update(i.to_le_bytes());
        }
        Self { key: h.finalize().into() }
    }

    pub fn rng(&self) -> StreamRng {
        StreamRng::from_seed(self.key)
    }

    /// Short stable identifier of this node, used in transcripts.
    pub fn fingerprint(&self) -> u64 {
        u64::from_le_bytes(self.key[..8].try_into().expect("8 bytes"))
    }
}
