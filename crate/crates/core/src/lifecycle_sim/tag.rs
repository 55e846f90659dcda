use std::fmt;

use serde::{Serialize, Serializer};
use sha2::{Digest as _, Sha256};

/// 32-byte digest, shown and serialized as lowercase hex.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag(pub [u8; 32]);

impl Tag {
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tag({})", self.to_hex())
    }
}

impl Serialize for Tag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

/// Authenticity tag standing in for an issuer signature: SHA-256 over the
/// length-prefixed issuer id followed by the length-prefixed payload.
pub fn tag_of(issuer_id: &str, payload: &[u8]) -> Tag {
    let mut h = Sha256::new();
    h.update((issuer_id.len() as u64).to_be_bytes());
    h.update(issuer_id.as_bytes());
    h.update((payload.len() as u64).to_be_bytes());
    h.update(payload);
    Tag(h.finalize().into())
}

pub fn verify_tag(tag: &Tag, issuer_id: &str, payload: &[u8]) -> bool {
    tag_of(issuer_id, payload) == *tag
}

/// Plain SHA-256.
pub fn digest(bytes: &[u8]) -> Tag {
    Tag(Sha256::digest(bytes).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_and_verifiable() {
        let t = tag_of("issuer", b"payload");
        assert_eq!(t, tag_of("issuer", b"payload"));
        assert!(verify_tag(&t, "issuer", b"payload"));
        assert!(!verify_tag(&t, "issuer", b"payloaD"));
        assert!(!verify_tag(&t, "issuer2", b"payload"));
        assert_eq!(t.to_hex().len(), 64);
    }

    #[test]
    fn length_prefix_separates_boundaries() {
        assert_ne!(tag_of("ab", b"c"), tag_of("a", b"bc"));
    }

    #[test]
    fn distinct_issuers_distinct_tags() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let i1: String = (0..rng.gen_range(1..12)).map(|_| rng.gen_range('a'..='z')).collect();
            let mut i2: String = (0..rng.gen_range(1..12)).map(|_| rng.gen_range('a'..='z')).collect();
            if i1 == i2 {
                i2.push('x');
            }
            let p: Vec<u8> = (0..rng.gen_range(0..64)).map(|_| rng.gen()).collect();
            assert_ne!(tag_of(&i1, &p), tag_of(&i2, &p));
        }
    }

    #[test]
    fn single_byte_changes_flip_the_tag() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p: Vec<u8> = (0..48).map(|_| rng.gen()).collect();
        let base = tag_of("i", &p);
        for idx in 0..p.len() {
            let mut q = p.clone();
            q[idx] ^= 1 << rng.gen_range(0..8);
            assert_ne!(tag_of("i", &q), base);
        }
    }
}
