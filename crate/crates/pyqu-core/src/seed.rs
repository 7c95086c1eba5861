//! Stable seed derivation.
//!
//! Every randomized stage takes an explicit `u64` seed. A single CLI-level
//! seed is fanned out to stages by hashing the stage label into it, so runs
//! are reproducible regardless of execution order or parallelism. The mixing
//! uses FNV-1a plus a SplitMix64 finalizer; both are fixed algorithms, so the
//! derivation is stable across platforms and releases (unlike
//! `DefaultHasher`).

/// Derive a per-stage seed from a base seed and a stable label.
pub fn derive(base: u64, label: &str) -> u64 {
    const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = FNV_OFFSET;
    for byte in label.as_bytes() {
        h ^= u64::from(*byte);
        h = h.wrapping_mul(FNV_PRIME);
    }
    splitmix64(base ^ h)
}

/// Derive a per-item seed (e.g. one per tree in a forest).
pub fn derive_indexed(base: u64, label: &str, index: u64) -> u64 {
    splitmix64(derive(base, label).wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}
