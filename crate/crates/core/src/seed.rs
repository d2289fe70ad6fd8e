//! Per-run seeds derived from a master seed.

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for run `index` under `master`. Stable across platforms and releases.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix(splitmix(master) ^ index.rotate_left(32))
}
