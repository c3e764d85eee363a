//! Brute-force oracles shared by the integration tests. Everything here is
//! computed from first principles over bitmasks, independently of the
//! library's algorithms.

#![allow(dead_code)]

use muchnik_core::order::{generate_posets, random_poset};
use muchnik_core::Poset;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every labelled poset with 1 to `max` elements.
pub fn posets_up_to(max: usize) -> Vec<Poset> {
    (1..=max)
        .flat_map(|n| generate_posets(n).unwrap())
        .collect()
}

pub fn random_posets(n: usize, count: usize, seed: u64) -> Vec<Poset> {
    let mut r = rng(seed);
    (0..count).map(|_| random_poset(n, 0.4, &mut r)).collect()
}

pub fn up_mask(p: &Poset, x: usize) -> u32 {
    (0..p.len())
        .filter(|&y| p.leq(x, y))
        .fold(0, |m, y| m | 1 << y)
}

/// All upsets, by testing every subset.
pub fn upset_masks(p: &Poset) -> Vec<u32> {
    let n = p.len();
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|x| s >> x & 1 == 0 || up_mask(p, x) & !s == 0))
        .collect()
}

/// `{x | every y ≥ x in u is in v}`.
pub fn imp_mask(p: &Poset, u: u32, v: u32) -> u32 {
    (0..p.len())
        .filter(|&x| up_mask(p, x) & u & !v == 0)
        .fold(0, |m, x| m | 1 << x)
}

/// Counts partial orders on `n` labelled points by testing every reflexive
/// relation for antisymmetry and transitivity.
pub fn brute_force_poset_count(n: usize) -> usize {
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    (0u64..1 << off.len())
        .filter(|&bits| {
            let mut r = vec![vec![false; n]; n];
            for (k, &(i, j)) in off.iter().enumerate() {
                r[i][j] = bits >> k & 1 == 1;
            }
            (0..n).for_each(|i| r[i][i] = true);
            let antisym = (0..n).all(|i| (0..n).all(|j| i == j || !(r[i][j] && r[j][i])));
            let trans =
                (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(r[i][j] && r[j][k]) || r[i][k])));
            antisym && trans
        })
        .count()
}

/// Surjective, monotone, and every `f(x) ≤ z` is reached from above `x`.
pub fn is_pmorphism(src: &Poset, tgt: &Poset, map: &[usize]) -> bool {
    let surjective = (0..tgt.len()).all(|t| map.contains(&t));
    let monotone =
        (0..src.len()).all(|x| (0..src.len()).all(|y| !src.leq(x, y) || tgt.leq(map[x], map[y])));
    let back = (0..src.len()).all(|x| {
        (0..tgt.len())
            .filter(|&z| tgt.leq(map[x], z))
            .all(|z| (0..src.len()).any(|w| src.leq(x, w) && map[w] == z))
    });
    surjective && monotone && back
}

/// Every total map `src → tgt`, in lexicographic order.
pub fn all_maps(m: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (n as u64).pow(m as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0; m];
        for slot in v.iter_mut().rev() {
            *slot = (k % n as u64) as usize;
            k /= n as u64;
        }
        v
    })
}
