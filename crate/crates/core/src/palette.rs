//! Per-vertex colour palettes.
//!
//! A palette is the triple `(C, A, T)`: an owner array mapping each colour to
//! the edge that uses it, the used-bit vector, and a complete binary sum tree
//! whose leaves are the bits of `A`. The tree is stored heap-style in one
//! vector of length `2 * capacity`; node `1` is the root and the leaf for
//! colour `c` sits at `capacity + c - 1`. Capacity is always a power of two.
//!
//! Colours are 1-based.

use thiserror::Error;

use crate::graph::EdgeKey;

pub type Colour = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PaletteError {
    #[error("colour {colour} outside palette capacity {capacity}")]
    OutOfRange { colour: Colour, capacity: usize },
    #[error("colour {0} already used")]
    InUse(Colour),
    #[error("colour {0} is free")]
    Free(Colour),
    #[error("range [{start}, {end}) invalid for capacity {capacity}")]
    BadRange {
        start: Colour,
        end: Colour,
        capacity: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Palette {
    sums: Vec<u32>,
    owners: Vec<Option<EdgeKey>>,
}

impl Default for Palette {
    fn default() -> Self {
        Self::new()
    }
}

/// Smallest power of two that holds `2Δ - 1` colours (at least 1).
pub fn capacity_for(delta: usize) -> usize {
    (2 * delta).saturating_sub(1).max(1).next_power_of_two()
}

impl Palette {
    pub fn new() -> Self {
        Self::with_capacity(1)
    }

    /// Palette sized for a maximum degree of `delta`.
    pub fn for_delta(delta: usize) -> Self {
        Self::with_capacity(capacity_for(delta))
    }

    fn with_capacity(capacity: usize) -> Self {
        debug_assert!(capacity.is_power_of_two());
        Self {
            sums: vec![0; 2 * capacity],
            owners: vec![None; capacity],
        }
    }

    pub fn capacity(&self) -> usize {
        self.owners.len()
    }

    pub fn used_count(&self) -> usize {
        self.sums[1] as usize
    }

    pub fn is_used(&self, c: Colour) -> bool {
        self.owner_of(c).is_some()
    }

    pub fn owner_of(&self, c: Colour) -> Option<EdgeKey> {
        if c == 0 {
            return None;
        }
        self.owners.get(c as usize - 1).copied().flatten()
    }

    /// Used colours in increasing order.
    pub fn used_colours(&self) -> impl Iterator<Item = (Colour, EdgeKey)> + '_ {
        self.owners
            .iter()
            .enumerate()
            .filter_map(|(i, o)| o.map(|e| (i as Colour + 1, e)))
    }

    pub fn mark(&mut self, c: Colour, e: EdgeKey) -> Result<(), PaletteError> {
        let idx = self.index(c)?;
        if self.owners[idx].is_some() {
            return Err(PaletteError::InUse(c));
        }
        self.owners[idx] = Some(e);
        self.bump(idx, true);
        Ok(())
    }

    pub fn unmark(&mut self, c: Colour) -> Result<EdgeKey, PaletteError> {
        let idx = self.index(c)?;
        let owner = self.owners[idx].take().ok_or(PaletteError::Free(c))?;
        self.bump(idx, false);
        Ok(owner)
    }

    /// Number of used colours in `[i, j)`.
    pub fn range_count(&self, i: Colour, j: Colour) -> Result<usize, PaletteError> {
        let cap = self.capacity();
        if i < 1 || i > j || j as usize > cap + 1 {
            return Err(PaletteError::BadRange {
                start: i,
                end: j,
                capacity: cap,
            });
        }
        let mut lo = cap + i as usize - 1;
        let mut hi = cap + j as usize - 1;
        let mut total = 0;
        while lo < hi {
            if lo & 1 == 1 {
                total += self.sums[lo];
                lo += 1;
            }
            if hi & 1 == 1 {
                hi -= 1;
                total += self.sums[hi];
            }
            lo >>= 1;
            hi >>= 1;
        }
        Ok(total as usize)
    }

    /// Smallest colour free in both palettes.
    ///
    /// Descends both sum trees left first, skipping any aligned block that
    /// one of the palettes uses completely. Colours past a palette's capacity
    /// count as free in it, so the palettes need not share a capacity. The
    /// result never exceeds `self.used_count() + other.used_count() + 1`.
    pub fn find_joint_free(&self, other: &Palette) -> Colour {
        let span = self.capacity().max(other.capacity());
        match joint_free_in(self, other, 0, span) {
            Some(offset) => offset as Colour + 1,
            None => span as Colour + 1,
        }
    }

    /// Highest used colour, if any.
    pub fn highest_used(&self) -> Option<Colour> {
        if self.sums[1] == 0 {
            return None;
        }
        let cap = self.capacity();
        let mut node = 1;
        while node < cap {
            node = if self.sums[2 * node + 1] > 0 {
                2 * node + 1
            } else {
                2 * node
            };
        }
        Some((node - cap) as Colour + 1)
    }

    /// Grows to hold `2Δ - 1` colours by doubling, and halves while no used
    /// colour lies past the first quarter and `2Δ - 1` fits in half.
    pub fn ensure_capacity(&mut self, delta: usize) {
        let need = (2 * delta).saturating_sub(1);
        let mut cap = self.capacity();
        while cap < need {
            cap *= 2;
        }
        let highest = self.highest_used().unwrap_or(0) as usize;
        while cap > 1 && highest <= cap / 4 && need <= cap / 2 {
            cap /= 2;
        }
        self.resize(cap);
    }

    /// Doubles until colour `c` fits.
    pub fn fit_colour(&mut self, c: Colour) {
        let mut cap = self.capacity();
        while cap < c as usize {
            cap *= 2;
        }
        self.resize(cap);
    }

    fn resize(&mut self, cap: usize) {
        if cap == self.capacity() {
            return;
        }
        debug_assert!(self.highest_used().unwrap_or(0) as usize <= cap);
        let mut owners = std::mem::take(&mut self.owners);
        owners.resize(cap, None);
        let mut sums = vec![0u32; 2 * cap];
        for (i, o) in owners.iter().enumerate() {
            sums[cap + i] = o.is_some() as u32;
        }
        for node in (1..cap).rev() {
            sums[node] = sums[2 * node] + sums[2 * node + 1];
        }
        self.owners = owners;
        self.sums = sums;
    }

    fn index(&self, c: Colour) -> Result<usize, PaletteError> {
        if c == 0 || c as usize > self.capacity() {
            return Err(PaletteError::OutOfRange {
                colour: c,
                capacity: self.capacity(),
            });
        }
        Ok(c as usize - 1)
    }

    fn bump(&mut self, idx: usize, up: bool) {
        let mut node = self.capacity() + idx;
        while node >= 1 {
            if up {
                self.sums[node] += 1;
            } else {
                self.sums[node] -= 1;
            }
            node >>= 1;
        }
    }

    /// Used count in the aligned block `[offset, offset + size)` of 0-based
    /// leaf positions; `size` is a power of two and `offset` a multiple of it.
    fn block_sum(&self, offset: usize, size: usize) -> usize {
        let cap = self.capacity();
        if offset >= cap {
            0
        } else if size >= cap {
            self.sums[1] as usize
        } else {
            self.sums[cap / size + offset / size] as usize
        }
    }

    /// Checks every internal sum against the owner array.
    pub fn verify_tree(&self) -> bool {
        let cap = self.capacity();
        (0..cap).all(|i| self.sums[cap + i] == self.owners[i].is_some() as u32)
            && (1..cap).all(|n| self.sums[n] == self.sums[2 * n] + self.sums[2 * n + 1])
    }

    /// Flips a leaf bit without touching the owner array. Only for audit
    /// fault-injection tests.
    #[doc(hidden)]
    pub fn corrupt_bit_for_tests(&mut self, c: Colour) {
        let leaf = self.capacity() + c as usize - 1;
        let up = self.sums[leaf] == 0;
        let mut node = leaf;
        while node >= 1 {
            if up {
                self.sums[node] += 1;
            } else {
                self.sums[node] -= 1;
            }
            node >>= 1;
        }
    }
}

fn joint_free_in(p: &Palette, q: &Palette, offset: usize, size: usize) -> Option<usize> {
    let a = p.block_sum(offset, size);
    let b = q.block_sum(offset, size);
    if a == size || b == size {
        return None;
    }
    if a + b == 0 {
        return Some(offset);
    }
    let half = size / 2;
    joint_free_in(p, q, offset, half).or_else(|| joint_free_in(p, q, offset + half, half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn key(i: u32) -> EdgeKey {
        EdgeKey::new(i, i + 1).unwrap()
    }

    fn palette_with(cap_delta: usize, used: &[Colour]) -> Palette {
        let mut p = Palette::for_delta(cap_delta);
        for &c in used {
            p.fit_colour(c);
            p.mark(c, key(c)).unwrap();
        }
        p
    }

    fn scan_free(p: &BTreeSet<Colour>, q: &BTreeSet<Colour>) -> Colour {
        (1..).find(|c| !p.contains(c) && !q.contains(c)).unwrap()
    }

    #[test]
    fn mark_then_owner() {
        let mut p = Palette::for_delta(3);
        p.mark(3, key(7)).unwrap();
        assert_eq!(p.owner_of(3), Some(key(7)));
        assert_eq!(p.used_count(), 1);
        assert_eq!(p.mark(3, key(8)), Err(PaletteError::InUse(3)));
    }

    #[test]
    fn mark_unmark_round_trip() {
        let original = Palette::for_delta(4);
        let mut p = original.clone();
        p.mark(3, key(1)).unwrap();
        assert_eq!(p.unmark(3), Ok(key(1)));
        assert_eq!(p, original);
        assert_eq!(p.unmark(3), Err(PaletteError::Free(3)));
    }

    #[test]
    fn mark_rejects_out_of_range() {
        let mut p = Palette::for_delta(2);
        assert_eq!(p.capacity(), 4);
        assert!(matches!(
            p.mark(5, key(0)),
            Err(PaletteError::OutOfRange { .. })
        ));
        assert!(matches!(
            p.mark(0, key(0)),
            Err(PaletteError::OutOfRange { .. })
        ));
    }

    #[test]
    fn range_count_examples() {
        let empty = Palette::for_delta(8);
        assert_eq!(empty.range_count(1, 16), Ok(0));
        let p = palette_with(4, &[1, 2, 5]);
        assert_eq!(p.range_count(1, 5), Ok(2));
        assert_eq!(p.range_count(1, 6), Ok(3));
        for i in 1..=p.capacity() as Colour + 1 {
            assert_eq!(p.range_count(i, i), Ok(0));
        }
        assert!(p.range_count(0, 2).is_err());
        assert!(p.range_count(3, 2).is_err());
        assert!(p.range_count(1, p.capacity() as Colour + 2).is_err());
    }

    #[test]
    fn joint_free_examples() {
        let e = Palette::new();
        assert_eq!(e.find_joint_free(&Palette::new()), 1);
        let p = palette_with(4, &[1, 2]);
        let q = palette_with(4, &[1, 3]);
        assert_eq!(p.find_joint_free(&q), 4);
        let p = palette_with(4, &[2]);
        assert_eq!(p.find_joint_free(&Palette::for_delta(4)), 1);
    }

    #[test]
    fn joint_free_overlapping_palettes_finds_smallest() {
        // Both use colour 1 only: the plain bisection would skip [1, 3).
        let p = palette_with(2, &[1]);
        let q = palette_with(2, &[1]);
        assert_eq!(p.find_joint_free(&q), 2);
    }

    #[test]
    fn joint_free_past_full_capacity() {
        let p = palette_with(1, &[1]);
        let q = palette_with(1, &[1]);
        assert_eq!(p.capacity(), 1);
        assert_eq!(p.find_joint_free(&q), 2);
        let q = palette_with(2, &[2, 3, 4]);
        assert_eq!(p.find_joint_free(&q), 5);
    }

    #[test]
    fn grows_when_delta_grows() {
        let mut p = Palette::for_delta(4);
        assert_eq!(p.capacity(), 8);
        p.ensure_capacity(5);
        assert_eq!(p.capacity(), 16);
        p.ensure_capacity(5);
        assert_eq!(p.capacity(), 16);
    }

    #[test]
    fn shrinks_by_quarter_rule() {
        let mut p = palette_with(8, &[1, 2]);
        assert_eq!(p.capacity(), 16);
        p.ensure_capacity(2);
        assert_eq!(p.capacity(), 4);
        assert_eq!(p.owner_of(2), Some(key(2)));
        assert!(p.verify_tree());
    }

    #[test]
    fn highest_used_tracks_marks() {
        let mut p = palette_with(8, &[3, 9]);
        assert_eq!(p.highest_used(), Some(9));
        p.unmark(9).unwrap();
        assert_eq!(p.highest_used(), Some(3));
        p.unmark(3).unwrap();
        assert_eq!(p.highest_used(), None);
    }

    #[test]
    fn recount_after_random_marks() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut p = Palette::for_delta(512);
        let mut set = BTreeSet::new();
        for _ in 0..1000 {
            let c = rng.gen_range(1..=p.capacity() as Colour);
            if set.insert(c) {
                p.mark(c, key(c)).unwrap();
            } else {
                set.remove(&c);
                p.unmark(c).unwrap();
            }
        }
        assert_eq!(p.used_count(), set.len());
        assert_eq!(
            p.used_colours().map(|(c, _)| c).collect::<BTreeSet<_>>(),
            set
        );
        assert!(p.verify_tree());
    }

    proptest! {
        #[test]
        fn joint_free_matches_scan(
            a in proptest::collection::btree_set(1u32..=64, 0..40),
            b in proptest::collection::btree_set(1u32..=64, 0..40),
            ca in 0usize..40,
            cb in 0usize..40,
        ) {
            let mut p = Palette::for_delta(ca);
            let mut q = Palette::for_delta(cb);
            for &c in &a { p.fit_colour(c); p.mark(c, key(c)).unwrap(); }
            for &c in &b { q.fit_colour(c); q.mark(c, key(c)).unwrap(); }
            let got = p.find_joint_free(&q);
            prop_assert_eq!(got, scan_free(&a, &b));
            prop_assert!(got as usize <= a.len() + b.len() + 1);
            prop_assert_eq!(got, q.find_joint_free(&p));
        }

        #[test]
        fn fuzz_matches_reference_set(ops in proptest::collection::vec((1u32..=100, any::<bool>(), 0usize..60), 1..200)) {
            let mut p = Palette::new();
            let mut set = BTreeSet::new();
            for (c, add, delta) in ops {
                if add {
                    p.fit_colour(c);
                    let r = p.mark(c, key(c));
                    prop_assert_eq!(r.is_ok(), set.insert(c));
                } else {
                    let r = if (c as usize) <= p.capacity() { p.unmark(c).is_ok() } else { false };
                    prop_assert_eq!(r, set.remove(&c));
                }
                // Resizing never changes what is recorded.
                let before: Vec<_> = p.used_colours().collect();
                let count = p.range_count(1, p.capacity() as Colour + 1).unwrap();
                p.ensure_capacity(delta);
                prop_assert_eq!(p.used_colours().collect::<Vec<_>>(), before);
                prop_assert_eq!(p.range_count(1, p.capacity() as Colour + 1).unwrap(), count);
                prop_assert!(p.capacity() >= (2 * delta).saturating_sub(1));
                prop_assert!(p.verify_tree());
            }
            prop_assert_eq!(p.used_count(), set.len());
        }
    }
}
