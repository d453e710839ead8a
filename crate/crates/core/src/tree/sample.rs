//! Exactly uniform random binary trees via the cycle lemma.
//!
//! A binary tree with `n` vertices is the set of internal nodes of a complete
//! binary tree with `n` internal nodes and `n + 1` leaves. Reading that tree in
//! preorder (`+1` for an internal node, `−1` for a leaf) gives its Łukasiewicz
//! word. We draw a uniform arrangement of `n` up-steps and `n + 1` down-steps;
//! exactly one of its `2n + 1` rotations is a Łukasiewicz word, the one that
//! starts right after the first minimum of the prefix sums. Every tree is hit
//! by exactly `2n + 1` arrangements, so the result is uniform.
//!
//! The arrangement is regenerated from the seed instead of stored: a first pass
//! locates the rotation point and records the generator position there, then
//! the word is replayed from that point to the end and from the start to that
//! point. Memory stays proportional to the tree height.

use rand::Rng;

use crate::error::{check_cap, Error, Result};
use crate::rng::{rng_for, streams, LabRng};
use crate::tree::{BinaryTree, VerticalProfile};

/// Largest `n` for which [`sample_uniform`] builds the tree in memory.
pub const MATERIALIZE_CAP: u64 = 10_000_000;
/// Largest `n` accepted by [`stream_profile`].
pub const STREAM_CAP: u64 = 100_000_000;

/// Uniform arrangement of `ups` up-steps among `len` positions, drawn one
/// position at a time: the next step is up with probability `ups_left / left`.
struct Arrangement {
    rng: LabRng,
    ups_left: u64,
    left: u64,
}

impl Arrangement {
    #[inline]
    fn next_is_up(&mut self) -> bool {
        let up = self.rng.random_range(0..self.left) < self.ups_left;
        self.left -= 1;
        self.ups_left -= u64::from(up);
        up
    }
}

/// Calls `visit(is_internal)` for each symbol of the Łukasiewicz word of the
/// uniform complete binary tree with `n` internal nodes selected by `seed`.
pub(crate) fn lukasiewicz_word(n: u64, seed: u64, mut visit: impl FnMut(bool)) {
    let len = 2 * n + 1;
    let fresh = || Arrangement {
        rng: rng_for(seed, streams::TREE),
        ups_left: n,
        left: len,
    };

    // Pass 1: first index where the prefix sum is minimal, with the generator
    // state just before the symbol at that index.
    let mut word = fresh();
    let mut height: i64 = 0;
    let mut min_height: i64 = 0;
    let mut cut = (0u64, word.rng.get_word_pos(), n);
    for k in 0..len {
        height += if word.next_is_up() { 1 } else { -1 };
        if height < min_height {
            min_height = height;
            cut = (k + 1, word.rng.get_word_pos(), word.ups_left);
        }
    }
    let (cut_index, cut_pos, cut_ups) = cut;

    // Pass 2: the symbols from the cut to the end.
    let mut word = fresh();
    word.rng.set_word_pos(cut_pos);
    word.ups_left = cut_ups;
    word.left = len - cut_index;
    for _ in cut_index..len {
        visit(word.next_is_up());
    }

    // Pass 3: the symbols before the cut.
    let mut word = fresh();
    for _ in 0..cut_index {
        visit(word.next_is_up());
    }
}

/// Uniform binary tree with `n` vertices, determined by `seed`.
pub fn sample_uniform(n: u64, seed: u64) -> Result<BinaryTree> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_cap(
        "n",
        n,
        MATERIALIZE_CAP,
        "; use stream_profile for larger trees",
    )?;
    let none = BinaryTree::NO_CHILD;
    let mut children: Vec<(u32, u32)> = Vec::with_capacity(n as usize);
    // Pending child slots: (parent, is_right). The root slot has no parent.
    let mut slots: Vec<(u32, bool)> = vec![(none, false)];
    lukasiewicz_word(n, seed, |internal| {
        let (parent, is_right) = slots.pop().expect("Łukasiewicz word keeps a pending slot");
        if internal {
            let v = children.len() as u32;
            children.push((none, none));
            if parent != none {
                let c = &mut children[parent as usize];
                if is_right {
                    c.1 = v;
                } else {
                    c.0 = v;
                }
            }
            slots.push((v, true));
            slots.push((v, false));
        }
    });
    Ok(BinaryTree::from_raw(children))
}

/// Profile of `sample_uniform(n, seed)` without building the tree.
///
/// Identical output to `VerticalProfile::of_tree(&sample_uniform(n, seed)?)`.
pub fn stream_profile(n: u64, seed: u64) -> Result<VerticalProfile> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_cap("n", n, STREAM_CAP, "")?;
    let mut counts = OffsetCounts::new();
    // Abscissas of pending child slots.
    let mut slots: Vec<i64> = vec![0];
    lukasiewicz_word(n, seed, |internal| {
        let a = slots.pop().expect("Łukasiewicz word keeps a pending slot");
        if internal {
            counts.bump(a);
            slots.push(a + 1);
            slots.push(a - 1);
        }
    });
    let (ell, counts) = counts.into_parts();
    VerticalProfile::new(ell, counts)
}

/// Dense counts over a growing integer interval.
struct OffsetCounts {
    ell: i64,
    data: Vec<u64>,
}

impl OffsetCounts {
    fn new() -> Self {
        OffsetCounts {
            ell: 0,
            data: vec![0; 64],
        }
    }

    #[inline]
    fn bump(&mut self, a: i64) {
        let mut idx = a - self.ell;
        if idx < 0 {
            let grow = (-idx as usize).max(self.data.len());
            let mut data = vec![0; grow];
            data.extend_from_slice(&self.data);
            self.data = data;
            self.ell -= grow as i64;
            idx += grow as i64;
        } else if idx as usize >= self.data.len() {
            let len = (idx as usize + 1).max(2 * self.data.len());
            self.data.resize(len, 0);
        }
        self.data[idx as usize] += 1;
    }

    fn into_parts(mut self) -> (i64, Vec<u64>) {
        let first = self.data.iter().position(|&c| c > 0).unwrap_or(0);
        let last = self.data.iter().rposition(|&c| c > 0).unwrap_or(0);
        self.data.truncate(last + 1);
        self.data.drain(..first);
        (self.ell + first as i64, self.data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        assert_eq!(sample_uniform(1, 99).unwrap().size(), 1);
        assert_eq!(stream_profile(1, 99).unwrap(), VerticalProfile::single());
    }

    #[test]
    fn word_is_lukasiewicz() {
        for seed in 0..50 {
            let n = 1 + seed % 17;
            let mut height = 0i64;
            let mut symbols = 0;
            let mut ups = 0;
            lukasiewicz_word(n, seed, |up| {
                assert!(height >= 0, "prefix went negative before the end");
                height += if up { 1 } else { -1 };
                symbols += 1;
                ups += u64::from(up);
            });
            assert_eq!(height, -1);
            assert_eq!(symbols, 2 * n + 1);
            assert_eq!(ups, n);
        }
    }

    #[test]
    fn materialized_tree_matches_stream() {
        for seed in 0..30 {
            let n = 1 + 37 * seed;
            let tree = sample_uniform(n, seed).unwrap();
            assert_eq!(tree.size() as u64, n);
            assert_eq!(
                VerticalProfile::of_tree(&tree),
                stream_profile(n, seed).unwrap()
            );
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            sample_uniform(500, 7).unwrap(),
            sample_uniform(500, 7).unwrap()
        );
        assert_ne!(
            sample_uniform(500, 7).unwrap(),
            sample_uniform(500, 8).unwrap()
        );
    }

    #[test]
    fn caps() {
        assert!(sample_uniform(0, 1).is_err());
        assert!(matches!(
            sample_uniform(MATERIALIZE_CAP + 1, 1),
            Err(Error::CapExceeded { .. })
        ));
        assert!(stream_profile(STREAM_CAP + 1, 1).is_err());
    }

    #[test]
    fn offset_counts_grow_both_ways() {
        let mut c = OffsetCounts::new();
        for a in [0, -100, 250, -3, 0] {
            c.bump(a);
        }
        let (ell, data) = c.into_parts();
        assert_eq!(ell, -100);
        assert_eq!(data.len(), 351);
        assert_eq!(data[100], 2);
        assert_eq!(data.iter().sum::<u64>(), 5);
    }
}
