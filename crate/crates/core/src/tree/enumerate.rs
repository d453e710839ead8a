use crate::error::{check_cap, Result};
use crate::tree::BinaryTree;

/// Default largest `n` accepted by exhaustive routines. `Cat(14) = 2 674 440`.
pub const ENUMERATION_CAP: usize = 14;

/// Iterates over all binary trees with `n` vertices.
///
/// Order: the root's left-subtree size increases slowest, and for a fixed
/// split the left subtree varies slower than the right one, each recursively
/// in the same order. Equivalently, trees are sorted lexicographically by the
/// preorder sequence of left-subtree sizes. The first tree is the right comb.
pub fn enumerate_trees(n: usize) -> Result<TreeEnumerator> {
    enumerate_trees_with_cap(n, ENUMERATION_CAP)
}

pub fn enumerate_trees_with_cap(n: usize, cap: usize) -> Result<TreeEnumerator> {
    check_cap(
        "n",
        n as u64,
        cap as u64,
        " (exhaustive enumeration grows like 4^n)",
    )?;
    if n == 0 {
        return Err(crate::Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(TreeEnumerator {
        left_sizes: vec![0; n],
        sizes: vec![0; n],
        stack: Vec::with_capacity(n),
        done: false,
    })
}

/// Cursor over the preorder left-size sequence; see [`enumerate_trees`].
pub struct TreeEnumerator {
    left_sizes: Vec<usize>,
    sizes: Vec<usize>,
    stack: Vec<usize>,
    done: bool,
}

impl TreeEnumerator {
    /// Fills `sizes` with the subtree size of each preorder position.
    fn compute_sizes(&mut self) {
        let n = self.left_sizes.len();
        self.stack.clear();
        self.stack.push(n);
        for p in 0..n {
            let z = self.stack.pop().expect("left-size sequence is consistent");
            self.sizes[p] = z;
            let l = self.left_sizes[p];
            if z - 1 - l > 0 {
                self.stack.push(z - 1 - l);
            }
            if l > 0 {
                self.stack.push(l);
            }
        }
    }

    fn build(&self) -> BinaryTree {
        let n = self.left_sizes.len();
        let none = BinaryTree::NO_CHILD;
        let children = (0..n)
            .map(|p| {
                let l = self.left_sizes[p];
                let left = if l > 0 { (p + 1) as u32 } else { none };
                let right = if self.sizes[p] - 1 - l > 0 {
                    (p + 1 + l) as u32
                } else {
                    none
                };
                (left, right)
            })
            .collect();
        BinaryTree::from_raw(children)
    }

    fn advance(&mut self) {
        match (0..self.left_sizes.len())
            .rev()
            .find(|&p| self.left_sizes[p] + 1 < self.sizes[p])
        {
            None => self.done = true,
            Some(p) => {
                self.left_sizes[p] += 1;
                self.left_sizes[p + 1..].fill(0);
            }
        }
    }
}

impl Iterator for TreeEnumerator {
    type Item = BinaryTree;

    fn next(&mut self) -> Option<BinaryTree> {
        if self.done {
            return None;
        }
        self.compute_sizes();
        let tree = self.build();
        self.advance();
        Some(tree)
    }
}

/// Catalan number `C(2n, n) / (n + 1)`, exact for `n ≤ 35`.
pub fn catalan(n: u64) -> u64 {
    assert!(n <= 35, "Cat({n}) does not fit in u64");
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn catalan_values() {
        let expected = [1, 1, 2, 5, 14, 42, 132, 429, 1430];
        for (n, &c) in expected.iter().enumerate() {
            assert_eq!(catalan(n as u64), c);
        }
        assert_eq!(catalan(14), 2_674_440);
        assert_eq!(catalan(35), 3_116_285_494_907_301_262);
    }

    #[test]
    fn counts_are_catalan_and_distinct() {
        for n in 1..=9 {
            let trees: Vec<_> = enumerate_trees(n).unwrap().collect();
            assert_eq!(trees.len() as u64, catalan(n as u64));
            assert!(trees.iter().all(|t| t.size() == n));
            let distinct: HashSet<String> = trees.iter().map(|t| t.to_string()).collect();
            assert_eq!(distinct.len(), trees.len());
        }
    }

    #[test]
    fn order_is_left_size_split() {
        let trees: Vec<String> = enumerate_trees(3).unwrap().map(|t| t.to_string()).collect();
        assert_eq!(
            trees,
            [
                "(.(.(..)))",
                "(.((..).))",
                "((..)(..))",
                "((.(..)).)",
                "(((..).).)",
            ]
        );
    }

    #[test]
    fn cap_refuses() {
        assert!(enumerate_trees(15).is_err());
        assert!(enumerate_trees(0).is_err());
        assert_eq!(enumerate_trees_with_cap(15, 15).unwrap().take(3).count(), 3);
    }
}
