use std::fmt;

use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    left: u32,
    right: u32,
}

/// Rooted plane binary tree stored in an arena.
///
/// Every vertex has a possibly empty left subtree and a possibly empty
/// right subtree. Node indices are `0..size()`; trees built by this crate
/// number their vertices in preorder, so the root is index 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryTree {
    nodes: Vec<Node>,
    root: u32,
}

impl BinaryTree {
    /// The tree with a single vertex.
    pub fn single() -> Self {
        BinaryTree {
            nodes: vec![Node {
                left: NONE,
                right: NONE,
            }],
            root: 0,
        }
    }

    /// Builds a tree from explicit child links, checking every structural invariant.
    pub fn from_children(children: &[(Option<usize>, Option<usize>)], root: usize) -> Result<Self> {
        let n = children.len();
        if n == 0 {
            return Err(Error::InvalidTree("a tree has at least one vertex".into()));
        }
        if n >= NONE as usize {
            return Err(Error::InvalidTree(format!(
                "{n} vertices do not fit a u32 arena"
            )));
        }
        if root >= n {
            return Err(Error::InvalidTree(format!(
                "root {root} out of range 0..{n}"
            )));
        }
        let mut parents = vec![0u32; n];
        let mut nodes = Vec::with_capacity(n);
        for (v, &(l, r)) in children.iter().enumerate() {
            let mut link = |c: Option<usize>| -> Result<u32> {
                match c {
                    None => Ok(NONE),
                    Some(c) if c >= n => Err(Error::InvalidTree(format!(
                        "vertex {v} links to {c}, out of range"
                    ))),
                    Some(c) => {
                        parents[c] += 1;
                        Ok(c as u32)
                    }
                }
            };
            let left = link(l)?;
            let right = link(r)?;
            nodes.push(Node { left, right });
        }
        for (v, &p) in parents.iter().enumerate() {
            let expected = u32::from(v != root);
            if p != expected {
                return Err(Error::InvalidTree(format!(
                    "vertex {v} is referenced {p} times, expected {expected}"
                )));
            }
        }
        let tree = BinaryTree {
            nodes,
            root: root as u32,
        };
        // n - 1 child links with one parent each: the structure is acyclic iff all vertices are reachable.
        if tree.preorder().count() != n {
            return Err(Error::InvalidTree(
                "cycle detected: not every vertex is reachable from the root".into(),
            ));
        }
        Ok(tree)
    }

    /// Parses the bracket notation produced by `Display`.
    ///
    /// An empty subtree is `.` and a vertex is `(` left right `)`, so the
    /// single vertex is `(..)` and a root with only a right child is
    /// `(.(..))`. Whitespace is ignored.
    pub fn from_brackets(text: &str) -> Result<Self> {
        let bytes: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut nodes: Vec<Node> = Vec::new();
        // (node index, number of child slots already filled)
        let mut open: Vec<(u32, u8)> = Vec::new();
        let mut root_seen = false;
        let bad = |pos: usize, msg: &str| {
            Error::InvalidTree(format!("bracket notation, byte {pos}: {msg}"))
        };

        for (pos, &b) in bytes.iter().enumerate() {
            match b {
                b'(' | b'.' => {
                    let child = if b == b'(' {
                        if nodes.len() >= NONE as usize - 1 {
                            return Err(bad(pos, "too many vertices"));
                        }
                        nodes.push(Node {
                            left: NONE,
                            right: NONE,
                        });
                        (nodes.len() - 1) as u32
                    } else {
                        NONE
                    };
                    match open.last_mut() {
                        Some((parent, filled)) => {
                            let slot = &mut nodes[*parent as usize];
                            match filled {
                                0 => slot.left = child,
                                1 => slot.right = child,
                                _ => return Err(bad(pos, "a vertex has at most two subtrees")),
                            }
                            *filled += 1;
                        }
                        None if root_seen || b == b'.' => {
                            return Err(bad(pos, "expected a single rooted tree"))
                        }
                        None => root_seen = true,
                    }
                    if b == b'(' {
                        open.push((child, 0));
                    }
                }
                b')' => match open.pop() {
                    Some((_, 2)) => {}
                    Some(_) => return Err(bad(pos, "a vertex needs exactly two subtree slots")),
                    None => return Err(bad(pos, "unbalanced ')'")),
                },
                _ => return Err(bad(pos, "unexpected character")),
            }
        }
        if !open.is_empty() || nodes.is_empty() {
            return Err(Error::InvalidTree("bracket notation is incomplete".into()));
        }
        Ok(BinaryTree { nodes, root: 0 })
    }

    /// Trusted constructor for generators that emit vertices in preorder.
    pub(crate) fn from_raw(children: Vec<(u32, u32)>) -> Self {
        let nodes = children
            .into_iter()
            .map(|(left, right)| Node { left, right })
            .collect();
        BinaryTree { nodes, root: 0 }
    }

    pub(crate) const NO_CHILD: u32 = NONE;

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> usize {
        self.root as usize
    }

    pub fn left(&self, v: usize) -> Option<usize> {
        let c = self.nodes[v].left;
        (c != NONE).then_some(c as usize)
    }

    pub fn right(&self, v: usize) -> Option<usize> {
        let c = self.nodes[v].right;
        (c != NONE).then_some(c as usize)
    }

    /// Vertices in preorder (root, left subtree, right subtree).
    pub fn preorder(&self) -> Preorder<'_> {
        Preorder {
            tree: self,
            stack: vec![self.root],
        }
    }

    /// Abscissa of every vertex, indexed by vertex: right steps minus left steps from the root.
    pub fn abscissas(&self) -> Vec<i64> {
        let mut x = vec![0i64; self.size()];
        let mut stack = vec![(self.root, 0i64)];
        while let Some((v, a)) = stack.pop() {
            x[v as usize] = a;
            let node = self.nodes[v as usize];
            if node.right != NONE {
                stack.push((node.right, a + 1));
            }
            if node.left != NONE {
                stack.push((node.left, a - 1));
            }
        }
        x
    }

    /// Exchanges left and right everywhere, which negates every abscissa.
    pub fn mirror(&self) -> Self {
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node {
                left: n.right,
                right: n.left,
            })
            .collect();
        BinaryTree {
            nodes,
            root: self.root,
        }
    }

    /// Height in edges (the single vertex has height 0).
    pub fn height(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self.root, 0usize)];
        while let Some((v, d)) = stack.pop() {
            best = best.max(d);
            let node = self.nodes[v as usize];
            for c in [node.left, node.right] {
                if c != NONE {
                    stack.push((c, d + 1));
                }
            }
        }
        best
    }
}

pub struct Preorder<'a> {
    tree: &'a BinaryTree,
    stack: Vec<u32>,
}

impl Iterator for Preorder<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let v = self.stack.pop()?;
        let node = self.tree.nodes[v as usize];
        if node.right != NONE {
            self.stack.push(node.right);
        }
        if node.left != NONE {
            self.stack.push(node.left);
        }
        Some(v as usize)
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Iterative so that path-like trees with 10^7 vertices print without overflowing the stack.
        enum Tok {
            Open(u32),
            Close,
        }
        let mut out = String::with_capacity(3 * self.size());
        let mut stack = vec![Tok::Open(self.root)];
        while let Some(tok) = stack.pop() {
            match tok {
                Tok::Close => out.push(')'),
                Tok::Open(NONE) => out.push('.'),
                Tok::Open(v) => {
                    out.push('(');
                    let node = self.nodes[v as usize];
                    stack.push(Tok::Close);
                    stack.push(Tok::Open(node.right));
                    stack.push(Tok::Open(node.left));
                }
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.size() <= 64 {
            write!(f, "BinaryTree({self})")
        } else {
            write!(f, "BinaryTree {{ size: {} }}", self.size())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets_round_trip() {
        for s in ["(..)", "((..).)", "(.(..))", "((..)(.(..)))"] {
            let t = BinaryTree::from_brackets(s).unwrap();
            assert_eq!(t.to_string(), s);
        }
    }

    #[test]
    fn brackets_reject_garbage() {
        for s in [
            "", ".", "(.)", "(...)", "(..)(..)", "((..)", "(..))", "(x.)",
        ] {
            assert!(BinaryTree::from_brackets(s).is_err(), "{s:?} accepted");
        }
    }

    #[test]
    fn abscissas_follow_steps() {
        let t = BinaryTree::from_brackets("((..)(.(..)))").unwrap();
        let mut x = t.abscissas();
        x.sort();
        assert_eq!(x, vec![-1, 0, 1, 2]);
        assert_eq!(t.height(), 2);
    }

    #[test]
    fn mirror_negates_abscissas() {
        let t = BinaryTree::from_brackets("(((..).)(..))").unwrap();
        let a = t.abscissas();
        let b = t.mirror().abscissas();
        assert!(a.iter().zip(&b).all(|(x, y)| *x == -*y));
    }

    #[test]
    fn from_children_checks_structure() {
        assert!(BinaryTree::from_children(&[(Some(1), None), (None, None)], 0).is_ok());
        // vertex 1 referenced twice
        assert!(BinaryTree::from_children(&[(Some(1), Some(1)), (None, None)], 0).is_err());
        // cycle: 1 -> 2 -> 1, vertex 0 alone
        assert!(
            BinaryTree::from_children(&[(None, None), (Some(2), None), (Some(1), None)], 0)
                .is_err()
        );
        // root referenced
        assert!(BinaryTree::from_children(&[(Some(1), None), (Some(0), None)], 0).is_err());
        assert!(BinaryTree::from_children(&[], 0).is_err());
    }
}
