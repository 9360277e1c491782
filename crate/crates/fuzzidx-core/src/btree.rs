//! An order-`m` B-tree over byte-sequence keys.
//!
//! Nodes live in an arena behind [`NodeId`] indirection, and child fetches
//! during search bump a counter, so the disk-read cost model is measurable
//! without real paging. Mutation is single-writer; a built tree is frozen and
//! may be searched from any number of threads.
//!
//! Structural rules for order `m`: every node holds at most `m - 1` sorted
//! keys; an internal node with `n` keys has exactly `n + 1` children;
//! non-root nodes have at least `⌈m/2⌉ - 1` keys (internal nodes at least
//! `⌈m/2⌉` children, the root at least 2 when internal); all leaves sit at
//! the same depth.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::{Error, Result};

/// Index of a node in the tree's arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(u32);

#[derive(Debug, Clone)]
pub struct BTreeNode<V> {
    keys: Vec<Vec<u8>>,
    payloads: Vec<V>,
    children: Vec<NodeId>,
}

impl<V> BTreeNode<V> {
    fn empty_leaf() -> Self {
        Self {
            keys: Vec::new(),
            payloads: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn key_count(&self) -> usize {
        self.keys.len()
    }

    pub fn keys(&self) -> &[Vec<u8>] {
        &self.keys
    }

    pub fn children(&self) -> &[NodeId] {
        &self.children
    }

    pub fn payload(&self, i: usize) -> &V {
        &self.payloads[i]
    }
}

/// A structural rule broken somewhere in the tree, with the path to the
/// offending node (`root`, `root/2`, ... by child index).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

pub struct BTree<V> {
    order: usize,
    nodes: Vec<BTreeNode<V>>,
    root: NodeId,
    len: usize,
    node_reads: AtomicU64,
}

impl<V> BTree<V> {
    /// An empty tree of order `m >= 3`. The root starts as an empty leaf.
    pub fn new(order: usize) -> Result<Self> {
        if order < 3 {
            return Err(Error::InvalidOrder(order));
        }
        Ok(Self {
            order,
            nodes: vec![BTreeNode::empty_leaf()],
            root: NodeId(0),
            len: 0,
            node_reads: AtomicU64::new(0),
        })
    }

    /// Build a tree from entries already sorted strictly ascending by key.
    ///
    /// Packs leaves level by level in one pass instead of replaying inserts.
    pub fn bulk_load(order: usize, entries: Vec<(Vec<u8>, V)>) -> Result<Self> {
        let mut tree = Self::new(order)?;
        if entries.is_empty() {
            return Ok(tree);
        }
        for pair in entries.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(Error::InvalidInput(
                    "bulk-load entries must be sorted strictly ascending".to_string(),
                ));
            }
        }

        let n = entries.len();
        tree.len = n;
        let max_keys = order - 1;
        if n <= max_keys {
            let root = &mut tree.nodes[tree.root.0 as usize];
            for (key, payload) in entries {
                root.keys.push(key);
                root.payloads.push(payload);
            }
            return Ok(tree);
        }

        // Leaf level: L leaves as full as possible, one separator between
        // consecutive leaves. L = ceil((n+1)/m) keeps every leaf within
        // [⌈m/2⌉-1, m-1] (see the even-distribution check below).
        tree.nodes.clear();
        let leaf_count = (n + 1).div_ceil(order);
        let leaf_total = n - (leaf_count - 1);
        let base = leaf_total / leaf_count;
        let extra = leaf_total % leaf_count;

        let mut children: Vec<NodeId> = Vec::with_capacity(leaf_count);
        let mut separators: Vec<(Vec<u8>, V)> = Vec::with_capacity(leaf_count - 1);
        let mut iter = entries.into_iter();
        for leaf in 0..leaf_count {
            let take = base + usize::from(leaf < extra);
            debug_assert!(take >= order.div_ceil(2) - 1 && take <= max_keys);
            let mut node = BTreeNode::empty_leaf();
            for _ in 0..take {
                let (key, payload) = iter.next().expect("leaf distribution covers all entries");
                node.keys.push(key);
                node.payloads.push(payload);
            }
            children.push(tree.alloc(node));
            if leaf + 1 < leaf_count {
                separators.push(iter.next().expect("separator between leaves"));
            }
        }

        // Internal levels: group children, consuming one separator per
        // neighbouring pair inside a group and promoting one between groups.
        while children.len() > 1 {
            let count = children.len();
            let groups = count.div_ceil(order);
            let base = count / groups;
            let extra = count % groups;
            let mut next_children = Vec::with_capacity(groups);
            let mut next_separators = Vec::new();
            let mut sep_iter = separators.into_iter();
            let mut child_iter = children.into_iter();
            for group in 0..groups {
                let take = base + usize::from(group < extra);
                let mut node = BTreeNode::empty_leaf();
                for i in 0..take {
                    node.children.push(child_iter.next().expect("child"));
                    if i + 1 < take {
                        let (key, payload) = sep_iter.next().expect("in-group separator");
                        node.keys.push(key);
                        node.payloads.push(payload);
                    }
                }
                next_children.push(tree.alloc(node));
                if group + 1 < groups {
                    next_separators.push(sep_iter.next().expect("promoted separator"));
                }
            }
            children = next_children;
            separators = next_separators;
        }
        tree.root = children[0];
        Ok(tree)
    }

    fn alloc(&mut self, node: BTreeNode<V>) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node);
        id
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of keys stored.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &BTreeNode<V> {
        &self.nodes[id.0 as usize]
    }

    /// Number of levels from root to leaf (1 for a lone root leaf).
    pub fn height(&self) -> usize {
        let mut height = 1;
        let mut id = self.root;
        while !self.node(id).is_leaf() {
            id = self.node(id).children[0];
            height += 1;
        }
        height
    }

    /// Child fetches performed by searches since the last reset.
    pub fn node_reads(&self) -> u64 {
        self.node_reads.load(Ordering::Relaxed)
    }

    pub fn reset_node_reads(&self) {
        self.node_reads.store(0, Ordering::Relaxed);
    }

    /// Locate `key`: scan the current node's keys left to right past those
    /// smaller than `key`; stop on a match, give up at a leaf, otherwise
    /// fetch the i-th child (counted as one disk read) and continue there.
    pub fn search(&self, key: &[u8]) -> Option<(NodeId, usize)> {
        let mut x = self.root;
        loop {
            let node = self.node(x);
            let mut i = 0;
            while i < node.keys.len() && key > node.keys[i].as_slice() {
                i += 1;
            }
            if i < node.keys.len() && key == node.keys[i].as_slice() {
                return Some((x, i));
            }
            if node.is_leaf() {
                return None;
            }
            self.node_reads.fetch_add(1, Ordering::Relaxed);
            x = node.children[i];
        }
    }

    /// Payload stored under `key`, if present.
    pub fn get(&self, key: &[u8]) -> Option<&V> {
        self.search(key)
            .map(|(id, i)| self.node(id).payload(i))
    }

    /// Insert a new key. Duplicate keys are rejected; the caller merges
    /// payloads upstream.
    pub fn insert(&mut self, key: Vec<u8>, payload: V) -> Result<()> {
        if let Some((key, payload, right)) = self.insert_into(self.root, key, payload)? {
            let left = self.root;
            self.root = self.alloc(BTreeNode {
                keys: vec![key],
                payloads: vec![payload],
                children: vec![left, right],
            });
        }
        self.len += 1;
        Ok(())
    }

    /// Recursive insert; a node that overflows to `order` keys splits, and
    /// the separator propagates to the caller.
    fn insert_into(
        &mut self,
        id: NodeId,
        key: Vec<u8>,
        payload: V,
    ) -> Result<Option<(Vec<u8>, V, NodeId)>> {
        let pos = match self.nodes[id.0 as usize].keys.binary_search(&key) {
            Ok(_) => return Err(Error::DuplicateKey(hex::encode(&key))),
            Err(pos) => pos,
        };
        if self.nodes[id.0 as usize].is_leaf() {
            let node = &mut self.nodes[id.0 as usize];
            node.keys.insert(pos, key);
            node.payloads.insert(pos, payload);
        } else {
            let child = self.nodes[id.0 as usize].children[pos];
            if let Some((sep_key, sep_payload, right)) = self.insert_into(child, key, payload)? {
                let node = &mut self.nodes[id.0 as usize];
                node.keys.insert(pos, sep_key);
                node.payloads.insert(pos, sep_payload);
                node.children.insert(pos + 1, right);
            }
        }
        if self.nodes[id.0 as usize].keys.len() == self.order {
            Ok(Some(self.split(id)))
        } else {
            Ok(None)
        }
    }

    /// Split an overflowing node around its median key; returns the promoted
    /// separator and the new right sibling.
    fn split(&mut self, id: NodeId) -> (Vec<u8>, V, NodeId) {
        let mid = self.order / 2;
        let node = &mut self.nodes[id.0 as usize];
        let right_keys = node.keys.split_off(mid + 1);
        let right_payloads = node.payloads.split_off(mid + 1);
        let right_children = if node.is_leaf() {
            Vec::new()
        } else {
            node.children.split_off(mid + 1)
        };
        let sep_key = node.keys.pop().expect("median key");
        let sep_payload = node.payloads.pop().expect("median payload");
        let right = self.alloc(BTreeNode {
            keys: right_keys,
            payloads: right_payloads,
            children: right_children,
        });
        (sep_key, sep_payload, right)
    }

    /// In-order `(key, payload)` sequence.
    pub fn traverse(&self) -> Vec<(&[u8], &V)> {
        let mut out = Vec::with_capacity(self.len);
        self.traverse_node(self.root, &mut out);
        out
    }

    fn traverse_node<'a>(&'a self, id: NodeId, out: &mut Vec<(&'a [u8], &'a V)>) {
        let node = self.node(id);
        if node.is_leaf() {
            for (key, payload) in node.keys.iter().zip(&node.payloads) {
                out.push((key.as_slice(), payload));
            }
            return;
        }
        for i in 0..node.keys.len() {
            self.traverse_node(node.children[i], out);
            out.push((node.keys[i].as_slice(), &node.payloads[i]));
        }
        self.traverse_node(*node.children.last().expect("internal node children"), out);
    }

    /// Check every structural rule; an empty report means the tree is
    /// well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let mut leaf_depth = None;
        self.validate_node(
            self.root,
            "root".to_string(),
            0,
            None,
            None,
            &mut leaf_depth,
            &mut violations,
        );
        let total: usize = self.count_keys(self.root);
        if total != self.len {
            violations.push(Violation {
                path: "root".to_string(),
                message: format!("tree holds {total} keys but len() reports {}", self.len),
            });
        }
        violations
    }

    fn count_keys(&self, id: NodeId) -> usize {
        let node = self.node(id);
        node.keys.len()
            + node
                .children
                .iter()
                .map(|&c| self.count_keys(c))
                .sum::<usize>()
    }

    #[allow(clippy::too_many_arguments)]
    fn validate_node(
        &self,
        id: NodeId,
        path: String,
        depth: usize,
        lower: Option<&[u8]>,
        upper: Option<&[u8]>,
        leaf_depth: &mut Option<usize>,
        violations: &mut Vec<Violation>,
    ) {
        let node = self.node(id);
        let mut report = |message: String| {
            violations.push(Violation {
                path: path.clone(),
                message,
            });
        };

        if node.payloads.len() != node.keys.len() {
            report(format!(
                "{} keys but {} payloads",
                node.keys.len(),
                node.payloads.len()
            ));
        }
        for pair in node.keys.windows(2) {
            if pair[0] >= pair[1] {
                report("keys out of order".to_string());
                break;
            }
        }
        if node.keys.len() > self.order - 1 {
            report(format!(
                "{} keys exceeds maximum {}",
                node.keys.len(),
                self.order - 1
            ));
        }
        let is_root = id == self.root;
        if !is_root && node.keys.len() + 1 < self.order.div_ceil(2) {
            report(format!(
                "{} keys is under minimum {}",
                node.keys.len(),
                self.order.div_ceil(2) - 1
            ));
        }
        if let (Some(first), Some(lower)) = (node.keys.first(), lower) {
            if first.as_slice() <= lower {
                report("key at or below parent lower bound".to_string());
            }
        }
        if let (Some(last), Some(upper)) = (node.keys.last(), upper) {
            if last.as_slice() >= upper {
                report("key at or above parent upper bound".to_string());
            }
        }

        if node.is_leaf() {
            match *leaf_depth {
                None => *leaf_depth = Some(depth),
                Some(expected) if expected != depth => {
                    report(format!("leaf at depth {depth}, expected {expected}"));
                }
                Some(_) => {}
            }
            return;
        }

        if node.children.len() != node.keys.len() + 1 {
            report(format!(
                "internal node has {} keys but {} children",
                node.keys.len(),
                node.children.len()
            ));
            return; // child/key pairing is broken; bounds below would lie
        }
        if is_root && node.children.len() < 2 {
            report("internal root has fewer than 2 children".to_string());
        }
        for (i, &child) in node.children.iter().enumerate() {
            let child_lower = if i == 0 {
                lower
            } else {
                Some(node.keys[i - 1].as_slice())
            };
            let child_upper = if i == node.keys.len() {
                upper
            } else {
                Some(node.keys[i].as_slice())
            };
            self.validate_node(
                child,
                format!("{path}/{i}"),
                depth + 1,
                child_lower,
                child_upper,
                leaf_depth,
                violations,
            );
        }
    }
}

impl<V> fmt::Debug for BTree<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BTree")
            .field("order", &self.order)
            .field("len", &self.len)
            .field("height", &self.height())
            .finish()
    }
}
