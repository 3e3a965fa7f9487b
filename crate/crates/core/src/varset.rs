//! Dense bit-set over a fixed variable universe `1..=n`.

use std::cmp::Ordering;
use std::fmt;

/// Hard cap on the universe size. Keeps block storage small and guards
/// against accidentally gigantic inputs; raise it here if ever needed.
pub const MAX_VARS: usize = 4096;

/// A set of variable indices drawn from a fixed universe `1..=n`.
///
/// Stored as 64-bit blocks, variable `j` at block `(j-1)/64`, bit `(j-1)%64`.
/// All binary operations require both operands to share the same universe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    n: usize,
    blocks: Vec<u64>,
}

/// How two sets overlap, distinguishing the one-element case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overlap {
    Empty,
    Single(usize),
    Many,
}

impl VarSet {
    /// Empty set over universe `1..=n`.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VARS, "universe {n} exceeds the {MAX_VARS}-variable cap");
        VarSet { n, blocks: vec![0; n.div_ceil(64)] }
    }

    /// The full universe `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for b in 0..s.blocks.len() {
            s.blocks[b] = u64::MAX;
        }
        s.clear_tail();
        s
    }

    /// Set containing exactly `vars`; panics on out-of-range indices.
    pub fn from_vars(n: usize, vars: &[usize]) -> Self {
        let mut s = Self::empty(n);
        for &v in vars {
            s.insert(v);
        }
        s
    }

    fn clear_tail(&mut self) {
        let used = self.n % 64;
        if used != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
        if self.n == 0 {
            self.blocks.clear();
        }
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn contains(&self, v: usize) -> bool {
        debug_assert!(v >= 1 && v <= self.n, "variable x{v} outside universe 1..={}", self.n);
        self.blocks[(v - 1) / 64] & (1u64 << ((v - 1) % 64)) != 0
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v >= 1 && v <= self.n, "variable x{v} outside universe 1..={}", self.n);
        self.blocks[(v - 1) / 64] |= 1u64 << ((v - 1) % 64);
    }

    pub fn remove(&mut self, v: usize) {
        assert!(v >= 1 && v <= self.n, "variable x{v} outside universe 1..={}", self.n);
        self.blocks[(v - 1) / 64] &= !(1u64 << ((v - 1) % 64));
    }

    /// Ascending iterator over the members.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut rest = block;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let bit = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(bi * 64 + bit + 1)
                }
            })
        })
    }

    pub fn min_var(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn max_var(&self) -> Option<usize> {
        for (bi, &block) in self.blocks.iter().enumerate().rev() {
            if block != 0 {
                return Some(bi * 64 + 63 - block.leading_zeros() as usize + 1);
            }
        }
        None
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check_same_universe(&self, other: &VarSet) {
        assert_eq!(self.n, other.n, "sets from different universes ({} vs {})", self.n, other.n);
    }

    pub fn union_with(&mut self, other: &VarSet) {
        self.check_same_universe(other);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VarSet) {
        self.check_same_universe(other);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &VarSet) {
        self.check_same_universe(other);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VarSet) -> VarSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VarSet) -> VarSet {
        let mut s = self.clone();
        s.subtract(other);
        s
    }

    /// Complement within the universe.
    pub fn complement(&self) -> VarSet {
        let mut s = VarSet::full(self.n);
        s.subtract(self);
        s
    }

    pub fn is_subset_of(&self, other: &VarSet) -> bool {
        self.check_same_universe(other);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &VarSet) -> bool {
        self.check_same_universe(other);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & b == 0)
    }

    pub fn intersection_len(&self, other: &VarSet) -> usize {
        self.check_same_universe(other);
        self.blocks.iter().zip(&other.blocks).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    /// Classify the intersection with `other`, reporting the sole shared
    /// variable when there is exactly one.
    pub fn sole_intersection(&self, other: &VarSet) -> Overlap {
        self.check_same_universe(other);
        let mut found: Option<usize> = None;
        for (bi, (a, b)) in self.blocks.iter().zip(&other.blocks).enumerate() {
            let x = a & b;
            if x == 0 {
                continue;
            }
            if x.count_ones() > 1 || found.is_some() {
                return Overlap::Many;
            }
            found = Some(bi * 64 + x.trailing_zeros() as usize + 1);
        }
        match found {
            None => Overlap::Empty,
            Some(v) => Overlap::Single(v),
        }
    }

    /// Members strictly below `i` (the restriction to `{1, ..., i-1}`).
    pub fn below(&self, i: usize) -> VarSet {
        let mut s = self.clone();
        for b in 0..s.blocks.len() {
            let base = b * 64; // bits base+1 ..= base+64
            if base + 64 < i {
                continue;
            }
            if base + 1 >= i {
                s.blocks[b] = 0;
            } else {
                // keep bits for variables base+1 ..= i-1
                s.blocks[b] &= (1u64 << ((i - 1) - base)) - 1;
            }
        }
        s
    }

    /// Members strictly above `i`.
    pub fn above(&self, i: usize) -> VarSet {
        let below_or_eq = self.below(i + 1);
        let mut s = self.clone();
        s.subtract(&below_or_eq);
        s
    }

    /// Total order by the weight `sum of 2^(n-j)` over members `j`:
    /// variable 1 is the most significant position, so the set containing
    /// the smallest differing variable compares greater.
    pub fn cmp_key(&self, other: &VarSet) -> Ordering {
        self.check_same_universe(other);
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            let x = a ^ b;
            if x != 0 {
                let low = x & x.wrapping_neg();
                return if a & low != 0 { Ordering::Greater } else { Ordering::Less };
            }
        }
        Ordering::Equal
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Wrapper ordering `VarSet`s by their term weight (for ordered queues).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KeyOrdered(pub VarSet);

impl PartialOrd for KeyOrdered {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KeyOrdered {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp_key(&other.0)
    }
}
