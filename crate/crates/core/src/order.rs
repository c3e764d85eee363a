//! Finite posets and their upsets.
//!
//! A [`Poset`] stores its order fully closed: every element carries the bit-set
//! of elements above it and the bit-set of elements below it, so `leq` is a
//! single bit test. Subsets of a poset are plain [`FixedBitSet`]s keyed by
//! element index; an [`Upset`] is a subset known to be upward closed.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest poset whose upsets we are willing to enumerate.
pub const MAX_UPSET_ENUMERATION: usize = 20;
/// Largest element count accepted by [`generate_posets`].
pub const MAX_GENERATED: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("unknown element `{0}`")]
    UnknownLabel(String),
    #[error("element index {0} is out of range")]
    UnknownElement(usize),
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("relation is not antisymmetric: `{0}` <= `{1}` and `{1}` <= `{0}`")]
    NotAntisymmetric(String, String),
    #[error("subset is not upward closed: contains `{0}` but not `{1}`")]
    NotUpset(String, String),
    #[error("{what} exceeds capacity ({size} > {limit})")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("poset must have at least {min} element(s), got {size}")]
    TooSmall { size: usize, min: usize },
}

/// A finite partial order with labelled elements.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.labels[a], self.labels[b]))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.labels)
            .field("covers", &covers)
            .finish()
    }
}

impl Poset {
    /// Builds a poset from a generating relation given as index pairs `(x, y)`
    /// meaning `x <= y`. The reflexive-transitive closure is computed here and
    /// antisymmetry is enforced.
    pub fn from_relation<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        pairs: &[(usize, usize)],
    ) -> Result<Self, OrderError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(OrderError::DuplicateLabel(l.clone()));
            }
        }
        let mut up: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert(i);
                s
            })
            .collect();
        for &(x, y) in pairs {
            if x >= n {
                return Err(OrderError::UnknownElement(x));
            }
            if y >= n {
                return Err(OrderError::UnknownElement(y));
            }
            up[x].insert(y);
        }
        // Warshall over bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for x in 0..n {
            for y in up[x].ones() {
                if y != x && up[y].contains(x) {
                    return Err(OrderError::NotAntisymmetric(
                        labels[x].clone(),
                        labels[y].clone(),
                    ));
                }
            }
        }
        let mut down: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
        for (x, row) in up.iter().enumerate() {
            for y in row.ones() {
                down[y].insert(x);
            }
        }
        let poset = Poset {
            labels,
            index,
            up,
            down,
        };
        debug_assert!(poset.check_axioms().is_ok());
        Ok(poset)
    }

    /// Same as [`Poset::from_relation`] but with the relation given by labels.
    pub fn from_labeled_pairs<S: AsRef<str>>(
        labels: &[S],
        pairs: &[(S, S)],
    ) -> Result<Self, OrderError> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        let lookup = |l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| OrderError::UnknownLabel(l.to_owned()))
        };
        let mut idx = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            idx.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Poset::from_relation(labels.clone(), &idx)
    }

    pub fn antichain<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        Poset::from_relation(labels, &[]).expect("antichain is a poset")
    }

    /// The chain `labels[0] < labels[1] < ...`.
    pub fn chain<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let pairs: Vec<(usize, usize)> = (1..labels.len()).map(|i| (i - 1, i)).collect();
        Poset::from_relation(labels, &pairs).expect("chain is a poset")
    }

    /// The full binary tree `2^{<height}`: binary strings of length below
    /// `height` ordered by prefix. Elements are listed by length, then
    /// lexicographically; the root is labelled `ε`.
    pub fn binary_tree(height: usize) -> Self {
        let strings = binary_strings_below(height);
        let pos: HashMap<&str, usize> = strings
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut pairs = Vec::new();
        for (i, s) in strings.iter().enumerate() {
            if !s.is_empty() {
                pairs.push((pos[&s[..s.len() - 1]], i));
            }
        }
        let labels = strings.iter().map(|s| tree_label(s));
        Poset::from_relation(labels, &pairs).expect("tree is a poset")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, OrderError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| OrderError::UnknownLabel(label.to_owned()))
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// `{y | x <= y}`.
    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// `{y | y <= x}`.
    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        s.insert_range(..);
        s
    }

    /// Converts element labels to a subset, rejecting unknown labels.
    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<FixedBitSet, OrderError> {
        let mut s = self.empty_set();
        for l in labels {
            s.insert(self.index_of(l.as_ref())?);
        }
        Ok(s)
    }

    pub fn subset_labels(&self, s: &FixedBitSet) -> Vec<String> {
        s.ones().map(|i| self.labels[i].clone()).collect()
    }

    /// Covering pairs `(x, y)` with `x < y` and nothing strictly between:
    /// the transitive reduction.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in self.up[x].ones() {
                if y == x {
                    continue;
                }
                let between = self.up[x]
                    .ones()
                    .any(|z| z != x && z != y && self.leq(z, y));
                if !between {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.down[x].count_ones(..) == 1)
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.up[x].count_ones(..) == 1)
            .collect()
    }

    /// Re-checks reflexivity, antisymmetry and transitivity of the stored
    /// relation, returning the first violation found.
    pub fn check_axioms(&self) -> Result<(), String> {
        let n = self.len();
        for x in 0..n {
            if !self.leq(x, x) {
                return Err(format!("not reflexive at {}", self.labels[x]));
            }
            for y in 0..n {
                if x != y && self.leq(x, y) && self.leq(y, x) {
                    return Err(format!(
                        "not antisymmetric at {}, {}",
                        self.labels[x], self.labels[y]
                    ));
                }
                if self.up[x].contains(y) != self.down[y].contains(x) {
                    return Err(format!("up/down rows disagree at {}, {}", x, y));
                }
                if !self.leq(x, y) {
                    continue;
                }
                for z in 0..n {
                    if self.leq(y, z) && !self.leq(x, z) {
                        return Err(format!(
                            "not transitive at {}, {}, {}",
                            self.labels[x], self.labels[y], self.labels[z]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether every pair of elements has a least upper bound.
    pub fn is_join_semilattice(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (a + 1..n).all(|b| self.join_index(a, b).is_some()))
    }

    /// Least upper bound of two elements, by index.
    pub fn join_index(&self, a: usize, b: usize) -> Option<usize> {
        let mut bounds = self.up[a].clone();
        bounds.intersect_with(&self.up[b]);
        let mut minimal = bounds
            .ones()
            .filter(|&u| bounds.ones().all(|v| v == u || !self.leq(v, u)));
        let first = minimal.next()?;
        if minimal.next().is_some() {
            return None;
        }
        Some(first)
    }

    /// Returns a copy with elements reordered so that the element at new
    /// position `i` is old element `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Poset {
        assert_eq!(perm.len(), self.len());
        let mut inv = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let labels: Vec<String> = perm.iter().map(|&o| self.labels[o].clone()).collect();
        let pairs: Vec<(usize, usize)> = self
            .covers()
            .into_iter()
            .map(|(a, b)| (inv[a], inv[b]))
            .collect();
        Poset::from_relation(labels, &pairs).expect("permutation preserves poset axioms")
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.labels.clone(),
            leq: self
                .covers()
                .into_iter()
                .map(|(a, b)| [self.labels[a].clone(), self.labels[b].clone()])
                .collect(),
        }
    }
}

/// Serialized poset: element labels plus a generating relation. The loader
/// takes the reflexive-transitive closure and validates antisymmetry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<[String; 2]>,
}

impl TryFrom<PosetJson> for Poset {
    type Error = OrderError;

    fn try_from(json: PosetJson) -> Result<Self, Self::Error> {
        let pairs: Vec<(String, String)> = json.leq.into_iter().map(|[a, b]| (a, b)).collect();
        Poset::from_labeled_pairs(&json.elements, &pairs)
    }
}

impl From<&Poset> for PosetJson {
    fn from(p: &Poset) -> Self {
        p.to_json()
    }
}

/// An upward-closed subset of some poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Upset(FixedBitSet);

impl Upset {
    pub fn new(poset: &Poset, members: FixedBitSet) -> Result<Self, OrderError> {
        check_in_range(poset, &members)?;
        if let Some((y, x)) = upset_violation(poset, &members) {
            return Err(OrderError::NotUpset(
                poset.label(y).to_owned(),
                poset.label(x).to_owned(),
            ));
        }
        let mut members = members;
        members.grow(poset.len());
        Ok(Upset(members))
    }

    pub fn from_labels<S: AsRef<str>>(poset: &Poset, labels: &[S]) -> Result<Self, OrderError> {
        Upset::new(poset, poset.subset(labels)?)
    }

    pub fn empty(poset: &Poset) -> Self {
        Upset(poset.empty_set())
    }

    pub fn full(poset: &Poset) -> Self {
        Upset(poset.full_set())
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.0
    }

    pub fn into_members(self) -> FixedBitSet {
        self.0
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn labels(&self, poset: &Poset) -> Vec<String> {
        poset.subset_labels(&self.0)
    }

    /// Renders as `{a,b}`.
    pub fn display(&self, poset: &Poset) -> String {
        format!("{{{}}}", self.labels(poset).join(","))
    }
}

fn check_in_range(poset: &Poset, s: &FixedBitSet) -> Result<(), OrderError> {
    match s.ones().find(|&i| i >= poset.len()) {
        Some(i) => Err(OrderError::UnknownElement(i)),
        None => Ok(()),
    }
}

fn upset_violation(poset: &Poset, s: &FixedBitSet) -> Option<(usize, usize)> {
    for y in s.ones() {
        if let Some(x) = poset.up_set(y).ones().find(|&x| !s.contains(x)) {
            return Some((y, x));
        }
    }
    None
}

/// Whether `s` is upward closed in `poset`.
pub fn is_upset(poset: &Poset, s: &FixedBitSet) -> Result<bool, OrderError> {
    check_in_range(poset, s)?;
    Ok(upset_violation(poset, s).is_none())
}

/// The least upset containing `s`.
pub fn upward_closure(poset: &Poset, s: &FixedBitSet) -> Result<Upset, OrderError> {
    check_in_range(poset, s)?;
    let mut out = poset.empty_set();
    for x in s.ones() {
        out.union_with(poset.up_set(x));
    }
    Ok(Upset(out))
}

/// Compares two subsets as binary numbers, element 0 being the low bit.
pub fn cmp_as_number(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    let (sa, sb) = (a.as_slice(), b.as_slice());
    let len = sa.len().max(sb.len());
    for i in (0..len).rev() {
        let x = sa.get(i).copied().unwrap_or(0);
        let y = sb.get(i).copied().unwrap_or(0);
        match x.cmp(&y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// All upsets of `poset`, each exactly once, sorted by [`cmp_as_number`]:
/// the empty set comes first and the whole poset last.
pub fn enumerate_upsets(poset: &Poset) -> Result<Vec<Upset>, OrderError> {
    let n = poset.len();
    if n > MAX_UPSET_ENUMERATION {
        return Err(OrderError::Capacity {
            what: "upset enumeration",
            size: n,
            limit: MAX_UPSET_ENUMERATION,
        });
    }
    // Elements with fewer elements above them come first, so every strict
    // upper bound of an element is decided before the element itself.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| poset.up_set(x).count_ones(..));

    fn go(poset: &Poset, order: &[usize], cur: &mut FixedBitSet, out: &mut Vec<Upset>) {
        let Some((&x, rest)) = order.split_first() else {
            out.push(Upset(cur.clone()));
            return;
        };
        go(poset, rest, cur, out);
        if poset.up_set(x).ones().all(|y| y == x || cur.contains(y)) {
            cur.insert(x);
            go(poset, rest, cur, out);
            cur.set(x, false);
        }
    }

    let mut out = Vec::new();
    go(poset, &order, &mut poset.empty_set(), &mut out);
    out.sort_by(|a, b| cmp_as_number(&a.0, &b.0));
    Ok(out)
}

/// Least upper bound of `a` and `b` by label, or `None` when the two have no
/// common upper bound or several minimal ones.
pub fn join(poset: &Poset, a: &str, b: &str) -> Result<Option<String>, OrderError> {
    let (a, b) = (poset.index_of(a)?, poset.index_of(b)?);
    Ok(poset.join_index(a, b).map(|j| poset.label(j).to_owned()))
}

const GENERATED_LABELS: [&str; MAX_GENERATED] = ["a", "b", "c", "d", "e"];

/// Every labelled poset on `n` elements, each exactly once. Elements are
/// labelled `a`, `b`, ... in index order.
///
/// Each poset on `k + 1` elements restricts to a unique poset on the first
/// `k`; conversely the new element is determined by the downset `D` of
/// elements below it and the upset `U` of elements above it, subject to
/// `D ∩ U = ∅` and `d < u` for all `d ∈ D`, `u ∈ U`.
pub fn generate_posets(n: usize) -> Result<Vec<Poset>, OrderError> {
    if n == 0 {
        return Err(OrderError::TooSmall { size: 0, min: 1 });
    }
    if n > MAX_GENERATED {
        return Err(OrderError::Capacity {
            what: "poset generation",
            size: n,
            limit: MAX_GENERATED,
        });
    }
    // Work with strict-order rows to keep the extension step cheap.
    let mut level: Vec<Vec<FixedBitSet>> = vec![vec![FixedBitSet::with_capacity(1)]];
    for k in 1..n {
        let mut next = Vec::new();
        for above in &level {
            let p = strict_rows_to_poset(above, k);
            let upsets = enumerate_upsets(&p)?;
            for d in &upsets {
                // D ranges over downsets: complements of upsets.
                let mut dset = p.full_set();
                dset.difference_with(d.members());
                for u in &upsets {
                    if !dset.is_disjoint(u.members()) {
                        continue;
                    }
                    if !dset
                        .ones()
                        .all(|x| u.members().ones().all(|y| above[x].contains(y)))
                    {
                        continue;
                    }
                    let mut rows: Vec<FixedBitSet> = above
                        .iter()
                        .map(|r| {
                            let mut r = r.clone();
                            r.grow(k + 1);
                            r
                        })
                        .collect();
                    for x in dset.ones() {
                        rows[x].insert(k);
                    }
                    let mut new_row = u.members().clone();
                    new_row.grow(k + 1);
                    rows.push(new_row);
                    next.push(rows);
                }
            }
        }
        level = next;
    }
    Ok(level
        .iter()
        .map(|rows| strict_rows_to_poset(rows, n))
        .collect())
}

fn strict_rows_to_poset(rows: &[FixedBitSet], n: usize) -> Poset {
    let pairs: Vec<(usize, usize)> = rows
        .iter()
        .enumerate()
        .flat_map(|(x, r)| r.ones().map(move |y| (x, y)))
        .collect();
    Poset::from_relation(GENERATED_LABELS[..n].iter().copied(), &pairs)
        .expect("extension step preserves poset axioms")
}

/// A random labelled poset on `n` elements: a random linear order is fixed
/// and each of its pairs is kept with probability `density` before closing.
pub fn random_poset<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Poset {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    let labels: Vec<String> = (0..n).map(element_label).collect();
    Poset::from_relation(labels, &pairs).expect("acyclic relation is a poset")
}

/// `a`, `b`, ..., `z`, `a1`, `b1`, ...
pub fn element_label(i: usize) -> String {
    let c = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        c.to_string()
    } else {
        format!("{}{}", c, i / 26)
    }
}

/// Binary strings of length `< height`, by length then lexicographically.
pub fn binary_strings_below(height: usize) -> Vec<String> {
    let mut out = Vec::new();
    for len in 0..height {
        for bits in 0..(1usize << len) {
            let s: String = (0..len)
                .rev()
                .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
                .collect();
            out.push(s);
        }
    }
    out
}

/// Label used for a tree node: the string itself, or `ε` for the root.
pub fn tree_label(s: &str) -> String {
    if s.is_empty() {
        "ε".to_owned()
    } else {
        s.to_owned()
    }
}
