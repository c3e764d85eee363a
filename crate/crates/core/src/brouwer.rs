//! Finite Brouwer algebras as operation tables.
//!
//! Ordering conventions follow the Brouwer (not Heyting) side: `0` is the
//! least element and denotes truth, `⊕` is the join and interprets
//! conjunction, `⊗` is the meet and interprets disjunction, and `a → b` is the
//! least `c` with `a ⊕ c ≥ b`.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{enumerate_upsets, OrderError, Poset, Upset};

/// Largest carrier materialized as full tables.
pub const MAX_CARRIER: usize = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("operation table `{table}` is not total: expected a {expected}x{expected} matrix")]
    PartialTable {
        table: &'static str,
        expected: usize,
    },
    #[error("table `{table}` refers to element {value}, carrier has {size}")]
    EntryOutOfRange {
        table: &'static str,
        value: usize,
        size: usize,
    },
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("unknown element index {0}")]
    UnknownElement(usize),
    #[error("unknown element `{0}`")]
    UnknownLabel(String),
    #[error("carrier of {size} elements exceeds the table limit {limit}")]
    Capacity { size: usize, limit: usize },
    #[error("stored order disagrees with the join table at ({0}, {1})")]
    OrderMismatch(usize, usize),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// A finite algebra given by its `⊕`, `⊗` and `→` tables. The order is
/// derived from `⊕` (`a ≤ b` iff `a ⊕ b = b`) and stored as bit rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BrouwerAlgebra {
    labels: Vec<String>,
    /// `above[a] = {b | a ≤ b}`
    above: Vec<FixedBitSet>,
    join: Vec<u32>,
    meet: Vec<u32>,
    imp: Vec<u32>,
    bottom: usize,
    top: usize,
}

impl fmt::Debug for BrouwerAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BrouwerAlgebra")
            .field("carrier", &self.labels)
            .field("bottom", &self.labels[self.bottom])
            .field("top", &self.labels[self.top])
            .finish()
    }
}

fn flatten(table: &'static str, rows: Vec<Vec<usize>>, n: usize) -> Result<Vec<u32>, AlgebraError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(AlgebraError::PartialTable { table, expected: n });
    }
    let mut out = Vec::with_capacity(n * n);
    for v in rows.into_iter().flatten() {
        if v >= n {
            return Err(AlgebraError::EntryOutOfRange {
                table,
                value: v,
                size: n,
            });
        }
        out.push(v as u32);
    }
    Ok(out)
}

impl BrouwerAlgebra {
    /// Assembles an algebra from row-major tables. Only shape and range are
    /// validated here; use [`verify_brouwer`] for the axioms.
    pub fn from_tables(
        labels: Vec<String>,
        join: Vec<Vec<usize>>,
        meet: Vec<Vec<usize>>,
        imp: Vec<Vec<usize>>,
        bottom: usize,
        top: usize,
    ) -> Result<Self, AlgebraError> {
        let n = labels.len();
        if n == 0 {
            return Err(AlgebraError::EmptyCarrier);
        }
        if n > MAX_CARRIER {
            return Err(AlgebraError::Capacity {
                size: n,
                limit: MAX_CARRIER,
            });
        }
        for e in [bottom, top] {
            if e >= n {
                return Err(AlgebraError::UnknownElement(e));
            }
        }
        let join = flatten("join", join, n)?;
        let meet = flatten("meet", meet, n)?;
        let imp = flatten("imp", imp, n)?;
        let above = (0..n)
            .map(|a| {
                let mut row = FixedBitSet::with_capacity(n);
                for b in 0..n {
                    if join[a * n + b] as usize == b {
                        row.insert(b);
                    }
                }
                row
            })
            .collect();
        Ok(BrouwerAlgebra {
            labels,
            above,
            join,
            meet,
            imp,
            bottom,
            top,
        })
    }

    /// Like [`BrouwerAlgebra::from_tables`] but with the order supplied
    /// independently; it must agree with the join table.
    fn with_order(
        labels: Vec<String>,
        above: Vec<FixedBitSet>,
        join: Vec<u32>,
        meet: Vec<u32>,
        imp: Vec<u32>,
        bottom: usize,
        top: usize,
    ) -> Result<Self, AlgebraError> {
        let n = labels.len();
        for a in 0..n {
            for b in 0..n {
                if above[a].contains(b) != (join[a * n + b] as usize == b) {
                    return Err(AlgebraError::OrderMismatch(a, b));
                }
            }
        }
        Ok(BrouwerAlgebra {
            labels,
            above,
            join,
            meet,
            imp,
            bottom,
            top,
        })
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

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, AlgebraError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| AlgebraError::UnknownLabel(label.to_owned()))
    }

    pub fn check_element(&self, a: usize) -> Result<(), AlgebraError> {
        if a < self.len() {
            Ok(())
        } else {
            Err(AlgebraError::UnknownElement(a))
        }
    }

    /// The least element, `0`.
    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// The greatest element, `1`.
    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.above[a].contains(b)
    }

    /// `a ⊕ b`
    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b] as usize
    }

    /// `a ⊗ b`
    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b] as usize
    }

    /// `a → b`
    #[inline]
    pub fn imp(&self, a: usize, b: usize) -> usize {
        self.imp[a * self.len() + b] as usize
    }

    /// `¬a = a → 1`
    pub fn neg(&self, a: usize) -> usize {
        self.imp(a, self.top)
    }

    /// Overwrites one implication entry. Only meant for building deliberately
    /// broken algebras in tests and diagnostics.
    pub fn set_imp(&mut self, a: usize, b: usize, value: usize) {
        let n = self.len();
        assert!(a < n && b < n && value < n);
        self.imp[a * n + b] = value as u32;
    }

    fn rows(&self, table: &[u32]) -> Vec<Vec<usize>> {
        table
            .chunks(self.len())
            .map(|r| r.iter().map(|&v| v as usize).collect())
            .collect()
    }

    pub fn to_json(&self) -> AlgebraJson {
        AlgebraJson {
            carrier: self.labels.clone(),
            bottom: self.bottom,
            top: self.top,
            join: self.rows(&self.join),
            meet: self.rows(&self.meet),
            imp: self.rows(&self.imp),
        }
    }
}

/// Serialized algebra: carrier labels and index matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub carrier: Vec<String>,
    pub bottom: usize,
    pub top: usize,
    pub join: Vec<Vec<usize>>,
    pub meet: Vec<Vec<usize>>,
    pub imp: Vec<Vec<usize>>,
}

impl TryFrom<AlgebraJson> for BrouwerAlgebra {
    type Error = AlgebraError;

    fn try_from(j: AlgebraJson) -> Result<Self, Self::Error> {
        BrouwerAlgebra::from_tables(j.carrier, j.join, j.meet, j.imp, j.bottom, j.top)
    }
}

/// One failed axiom instance. Element indices refer to the checked algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BrouwerViolation {
    NotReflexive {
        a: usize,
    },
    NotAntisymmetric {
        a: usize,
        b: usize,
    },
    NotTransitive {
        a: usize,
        b: usize,
        c: usize,
    },
    JoinNotLeastUpperBound {
        a: usize,
        b: usize,
    },
    MeetNotGreatestLowerBound {
        a: usize,
        b: usize,
    },
    BottomNotLeast {
        a: usize,
    },
    TopNotGreatest {
        a: usize,
    },
    NotDistributive {
        a: usize,
        b: usize,
        c: usize,
    },
    /// `b ≤ a ⊕ c` and `a → b ≤ c` disagree.
    Residuation {
        a: usize,
        b: usize,
        c: usize,
    },
}

impl fmt::Display for BrouwerViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use BrouwerViolation::*;
        match *self {
            NotReflexive { a } => write!(f, "order not reflexive at {a}"),
            NotAntisymmetric { a, b } => write!(f, "order not antisymmetric at {a}, {b}"),
            NotTransitive { a, b, c } => write!(f, "order not transitive at {a}, {b}, {c}"),
            JoinNotLeastUpperBound { a, b } => write!(f, "{a} ⊕ {b} is not the least upper bound"),
            MeetNotGreatestLowerBound { a, b } => {
                write!(f, "{a} ⊗ {b} is not the greatest lower bound")
            }
            BottomNotLeast { a } => write!(f, "0 is not below {a}"),
            TopNotGreatest { a } => write!(f, "1 is not above {a}"),
            NotDistributive { a, b, c } => {
                write!(f, "{a} ⊗ ({b} ⊕ {c}) ≠ ({a} ⊗ {b}) ⊕ ({a} ⊗ {c})")
            }
            Residuation { a, b, c } => {
                write!(f, "residuation fails: {a} ⊕ {c} ≥ {b} iff {c} ≥ {a} → {b}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BrouwerReport {
    pub violations: Vec<BrouwerViolation>,
}

impl BrouwerReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the order axioms, lattice bounds, boundedness, distributivity and
/// residuation exhaustively. Cubic in the carrier size.
pub fn verify_brouwer(b: &BrouwerAlgebra) -> BrouwerReport {
    use BrouwerViolation::*;
    let n = b.len();
    let mut v = Vec::new();
    for x in 0..n {
        if !b.leq(x, x) {
            v.push(NotReflexive { a: x });
        }
        if !b.leq(b.bottom, x) {
            v.push(BottomNotLeast { a: x });
        }
        if !b.leq(x, b.top) {
            v.push(TopNotGreatest { a: x });
        }
        for y in 0..n {
            if x < y && b.leq(x, y) && b.leq(y, x) {
                v.push(NotAntisymmetric { a: x, b: y });
            }
            let j = b.join(x, y);
            let m = b.meet(x, y);
            let join_ok = b.leq(x, j)
                && b.leq(y, j)
                && (0..n).all(|u| !(b.leq(x, u) && b.leq(y, u)) || b.leq(j, u));
            if !join_ok {
                v.push(JoinNotLeastUpperBound { a: x, b: y });
            }
            let meet_ok = b.leq(m, x)
                && b.leq(m, y)
                && (0..n).all(|l| !(b.leq(l, x) && b.leq(l, y)) || b.leq(l, m));
            if !meet_ok {
                v.push(MeetNotGreatestLowerBound { a: x, b: y });
            }
            for z in 0..n {
                if b.leq(x, y) && b.leq(y, z) && !b.leq(x, z) {
                    v.push(NotTransitive { a: x, b: y, c: z });
                }
                if b.meet(x, b.join(y, z)) != b.join(b.meet(x, y), b.meet(x, z)) {
                    v.push(NotDistributive { a: x, b: y, c: z });
                }
                // a = x, b = y, c = z
                if b.leq(y, b.join(x, z)) != b.leq(b.imp(x, y), z) {
                    v.push(Residuation { a: x, b: y, c: z });
                }
            }
        }
    }
    BrouwerReport { violations: v }
}

/// The upset algebra of a poset together with the upset each carrier index
/// stands for.
#[derive(Clone, Debug)]
pub struct UpsetAlgebra {
    pub algebra: BrouwerAlgebra,
    pub upsets: Vec<Upset>,
    index: HashMap<FixedBitSet, usize>,
}

impl UpsetAlgebra {
    pub fn index_of(&self, u: &Upset) -> Option<usize> {
        self.index.get(u.members()).copied()
    }

    pub fn index_of_set(&self, s: &FixedBitSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn upset(&self, a: usize) -> &Upset {
        &self.upsets[a]
    }
}

/// `O(X)` ordered by reverse inclusion: `⊕ = ∩`, `⊗ = ∪`, `0 = X`, `1 = ∅`
/// and `U → V = {x | ∀y ≥ x (y ∈ U ⇒ y ∈ V)}`.
pub fn upset_algebra(poset: &Poset) -> Result<UpsetAlgebra, AlgebraError> {
    let upsets = enumerate_upsets(poset)?;
    let n = upsets.len();
    if n > MAX_CARRIER {
        return Err(AlgebraError::Capacity {
            size: n,
            limit: MAX_CARRIER,
        });
    }
    let index: HashMap<FixedBitSet, usize> = upsets
        .iter()
        .enumerate()
        .map(|(i, u)| (u.members().clone(), i))
        .collect();
    let lookup = |s: &FixedBitSet| -> u32 { index[s] as u32 };

    let mut join = Vec::with_capacity(n * n);
    let mut meet = Vec::with_capacity(n * n);
    let mut imp = Vec::with_capacity(n * n);
    for u in &upsets {
        for v in &upsets {
            let mut cap = u.members().clone();
            cap.intersect_with(v.members());
            join.push(lookup(&cap));
            let mut cup = u.members().clone();
            cup.union_with(v.members());
            meet.push(lookup(&cup));
            let mut arrow = poset.empty_set();
            for x in 0..poset.len() {
                let holds = poset
                    .up_set(x)
                    .ones()
                    .all(|y| !u.contains(y) || v.contains(y));
                if holds {
                    arrow.insert(x);
                }
            }
            imp.push(lookup(&arrow));
        }
    }
    let above = upsets
        .iter()
        .map(|u| {
            let mut row = FixedBitSet::with_capacity(n);
            for (j, v) in upsets.iter().enumerate() {
                if v.members().is_subset(u.members()) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    let labels = upsets.iter().map(|u| u.display(poset)).collect();
    let bottom = lookup(&poset.full_set()) as usize;
    let top = lookup(&poset.empty_set()) as usize;
    let algebra = BrouwerAlgebra::with_order(labels, above, join, meet, imp, bottom, top)?;
    Ok(UpsetAlgebra {
        algebra,
        upsets,
        index,
    })
}

/// `B / x`, the quotient by the principal filter generated by `x`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: BrouwerAlgebra,
    /// Class index of every element of the original algebra.
    pub projection: Vec<usize>,
    /// Canonical representative `y ⊗ x` of each class.
    pub representatives: Vec<usize>,
}

/// Identifies `y` and `z` when `y ⊗ x = z ⊗ x`. Operations are computed on an
/// arbitrary class member (the one with the smallest index), with implication
/// `[y] → [z] = [(y ⊗ x) → (z ⊗ x)]`.
pub fn quotient(b: &BrouwerAlgebra, x: usize) -> Result<Quotient, AlgebraError> {
    b.check_element(x)?;
    let n = b.len();
    let rep_of: Vec<usize> = (0..n).map(|y| b.meet(y, x)).collect();
    let mut representatives: Vec<usize> = rep_of.clone();
    representatives.sort_unstable();
    representatives.dedup();
    let class_index: HashMap<usize, usize> = representatives
        .iter()
        .enumerate()
        .map(|(i, &r)| (r, i))
        .collect();
    let projection: Vec<usize> = rep_of.iter().map(|r| class_index[r]).collect();
    let k = representatives.len();
    let mut witness = vec![usize::MAX; k];
    for y in (0..n).rev() {
        witness[projection[y]] = y;
    }
    let mut join = vec![vec![0; k]; k];
    let mut meet = vec![vec![0; k]; k];
    let mut imp = vec![vec![0; k]; k];
    for c in 0..k {
        for d in 0..k {
            let (y, z) = (witness[c], witness[d]);
            join[c][d] = projection[b.join(y, z)];
            meet[c][d] = projection[b.meet(y, z)];
            imp[c][d] = projection[b.imp(b.meet(y, x), b.meet(z, x))];
        }
    }
    let labels = representatives
        .iter()
        .map(|&r| format!("[{}]", b.label(r)))
        .collect();
    let algebra = BrouwerAlgebra::from_tables(
        labels,
        join,
        meet,
        imp,
        projection[b.bottom()],
        projection[b.top()],
    )?;
    Ok(Quotient {
        algebra,
        projection,
        representatives,
    })
}

/// A carrier map between two algebras.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraHomomorphism {
    pub map: Vec<usize>,
    pub isomorphism: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomViolation {
    WrongDomain { expected: usize, got: usize },
    OutOfRange { a: usize },
    Join { a: usize, b: usize },
    Meet { a: usize, b: usize },
    Imp { a: usize, b: usize },
    Bottom,
    Top,
    NotInjective { a: usize, b: usize },
    NotSurjective { target: usize },
}

impl AlgebraHomomorphism {
    /// Checks preservation of `⊕`, `⊗`, `→`, `0`, `1`, and bijectivity when
    /// the map is flagged as an isomorphism.
    pub fn verify(&self, source: &BrouwerAlgebra, target: &BrouwerAlgebra) -> Vec<HomViolation> {
        let n = source.len();
        if self.map.len() != n {
            return vec![HomViolation::WrongDomain {
                expected: n,
                got: self.map.len(),
            }];
        }
        let mut v = Vec::new();
        for (a, &fa) in self.map.iter().enumerate() {
            if fa >= target.len() {
                v.push(HomViolation::OutOfRange { a });
            }
        }
        if !v.is_empty() {
            return v;
        }
        let f = &self.map;
        for a in 0..n {
            for b in 0..n {
                if f[source.join(a, b)] != target.join(f[a], f[b]) {
                    v.push(HomViolation::Join { a, b });
                }
                if f[source.meet(a, b)] != target.meet(f[a], f[b]) {
                    v.push(HomViolation::Meet { a, b });
                }
                if f[source.imp(a, b)] != target.imp(f[a], f[b]) {
                    v.push(HomViolation::Imp { a, b });
                }
            }
        }
        if f[source.bottom()] != target.bottom() {
            v.push(HomViolation::Bottom);
        }
        if f[source.top()] != target.top() {
            v.push(HomViolation::Top);
        }
        if self.isomorphism {
            let mut seen: Vec<Option<usize>> = vec![None; target.len()];
            for (a, &fa) in f.iter().enumerate() {
                match seen[fa] {
                    Some(b) => v.push(HomViolation::NotInjective { a: b, b: a }),
                    None => seen[fa] = Some(a),
                }
            }
            for (t, s) in seen.iter().enumerate() {
                if s.is_none() {
                    v.push(HomViolation::NotSurjective { target: t });
                }
            }
        }
        v
    }
}

/// The interval `[0, x]` with `y →' z = (y → z) ⊗ x`, and the isomorphism
/// `u ↦ [u]` onto `B / x`.
pub fn interval_algebra(
    b: &BrouwerAlgebra,
    x: usize,
) -> Result<(BrouwerAlgebra, AlgebraHomomorphism), AlgebraError> {
    b.check_element(x)?;
    let members: Vec<usize> = (0..b.len()).filter(|&u| b.leq(u, x)).collect();
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let k = members.len();
    let table = |op: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
        members
            .iter()
            .map(|&y| members.iter().map(|&z| pos[&op(y, z)]).collect())
            .collect()
    };
    let join = table(&|y, z| b.join(y, z));
    let meet = table(&|y, z| b.meet(y, z));
    let imp = table(&|y, z| b.meet(b.imp(y, z), x));
    let labels = members.iter().map(|&u| b.label(u).to_owned()).collect();
    let interval = BrouwerAlgebra::from_tables(labels, join, meet, imp, pos[&b.bottom()], pos[&x])?;
    debug_assert_eq!(interval.len(), k);
    let q = quotient(b, x)?;
    let hom = AlgebraHomomorphism {
        map: members.iter().map(|&u| q.projection[u]).collect(),
        isomorphism: true,
    };
    Ok((interval, hom))
}
