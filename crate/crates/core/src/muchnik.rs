//! Mass problems over a finite degree poset.
//!
//! Each element of the poset stands for a function at that degree, and the
//! poset order plays the role of Turing reducibility. A mass problem is just a
//! subset of elements. The lattice operations need joins of degrees, so
//! [`muchnik_ops`] and [`iso_check`] require every pair to have a least upper
//! bound; reducibility and `⊗` work on any poset.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brouwer::{upset_algebra, AlgebraError, BrouwerAlgebra};
use crate::order::{enumerate_upsets, upward_closure, OrderError, Poset, PosetJson};

/// Largest degree poset for which [`iso_check`] walks all mass problems.
pub const MAX_ISO_CHECK: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MuchnikError {
    #[error("mass problems live over different degree posets")]
    PosetMismatch,
    #[error("degrees `{0}` and `{1}` have no least upper bound")]
    MissingJoin(String, String),
    #[error("degree poset of {size} elements exceeds the limit {limit}")]
    Capacity { size: usize, limit: usize },
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A subset of the degree poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassProblem<'p> {
    poset: &'p Poset,
    members: FixedBitSet,
}

impl<'p> MassProblem<'p> {
    pub fn new(poset: &'p Poset, members: FixedBitSet) -> Result<Self, MuchnikError> {
        if let Some(i) = members.ones().find(|&i| i >= poset.len()) {
            return Err(OrderError::UnknownElement(i).into());
        }
        let mut members = members;
        members.grow(poset.len());
        Ok(MassProblem { poset, members })
    }

    pub fn from_labels<S: AsRef<str>>(
        poset: &'p Poset,
        labels: &[S],
    ) -> Result<Self, MuchnikError> {
        MassProblem::new(poset, poset.subset(labels)?)
    }

    /// The empty mass problem, the top degree.
    pub fn empty(poset: &'p Poset) -> Self {
        MassProblem {
            poset,
            members: poset.empty_set(),
        }
    }

    pub fn poset(&self) -> &'p Poset {
        self.poset
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn labels(&self) -> Vec<String> {
        self.poset.subset_labels(&self.members)
    }

    /// `C(A)`: everything computing some member of `A`.
    pub fn closure(&self) -> MassProblem<'p> {
        let members = upward_closure(self.poset, &self.members)
            .expect("members are in range")
            .into_members();
        MassProblem {
            poset: self.poset,
            members,
        }
    }

    pub fn to_json(&self) -> MassProblemJson {
        MassProblemJson {
            poset: self.poset.to_json(),
            members: self.labels(),
        }
    }
}

/// A mass problem together with its degree poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassProblemJson {
    #[serde(flatten)]
    pub poset: PosetJson,
    pub members: Vec<String>,
}

fn same_poset(a: &MassProblem<'_>, b: &MassProblem<'_>) -> Result<(), MuchnikError> {
    if std::ptr::eq(a.poset, b.poset) || a.poset == b.poset {
        Ok(())
    } else {
        Err(MuchnikError::PosetMismatch)
    }
}

/// `A ≤_w B`: every member of `B` is above some member of `A`.
pub fn muchnik_leq(a: &MassProblem<'_>, b: &MassProblem<'_>) -> Result<bool, MuchnikError> {
    same_poset(a, b)?;
    Ok(leq_sets(a.poset, &a.members, &b.members))
}

fn leq_sets(poset: &Poset, a: &FixedBitSet, b: &FixedBitSet) -> bool {
    b.ones().all(|g| a.ones().any(|f| poset.leq(f, g)))
}

fn join_or_err(poset: &Poset, f: usize, g: usize) -> Result<usize, MuchnikError> {
    poset.join_index(f, g).ok_or_else(|| {
        MuchnikError::MissingJoin(poset.label(f).to_owned(), poset.label(g).to_owned())
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuchnikOps<'p> {
    /// `A ⊕ B = {f ⊕ g | f ∈ A, g ∈ B}`
    pub join: MassProblem<'p>,
    /// `A ⊗ B = A ∪ B`
    pub meet: MassProblem<'p>,
    /// `A → B = {g | ∀f ∈ A ∃h ∈ B (h ≤ f ⊕ g)}`
    pub imp: MassProblem<'p>,
}

pub fn muchnik_ops<'p>(
    a: &MassProblem<'p>,
    b: &MassProblem<'p>,
) -> Result<MuchnikOps<'p>, MuchnikError> {
    same_poset(a, b)?;
    let poset = a.poset;
    let mut join = poset.empty_set();
    for f in a.members.ones() {
        for g in b.members.ones() {
            join.insert(join_or_err(poset, f, g)?);
        }
    }
    let mut meet = a.members.clone();
    meet.union_with(&b.members);
    let mut imp = poset.empty_set();
    for g in 0..poset.len() {
        let mut ok = true;
        for f in a.members.ones() {
            let fg = join_or_err(poset, f, g)?;
            if !b.members.ones().any(|h| poset.leq(h, fg)) {
                ok = false;
                break;
            }
        }
        if ok {
            imp.insert(g);
        }
    }
    let wrap = |members| MassProblem { poset, members };
    Ok(MuchnikOps {
        join: wrap(join),
        meet: wrap(meet),
        imp: wrap(imp),
    })
}

fn require_joins(poset: &Poset) -> Result<(), MuchnikError> {
    let n = poset.len();
    for a in 0..n {
        for b in a + 1..n {
            join_or_err(poset, a, b)?;
        }
    }
    Ok(())
}

fn all_subsets(n: usize) -> impl Iterator<Item = FixedBitSet> {
    (0u64..1 << n).map(move |mask| {
        let mut s = FixedBitSet::with_capacity(n);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                s.insert(i);
            }
        }
        s
    })
}

/// The algebra of Muchnik degrees over `poset`. Each degree is represented by
/// its upward closure; tables come from [`muchnik_ops`] on representatives.
/// Carrier order and labels match [`upset_algebra`].
pub fn muchnik_algebra(poset: &Poset) -> Result<BrouwerAlgebra, MuchnikError> {
    require_joins(poset)?;
    let reps = enumerate_upsets(poset)?;
    let index: HashMap<&FixedBitSet, usize> = reps
        .iter()
        .enumerate()
        .map(|(i, u)| (u.members(), i))
        .collect();
    let degree_of = |m: &MassProblem<'_>| index[m.closure().members()];
    let problems: Vec<MassProblem<'_>> = reps
        .iter()
        .map(|u| MassProblem {
            poset,
            members: u.members().clone(),
        })
        .collect();
    let k = reps.len();
    let mut join = vec![vec![0; k]; k];
    let mut meet = vec![vec![0; k]; k];
    let mut imp = vec![vec![0; k]; k];
    for (i, a) in problems.iter().enumerate() {
        for (j, b) in problems.iter().enumerate() {
            let ops = muchnik_ops(a, b)?;
            join[i][j] = degree_of(&ops.join);
            meet[i][j] = degree_of(&ops.meet);
            imp[i][j] = degree_of(&ops.imp);
        }
    }
    let labels = reps.iter().map(|u| u.display(poset)).collect();
    let bottom = index[&poset.full_set()];
    let top = index[&poset.empty_set()];
    Ok(BrouwerAlgebra::from_tables(
        labels, join, meet, imp, bottom, top,
    )?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsoViolation {
    /// `A` and `C(A)` are not Muchnik equivalent.
    ClosureNotEquivalent { problem: Vec<String> },
    /// Equivalence of mass problems disagrees with equality of closures.
    DegreeMismatch { a: Vec<String>, b: Vec<String> },
    /// `≤_w` disagrees with the upset-algebra order on closures.
    OrderMismatch { a: Vec<String>, b: Vec<String> },
    /// Some upset is not the closure of any mass problem.
    UpsetNotHit { upset: Vec<String> },
    Operation {
        op: &'static str,
        a: Vec<String>,
        b: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub mass_problems: usize,
    pub degrees: usize,
    pub upsets: usize,
    pub violations: Vec<IsoViolation>,
}

impl IsoReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.degrees == self.upsets
    }
}

/// Brute-force check, over all `2^|X|` mass problems, that `A ↦ C(A)` induces
/// an isomorphism from Muchnik degrees onto the upset algebra of `poset`.
pub fn iso_check(poset: &Poset) -> Result<IsoReport, MuchnikError> {
    let n = poset.len();
    if n > MAX_ISO_CHECK {
        return Err(MuchnikError::Capacity {
            size: n,
            limit: MAX_ISO_CHECK,
        });
    }
    require_joins(poset)?;
    let ua = upset_algebra(poset)?;
    let alg = &ua.algebra;
    let problems: Vec<MassProblem<'_>> = all_subsets(n)
        .map(|members| MassProblem { poset, members })
        .collect();
    let closures: Vec<MassProblem<'_>> = problems.iter().map(MassProblem::closure).collect();
    let closure_index: Vec<usize> = closures
        .iter()
        .map(|c| ua.index_of_set(c.members()).expect("closure is an upset"))
        .collect();

    let mut violations = Vec::new();
    for (a, c) in problems.iter().zip(&closures) {
        if !(leq_sets(poset, &a.members, &c.members) && leq_sets(poset, &c.members, &a.members)) {
            violations.push(IsoViolation::ClosureNotEquivalent {
                problem: a.labels(),
            });
        }
    }

    // Muchnik degrees by brute-force mutual reducibility.
    let reduces: Vec<Vec<bool>> = problems
        .par_iter()
        .map(|a| {
            problems
                .iter()
                .map(|b| leq_sets(poset, &a.members, &b.members))
                .collect()
        })
        .collect();
    let mut degree_of = vec![usize::MAX; problems.len()];
    let mut degrees = 0;
    for i in 0..problems.len() {
        if degree_of[i] != usize::MAX {
            continue;
        }
        for j in i..problems.len() {
            if reduces[i][j] && reduces[j][i] {
                degree_of[j] = degrees;
            }
        }
        degrees += 1;
    }

    let mut hit = vec![false; alg.len()];
    for &c in &closure_index {
        hit[c] = true;
    }
    for (u, _) in hit.iter().enumerate().filter(|(_, h)| !**h) {
        violations.push(IsoViolation::UpsetNotHit {
            upset: ua.upset(u).labels(poset),
        });
    }

    let pair_violations: Vec<Vec<IsoViolation>> = (0..problems.len())
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let a = &problems[i];
            for (j, b) in problems.iter().enumerate() {
                let (ci, cj) = (closure_index[i], closure_index[j]);
                if (degree_of[i] == degree_of[j]) != (ci == cj) {
                    out.push(IsoViolation::DegreeMismatch {
                        a: a.labels(),
                        b: b.labels(),
                    });
                }
                if reduces[i][j] != alg.leq(ci, cj) {
                    out.push(IsoViolation::OrderMismatch {
                        a: a.labels(),
                        b: b.labels(),
                    });
                }
                let ops = muchnik_ops(a, b).expect("joins checked above");
                let checks = [
                    ("join", &ops.join, alg.join(ci, cj)),
                    ("meet", &ops.meet, alg.meet(ci, cj)),
                    ("imp", &ops.imp, alg.imp(ci, cj)),
                ];
                for (op, result, expected) in checks {
                    let got = ua.index_of_set(result.closure().members());
                    if got != Some(expected) {
                        out.push(IsoViolation::Operation {
                            op,
                            a: a.labels(),
                            b: b.labels(),
                        });
                    }
                }
            }
            out
        })
        .collect();
    violations.extend(pair_violations.into_iter().flatten());

    Ok(IsoReport {
        mass_problems: problems.len(),
        degrees,
        upsets: alg.len(),
        violations,
    })
}
