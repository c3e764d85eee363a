//! Splitting classes: the oracle interface, checks for the split conditions,
//! a synthetic model, and the staged construction of p-morphisms onto finite
//! binary trees.

mod construction;
mod synthetic;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::morphism::MorphismError;
use crate::order::OrderError;

pub use construction::{
    build_pmorphism, build_until_complete, pmorphism_of, Build, InvariantViolation,
    PartialHomomorphism, PartialHomomorphismJson, StageAction, StageRecord, DEFAULT_ROUND_CAP,
};
pub use synthetic::{seq_label, Antichain, Seq, SyntheticAntichainModel};

/// A lazily enumerated class inside an ambient upper semilattice, with a
/// split oracle.
///
/// Implementations promise: the class is non-empty and downward closed,
/// `join` is a least upper bound, and `split(f, B)` returns `h₀, h₁ ≥ f`
/// whose join leaves the class and whose joins with every `g ∈ B` leave it
/// too.
pub trait SplittingStructure {
    type Elem: Clone + Eq + Ord + fmt::Debug + fmt::Display;

    /// The `i`-th class element; injective up to mutual `leq`.
    fn enumerate(&self, i: usize) -> Self::Elem;
    fn bottom(&self) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn in_class(&self, a: &Self::Elem) -> bool;
    fn split(
        &self,
        f: &Self::Elem,
        b: &[Self::Elem],
    ) -> Result<(Self::Elem, Self::Elem), OracleError>;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("split oracle failed on {query}: {reason}")]
pub struct OracleError {
    pub query: String,
    pub reason: String,
}

impl OracleError {
    pub fn new<E: fmt::Display>(f: &E, b: &[E], reason: impl Into<String>) -> Self {
        OracleError {
            query: query_label(f, b),
            reason: reason.into(),
        }
    }
}

fn query_label<E: fmt::Display>(f: &E, b: &[E]) -> String {
    format!("f={f} B=[{}]", list_label(b))
}

fn list_label<E: fmt::Display>(b: &[E]) -> String {
    b.iter().map(E::to_string).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplittingError {
    #[error("invalid split query: {0}")]
    Precondition(String),
    #[error("stage {stage}: {source}")]
    Oracle { stage: usize, source: OracleError },
    #[error("stage {stage}: {violation}")]
    Invariant {
        stage: usize,
        violation: InvariantViolation,
    },
    #[error("stage {stage}: images below {element} are not a chain: {images:?}")]
    NotChain {
        stage: usize,
        element: String,
        images: Vec<String>,
    },
    #[error("no cover of the tree after {rounds} rounds; nodes without preimages: {missing:?}")]
    StepCap { rounds: usize, missing: Vec<String> },
    #[error("tree nodes without preimages in the finished part of the map: {0:?}")]
    Incomplete(Vec<String>),
    #[error("target height must be at least 1")]
    ZeroHeight,
    #[error("at least one step is required")]
    ZeroSteps,
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// A failed clause of the split definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum SplitViolation {
    /// `f ≰ hᵢ`.
    NotAboveF { child: u8, h: String },
    /// `hᵢ` is not a class element.
    ChildOutsideClass { child: u8, h: String },
    /// `h₀ ⊕ h₁` is in the class.
    ChildrenJoinInClass { join: String },
    /// `g ⊕ hᵢ` is in the class.
    JoinWithBInClass { g: String, child: u8 },
}

impl fmt::Display for SplitViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitViolation::NotAboveF { child, h } => write!(f, "f is not below h{child} = {h}"),
            SplitViolation::ChildOutsideClass { child, h } => {
                write!(f, "h{child} = {h} is outside the class")
            }
            SplitViolation::ChildrenJoinInClass { join } => {
                write!(f, "h0 ⊕ h1 = {join} is in the class")
            }
            SplitViolation::JoinWithBInClass { g, child } => {
                write!(f, "{g} ⊕ h{child} is in the class")
            }
        }
    }
}

/// Checks a proposed split of `f` against `b`. Malformed queries (`f` or some
/// `g` outside the class, or `g ≤ f`) are errors; failed clauses are
/// returned as violations.
pub fn check_split_conditions<S: SplittingStructure>(
    s: &S,
    f: &S::Elem,
    b: &[S::Elem],
    h0: &S::Elem,
    h1: &S::Elem,
) -> Result<Vec<SplitViolation>, SplittingError> {
    if !s.in_class(f) {
        return Err(SplittingError::Precondition(format!(
            "f = {f} is outside the class"
        )));
    }
    for g in b {
        if !s.in_class(g) {
            return Err(SplittingError::Precondition(format!(
                "{g} in B is outside the class"
            )));
        }
        if s.leq(g, f) {
            return Err(SplittingError::Precondition(format!(
                "{g} in B is below f = {f}"
            )));
        }
    }
    let mut out = Vec::new();
    for (child, h) in [(0u8, h0), (1, h1)] {
        if !s.leq(f, h) {
            out.push(SplitViolation::NotAboveF {
                child,
                h: h.to_string(),
            });
        }
        if !s.in_class(h) {
            out.push(SplitViolation::ChildOutsideClass {
                child,
                h: h.to_string(),
            });
        }
    }
    let j = s.join(h0, h1);
    if s.in_class(&j) {
        out.push(SplitViolation::ChildrenJoinInClass {
            join: j.to_string(),
        });
    }
    for g in b {
        for (child, h) in [(0u8, h0), (1, h1)] {
            if s.in_class(&s.join(g, h)) {
                out.push(SplitViolation::JoinWithBInClass {
                    g: g.to_string(),
                    child,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleFailure {
    pub f: String,
    pub b: Vec<String>,
    pub problems: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitClassReport {
    pub depth: usize,
    pub samples: usize,
    pub failures: Vec<SampleFailure>,
}

impl SplitClassReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn subsets_up_to_3(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for i in 0..n {
        out.push(vec![i]);
        for j in i + 1..n {
            out.push(vec![i, j]);
            for k in j + 1..n {
                out.push(vec![i, j, k]);
            }
        }
    }
    out
}

/// Exercises the split oracle on every `f` among the first `depth` enumerated
/// elements and every `B` of at most three window elements not below `f`.
/// Each returned pair must satisfy the split clauses, and `h₀` alone must
/// witness the one-sided condition: `f < h₀` and `g ⊕ h₀` outside the class
/// for all `g ∈ B`.
pub fn verify_splitting_class<S: SplittingStructure>(s: &S, depth: usize) -> SplitClassReport {
    let window: Vec<S::Elem> = (0..depth).map(|i| s.enumerate(i)).collect();
    let mut report = SplitClassReport {
        depth,
        samples: 0,
        failures: Vec::new(),
    };
    for f in &window {
        let candidates: Vec<&S::Elem> = window.iter().filter(|g| !s.leq(g, f)).collect();
        for pick in subsets_up_to_3(candidates.len()) {
            let b: Vec<S::Elem> = pick.iter().map(|&i| candidates[i].clone()).collect();
            report.samples += 1;
            let problems = match s.split(f, &b) {
                Err(e) => vec![e.to_string()],
                Ok((h0, h1)) => {
                    let mut p: Vec<String> = match check_split_conditions(s, f, &b, &h0, &h1) {
                        Ok(v) => v.iter().map(ToString::to_string).collect(),
                        Err(e) => vec![e.to_string()],
                    };
                    let one_sided = s.leq(f, &h0)
                        && !s.leq(&h0, f)
                        && b.iter().all(|g| !s.in_class(&s.join(g, &h0)));
                    if !one_sided {
                        p.push(format!(
                            "h0 = {h0} does not witness the one-sided condition"
                        ));
                    }
                    p
                }
            };
            if !problems.is_empty() {
                report.failures.push(SampleFailure {
                    f: f.to_string(),
                    b: b.iter().map(ToString::to_string).collect(),
                    problems,
                });
            }
        }
    }
    report
}

/// Turns a one-sided oracle `(f, B) ↦ h` into a split oracle by asking twice:
/// `h₀ = h(f, B)` and `h₁ = h(f, B ∪ {h₀})`.
pub fn split_from_cond_ii<E, F>(cond_ii: F) -> impl Fn(&E, &[E]) -> Result<(E, E), OracleError>
where
    E: Clone + fmt::Display,
    F: Fn(&E, &[E]) -> Result<E, OracleError>,
{
    move |f, b| {
        let h0 = cond_ii(f, b)?;
        let mut b1 = b.to_vec();
        b1.push(h0.clone());
        let h1 = cond_ii(f, &b1).map_err(|e| OracleError {
            query: query_label(f, &b1),
            reason: e.reason,
        })?;
        Ok((h0, h1))
    }
}

/// `base` with its split oracle replaced.
pub struct WithSplit<'a, S, F> {
    base: &'a S,
    split: F,
}

impl<'a, S, F> WithSplit<'a, S, F> {
    pub fn new(base: &'a S, split: F) -> Self {
        WithSplit { base, split }
    }
}

impl<S, F> SplittingStructure for WithSplit<'_, S, F>
where
    S: SplittingStructure,
    F: Fn(&S::Elem, &[S::Elem]) -> Result<(S::Elem, S::Elem), OracleError>,
{
    type Elem = S::Elem;

    fn enumerate(&self, i: usize) -> S::Elem {
        self.base.enumerate(i)
    }
    fn bottom(&self) -> S::Elem {
        self.base.bottom()
    }
    fn leq(&self, a: &S::Elem, b: &S::Elem) -> bool {
        self.base.leq(a, b)
    }
    fn join(&self, a: &S::Elem, b: &S::Elem) -> S::Elem {
        self.base.join(a, b)
    }
    fn in_class(&self, a: &S::Elem) -> bool {
        self.base.in_class(a)
    }
    fn split(&self, f: &S::Elem, b: &[S::Elem]) -> Result<(S::Elem, S::Elem), OracleError> {
        (self.split)(f, b)
    }
}
