//! Staged construction of a map from a splitting class onto `2^{<n}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::morphism::PMorphism;
use crate::order::{binary_strings_below, tree_label, Poset};

use super::{list_label, SplittingError, SplittingStructure};

/// Round limit used by [`build_until_complete`] callers that have no better
/// bound.
pub const DEFAULT_ROUND_CAP: usize = 10_000;

fn is_prefix(a: &str, b: &str) -> bool {
    b.starts_with(a)
}

/// A finite map from class elements to binary strings of length `< n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialHomomorphism<E> {
    target_height: usize,
    elems: Vec<E>,
    images: Vec<String>,
    index: BTreeMap<E, usize>,
    children: Vec<Option<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantViolation {
    /// `a ≤ b` but `α(a) ⋢ α(b)`.
    NotMonotone { a: String, b: String },
    /// `α(a)` and `α(b)` diverge but `a ⊕ b` is in the class.
    IncomparableJoinInClass { a: String, b: String },
    /// The oracle returned an element that already has an image.
    AlreadyPlaced { element: String },
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantViolation::NotMonotone { a, b } => {
                write!(f, "{a} ≤ {b} but their images are not prefix-ordered")
            }
            InvariantViolation::IncomparableJoinInClass { a, b } => {
                write!(
                    f,
                    "images of {a} and {b} diverge but their join is in the class"
                )
            }
            InvariantViolation::AlreadyPlaced { element } => {
                write!(f, "split returned {element}, which is already mapped")
            }
        }
    }
}

impl<E: Clone + Ord + fmt::Display> PartialHomomorphism<E> {
    fn new(target_height: usize) -> Self {
        PartialHomomorphism {
            target_height,
            elems: Vec::new(),
            images: Vec::new(),
            index: BTreeMap::new(),
            children: Vec::new(),
        }
    }

    pub fn target_height(&self) -> usize {
        self.target_height
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// `(element, image)` in insertion order; images are `0/1` strings, empty
    /// for the root.
    pub fn pairs(&self) -> impl Iterator<Item = (&E, &str)> {
        self.elems
            .iter()
            .zip(self.images.iter().map(String::as_str))
    }

    pub fn image(&self, e: &E) -> Option<&str> {
        self.index.get(e).map(|&i| self.images[i].as_str())
    }

    /// Split children recorded for `e`, if it has been split.
    pub fn children(&self, e: &E) -> Option<(&E, &E)> {
        let (a, b) = self.children[*self.index.get(e)?]?;
        Some((&self.elems[a], &self.elems[b]))
    }

    fn insert(&mut self, e: E, image: String) -> Result<usize, InvariantViolation> {
        if self.index.contains_key(&e) {
            return Err(InvariantViolation::AlreadyPlaced {
                element: e.to_string(),
            });
        }
        let i = self.elems.len();
        self.index.insert(e.clone(), i);
        self.elems.push(e);
        self.images.push(image);
        self.children.push(None);
        Ok(i)
    }

    fn check_pair<S>(&self, s: &S, i: usize, j: usize) -> Option<InvariantViolation>
    where
        S: SplittingStructure<Elem = E>,
    {
        let (a, b) = (&self.elems[i], &self.elems[j]);
        let (x, y) = (&self.images[i], &self.images[j]);
        if s.leq(a, b) && !is_prefix(x, y) {
            return Some(InvariantViolation::NotMonotone {
                a: a.to_string(),
                b: b.to_string(),
            });
        }
        if !is_prefix(x, y) && !is_prefix(y, x) && s.in_class(&s.join(a, b)) {
            return Some(InvariantViolation::IncomparableJoinInClass {
                a: a.to_string(),
                b: b.to_string(),
            });
        }
        None
    }

    fn check_new<S>(&self, s: &S, new: usize) -> Option<InvariantViolation>
    where
        S: SplittingStructure<Elem = E>,
    {
        (0..self.len()).find_map(|j| {
            self.check_pair(s, new, j)
                .or_else(|| self.check_pair(s, j, new))
        })
    }

    /// Both invariants over every ordered pair of the domain.
    pub fn check_invariants<S>(&self, s: &S) -> Vec<InvariantViolation>
    where
        S: SplittingStructure<Elem = E>,
    {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| self.check_pair(s, i, j))
            .collect()
    }

    /// Elements whose image is a leaf of the tree, or that have been split
    /// into two complete children. Exactly these carry the back condition.
    fn complete(&self) -> Vec<bool> {
        let mut done = vec![false; self.len()];
        // children are always inserted after their parent
        for i in (0..self.len()).rev() {
            done[i] = self.images[i].len() + 1 == self.target_height
                || self.children[i].is_some_and(|(a, b)| done[a] && done[b]);
        }
        done
    }

    /// Tree nodes with no preimage among complete elements.
    pub fn uncovered(&self) -> Vec<String> {
        let done = self.complete();
        binary_strings_below(self.target_height)
            .into_iter()
            .filter(|t| !(0..self.len()).any(|i| done[i] && self.images[i] == *t))
            .map(|t| tree_label(&t))
            .collect()
    }

    pub fn to_json(&self) -> PartialHomomorphismJson {
        PartialHomomorphismJson {
            target_height: self.target_height,
            pairs: self
                .pairs()
                .map(|(e, img)| [e.to_string(), tree_label(img)])
                .collect(),
            splits: (0..self.len())
                .filter_map(|i| {
                    let (a, b) = self.children[i]?;
                    Some([
                        self.elems[i].to_string(),
                        self.elems[a].to_string(),
                        self.elems[b].to_string(),
                    ])
                })
                .collect(),
        }
    }
}

/// Elements as antichain literals, images as tree labels, and split triples
/// `[parent, h0, h1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialHomomorphismJson {
    pub target_height: usize,
    pub pairs: Vec<[String; 2]>,
    pub splits: Vec<[String; 3]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageAction {
    /// The bottom element is mapped to the root.
    Root,
    /// A newly enumerated element takes the largest image found below it.
    Insert,
    /// The enumerated element already has an image.
    Present,
    /// The element was split and its children mapped one level up.
    Split,
    /// The element's image is a leaf.
    SkipMaximal,
    /// The element had been split at an earlier stage.
    SkipSplit,
}

/// One line of the stage trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub stage: usize,
    pub action: StageAction,
    pub element: String,
    pub image: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<[String; 2]>,
    pub domain: usize,
}

#[derive(Clone, Debug)]
pub struct Build<E> {
    pub alpha: PartialHomomorphism<E>,
    pub trace: Vec<StageRecord>,
    /// Enumerated elements consumed.
    pub rounds: usize,
}

struct Builder<'s, S: SplittingStructure> {
    s: &'s S,
    alpha: PartialHomomorphism<S::Elem>,
    trace: Vec<StageRecord>,
    stage: usize,
    k: usize,
}

impl<'s, S: SplittingStructure> Builder<'s, S> {
    fn new(s: &'s S, n: usize) -> Result<Self, SplittingError> {
        if n == 0 {
            return Err(SplittingError::ZeroHeight);
        }
        let mut b = Builder {
            s,
            alpha: PartialHomomorphism::new(n),
            trace: Vec::new(),
            stage: 0,
            k: 0,
        };
        let bottom = s.bottom();
        b.alpha
            .insert(bottom.clone(), String::new())
            .expect("empty map");
        b.record(StageAction::Root, &bottom, Vec::new());
        b.stage = 1;
        Ok(b)
    }

    fn record(&mut self, action: StageAction, e: &S::Elem, children: Vec<[String; 2]>) {
        let image = self.alpha.image(e).map(tree_label).unwrap_or_default();
        self.trace.push(StageRecord {
            stage: self.stage,
            action,
            element: e.to_string(),
            image,
            children,
            domain: self.alpha.len(),
        });
    }

    fn invariant(&self, v: InvariantViolation) -> SplittingError {
        SplittingError::Invariant {
            stage: self.stage,
            violation: v,
        }
    }

    /// Places `a` at the largest image among mapped elements below it.
    fn insert(&mut self, a: &S::Elem) -> Result<(), SplittingError> {
        if self.alpha.image(a).is_some() {
            self.record(StageAction::Present, a, Vec::new());
            return Ok(());
        }
        let below: Vec<&str> = self
            .alpha
            .pairs()
            .filter(|(b, _)| self.s.leq(b, a))
            .map(|(_, img)| img)
            .collect();
        let chain = below
            .iter()
            .all(|x| below.iter().all(|y| is_prefix(x, y) || is_prefix(y, x)));
        let top = below.iter().max_by_key(|x| x.len());
        let (true, Some(top)) = (chain, top) else {
            return Err(SplittingError::NotChain {
                stage: self.stage,
                element: a.to_string(),
                images: below.iter().map(|x| tree_label(x)).collect(),
            });
        };
        let top = top.to_string();
        let i = self
            .alpha
            .insert(a.clone(), top)
            .map_err(|v| self.invariant(v))?;
        if let Some(v) = self.alpha.check_new(self.s, i) {
            return Err(self.invariant(v));
        }
        self.record(StageAction::Insert, a, Vec::new());
        Ok(())
    }

    /// Splits `a` away from every mapped element not below it.
    fn split(&mut self, a: &S::Elem) -> Result<(), SplittingError> {
        let n = self.alpha.target_height;
        let i = self.alpha.index[a];
        let sigma = self.alpha.images[i].clone();
        if sigma.len() + 1 == n {
            self.record(StageAction::SkipMaximal, a, Vec::new());
            return Ok(());
        }
        if self.alpha.children[i].is_some() {
            self.record(StageAction::SkipSplit, a, Vec::new());
            return Ok(());
        }
        let b: Vec<S::Elem> = self
            .alpha
            .elems
            .iter()
            .filter(|g| !self.s.leq(g, a))
            .cloned()
            .collect();
        let (h0, h1) = self
            .s
            .split(a, &b)
            .map_err(|source| SplittingError::Oracle {
                stage: self.stage,
                source,
            })?;
        let mut placed = [0; 2];
        for (slot, (h, bit)) in [(&h0, '0'), (&h1, '1')].into_iter().enumerate() {
            let mut img = sigma.clone();
            img.push(bit);
            placed[slot] = self
                .alpha
                .insert(h.clone(), img)
                .map_err(|v| self.invariant(v))?;
        }
        for &j in &placed {
            if let Some(v) = self.alpha.check_new(self.s, j) {
                return Err(self.invariant(v));
            }
        }
        self.alpha.children[i] = Some((placed[0], placed[1]));
        let children = [&h0, &h1]
            .iter()
            .map(|h| {
                [
                    h.to_string(),
                    tree_label(self.alpha.image(h).expect("placed")),
                ]
            })
            .collect();
        self.record(StageAction::Split, a, children);
        Ok(())
    }

    fn round(&mut self) -> Result<(), SplittingError> {
        let a = self.s.enumerate(self.k);
        self.insert(&a)?;
        self.stage += 1;
        self.split(&a)?;
        self.stage += 1;
        self.k += 1;
        Ok(())
    }

    fn finish(self) -> Build<S::Elem> {
        Build {
            alpha: self.alpha,
            trace: self.trace,
            rounds: self.k,
        }
    }
}

/// Runs the root stage and then `steps` rounds, each inserting the next
/// enumerated element and then splitting it (unless its image is a leaf of
/// `2^{<n}`). Both invariants are checked on every new pair at every stage.
pub fn build_pmorphism<S: SplittingStructure>(
    s: &S,
    n: usize,
    steps: usize,
) -> Result<Build<S::Elem>, SplittingError> {
    if steps == 0 {
        return Err(SplittingError::ZeroSteps);
    }
    let mut b = Builder::new(s, n)?;
    for _ in 0..steps {
        b.round()?;
    }
    Ok(b.finish())
}

/// Runs rounds until every node of `2^{<n}` has a preimage among complete
/// elements, failing after `cap` rounds.
pub fn build_until_complete<S: SplittingStructure>(
    s: &S,
    n: usize,
    cap: usize,
) -> Result<Build<S::Elem>, SplittingError> {
    let mut b = Builder::new(s, n)?;
    loop {
        let missing = b.alpha.uncovered();
        if missing.is_empty() {
            return Ok(b.finish());
        }
        if b.k >= cap {
            return Err(SplittingError::StepCap {
                rounds: b.k,
                missing,
            });
        }
        b.round()?;
    }
}

/// Restricts `alpha` to its complete elements (leaf images, or split into
/// complete children) and packages it as a map onto `2^{<n}`. Source labels
/// are the elements' display forms.
pub fn pmorphism_of<S: SplittingStructure>(
    s: &S,
    alpha: &PartialHomomorphism<S::Elem>,
) -> Result<PMorphism, SplittingError> {
    let missing = alpha.uncovered();
    if !missing.is_empty() {
        return Err(SplittingError::Incomplete(missing));
    }
    let done = alpha.complete();
    let keep: Vec<usize> = (0..alpha.len()).filter(|&i| done[i]).collect();
    let labels: Vec<String> = keep.iter().map(|&i| alpha.elems[i].to_string()).collect();
    let mut pairs = Vec::new();
    for (x, &i) in keep.iter().enumerate() {
        for (y, &j) in keep.iter().enumerate() {
            if x != y && s.leq(&alpha.elems[i], &alpha.elems[j]) {
                pairs.push((x, y));
            }
        }
    }
    let source = Poset::from_relation(labels, &pairs)?;
    let target = Poset::binary_tree(alpha.target_height);
    let map = keep
        .iter()
        .map(|&i| target.index_of(&tree_label(&alpha.images[i])))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PMorphism::new(source, target, map)?)
}

impl<E: fmt::Display> fmt::Display for PartialHomomorphism<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .elems
            .iter()
            .zip(&self.images)
            .map(|(e, img)| format!("{e}↦{}", tree_label(img)))
            .collect();
        write!(f, "{}", list_label(&pairs))
    }
}
