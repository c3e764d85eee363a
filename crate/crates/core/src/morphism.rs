//! p-morphisms between finite Kripke frames.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{theory_contains, Formula, LogicError, Structure};
use crate::order::{OrderError, Poset, PosetJson};

/// Largest source frame [`search_pmorphism`] will explore.
pub const MAX_SEARCH_SOURCE: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("map is not total: `{0}` has no image")]
    NotTotal(String),
    #[error("map sends source index {source_elem} to {target_elem}, outside the target")]
    OutOfRange {
        source_elem: usize,
        target_elem: usize,
    },
    #[error("`{0}` is mapped more than once")]
    DuplicateMapping(String),
    #[error("source frame of {size} elements exceeds the search limit {limit}")]
    Capacity { size: usize, limit: usize },
    #[error("no p-morphism from the source frame onto the target frame")]
    NoPMorphism,
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMorphism {
    pub source: Poset,
    pub target: Poset,
    /// `map[x]` is the image of source element `x`.
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PMorphismViolation {
    /// Nothing maps to this target element.
    NotSurjective { target: String },
    /// `x ≤ y` in the source but `f(x) ≰ f(y)`.
    NotMonotone { x: String, y: String },
    /// `f(x) ≤ z` in the target but no `w ≥ x` has `f(w) = z`.
    Back { x: String, z: String },
}

impl PMorphism {
    pub fn new(source: Poset, target: Poset, map: Vec<usize>) -> Result<Self, MorphismError> {
        if map.len() < source.len() {
            return Err(MorphismError::NotTotal(source.label(map.len()).to_owned()));
        }
        if map.len() > source.len() {
            return Err(OrderError::UnknownElement(source.len()).into());
        }
        if let Some((x, &t)) = map.iter().enumerate().find(|(_, &t)| t >= target.len()) {
            return Err(MorphismError::OutOfRange {
                source_elem: x,
                target_elem: t,
            });
        }
        Ok(PMorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(frame: &Poset) -> Self {
        PMorphism {
            source: frame.clone(),
            target: frame.clone(),
            map: (0..frame.len()).collect(),
        }
    }

    /// `other ∘ self`
    pub fn then(&self, other: &PMorphism) -> Result<PMorphism, MorphismError> {
        if self.target != other.source {
            return Err(MorphismError::NoPMorphism);
        }
        PMorphism::new(
            self.source.clone(),
            other.target.clone(),
            self.map.iter().map(|&y| other.map[y]).collect(),
        )
    }

    pub fn to_json(&self) -> PMorphismJson {
        PMorphismJson {
            source: self.source.to_json(),
            target: self.target.to_json(),
            map: self
                .map
                .iter()
                .enumerate()
                .map(|(x, &y)| {
                    [
                        self.source.label(x).to_owned(),
                        self.target.label(y).to_owned(),
                    ]
                })
                .collect(),
        }
    }
}

/// Source and target frames plus the map as `[source, target]` label pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PMorphismJson {
    pub source: PosetJson,
    pub target: PosetJson,
    pub map: Vec<[String; 2]>,
}

impl TryFrom<PMorphismJson> for PMorphism {
    type Error = MorphismError;

    fn try_from(j: PMorphismJson) -> Result<Self, Self::Error> {
        let source = Poset::try_from(j.source)?;
        let target = Poset::try_from(j.target)?;
        let mut map = vec![None; source.len()];
        for [s, t] in &j.map {
            let x = source.index_of(s)?;
            let y = target.index_of(t)?;
            if map[x].replace(y).is_some() {
                return Err(MorphismError::DuplicateMapping(s.clone()));
            }
        }
        let mut total = Vec::with_capacity(map.len());
        for (x, y) in map.into_iter().enumerate() {
            total.push(y.ok_or_else(|| MorphismError::NotTotal(source.label(x).to_owned()))?);
        }
        PMorphism::new(source, target, total)
    }
}

fn back_condition_holds(m: &PMorphism, x: usize, z: usize) -> bool {
    m.source.up_set(x).ones().any(|w| m.map[w] == z)
}

/// Checks surjectivity, monotonicity and the back condition, naming a
/// witnessing pair for each failure.
pub fn verify_pmorphism(m: &PMorphism) -> Vec<PMorphismViolation> {
    let (src, tgt) = (&m.source, &m.target);
    let mut out = Vec::new();
    let mut hit = vec![false; tgt.len()];
    for &y in &m.map {
        hit[y] = true;
    }
    for (t, _) in hit.iter().enumerate().filter(|(_, h)| !**h) {
        out.push(PMorphismViolation::NotSurjective {
            target: tgt.label(t).to_owned(),
        });
    }
    for x in 0..src.len() {
        for y in src.up_set(x).ones() {
            if !tgt.leq(m.map[x], m.map[y]) {
                out.push(PMorphismViolation::NotMonotone {
                    x: src.label(x).to_owned(),
                    y: src.label(y).to_owned(),
                });
            }
        }
        for z in tgt.up_set(m.map[x]).ones() {
            if !back_condition_holds(m, x, z) {
                out.push(PMorphismViolation::Back {
                    x: src.label(x).to_owned(),
                    z: tgt.label(z).to_owned(),
                });
            }
        }
    }
    out
}

/// Backtracking search over maps in canonical order (source elements by
/// index, target candidates ascending). Returns the lexicographically first
/// p-morphism, if any.
pub fn search_pmorphism(
    source: &Poset,
    target: &Poset,
) -> Result<Option<PMorphism>, MorphismError> {
    let n = source.len();
    if n > MAX_SEARCH_SOURCE {
        return Err(MorphismError::Capacity {
            size: n,
            limit: MAX_SEARCH_SOURCE,
        });
    }
    if target.len() > n || (n > 0 && target.is_empty()) {
        return Ok(None);
    }
    // After assigning element i, the back condition can be decided for every
    // x whose whole upset has index <= i.
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        let last = source.up_set(x).ones().max().expect("reflexive");
        ready[last].push(x);
    }

    struct Search<'a> {
        source: &'a Poset,
        target: &'a Poset,
        ready: Vec<Vec<usize>>,
        map: Vec<usize>,
        hits: Vec<usize>,
        unhit: usize,
    }

    impl Search<'_> {
        fn consistent(&self, i: usize, t: usize) -> bool {
            (0..i).all(|j| {
                (!self.source.leq(j, i) || self.target.leq(self.map[j], t))
                    && (!self.source.leq(i, j) || self.target.leq(t, self.map[j]))
            })
        }

        fn back_ok(&self, x: usize) -> bool {
            self.target
                .up_set(self.map[x])
                .ones()
                .all(|z| self.source.up_set(x).ones().any(|w| self.map[w] == z))
        }

        fn go(&mut self, i: usize) -> bool {
            let n = self.source.len();
            if i == n {
                return self.unhit == 0;
            }
            for t in 0..self.target.len() {
                if !self.consistent(i, t) {
                    continue;
                }
                let newly = self.hits[t] == 0;
                let unhit_after = self.unhit - usize::from(newly);
                if unhit_after > n - i - 1 {
                    continue;
                }
                self.map[i] = t;
                self.hits[t] += 1;
                self.unhit = unhit_after;
                let ok = self.ready[i].iter().all(|&x| self.back_ok(x));
                if ok && self.go(i + 1) {
                    return true;
                }
                self.hits[t] -= 1;
                self.unhit += usize::from(newly);
            }
            false
        }
    }

    let mut s = Search {
        source,
        target,
        ready,
        map: vec![0; n],
        hits: vec![0; target.len()],
        unhit: target.len(),
    };
    if s.go(0) {
        Ok(Some(PMorphism {
            source: source.clone(),
            target: target.clone(),
            map: s.map,
        }))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub checked: usize,
    pub valid_on_source: usize,
    /// Formulas valid on the source but not on the target.
    pub counterexamples: Vec<String>,
}

impl TransferReport {
    pub fn is_empty(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// For every corpus formula valid on `source`, checks it is valid on `target`.
/// Requires a p-morphism from `source` onto `target` to exist.
pub fn transfer_check(
    source: &Poset,
    target: &Poset,
    corpus: &[Formula],
) -> Result<TransferReport, MorphismError> {
    if search_pmorphism(source, target)?.is_none() {
        return Err(MorphismError::NoPMorphism);
    }
    let mut report = TransferReport {
        checked: corpus.len(),
        valid_on_source: 0,
        counterexamples: Vec::new(),
    };
    for f in corpus {
        if !theory_contains(Structure::Frame(source), f)? {
            continue;
        }
        report.valid_on_source += 1;
        if !theory_contains(Structure::Frame(target), f)? {
            report.counterexamples.push(f.to_string());
        }
    }
    Ok(report)
}
