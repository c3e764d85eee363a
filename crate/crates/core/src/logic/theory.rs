//! Theories of algebras and frames, and the bounded search for countermodels
//! on full binary trees.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::brouwer::BrouwerAlgebra;
use crate::order::{enumerate_upsets, Poset, PosetJson, Upset};

use super::eval::{
    upset_mask, AlgebraSemantics, AlgebraValuation, FrameSemantics, FrameValuation, Program,
    MAX_MASK_FRAME,
};
use super::formula::Formula;
use super::LogicError;

/// Upper bound on the number of valuations a single search may visit.
pub const MAX_VALUATIONS: u128 = 1 << 31;

#[derive(Clone, Copy, Debug)]
pub enum Structure<'a> {
    Algebra(&'a BrouwerAlgebra),
    Frame(&'a Poset),
}

fn guard(what: &'static str, domain: usize, vars: usize) -> Result<(), LogicError> {
    let size = (domain as u128)
        .checked_pow(vars as u32)
        .unwrap_or(u128::MAX);
    if size > MAX_VALUATIONS {
        return Err(LogicError::Capacity {
            what,
            size,
            limit: MAX_VALUATIONS,
        });
    }
    Ok(())
}

/// Lexicographically first valuation (variables in sorted order, carrier
/// indices ascending) under which `f` does not evaluate to `0`.
pub fn algebra_countervaluation(
    b: &BrouwerAlgebra,
    f: &Formula,
) -> Result<Option<AlgebraValuation>, LogicError> {
    let prog = Program::compile(f);
    guard("algebra valuations", b.len(), prog.vars.len())?;
    let domain: Vec<u32> = (0..b.len() as u32).collect();
    let hit = prog.first_refutation(&AlgebraSemantics(b), &domain);
    Ok(hit.map(|idx| prog.vars.iter().cloned().zip(idx).collect()))
}

/// A frame, an upset valuation and a point that does not force the formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub frame: Poset,
    pub valuation: FrameValuation,
    pub point: usize,
}

impl Countermodel {
    /// Atoms true at each point, in point order.
    pub fn forced_atoms(&self) -> Vec<Vec<String>> {
        (0..self.frame.len())
            .map(|x| {
                self.valuation
                    .iter()
                    .filter(|(_, u)| u.contains(x))
                    .map(|(name, _)| name.clone())
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> CountermodelJson {
        CountermodelJson {
            frame: self.frame.to_json(),
            valuation: self
                .valuation
                .iter()
                .map(|(k, u)| (k.clone(), u.labels(&self.frame)))
                .collect(),
            point: self.frame.label(self.point).to_owned(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountermodelJson {
    pub frame: PosetJson,
    pub valuation: BTreeMap<String, Vec<String>>,
    pub point: String,
}

impl TryFrom<CountermodelJson> for Countermodel {
    type Error = LogicError;

    fn try_from(j: CountermodelJson) -> Result<Self, Self::Error> {
        let frame = Poset::try_from(j.frame)?;
        let mut valuation = FrameValuation::new();
        for (name, labels) in j.valuation {
            let u = Upset::from_labels(&frame, &labels)?;
            valuation.insert(name, u);
        }
        let point = frame.index_of(&j.point)?;
        Ok(Countermodel {
            frame,
            valuation,
            point,
        })
    }
}

/// Lexicographically first upset valuation (upsets in the order of
/// [`enumerate_upsets`]) refuting `f` somewhere in `frame`, with the first
/// refuting point.
pub fn frame_countermodel(frame: &Poset, f: &Formula) -> Result<Option<Countermodel>, LogicError> {
    if frame.len() > MAX_MASK_FRAME {
        return Err(LogicError::Capacity {
            what: "frame points",
            size: frame.len() as u128,
            limit: MAX_MASK_FRAME as u128,
        });
    }
    let prog = Program::compile(f);
    let upsets = enumerate_upsets(frame)?;
    guard("frame valuations", upsets.len(), prog.vars.len())?;
    let sem = FrameSemantics::new(frame);
    let domain: Vec<u64> = upsets.iter().map(upset_mask).collect();
    let Some(idx) = prog.first_refutation(&sem, &domain) else {
        return Ok(None);
    };
    let vals: Vec<u64> = idx.iter().map(|&i| domain[i]).collect();
    let forced = prog.eval(&sem, &vals);
    let point = (!forced & sem.full()).trailing_zeros() as usize;
    let valuation = prog
        .vars
        .iter()
        .cloned()
        .zip(idx.iter().map(|&i| upsets[i].clone()))
        .collect();
    Ok(Some(Countermodel {
        frame: frame.clone(),
        valuation,
        point,
    }))
}

/// Whether `f` belongs to the theory of the structure: evaluates to `0` under
/// every valuation (algebra), or is forced at every point under every upset
/// valuation (frame).
pub fn theory_contains(s: Structure<'_>, f: &Formula) -> Result<bool, LogicError> {
    Ok(match s {
        Structure::Algebra(b) => algebra_countervaluation(b, f)?.is_none(),
        Structure::Frame(p) => frame_countermodel(p, f)?.is_none(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IpcVerdict {
    /// No countermodel on any `2^{<k}` with `k ≤ max_height`. This is not a
    /// proof of validity.
    ValidUpToBound {
        max_height: usize,
    },
    Countermodel {
        height: usize,
        model: Countermodel,
    },
}

impl IpcVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, IpcVerdict::Countermodel { .. })
    }
}

/// Searches the trees `2^{<1}, …, 2^{<max_height}` in order and returns the
/// first countermodel found. A countermodel proves `f ∉ IPC`; the absence of
/// one only says so up to the bound.
pub fn ipc_check_bounded(f: &Formula, max_height: usize) -> Result<IpcVerdict, LogicError> {
    if max_height == 0 {
        return Err(LogicError::ZeroHeight);
    }
    for height in 1..=max_height {
        let tree = Poset::binary_tree(height);
        if let Some(model) = frame_countermodel(&tree, f)? {
            return Ok(IpcVerdict::Countermodel { height, model });
        }
    }
    Ok(IpcVerdict::ValidUpToBound { max_height })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brouwer::upset_algebra;
    use crate::logic::{eval_algebra, forces, parse};

    fn chain() -> Poset {
        Poset::chain(["a", "b"])
    }

    #[test]
    fn theory_examples() {
        let c = chain();
        let weak_lem = parse("~p | ~~p").unwrap();
        let lem = parse("p | ~p").unwrap();
        assert!(theory_contains(Structure::Frame(&c), &weak_lem).unwrap());
        let fork = Poset::binary_tree(2);
        let cm = frame_countermodel(&fork, &weak_lem).unwrap().unwrap();
        assert_eq!(cm.valuation["p"].labels(&fork), ["0"]);
        assert_eq!(cm.point, 0);
        let cm = frame_countermodel(&c, &lem).unwrap().unwrap();
        assert_eq!(cm.valuation["p"].labels(&c), ["b"]);

        let b = upset_algebra(&c).unwrap().algebra;
        assert!(theory_contains(Structure::Algebra(&b), &weak_lem).unwrap());
        assert!(!theory_contains(Structure::Algebra(&b), &lem).unwrap());
    }

    #[test]
    fn algebra_countervaluation_is_checked_by_eval() {
        let fork = Poset::binary_tree(2);
        let b = upset_algebra(&fork).unwrap().algebra;
        let f = parse("(p -> q) | (q -> p)").unwrap();
        let v = algebra_countervaluation(&b, &f).unwrap().unwrap();
        assert_ne!(eval_algebra(&f, &b, &v).unwrap(), b.bottom());
    }

    #[test]
    fn ipc_examples() {
        for text in ["p | ~p", "((p -> q) -> p) -> p"] {
            let f = parse(text).unwrap();
            let IpcVerdict::Countermodel { height, model } = ipc_check_bounded(&f, 3).unwrap()
            else {
                panic!("{text} should be refuted");
            };
            assert_eq!(height, 2, "{text}");
            assert!(!forces(&model.frame, model.point, &model.valuation, &f).unwrap());
        }
        let f = parse("p -> p").unwrap();
        for n in 1..=4 {
            assert_eq!(
                ipc_check_bounded(&f, n).unwrap(),
                IpcVerdict::ValidUpToBound { max_height: n }
            );
        }
        assert_eq!(ipc_check_bounded(&f, 0), Err(LogicError::ZeroHeight));
    }

    #[test]
    fn peirce_countermodel_shape() {
        let f = parse("((p -> q) -> p) -> p").unwrap();
        let IpcVerdict::Countermodel { model, .. } = ipc_check_bounded(&f, 2).unwrap() else {
            panic!()
        };
        let fr = &model.frame;
        // p at a single leaf is not enough: the other leaf forces p -> q
        // without forcing p.
        assert_eq!(model.valuation["p"].labels(fr), ["0", "1"]);
        assert!(model.valuation["q"].labels(fr).is_empty());
    }

    #[test]
    fn capacity_guard() {
        let f = parse("p & q & r & s -> p").unwrap();
        // 677^4 valuations on 2^{<4}
        let err = frame_countermodel(&Poset::binary_tree(4), &f).unwrap_err();
        assert!(matches!(err, LogicError::Capacity { .. }));
    }

    #[test]
    fn countermodel_json_round_trip() {
        let f = parse("p | ~p").unwrap();
        let cm = frame_countermodel(&Poset::binary_tree(2), &f)
            .unwrap()
            .unwrap();
        let text = serde_json::to_string(&cm.to_json()).unwrap();
        let back = Countermodel::try_from(serde_json::from_str::<CountermodelJson>(&text).unwrap())
            .unwrap();
        assert_eq!(back, cm);
    }
}
