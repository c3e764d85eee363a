//! Algebraic evaluation, Kripke forcing, and a compiled evaluator used by the
//! exhaustive searches.

use std::collections::{BTreeMap, HashMap};

use crate::brouwer::BrouwerAlgebra;
use crate::order::{is_upset, Poset, Upset};

use super::formula::Formula;
use super::LogicError;

/// Variables to carrier indices.
pub type AlgebraValuation = BTreeMap<String, usize>;
/// Variables to upsets of a frame.
pub type FrameValuation = BTreeMap<String, Upset>;

/// Evaluates `f` in `b`: `⊥ ↦ 1`, `∧ ↦ ⊕`, `∨ ↦ ⊗`, `→ ↦ →`. The formula
/// holds under `v` iff the result is `b.bottom()`.
pub fn eval_algebra(
    f: &Formula,
    b: &BrouwerAlgebra,
    v: &AlgebraValuation,
) -> Result<usize, LogicError> {
    Ok(match f {
        Formula::Var(name) => {
            let &x = v
                .get(name)
                .ok_or_else(|| LogicError::Unbound(name.clone()))?;
            if x >= b.len() {
                return Err(LogicError::ValueOutOfRange {
                    var: name.clone(),
                    value: x,
                });
            }
            x
        }
        Formula::Bot => b.top(),
        Formula::And(l, r) => b.join(eval_algebra(l, b, v)?, eval_algebra(r, b, v)?),
        Formula::Or(l, r) => b.meet(eval_algebra(l, b, v)?, eval_algebra(r, b, v)?),
        Formula::Imp(l, r) => b.imp(eval_algebra(l, b, v)?, eval_algebra(r, b, v)?),
    })
}

fn check_frame_valuation(frame: &Poset, f: &Formula, v: &FrameValuation) -> Result<(), LogicError> {
    for name in f.vars() {
        let u = v
            .get(&name)
            .ok_or_else(|| LogicError::Unbound(name.clone()))?;
        if !is_upset(frame, u.members()).unwrap_or(false) {
            return Err(LogicError::NotUpset(name));
        }
    }
    Ok(())
}

/// Intuitionistic forcing at `point`, evaluated pointwise from the clauses.
pub fn forces(
    frame: &Poset,
    point: usize,
    v: &FrameValuation,
    f: &Formula,
) -> Result<bool, LogicError> {
    if point >= frame.len() {
        return Err(LogicError::PointOutOfRange(point));
    }
    check_frame_valuation(frame, f, v)?;
    Ok(forces_at(frame, point, v, f))
}

fn forces_at(frame: &Poset, x: usize, v: &FrameValuation, f: &Formula) -> bool {
    match f {
        Formula::Var(name) => v[name].contains(x),
        Formula::Bot => false,
        Formula::And(a, b) => forces_at(frame, x, v, a) && forces_at(frame, x, v, b),
        Formula::Or(a, b) => forces_at(frame, x, v, a) || forces_at(frame, x, v, b),
        Formula::Imp(a, b) => frame
            .up_set(x)
            .ones()
            .all(|y| !forces_at(frame, y, v, a) || forces_at(frame, y, v, b)),
    }
}

/// `{x | x ⊩ f}`, computed point by point with [`forces`].
pub fn forced_set(frame: &Poset, v: &FrameValuation, f: &Formula) -> Result<Upset, LogicError> {
    check_frame_valuation(frame, f, v)?;
    let mut s = frame.empty_set();
    for x in 0..frame.len() {
        if forces_at(frame, x, v, f) {
            s.insert(x);
        }
    }
    Ok(Upset::new(frame, s).expect("forcing is persistent"))
}

// Compiled evaluation --------------------------------------------------------

pub(crate) trait Semantics: Sync {
    type Val: Copy + Send + Sync;
    fn bot(&self) -> Self::Val;
    fn and(&self, a: Self::Val, b: Self::Val) -> Self::Val;
    fn or(&self, a: Self::Val, b: Self::Val) -> Self::Val;
    fn imp(&self, a: Self::Val, b: Self::Val) -> Self::Val;
    fn designated(&self, a: Self::Val) -> bool;
}

pub(crate) struct AlgebraSemantics<'a>(pub &'a BrouwerAlgebra);

impl Semantics for AlgebraSemantics<'_> {
    type Val = u32;
    fn bot(&self) -> u32 {
        self.0.top() as u32
    }
    fn and(&self, a: u32, b: u32) -> u32 {
        self.0.join(a as usize, b as usize) as u32
    }
    fn or(&self, a: u32, b: u32) -> u32 {
        self.0.meet(a as usize, b as usize) as u32
    }
    fn imp(&self, a: u32, b: u32) -> u32 {
        self.0.imp(a as usize, b as usize) as u32
    }
    fn designated(&self, a: u32) -> bool {
        a as usize == self.0.bottom()
    }
}

/// Forced sets as 64-bit masks over a frame of at most 64 points.
pub(crate) struct FrameSemantics {
    down: Vec<u64>,
    full: u64,
}

pub(crate) const MAX_MASK_FRAME: usize = 64;

impl FrameSemantics {
    pub fn new(frame: &Poset) -> Self {
        assert!(frame.len() <= MAX_MASK_FRAME);
        let down = (0..frame.len())
            .map(|x| frame.down_set(x).ones().fold(0u64, |m, y| m | 1 << y))
            .collect();
        let full = if frame.len() == 64 {
            u64::MAX
        } else {
            (1u64 << frame.len()) - 1
        };
        FrameSemantics { down, full }
    }

    pub fn full(&self) -> u64 {
        self.full
    }
}

pub(crate) fn upset_mask(u: &Upset) -> u64 {
    u.members().ones().fold(0u64, |m, y| m | 1 << y)
}

impl Semantics for FrameSemantics {
    type Val = u64;
    fn bot(&self) -> u64 {
        0
    }
    fn and(&self, a: u64, b: u64) -> u64 {
        a & b
    }
    fn or(&self, a: u64, b: u64) -> u64 {
        a | b
    }
    /// A point forces `a → b` iff no point above it forces `a` without `b`,
    /// so the result is the complement of the downward closure of `a ∖ b`.
    fn imp(&self, a: u64, b: u64) -> u64 {
        let mut bad = a & !b;
        let mut down = 0;
        while bad != 0 {
            let x = bad.trailing_zeros() as usize;
            down |= self.down[x];
            bad &= !down;
        }
        !down & self.full
    }
    fn designated(&self, a: u64) -> bool {
        a == self.full
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    Var(usize),
    Bot,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
}

/// A formula flattened into shared instructions. Instructions are grouped by
/// the highest variable they depend on, so when the valuation changes only in
/// variable `i` and later, only the groups from `i` on are recomputed.
pub(crate) struct Program {
    ops: Vec<Op>,
    /// `level_start[l]` is the first instruction whose deepest variable is
    /// `l - 1` (level 0 holds the constants).
    level_start: Vec<usize>,
    root: usize,
    pub vars: Vec<String>,
}

impl Program {
    pub fn compile(f: &Formula) -> Program {
        let vars: Vec<String> = f.vars().into_iter().collect();
        let var_index: HashMap<&str, usize> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut ops: Vec<(Op, usize)> = Vec::new();
        let mut seen: HashMap<Op, usize> = HashMap::new();

        fn go(
            f: &Formula,
            var_index: &HashMap<&str, usize>,
            ops: &mut Vec<(Op, usize)>,
            seen: &mut HashMap<Op, usize>,
        ) -> usize {
            let (op, level) = match f {
                Formula::Var(v) => {
                    let i = var_index[v.as_str()];
                    (Op::Var(i), i + 1)
                }
                Formula::Bot => (Op::Bot, 0),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                    let x = go(a, var_index, ops, seen);
                    let y = go(b, var_index, ops, seen);
                    let level = ops[x].1.max(ops[y].1);
                    let op = match f {
                        Formula::And(..) => Op::And(x, y),
                        Formula::Or(..) => Op::Or(x, y),
                        _ => Op::Imp(x, y),
                    };
                    (op, level)
                }
            };
            *seen.entry(op).or_insert_with(|| {
                ops.push((op, level));
                ops.len() - 1
            })
        }

        let root = go(f, &var_index, &mut ops, &mut seen);
        // Stable sort by level keeps operands ahead of their users.
        let mut order: Vec<usize> = (0..ops.len()).collect();
        order.sort_by_key(|&i| ops[i].1);
        let mut new_pos = vec![0; ops.len()];
        for (new, &old) in order.iter().enumerate() {
            new_pos[old] = new;
        }
        let remap = |op: Op| match op {
            Op::And(a, b) => Op::And(new_pos[a], new_pos[b]),
            Op::Or(a, b) => Op::Or(new_pos[a], new_pos[b]),
            Op::Imp(a, b) => Op::Imp(new_pos[a], new_pos[b]),
            other => other,
        };
        let levels = vars.len() + 1;
        let mut level_start = vec![ops.len(); levels + 1];
        for (new, &old) in order.iter().enumerate().rev() {
            level_start[ops[old].1] = new;
        }
        for l in (0..levels).rev() {
            level_start[l] = level_start[l].min(level_start[l + 1]);
        }
        Program {
            ops: order.iter().map(|&i| remap(ops[i].0)).collect(),
            level_start,
            root: new_pos[root],
            vars,
        }
    }

    fn run_from<S: Semantics>(&self, sem: &S, level: usize, vals: &[S::Val], regs: &mut [S::Val]) {
        for i in self.level_start[level]..self.ops.len() {
            regs[i] = match self.ops[i] {
                Op::Var(v) => vals[v],
                Op::Bot => sem.bot(),
                Op::And(a, b) => sem.and(regs[a], regs[b]),
                Op::Or(a, b) => sem.or(regs[a], regs[b]),
                Op::Imp(a, b) => sem.imp(regs[a], regs[b]),
            };
        }
    }

    pub fn eval<S: Semantics>(&self, sem: &S, vals: &[S::Val]) -> S::Val {
        let mut regs = vec![sem.bot(); self.ops.len()];
        self.run_from(sem, 0, vals, &mut regs);
        regs[self.root]
    }

    /// Lexicographically first assignment (indices into `domain`, first
    /// variable most significant) whose value is not designated.
    pub fn first_refutation<S: Semantics>(&self, sem: &S, domain: &[S::Val]) -> Option<Vec<usize>> {
        let m = self.vars.len();
        if m == 0 {
            let v = self.eval(sem, &[]);
            return (!sem.designated(v)).then(Vec::new);
        }
        if domain.is_empty() {
            return None;
        }
        use rayon::prelude::*;
        (0..domain.len())
            .into_par_iter()
            .find_map_first(|first| self.refute_with_prefix(sem, domain, first))
    }

    fn refute_with_prefix<S: Semantics>(
        &self,
        sem: &S,
        domain: &[S::Val],
        first: usize,
    ) -> Option<Vec<usize>> {
        let m = self.vars.len();
        let d = domain.len();
        let mut idx = vec![0usize; m];
        idx[0] = first;
        let mut vals: Vec<S::Val> = idx.iter().map(|&i| domain[i]).collect();
        let mut regs = vec![sem.bot(); self.ops.len()];
        self.run_from(sem, 0, &vals, &mut regs);
        loop {
            if !sem.designated(regs[self.root]) {
                return Some(idx);
            }
            // odometer over variables 1..m, last one fastest
            let mut k = m;
            loop {
                if k == 1 {
                    return None;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < d {
                    vals[k] = domain[idx[k]];
                    break;
                }
                idx[k] = 0;
                vals[k] = domain[0];
            }
            self.run_from(sem, k + 1, &vals, &mut regs);
        }
    }
}
