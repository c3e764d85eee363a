//! Propositional formulas and their semantics in Brouwer algebras and Kripke
//! frames.

mod eval;
mod formula;
mod parse;
mod theory;

use thiserror::Error;

use crate::brouwer::AlgebraError;
use crate::order::OrderError;

pub use eval::{eval_algebra, forced_set, forces, AlgebraValuation, FrameValuation};
pub use formula::{and, bot, imp, neg, or, var, Formula};
pub use parse::{parse, ParseError};
pub use theory::{
    algebra_countervaluation, frame_countermodel, ipc_check_bounded, theory_contains, Countermodel,
    CountermodelJson, IpcVerdict, Structure, MAX_VALUATIONS,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("variable `{0}` is not bound by the valuation")]
    Unbound(String),
    #[error("variable `{var}` is mapped to {value}, outside the carrier")]
    ValueOutOfRange { var: String, value: usize },
    #[error("variable `{0}` is not mapped to an upset of the frame")]
    NotUpset(String),
    #[error("point {0} is not in the frame")]
    PointOutOfRange(usize),
    #[error("{what}: {size} exceeds the limit {limit}")]
    Capacity {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("maximum tree height must be at least 1")]
    ZeroHeight,
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
