use std::collections::BTreeSet;
use std::fmt;

/// Propositional formula over `⊥`, `∧`, `∨`, `→`. Negation is `φ → ⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

pub fn var(name: &str) -> Formula {
    Formula::Var(name.to_owned())
}

pub fn bot() -> Formula {
    Formula::Bot
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

pub fn imp(a: Formula, b: Formula) -> Formula {
    Formula::Imp(Box::new(a), Box::new(b))
}

pub fn neg(a: Formula) -> Formula {
    imp(a, Formula::Bot)
}

impl Formula {
    /// Free variables in sorted order.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Connective depth; atoms and `⊥` have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Every subformula, children before parents.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        if let Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) = self {
            a.collect_subformulas(out);
            b.collect_subformulas(out);
        }
        out.push(self);
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Imp(_, b) if **b == Formula::Bot => 4,
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Var(_) | Formula::Bot => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let parens = self.prec() < ctx;
        if parens {
            f.write_str("(")?;
        }
        match self {
            Formula::Var(v) => f.write_str(v)?,
            Formula::Bot => f.write_str("bot")?,
            Formula::Imp(a, b) if **b == Formula::Bot => {
                f.write_str("~")?;
                a.fmt_prec(f, 4)?;
            }
            Formula::Imp(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" -> ")?;
                b.fmt_prec(f, 1)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, 3)?;
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 3)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, 4)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Prints in the concrete syntax accepted by [`crate::logic::parse`], with
/// the fewest parentheses that parse back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
