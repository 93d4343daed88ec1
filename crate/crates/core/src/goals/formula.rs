use std::fmt;

use crate::model::{FactId, GroundTask, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub fact: FactId,
    pub positive: bool,
}

impl Literal {
    pub fn pos(fact: FactId) -> Literal {
        Literal {
            fact,
            positive: true,
        }
    }

    pub fn neg(fact: FactId) -> Literal {
        Literal {
            fact,
            positive: false,
        }
    }

    pub fn holds(&self, s: &State) -> bool {
        s.contains(self.fact) == self.positive
    }
}

/// A DNF goal over ground literals, kept in canonical order: literals sorted
/// within each disjunct, disjuncts sorted and deduplicated.
///
/// A disjunct with no literals is the trivially true conjunction; it arises
/// when every literal of a method subgoal is a negated atom that can never
/// become true.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoalFormula {
    disjuncts: Vec<Vec<Literal>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("goal has no disjuncts")]
    Empty,
    #[error("disjunct contains a literal and its negation")]
    Contradiction,
}

impl GoalFormula {
    pub fn new(disjuncts: Vec<Vec<Literal>>) -> Result<GoalFormula, FormulaError> {
        if disjuncts.is_empty() {
            return Err(FormulaError::Empty);
        }
        let mut out = Vec::with_capacity(disjuncts.len());
        for mut d in disjuncts {
            d.sort_unstable();
            d.dedup();
            if d.windows(2).any(|w| w[0].fact == w[1].fact) {
                return Err(FormulaError::Contradiction);
            }
            out.push(d);
        }
        out.sort();
        out.dedup();
        Ok(GoalFormula { disjuncts: out })
    }

    pub fn conjunction(lits: Vec<Literal>) -> Result<GoalFormula, FormulaError> {
        GoalFormula::new(vec![lits])
    }

    pub fn atom(fact: FactId) -> GoalFormula {
        GoalFormula {
            disjuncts: vec![vec![Literal::pos(fact)]],
        }
    }

    pub fn disjuncts(&self) -> &[Vec<Literal>] {
        &self.disjuncts
    }

    /// The single conjunction of a one-disjunct goal.
    pub fn as_conjunction(&self) -> Option<&[Literal]> {
        match self.disjuncts.as_slice() {
            [d] => Some(d),
            _ => None,
        }
    }

    pub fn holds(&self, s: &State) -> bool {
        self.disjuncts.iter().any(|d| d.iter().all(|l| l.holds(s)))
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.disjuncts.iter().flatten()
    }

    pub fn display<'a>(&'a self, task: &'a GroundTask) -> FormulaDisplay<'a> {
        FormulaDisplay { goal: self, task }
    }
}

pub struct FormulaDisplay<'a> {
    goal: &'a GoalFormula,
    task: &'a GroundTask,
}

fn write_conj(f: &mut fmt::Formatter<'_>, d: &[Literal], task: &GroundTask) -> fmt::Result {
    let lit = |l: &Literal| {
        if l.positive {
            task.fact_name(l.fact).to_string()
        } else {
            format!("(not {})", task.fact_name(l.fact))
        }
    };
    match d {
        [l] => f.write_str(&lit(l)),
        _ => {
            f.write_str("(and")?;
            for l in d {
                write!(f, " {}", lit(l))?;
            }
            f.write_str(")")
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.goal.disjuncts() {
            [d] => write_conj(f, d, self.task),
            ds => {
                f.write_str("(or")?;
                for d in ds {
                    f.write_str(" ")?;
                    write_conj(f, d, self.task)?;
                }
                f.write_str(")")
            }
        }
    }
}
