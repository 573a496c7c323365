//! FO[<] formulas over word structures.
//!
//! Formulas are plain trees (no sharing), so [`Formula::tree_size`] counts
//! exactly the nodes that would be written out. Conjunction and disjunction
//! are n-ary and count as a single node plus their children.

mod eval;
mod sexpr;
mod synth;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{evaluate, Assignment, CompiledFormula, Engine, Evaluator, TABLE_LIMIT};
pub use sexpr::parse_sexpr;
pub use synth::{
    synth_dist, synth_exact_word, synth_horizon_classifier, synth_length, Synth,
};

/// A first-order variable, written `v<k>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Lt(Var, Var),
    Eq(Var, Var),
    Letter(char, Var),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
    True,
    False,
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn exists(v: Var, f: Formula) -> Formula {
        Formula::Exists(v, Box::new(f))
    }

    pub fn forall(v: Var, f: Formula) -> Formula {
        Formula::Forall(v, Box::new(f))
    }

    /// Maximum nesting depth of quantifiers.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Lt(..) | Formula::Eq(..) | Formula::Letter(..) | Formula::True | Formula::False => 0,
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_rank).max().unwrap_or(0),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_rank(),
        }
    }

    /// Number of nodes in the formula tree.
    pub fn tree_size(&self) -> usize {
        match self {
            Formula::Lt(..) | Formula::Eq(..) | Formula::Letter(..) | Formula::True | Formula::False => 1,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.tree_size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::tree_size).sum::<usize>(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut see = |v: &Var, bound: &Vec<Var>| {
            if !bound.contains(v) {
                out.insert(*v);
            }
        };
        match self {
            Formula::Lt(x, y) | Formula::Eq(x, y) => {
                see(x, bound);
                see(y, bound);
            }
            Formula::Letter(_, x) => see(x, bound),
            Formula::True | Formula::False => {}
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(*v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }
}

/// Bit-exact s-expression serialization.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Lt(x, y) => write!(f, "(lt {x} {y})"),
            Formula::Eq(x, y) => write!(f, "(eq {x} {y})"),
            Formula::Letter(a, x) => write!(f, "(letter {a} {x})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(gs) | Formula::Or(gs) => {
                f.write_str(if matches!(self, Formula::And(_)) { "(and" } else { "(or" })?;
                for g in gs {
                    write!(f, " {g}")?;
                }
                f.write_str(")")
            }
            Formula::Exists(v, g) => write!(f, "(exists {v} {g})"),
            Formula::Forall(v, g) => write!(f, "(forall {v} {g})"),
            Formula::True => f.write_str("(true)"),
            Formula::False => f.write_str("(false)"),
        }
    }
}
