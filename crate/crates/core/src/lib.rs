//! Strict finitistic logic: syntax, finite Kripke semantics, decision
//! procedures, the sequent calculus SF, the arithmetic model of statement
//! generation, generation structures and reference oracles.

pub mod algebra;
pub mod arith;
pub mod calculus;
pub mod checks;
pub mod decide;
pub mod enumerate;
pub mod generations;
pub mod kripke;
pub mod oracles;
pub mod random;
pub mod syntax;
pub mod tree;

pub use syntax::{Formula, Var};

/// Propositional formulas over variables.
pub type Fm = Formula<Var>;

/// Closed arithmetic formulas over equations.
pub type ClFormula = Formula<arith::Equation>;
