//! Compositional evaluation of formulas into a truth-value carrier.

use crate::syntax::{Formula, Var};
use crate::Fm;

/// A semantics given by one operation per connective.
pub trait Algebra {
    type Value: Clone;

    fn atom(&self, v: &Var) -> Self::Value;
    fn bot(&self) -> Self::Value;
    fn and(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn or(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn imp(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    fn not(&self, a: &Self::Value) -> Self::Value {
        self.imp(a, &self.bot())
    }

    fn eval(&self, f: &Fm) -> Self::Value {
        match f {
            Formula::Atom(v) => self.atom(v),
            Formula::Bot => self.bot(),
            Formula::And(a, b) => self.and(&self.eval(a), &self.eval(b)),
            Formula::Or(a, b) => self.or(&self.eval(a), &self.eval(b)),
            Formula::Imp(a, b) => self.imp(&self.eval(a), &self.eval(b)),
        }
    }
}
