//! Rational Khovanov homology of 3-strand pretzel links `P(-l, m, n)`: closed-form formulas,
//! an exact oracle computing homology from a diagram, and supporting invariants.

pub mod bigraded;
pub mod cli;
pub mod diagram;
pub mod formula;
pub mod jones;
pub mod khcube;
pub mod seqcalc;
pub mod structure;
pub mod verify;
