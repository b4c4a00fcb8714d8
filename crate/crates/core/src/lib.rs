pub mod analysis;
pub mod automata;
pub mod cli;
pub mod extraction;
pub mod harness;
pub mod reasoner;
pub mod taskgen;
