pub mod arith;
pub mod cycles;
pub mod predictor;
pub mod quadforms;
pub mod runner;
pub mod ssgraph;
