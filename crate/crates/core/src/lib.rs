pub mod arith;
pub mod census;
pub mod cf;
pub mod cli;
pub mod enumeration;
pub mod error;
pub mod measures;
pub mod stream;
