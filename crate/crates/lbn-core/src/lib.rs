//! Compile a typed logical language into grounded Horn clauses, build
//! AND/OR/NEG factor graphs around a query, and answer it with loopy belief
//! propagation cross-checked by an exact enumeration oracle. A small slot
//! grammar compiles controlled English into the same logical language.

pub mod bp;
pub mod grammar;
pub mod graph;
pub mod ground;
pub mod logic;
pub mod oracle;
