pub mod catalog;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod flasque;
pub mod group;
pub mod invariants;
pub mod lattice;
pub mod limits;
pub mod linalg;
