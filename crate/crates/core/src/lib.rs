//! Resolution of plane curve germs and their cyclic covers, with dual graphs
//! labelled by Hironaka quotients, maximal-arc decompositions and checks of
//! the structure theorems for the pair `(f, g)`.

pub mod arith;
pub mod curve;
pub mod graph;
pub mod resolve;
pub mod cover;
pub mod contract;
pub mod cli;
