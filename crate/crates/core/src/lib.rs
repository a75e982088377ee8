pub mod classify;
pub mod cli;
pub mod error;
pub mod groups;
pub mod matrix;
mod linsolve;
pub mod monodromy;
pub mod ore;
pub mod parser;
pub mod partial;
pub mod poly;
pub mod rank1;
pub mod rat;
pub mod systems;
pub mod upoly;
