//! Exact higher commuting probabilities `P_r(G)` and higher class numbers
//! `κ_r(G)` of finite groups.

mod bigser;
pub mod bounds;
pub mod catalog;
pub mod engine;
pub mod error;
pub mod group;
pub mod numtheory;
pub mod rational;
pub mod symplectic;
pub mod tensor;

pub use error::{Error, Result};
pub use group::{FiniteGroup, SubgroupView};
pub use rational::ExactRational;
