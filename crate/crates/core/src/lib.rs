//! Hedgehog soliton profiles of the model of topological fermions, the
//! potential governing their radial shape vibrations, and the normal-mode
//! spectrum of those vibrations.

pub mod numerics;
pub mod profile;
pub mod fluctuation;
pub mod spectrum;
pub mod cli;
