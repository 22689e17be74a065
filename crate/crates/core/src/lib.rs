pub mod exactmath;
pub mod minionlab;
pub mod polymorph;
pub mod propagation;
pub mod reproduce;
pub mod relaxations;
pub mod structures;
mod textio;
