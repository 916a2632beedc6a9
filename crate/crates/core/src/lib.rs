pub mod cli;
pub mod error;
pub mod filtration;
pub mod harness;
pub mod linalg;
pub mod module;
pub mod ring;
