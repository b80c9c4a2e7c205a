pub mod analysis;
pub mod approx;
pub mod circuit;
pub mod cli;
pub mod complex;
pub mod dd;
pub mod dot;
pub mod error;
pub mod fidelity;
mod sim;

pub use complex::{ComplexTable, ComplexValue, Tolerance};
pub use dd::{Edge, Node, NodeId, Normalization, Package, StateDd};
pub use error::{Error, Result};
