//! Exact Pfaffian circuits over Q(√2, i).

pub mod acceptance;
pub mod certs;
pub mod circuit;
pub mod exactfield;
pub mod invariants;
pub mod linalg;
pub mod pfaffian;
pub mod registry;
pub mod samplers;
pub mod swapsub;
pub mod tensor;
pub mod varieties;

pub use circuit::{Assignment, Circuit, CircuitError, EdgeOrder, Side};
pub use exactfield::{FieldError, Scalar};
pub use pfaffian::{PfaffianAlgorithm, PfaffianError, SkewMatrix};
pub use registry::{Registry, Strategy, UnknownStrategy};
pub use tensor::{Parity, QubitTensor, TensorError, TwoByTwo, Variance};
