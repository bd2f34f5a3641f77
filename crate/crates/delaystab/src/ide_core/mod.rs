//! IDE data model, distributed-kernel representation, and characteristic
//! functions.
//!
//! All operations here are pure functions of immutable inputs and safe to
//! call concurrently.

mod charfn;
mod kernel;
mod model;

pub use charfn::{char_closed, char_open, char_target, kernel_transform};
pub use kernel::{exp_moments, SampledKernel, INTERP_ORDER};
pub use model::{FilteredController, Fragility, IdeModel, StabilityVerdict};
