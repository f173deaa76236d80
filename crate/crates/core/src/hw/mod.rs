//! Compilation to the native `{RX, RZ, iSWAP}` gate set, resource and
//! duration estimates, and coupling-graph checks.

mod coupling;
mod decompose;
mod equivalence;
mod hamiltonian;
mod native;
mod params;
mod resources;

pub use coupling::*;
pub use decompose::*;
pub use equivalence::*;
pub use hamiltonian::*;
pub use native::{merge_rz, zxz_angles, Mat2, NativeCircuit, ANGLE_EPS};
pub use params::*;
pub use resources::*;
