//! Certified outer and inner bounds on the channel fidelity of
//! approximate quantum error correction.
//!
//! Outer bounds come from an extendability semidefinite-programming
//! hierarchy with optional PPT cuts, non-signaling constraints, and
//! group-symmetry dimension reduction. Inner bounds come from see-saw
//! optimization over encoder/decoder Choi pairs and from measurement-based
//! rounding of outer solutions into concrete codes.

pub mod channels;
pub mod qcore;
pub mod sdp;
pub mod symmetry;

pub use qcore::QcoreError;
