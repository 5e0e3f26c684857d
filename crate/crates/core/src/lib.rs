//! Boundedness of integral transforms with splitting kernels between
//! weighted Lebesgue spaces.
//!
//! The library decides whether a transform Tf(y) = ∫₀^∞ f(x)K(x,y) dx is
//! bounded from L_p^v into L_q^u by evaluating Hardy-type supremum
//! conditions attached to a factored envelope of the kernel, cross-checked
//! against closed-form power-weight characterizations and empirical
//! operator-ratio probes.

pub mod numerics;
pub mod spaces;
pub mod specialfn;
pub mod kernels;
pub mod hardy;
pub mod gluing;
pub mod analyzer;
pub mod probe;
