//! Characteristic finite quotients of the free group of rank two.
//!
//! The braid group B4 acts on quadruples in PSL2(F_p) through the equivariant
//! quandle `a ◁ b = a b^{-1} a`. This crate enumerates the orbit of an explicit
//! point, extracts the induced permutations and certifies that the image of
//! F2 = <σ1σ3^{-1}, σ2σ1σ3^{-1}σ2^{-1}> is a full alternating group.

pub mod arith;
pub mod braidquandle;
pub mod charvar;
pub mod ffield;
pub mod orbit;
pub mod permgrp;
pub mod witness;

pub use braidquandle::{BraidWord, Group, Letter, Quad};
pub use charvar::{CanonicalKey, Params, TraceTuple};
pub use ffield::{ElementClass, Mat2, PglElem, PrimeField, ProjMat2};
pub use orbit::OrbitIndex;
pub use permgrp::Permutation;
