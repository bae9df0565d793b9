//! Search, verification and classification of transitive homogeneous
//! 3-(v,{4,6},1) designs.
//!
//! A 3-(v,{4,6},1) design is a set of 4-element blocks (tetrads) and
//! 6-element blocks (hexads) on `v` points such that every 3-subset of
//! points lies in exactly one block. The crate covers the whole pipeline:
//!
//! * [`perm`] and [`orbit`]: permutation groups and their orbits on k-subsets,
//! * [`design`] and [`classify`]: set systems, balance checks and the
//!   2-class symmetric design taxonomy of the hexads,
//! * [`km`]: Kramer–Mesner matrices and the orbit-based design search,
//! * [`dlx`]: exact cover by dancing links,
//! * [`canon`]: canonical certificates and automorphism groups,
//! * [`catalog`]: the known small designs, embedded as text assets.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod canon;
pub mod catalog;
pub mod classify;
pub mod design;
pub mod dlx;
mod error;
pub mod km;
pub mod orbit;
pub mod perm;
pub mod subset;

pub use canon::{are_isomorphic, automorphism_group, canonical_certificate, iso_reduce, Certificate, IsoClass};
pub use classify::{classify, Classification, GdType, SchemeParams, TwoClassParams};
pub use design::{SetSystem, TwbdReport};
pub use dlx::CoverMatrix;
pub use error::{Error, Result};
pub use km::{HexadCandidate, HexadFilter, KmMatrix, SearchConfig, SearchSpace};
pub use orbit::OrbitIndex;
pub use perm::{PermGroup, Permutation};
