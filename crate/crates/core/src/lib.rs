//! Order-theoretic and spectral machinery for normal operators at small
//! Hilbert-space dimension.
//!
//! The crate is organised around a handful of interlocking pieces:
//!
//! * [`linops`] — dense complex linear algebra: Hermitian eigensolver,
//!   two-parameter spectral families of normal operators, unitary flows.
//! * [`order`] — the rank order on the complex plane and the spectral
//!   order on normal operators.
//! * [`domain`] — the complex interval domain of closed rectangles under
//!   reverse inclusion, with way-below and Scott-basis queries.
//! * [`context`] — classical snapshots (resolutions of identity), the
//!   poset they form under coarsening, and Gel'fand spectra.
//! * [`lattice`] — finite lattices of projections given as subsets of a
//!   ground atom set; filters, quasipoints, cones.
//! * [`observable`] — observable and antonymous functions of spectral
//!   families on filters, state filters and expectation bounds.
//! * [`dasein`] — inner/outer daseinisation of projections, spectral
//!   families and normal operators; the quantity-value pairs they induce.
//! * [`kgroup`] — the Grothendieck completion of the quantity-value
//!   monoid, one-parameter flows, and the desk-scale Stone maps.

pub mod context;
pub mod dasein;
pub mod domain;
pub mod kgroup;
pub mod lattice;
pub mod linops;
pub mod observable;
pub mod order;

pub use num_complex::Complex64;
