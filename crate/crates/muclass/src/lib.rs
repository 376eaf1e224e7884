//! Characteristic classes of Hamiltonian fibrations over coadjoint orbits.
//!
//! The library computes the classes `μ_k` (fibre integrals of powers of the
//! coupling class) for coadjoint orbits of the classical compact groups
//! SU(n), SO(n) and Sp(n) as exact Weyl-invariant polynomials, decomposes
//! them into basic invariants, certifies algebraic independence through the
//! Jacobian criterion, and cross-validates the symbolic engine against Monte
//! Carlo integration over the Haar measure.
//!
//! Modules, bottom up:
//!
//! * [`rootdata`] — classical root systems, Weyl group enumeration,
//!   stabilizer subsystems, and the degree set 𝒦 of basic invariants.
//! * [`polyring`] — exact sparse multivariate polynomials over ℚ with Weyl
//!   actions, antisymmetrization, and exact division by linear forms.
//! * [`muclasses`] — coadjoint orbits, the coupling form, and the pushforward
//!   computing each `μ_k`.
//! * [`haarmc`] — seeded Haar-measure Monte Carlo and the symbolic↔numeric
//!   ratio cross-check.
//! * [`analysis`] — triviality tests, decomposition into basic invariants,
//!   independence certificates, vanishing-locus scans.
//! * [`cli`] — the `muclass` command-line surface.

pub mod analysis;
pub mod cli;
pub mod haarmc;
pub mod muclasses;
pub mod polyring;
pub mod rootdata;

pub use muclasses::{make_orbit, mu_class, MuClass, OrbitSpec};
pub use polyring::RatPoly;
pub use rootdata::{build_root_datum, Family, RootDatum, WeylElement};
