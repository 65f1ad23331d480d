//! Photon propagation in nonlinear electrodynamics.
//!
//! Starting from an effective Lagrangian `L(F, G)` and a background state, the
//! crate builds the rank-4 response tensor `Omega`, forms the wave matrix
//! `A(k)`, extracts the Fresnel quartic, and decides whether propagation is
//! birefringent. When it is not, an effective inverse metric `gamma` is
//! recovered and the Casimir-vacuum kinematics (phase/group velocity,
//! polarization states, polarization-sum comparison) follow in closed form.
//!
//! Conventions: natural units (`hbar = c = 1`, electron mass `m_e = 1` unless
//! stated), signature `eta = diag(-1, +1, +1, +1)`, field components
//! `F_{0i} = E_i`, `F_{ij} = eps_{ijk} B_k`, Levi-Civita `eps_{0123} = +1`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod error;
pub mod fresnel;
pub mod kinematics;
pub mod lagrangian;
pub mod poly;
pub mod polsum;
pub mod scenario;
pub mod tensor;
pub mod vacuum;

pub use error::{Error, Result};
pub use tensor::{FieldTensor, FourVector, Invariants, RankFourTensor, Variance};
