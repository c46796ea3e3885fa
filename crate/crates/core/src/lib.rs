//! Injectivization toolkit for the hidden shift problem over `Z_q^n`.
//!
//! Given black-box functions `f, g : Z_q^n -> S` that satisfy
//! `f(x) = g(s + x)` for a hidden shift `s`, the usual period-finding
//! machinery only applies when the functions are injective. This crate
//! implements the injectivization construction
//!
//! ```text
//! f_V(x) = (f(x + v_1), f(x + v_2), ..., f(x + v_m))
//! ```
//!
//! which is injective with high probability for random instances while
//! preserving the shift, together with everything needed to study it:
//!
//! * [`group`] — arithmetic and canonical enumeration for `Z_q^n`, plus the
//!   one-dimensional subspace (line) structure of `Z_p^n`.
//! * [`oracle`] — dense function tables with query counting, seeded
//!   generators (uniform, non-periodic, bent), and a JSON interchange format.
//! * [`injectivization`] — building `f_V`, tuple sampling, injectivity
//!   checking with deterministic collision witnesses, the exact failure
//!   bound `|G|^2 / |S|^ceil(m/2)`, and brute-force reference solvers.
//! * [`influence`] — the generalized influence `gamma_v(f) = Pr_x[f(x) != f(x+v)]`,
//!   periodicity detection, influence-based failure bounds, and
//!   Walsh spectra / bentness tests for Boolean functions.
//! * [`simon`] — the combined oracle `h` on `Z_2^{n+1}` whose hidden period
//!   is `(1 || s)`, an honest simulation of the measurement distribution,
//!   GF(2) nullspace recovery, and the end-to-end pipeline.
//!
//! All probabilities that feed predicates are exact rationals; floating
//! point only appears in report statistics. All randomness flows through
//! seeded ChaCha8 generators (see [`seed`]) so every run is reproducible.

pub mod group;
pub mod influence;
pub mod injectivization;
pub mod oracle;
pub mod seed;
pub mod simon;

mod error;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupElement, GroupSpec, Subspace};
pub use influence::{InfluenceBounds, InfluenceProfile, WalshSpectrum};
pub use injectivization::{InjectivizedTable, TupleV};
pub use oracle::{CountingOracle, FunctionTable, Oracle, TableMeta};
pub use simon::{RecoveryReport, SampleMatrix, SimonOracle};
