//! Exact unitary dynamics and thermodynamics of a harmonic oscillator with
//! time-dependent frequency: the auxiliary Ermakov solution, Bogoliubov
//! coefficients in the initial/diagonal/invariant representations, transition
//! probabilities, particle creation, representation-dependent heat and work,
//! diagonal entropy, and emergent mode temperatures, validated against an
//! independent truncated-Fock-basis evolution.

pub mod error;
pub mod ode;
pub mod profiles;
pub mod specfun;
pub mod ermakov;
pub mod representations;
pub mod transitions;
pub mod thermo;
pub mod entropy_temp;
pub mod oracle;
pub mod export;

pub use error::{Error, Result};
pub use profiles::FrequencyProfile;
pub use ermakov::{solve as solve_ermakov, ErmakovPoint, ErmakovSolution};
