//! Complex unit gain graphs with two eigenvalues: construction, certification,
//! line-system correspondence and annealing search.

pub mod catalog;
pub mod coclique;
pub mod cyclotomic;
pub mod error;
pub mod families;
pub mod gain;
pub mod gf4;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod lines;
pub mod params;
pub mod search;
pub mod spectral;
pub mod switching;
pub mod weighing;

pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use gain::UnitGain;
pub use graph::GainGraph;
pub use spectral::{certify_two_ev, eigenvalues, Spectrum, TwoEvCertificate};
pub use switching::SwitchingWitness;
