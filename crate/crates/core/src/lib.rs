//! Rauzy fractals from Pisot substitutions: word iteration, spectral data,
//! projection frames, layered constructions, self-replicating domains and
//! rendering.

pub mod error;
pub mod exec;
pub mod frame;
pub mod layers;
pub mod layers_a;
pub mod layers_b;
pub mod oracle;
pub mod render;
pub mod selfrep;
pub mod spectral;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use exec::Strategy;
pub use frame::{Frame, PlanePoint};
pub use layers::{AncestorCheck, LayerPoint, LayerSet};
pub use layers_b::TrimRule;
pub use spectral::{matrix_of, spectrum_of, PisotSpectrum, SubstitutionMatrix};
pub use words::{LatticePoint, Substitution, Word};
