//! The resolution `F_*` of a diagram by `Λ` of free families, the double
//! complex `Hom(F_*, G)` over the factorization category, the spectral
//! sequences of its two filtrations, and an end-to-end check of their
//! `E_2` pages and abutment against the bar-resolution oracle.
//!
//! Row-filtration pages are indexed `(s, t)` with `s` the resolution degree
//! and `t` the Baues–Wirsching degree, so both sequences have
//! `d_r: E_r^{s,t} → E_r^{s+r, t-r+1}`.

mod double;
mod pages;
mod resolution;
mod verify;

pub use double::{build_double_complex, total_dimension, DoubleComplex};
pub use pages::{
    filtered_spectral_sequence, spectral_sequence, FilteredComplex, Filtration, SpectralSequence, SpectralSequencePage,
};
pub use resolution::{resolve_functor, resolve_functor_within, FunctorResolution};
pub use verify::{verify_theorem, Counterexample, VerificationReport, Verdict, Verdicts};
