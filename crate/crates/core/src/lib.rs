//! Two-qubit entanglement analysis built around the *sinisterness*
//! `S = det(c)`, the determinant of the Bloch correlation matrix.
//!
//! The sign of `S` records whether the singular-value frames of the two qubits
//! have opposite handedness. `S` is computed from observable correlations
//! ([`bloch`]) and, independently, as `-16 det(G)` from a fixed rearrangement
//! of the density matrix ([`sinisterness`]). Both routes are cross-checked
//! against Wootters' concurrence ([`concurrence`]), the closed forms for pure,
//! Werner, X and separable states, and Monte Carlo scans ([`experiments`]).

#![allow(clippy::needless_range_loop)]

pub mod bloch;
pub mod concurrence;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod numerics;
pub mod pauli;
pub mod perturbation;
pub mod rng;
pub mod sinisterness;
pub mod states;
pub mod verify;

pub use bloch::{decompose, fano_reconstruct, purity_from_gamma, BlochData, FanoReconstruction};
pub use concurrence::{
    biorthogonal_system, concurrence, concurrence_hermitian_oracle, concurrence_margin, r_matrix,
    spin_flip, ConcurrenceSpectrum,
};
pub use error::{Error, Invariant, Result};
pub use experiments::{
    estimator_convergence, scan_random_states, simulate_measurements, MeasurementEstimate, ScanRecord,
};
pub use geometry::{max_volume_search, quad_volume, separable_sinisterness, triple_product, VertexQuad};
pub use io::{analyze, parse_state, AnalysisReport};
pub use numerics::{det3_levi_civita, eig4, svd3, Complex4x4, Eigenvalues4, Real3x3, Real4x4, C64};
pub use perturbation::{
    concurrence_variation, det_expansion, sinisterness_variation, werner_variation,
    PerturbationReport,
};
pub use sinisterness::{
    chiral_svd, g_matrix, sinisterness, sinisterness_checked, ChiralSVD, Chirality, ClosedForm,
    GMatrix,
};
pub use states::{
    DensityMatrix, EnsembleSpec, EnsembleTerm, PureState, QubitState, SamplingMode, XStateParams,
};
