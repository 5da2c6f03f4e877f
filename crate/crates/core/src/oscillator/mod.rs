//! Quantum side: the perturbed oscillator in the Hermite basis, its spectrum
//! and the clusters around the unperturbed levels.

pub mod basis;
pub mod clusters;
pub mod eigen;
pub mod hamiltonian;
pub mod quadratic;
pub mod spectrum;

pub use basis::{multiplicity, BasisSpec, TRUST_FRACTION};
pub use clusters::{
    cluster_width_scan, clusters, clusters_by_label, detect_clusters, Cluster, ClusterSet,
    DEFAULT_MARGIN,
};
pub use eigen::{eigensolve, eigensolve_banded, tridiagonal_eigenvalues, BandMatrix};
pub use hamiltonian::{assemble_band_1d, assemble_hamiltonian, PositionPowers};
pub use quadratic::quadratic_exact_spectrum;
pub use spectrum::{compute_spectrum, separable_parts, SpectralData};
