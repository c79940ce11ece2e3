//! Resource coordinates, the norm functional, and the entropy toolbox.

mod entropy;
mod generator;
mod profile;
mod qfi;
mod singlet;
mod transfer;

pub use entropy::{
    coherence_rel_ent, entropy_report, measurement_entropy, mutual_information, relative_entropy,
    von_neumann_entropy, EntropyReport,
};
pub use generator::CoherenceGenerator;
pub use profile::{
    coord_q1, coord_q2, coord_q3, profile, resource_norm, Coordinate, FidelityBreakdown,
    ProfileConfig, Q2Mode, ResourceProfile,
};
pub use qfi::{fq_max, quantum_fisher_information, variance};
pub use singlet::{
    advantage, fully_entangled_fraction, singlet_overlap, teleportation_fidelity,
    universal_cloner_benchmark, OptimizerSettings, SingletFraction, F_CLASSICAL_QUBIT, F_QUANTUM,
    UNIVERSAL_CLONER_QUBIT,
};
pub use transfer::{induced_transfer_channel, SUPPORT_CUTOFF};
