pub mod error;
pub mod laurent;
pub mod root_data;
pub mod rep_ring;
pub mod field;
pub mod satake;
pub mod automorphic_weights;
pub mod galois_twist;
pub mod modp_forms;
pub mod oracle;
pub mod acceptance;
