//! Concrete models: DFS logical gates and CNOT synthesis, coupled cavities,
//! z-dephasing state preparation and leakage-error robustness.

pub mod cnot;
pub mod dfs;
pub mod jc;
pub mod metrics;
pub mod robustness;
pub mod zdephase;
