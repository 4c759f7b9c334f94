//! Shipped network descriptions build and have the expected structure.

use std::path::{Path, PathBuf};

use dgm_core::cli::RunConfig;
use dgm_core::network::NetworkConfig;
use dgm_core::numerics::hermitian::spectral_norm;
use dgm_core::numerics::testing::random_hermitian;
use dgm_core::projector::SteadyStructure;
use dgm_core::Error;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn dfs_pair_matches_scenario_builder() {
    let net = NetworkConfig::from_path(&configs().join("networks/dfs_pair.toml")).unwrap().build().unwrap();
    assert_eq!(net.dim(), 16);
    assert!((net.error_budget() - 1.0).abs() < 1e-15);
    let model_net = dgm_core::scenarios::dfs::dfs_network(2, &[1.0, 0.5]).unwrap();
    let l0 = net.unperturbed_liouvillian().unwrap();
    assert!(l0.assembled().matrix().max_abs_diff(model_net.unperturbed_liouvillian().unwrap().assembled().matrix()) < 1e-15);
    let p = net.global_projector().unwrap();
    assert_eq!(p.kernel_dim(), 16);
    let dense = SteadyStructure::with_default_tol(l0.assembled()).unwrap();
    let diff = p.to_dense().unwrap().matrix() - dense.p0.matrix();
    assert!(spectral_norm(&diff).unwrap() < 1e-9);
}

#[test]
fn chain_budget_and_projector() {
    let net = NetworkConfig::from_path(&configs().join("networks/dfs_chain.toml")).unwrap().build().unwrap();
    assert_eq!(net.dim(), 64);
    // J_max = 0.5, two edges, tau_max = 1.
    assert!((net.error_budget() - 1.0).abs() < 1e-15);
    let p = net.global_projector().unwrap();
    assert_eq!(p.kernel_dim(), 64);
    let x = random_hermitian(64, 1);
    let once = p.apply(&x).unwrap();
    assert!(p.apply(&once).unwrap().max_abs_diff(&once) < 1e-10);
    assert!((once.trace() - x.trace()).norm() < 1e-10);
}

#[test]
fn mixed_network_vertices_are_local() {
    let cfg = NetworkConfig::from_path(&configs().join("networks/mixed.toml")).unwrap();
    let net = cfg.build().unwrap();
    assert_eq!(net.dim(), 8 * 2 * 6 * 6);
    for v in net.vertices() {
        let l = v.local_liouvillian().unwrap();
        let st = SteadyStructure::with_default_tol(l.assembled()).unwrap();
        assert!(st.residuals(l.assembled()).unwrap().max() < 1e-8);
    }
    // The boson hop belongs to the unperturbed part, so no product projector exists.
    assert!(net.global_projector().is_err());
}

#[test]
fn run_configs_parse() {
    for entry in std::fs::read_dir(configs().join("runs")).unwrap() {
        let path = entry.unwrap().path();
        let cfg = RunConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if let Some(net) = &cfg.network {
            NetworkConfig::from_path(net).unwrap().build().unwrap();
        }
    }
}

#[test]
fn malformed_networks_are_config_errors() {
    let cases = [
        "[[vertex]]\nkind = \"dfs2\"\ntau = 1.0\n[[edge]]\ni = 0\nj = 0\ncoupling = \"hop\"\nstrength = 1.0\n",
        "[[vertex]]\nkind = \"dfs2\"\ntau = 1.0\n[[edge]]\ni = 0\nj = 3\ncoupling = \"hop\"\nstrength = 1.0\n",
        "[[vertex]]\nkind = \"dfs2\"\ntau = 1.0\n[[vertex]]\nkind = \"dfs2\"\ntau = 1.0\n\
         [[edge]]\ni = 0\nj = 1\ncoupling = \"hop\"\nstrength = 1.0\n\
         [[edge]]\ni = 1\nj = 0\ncoupling = \"zz\"\nstrength = 1.0\n",
        "[[vertex]]\nkind = \"dfs2\"\ntau = 1.0\n[[edge]]\ni = 0\nj = 1\ncoupling = \"teleport\"\nstrength = 1.0\n",
        "",
    ];
    for text in cases {
        let r = NetworkConfig::from_toml_str(text).and_then(|c| c.build());
        assert!(matches!(r, Err(Error::Config(_))), "{text:?} gave {r:?}");
    }
}
