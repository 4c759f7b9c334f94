//! Compiles a small C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "dgm_sim.h"

int main(void) {
    double lower[8] = {0, 0, 1, 0, 0, 0, 0, 0};
    double rate = 1.0;
    DgmLiouvillian *l = NULL;
    if (dgm_liouvillian_new(2, NULL, 1, lower, &rate, &l) != DGM_STATUS_OK) return 1;
    double excited[8] = {0, 0, 0, 0, 0, 0, 1, 0};
    double out[8];
    if (dgm_liouvillian_propagate(l, 1.0, excited, out) != DGM_STATUS_OK) return 2;
    if (fabs(out[6] - exp(-1.0)) > 1e-12) return 3;
    DgmSteady *s = NULL;
    if (dgm_steady_new(l, 0.0, &s) != DGM_STATUS_OK) return 4;
    size_t k = 0;
    dgm_steady_kernel_dim(s, &k);
    if (k != 1) return 5;
    if (dgm_steady_new(NULL, 0.0, &s) != DGM_STATUS_NULL_POINTER) return 6;
    char msg[128];
    if (dgm_last_error_message(msg, sizeof msg) <= 0) return 7;
    dgm_steady_free(s);
    dgm_liouvillian_free(l);
    printf("ok %s\n", dgm_version());
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps/<name>
    let exe = std::env::current_exe().expect("test executable path");
    exe.parent().and_then(|p| p.parent()).expect("profile directory").to_path_buf()
}

#[test]
fn header_compiles_and_links() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler ({cc}); skipping");
        return;
    }
    let lib = target_dir().join("libdgm_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/dgm_sim.h")).unwrap();
    let src = include_str!("../src/lib.rs");
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 20, "{exports:?}");
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct DgmLiouvillian DgmLiouvillian;"));
}
