//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::time::Instant;

use dgm_core::effective::{log_grid, scaling_sweep, SweepResult};
use dgm_core::network::CouplingKind;
use dgm_core::numerics::hermitian::spectral_norm;
use dgm_core::numerics::superop::SuperOperator;
use dgm_core::projector::{ergodic_projector, SteadyStructure};
use dgm_core::scenarios::cnot::{cnot, cnot_sequence, gate_fidelity, ideal_product, BellPrep};
use dgm_core::scenarios::dfs::{dfs_network, logical_generators, three_qubit_coupling, two_module_model};
use dgm_core::scenarios::jc::{
    coherence_curve, concurrence_curve, effective_state, jc_effective_analytic, jc_numeric_effective,
    jc_relative_deviation, CoherenceComparison, JcModel, JcParams,
};
use dgm_core::scenarios::metrics::concurrence;
use dgm_core::scenarios::robustness::{
    default_magnitudes, error_super, hamiltonian_error, robustness_sweep, ErrorMatrix, PerturbationKind,
    RobustnessSetup,
};
use dgm_core::scenarios::zdephase::{analytic_state, ZDephasing};
use dgm_core::numerics::matrix::{DenseMatrix, C64};
use dgm_core::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(ok: bool, detail: String, failures: &mut Vec<String>) -> bool {
    if !ok {
        failures.push(detail);
    }
    ok
}

fn finish(failures: Vec<String>, summary: String) -> Result<Outcome> {
    if failures.is_empty() {
        Ok(Outcome {
            pass: true,
            detail: summary,
        })
    } else {
        Ok(Outcome {
            pass: false,
            detail: failures.join("; "),
        })
    }
}

fn grid() -> Vec<f64> {
    log_grid(10.0, 1e4, 20).expect("grid")
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn spectral_identities() -> Result<Outcome> {
    let mut generators: Vec<(String, SuperOperator)> = Vec::new();
    for q in [2, 3] {
        let net = dfs_network(q, &[1.0])?;
        generators.push((format!("dfs{q}"), net.unperturbed_liouvillian()?.assembled().clone()));
    }
    for (t1, t2) in [(1.0, 0.5), (1.0, 1.0)] {
        let net = dfs_network(2, &[t1, t2])?;
        generators.push((format!("dfs2 pair {t1}/{t2}"), net.unperturbed_liouvillian()?.assembled().clone()));
    }
    let z = ZDephasing::new(1.0)?;
    generators.push(("z-dephasing pair".into(), z.l0().clone()));
    let jc = JcModel::new(&JcParams::default())?;
    generators.push(("jc n_max=2".into(), jc.unperturbed_liouvillian()?.assembled().clone()));

    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (name, l0) in &generators {
        let st = SteadyStructure::with_default_tol(l0)?;
        let r = st.residuals(l0)?;
        for (id, v) in r.entries() {
            worst = worst.max(v);
            check(v < 1e-8, format!("{name} {id} = {v:.2e}"), &mut failures);
        }
    }
    let b = jc.boson_residuals()?;
    worst = worst.max(b.max());
    check(b.max() < 1e-8, format!("jc boson pair max = {:.2e}", b.max()), &mut failures);
    finish(
        failures,
        format!("{} generators, max residual {worst:.2e} < 1e-8", generators.len() + 1),
    )
}

fn logical_generator_forms() -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for g in [1.0, 0.37] {
        let mut cases = logical_generators(g)?;
        cases.push(three_qubit_coupling(g)?);
        for case in &cases {
            let d = case.generator_deviation()?;
            worst = worst.max(d);
            check(d < 1e-9, format!("{} g={g}: {d:.2e}", case.label), &mut failures);
        }
        let hop = &cases[2].expected;
        check(
            within(hop[(1, 2)].norm(), g / 2.0, 1e-15),
            format!("hop coefficient {}", hop[(1, 2)]),
            &mut failures,
        );
        let h3 = cases[4].restricted_hamiltonian()?;
        check(
            within(h3[(6, 5)].re, g / 3f64.sqrt(), 1e-9) && within(h3[(7, 5)].re, -g / 3.0, 1e-9),
            format!("three-qubit coefficients {} {}", h3[(6, 5)], h3[(7, 5)]),
            &mut failures,
        );
    }
    finish(
        failures,
        format!("x, z, hop (|g/2|), zz, three-qubit (g/sqrt3, -g/3): max deviation {worst:.2e} < 1e-9"),
    )
}

fn first_order_scaling() -> Result<Outcome> {
    let t = grid();
    let mut failures = Vec::new();
    let mut slopes = Vec::new();
    for (kind, name) in [(CouplingKind::Hop, "hop"), (CouplingKind::Zz, "zz")] {
        let (model, _) = two_module_model(kind, 1.0, 1.0, 0.5)?;
        let s = scaling_sweep(&model, &t, None)?;
        slopes.push(s.slope);
        check(within(s.slope, 1.0, 0.1), format!("{name} slope {:.4}", s.slope), &mut failures);
        check(s.decreasing_from(1e3), format!("{name} not monotone on [1e3, 1e4]"), &mut failures);
    }
    finish(
        failures,
        format!("slopes hop {:.4}, zz {:.4} (1 +/- 0.1), monotone on upper decade", slopes[0], slopes[1]),
    )
}

fn jc_crosscheck() -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (g_a, g_b, j) in [(1.0, 1.0, 0.0), (1.0, 1.0, 0.5), (0.7, 1.2, 1.3)] {
        let p = JcParams {
            g_a,
            g_b,
            j,
            ..JcParams::default()
        };
        let d = jc_relative_deviation(&p)?;
        worst = worst.max(d);
        check(d < 1e-8, format!("J={j}: relative deviation {d:.2e}"), &mut failures);
        if j == 0.0 {
            let a = jc_effective_analytic(&p);
            let want = 4.0 * p.tau * g_a * g_a;
            check(
                within(a.tau_eff_inv[0], want, 1e-8 * want),
                format!("J=0 rate {} != 4 tau g^2", a.tau_eff_inv[0]),
                &mut failures,
            );
        }
    }
    let a = jc_numeric_effective(&JcParams::default())?;
    let b = jc_numeric_effective(&JcParams {
        n_max: 3,
        ..JcParams::default()
    })?;
    let shift = a.matrix().max_abs_diff(b.matrix());
    check(shift < 1e-10, format!("n_max 2 -> 3 shift {shift:.2e}"), &mut failures);
    finish(
        failures,
        format!("max relative deviation {worst:.2e} < 1e-8, n_max 2 -> 3 shift {shift:.2e} < 1e-10"),
    )
}

fn coherence() -> Result<Outcome> {
    let mut failures = Vec::new();
    let js: Vec<f64> = (0..=20).map(|k| 0.25 * k as f64).collect();
    let mut worst = 0.0f64;
    for tau in [0.5, 1.0, 2.0] {
        for (j, c) in coherence_curve(&js, tau, 1.0)? {
            let p = JcParams {
                j,
                tau,
                n_b: 0,
                g_b: 0.0,
                ..JcParams::default()
            };
            let want = (-0.5 * jc_effective_analytic(&p).tau_eff_inv[0]).exp();
            worst = worst.max((c - want).abs());
        }
    }
    check(worst < 1e-10, format!("closed-form deviation {worst:.2e}"), &mut failures);
    let cmp = CoherenceComparison::new(1.0, 1.0, 1.0, 2)?;
    let samples = grid()
        .into_iter()
        .map(|t| cmp.distance(t).map(|d| (t, d)))
        .collect::<Result<Vec<_>>>()?;
    let s = SweepResult::from_samples(samples, None)?;
    check(within(s.slope, 0.5, 0.1), format!("full-vs-effective slope {:.4}", s.slope), &mut failures);
    finish(
        failures,
        format!(
            "C(J) = exp(-T/(2 tau_eff)) to {worst:.2e}; full-vs-effective slope {:.4} (0.5 +/- 0.1)",
            s.slope
        ),
    )
}

fn concurrence_curves() -> Result<Outcome> {
    let mut failures = Vec::new();
    let js: Vec<f64> = (0..19).map(|k| 1.0 + 0.5 * k as f64).collect();
    let taus = [0.5, 1.0, 2.0];
    let curves = taus
        .iter()
        .map(|&tau| concurrence_curve(&js, tau, 1.0))
        .collect::<Result<Vec<_>>>()?;
    for (tau, c) in taus.iter().zip(&curves) {
        check(
            c.windows(2).all(|w| w[1].1 > w[0].1),
            format!("tau={tau} not increasing in J"),
            &mut failures,
        );
    }
    for w in curves.windows(2) {
        check(
            w[0].iter().zip(&w[1]).all(|(a, b)| b.1 > a.1),
            "curves not ordered by tau".into(),
            &mut failures,
        );
    }
    let mut bell = DenseMatrix::zeros(4, 4);
    for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        bell[(r, c)] = C64::new(0.5, 0.0);
    }
    let p = JcParams::default();
    let c0 = concurrence(&effective_state(&p, &bell, 0.0)?)?;
    check(within(c0, 1.0, 1e-6), format!("C(T=0) = {c0}"), &mut failures);
    finish(
        failures,
        format!("J in [1, 10]: increasing for tau in {{0.5, 1, 2}}, ordered by tau, C(T=0) = {c0:.9}"),
    )
}

fn zdephasing() -> Result<Outcome> {
    let mut failures = Vec::new();
    let z = ZDephasing::new(1.0)?;
    let mut worst = 0.0f64;
    for (g, t) in [(1.0, 0.1), (1.0, 1.0), (0.5, 3.0), (2.0, 0.25)] {
        let d = z.effective_state(g, t)?.max_abs_diff(&analytic_state(g, 1.0, t));
        worst = worst.max(d);
    }
    check(worst < 1e-10, format!("population deviation {worst:.2e}"), &mut failures);
    let samples = grid()
        .into_iter()
        .map(|t| z.distance(1.0, t).map(|d| (t, d)))
        .collect::<Result<Vec<_>>>()?;
    let s = SweepResult::from_samples(samples, None)?;
    check(within(s.slope, 0.5, 0.1), format!("slope {:.4}", s.slope), &mut failures);
    finish(
        failures,
        format!("populations to {worst:.2e}, full-dynamics slope {:.4} (0.5 +/- 0.1)", s.slope),
    )
}

fn cnot_bell() -> Result<Outcome> {
    let mut failures = Vec::new();
    let f = gate_fidelity(&cnot(), &ideal_product(&cnot_sequence()));
    check(within(f, 1.0, 1e-12), format!("ideal fidelity {f}"), &mut failures);
    let prep = BellPrep::new(1.0, 1.0)?;
    let (td, inf) = prep.sweep(&grid(), 10)?;
    check(within(td.slope, 1.0, 0.15), format!("trace-distance slope {:.4}", td.slope), &mut failures);
    check(within(inf.slope, 1.0, 0.15), format!("infidelity slope {:.4}", inf.slope), &mut failures);
    check(td.decreasing_last(10), "not decreasing on fit window".into(), &mut failures);
    let ratio = td.samples[0].1 / td.samples.last().expect("samples").1;
    check(ratio >= 10.0, format!("first/last ratio {ratio:.2}"), &mut failures);
    finish(
        failures,
        format!(
            "CNOT infidelity {:.1e}; slopes {:.4} (trace distance), {:.4} (infidelity); first/last {ratio:.1}",
            (1.0 - f).abs(),
            td.slope,
            inf.slope
        ),
    )
}

fn robustness() -> Result<Outcome> {
    let mut failures = Vec::new();
    let g = 2.0;
    let setup = RobustnessSetup::new(1.0, 1.0, g)?;
    let t = grid();
    let seed = 0;
    let mut summary = Vec::new();
    let pi = dgm_core::scenarios::dfs::logical_isometry(2, 2)?;
    let proj = pi.matmul(&pi.adjoint());
    for kind in [PerturbationKind::Hamiltonian, PerturbationKind::Lindbladian] {
        let mags: Vec<f64> = default_magnitudes(kind).iter().map(|m| m * g).collect();
        for (k, &m) in mags.iter().enumerate() {
            let z = ErrorMatrix::sample(m, seed, k as u64 + 1)?;
            let v = hamiltonian_error(&z)?;
            let pvp = proj.matmul(&v).matmul(&proj).max_abs();
            check(pvp < 1e-10, format!("{kind:?} m={m}: Pi V Pi = {pvp:.2e}"), &mut failures);
            let e = error_super(kind, &z)?;
            let pep = dgm_core::effective::first_order_generator(&e, &setup.steady().p0)?.matrix().max_abs();
            check(pep < 1e-10, format!("{kind:?} m={m}: P0 E P0 = {pep:.2e}"), &mut failures);
        }
        let sweeps = robustness_sweep(&setup, kind, &mags, seed, &t, None)?;
        let base = &sweeps[0].1;
        for (m, s) in &sweeps {
            check(within(s.slope, 1.0, 0.15), format!("{kind:?} m={m}: slope {:.4}", s.slope), &mut failures);
            if *m > 0.0 {
                let above = s.samples.iter().zip(&base.samples).all(|(a, b)| a.1 >= b.1);
                check(above, format!("{kind:?} m={m}: below reference"), &mut failures);
            }
        }
        summary.push(format!(
            "{kind:?} |zeta| {:?} slopes [{}]",
            mags,
            sweeps.iter().map(|(_, s)| format!("{:.3}", s.slope)).collect::<Vec<_>>().join(", ")
        ));
    }
    finish(failures, format!("{}; perturbed >= reference at all T", summary.join("; ")))
}

fn ergodic() -> Result<Outcome> {
    let mut failures = Vec::new();
    let l0 = dfs_network(2, &[1.0])?.unperturbed_liouvillian()?.assembled().clone();
    let p0 = SteadyStructure::with_default_tol(&l0)?.p0;
    let mut dists = Vec::new();
    for t_avg in [10.0, 100.0, 1000.0] {
        let e = ergodic_projector(&l0, t_avg, (t_avg * 20.0) as usize)?;
        dists.push(spectral_norm(&(e.matrix() - p0.matrix()))?);
    }
    check(dists[2] < 1e-2, format!("distance at 1e3 tau = {:.2e}", dists[2]), &mut failures);
    check(dists.windows(2).all(|w| w[1] < w[0]), format!("not decreasing: {dists:?}"), &mut failures);
    finish(
        failures,
        format!(
            "distance {:.2e}, {:.2e}, {:.2e} at T_avg = 10, 100, 1000 tau",
            dists[0], dists[1], dists[2]
        ),
    )
}

type Criterion = fn() -> Result<Outcome>;

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("spectral identities", spectral_identities),
        ("logical generators", logical_generator_forms),
        ("first-order scaling", first_order_scaling),
        ("cavity cross-check", jc_crosscheck),
        ("coherence", coherence),
        ("concurrence", concurrence_curves),
        ("z-dephasing", zdephasing),
        ("CNOT Bell preparation", cnot_bell),
        ("robustness", robustness),
        ("ergodic average", ergodic),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
