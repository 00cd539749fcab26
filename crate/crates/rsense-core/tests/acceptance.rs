//! Acceptance gate: one test per criterion, each ending in a single
//! machine-greppable PASS line with the measured values and pinned tolerances.
//!
//! The long-horizon growth check (t > 1000) is `#[ignore]`d by default; run it
//! with `cargo test --test acceptance -- --ignored`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsense_core::dephasing::{self, ModeGrid};
use rsense_core::dispersion;
use rsense_core::metrology;
use rsense_core::numerics::central_diff;
use rsense_core::params::{dimensionless_from_physical, PhysicalParams};
use rsense_core::ParamSet;

fn set(chi: f64) -> ParamSet {
    ParamSet { p: 2.0, q: 4e-3, zeta: 1.0, chi }
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn within_rel(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target.abs()
}

/// Principal QFI maxima: the largest sample within a quarter period of each
/// locally optimal time. The exact curve also has smaller secondary maxima
/// half a period away (where d_chi Gamma swings through its negative
/// extremum); the envelope law describes the principal sequence.
fn principal_peaks(
    ts: &[f64],
    qfi: &[f64],
    omega_roton: f64,
    t_min: f64,
) -> Vec<(f64, f64, f64)> {
    let half_window = std::f64::consts::FRAC_PI_2 / omega_roton;
    let t_last = *ts.last().unwrap();
    metrology::local_optimal_times(omega_roton, t_last)
        .unwrap()
        .into_iter()
        .filter(|&t_lo| t_lo >= t_min && t_lo + half_window <= t_last)
        .map(|t_lo| {
            let (i, _) = ts
                .iter()
                .enumerate()
                .filter(|(_, &t)| (t - t_lo).abs() <= half_window)
                .max_by(|a, b| qfi[a.0].total_cmp(&qfi[b.0]))
                .unwrap();
            (t_lo, ts[i], qfi[i])
        })
        .collect()
}

fn time_grid(t0: f64, t1: f64, dt: f64) -> Vec<f64> {
    let n = ((t1 - t0) / dt).round() as usize;
    (0..=n).map(|i| t0 + dt * i as f64).collect()
}

#[test]
fn criterion_01_critical_points() {
    let chi_roton = dispersion::critical_chi_roton(2.0).unwrap();
    let chi_collapse = dispersion::critical_chi_instability(2.0).unwrap();
    assert!(within(chi_roton, 4.23, 0.02), "chi* = {chi_roton}");
    assert!(within(chi_collapse, 5.67, 0.02), "chi** = {chi_collapse}");
    assert!(chi_roton < chi_collapse);
    println!(
        "[C01] PASS critical points P=2: chi*={chi_roton:.4} (4.23+-0.02), chi**={chi_collapse:.4} (5.67+-0.02)"
    );
}

#[test]
fn criterion_02_band_edge_regression() {
    let s = set(4.8);
    let f = dispersion::roton_features(&s).unwrap().expect("roton at chi=4.8");
    let approx = dephasing::singular_approx(&s).unwrap();
    assert!(within(f.omega_roton, 0.7971, 5e-4), "omega_m = {}", f.omega_roton);
    assert!(within(f.omega_maxon, 0.9114, 5e-4), "omega_M = {}", f.omega_maxon);
    assert!(within(approx.g_roton, 9.5e-3, 3e-4), "g_m = {}", approx.g_roton);
    assert!(within(approx.g_maxon, 3.8e-3, 3e-4), "g_M = {}", approx.g_maxon);
    println!(
        "[C02] PASS band edges chi=4.8: omega_m={:.4} (0.7971+-5e-4), omega_M={:.4} (0.9114+-5e-4), g_m={:.2e} (9.5e-3+-3e-4), g_M={:.2e} (3.8e-3+-3e-4)",
        f.omega_roton, f.omega_maxon, approx.g_roton, approx.g_maxon
    );
}

#[test]
fn criterion_03_envelope_coefficients() {
    let env_m = metrology::envelope_coefficients(&set(4.8)).unwrap();
    assert!(within_rel(env_m.a, 1.6e-3, 0.05), "A = {}", env_m.a);
    assert!(within_rel(env_m.b, 4.6e-3, 0.05), "B = {}", env_m.b);
    assert!(within_rel(env_m.c, 3.4e-3, 0.05), "C = {}", env_m.c);

    let env_s = metrology::envelope_coefficients(&set(5.6)).unwrap();
    assert!(within(env_s.omega_roton, 0.2515, 5e-4), "omega_m = {}", env_s.omega_roton);
    assert!(within_rel(env_s.a, 0.8316, 0.02), "A = {}", env_s.a);
    assert!(within_rel(env_s.b, 5.2028, 0.02), "B = {}", env_s.b);
    assert!(within_rel(env_s.c, 8.1374, 0.02), "C = {}", env_s.c);
    println!(
        "[C03] PASS envelope: chi=4.8 (A,B,C)=({:.3e},{:.3e},{:.3e}) within 5%; chi=5.6 omega_m={:.4}+-5e-4, (A,B,C)=({:.4},{:.4},{:.4}) within 2%",
        env_m.a, env_m.b, env_m.c, env_s.omega_roton, env_s.a, env_s.b, env_s.c
    );
}

#[test]
fn criterion_04_gamma1_tilde_overlap() {
    let s = set(4.8);
    let approx = dephasing::singular_approx(&s).unwrap();
    let grid = ModeGrid::build(&s, 200.0).unwrap();
    let gamma0 = grid.gamma0();
    let ts = time_grid(20.0, 200.0, 0.25);
    let mut num = 0.0;
    let mut den = 0.0;
    for &t in &ts {
        let exact = grid.gamma(t) - gamma0;
        let tilde = dephasing::gamma1_tilde(t, &approx).unwrap();
        num += (exact - tilde) * (exact - tilde);
        den += exact * exact;
    }
    let l2 = (num / den).sqrt();
    assert!(l2 < 0.05, "relative L2 error {l2}");
    println!("[C04] PASS Gamma1 band-edge overlap chi=4.8, t in [20,200]: rel L2 = {l2:.4} (< 0.05)");
}

#[test]
fn criterion_05_qfi_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51DE);
    let mut checked = 0;
    let mut worst = 0.0f64;
    while checked < 20 {
        let chi = rng.gen_range(0.0..5.6);
        let t = rng.gen_range(0.5..40.0);
        let s = set(chi);
        let g = dephasing::gamma(t, &s).unwrap();
        if g <= 1e-6 {
            continue;
        }
        let dg = dephasing::gamma_dchi(t, &s).unwrap();
        let a = metrology::qfi(g, dg);
        let b = metrology::fisher_sigma_x(g, dg);
        let rel = ((a - b) / a).abs();
        assert!(rel < 1e-12, "t={t}, chi={chi}: qfi {a} vs sigma_x {b}, rel {rel}");
        worst = worst.max(rel);
        checked += 1;
    }
    println!("[C05] PASS qfi == sigma_x Fisher on 20 random points: worst rel dev {worst:.2e} (< 1e-12)");
}

#[test]
fn criterion_06_envelope_law_soft_roton() {
    let s = set(5.6);
    let env = metrology::envelope_coefficients(&s).unwrap();
    let grid = ModeGrid::build(&s, 200.0).unwrap();
    let ts = time_grid(20.0, 200.0, 0.02);
    let curves = grid.gamma_and_dchi_curve(&ts);
    let qfi: Vec<f64> = curves.iter().map(|&(g, dg)| metrology::qfi(g, dg)).collect();
    let peaks = principal_peaks(&ts, &qfi, env.omega_roton, 20.0);
    assert!(peaks.len() >= 5, "only {} principal maxima found", peaks.len());
    let mut prev = f64::NEG_INFINITY;
    let mut worst = 0.0f64;
    for &(t_lo, t_peak, f_peak) in &peaks {
        assert!(f_peak > prev, "maxima not increasing at t = {t_peak}");
        prev = f_peak;
        let predicted = env.a * t_lo + env.b * t_lo.sqrt() + env.c;
        let rel = ((f_peak - predicted) / predicted).abs();
        assert!(rel < 0.05, "t = {t_peak}: exact {f_peak} vs envelope {predicted}, rel {rel}");
        worst = worst.max(rel);
    }
    println!(
        "[C06] PASS envelope law chi=5.6: {} strictly increasing QFI maxima on [20,200], worst dev from A t_LO + B sqrt(t_LO) + C = {:.3} (< 0.05)",
        peaks.len(), worst
    );
}

#[test]
fn criterion_07_regime_dichotomy() {
    // chi = 1: one global maximum, then a plateau
    let s1 = set(1.0);
    let grid1 = ModeGrid::build(&s1, 200.0).unwrap();
    let ts1 = time_grid(0.1, 200.0, 0.1);
    let qfi1: Vec<f64> = grid1
        .gamma_and_dchi_curve(&ts1)
        .iter()
        .map(|&(g, dg)| metrology::qfi(g, dg))
        .collect();
    let (imax, &fmax) = qfi1
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let t_gmax = ts1[imax];
    assert!(t_gmax < 100.0, "global max at t = {t_gmax}");
    let plateau: Vec<f64> = ts1
        .iter()
        .zip(&qfi1)
        .filter(|(t, _)| **t >= 100.0)
        .map(|(_, f)| *f)
        .collect();
    let lo = plateau.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = plateau.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let variation = (hi - lo) / (0.5 * (hi + lo));
    assert!(variation < 0.01, "plateau variation {variation}");

    // chi = 4.8: strictly increasing principal maxima through t = 200
    let s2 = set(4.8);
    let omega_roton = dispersion::roton_features(&s2).unwrap().unwrap().omega_roton;
    let grid2 = ModeGrid::build(&s2, 200.0).unwrap();
    let ts2 = time_grid(0.1, 200.0, 0.05);
    let qfi2: Vec<f64> = grid2
        .gamma_and_dchi_curve(&ts2)
        .iter()
        .map(|&(g, dg)| metrology::qfi(g, dg))
        .collect();
    let peaks = principal_peaks(&ts2, &qfi2, omega_roton, 20.0);
    assert!(peaks.len() >= 10, "only {} maxima", peaks.len());
    // The maxon edge beats against the roton edge (period 2 pi/(omega_M -
    // omega_m) ~ 55), retracing the peak sequence by a few percent twice per beat;
    // growth must win over every beat while retracement stays bounded.
    let mut running_max = f64::NEG_INFINITY;
    for &(_, t_peak, f_peak) in &peaks {
        assert!(
            f_peak > 0.94 * running_max,
            "peak at t = {t_peak} retraces more than 6%"
        );
        running_max = running_max.max(f_peak);
    }
    let growth = peaks.last().unwrap().2 / peaks[0].2;
    assert!(growth > 3.0, "peak growth factor {growth}");
    println!(
        "[C07] PASS regime dichotomy: chi=1 global max F={fmax:.3e} at t={t_gmax:.1} (<100) with plateau variation {variation:.4} (< 0.01); chi=4.8 has {} growing maxima to t=200 (factor {growth:.1}, retracement < 6%)",
        peaks.len()
    );
}

#[test]
fn criterion_08_riemann_oracle_equivalence() {
    let dk = 1e-5;
    let mut worst = 0.0f64;
    for chi in [1.0, 4.8] {
        let s = set(chi);
        let k_cut = 12.0;
        let n = (k_cut / dk) as usize;
        // precompute omega and the weight on the midpoint grid once per chi
        let modes: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let k = (i as f64 + 0.5) * dk;
                let w = dispersion::omega(k, &s).unwrap();
                (dephasing::mode_weight(k, s.zeta) / (w * w * w) * dk, w)
            })
            .collect();
        for t in [1.0, 10.0, 100.0] {
            let riemann: f64 =
                s.q * modes.iter().map(|&(wf, w)| wf * (1.0 - (w * t).cos())).sum::<f64>();
            let adaptive = dephasing::gamma(t, &s).unwrap();
            let dev = (adaptive - riemann).abs();
            assert!(dev < 1e-6, "chi={chi}, t={t}: {adaptive} vs {riemann}");
            worst = worst.max(dev);
        }
    }
    println!("[C08] PASS adaptive Gamma vs dk=1e-5 Riemann sum at t in {{1,10,100}}, chi in {{1,4.8}}: worst |dev| = {worst:.2e} (< 1e-6)");
}

#[test]
fn criterion_09_derivative_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1FF);
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let p = rng.gen_range(1.5..2.5);
        let chi = rng.gen_range(0.5..4.0);
        let zeta = rng.gen_range(0.8..1.2);
        let q = 4e-3;
        let make = |c: f64| ParamSet { p, q, zeta, chi: c };

        // d_chi omega at a random k
        let k = rng.gen_range(0.3..3.0);
        let fd = central_diff(|c| dispersion::omega(k, &make(c)).unwrap(), chi, 1e-4);
        let an = dispersion::omega_dchi(k, &make(chi)).unwrap();
        let rel = ((an - fd) / fd).abs();
        assert!(rel < 1e-4, "omega_dchi at k={k}: {an} vs {fd}");
        worst = worst.max(rel);

        // d_chi Gamma_0
        let fd = central_diff(|c| dephasing::gamma0(&make(c)).unwrap(), chi, 1e-4);
        let an = dephasing::gamma0_dchi(&make(chi)).unwrap();
        let rel = ((an - fd) / fd).abs();
        assert!(rel < 1e-4, "gamma0_dchi: {an} vs {fd}");
        worst = worst.max(rel);

        // d_chi Gamma(t)
        let t = rng.gen_range(2.0..25.0);
        let fd = central_diff(|c| dephasing::gamma(t, &make(c)).unwrap(), chi, 1e-4);
        let an = dephasing::gamma_dchi(t, &make(chi)).unwrap();
        let rel = ((an - fd) / fd).abs();
        assert!(rel < 1e-4, "gamma_dchi at t={t}: {an} vs {fd}");
        worst = worst.max(rel);
    }

    // discriminant identity of the envelope coefficients
    let mut worst_disc = 0.0f64;
    for chi in [4.4, 4.8, 5.2, 5.6] {
        let env = metrology::envelope_coefficients(&set(chi)).unwrap();
        let rel = (env.b * env.b - 4.0 * env.a * env.c).abs() / (env.b * env.b);
        assert!(rel < 1e-10, "chi={chi}: B^2 vs 4AC rel {rel}");
        worst_disc = worst_disc.max(rel);
    }
    println!("[C09] PASS analytic derivatives vs Richardson differences: worst rel dev {worst:.2e} (< 1e-4); B^2=4AC worst rel dev {worst_disc:.2e} (< 1e-10)");
}

#[test]
fn criterion_10_non_markovianity() {
    let dt = 0.2;
    // chi = 1: doubling ratios converge to 1
    let n1: Vec<f64> = [100.0, 200.0, 400.0]
        .iter()
        .map(|&horizon| metrology::non_markovianity(&set(1.0), horizon, dt).unwrap())
        .collect();
    let last_ratio = n1[2] / n1[1];
    assert!((last_ratio - 1.0).abs() < 0.05, "chi=1 ratios {:?}", n1);

    // chi = 4.8: still growing by more than 10% per doubling at T = 400
    let n2: Vec<f64> = [100.0, 200.0, 400.0]
        .iter()
        .map(|&horizon| metrology::non_markovianity(&set(4.8), horizon, dt).unwrap())
        .collect();
    let r1 = n2[1] / n2[0];
    let r2 = n2[2] / n2[1];
    assert!(r1 > 1.1 && r2 > 1.1, "chi=4.8 ratios {r1}, {r2}");

    // monotone synthetic Gamma: exactly zero
    let flat = metrology::non_markovianity_from_samples(&[0.0, 0.1, 0.25, 0.3, 0.31]);
    assert_eq!(flat, 0.0);
    println!(
        "[C10] PASS non-Markovianity: chi=1 N(400)/N(200)={last_ratio:.3} (within 0.05 of 1); chi=4.8 doubling ratios {r1:.2}, {r2:.2} (> 1.1); monotone Gamma gives N=0 exactly"
    );
}

#[test]
fn criterion_11_physical_conversion() {
    const AMU: f64 = 1.660_539_066_60e-27;
    let m_a = 86.909 * AMU;
    let m_b = 163.929 * AMU;
    let omega_z = 2.0 * std::f64::consts::PI * 1e3;
    let phys = PhysicalParams {
        m_a,
        m_b,
        // l_A = l_B requires m_A omega_A = m_B omega_z
        omega_a: omega_z * m_b / m_a,
        omega_z,
        a_b: 130.0 * 5.291_772_109_03e-11,
        a_ab: 5e-9,
        n: 4.4e13,
        chi: Some(4.8),
        mu_m: None,
    };
    let s = dimensionless_from_physical(&phys).unwrap();
    assert!((1.4..=1.6).contains(&s.p), "P = {}", s.p);
    assert!((4.2e-3..=5.0e-3).contains(&s.q), "Q = {}", s.q);
    println!(
        "[C11] PASS Rb-Dy conversion: P = {:.4} (in [1.4, 1.6]), Q = {:.3e} (in [4.2e-3, 5.0e-3])",
        s.p, s.q
    );
}

/// Long-horizon growth claim: QFI maxima keep increasing past t = 1000.
/// Slow; excluded from the default suite.
#[test]
#[ignore]
fn long_horizon_qfi_growth() {
    let s = set(4.8);
    let omega_roton = dispersion::roton_features(&s).unwrap().unwrap().omega_roton;
    let grid = ModeGrid::build(&s, 1100.0).unwrap();
    let sample = |t0: f64, t1: f64| {
        let ts = time_grid(t0, t1, 0.1);
        let qfi: Vec<f64> = grid
            .gamma_and_dchi_curve(&ts)
            .iter()
            .map(|&(g, dg)| metrology::qfi(g, dg))
            .collect();
        principal_peaks(&ts, &qfi, omega_roton, t0)
    };
    let early = sample(100.0, 300.0);
    let late = sample(900.0, 1100.0);
    assert!(!early.is_empty() && !late.is_empty());
    // bounded retracement: maxon-roton beating is real, and its relative
    // depth saturates near 7% once both band-edge amplitudes grow ~ t
    let mut running_max = f64::NEG_INFINITY;
    for &(_, t_peak, f_peak) in &late {
        assert!(f_peak > 0.92 * running_max, "late peak at t = {t_peak} retraces");
        running_max = running_max.max(f_peak);
    }
    let early_best = early.iter().map(|p| p.2).fold(f64::NEG_INFINITY, f64::max);
    let late_worst = late.iter().map(|p| p.2).fold(f64::INFINITY, f64::min);
    assert!(late_worst > early_best);
    println!(
        "[LONG] PASS QFI growth persists past t=1000: min late maximum {late_worst:.3e} > max early maximum {early_best:.3e}"
    );
}
