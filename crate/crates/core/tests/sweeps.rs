mod common;

use ep_spectra::eplocate::refine_ep;
use ep_spectra::io::{write_csv, ModelConfig};
use ep_spectra::sweep::{max_width_bifurcation, SweepConfig};
use ep_spectra::{analytic_ep_two_level, preset, run_sweep, Bifurcation, Complex64, EpKind, Sweep, PRESET_IDS};

const TABLE_PRESETS: [&str; 8] =
    ["fig1a-d", "fig1e-h", "fig2a-d", "fig2e-h", "fig3a-d", "fig3e-h", "fig4a-e", "fig4f-j"];

fn sweep(id: &str) -> Sweep {
    run_sweep(&SweepConfig::from_preset(&preset::<f64>(id).unwrap())).unwrap()
}

fn csv(res: &Sweep) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, res).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn scan_and_refine_reproduce_the_closed_form() {
    let p = preset::<f64>("fig1a-d").unwrap();
    let res = sweep("fig1a-d");
    let analytic: Vec<f64> = analytic_ep_two_level(&p.spec).unwrap().exact_roots().map(|l| l.a_star).collect();
    let mut numeric: Vec<f64> = res
        .candidates
        .iter()
        .map(|c| refine_ep(&p.spec, c.bracket).unwrap())
        .filter(|l| l.kind == EpKind::ExactRoot)
        .map(|l| l.a_star)
        .collect();
    numeric.sort_by(f64::total_cmp);
    numeric.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    assert_eq!(numeric.len(), analytic.len(), "{numeric:?}");
    for (x, y) in numeric.iter().zip(&analytic) {
        assert!((x - y).abs() < 1e-6, "{x} vs {y}");
    }
}

#[test]
fn every_preset_row_satisfies_the_identities() {
    for id in PRESET_IDS {
        let res = sweep(id);
        let mut worst = common::Worst::default();
        for row in &res.rows {
            let dec = row.decomposition.as_ref().unwrap();
            worst.merge(common::measure(&res.config.spec.eval_at(row.a), dec));
        }
        assert!(worst.failures().is_empty(), "{id}: {:?}", worst.failures());
    }
}

#[test]
fn sum_rules_for_every_preset() {
    for id in PRESET_IDS {
        let res = sweep(id);
        for row in &res.rows {
            let sum: Complex64 = row.eigenvalues().iter().sum();
            let e: f64 = res.config.spec.energies_at(row.a).iter().sum();
            let g: f64 = res.config.spec.half_widths_at(row.a).iter().sum();
            assert!((sum.re - e).abs() < 1e-10 && (sum.im - g).abs() < 1e-10, "{id} at {}", row.a);
        }
    }
}

/// `dℰ_k/da = Φ_kᵀ M' Φ_k` for c-normalized `Φ_k`, so `|dℰ_k/da| ≤ ‖M'‖·A_k`
/// with `‖M'‖` bounded by the largest curve slope. Tracked eigenvalues may
/// only move faster than that on flagged rows.
#[test]
fn tracked_motion_is_bounded_by_slopes_and_norms() {
    for id in PRESET_IDS {
        let res = sweep(id);
        let c = res.config.spec.slope_scale();
        for w in res.rows.windows(2) {
            let (x, y) = (&w[0], &w[1]);
            if y.flags.discontinuity || y.flags.coalescent || x.flags.coalescent {
                continue;
            }
            let step = y.a - x.a;
            let (ox, oy) = (x.observables.as_ref().unwrap(), y.observables.as_ref().unwrap());
            let (ex, ey) = (x.eigenvalues(), y.eigenvalues());
            for k in 0..res.n() {
                let bound = c * ox.norm_a[k].max(oy.norm_a[k]) * step * 1.05 + 1e-13;
                let moved = (ex[k] - ey[k]).norm();
                assert!(moved <= bound, "{id}: state {k} at a = {}, moved {moved:e} > {bound:e}", y.a);
            }
        }
    }
}

#[test]
fn flagged_rows_stay_rare() {
    for id in PRESET_IDS {
        let res = sweep(id);
        let flagged = res.rows.iter().filter(|r| r.flags.failed || r.flags.discontinuity).count();
        assert!((flagged as f64) < 0.05 * res.rows.len() as f64, "{id}: {flagged}/{}", res.rows.len());
        assert_eq!(res.failed_rows(), 0, "{id}");
    }
}

#[test]
fn gain_loss_widths_outside_the_window() {
    let res = sweep("fig3a-d");
    for row in res.rows.iter().filter(|r| r.a.abs() > 1.05) {
        let widest = row.eigenvalues().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        assert!(widest > 1e-3, "a = {}: {widest}", row.a);
    }
    let (lo, hi) = res.ep_report.real_spectrum_windows[0];
    assert!((lo + 1.0).abs() < 1e-6 && (hi - 1.0).abs() < 1e-6);
}

#[test]
fn uncoupled_sweep_has_no_bifurcation_point() {
    let mut cfg = ModelConfig::from_preset(&preset::<f64>("fig1e-h").unwrap());
    cfg.omega_re = 0.0;
    cfg.omega_im = 0.0;
    let res = run_sweep(&cfg.sweep_config::<f64>().unwrap()).unwrap();
    assert_eq!(max_width_bifurcation(&res, Bifurcation::Auto), None);
    assert!(res.ep_report.locations.is_empty());
}

#[test]
fn results_do_not_depend_on_worker_count() {
    for id in ["fig1a-d", "fig7-4lev-complex"] {
        let cfg = SweepConfig::from_preset(&preset::<f64>(id).unwrap());
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = one.install(|| run_sweep(&cfg).unwrap());
        let parallel = run_sweep(&cfg).unwrap();
        assert_eq!(csv(&serial), csv(&parallel), "{id}");
    }
}

#[test]
fn five_level_doorway_config() {
    let text = r#"
n = 5
topology = "doorway"
omega_re = 0.0
omega_im = 0.02

[[state]]
e_intercept = 0.6
e_slope = 0.0
g2_intercept = -0.5
g2_slope = 0.0

[[state]]
e_intercept = 0.0
e_slope = 1.0
g2_intercept = -0.01
g2_slope = 0.0

[[state]]
e_intercept = 0.1
e_slope = 0.8
g2_intercept = -0.02
g2_slope = 0.0

[[state]]
e_intercept = 0.2
e_slope = 0.6
g2_intercept = -0.03
g2_slope = 0.0

[[state]]
e_intercept = 0.3
e_slope = 0.4
g2_intercept = -0.04
g2_slope = 0.0

[sweep]
axis_name = "a"
min = 0.0
max = 1.0
points = 401
"#;
    let cfg = ModelConfig::parse(text).unwrap().sweep_config::<f64>().unwrap();
    let res = run_sweep(&cfg).unwrap();
    assert_eq!(res.n(), 5);
    let mut worst = common::Worst::default();
    for row in &res.rows {
        worst.merge(common::measure(&cfg.spec.eval_at(row.a), row.decomposition.as_ref().unwrap()));
    }
    assert!(worst.failures().is_empty(), "{:?}", worst.failures());
    let header = csv(&res).lines().next().unwrap().to_string();
    assert!(header.contains("E_5") && header.contains("b_55") && !header.contains("E_6"));
}

#[test]
fn table_presets_have_their_named_bifurcation() {
    for id in TABLE_PRESETS {
        let p = preset::<f64>(id).unwrap();
        let res = sweep(id);
        assert!(res.max_bifurcation_at.is_some(), "{id}");
        assert_ne!(p.bifurcation, Bifurcation::Auto, "{id}");
    }
}
