//! Parameter sets of the published two-, three- and four-level calculations.

use num_complex::Complex;

use super::{build_n_level, build_two_level, HamiltonianSpec, Level, ModelError, ParamCurve};
use crate::scalar::{lit, Real};
use crate::sweep::Bifurcation;

pub const PRESET_IDS: [&str; 14] = [
    "fig1a-d",
    "fig1e-h",
    "fig2a-d",
    "fig2e-h",
    "fig3a-d",
    "fig3e-h",
    "fig4a-e",
    "fig4f-j",
    "fig5-2lev",
    "fig5-3lev",
    "fig6-2lev",
    "fig6-3lev",
    "fig7-4lev-imag",
    "fig7-4lev-complex",
];

/// Sweep-parameter axis: name plus uniform grid bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepAxis<T> {
    pub name: String,
    pub min: T,
    pub max: T,
    pub points: usize,
}

impl<T: Real> SweepAxis<T> {
    pub fn new(name: impl Into<String>, min: T, max: T, points: usize) -> Self {
        Self { name: name.into(), min, max, points }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Preset<T> {
    pub id: &'static str,
    pub spec: HamiltonianSpec<T>,
    pub axis: SweepAxis<T>,
    /// Which splitting the figure shows at its r → 1 point.
    pub bifurcation: Bifurcation,
}

pub const DEFAULT_POINTS: usize = 1001;

fn curve<T: Real>(intercept: f64, slope: f64) -> ParamCurve<T> {
    ParamCurve::new(lit(intercept), lit(slope))
}

fn flat<T: Real>(value: f64) -> ParamCurve<T> {
    ParamCurve::constant(lit(value))
}

fn omega<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(lit(re), lit(im))
}

fn two<T: Real>(
    e1: ParamCurve<T>,
    e2: ParamCurve<T>,
    g1: ParamCurve<T>,
    g2: ParamCurve<T>,
    w: Complex<T>,
) -> HamiltonianSpec<T> {
    build_two_level(e1, e2, g1, g2, w).expect("preset parameters are finite")
}

fn doorway<T: Real>(curves: &[(ParamCurve<T>, ParamCurve<T>)], w: Complex<T>) -> HamiltonianSpec<T> {
    let levels = curves.iter().map(|&(e, g)| Level::new(e, g)).collect();
    build_n_level(levels, w).expect("preset parameters are finite")
}

/// Looks up a preset by figure id.
pub fn preset<T: Real>(id: &str) -> Result<Preset<T>, ModelError> {
    use Bifurcation::{Level as Lvl, Width};

    let third = 2.0 / 3.0;
    // 0.05 (1/10 + i) and 0.05 (1 + i/10)
    let w4_left = omega(0.05 * 0.1, 0.05);
    let w4_right = omega(0.05, 0.05 * 0.1);

    let (spec, axis, min, max, bifurcation) = match id {
        "fig1a-d" => (
            two(flat(third), curve(third, 1.0), flat(-0.5), flat(-0.5), omega(0.0, 0.05)),
            "d", -0.3, 0.3, Width,
        ),
        "fig1e-h" => (
            two(flat(0.5), flat(0.5), flat(-0.5), curve(0.0, -0.5), omega(0.05, 0.0)),
            "a", 0.4, 1.6, Lvl,
        ),
        "fig2a-d" => (
            two(flat(third), curve(third, 1.0), flat(-0.5), flat(-0.55), omega(0.025, 0.025)),
            "d", -0.15, 0.25, Width,
        ),
        "fig2e-h" => (
            two(flat(0.55), flat(0.5), flat(-0.5), curve(0.0, -0.5), omega(0.025, 0.025)),
            "a", 0.4, 1.6, Lvl,
        ),
        "fig3a-d" => (
            two(flat(0.5), flat(0.5), curve(0.0, 0.05), curve(0.0, -0.05), omega(0.05, 0.0)),
            "a", -3.0, 3.0, Lvl,
        ),
        "fig3e-h" => (
            two(flat(0.55), flat(0.5), curve(0.0, 0.05), curve(0.0, -0.05), omega(0.025, 0.025)),
            "a", -1.5, 1.5, Lvl,
        ),
        "fig4a-e" => (
            two(flat(0.5), curve(0.0, 1.0), flat(-0.05), flat(-0.06), w4_left),
            "a", 0.2, 1.0, Width,
        ),
        "fig4f-j" => (
            two(flat(0.5), flat(0.51), flat(-0.5), curve(0.0, -0.3), w4_right),
            "a", 0.5, 3.5, Lvl,
        ),
        "fig5-2lev" => (
            doorway(&[(curve(1.0, -0.5), flat(-0.495)), (curve(0.0, 1.0), flat(-0.495))], omega(0.0, 0.01)),
            "a", 0.4, 0.95, Width,
        ),
        "fig5-3lev" => (
            doorway(
                &[
                    (curve(1.0, -0.5), flat(-0.495)),
                    (curve(0.0, 1.0), flat(-0.495)),
                    (curve(-1.0 / 3.0, 1.5), flat(-0.4853)),
                ],
                omega(0.0, 0.01),
            ),
            "a", 0.4, 0.95, Width,
        ),
        "fig6-2lev" => (
            doorway(&[(flat(0.5), flat(-0.5)), (curve(0.0, 1.0), flat(-0.51))], omega(0.005, 0.005)),
            "a", 0.4, 0.95, Width,
        ),
        "fig6-3lev" => (
            doorway(
                &[
                    (flat(0.5), flat(-0.5)),
                    (curve(0.0, 1.0), flat(-0.505)),
                    (curve(-0.5, 2.0), flat(-0.51)),
                ],
                omega(0.005, 0.005),
            ),
            "a", 0.4, 0.95, Width,
        ),
        "fig7-4lev-imag" => (
            doorway(
                &[
                    (curve(1.0, -0.5), flat(-0.495)),
                    (curve(0.0, 1.0), flat(-0.495)),
                    (curve(-1.0 / 3.0, 1.5), flat(-0.4853)),
                    (flat(third), flat(-0.495)),
                ],
                omega(0.0, 0.01),
            ),
            "a", 0.4, 0.95, Width,
        ),
        "fig7-4lev-complex" => (
            doorway(
                &[
                    (flat(0.5), flat(-0.5)),
                    (curve(0.0, 1.0), flat(-0.505)),
                    (curve(-0.5, 2.0), flat(-0.51)),
                    (curve(1.0, -1.0), flat(-0.505)),
                ],
                omega(0.005, 0.005),
            ),
            "a", 0.4, 0.95, Width,
        ),
        _ => {
            return Err(ModelError::UnknownPreset { id: id.to_string(), valid: PRESET_IDS.to_vec() })
        }
    };
    let id = PRESET_IDS.iter().copied().find(|p| *p == id).expect("matched above");
    Ok(Preset {
        id,
        spec,
        axis: SweepAxis::new(axis, lit(min), lit(max), DEFAULT_POINTS),
        bifurcation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn every_id_resolves() {
        for id in PRESET_IDS {
            let p = preset::<f64>(id).unwrap();
            assert_eq!(p.id, id);
            assert!(p.axis.min < p.axis.max);
            assert_eq!(p.axis.points, DEFAULT_POINTS);
        }
    }

    #[test]
    fn unknown_id_lists_valid_ones() {
        match preset::<f64>("fig9") {
            Err(ModelError::UnknownPreset { valid, .. }) => assert_eq!(valid.len(), 14),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fig1_left_parameters() {
        let p = preset::<f64>("fig1a-d").unwrap();
        assert_eq!(p.spec.coupling(), c(0.0, 0.05));
        assert_eq!(p.spec.half_widths_at(0.2), vec![-0.5, -0.5]);
    }

    #[test]
    fn fig1_right_symmetric_width_point() {
        let p = preset::<f64>("fig1e-h").unwrap();
        assert_eq!(p.spec.half_widths_at(1.0), vec![-0.5, -0.5]);
    }

    #[test]
    fn fig6_two_level_parameters() {
        let p = preset::<f64>("fig6-2lev").unwrap();
        assert_eq!(p.spec.coupling(), c(0.005, 0.005));
        assert_eq!(p.spec.half_widths_at(0.7), vec![-0.5, -0.51]);
        assert_eq!(p.spec.energies_at(0.7), vec![0.5, 0.7]);
    }

    #[test]
    fn fig3_gain_loss_pair() {
        let p = preset::<f64>("fig3a-d").unwrap();
        let m = p.spec.eval_at(1.0);
        assert_eq!(m.get(0, 0).im, 0.05);
        assert_eq!(m.get(1, 1).im, -0.05);
        assert_eq!(p.spec.coupling(), c(0.05, 0.0));
    }

    #[test]
    fn fig4_couplings() {
        let left = preset::<f64>("fig4a-e").unwrap().spec.coupling();
        let right = preset::<f64>("fig4f-j").unwrap().spec.coupling();
        assert!((left - c(0.005, 0.05)).norm() < 1e-17);
        assert!((right - c(0.05, 0.005)).norm() < 1e-17);
    }

    #[test]
    fn fig5_three_level_caption_values() {
        let p = preset::<f64>("fig5-3lev").unwrap();
        assert_eq!(p.spec.n(), 3);
        assert_eq!(p.spec.coupling(), c(0.0, 0.01));
        let a = 0.5;
        let e = p.spec.energies_at(a);
        assert_eq!(e[0], 1.0 - 0.5 * a);
        assert_eq!(e[1], a);
        assert!((e[2] - (-1.0 / 3.0 + 1.5 * a)).abs() < 1e-16);
        assert_eq!(p.spec.half_widths_at(a), vec![-0.495, -0.495, -0.4853]);
    }

    #[test]
    fn fig7_four_level_right_panel() {
        let p = preset::<f64>("fig7-4lev-complex").unwrap();
        assert_eq!(p.spec.n(), 4);
        assert_eq!(p.spec.half_widths_at(0.6), vec![-0.5, -0.505, -0.51, -0.505]);
        let e = p.spec.energies_at(0.6);
        assert_eq!(e[0], 0.5);
        assert_eq!(e[1], 0.6);
        assert!((e[2] - 0.7).abs() < 1e-15);
        assert!((e[3] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn every_preset_is_symmetric_over_its_range() {
        for id in PRESET_IDS {
            let p = preset::<f64>(id).unwrap();
            for k in 0..=20 {
                let a = p.axis.min + (p.axis.max - p.axis.min) * k as f64 / 20.0;
                let m = p.spec.eval_at(a);
                assert!(m.is_symmetric(), "{id} at {a}");
                let h = p.spec.half_widths_at(a);
                for (i, hi) in h.iter().enumerate() {
                    assert_eq!(m.get(i, i).im, *hi);
                }
            }
        }
    }

    #[test]
    fn single_precision_presets_build() {
        let p = preset::<f32>("fig2e-h").unwrap();
        assert_eq!(p.spec.n(), 2);
    }
}
