use std::io::{self, Write};

use crate::scalar::Real;
use crate::sweep::{OutputColumns, SweepResult, SweepRow};

/// Column names plus the 1-based position of each per-state group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvLayout {
    pub names: Vec<String>,
    pub energies: Option<usize>,
    pub widths: Option<usize>,
    pub rigidity: Option<usize>,
    pub one_minus_r: Option<usize>,
}

impl CsvLayout {
    pub fn new(n: usize, columns: &OutputColumns) -> Self {
        let mut names = vec!["a".to_string()];
        let group = |on: bool, prefix: &str, names: &mut Vec<String>| {
            on.then(|| {
                let first = names.len() + 1;
                names.extend((1..=n).map(|k| format!("{prefix}_{k}")));
                first
            })
        };
        let energies = group(columns.energies, "E", &mut names);
        let widths = group(columns.widths, "G2", &mut names);
        let rigidity = group(columns.rigidity, "r", &mut names);
        let one_minus_r = group(columns.one_minus_r, "one_minus_r", &mut names);
        group(columns.norm_a, "A", &mut names);
        if columns.overlaps {
            for i in 1..=n {
                for j in i + 1..=n {
                    names.push(format!("B_{i}{j}"));
                }
            }
        }
        if columns.mixing {
            for k in 1..=n {
                for l in 1..=n {
                    names.push(format!("b_{k}{l}"));
                }
            }
        }
        if columns.flags {
            names.push("flags".into());
        }
        Self { names, energies, widths, rigidity, one_minus_r }
    }
}

pub fn csv_header(n: usize, columns: &OutputColumns) -> String {
    CsvLayout::new(n, columns).names.join(",")
}

fn num<T: Real>(x: T) -> String {
    format!("{x:.16e}")
}

fn row_fields<T: Real>(row: &SweepRow<T>, n: usize, columns: &OutputColumns) -> Vec<String> {
    let nan = || num(T::nan());
    let mut out = vec![num(row.a)];
    let states = row.decomposition.as_ref().map(|d| d.states.as_slice());
    let obs = row.observables.as_ref();
    let mut per_state = |on: bool, f: &dyn Fn(usize) -> Option<T>| {
        if on {
            out.extend((0..n).map(|k| f(k).map(num).unwrap_or_else(nan)));
        }
    };
    per_state(columns.energies, &|k| states.map(|s| s[k].energy()));
    per_state(columns.widths, &|k| states.map(|s| s[k].half_width()));
    per_state(columns.rigidity, &|k| obs.map(|o| o.r[k]));
    per_state(columns.one_minus_r, &|k| obs.map(|o| T::one() - o.r[k]));
    per_state(columns.norm_a, &|k| obs.map(|o| o.norm_a[k]));
    if columns.overlaps {
        for i in 0..n {
            for j in i + 1..n {
                out.push(obs.map(|o| num(o.b_abs[i][j])).unwrap_or_else(nan));
            }
        }
    }
    if columns.mixing {
        for k in 0..n {
            for l in 0..n {
                out.push(obs.map(|o| num(o.mixing[k][l])).unwrap_or_else(nan));
            }
        }
    }
    if columns.flags {
        out.push(row.flags.code());
    }
    out
}

/// One header line, then one line per row; numbers carry 17 significant digits.
pub fn write_csv<T: Real, W: Write>(mut w: W, result: &SweepResult<T>) -> io::Result<()> {
    let n = result.n();
    let columns = &result.config.columns;
    writeln!(w, "{}", csv_header(n, columns))?;
    for row in &result.rows {
        writeln!(w, "{}", row_fields(row, n, columns).join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::preset;
    use crate::sweep::{run_sweep, SweepConfig};

    #[test]
    fn header_layout() {
        let h = csv_header(2, &OutputColumns::default());
        assert_eq!(
            h,
            "a,E_1,E_2,G2_1,G2_2,r_1,r_2,one_minus_r_1,one_minus_r_2,A_1,A_2,B_12,b_11,b_12,b_21,b_22,flags"
        );
        let l = CsvLayout::new(2, &OutputColumns::default());
        assert_eq!((l.energies, l.widths, l.rigidity, l.one_minus_r), (Some(2), Some(4), Some(6), Some(8)));
    }

    #[test]
    fn four_states_have_sixteen_mixing_columns() {
        let h = csv_header(4, &OutputColumns::default());
        assert_eq!(h.split(',').filter(|c| c.starts_with("b_")).count(), 16);
        assert_eq!(h.split(',').filter(|c| c.starts_with("B_")).count(), 6);
    }

    #[test]
    fn column_selection() {
        let cols = OutputColumns { mixing: false, overlaps: false, norm_a: false, ..OutputColumns::default() };
        let l = CsvLayout::new(3, &cols);
        assert_eq!(l.names.len(), 1 + 4 * 3 + 1);
    }

    #[test]
    fn rows_are_rectangular() {
        let mut cfg = SweepConfig::from_preset(&preset::<f64>("fig1a-d").unwrap());
        cfg.axis.points = 51;
        let res = run_sweep(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &res).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let widths: Vec<usize> = text.lines().map(|l| l.split(',').count()).collect();
        assert_eq!(widths.len(), res.rows.len() + 1);
        assert!(widths.iter().all(|&w| w == widths[0]));
        let first = text.lines().nth(1).unwrap();
        assert!(first.starts_with("-2.9999999999999999e-1,"), "{first}");
    }
}
