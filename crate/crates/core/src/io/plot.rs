use std::fmt::Write;

use super::csv::CsvLayout;
use crate::sweep::OutputColumns;

/// Gnuplot script drawing `E`, `Γ/2`, `r` and `1 − r` against the sweep
/// parameter from `csv_name`, one panel each.
pub fn plot_script(title: &str, csv_name: &str, axis_name: &str, n: usize, columns: &OutputColumns) -> String {
    let layout = CsvLayout::new(n, columns);
    let panels: Vec<(&str, Option<usize>, bool)> = vec![
        ("E_k", layout.energies, false),
        ("Gamma_k/2", layout.widths, false),
        ("r_k", layout.rigidity, false),
        ("1 - r_k", layout.one_minus_r, true),
    ];
    let panels: Vec<_> = panels.into_iter().filter_map(|(label, col, log)| col.map(|c| (label, c, log))).collect();

    let mut s = String::new();
    let _ = writeln!(s, "# usage: gnuplot -p {title}.plot");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set xlabel '{axis_name}'");
    let _ = writeln!(s, "set multiplot layout {},1 title '{title}'", panels.len().max(1));
    for (label, first, log) in &panels {
        let _ = writeln!(s, "set ylabel '{label}'");
        if *log {
            let _ = writeln!(s, "set logscale y");
        }
        let curves: Vec<String> = (0..n)
            .map(|k| format!("'{csv_name}' using 1:{} with lines lw 2", first + k))
            .collect();
        let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
        if *log {
            let _ = writeln!(s, "unset logscale y");
        }
    }
    let _ = writeln!(s, "unset multiplot");
    s
}
