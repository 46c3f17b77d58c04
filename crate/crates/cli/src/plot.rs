//! Log-log SVG of measured error and bound against r_σ.

use std::path::Path;

use anyhow::{anyhow, Result};
use plotters::prelude::*;

use mps_core::study::StudyRow;

const COLORS: [RGBColor; 4] = [
    RGBColor(31, 119, 180),
    RGBColor(255, 127, 14),
    RGBColor(44, 160, 44),
    RGBColor(214, 39, 40),
];

fn span(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values
        .filter(|v| *v > 0.0 && v.is_finite())
        .fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((f64::min(lo, v), f64::max(hi, v))),
        })
        .map(|(lo, hi)| {
            if lo == hi {
                (lo / 2.0, hi * 2.0)
            } else {
                (lo / 1.5, hi * 1.5)
            }
        })
}

/// Filled dots are measured errors, hollow dots the bounds; one colour per
/// operator. Zero errors are omitted.
pub fn error_vs_r_sigma(path: &Path, rows: &[StudyRow]) -> Result<()> {
    let (x0, x1) = span(rows.iter().map(|r| r.r_sigma)).ok_or_else(|| anyhow!("no r_σ to plot"))?;
    let (y0, y1) = span(rows.iter().flat_map(|r| [r.error, r.rhs])).unwrap_or((1e-16, 1.0));
    let root = SVGBackend::new(path, (900, 620)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| anyhow!("{e:?}"))?;
    let mut chart = ChartBuilder::on(&root)
        .caption("operator error and bound against r_σ", ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(70)
        .build_cartesian_2d((x0..x1).log_scale(), (y0..y1).log_scale())
        .map_err(|e| anyhow!("{e:?}"))?;
    chart
        .configure_mesh()
        .x_desc("r_σ")
        .y_desc("error, bound")
        .draw()
        .map_err(|e| anyhow!("{e:?}"))?;
    let mut operators: Vec<&str> = rows.iter().map(|r| r.operator.as_str()).collect();
    operators.sort();
    operators.dedup();
    for (i, op) in operators.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mine = || rows.iter().filter(move |r| r.operator == *op);
        chart
            .draw_series(
                mine()
                    .filter(|r| r.error > 0.0)
                    .map(|r| Circle::new((r.r_sigma, r.error), 4, color.filled())),
            )
            .map_err(|e| anyhow!("{e:?}"))?
            .label(*op)
            .legend(move |(x, y)| Circle::new((x, y), 4, color.filled()));
        chart
            .draw_series(
                mine()
                    .filter(|r| r.rhs > 0.0)
                    .map(|r| Circle::new((r.r_sigma, r.rhs), 5, color.stroke_width(1))),
            )
            .map_err(|e| anyhow!("{e:?}"))?;
    }
    chart
        .configure_series_labels()
        .border_style(BLACK)
        .background_style(WHITE.mix(0.8))
        .draw()
        .map_err(|e| anyhow!("{e:?}"))?;
    root.present().map_err(|e| anyhow!("{e:?}"))?;
    Ok(())
}
