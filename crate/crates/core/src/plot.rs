//! Static SVG regret plots: median line and shaded quantile band per policy,
//! log-scaled round axis.

use std::path::Path;

use plotters::prelude::*;

use crate::error::{Error, Result};
use crate::simulator::AggregateResult;

const PALETTE: [RGBColor; 6] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(44, 160, 44),
    RGBColor(255, 127, 14),
    RGBColor(148, 103, 189),
    RGBColor(140, 86, 75),
];

/// Roughly `points` log-spaced rounds in `1..=horizon`, always including both
/// ends.
fn log_grid(horizon: u64, points: usize) -> Vec<u64> {
    let mut out: Vec<u64> = (0..points)
        .map(|i| {
            let f = i as f64 / (points.max(2) - 1) as f64;
            ((horizon as f64).powf(f).round() as u64).clamp(1, horizon)
        })
        .collect();
    out.push(horizon);
    out.dedup();
    out
}

fn plot_err(e: impl std::fmt::Display) -> Error {
    Error::Plot(e.to_string())
}

/// Writes one chart with a line and band per `(label, aggregate)`.
pub fn write_regret_plot(path: &Path, series: &[(String, &AggregateResult)]) -> Result<()> {
    let horizon = series.iter().map(|(_, a)| a.horizon).max().unwrap_or(1).max(2);
    let y_max = series
        .iter()
        .flat_map(|(_, a)| a.upper.iter().copied())
        .fold(0.0f64, f64::max)
        .max(1e-9)
        * 1.05;

    let root = SVGBackend::new(path, (960, 600)).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption("Cumulative pseudo-regret (median, 2.5-97.5% band)", ("sans-serif", 20))
        .margin(16)
        .margin_right(40)
        .x_label_area_size(44)
        .y_label_area_size(72)
        .build_cartesian_2d((1f64..horizon as f64).log_scale(), 0f64..y_max)
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc("round")
        .y_desc("regret")
        .x_label_formatter(&|x| format!("{x:.0}"))
        .y_label_formatter(&|y| format!("{y:.0}"))
        .draw()
        .map_err(plot_err)?;

    for (i, (label, agg)) in series.iter().enumerate() {
        if agg.median.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let grid = log_grid(agg.horizon, 400);
        let at = |v: &[f64], t: u64| v[t as usize - 1];
        let mut band: Vec<(f64, f64)> = grid.iter().map(|&t| (t as f64, at(&agg.upper, t))).collect();
        band.extend(grid.iter().rev().map(|&t| (t as f64, at(&agg.lower, t))));
        chart
            .draw_series(std::iter::once(Polygon::new(band, color.mix(0.18))))
            .map_err(plot_err)?;
        chart
            .draw_series(LineSeries::new(
                grid.iter().map(|&t| (t as f64, at(&agg.median, t))),
                color.stroke_width(2),
            ))
            .map_err(plot_err)?
            .label(label.as_str())
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 24, y)], color.stroke_width(2)));
    }
    chart
        .configure_series_labels()
        .position(SeriesLabelPosition::UpperLeft)
        .background_style(WHITE.mix(0.85))
        .border_style(BLACK)
        .draw()
        .map_err(plot_err)?;
    root.present().map_err(plot_err)?;
    Ok(())
}
