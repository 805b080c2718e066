//! Optional SVG renderings of the columnar plot data.

use std::path::Path;

use plotters::prelude::*;

use crate::error::{CliError, CliResult};

pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
}

fn bounds(series: &[Series], log: bool) -> Option<((f64, f64), (f64, f64))> {
    let pts = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x0 < x1) || !y0.is_finite() {
        return None;
    }
    if y0 == y1 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    if log {
        Some(((x0, x1), (y0, y1)))
    } else {
        let pad = 0.05 * (y1 - y0);
        Some(((x0, x1), (y0 - pad, y1 + pad)))
    }
}

/// Line chart of one or more series. With `log` both axes are logarithmic and
/// non-positive points are dropped.
pub fn write_svg(path: &Path, title: &str, x_label: &str, y_label: &str, series: Vec<Series>, log: bool) -> CliResult<()> {
    let series: Vec<Series> = series
        .into_iter()
        .map(|s| Series {
            label: s.label,
            points: s
                .points
                .into_iter()
                .filter(|&(x, y)| x.is_finite() && y.is_finite() && (!log || (x > 0.0 && y > 0.0)))
                .collect(),
        })
        .collect();
    let Some(((x0, x1), (y0, y1))) = bounds(&series, log) else {
        return Err(CliError::Runtime(format!("nothing to plot for {}", path.display())));
    };
    let draw = || -> Result<(), Box<dyn std::error::Error>> {
        let root = SVGBackend::new(path, (720, 480)).into_drawing_area();
        root.fill(&WHITE)?;
        let mut builder = ChartBuilder::on(&root);
        builder.caption(title, ("sans-serif", 18)).margin(12).x_label_area_size(40).y_label_area_size(64);
        let colors = [BLUE, RED, BLACK];
        macro_rules! body {
            ($chart:expr) => {{
                let mut chart = $chart;
                chart.configure_mesh().x_desc(x_label).y_desc(y_label).draw()?;
                for (i, s) in series.iter().enumerate() {
                    let color = colors[i % colors.len()];
                    chart
                        .draw_series(LineSeries::new(s.points.iter().copied(), &color))?
                        .label(s.label)
                        .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], color));
                }
                chart.configure_series_labels().background_style(WHITE.mix(0.8)).border_style(BLACK).draw()?;
            }};
        }
        if log {
            body!(builder.build_cartesian_2d((x0..x1).log_scale(), (y0..y1).log_scale())?);
        } else {
            body!(builder.build_cartesian_2d(x0..x1, y0..y1)?);
        }
        root.present()?;
        Ok(())
    };
    draw().map_err(|e| CliError::Runtime(format!("plotting {}: {e}", path.display())))
}
