//! Complexity-entropy plane emission: one point set per window containing
//! every input series plus the four noise references, with the extremal
//! boundary curves alongside.

use anyhow::Result;
use noiseplane::complexity::{ch_boundaries, statistical_complexity, ChPoint};
use noiseplane::ingest::Window;
use noiseplane::noise::{generate, NoiseSpec, CH_PLANE_REFERENCES};
use noiseplane::ordinal::{default_dimension, extract_patterns, OrdinalConfig};

use crate::args::OutputFormat;
use crate::commands::{ensure_out_dir, load_inputs, windowed};
use crate::config::RunConfig;
use crate::output::{format_sig, write_csv, write_json};

const BOUNDARY_RESOLUTION: usize = 256;

pub fn run(config: &RunConfig) -> Result<()> {
    let inputs = load_inputs(config)?;
    ensure_out_dir(config)?;
    let windows = config.windows_or(&[Window::ThreeYears, Window::OneYear, Window::SixMonths]);

    for window in windows {
        let d = config.dimension.unwrap_or(default_dimension(window));
        let ordinal = OrdinalConfig::new(d).map_err(anyhow::Error::from)?;

        let mut labeled: Vec<(String, ChPoint)> = Vec::new();
        let mut reference_len = 0usize;
        for series in &inputs {
            let segment = windowed(series, window, config)?;
            reference_len = reference_len.max(segment.len());
            let dist = extract_patterns(&segment, &ordinal)?;
            labeled.push((series.name().to_string(), statistical_complexity(&dist)));
        }

        // Noise references regenerated per (window length, d), averaged
        // over the configured seeds.
        for reference in CH_PLANE_REFERENCES {
            let mut sum_h = 0.0;
            let mut sum_c = 0.0;
            let seeds = config.seed_list();
            for &seed in &seeds {
                let noise = generate(&NoiseSpec {
                    alpha: reference.alpha,
                    length: reference_len,
                    seed,
                });
                let dist = extract_patterns(&noise, &ordinal)?;
                let point = statistical_complexity(&dist);
                sum_h += point.h;
                sum_c += point.c;
            }
            let n = seeds.len() as f64;
            labeled.push((
                reference.label.to_string(),
                ChPoint { h: sum_h / n, c: sum_c / n },
            ));
        }

        let (min_curve, max_curve) = ch_boundaries(d, BOUNDARY_RESOLUTION);
        let label = window.label();
        match config.format {
            OutputFormat::Csv => {
                let rows: Vec<Vec<String>> = labeled
                    .iter()
                    .map(|(name, p)| vec![name.clone(), format_sig(p.h), format_sig(p.c)])
                    .collect();
                write_csv(
                    &config.out.join(format!("chplane_{label}.csv")),
                    &["label", "h", "c"],
                    &rows,
                )?;
                for (curve, kind) in [(&min_curve, "min"), (&max_curve, "max")] {
                    let rows: Vec<Vec<String>> = curve
                        .points
                        .iter()
                        .map(|(h, c)| vec![format_sig(*h), format_sig(*c)])
                        .collect();
                    write_csv(
                        &config.out.join(format!("chplane_{label}_boundary_{kind}.csv")),
                        &["h", "c"],
                        &rows,
                    )?;
                }
            }
            OutputFormat::Json => {
                let points: Vec<serde_json::Value> = labeled
                    .iter()
                    .map(|(name, p)| {
                        serde_json::json!({ "label": name, "h": p.h, "c": p.c })
                    })
                    .collect();
                let curve_json = |curve: &noiseplane::BoundaryCurve| {
                    curve
                        .points
                        .iter()
                        .map(|(h, c)| serde_json::json!([h, c]))
                        .collect::<Vec<_>>()
                };
                write_json(
                    &config.out.join(format!("chplane_{label}.json")),
                    &serde_json::json!({
                        "window": label,
                        "d": d,
                        "points": points,
                        "boundary_min": curve_json(&min_curve),
                        "boundary_max": curve_json(&max_curve),
                    }),
                )?;
            }
        }
    }
    Ok(())
}
