//! Distance matrix between each input and the five colored-noise
//! references, seed-averaged, with the per-row nearest noise flagged.

use anyhow::Result;
use noiseplane::complexity::mean_pjsd_to_noise;
use noiseplane::ingest::Window;
use noiseplane::noise::DISTANCE_REFERENCES;
use noiseplane::ordinal::{default_dimension, OrdinalConfig};

use crate::args::OutputFormat;
use crate::commands::{ensure_out_dir, load_inputs, windowed};
use crate::config::RunConfig;
use crate::output::{format_sig, write_csv, write_json};

pub fn run(config: &RunConfig) -> Result<()> {
    let inputs = load_inputs(config)?;
    ensure_out_dir(config)?;
    let window = config.windows_or(&[Window::Full])[0];
    let d = config.dimension.unwrap_or(default_dimension(window));
    let ordinal = OrdinalConfig::new(d).map_err(anyhow::Error::from)?;
    let seeds = config.seed_list();

    struct Row {
        series: String,
        distances: Vec<f64>,
        argmin: &'static str,
    }

    let mut rows = Vec::with_capacity(inputs.len());
    for series in &inputs {
        let segment = windowed(series, window, config)?;
        let mut distances = Vec::with_capacity(DISTANCE_REFERENCES.len());
        for reference in DISTANCE_REFERENCES {
            distances.push(mean_pjsd_to_noise(
                &segment,
                reference.alpha,
                &ordinal,
                &seeds,
            )?);
        }
        let argmin = distances
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite distances"))
            .map(|(i, _)| DISTANCE_REFERENCES[i].label)
            .expect("at least one reference");
        rows.push(Row {
            series: series.name().to_string(),
            distances,
            argmin,
        });
    }

    match config.format {
        OutputFormat::Csv => {
            let mut header = vec!["series"];
            header.extend(DISTANCE_REFERENCES.iter().map(|r| r.label));
            header.push("argmin");
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|row| {
                    let mut record = vec![row.series.clone()];
                    record.extend(row.distances.iter().map(|d| format_sig(*d)));
                    record.push(row.argmin.to_string());
                    record
                })
                .collect();
            write_csv(&config.out.join("pjsd_matrix.csv"), &header, &table)?;
        }
        OutputFormat::Json => {
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let mut object = serde_json::Map::new();
                    object.insert("series".into(), row.series.clone().into());
                    for (reference, distance) in DISTANCE_REFERENCES.iter().zip(&row.distances) {
                        object.insert(reference.label.into(), (*distance).into());
                    }
                    object.insert("argmin".into(), row.argmin.into());
                    serde_json::Value::Object(object)
                })
                .collect();
            write_json(
                &config.out.join("pjsd_matrix.json"),
                &serde_json::json!({
                    "window": window.label(),
                    "d": d,
                    "seeds": seeds.len(),
                    "rows": json_rows,
                }),
            )?;
        }
    }
    Ok(())
}
