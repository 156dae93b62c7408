use garbage_game::{cheeger_check, SpectralReport};
use serde::Serialize;

use crate::config::GraphSource;
use crate::format::json_f64;
use crate::Result;

#[derive(Debug, Serialize)]
struct SpectralJson {
    n: usize,
    #[serde(serialize_with = "json_f64")]
    lambda2: f64,
    #[serde(serialize_with = "json_f64")]
    isoperimetric: f64,
    max_degree: usize,
    sandwich_ok: bool,
    #[serde(serialize_with = "json_f64")]
    lambda2_floor: f64,
    floor_ok: bool,
}

/// Spectral report for a connected graph of order at most 20, as JSON.
pub fn cmd_spectral(source: &GraphSource, seed: u64) -> Result<(SpectralReport, String)> {
    let g = source.load(seed)?;
    let report = cheeger_check(&g)?;
    let json = SpectralJson {
        n: report.order,
        lambda2: report.lambda2,
        isoperimetric: report.isoperimetric,
        max_degree: report.max_degree,
        sandwich_ok: report.sandwich_ok,
        lambda2_floor: report.lambda2_floor,
        floor_ok: report.floor_ok,
    };
    let mut text = serde_json::to_string_pretty(&json)?;
    text.push('\n');
    Ok((report, text))
}
