//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes plain numbers and returns a JSON document, so the page
//! needs no bindings beyond strings.

use qtst_core::experiments::{
    linspace, rate_compare, sweep_arrival_time, sweep_frequency, RateParams, Sampling, SweepResult,
};
use qtst_core::nv::StrainParams;
use qtst_core::protocol::NoiseParams;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
struct Curves {
    x: Vec<f64>,
    series: Vec<(String, Vec<f64>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    crossover_eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    crossover_length_km: Option<f64>,
}

impl From<SweepResult> for Curves {
    fn from(s: SweepResult) -> Self {
        Self {
            series: s
                .series
                .iter()
                .map(|x| (x.name.clone(), x.values()))
                .collect(),
            x: s.axis,
            crossover_eta: None,
            crossover_length_km: None,
        }
    }
}

fn noise(
    sigma_f: f64,
    sigma_t: f64,
    prep_fidelity: f64,
    p_spam: f64,
    delta_perp: f64,
) -> NoiseParams {
    NoiseParams {
        sigma_f,
        sigma_t,
        prep_fidelity,
        p_spam,
        strain: StrainParams {
            delta_perp,
            ..StrainParams::default()
        },
        ..NoiseParams::measured()
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain numbers serialize")
}

/// Six-input fidelity and herald probability over ±`span_mhz`.
pub fn frequency_sweep_json(
    span_mhz: f64,
    sigma_f: f64,
    prep_fidelity: f64,
    p_spam: f64,
    delta_perp: f64,
) -> Result<String, String> {
    let np = noise(
        sigma_f,
        NoiseParams::measured().sigma_t,
        prep_fidelity,
        p_spam,
        delta_perp,
    );
    let grid = linspace(-span_mhz.abs(), span_mhz.abs(), 81);
    let sweep = sweep_frequency(&grid, &np, &Sampling::exact()).map_err(|e| e.to_string())?;
    Ok(to_json(&Curves::from(sweep)))
}

/// Basis and superposition fidelity from 0 to `max_delay_us`.
pub fn arrival_sweep_json(
    max_delay_us: f64,
    sigma_t: f64,
    prep_fidelity: f64,
    p_spam: f64,
    delta_perp: f64,
) -> Result<String, String> {
    let np = noise(
        NoiseParams::measured().sigma_f,
        sigma_t,
        prep_fidelity,
        p_spam,
        delta_perp,
    );
    let grid = linspace(0.0, max_delay_us.max(0.0), 61);
    let sweep = sweep_arrival_time(&grid, &np, &Sampling::exact()).map_err(|e| e.to_string())?;
    Ok(to_json(&Curves::from(sweep)))
}

/// One- and two-photon rates from 0 to `max_length_km`.
pub fn rate_comparison_json(
    max_length_km: f64,
    p_zpl: f64,
    attenuation_db_per_km: f64,
    repetition_rate_hz: f64,
) -> Result<String, String> {
    let rp = RateParams {
        p_zpl,
        attenuation_db_per_km,
        repetition_rate: repetition_rate_hz,
        length_km: max_length_km,
    };
    let grid = linspace(0.0, max_length_km.max(0.0), 101);
    let cmp = rate_compare(&grid, &rp).map_err(|e| e.to_string())?;
    let mut curves = Curves::from(cmp.sweep);
    curves.crossover_eta = Some(cmp.crossover_eta);
    curves.crossover_length_km = cmp.crossover_length_km;
    Ok(to_json(&curves))
}

#[wasm_bindgen]
pub fn frequency_sweep(
    span_mhz: f64,
    sigma_f: f64,
    prep_fidelity: f64,
    p_spam: f64,
    delta_perp: f64,
) -> Result<String, JsError> {
    frequency_sweep_json(span_mhz, sigma_f, prep_fidelity, p_spam, delta_perp)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn arrival_sweep(
    max_delay_us: f64,
    sigma_t: f64,
    prep_fidelity: f64,
    p_spam: f64,
    delta_perp: f64,
) -> Result<String, JsError> {
    arrival_sweep_json(max_delay_us, sigma_t, prep_fidelity, p_spam, delta_perp)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn rate_comparison(
    max_length_km: f64,
    p_zpl: f64,
    attenuation_db_per_km: f64,
    repetition_rate_hz: f64,
) -> Result<String, JsError> {
    rate_comparison_json(
        max_length_km,
        p_zpl,
        attenuation_db_per_km,
        repetition_rate_hz,
    )
    .map_err(|e| JsError::new(&e))
}
